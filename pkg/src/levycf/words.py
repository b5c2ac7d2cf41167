"""Mechanical, Christoffel, and standard words over a two-letter alphabet.

Letters are stored as the integers a, b themselves so that words feed
straight into the continuant algebra.  Slopes are either exact rationals
(fractions.Fraction) or continued-fraction digit lists (SlopeCF, encoding
theta = [0; 1+d1, d2, d3, ...]).  All word generation is exact integer
arithmetic; irrational slopes go through a convergent approximation whose
floor evaluations carry an explicit ambiguity check.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .continuants import Word, as_word, continuant
from .errors import (
    FloorPrecisionError,
    InsufficientDigitsError,
    InvalidWordError,
    NotAFactorError,
)


@dataclass(frozen=True)
class Alphabet:
    """Ordered pair of distinct positive integers a < b."""

    a: int
    b: int

    def __post_init__(self):
        if not (isinstance(self.a, int) and isinstance(self.b, int)):
            raise TypeError("alphabet letters must be integers")
        if not 1 <= self.a < self.b:
            raise ValueError(f"alphabet requires 1 <= a < b, got a={self.a}, b={self.b}")

    @property
    def c(self) -> float:
        """Max continuant distortion ratio between the two letters."""
        return self.b / self.a


@dataclass(frozen=True)
class SlopeCF:
    """Slope given by continued-fraction digits: theta = [0; 1+d1, d2, d3, ...].

    `digits` is the known finite prefix d1, d2, ...; `repeat` optionally marks
    an eventually-periodic tail, which covers quadratic slopes (for example
    the golden slope is SlopeCF((), repeat=(1,))).  Every digit must be >= 1.
    """

    digits: tuple
    repeat: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(self.digits))
        object.__setattr__(self, "repeat", tuple(self.repeat))
        for d in self.digits + self.repeat:
            if not isinstance(d, int) or isinstance(d, bool) or d < 1:
                raise ValueError(f"slope digits must be positive integers, got {d!r}")
        if not self.digits and not self.repeat:
            raise ValueError("slope needs at least one digit")

    def digit(self, i: int) -> int:
        """d_i, 1-based; raises InsufficientDigitsError past the known digits."""
        if i < 1:
            raise ValueError("digit index is 1-based")
        if i <= len(self.digits):
            return self.digits[i - 1]
        if self.repeat:
            return self.repeat[(i - len(self.digits) - 1) % len(self.repeat)]
        raise InsufficientDigitsError(f"slope digit d_{i} unknown (only {len(self.digits)} given)")

    def convergents(self) -> Iterator[tuple]:
        """Yield (k, p_k, q_k) for k = 0, 1, 2, ... starting at 0/1.

        The partial quotients of theta are 1+d1, d2, d3, ..., so q_1 = 1 + d1
        and |M_k| = q_k matches the standard-word recursion.
        """
        p_prev, q_prev = 1, 0
        p, q = 0, 1
        yield 0, p, q
        k = 0
        while True:
            k += 1
            e = self.digit(k) + (1 if k == 1 else 0)
            p, p_prev = e * p + p_prev, p
            q, q_prev = e * q + q_prev, q
            yield k, p, q

    def convergent(self, k: int) -> tuple:
        """(p_k, q_k)."""
        for j, p, q in self.convergents():
            if j == k:
                return p, q
        raise AssertionError("unreachable")

    def convergent_exceeding(self, bound) -> tuple:
        """First (k, p_k, q_k) with q_k > bound."""
        for k, p, q in self.convergents():
            if q > bound:
                return k, p, q
        raise AssertionError("unreachable")

    def theta(self) -> float:
        """Float approximation of the slope (for display, never for words)."""
        last = (0, 1)
        try:
            for _, p, q in self.convergents():
                last = (p, q)
                if q > 2**40:
                    break
        except InsufficientDigitsError:
            pass
        return last[0] / last[1]


@dataclass(frozen=True)
class Morphism:
    """Substitution on {a, b} into words of positive integers."""

    alphabet: Alphabet
    image_a: Word
    image_b: Word

    def __post_init__(self):
        object.__setattr__(self, "image_a", as_word(self.image_a))
        object.__setattr__(self, "image_b", as_word(self.image_b))
        if not self.image_a or not self.image_b:
            raise ValueError("morphism images must be nonempty")
        if self.image_a + self.image_b == self.image_b + self.image_a:
            raise ValueError("morphism images must not commute (phi(ab) == phi(ba))")

    @property
    def h(self) -> int:
        return max(len(self.image_a), len(self.image_b))

    @property
    def c_phi(self) -> float:
        ka, kb = continuant(self.image_a), continuant(self.image_b)
        return max(ka / kb, kb / ka)


def _check_rho(rho) -> Fraction:
    if isinstance(rho, float):
        raise TypeError("rho must be an exact rational (int or Fraction), not float")
    rho = Fraction(rho)
    if not 0 <= rho < 1:
        raise ValueError(f"rho must lie in [0, 1), got {rho}")
    return rho


def _check_slope_fraction(theta: Fraction) -> Fraction:
    theta = Fraction(theta)
    if not 0 <= theta <= 1:
        raise ValueError(f"rational slope must lie in [0, 1], got {theta}")
    return theta


def _floors_rational(p, q, u, v, n):
    # floor(m*p/q + u/v) for m = 0..n, exact.
    den = q * v
    return [(m * p * v + u * q) // den for m in range(n + 1)]


def _ceils_rational(p, q, u, v, n):
    den = q * v
    return [-((-(m * p * v + u * q)) // den) for m in range(n + 1)]


def _floors_near_convergent(p, q, u, v, n):
    """Floors of m*(p/q) + u/v for m = 0..n, or the first ambiguous m.

    The true slope theta satisfies |theta - p/q| < 1/q^2, so floor(m*theta + rho)
    equals the rational floor whenever the fractional part keeps a margin of
    m/q^2 from both integer boundaries.  Returns (floors, None) on success and
    (None, m) on the first ambiguity.
    """
    den = q * v
    q2 = q * q
    floors = []
    for m in range(n + 1):
        num = m * p * v + u * q
        fl, rem = divmod(num, den)
        margin = m * den
        if rem * q2 < margin or (den - rem) * q2 < margin:
            return None, m
        floors.append(fl)
    return floors, None


_MAX_REFINEMENTS = 5


def _floors_irrational(slope: SlopeCF, rho: Fraction, n: int):
    u, v = rho.numerator, rho.denominator
    k, p, q = slope.convergent_exceeding(2 * n * n)
    bad = None
    for _ in range(_MAX_REFINEMENTS + 1):
        floors, bad = _floors_near_convergent(p, q, u, v, n)
        if floors is not None:
            return floors
        k, p, q = slope.convergent(k + 1)
    raise FloorPrecisionError(bad)


def _letters_from_floors(floors, alphabet: Alphabet) -> Word:
    out = []
    for m in range(1, len(floors)):
        d = floors[m] - floors[m - 1]
        out.append(alphabet.b if d else alphabet.a)
    return tuple(out)


def mechanical_lower(theta, rho, n: int, alphabet: Alphabet) -> Word:
    """First n letters of the lower mechanical word s_{theta,rho}.

    Letter m is b when floor(m*theta + rho) - floor((m-1)*theta + rho) = 1,
    else a.  Exact for rational slopes; irrational slopes (SlopeCF) are
    evaluated through a convergent with q > 2n^2, refining on any floor that
    comes within the approximation margin of an integer.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rho = _check_rho(rho)
    if isinstance(theta, SlopeCF):
        floors = _floors_irrational(theta, rho, n)
    else:
        theta = _check_slope_fraction(theta)
        floors = _floors_rational(theta.numerator, theta.denominator, rho.numerator, rho.denominator, n)
    return _letters_from_floors(floors, alphabet)


def mechanical_upper(theta, rho, n: int, alphabet: Alphabet) -> Word:
    """Upper mechanical word s'_{theta,rho}: same formula with ceilings."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rho = _check_rho(rho)
    if isinstance(theta, SlopeCF):
        # m*theta + rho is irrational for m >= 1, so ceil = floor + 1 there;
        # the m = 0 term is ceil(rho), which is exact.
        floors = _floors_irrational(theta, rho, n)
        ceils = [0 if rho == 0 else 1] + [f + 1 for f in floors[1:]]
    else:
        theta = _check_slope_fraction(theta)
        ceils = _ceils_rational(theta.numerator, theta.denominator, rho.numerator, rho.denominator, n)
    return _letters_from_floors(ceils, alphabet)


def christoffel(pq: Fraction, alphabet: Alphabet) -> Word:
    """Lower Christoffel word of slope p/q: the length-q prefix of s_{p/q,0}."""
    pq = _check_slope_fraction(pq)
    p, q = pq.numerator, pq.denominator
    return tuple(alphabet.b if (m * p) // q - ((m - 1) * p) // q else alphabet.a for m in range(1, q + 1))


def fraction_cf(pq: Fraction) -> tuple:
    """Canonical continued fraction of p/q in [0, 1]: p/q = [0; c1, c2, ...].

    Plain Euclidean algorithm; the last quotient is >= 2 whenever q >= 2,
    and 0/1 gives the empty tuple.
    """
    pq = Fraction(pq)
    p, q = pq.numerator, pq.denominator
    if not 0 <= p <= q:
        raise ValueError(f"fraction must lie in [0, 1], got {pq}")
    digits = []
    while p:
        c, rem = divmod(q, p)
        digits.append(c)
        q, p = p, rem
    return tuple(digits)


def stern_brocot_parents(pq: Fraction) -> tuple:
    """Farey parents (lower, upper) of a reduced fraction with q >= 2.

    The returned pair satisfies lower < p/q < upper, has p/q as its mediant,
    and each pairing with p/q has cross-determinant +-1.
    """
    pq = Fraction(pq)
    p, q = pq.numerator, pq.denominator
    if q < 2:
        raise ValueError(f"{pq} has no Stern-Brocot parents (q < 2)")
    if not 0 <= p <= q:
        raise ValueError(f"fraction must lie in [0, 1], got {pq}")
    s = pow(p, -1, q)
    r = (p * s - 1) // q
    return Fraction(r, s), Fraction(p - r, q - s)


def standard_factorization(pq: Fraction, alphabet: Alphabet) -> tuple:
    """Split w_{p/q} into the Christoffel words of its Farey parents.

    Returns (left, right) with left = w_{lower parent}, right = w_{upper
    parent} and left + right == christoffel(pq).
    """
    lower, upper = stern_brocot_parents(pq)
    return christoffel(lower, alphabet), christoffel(upper, alphabet)


def standard_words(slope: SlopeCF, k_max: int, alphabet: Alphabet) -> list:
    """Standard words M_{-1}, M_0, ..., M_{k_max} of the slope.

    M_{-1} = b, M_0 = a, M_n = M_{n-1}^{d_n} M_{n-2}; entry [k+1] of the
    returned list is M_k, and len(M_k) == q_k.
    """
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    ms = [(alphabet.b,), (alphabet.a,)]
    for k in range(1, k_max + 1):
        ms.append(ms[-1] * slope.digit(k) + ms[-2])
    return ms


def _standard_words_spanning(slope: SlopeCF, length: int, alphabet: Alphabet) -> list:
    ms = [(alphabet.b,), (alphabet.a,)]
    k = 0
    while len(ms[-1]) <= length:
        k += 1
        ms.append(ms[-1] * slope.digit(k) + ms[-2])
    return ms


def sturmian_prefix(slope: SlopeCF, n: int, alphabet: Alphabet) -> Word:
    """First n letters of s_{theta,0}, exactly.

    Uses the fact that w_{p_k/q_k} agrees with s_{theta,0} on its first
    q_k - 1 letters, taking the first convergent with q_k > n + 1.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    _, p, q = slope.convergent_exceeding(n + 1)
    return christoffel(Fraction(p, q), alphabet)[:n]


def characteristic_prefix(slope: SlopeCF, n: int, alphabet: Alphabet) -> Word:
    """First n letters of s_{theta,theta}, the limit of the standard words."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return _standard_words_spanning(slope, n, alphabet)[-1][:n]


def xi_word(alphabet: Alphabet, n: int) -> Word:
    """Prefix of the doubling-block word xi: a, then blocks of 2^m letters.

    Position 1 is a; positions 2^m + 1 .. 2^{m+1} hold b when m is even and
    a when m is odd.  The continued fraction with these partial quotients has
    no Levy constant.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    out = [alphabet.a]
    m = 0
    while len(out) < n:
        letter = alphabet.b if m % 2 == 0 else alphabet.a
        out.extend([letter] * min(2**m, n - len(out)))
        m += 1
    return tuple(out)


def xi_blocks(alphabet: Alphabet, m_max: int) -> list:
    """Constant-letter runs (letter, length) covering the first 2^m_max letters of xi."""
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    blocks = [(alphabet.a, 1)]
    for m in range(m_max):
        blocks.append((alphabet.b if m % 2 == 0 else alphabet.a, 2**m))
    return blocks


def factor_set(w: Word, n: int) -> set:
    """All distinct length-n factors of w."""
    if n < 0 or n > len(w):
        raise ValueError(f"factor length {n} outside 0..{len(w)}")
    return {w[i : i + n] for i in range(len(w) - n + 1)}


def complexity(w: Word, n: int) -> int:
    """Number of distinct length-n factors of w."""
    return len(factor_set(w, n))


def complexity_window(slope: SlopeCF, n: int) -> int:
    """Prefix length that provably exhibits all length-n factors of the slope's word.

    q_{k+1} + n, where q_{k+1} is the first convergent denominator exceeding n.
    """
    _, _, q = slope.convergent_exceeding(n)
    return q + n


@dataclass(frozen=True)
class FactorDecomposition:
    """Where a factor sits relative to the standard words of its slope.

    case "a": the factor occurs inside the periodic word M_k M_k ... M_k M_{k-1}
    at the given offset.  case "b": the factor splits as suffix + prefix of
    M_{k+1} with len(prefix) >= q_k - 1.
    """

    case: str
    k: int
    offset: int = None
    suffix: Word = None
    prefix: Word = None


def _find_sub(hay: Word, needle: Word) -> int:
    n = len(needle)
    for i in range(len(hay) - n + 1):
        if hay[i : i + n] == needle:
            return i
    return -1


def classify_factor(m_word: Word, slope: SlopeCF, alphabet: Alphabet) -> FactorDecomposition:
    """Decompose a factor of the slope's Sturmian word per its length class.

    With q_k <= len(m_word) <= q_{k+1} - 1, the factor either embeds in the
    q_k-periodic word M_k...M_k M_{k-1} (case a) or wraps a boundary of
    M_{k+1} as suffix U + prefix V with |V| >= q_k - 1 (case b).
    """
    m_word = as_word(m_word)
    n = len(m_word)
    if n < 1:
        raise ValueError("factor must be nonempty")
    ms = _standard_words_spanning(slope, n, alphabet)
    k = len(ms) - 3  # ms[-1] is M_{k+1}, the first standard word longer than n
    q_k = len(ms[k + 1])
    m_k = ms[k + 1]
    m_km1 = ms[k]
    d_next = slope.digit(k + 1)
    reference = m_k * (d_next + 1) + m_km1
    pos = _find_sub(reference, m_word)
    if pos >= 0:
        return FactorDecomposition(case="a", k=k, offset=pos)
    m_kp1 = ms[k + 2]
    for u_len in range(0, n - (q_k - 1) + 1):
        u, v = m_word[:u_len], m_word[u_len:]
        if len(v) > len(m_kp1):
            continue
        if (u_len == 0 or m_kp1[-u_len:] == u) and m_kp1[: len(v)] == v:
            return FactorDecomposition(case="b", k=k, suffix=u, prefix=v)
    raise NotAFactorError(f"{m_word} is not a factor of the slope's word")


def apply_morphism(phi: Morphism, w: Word) -> Word:
    """Image of w under the substitution, letter by letter."""
    out = []
    for x in w:
        if x == phi.alphabet.a:
            out.extend(phi.image_a)
        elif x == phi.alphabet.b:
            out.extend(phi.image_b)
        else:
            raise InvalidWordError(f"letter {x} not in alphabet ({phi.alphabet.a}, {phi.alphabet.b})")
    return tuple(out)


def parse_word(text: str) -> Word:
    """Parse the serialized form: comma-separated positive integers."""
    text = text.strip()
    if not text:
        return ()
    try:
        letters = [int(part) for part in text.split(",")]
    except ValueError as exc:
        raise InvalidWordError(f"cannot parse word {text!r}: {exc}") from None
    return as_word(letters)


def format_word(w: Word) -> str:
    return ",".join(str(x) for x in w)


def load_words(path) -> list:
    """Read one word per line (comma-separated letters); blank lines skipped."""
    words = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                words.append(parse_word(line))
    return words
