"""Levy constants: exact quadratic values, the slope function, and estimators.

The quadratic route turns an exact big-integer period trace t into
(1/s) log((t + sqrt(t^2 - (-1)^s 4)) / 2) with only float rounding.  Rational
slopes evaluate through the trace of their Christoffel word; irrational
slopes through a convergent with a rigorous O(1/q_k) error bound; and the
slope -> Levy-constant map inverts by Stern-Brocot bisection, which is valid
because the map is strictly increasing across rational slopes.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from . import _kernels
from .continuants import Word, as_word, cf_matrix, log_big, trace
from .errors import (
    InvalidWordError,
    NoConvergenceError,
    TargetOutOfRangeError,
    TruncatedStreamError,
)
from .words import (
    Alphabet,
    Morphism,
    SlopeCF,
    apply_morphism,
    characteristic_prefix,
    christoffel,
    fraction_cf,
    sturmian_prefix,
    xi_blocks,
)

METHOD_QUADRATIC = "quadratic-exact"
METHOD_RATIONAL = "rational-slope"
METHOD_IRRATIONAL = "irrational-slope-bounded"
METHOD_LOGQ = "empirical-logq"
METHOD_BIRKHOFF = "empirical-birkhoff"


@dataclass(frozen=True)
class QuadPeriod:
    """Eventually periodic partial quotients: optional preperiod, then a period."""

    period: Word
    preperiod: Word = ()

    def __post_init__(self):
        object.__setattr__(self, "period", as_word(self.period))
        object.__setattr__(self, "preperiod", as_word(self.preperiod))
        if not self.period:
            raise ValueError("period must be nonempty")

    @property
    def s(self) -> int:
        return len(self.period)

    @property
    def t(self) -> int:
        return trace(self.period)


@dataclass(frozen=True)
class LevyResult:
    """A Levy value in nats per partial quotient.

    error_bound None means exact up to float rounding; otherwise it is a
    rigorous bound for the *-bounded methods and a clearly heuristic one for
    the empirical-* methods.
    """

    value: float
    error_bound: Optional[float]
    method: str


@dataclass(frozen=True)
class SlopePoint:
    """f and x at one rational slope, with the exact word trace."""

    fraction: Fraction
    f_value: float
    x_value: float
    trace: int


def levy_from_trace(t: int, s: int) -> float:
    """(1/s) log((t + sqrt(t^2 - (-1)^s 4)) / 2) for an exact integer trace.

    Stable for traces of any size: the log of t comes from log_big and the
    sqrt enters only through the ratio 4/t^2.
    """
    if s < 1 or t < 1:
        raise ValueError(f"need s >= 1 and t >= 1, got s={s}, t={t}")
    lt = log_big(t)
    u4 = 4.0 * math.exp(-2.0 * lt)
    if s % 2 == 0:
        u4 = -u4
    return (lt + math.log1p((math.sqrt(1.0 + u4) - 1.0) / 2.0)) / s


def letter_levy(letter: int) -> float:
    """Levy constant of the constant continued fraction with this letter."""
    return levy_from_trace(letter, 1)


def levy_quadratic(qp: QuadPeriod) -> LevyResult:
    """Levy constant of an eventually periodic continued fraction.

    Depends on the period only; the preperiod is accepted and ignored.
    """
    return LevyResult(levy_from_trace(qp.t, qp.s), None, METHOD_QUADRATIC)


def trace_poly(n: int, x: float) -> float:
    """T_n(x) = Tr([[x,1],[1,0]]^n) via T_{k+1} = x T_k + T_{k-1}, T_0 = 2, T_1 = x."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if x <= 0:
        raise ValueError(f"x must be positive, got {x}")
    if n == 0:
        return 2.0
    t_prev, t = 2.0, float(x)
    for _ in range(n - 1):
        t_prev, t = t, x * t + t_prev
    return t


def _trace_poly_with_derivative(n, x):
    t_prev, t = 2.0, float(x)
    d_prev, d = 0.0, 1.0
    for _ in range(n - 1):
        t_prev, t = t, x * t + t_prev
        d_prev, d = d, t_prev + x * d + d_prev
    return t, d


def _mu_root(w: Word) -> float:
    """Positive root of T_n(mu) = T(w) by bisection plus Newton polish."""
    n = len(w)
    lo, hi = float(min(w)), float(max(w))
    if lo == hi:
        return lo
    lt = log_big(trace(w))
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if math.log(trace_poly(n, mid)) < lt:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(3):
        t, d = _trace_poly_with_derivative(n, x)
        x -= (math.log(t) - lt) * t / d
    return x


def mu_mean(w: Word) -> float:
    """The trace mean mu of a word: the positive root of T_n(mu) = T(w).

    Computed in closed form from the quadratic Levy value (mu = r - 1/r with
    r = exp(L)); for words up to 30 letters the monotone root-finding route is
    run as an independent cross-check and must agree to 1e-12.
    """
    w = as_word(w)
    if not w:
        raise ValueError("mu_mean requires a nonempty word")
    r = math.exp(levy_from_trace(trace(w), len(w)))
    mu = r - 1.0 / r
    if len(w) <= 30:
        other = _mu_root(w)
        if abs(other - mu) > 1e-12 * max(1.0, abs(mu)):
            raise ArithmeticError(f"mu routes disagree: closed={mu!r}, root={other!r}")
    return mu


def slope_point(pq: Fraction, alphabet: Alphabet) -> SlopePoint:
    """Evaluate f and x at a rational slope from the exact Christoffel trace.

    x is recovered as exp(f) - exp(-f) rather than by solving T_q(x) = T,
    which would be ill-conditioned for large q.
    """
    pq = Fraction(pq)
    w = christoffel(pq, alphabet)
    t = trace(w)
    f = levy_from_trace(t, pq.denominator)
    return SlopePoint(pq, f, math.exp(f) - math.exp(-f), t)


@lru_cache(maxsize=None)
def _tail_spread(a: int, b: int) -> float:
    # [b; a,b,a,b,...] - [a; b,a,b,a,...], the widest gap between two
    # continued-fraction tails over {a, b}; both tails in closed form.
    ab = a * b
    d = math.sqrt(ab * (ab + 4))
    y = (-ab + d) / (2 * a)
    z = (-ab + d) / (2 * b)
    return (b + y) - (a + z)


def tail_spread(alphabet: Alphabet) -> float:
    """Cached per-alphabet constant used by the irrational-slope error bound."""
    return _tail_spread(alphabet.a, alphabet.b)


def f_irrational(slope: SlopeCF, k: int, alphabet: Alphabet) -> LevyResult:
    """f at an irrational slope, evaluated at its k-th convergent.

    The returned error_bound 5*G/q_k (G the per-alphabet tail spread) is a
    rigorous bound on |f(theta) - f(p_k/q_k)|.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    p, q = slope.convergent(k)
    sp = slope_point(Fraction(p, q), alphabet)
    return LevyResult(sp.f_value, 5.0 * tail_spread(alphabet) / q, METHOD_IRRATIONAL)


@dataclass(frozen=True)
class InvertResult:
    """Stern-Brocot enclosure of a slope realizing a target Levy value.

    lower/upper are Farey neighbors with f(lower) <= target <= f(upper);
    mediant is the returned representative slope.  cf_digits is the continued
    fraction of the mediant (theta = [0; c1, c2, ...]); the limit slope agrees
    with it except possibly in the final digit.  exact means f(mediant) hit
    the target to the last float bit, in which case lower == upper == mediant.
    """

    lower: Fraction
    upper: Fraction
    mediant: Fraction
    f_lower: float
    f_upper: float
    cf_digits: tuple
    exact: bool
    steps: int

    @property
    def width(self) -> float:
        return self.f_upper - self.f_lower


def invert_f(target: float, alphabet: Alphabet, tol: float, max_steps: int = 10**6) -> InvertResult:
    """Find a slope whose Levy value encloses the target within tol.

    Descends the Stern-Brocot tree keeping a bracket of Farey neighbors, with
    each mediant's matrix formed as the product of the bracket matrices (the
    mediant's Christoffel word is the concatenation of its parents' words).
    Terminates when f(upper) - f(lower) < tol; that width also dominates the
    convergent error bound of the limit slope.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    f0, f1 = letter_levy(alphabet.a), letter_levy(alphabet.b)
    if not f0 <= target <= f1:
        raise TargetOutOfRangeError(target, f0, f1)
    if target == f0:
        z = Fraction(0)
        return InvertResult(z, z, z, f0, f0, fraction_cf(z), True, 0)
    if target == f1:
        o = Fraction(1)
        return InvertResult(o, o, o, f1, f1, fraction_cf(o), True, 0)
    lo, hi = Fraction(0), Fraction(1)
    m_lo, m_hi = cf_matrix((alphabet.a,)), cf_matrix((alphabet.b,))
    f_lo, f_hi = f0, f1
    steps = 0
    while f_hi - f_lo >= tol:
        if steps >= max_steps:
            raise NoConvergenceError(f"no enclosure of width {tol} within {max_steps} steps")
        med = Fraction(lo.numerator + hi.numerator, lo.denominator + hi.denominator)
        m_med = m_lo @ m_hi
        f_med = levy_from_trace(m_med.trace, med.denominator)
        steps += 1
        if f_med == target:
            return InvertResult(med, med, med, f_med, f_med, fraction_cf(med), True, steps)
        if f_med < target:
            lo, m_lo, f_lo = med, m_med, f_med
        else:
            hi, m_hi, f_hi = med, m_med, f_med
    med = Fraction(lo.numerator + hi.numerator, lo.denominator + hi.denominator)
    return InvertResult(lo, hi, med, f_lo, f_hi, fraction_cf(med), False, steps)


def _collect(letters, count: int) -> np.ndarray:
    if isinstance(letters, np.ndarray):
        if letters.shape[0] < count:
            raise TruncatedStreamError(f"need {count} letters, got {letters.shape[0]}")
        arr = letters[:count].astype(np.float64)
    else:
        arr = np.empty(count)
        i = 0
        for x in letters:
            arr[i] = x
            i += 1
            if i == count:
                break
        if i < count:
            raise TruncatedStreamError(f"need {count} letters, got {i}")
    if arr.min() < 1:
        raise InvalidWordError("letters must be >= 1")
    return arr


def _heuristic_bias(amax: int, n: int) -> float:
    # O(1/n) bias guess for (log Q_n)/n style estimates; not rigorous.
    return (math.log(2.0) + letter_levy(amax)) / n


def levy_empirical(letters, n: int, method: str = "logq", tail_depth: int = 40,
                   period: Optional[int] = None) -> LevyResult:
    """Empirical Levy estimate over the first letters of a stream.

    method "logq" returns (log Q_n)/n from the compensated ratio recurrence;
    with period=s (for streams known to be s-periodic) it switches to the
    difference form (log Q_{n+s} - log Q_n)/s, which converges geometrically.
    method "birkhoff" averages log of depth-limited continued-fraction tails
    over n window starts.  All error_bounds here are heuristic.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if method == "logq":
        if period is not None:
            if period < 1:
                raise ValueError("period must be >= 1")
            arr = _collect(letters, n + period)
            _, _, r = _kernels.logq_scan(arr[:n], math.inf, 0.0, 0.0)
            tail_total, tail_comp, _ = _kernels.logq_scan(arr[n:], r, 0.0, 0.0)
            return LevyResult((tail_total + tail_comp) / period, 1e-12, METHOD_LOGQ)
        arr = _collect(letters, n)
        total, comp, _ = _kernels.logq_scan(arr, math.inf, 0.0, 0.0)
        return LevyResult((total + comp) / n, _heuristic_bias(int(arr.max()), n), METHOD_LOGQ)
    if method == "birkhoff":
        if tail_depth < 2:
            raise ValueError("tail_depth must be >= 2")
        arr = _collect(letters, n + tail_depth)
        tails = _kernels.birkhoff_tails(arr, n, tail_depth)
        value = math.fsum(np.log(tails)) / n
        amin, amax = int(arr.min()), int(arr.max())
        truncation = _tail_spread(amin, amax) / 2.0 ** (tail_depth - 2) if amax > amin else 0.0
        return LevyResult(value, truncation + _heuristic_bias(amax, n), METHOD_BIRKHOFF)
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class XiOscillation:
    """Normalized log-denominators of xi at the doubling positions.

    points holds (m, u_m) with u_m = log Q_{2^m} / 2^m.  The even-m and odd-m
    subsequences approach two distinct accumulation points, so the continued
    fraction has no Levy constant.  The predicted_* fields come from solving
    the two-cycle u' = u/2 + L_block/2 and are a derived prediction, not a
    proved value.
    """

    points: tuple
    acc_even: float
    acc_odd: float
    predicted_even: float
    predicted_odd: float
    noise_floor: float

    @property
    def gap(self) -> float:
        return abs(self.acc_even - self.acc_odd)

    @property
    def predicted_gap(self) -> float:
        return abs(self.predicted_even - self.predicted_odd)


def xi_oscillation(alphabet: Alphabet, m_max: int) -> XiOscillation:
    """Scan the first 2^m_max letters of xi and locate both accumulation points."""
    if m_max < 4:
        raise ValueError("m_max must be >= 4")
    r, total, comp = math.inf, 0.0, 0.0
    points = []
    for j, (letter, count) in enumerate(xi_blocks(alphabet, m_max)):
        block = np.full(count, float(letter))
        total, comp, r = _kernels.logq_scan(block, r, total, comp)
        if j >= 1:
            points.append((j, (total + comp) / 2.0**j))
    evens = [u for m, u in points if m % 2 == 0]
    odds = [u for m, u in points if m % 2 == 1]
    la, lb = letter_levy(alphabet.a), letter_levy(alphabet.b)
    return XiOscillation(
        points=tuple(points),
        acc_even=sum(evens[-3:]) / len(evens[-3:]),
        acc_odd=sum(odds[-3:]) / len(odds[-3:]),
        predicted_even=(2.0 * la + lb) / 3.0,
        predicted_odd=(la + 2.0 * lb) / 3.0,
        noise_floor=max(abs(evens[-1] - evens[-2]), abs(odds[-1] - odds[-2])),
    )


def rn_family(pq: Fraction, ppqq: Fraction, alphabet: Alphabet, n_max: int) -> list:
    """Slope points along r_n = (p' + n p)/(q' + n q), n = 0..n_max.

    Requires |p' q - p q'| = 1.  The exact trace recurrence
    T(w_{r_n}) = T(w_{p/q}) T(w_{r_{n-1}}) + (-1)^{q+1} T(w_{r_{n-2}})
    is verified in big integers for every n >= 2 before returning.
    """
    pq, ppqq = Fraction(pq), Fraction(ppqq)
    p, q = pq.numerator, pq.denominator
    pp, qq = ppqq.numerator, ppqq.denominator
    if abs(pp * q - p * qq) != 1:
        raise ValueError(f"cross-determinant of {pq} and {ppqq} must be +-1")
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    pts = [slope_point(Fraction(pp + n * p, qq + n * q), alphabet) for n in range(n_max + 1)]
    t_base = trace(christoffel(pq, alphabet))
    sign = -1 if q % 2 == 0 else 1
    for n in range(2, n_max + 1):
        if pts[n].trace != t_base * pts[n - 1].trace + sign * pts[n - 2].trace:
            raise ArithmeticError(f"trace recurrence violated at n={n}")
    return pts


def morphic_levy(phi: Morphism, slope: SlopeCF, n: int, method: str = "logq",
                 tail_depth: int = 40, intercept: str = "zero") -> LevyResult:
    """Empirical Levy estimate of [0; phi(s)] for a Sturmian source word s.

    intercept "zero" feeds phi the prefix of s_{theta,0}; "slope" the prefix
    of s_{theta,theta}.  The limit depends only on the slope; the estimate at
    finite n carries the usual heuristic error.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    need = n + (tail_depth if method == "birkhoff" else 0)
    shortest = min(len(phi.image_a), len(phi.image_b))
    src_len = (need + shortest - 1) // shortest
    if intercept == "zero":
        src = sturmian_prefix(slope, src_len, phi.alphabet)
    elif intercept == "slope":
        src = characteristic_prefix(slope, src_len, phi.alphabet)
    else:
        raise ValueError(f"unknown intercept {intercept!r}")
    return levy_empirical(apply_morphism(phi, src), n, method=method, tail_depth=tail_depth)
