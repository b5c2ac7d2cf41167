"""Exact continuant and trace algebra for words of partial quotients.

A word is a tuple of positive integers, read as the partial quotients of a
continued fraction.  Every word maps to the 2x2 integer matrix product of
[[a_i, 1], [1, 0]]; its top-left entry is the continuant K (the denominator
of [0; a_1, ..., a_n]) and its trace T drives the quadratic Levy formula.
All integer arithmetic here is arbitrary precision; floats only appear in
the log-space helpers.
"""

import math
from typing import Iterable, Iterator, NamedTuple

from .errors import InvalidWordError, TruncatedStreamError

Word = tuple  # tuple of positive ints; see as_word()

_LN2 = math.log(2.0)


class Mat2(NamedTuple):
    """2x2 non-negative integer matrix, entries row-major."""

    e11: int
    e12: int
    e21: int
    e22: int

    @property
    def det(self) -> int:
        return self.e11 * self.e22 - self.e12 * self.e21

    @property
    def trace(self) -> int:
        return self.e11 + self.e22

    def __matmul__(self, other: "Mat2") -> "Mat2":
        a, b, c, d = self
        e, f, g, h = other
        return Mat2(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


IDENTITY = Mat2(1, 0, 0, 1)


def as_word(letters: Iterable[int]) -> Word:
    """Validate and freeze a letter sequence into a word tuple."""
    w = tuple(letters)
    for x in w:
        if not isinstance(x, int) or isinstance(x, bool) or x < 1:
            raise InvalidWordError(f"letters must be positive integers, got {x!r}")
    return w


def cf_matrix(w: Iterable[int]) -> Mat2:
    """Left-to-right product of [[a,1],[1,0]] over the word; identity if empty.

    Folding against a single-letter factor keeps each step linear in the
    current entry size, so the whole product is quadratic in the word length
    rather than cubic.
    """
    e11, e12, e21, e22 = 1, 0, 0, 1
    for x in w:
        if not isinstance(x, int) or isinstance(x, bool) or x < 1:
            raise InvalidWordError(f"letters must be positive integers, got {x!r}")
        e11, e12 = e11 * x + e12, e11
        e21, e22 = e21 * x + e22, e21
    return Mat2(e11, e12, e21, e22)


def continuant(w: Iterable[int]) -> int:
    """Continuant K(w): denominator of [0; w]. K(empty) = 1."""
    k, k_prev = 1, 0
    for x in w:
        if not isinstance(x, int) or isinstance(x, bool) or x < 1:
            raise InvalidWordError(f"letters must be positive integers, got {x!r}")
        k, k_prev = x * k + k_prev, k
    return k


def trace(w: Iterable[int]) -> int:
    """Trace of cf_matrix(w); the empty word gives Tr(I) = 2."""
    m = cf_matrix(w)
    return m.e11 + m.e22


def log_big(n: int) -> float:
    """Natural log of a positive big integer.

    Extracts the top 64 bits plus the binary exponent instead of converting
    the full integer to float, so there is no overflow and the relative error
    stays below 1e-15 for any size.
    """
    if n <= 0:
        raise ValueError(f"log_big requires n >= 1, got {n}")
    nb = n.bit_length()
    if nb <= 64:
        return math.log(n)
    shift = nb - 64
    return math.log(n >> shift) + shift * _LN2


class LogStream(NamedTuple):
    """One step of the log-space denominator recurrence."""

    n: int
    log_q: float
    ratio: float


def log_q_stream(letters: Iterable[int], n_max: int) -> Iterator[LogStream]:
    """Yield (n, log Q_n, Q_n/Q_{n-1}) for n = 1..n_max.

    Runs the ratio recurrence r_n = a_n + 1/r_{n-1} (r_0 = +inf, so r_1 = a_1)
    and accumulates log r_n with Neumaier-compensated summation, keeping the
    drift against the exact big-integer log below 1e-9 out to n ~ 1e6.
    """
    it = iter(letters)
    r = math.inf
    total = 0.0
    comp = 0.0
    for n in range(1, n_max + 1):
        try:
            a = next(it)
        except StopIteration:
            raise TruncatedStreamError(f"letter stream ended at n={n - 1} < n_max={n_max}") from None
        if not isinstance(a, int) or isinstance(a, bool) or a < 1:
            raise InvalidWordError(f"letters must be positive integers, got {a!r}")
        r = a + 1.0 / r
        x = math.log(r)
        t = total + x
        if abs(total) >= abs(x):
            comp += (total - t) + x
        else:
            comp += (x - t) + total
        total = t
        yield LogStream(n, total + comp, r)


def tail_value(w: Iterable[int]) -> float:
    """Value of the finite continued fraction [a_1; a_2, ..., a_D] as a float."""
    w = tuple(w)
    if not w:
        raise ValueError("tail_value requires a nonempty word")
    t = 0.0
    for x in reversed(w):
        if not isinstance(x, int) or isinstance(x, bool) or x < 1:
            raise InvalidWordError(f"letters must be positive integers, got {x!r}")
        t = x + (1.0 / t if t else 0.0)
    return t
