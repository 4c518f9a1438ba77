"""Exact closed-form reals: a rational plus rational multiples of log2(prime).

Values of this shape are uniquely represented because {1} together with the
base-2 logarithms of the primes is linearly independent over the rationals.
Equality is therefore decided on the canonical form, and strict ordering by
outward-rounded interval evaluation at doubling precision.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Union

Rational = Fraction
RationalLike = Union[int, Fraction]

LESS, EQUAL, GREATER = -1, 0, 1

_START_PRECISION = 64


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of a positive integer by trial division."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    factors: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    p, step = 5, 2
    while p * p <= n:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
        p += step
        step = 6 - step
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


class ClosedFormReal:
    """``rational + sum(coeff[p] * log2(p))`` over primes ``p``.

    Instances are immutable and always canonical: no zero coefficients are
    stored, so two instances are equal exactly when their fields are.
    """

    __slots__ = ("_rational", "_logs", "_hash")

    def __init__(self, rational: RationalLike = 0,
                 logs: Mapping[int, RationalLike] | None = None):
        items = {}
        for p, q in (logs or {}).items():
            q = Fraction(q)
            if q:
                items[int(p)] = q
        object.__setattr__(self, "_rational", Fraction(rational))
        object.__setattr__(self, "_logs", tuple(sorted(items.items())))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("ClosedFormReal is immutable")

    @property
    def rational_part(self) -> Fraction:
        return self._rational

    @property
    def log_terms(self) -> dict[int, Fraction]:
        return dict(self._logs)

    def is_rational(self) -> bool:
        return not self._logs

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        logs = dict(self._logs)
        for p, q in other._logs:
            logs[p] = logs.get(p, 0) + q
        return ClosedFormReal(self._rational + other._rational, logs)

    __radd__ = __add__

    def __neg__(self):
        return ClosedFormReal(-self._rational, {p: -q for p, q in self._logs})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        k = Fraction(other)
        return ClosedFormReal(self._rational * k,
                              {p: q * k for p, q in self._logs})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        if other == 0:
            raise ZeroDivisionError("division of a closed-form real by zero")
        return self * (1 / Fraction(other))

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._rational == other._rational and self._logs == other._logs

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self._rational, self._logs)))
        return self._hash

    def __lt__(self, other):
        return compare(self, other) == LESS

    def __le__(self, other):
        return compare(self, other) != GREATER

    def __gt__(self, other):
        return compare(self, other) == GREATER

    def __ge__(self, other):
        return compare(self, other) != LESS

    def __float__(self):
        iv = enclose(self, 64)
        return float((iv.low + iv.high) / 2)

    def __bool__(self):
        return bool(self._rational) or bool(self._logs)

    def __str__(self):
        return to_canonical(self)

    def __repr__(self):
        return f"ClosedFormReal({to_canonical(self)!r})"


def _coerce(x) -> ClosedFormReal:
    if isinstance(x, ClosedFormReal):
        return x
    if isinstance(x, (int, Fraction)):
        return ClosedFormReal(x)
    return NotImplemented


ZERO = ClosedFormReal(0)


def log2_of_rational(q: RationalLike) -> ClosedFormReal:
    """Exact ``log2(q)`` for a positive rational ``q``."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError(f"log2 of non-positive number {q}")
    logs: dict[int, Fraction] = {}
    for p, e in factorize(q.numerator).items():
        logs[p] = logs.get(p, 0) + e
    for p, e in factorize(q.denominator).items():
        logs[p] = logs.get(p, 0) - e
    # log2(2**e) is rational; keep the prime 2 out of the log terms.
    two = logs.pop(2, 0)
    return ClosedFormReal(two, logs)


def xlog2x(p: RationalLike) -> ClosedFormReal:
    """``p * log2(p)`` with the convention ``0 * log2(0) = 0``."""
    p = Fraction(p)
    if p == 0:
        return ZERO
    return log2_of_rational(p) * p


# -- interval evaluation ----------------------------------------------------

@dataclass(frozen=True)
class DyadicInterval:
    low: Fraction
    high: Fraction
    precision: int

    def __post_init__(self):
        if self.low > self.high:
            raise ValueError("empty interval")

    @property
    def width(self) -> Fraction:
        return self.high - self.low

    def __contains__(self, value) -> bool:
        return self.low <= value <= self.high


def _cdiv(a: int, b: int) -> int:
    return -((-a) // b)


def _atanh_sum(a: int, b: int, w: int) -> tuple[int, int]:
    """Bounds on ``2**w * atanh(a/b)`` for ``0 <= a/b <= 1/3``."""
    one = 1 << w
    y_lo, y_hi = (a << w) // b, _cdiv(a << w, b)
    y2_lo, y2_hi = y_lo * y_lo >> w, _cdiv(y_hi * y_hi, one)
    t_lo, t_hi = y_lo, y_hi
    s_lo, s_hi = t_lo, t_hi
    k = 1
    while t_hi > 1:
        t_lo = t_lo * y2_lo >> w
        t_hi = _cdiv(t_hi * y2_hi, one)
        s_lo += t_lo // (2 * k + 1)
        s_hi += _cdiv(t_hi, 2 * k + 1)
        k += 1
    # remaining terms sum to less than one unit since y**2 <= 1/9
    return s_lo, s_hi + 1


def _ln_bounds(num: int, den: int, w: int) -> tuple[int, int]:
    """Bounds on ``2**w * ln(num/den)`` for ``1 <= num/den <= 2``."""
    if num == den:
        return 0, 0
    lo, hi = _atanh_sum(num - den, num + den, w)
    return 2 * lo, 2 * hi


@lru_cache(maxsize=4096)
def _log2_prime_bounds(p: int, w: int) -> tuple[int, int]:
    """Bounds on ``2**w * log2(p)`` for an integer ``p >= 2``."""
    e = p.bit_length() - 1
    guard = w + 8
    ln_lo, ln_hi = _ln_bounds(p, 1 << e, guard)
    ln2_lo, ln2_hi = _ln_bounds(2, 1, guard)
    frac_lo = (ln_lo << guard) // ln2_hi
    frac_hi = _cdiv(ln_hi << guard, ln2_lo)
    return (e << w) + (frac_lo >> 8), (e << w) + _cdiv(frac_hi, 1 << 8)


def enclose(x: ClosedFormReal, precision: int) -> DyadicInterval:
    """Dyadic interval containing ``x`` of width at most ``2**-precision``."""
    if precision < 1:
        raise ValueError("precision must be positive")
    x = _coerce(x)
    r = x.rational_part
    if x.is_rational():
        lo = (r.numerator << precision) // r.denominator
        hi = _cdiv(r.numerator << precision, r.denominator)
        return DyadicInterval(Fraction(lo, 1 << precision),
                              Fraction(hi, 1 << precision), precision)
    terms = x._logs
    weight = sum(abs(q) for _, q in terms) + 1
    w = precision + 8 + int(weight).bit_length() + len(terms).bit_length()
    lo = (r.numerator << w) // r.denominator
    hi = _cdiv(r.numerator << w, r.denominator)
    for p, q in terms:
        l_lo, l_hi = _log2_prime_bounds(p, w)
        if q > 0:
            lo += (q.numerator * l_lo) // q.denominator
            hi += _cdiv(q.numerator * l_hi, q.denominator)
        else:
            lo += (q.numerator * l_hi) // q.denominator
            hi += _cdiv(q.numerator * l_lo, q.denominator)
    shift = w - precision
    return DyadicInterval(Fraction(lo >> shift, 1 << precision),
                          Fraction(_cdiv(hi, 1 << shift), 1 << precision),
                          precision)


def sign(x: ClosedFormReal) -> int:
    x = _coerce(x)
    if x.is_rational():
        r = x.rational_part
        return (r > 0) - (r < 0)
    precision = _START_PRECISION
    while True:
        iv = enclose(x, precision)
        if iv.low > 0:
            return GREATER
        if iv.high < 0:
            return LESS
        precision *= 2


def compare(x, y) -> int:
    """Return ``LESS``, ``EQUAL`` or ``GREATER`` (-1, 0, 1)."""
    x, y = _coerce(x), _coerce(y)
    if x is NotImplemented or y is NotImplemented:
        raise TypeError("compare() needs closed-form reals or rationals")
    if x == y:
        return EQUAL
    return sign(x - y)


def to_decimal(x, digits: int = 6) -> str:
    """Correctly rounded decimal string with ``digits`` fractional digits."""
    if digits < 1:
        raise ValueError("digits must be at least 1")
    x = _coerce(x)
    scale = 10 ** digits
    if x.is_rational():
        n = round(x.rational_part * scale)
    else:
        precision = _START_PRECISION + 4 * digits
        while True:
            iv = enclose(x, precision)
            lo = (iv.low * scale + Fraction(1, 2)).__floor__()
            hi = (iv.high * scale + Fraction(1, 2)).__floor__()
            if lo == hi:
                n = lo
                break
            precision *= 2
    head, tail = divmod(abs(n), scale)
    text = f"{head}.{tail:0{digits}d}"
    return "-" + text if n < 0 else text


# -- canonical strings --------------------------------------------------------

def _fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def to_canonical(x) -> str:
    """``"r + (q_p)·log2(p) + ..."`` with primes ascending."""
    x = _coerce(x)
    parts = [_fmt_rational(x.rational_part)]
    for p, q in x._logs:
        parts.append(f"({_fmt_rational(q)})·log2({p})")
    return " + ".join(parts)


_TERM = re.compile(r"^\((-?\d+(?:/\d+)?)\)·log2\((\d+)\)$")


def parse_canonical(text: str) -> ClosedFormReal:
    head, *rest = text.strip().split(" + ")
    rational = Fraction(head)
    logs: dict[int, Fraction] = {}
    for term in rest:
        m = _TERM.match(term.strip())
        if not m:
            raise ValueError(f"malformed log term {term!r}")
        p, q = int(m.group(2)), Fraction(m.group(1))
        if p < 2 or factorize(p) != {p: 1}:
            raise ValueError(f"log term base {p} is not prime")
        if p == 2:
            rational += q
        else:
            logs[p] = logs.get(p, 0) + q
    return ClosedFormReal(rational, logs)
