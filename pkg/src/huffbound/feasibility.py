"""Exact feasibility of ``A x <= b`` with Farkas-style infeasibility certificates.

The Phase-I problem ``min g s.t. A x - b <= g`` has the dual
``max -b.lam s.t. A^T lam = 0, sum(lam) = 1, lam >= 0``. We solve that dual
with a rational two-phase simplex (Bland's rule). A dual optimum with
``-b.lam > 0`` is itself the certificate; otherwise the simplex multipliers
give a primal point, which is checked before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

try:
    from gmpy2 import mpq as _num
except ImportError:  # pragma: no cover - pure-Python fallback
    _num = Fraction

_ZERO, _ONE = _num(0), _num(1)


class InvariantError(RuntimeError):
    """An internal consistency check failed."""


@dataclass(frozen=True)
class LinearSystem:
    nvars: int
    rows: tuple[tuple[Fraction, ...], ...]
    rhs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.rows) != len(self.rhs):
            raise ValueError("row and right-hand-side counts differ")
        for row in self.rows:
            if len(row) != self.nvars:
                raise ValueError("row length does not match variable count")

    @classmethod
    def of(cls, rows: Sequence[Sequence], rhs: Sequence, nvars=None):
        rows = tuple(tuple(Fraction(v) for v in r) for r in rows)
        if nvars is None:
            nvars = len(rows[0]) if rows else 0
        return cls(nvars, rows, tuple(Fraction(v) for v in rhs))

    def satisfied_by(self, point: Sequence) -> bool:
        return all(_dot(row, point) <= b for row, b in zip(self.rows, self.rhs))


def _dot(row, point):
    total = 0
    for a, v in zip(row, point):
        if a:
            total += a * v
    return total


@dataclass(frozen=True)
class InfeasibilityCertificate:
    weights: tuple[Fraction, ...]


@dataclass(frozen=True)
class Feasible:
    point: tuple[Fraction, ...]

    feasible = True


@dataclass(frozen=True)
class Infeasible:
    certificate: InfeasibilityCertificate

    feasible = False


Decision = Union[Feasible, Infeasible]


def verify(system: LinearSystem, cert: InfeasibilityCertificate) -> bool:
    """Exact check that ``cert`` proves ``system`` has no solution."""
    lam = [_num(v) for v in cert.weights]
    if len(lam) != len(system.rows):
        raise ValueError("certificate length does not match the system")
    if any(v < 0 for v in lam):
        return False
    if sum(lam, _ZERO) != 1:
        return False
    combo = [_ZERO] * system.nvars
    for row, v in zip(system.rows, lam):
        if v:
            for i, a in enumerate(row):
                if a:
                    combo[i] += a * v
    if any(combo):
        return False
    return -sum((_num(b) * v for b, v in zip(system.rhs, lam)), _ZERO) > 0


class _Tableau:
    """Equality-form simplex tableau ``M y = rhs, y >= 0`` with artificials.

    Column ``n + i`` is the artificial of row ``i``. The objective row is
    carried along and updated at every pivot.
    """

    def __init__(self, matrix: list[list], rhs: list):
        self.m = len(matrix)
        self.n = len(matrix[0]) if matrix else 0
        self.rows = []
        for i, (row, b) in enumerate(zip(matrix, rhs)):
            art = [_ZERO] * self.m
            art[i] = _ONE
            self.rows.append([_num(v) for v in row] + art + [_num(b)])
        self.basis = [self.n + i for i in range(self.m)]
        self.obj: list = []

    @property
    def width(self):
        return self.n + self.m

    def is_artificial(self, j):
        return j >= self.n

    def set_cost(self, cost):
        red = [_num(c) for c in cost] + [_ZERO]
        for i, b in enumerate(self.basis):
            cb = red[b]
            if cb:
                row = self.rows[i]
                for j, v in enumerate(row):
                    if v:
                        red[j] -= cb * v
        self.obj = red

    def pivot(self, r, c):
        row = self.rows[r]
        pv = row[c]
        if pv != 1:
            row[:] = [v / pv for v in row]
        nz = [j for j, v in enumerate(row) if v]
        for other in self.rows + [self.obj]:
            if other is row:
                continue
            f = other[c]
            if f:
                for j in nz:
                    other[j] -= f * row[j]
        self.basis[r] = c

    def run(self, allow_artificial):
        """Minimize the current objective with Bland's rule."""
        while True:
            red = self.obj
            enter = None
            for j in range(self.width):
                if red[j] < 0 and (allow_artificial or not self.is_artificial(j)):
                    enter = j
                    break
            if enter is None:
                return
            best = None
            for i, row in enumerate(self.rows):
                if row[enter] > 0:
                    key = (row[-1] / row[enter], self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                raise InvariantError("unbounded direction in a bounded program")
            self.pivot(best[1], enter)

    def solution(self):
        y = [_ZERO] * self.width
        for i, b in enumerate(self.basis):
            y[b] = self.rows[i][-1]
        return y


def _frac(v) -> Fraction:
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    return Fraction(int(v.numerator), int(v.denominator))


def check(system: LinearSystem) -> Decision:
    """Decide ``A x <= b`` exactly."""
    r, d = len(system.rows), system.nvars
    if r == 0:
        return Feasible(tuple([Fraction(0)] * d))
    # dual: columns are the original rows, one equality per variable + one
    matrix = [[system.rows[j][i] for j in range(r)] for i in range(d)]
    matrix.append([1] * r)
    rhs = [0] * d + [1]
    tab = _Tableau(matrix, rhs)

    tab.set_cost([0] * r + [1] * (d + 1))
    tab.run(allow_artificial=True)
    red = tab.obj
    infeasibility = -red[-1]
    if infeasibility > 0:
        # no nonnegative combination of rows vanishes: A x < 0 has a solution
        pi = [_frac(1 - red[r + i]) for i in range(d + 1)]
        direction, w = pi[:d], pi[d]
        scale = max([Fraction(0)] + [-_frac(b) / w for b in system.rhs])
        point = tuple(scale * v for v in direction)
        return _feasible(system, point)

    for i, b in enumerate(tab.basis):
        if tab.is_artificial(b):
            for j in range(r):
                if tab.rows[i][j] != 0:
                    tab.pivot(i, j)
                    break

    tab.set_cost(list(system.rhs) + [0] * (d + 1))
    tab.run(allow_artificial=False)
    red = tab.obj
    lam = tab.solution()[:r]
    value = sum((_num(b) * v for b, v in zip(system.rhs, lam)), _ZERO)
    if value < 0:
        cert = InfeasibilityCertificate(tuple(_frac(v) for v in lam))
        if not verify(system, cert):
            raise InvariantError("simplex produced an invalid certificate")
        return Infeasible(cert)
    pi = [_frac(-red[r + i]) for i in range(d + 1)]
    return _feasible(system, tuple(pi[:d]))


def _feasible(system, point) -> Feasible:
    if not system.satisfied_by(point):
        raise InvariantError("simplex produced a point violating the system")
    return Feasible(point)


def build_system(state, x) -> LinearSystem:
    """Consistency system of an extended state over ``u_0 .. u_{s-1}``.

    Known probabilities enter as constants; ``u_s`` is the sentinel fixed to
    1; the total of known and drawn unknown mass is at most one.
    """
    s = state.s
    rows, rhs = [], []
    for con in state.constraints:
        # con: const + sum(coef * u_i) >= 0  ->  -sum(coef * u_i) <= const
        row = [0] * s
        const = _num(con.const)
        for idx, coef in con.coeffs:
            if idx == s:
                const += coef
            elif idx < s:
                row[idx] -= coef
            else:
                raise InvariantError(f"constraint mentions u_{idx} beyond s={s}")
        rows.append(tuple(row))
        rhs.append(const)
    rows.append(tuple([1] * s))
    rhs.append(_num(1 - x.total))
    return reduce_system(LinearSystem(s, tuple(rows), tuple(rhs)))


def reduce_system(system: LinearSystem) -> LinearSystem:
    """Same solution set with fewer rows.

    Of rows sharing a coefficient vector only the smallest bound matters,
    and all-zero rows with a non-negative bound say nothing.
    """
    tightest: dict = {}
    for row, b in zip(system.rows, system.rhs):
        if not any(row) and b >= 0:
            continue
        if row not in tightest or b < tightest[row]:
            tightest[row] = b
    rows = tuple(sorted(tightest))
    return LinearSystem(system.nvars, rows, tuple(tightest[r] for r in rows))
