"""Exact rational linear algebra and an exact simplex LP solver.

Scalars are :class:`fractions.Fraction`, vectors are tuples of fractions and
matrices are tuples of row tuples.  Every value is immutable.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

Rat = Fraction
RatVector = tuple  # tuple[Fraction, ...]
RatMatrix = tuple  # tuple[RatVector, ...]

Number = Union[int, Fraction, str]


class DimensionMismatch(ValueError):
    pass


def rat(x: Number) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are rejected: they would silently import rounding error.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def vec(xs: Iterable[Number]) -> RatVector:
    return tuple(rat(x) for x in xs)


def mat(rows: Iterable[Iterable[Number]]) -> RatMatrix:
    return tuple(vec(r) for r in rows)


def zeros(n: int) -> RatVector:
    return (Fraction(0),) * n


def unit(n: int, i: int) -> RatVector:
    return tuple(Fraction(1 if j == i else 0) for j in range(n))


def identity(n: int) -> RatMatrix:
    return tuple(unit(n, i) for i in range(n))


def _check(x: Sequence, y: Sequence) -> None:
    if len(x) != len(y):
        raise DimensionMismatch(f"dimension mismatch: {len(x)} vs {len(y)}")


def inner(x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
    _check(x, y)
    return sum((a * b for a, b in zip(x, y) if a and b), Fraction(0))


def add(x: Sequence[Fraction], y: Sequence[Fraction]) -> RatVector:
    _check(x, y)
    return tuple(a + b for a, b in zip(x, y))


def sub(x: Sequence[Fraction], y: Sequence[Fraction]) -> RatVector:
    _check(x, y)
    return tuple(a - b for a, b in zip(x, y))


def scale(c: Fraction, x: Sequence[Fraction]) -> RatVector:
    return tuple(c * a for a in x)


def neg(x: Sequence[Fraction]) -> RatVector:
    return tuple(-a for a in x)


def is_zero(x: Sequence[Fraction]) -> bool:
    return not any(x)


def matvec(M: Sequence[Sequence[Fraction]], x: Sequence[Fraction]) -> RatVector:
    return tuple(inner(row, x) for row in M)


def transpose(M: Sequence[Sequence[Fraction]], ncols: int | None = None) -> RatMatrix:
    if not M:
        return tuple(() for _ in range(ncols or 0))
    return tuple(tuple(col) for col in zip(*M))


def matmul(M: Sequence[Sequence[Fraction]], N: Sequence[Sequence[Fraction]]) -> RatMatrix:
    Nt = transpose(N)
    return tuple(tuple(inner(r, c) for c in Nt) for r in M)


def rref(M: Sequence[Sequence[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    A = [list(r) for r in M]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        p = A[r][c]
        if p != 1:
            A[r] = [v / p for v in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def rank(M: Sequence[Sequence[Fraction]], ncols: int | None = None) -> int:
    if not M:
        return 0
    return len(rref(M, ncols if ncols is not None else len(M[0]))[1])


def nullspace(M: Sequence[Sequence[Fraction]], ncols: int | None = None) -> list[RatVector]:
    """Basis of {x | Mx = 0}; empty list when the kernel is trivial."""
    if ncols is None:
        if not M:
            raise ValueError("ncols required for an empty matrix")
        ncols = len(M[0])
    R, pivots = rref(M, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, pc in zip(R, pivots):
            x[pc] = -row[f]
        basis.append(tuple(x))
    return basis


def independent_rows(M: Sequence[Sequence[Fraction]], ncols: int) -> list[int]:
    """Indices of a maximal linearly independent subset of rows (greedy, in order)."""
    chosen: list[int] = []
    basis: list[list[Fraction]] = []
    pivcols: list[int] = []
    for i, row in enumerate(M):
        r = list(row)
        for b, pc in zip(basis, pivcols):
            if r[pc] != 0:
                f = r[pc]
                r = [x - f * y for x, y in zip(r, b)]
        pc = next((c for c in range(ncols) if r[c] != 0), None)
        if pc is None:
            continue
        p = r[pc]
        r = [x / p for x in r]
        for k, b in enumerate(basis):
            if b[pc] != 0:
                f = b[pc]
                basis[k] = [x - f * y for x, y in zip(b, r)]
        basis.append(r)
        pivcols.append(pc)
        chosen.append(i)
    return chosen


def solve(M: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction], ncols: int) -> RatVector | None:
    """One solution of Mx = rhs (free variables set to 0), or None if inconsistent."""
    aug = [list(r) + [h] for r, h in zip(M, rhs)]
    R, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(R, pivots):
        x[pc] = row[ncols]
    return tuple(x)


def primitive(v: Sequence[Fraction]) -> RatVector:
    """Positive multiple of v with coprime integer entries."""
    if is_zero(v):
        return tuple(Fraction(0) for _ in v)
    den = 1
    for a in v:
        den = den * a.denominator // gcd(den, a.denominator)
    ints = [int(a * den) for a in v]
    g = 0
    for a in ints:
        g = gcd(g, a)
    return tuple(Fraction(a // g) for a in ints)


def fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# Linear programming


@dataclass(frozen=True)
class Optimal:
    value: Fraction
    point: RatVector
    iterations: int = 0


@dataclass(frozen=True)
class Unbounded:
    feasible_point: RatVector
    ray: RatVector
    iterations: int = 0


@dataclass(frozen=True)
class Infeasible:
    farkas_certificate: RatVector
    iterations: int = 0


LPOutcome = Union[Optimal, Unbounded, Infeasible]


class _Tableau:
    """Dense simplex tableau in the form  T x = rhs, x >= 0, minimise cost."""

    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int], ncols: int):
        self.T = rows
        self.rhs = rhs
        self.basis = basis
        self.ncols = ncols
        self.iterations = 0
        self.cap = 10 * (len(rows) + ncols) ** 2 + 10

    def reduced_costs(self, cost: list[Fraction]) -> tuple[list[Fraction], Fraction]:
        red = list(cost)
        val = Fraction(0)
        for i, bi in enumerate(self.basis):
            cb = cost[bi]
            if cb:
                row = self.T[i]
                for j in range(self.ncols):
                    if row[j]:
                        red[j] -= cb * row[j]
                val += cb * self.rhs[i]
        return red, val

    def pivot(self, r: int, c: int, red: list[Fraction]) -> Fraction:
        T = self.T
        prow = T[r]
        p = prow[c]
        if p != 1:
            prow = [v / p for v in prow]
            T[r] = prow
            self.rhs[r] /= p
        nz = [j for j in range(self.ncols) if prow[j]]
        rr = self.rhs[r]
        for i in range(len(T)):
            if i == r:
                continue
            row = T[i]
            f = row[c]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]
                self.rhs[i] -= f * rr
        f = red[c]
        delta = Fraction(0)
        if f:
            for j in nz:
                red[j] -= f * prow[j]
            delta = f * rr
        self.basis[r] = c
        self.iterations += 1
        if self.iterations > self.cap:
            raise RuntimeError("simplex iteration cap exceeded")
        return delta

    def run(self, red: list[Fraction], allowed: int) -> int | None:
        """Bland's rule; returns None at optimality or the unbounded column."""
        while True:
            c = next((j for j in range(allowed) if red[j] < 0), None)
            if c is None:
                return None
            best = None
            for i, row in enumerate(self.T):
                if row[c] > 0:
                    ratio = self.rhs[i] / row[c]
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return c
            self.pivot(best[1], c, red)


def lp_solve(objective: Sequence[Fraction], P, sense: str = "max") -> LPOutcome:
    """Optimise ``<objective, x>`` over the H-polyhedron ``P`` exactly.

    Two-phase dense simplex with Bland's anti-cycling rule over free variables
    split as x = x+ - x-.  Infeasibility comes with a Farkas certificate
    y (y >= 0 on inequality rows, y^T [A; E] = 0, y^T [b; d] < 0) and
    unboundedness with an improving recession ray.
    """
    if sense not in ("min", "max"):
        raise ValueError("sense must be 'min' or 'max'")
    n = P.dim
    c = vec(objective)
    if len(c) != n:
        raise DimensionMismatch(f"objective has dim {len(c)}, polyhedron has dim {n}")
    A, b, E, d = P.A, P.b, P.E, P.d
    mi, me = len(A), len(E)
    m = mi + me
    # columns: x+ (n), x- (n), slacks (mi), artificials (added below)
    nstruct = 2 * n + mi
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    signs: list[int] = []
    for i in range(m):
        coeffs = A[i] if i < mi else E[i - mi]
        h = b[i] if i < mi else d[i - mi]
        s = -1 if h < 0 else 1
        row = [Fraction(0)] * nstruct
        for j, a in enumerate(coeffs):
            if a:
                row[j] = s * a
                row[n + j] = -s * a
        if i < mi:
            row[2 * n + i] = Fraction(s)
        rows.append(row)
        rhs.append(s * h)
        signs.append(s)
    basis: list[int] = []
    art_rows = []
    for i in range(m):
        if i < mi and signs[i] == 1:
            basis.append(2 * n + i)
        else:
            basis.append(-1)
            art_rows.append(i)
    nart = len(art_rows)
    ncols = nstruct + nart
    for row in rows:
        row.extend([Fraction(0)] * nart)
    for k, i in enumerate(art_rows):
        rows[i][nstruct + k] = Fraction(1)
        basis[i] = nstruct + k
    tab = _Tableau(rows, rhs, basis, ncols)

    if nart:
        cost1 = [Fraction(0)] * nstruct + [Fraction(1)] * nart
        red, _ = tab.reduced_costs(cost1)
        tab.run(red, ncols)
        w = sum((tab.rhs[i] for i, bi in enumerate(tab.basis) if bi >= nstruct), Fraction(0))
        if w > 0:
            y = _farkas(P, rows_orig=(A, E), signs=signs, tab=tab, cost=cost1, n=n)
            return Infeasible(y, tab.iterations)
        # drive zero-level artificials out of the basis, dropping redundant rows
        i = 0
        while i < len(tab.T):
            if tab.basis[i] >= nstruct:
                c_in = next((j for j in range(nstruct) if tab.T[i][j] != 0), None)
                if c_in is None:
                    del tab.T[i], tab.rhs[i], tab.basis[i]
                    continue
                tab.pivot(i, c_in, [Fraction(0)] * ncols)
            i += 1
        for row in tab.T:
            del row[nstruct:]
        tab.ncols = nstruct

    sgn = -1 if sense == "max" else 1
    cost = [sgn * v for v in c] + [-sgn * v for v in c] + [Fraction(0)] * mi
    red, _ = tab.reduced_costs(cost)
    col = tab.run(red, nstruct)
    z = [Fraction(0)] * nstruct
    for i, bi in enumerate(tab.basis):
        z[bi] = tab.rhs[i]
    x = tuple(z[j] - z[n + j] for j in range(n))
    if col is not None:
        dz = [Fraction(0)] * nstruct
        dz[col] = Fraction(1)
        for i, bi in enumerate(tab.basis):
            dz[bi] = -tab.T[i][col]
        ray = tuple(dz[j] - dz[n + j] for j in range(n))
        return Unbounded(x, ray, tab.iterations)
    return Optimal(inner(c, x), x, tab.iterations)


def _farkas(P, rows_orig, signs, tab: _Tableau, cost, n) -> RatVector:
    A, E = rows_orig
    mi = len(A)
    m = len(signs)
    # original (sign-flipped) constraint columns of the final basis
    full = []
    for i in range(m):
        coeffs = A[i] if i < mi else E[i - mi]
        s = signs[i]
        row = [Fraction(0)] * tab.ncols
        for j, a in enumerate(coeffs):
            if a:
                row[j] = s * a
                row[n + j] = -s * a
        if i < mi:
            row[2 * n + i] = Fraction(s)
        full.append(row)
    nstruct = 2 * n + mi
    k = 0
    for i in range(m):
        if not (i < mi and signs[i] == 1):
            full[i][nstruct + k] = Fraction(1)
            k += 1
    Bt = [[full[i][bj] for i in range(m)] for bj in tab.basis]
    cb = [cost[bj] for bj in tab.basis]
    pi = solve(Bt, cb, m)
    if pi is None:
        raise ArithmeticError("singular phase-one basis")
    y = tuple(-signs[i] * pi[i] for i in range(m))
    if not verify_farkas(P, y):
        raise ArithmeticError("internal error: Farkas certificate failed verification")
    return y


def verify_farkas(P, y: Sequence[Fraction]) -> bool:
    mi = len(P.A)
    rows = list(P.A) + list(P.E)
    rhs = list(P.b) + list(P.d)
    if len(y) != len(rows):
        return False
    if any(y[i] < 0 for i in range(mi)):
        return False
    comb = [Fraction(0)] * P.dim
    for yi, row in zip(y, rows):
        if yi:
            for j, a in enumerate(row):
                comb[j] += yi * a
    return is_zero(comb) and inner(y, rhs) < 0
