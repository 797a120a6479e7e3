"""Multiplicity-constrained interpolation via exact nullspaces over F_q.

Builds the homogeneous linear system that forces a polynomial (in a
total-degree or weighted-degree monomial basis) to vanish with multiplicity
at least m at every prescribed point, then extracts a nonzero kernel vector
by exact Gaussian elimination with deterministic pivoting.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .errors import (
    InternalNoSolution,
    InvalidParameters,
    UnsatisfiedCountHypothesis,
)
from .ff import FieldSpec
from .mvpoly import MultiPoly, coerce_point, exponents_below_weight


def count_total_degree_monomials(n: int, d: int) -> int:
    """Number of monomials in n variables of total degree at most d."""
    if n < 1 or d < 0:
        raise InvalidParameters(f"need n >= 1 and d >= 0, got n={n}, d={d}")
    return comb(d + n, n)


def count_weighted_monomials(k: int, d: int, theta) -> int:
    """Number of monomials X^i Y^j with i + k*j <= d and j <= floor(theta*d/k)."""
    theta = Fraction(theta)
    if not (0 < k < d) or not (0 <= theta <= 1):
        raise InvalidParameters(
            f"need 0 < k < d and theta in [0,1], got k={k}, d={d}, theta={theta}"
        )
    jmax = (theta * d) // k
    return sum(d - k * j + 1 for j in range(int(jmax) + 1) if d - k * j >= 0)


@dataclass(frozen=True)
class TotalDegreeBasis:
    """All monomials of total degree <= d in n variables, graded-lex ordered."""

    n: int
    d: int

    def monomials(self) -> list[tuple[int, ...]]:
        return list(exponents_below_weight(self.d + 1, self.n))

    def count(self) -> int:
        return count_total_degree_monomials(self.n, self.d)


@dataclass(frozen=True)
class WeightedDegreeBasis:
    """Bivariate monomials X^i Y^j with i + k*j <= d and j <= ydeg_cap.

    Ordered by (weighted degree, j, i) for deterministic columns.
    """

    d: int
    k: int
    ydeg_cap: int

    def monomials(self) -> list[tuple[int, int]]:
        mons = [
            (i, j)
            for j in range(self.ydeg_cap + 1)
            for i in range(self.d - self.k * j + 1)
            if self.d - self.k * j >= 0
        ]
        mons.sort(key=lambda ij: (ij[0] + self.k * ij[1], ij[1], ij[0]))
        return mons

    def count(self) -> int:
        return len(self.monomials())


@dataclass(frozen=True)
class InterpolationProblem:
    """Vanish with multiplicity >= m at each point, within the given basis."""

    spec: FieldSpec
    n: int
    points: tuple[tuple[int, ...], ...]
    m: int
    basis: TotalDegreeBasis | WeightedDegreeBasis

    def __post_init__(self):
        pts = tuple(coerce_point(self.spec, self.n, p) for p in self.points)
        if len(set(pts)) != len(pts):
            raise InvalidParameters("interpolation points must be duplicate-free")
        if self.m < 1:
            raise InvalidParameters(f"multiplicity must be >= 1, got {self.m}")
        object.__setattr__(self, "points", pts)

    def constraint_count(self) -> int:
        return comb(self.m + self.n - 1, self.n) * len(self.points)


def vanishing_constraints(problem: InterpolationProblem) -> list[list[int]]:
    """One row per (point a, order i with wt(i) < m), expressing P^(i)(a) = 0.

    The column for monomial r carries C(r, i) * a^(r - i), zero when r < i
    coordinatewise; columns follow the basis order.
    """
    spec = problem.spec
    p = spec.p
    monomials = problem.basis.monomials()
    maxdeg = [max((r[j] for r in monomials), default=0) for j in range(problem.n)]
    rows: list[list[int]] = []
    for a in problem.points:
        powtab = []
        for j in range(problem.n):
            tab = [1] * (maxdeg[j] + 1)
            for e in range(1, maxdeg[j] + 1):
                tab[e] = spec.mul(tab[e - 1], a[j])
            powtab.append(tab)
        for i in exponents_below_weight(problem.m, problem.n):
            row = []
            for r in monomials:
                if any(rk < ik for rk, ik in zip(r, i)):
                    row.append(0)
                    continue
                b = 1
                for rk, ik in zip(r, i):
                    b = (b * comb(rk, ik)) % p
                    if not b:
                        break
                val = spec.from_int(b)
                for j, (rk, ik) in enumerate(zip(r, i)):
                    if val and rk > ik:
                        val = spec.mul(val, powtab[j][rk - ik])
                row.append(val)
            rows.append(row)
    return rows


def nullspace_vector(rows: list[list[int]], ncols: int, spec: FieldSpec):
    """A nonzero kernel vector of the matrix, or None when the kernel is trivial.

    Exact elimination; the pivot for each column is the first row with a
    nonzero entry there, and the returned vector sets the first free column
    to one, making the choice canonical.
    """
    if ncols == 0:
        return None
    if not rows:
        vec = [0] * ncols
        vec[0] = 1
        return vec
    if spec.e == 1:
        return _nullspace_prime(rows, ncols, spec.p)
    return _nullspace_generic(rows, ncols, spec)


def _nullspace_prime(rows, ncols, p):
    A = np.array(rows, dtype=np.int64) % p
    nrows = A.shape[0]
    pivots: list[tuple[int, int]] = []  # (row, col)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            A[[r, pr]] = A[[pr, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r] = (A[r] * inv) % p
        factors = A[:, c].copy()
        factors[r] = 0
        if np.any(factors):
            A = (A - np.outer(factors, A[r])) % p
        pivots.append((r, c))
        r += 1
    pivot_cols = {c for _, c in pivots}
    free = next((c for c in range(ncols) if c not in pivot_cols), None)
    if free is None:
        return None
    vec = [0] * ncols
    vec[free] = 1
    for rr, cc in pivots:
        vec[cc] = (-int(A[rr, free])) % p
    return vec


def _nullspace_generic(rows, ncols, spec: FieldSpec):
    A = [list(row) for row in rows]
    nrows = len(A)
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pr = next((idx for idx in range(r, nrows) if A[idx][c]), None)
        if pr is None:
            continue
        if pr != r:
            A[r], A[pr] = A[pr], A[r]
        inv = spec.inv(A[r][c])
        A[r] = [spec.mul(inv, x) for x in A[r]]
        for idx in range(nrows):
            if idx != r and A[idx][c]:
                f = A[idx][c]
                A[idx] = [spec.sub(x, spec.mul(f, y)) for x, y in zip(A[idx], A[r])]
        pivots.append((r, c))
        r += 1
    pivot_cols = {c for _, c in pivots}
    free = next((c for c in range(ncols) if c not in pivot_cols), None)
    if free is None:
        return None
    vec = [0] * ncols
    vec[free] = 1
    for rr, cc in pivots:
        vec[cc] = spec.neg(A[rr][free])
    return vec


def matrix_rank(rows: list[list[int]], ncols: int, spec: FieldSpec) -> int:
    """Rank over F_q, by the same elimination used for kernel extraction."""
    if not rows or ncols == 0:
        return 0
    A = [list(row) for row in rows]
    nrows = len(A)
    rank = 0
    for c in range(ncols):
        if rank == nrows:
            break
        pr = next((idx for idx in range(rank, nrows) if A[idx][c]), None)
        if pr is None:
            continue
        A[rank], A[pr] = A[pr], A[rank]
        inv = spec.inv(A[rank][c])
        A[rank] = [spec.mul(inv, x) for x in A[rank]]
        for idx in range(nrows):
            if idx != rank and A[idx][c]:
                f = A[idx][c]
                A[idx] = [spec.sub(x, spec.mul(f, y)) for x, y in zip(A[idx], A[rank])]
        rank += 1
    return rank


def vanishing_interpolation(problem: InterpolationProblem, verify: bool = False) -> MultiPoly:
    """A nonzero polynomial vanishing with multiplicity >= m on every point.

    Requires strictly more basis monomials than linear constraints; with that
    hypothesis the kernel is nontrivial and the construction cannot fail.
    """
    monomials = problem.basis.monomials()
    n_constraints = problem.constraint_count()
    if n_constraints >= len(monomials):
        raise UnsatisfiedCountHypothesis(
            f"{n_constraints} constraints vs {len(monomials)} monomials: "
            "existence is not guaranteed"
        )
    rows = vanishing_constraints(problem)
    vec = nullspace_vector(rows, len(monomials), problem.spec)
    if vec is None:
        raise InternalNoSolution(
            "no kernel vector although the count hypothesis held"
        )
    poly = MultiPoly(
        problem.spec,
        problem.n,
        {mono: c for mono, c in zip(monomials, vec) if c},
    )
    if verify:
        from .mvpoly import multiplicity

        assert not poly.is_zero, "kernel vector produced the zero polynomial"
        for a in problem.points:
            got = multiplicity(poly, a)
            assert got >= problem.m, (
                f"constructed polynomial has multiplicity {got} < {problem.m} at {a}"
            )
    return poly


def shell_count(m: int, n: int) -> int:
    """Number of derivative orders of weight < m in n variables."""
    return comb(m + n - 1, n)


def problem_to_json(problem: InterpolationProblem) -> dict:
    """JSON problem descriptor: field string, points, m, basis descriptor."""
    spec = problem.spec
    field = str(spec.p) if spec.e == 1 else f"{spec.p}^{spec.e}"
    basis = problem.basis
    if isinstance(basis, TotalDegreeBasis):
        basis_desc = {"type": "total_degree", "d": basis.d}
    else:
        basis_desc = {
            "type": "weighted_degree",
            "d": basis.d,
            "k": basis.k,
            "ydeg_cap": basis.ydeg_cap,
        }
    return {
        "field": field,
        "n": problem.n,
        "points": [list(p) for p in problem.points],
        "m": problem.m,
        "basis": basis_desc,
    }


def problem_from_json(data: dict) -> InterpolationProblem:
    from .ff import parse_field_spec

    spec = parse_field_spec(data["field"])
    n = int(data["n"])
    desc = data["basis"]
    if desc["type"] == "total_degree":
        basis = TotalDegreeBasis(n, int(desc["d"]))
    elif desc["type"] == "weighted_degree":
        basis = WeightedDegreeBasis(int(desc["d"]), int(desc["k"]), int(desc["ydeg_cap"]))
    else:
        raise InvalidParameters(f"unknown basis type {desc['type']!r}")
    return InterpolationProblem(
        spec, n, tuple(tuple(p) for p in data["points"]), int(data["m"]), basis
    )
