"""Exact H-polytope computations: LP, vertices, volumes, lattice points.

Polytopes are given by integer normal vectors and Scalar offsets, with each
row read as <u, normal> >= offset.  Everything is exact; when every offset
is rational the internals run on plain Fractions for speed and results are
wrapped back into Scalars at the API boundary.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import EmptyPolytope, UnboundedPolytope
from .linalg import affine_rank, det, kernel_basis, nullspace_vector, solve_square
from .scalars import Scalar

__all__ = [
    "HPolytope",
    "LPProblem",
    "LPResult",
    "lp_solve",
    "vertices",
    "euclidean_volume",
    "lattice_points",
    "lattice_point_list",
    "facet_lattice_volume",
    "is_feasible",
    "is_bounded",
]


def _as_scalar(x) -> Scalar:
    return x if isinstance(x, Scalar) else Scalar(x)


@dataclass(frozen=True)
class HPolytope:
    """{u in R^dim : <u, normal_i> >= offset_i for every row i}."""

    dim: int
    rows: tuple[tuple[tuple[int, ...], Scalar], ...]

    def __post_init__(self):
        object.__setattr__(
            self,
            "rows",
            tuple((tuple(int(c) for c in g), _as_scalar(o)) for g, o in self.rows),
        )
        for g, _ in self.rows:
            if len(g) != self.dim:
                raise ValueError(f"normal {g} has wrong length for dim {self.dim}")
            if not any(g):
                raise ValueError("zero normal vector in polytope row")

    def contains(self, point) -> bool:
        return all(sum(c * x for c, x in zip(g, point)) >= o for g, o in self.rows)

    def scale(self, factor) -> "HPolytope":
        """Dilation by factor > 0 about the origin."""
        f = _as_scalar(factor)
        return HPolytope(self.dim, tuple((g, o * f) for g, o in self.rows))

    def translate(self, shift) -> "HPolytope":
        return HPolytope(
            self.dim,
            tuple((g, o + sum(c * s for c, s in zip(g, shift))) for g, o in self.rows),
        )


def _offsets_for_field(p: HPolytope):
    """Offsets as Fractions when possible (fast lane), else Scalars."""
    if all(o.disc == 0 for _, o in p.rows):
        return [o.rat for _, o in p.rows]
    return [o for _, o in p.rows]


# ---------------------------------------------------------------------------
# simplex


@dataclass(frozen=True)
class LPProblem:
    """Minimize <objective, u> + constant over an HPolytope."""

    objective: tuple[int, ...]
    constraints: HPolytope
    constant: Scalar = Scalar(0)

    def __post_init__(self):
        object.__setattr__(self, "objective", tuple(int(c) for c in self.objective))
        object.__setattr__(self, "constant", _as_scalar(self.constant))
        if len(self.objective) != self.constraints.dim:
            raise ValueError("objective length does not match constraint dimension")


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Scalar | None = None
    point: tuple[Scalar, ...] | None = None


def _pivot(tableau, basis, row, col):
    prow = tableau[row]
    pval = prow[col]
    if pval != 1:
        tableau[row] = prow = [x / pval for x in prow]
    for r, trow in enumerate(tableau):
        if r != row and trow[col] != 0:
            f = trow[col]
            tableau[r] = [a - f * b for a, b in zip(trow, prow)]
    basis[row] = col


def _bland(tableau, basis, cost, allowed):
    """Run simplex with Bland's rule; returns 'optimal' or 'unbounded'.

    cost is the reduced-cost row (mutated in place), tableau rows end with
    the rhs column.
    """
    m = len(tableau)
    while True:
        enter = next((j for j in allowed if cost[j] < 0), None)
        if enter is None:
            return "optimal"
        best = None
        for r in range(m):
            a = tableau[r][enter]
            if a > 0:
                ratio = tableau[r][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[r] < basis[best[1]]):
                    best = (ratio, r)
        if best is None:
            return "unbounded"
        row = best[1]
        _pivot(tableau, basis, row, enter)
        f = cost[enter]
        if f != 0:
            prow = tableau[row]
            for j in range(len(cost)):
                cost[j] -= f * prow[j]


def lp_solve(problem: LPProblem) -> LPResult:
    """Exact two-phase simplex over the ordered field of the offsets."""
    poly = problem.constraints
    n = poly.dim
    m = len(poly.rows)
    offs = _offsets_for_field(poly)
    zero = offs[0] * 0 if m else Fraction(0)

    # columns: u+ (n) | u- (n) | slack (m) | artificial (m) | rhs
    nstruct = 2 * n + m
    ncols = nstruct + m
    tableau = []
    basis = []
    for i, (g, _) in enumerate(poly.rows):
        o = offs[i]
        flip = -1 if o < 0 else 1
        row = [zero] * (ncols + 1)
        for j, c in enumerate(g):
            row[j] = row[j] + flip * c
            row[n + j] = row[n + j] - flip * c
        row[2 * n + i] = row[2 * n + i] - flip
        row[nstruct + i] = row[nstruct + i] + 1
        row[-1] = flip * o
        tableau.append(row)
        basis.append(nstruct + i)

    # phase 1: minimize sum of artificials
    cost = [zero] * (ncols + 1)
    for r in range(m):
        cost = [c - t for c, t in zip(cost, tableau[r])]
    for i in range(m):
        cost[nstruct + i] = cost[nstruct + i] + 1
    status = _bland(tableau, basis, cost, range(ncols))
    if -cost[-1] > 0:
        return LPResult("infeasible")
    for r in range(m):
        if basis[r] >= nstruct:
            col = next((j for j in range(nstruct) if tableau[r][j] != 0), None)
            if col is not None:
                _pivot(tableau, basis, r, col)
    live = [r for r in range(m) if basis[r] < nstruct]
    tableau = [tableau[r] for r in live]
    basis = [basis[r] for r in live]

    # phase 2
    cost = [zero] * (ncols + 1)
    for j, c in enumerate(problem.objective):
        cost[j] = cost[j] + c
        cost[n + j] = cost[n + j] - c
    for r, b in enumerate(basis):
        f = cost[b]
        if f != 0:
            cost = [a - f * t for a, t in zip(cost, tableau[r])]
    status = _bland(tableau, basis, cost, range(nstruct))
    if status == "unbounded":
        return LPResult("unbounded")

    values = {b: tableau[r][-1] for r, b in enumerate(basis)}
    point = tuple(values.get(j, zero) - values.get(n + j, zero) for j in range(n))
    point = _purify(poly, problem.objective, point)
    value = sum((c * x for c, x in zip(problem.objective, point)), _as_scalar(zero) * 0)
    return LPResult(
        "optimal",
        _as_scalar(value) + problem.constant,
        tuple(_as_scalar(x) for x in point),
    )


def _purify(poly: HPolytope, objective, point):
    """Walk within the optimal face until the point is a vertex.

    Keeps the objective value fixed and only ever tightens constraints, so
    the result is a vertex of the feasible region attaining the optimum
    whenever the region is pointed.
    """
    offs = _offsets_for_field(poly)
    n = poly.dim
    for _ in range(n + 1):
        slack = [sum(c * x for c, x in zip(g, point)) - offs[i] for i, (g, _) in enumerate(poly.rows)]
        tight = [list(poly.rows[i][0]) for i in range(len(slack)) if slack[i] == 0]
        d = nullspace_vector(tight + [list(objective)], n)
        if d is None:
            return point
        moved = False
        for direction in (d, tuple(-x for x in d)):
            tmax = None
            for i, (g, _) in enumerate(poly.rows):
                gd = sum(c * x for c, x in zip(g, direction))
                if gd < 0:
                    t = slack[i] / (-gd)
                    if tmax is None or t < tmax:
                        tmax = t
            if tmax is not None:
                point = tuple(x + tmax * dx for x, dx in zip(point, direction))
                moved = True
                break
        if not moved:
            return point
    return point


# ---------------------------------------------------------------------------
# vertices and feasibility


@lru_cache(maxsize=None)
def _recession_bounded(normals: tuple[tuple[int, ...], ...], dim: int) -> bool:
    """True iff {u : <u, g> >= 0 for all g} is the origin alone."""
    cone = HPolytope(dim, tuple((g, Scalar(0)) for g in normals))
    for axis in range(dim):
        for sign in (1, -1):
            obj = tuple(sign if j == axis else 0 for j in range(dim))
            if lp_solve(LPProblem(obj, cone)).status == "unbounded":
                return False
    return True


def is_bounded(p: HPolytope) -> bool:
    return _recession_bounded(tuple(g for g, _ in p.rows), p.dim)


@lru_cache(maxsize=None)
def _vertex_set(p: HPolytope) -> tuple[tuple[Scalar, ...], ...]:
    """All vertices of a bounded polytope (empty tuple when infeasible)."""
    if not is_bounded(p):
        raise UnboundedPolytope("polytope has a nontrivial recession cone")
    offs = _offsets_for_field(p)
    n = p.dim
    found = {}
    for idx in itertools.combinations(range(len(p.rows)), n):
        mat = [p.rows[i][0] for i in idx]
        sol = solve_square(mat, [offs[i] for i in idx])
        if sol is None:
            continue
        ok = True
        for i, (g, _) in enumerate(p.rows):
            if sum(c * x for c, x in zip(g, sol)) < offs[i]:
                ok = False
                break
        if ok:
            key = tuple(_as_scalar(x) for x in sol)
            found[key] = None
    return tuple(sorted(found))


def is_feasible(p: HPolytope) -> bool:
    return bool(_vertex_set(p))


def vertices(p: HPolytope) -> set[tuple[Scalar, ...]]:
    """Vertex set; raises on unbounded or empty input."""
    vs = _vertex_set(p)
    if not vs:
        raise EmptyPolytope("polytope has no feasible point")
    return set(vs)


# ---------------------------------------------------------------------------
# volume


def _tight_sets(vert_list, rows, offs):
    """For each row, indices of vertices lying on its hyperplane."""
    out = []
    for i, (g, _) in enumerate(rows):
        out.append(
            frozenset(
                k
                for k, v in enumerate(vert_list)
                if sum(c * x for c, x in zip(g, v)) == offs[i]
            )
        )
    return out


def _triangulate(face: frozenset, dim: int, vert_list, tight_by_row):
    """Triangulate a dim-dimensional face into vertex-index simplices."""
    if dim == 0:
        return [(min(face),)]
    apex = min(face)
    seen = set()
    simplices = []
    for trow in tight_by_row:
        sub = face & trow
        if not sub or sub == face or apex in sub or sub in seen:
            continue
        if affine_rank([vert_list[k] for k in sub]) != dim - 1:
            continue
        seen.add(sub)
        for s in _triangulate(sub, dim - 1, vert_list, tight_by_row):
            simplices.append((apex,) + s)
    return simplices


@lru_cache(maxsize=None)
def euclidean_volume(p: HPolytope) -> Scalar:
    """Exact n-volume by coning facet triangulations over the vertex centroid."""
    vs = _vertex_set(p)
    if not vs:
        raise EmptyPolytope("cannot take the volume of an empty polytope")
    n = p.dim
    vert_list = [tuple(v) for v in vs]
    if affine_rank(vert_list) < n:
        return Scalar(0)
    offs = [o for _, o in p.rows]
    tight_by_row = _tight_sets(vert_list, p.rows, offs)
    k = len(vert_list)
    centroid = tuple(sum((v[j] for v in vert_list), Scalar(0)) / k for j in range(n))
    total = Scalar(0)
    nfact = math.factorial(n)
    all_idx = frozenset(range(k))
    done = set()
    for trow in tight_by_row:
        if trow in done or not trow or trow == all_idx:
            continue
        done.add(trow)
        if affine_rank([vert_list[i] for i in trow]) != n - 1:
            continue
        for simplex in _triangulate(trow, n - 1, vert_list, tight_by_row):
            mat = [
                [vert_list[i][j] - centroid[j] for j in range(n)]
                for i in simplex
            ]
            total = total + abs(det(mat)) / nfact
    return total


# ---------------------------------------------------------------------------
# lattice points


def _iter_lattice(p: HPolytope):
    """Yield the integer points: box on leading coordinates, exact interval
    on the last one."""
    vs = _vertex_set(p)
    if not vs:
        return
    n = p.dim
    offs = _offsets_for_field(p)
    rows = [(g, offs[i]) for i, (g, _) in enumerate(p.rows)]
    if n == 1:
        lo, hi = None, None
        for (g,), o in rows:
            bound = o / g
            if g > 0:
                lo = bound if lo is None or bound > lo else lo
            else:
                hi = bound if hi is None or bound < hi else hi
        for t in range(math.ceil(lo), math.floor(hi) + 1):
            yield (t,)
        return
    boxes = []
    for j in range(n - 1):
        coords = [v[j] for v in vs]
        boxes.append(range(math.ceil(min(coords)), math.floor(max(coords)) + 1))
    for prefix in itertools.product(*boxes):
        lo, hi = None, None
        feasible = True
        for g, o in rows:
            s = sum(c * x for c, x in zip(g, prefix))
            gl = g[-1]
            if gl == 0:
                if s < o:
                    feasible = False
                    break
            else:
                bound = (o - s) / gl
                if gl > 0:
                    lo = bound if lo is None or bound > lo else lo
                else:
                    hi = bound if hi is None or bound < hi else hi
        if not feasible:
            continue
        for t in range(math.ceil(lo), math.floor(hi) + 1):
            yield prefix + (t,)


def lattice_points(p: HPolytope) -> int:
    """Number of integer points; 0 for empty, error when unbounded."""
    count = 0
    for _ in _iter_lattice(p):
        count += 1
    return count


def lattice_point_list(p: HPolytope) -> list[tuple[int, ...]]:
    return list(_iter_lattice(p))


# ---------------------------------------------------------------------------
# facet volume against the induced lattice


def facet_lattice_volume(p: HPolytope, facet_row: int) -> Scalar:
    """(n-1)-volume of a facet, measured in the lattice of its affine hull.

    Returns 0 when the row supports a face of dimension below n-1.
    """
    g, c = p.rows[facet_row]
    if not is_bounded(p):
        raise UnboundedPolytope("facet volume needs a bounded polytope")
    n = p.dim
    g0 = 0
    for x in g:
        g0 = math.gcd(g0, abs(x))
    gprim = tuple(x // g0 for x in g)
    cprim = c / g0
    if n == 1:
        point = (cprim / gprim[0],)
        return Scalar(1) if p.contains(point) else Scalar(0)
    # base point of the hyperplane and a lattice basis of its direction
    j = next(i for i, x in enumerate(gprim) if x)
    u0 = [Scalar(0)] * n
    u0[j] = cprim / gprim[j]
    basis = kernel_basis(gprim)
    slice_rows = []
    for i, (h, d) in enumerate(p.rows):
        if i == facet_row:
            continue
        hb = tuple(sum(hc * bc for hc, bc in zip(h, b)) for b in basis)
        d2 = d - sum(hc * x for hc, x in zip(h, u0))
        if not any(hb):
            if d2 > 0:
                return Scalar(0)
            continue
        slice_rows.append((hb, d2))
    sliced = HPolytope(n - 1, tuple(slice_rows))
    try:
        return euclidean_volume(sliced)
    except EmptyPolytope:
        return Scalar(0)
