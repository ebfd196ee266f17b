"""Divisor calculus on complete toric varieties.

A divisor is one Scalar coefficient per ray of a complete simplicial fan.
Sections of its rounding are lattice points of the H-polytope with rows
<u, ray> >= -coeff, which turns Hilbert functions, volumes, sigma
multiplicities and base loci into exact polyhedral computations.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    NoSections,
    NoStabilization,
    NonSimplicialCone,
    NotBig,
    NotNef,
    NotEffective,
    RdivError,
    UnsupportedDivisor,
)
from .linalg import affine_rank, matrix_rank, primitive, solve_square
from .polyhedra import (
    HPolytope,
    LPProblem,
    euclidean_volume,
    facet_lattice_volume,
    lattice_point_list,
    lattice_points,
    lp_solve,
    _vertex_set,
)
from .scalars import Scalar

__all__ = [
    "Fan",
    "TDivisor",
    "SigmaDecomposition",
    "HilbertRow",
    "preset_fan",
    "polytope_of",
    "h0",
    "hilbert_table",
    "volume",
    "is_big",
    "is_nef",
    "sigma",
    "sigma_decomposition",
    "bplus_div",
    "intersection_nef",
    "intersection_nef_div",
    "sigma_limit_oracle",
    "ample_divisor",
    "principal_divisor",
]


@dataclass(frozen=True)
class Fan:
    """Complete simplicial rational fan, rays primitive."""

    dim: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[tuple[int, ...], ...]
    names: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(tuple(int(x) for x in r) for r in self.rays))
        object.__setattr__(self, "max_cones", tuple(tuple(sorted(c)) for c in self.max_cones))
        object.__setattr__(self, "names", tuple(self.names))
        self.validate()

    def validate(self):
        for r in self.rays:
            if len(r) != self.dim:
                raise ValueError(f"ray {r} has wrong dimension")
            if not any(r) or primitive(r) != r:
                raise ValueError(f"ray {r} is not primitive")
        if len(set(self.rays)) != len(self.rays):
            raise ValueError("duplicate rays")
        facets: dict[tuple[int, ...], int] = {}
        for cone in self.max_cones:
            if len(cone) != self.dim:
                raise NonSimplicialCone(f"cone {cone} is not simplicial of full dimension")
            if matrix_rank([self.rays[i] for i in cone]) != self.dim:
                raise NonSimplicialCone(f"cone {cone} has linearly dependent rays")
            for facet in itertools.combinations(cone, self.dim - 1):
                facets[facet] = facets.get(facet, 0) + 1
        for facet, count in facets.items():
            if count != 2:
                raise ValueError(
                    f"wall {facet} lies on {count} maximal cones; fan is not complete"
                )

    @property
    def nrays(self) -> int:
        return len(self.rays)

    def ray_index(self, key) -> int:
        if isinstance(key, int):
            if not 0 <= key < self.nrays:
                raise KeyError(f"ray index {key} out of range")
            return key
        for name, idx in self.names:
            if name == key:
                return idx
        if isinstance(key, str) and key.startswith("r") and key[1:].isdigit():
            return self.ray_index(int(key[1:]))
        if isinstance(key, str) and key.isdigit():
            return self.ray_index(int(key))
        raise KeyError(f"unknown ray {key!r}")

    def ray_name(self, idx: int) -> str:
        for name, i in self.names:
            if i == idx:
                return name
        return f"r{idx}"

    def divisor(self, coeffs) -> "TDivisor":
        """Build a divisor from a sequence or a {ray: coefficient} mapping."""
        if isinstance(coeffs, dict):
            vec = [Scalar(0)] * self.nrays
            for key, val in coeffs.items():
                vec[self.ray_index(key)] = val if isinstance(val, Scalar) else Scalar(val)
            return TDivisor(self, tuple(vec))
        return TDivisor(self, tuple(c if isinstance(c, Scalar) else Scalar(c) for c in coeffs))


def preset_fan(name: str) -> Fan:
    """Named fans: P2, P3, P1xP1 and the Hirzebruch series F1, F2, ..."""
    key = name.replace("_", "").upper()
    if key == "P2":
        return Fan(
            2,
            ((1, 0), (0, 1), (-1, -1)),
            ((0, 1), (1, 2), (2, 0)),
            (("H", 2),),
        )
    if key == "P3":
        return Fan(
            3,
            ((1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)),
            ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)),
            (("H", 3),),
        )
    if key == "P1XP1":
        return Fan(
            2,
            ((1, 0), (0, 1), (-1, 0), (0, -1)),
            ((0, 1), (1, 2), (2, 3), (3, 0)),
            (("H1", 2), ("H2", 3)),
        )
    if key.startswith("F") and key[1:].isdigit():
        e = int(key[1:])
        return Fan(
            2,
            ((1, 0), (0, 1), (-1, e), (0, -1)),
            ((0, 1), (1, 2), (2, 3), (3, 0)),
            (("F", 0), ("E", 1), ("C", 3)),
        )
    raise ValueError(f"unknown fan preset {name!r}")


@dataclass(frozen=True)
class TDivisor:
    """Torus-invariant R-divisor: one coefficient per ray."""

    fan: Fan
    coeffs: tuple[Scalar, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.fan.nrays:
            raise ValueError("coefficient count does not match ray count")
        object.__setattr__(
            self, "coeffs", tuple(c if isinstance(c, Scalar) else Scalar(c) for c in self.coeffs)
        )

    def __add__(self, other: "TDivisor") -> "TDivisor":
        self._same_fan(other)
        return TDivisor(self.fan, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "TDivisor") -> "TDivisor":
        self._same_fan(other)
        return TDivisor(self.fan, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, m) -> "TDivisor":
        m = m if isinstance(m, Scalar) else Scalar(m)
        return TDivisor(self.fan, tuple(m * c for c in self.coeffs))

    def _same_fan(self, other):
        if self.fan != other.fan:
            raise ValueError("divisors live on different fans")

    def is_effective(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def support(self) -> frozenset[int]:
        return frozenset(i for i, c in enumerate(self.coeffs) if c)

    def coeff_map(self) -> dict[str, Scalar]:
        return {self.fan.ray_name(i): c for i, c in enumerate(self.coeffs)}


def _check_tdivisor(D):
    if not isinstance(D, TDivisor):
        raise UnsupportedDivisor(
            "toric operations need a torus-invariant divisor on a fan; "
            "divisors with non-invariant components belong to the surface model"
        )
    return D


def polytope_of(D: TDivisor) -> HPolytope:
    """Section polytope {u : <u, v_ray> >= -coeff} of the divisor."""
    _check_tdivisor(D)
    return HPolytope(D.fan.dim, tuple((ray, -c) for ray, c in zip(D.fan.rays, D.coeffs)))


def h0(D: TDivisor) -> int:
    """Dimension of global sections of the rounded-down divisor."""
    return lattice_points(polytope_of(D))


@dataclass(frozen=True)
class HilbertRow:
    m: Scalar
    h0: int
    normalized: Scalar  # n! * h0 / m^n, exact; display-only convergence aid


def hilbert_table(D: TDivisor, samples) -> list[HilbertRow]:
    """Evaluate m -> h0(mD) on a grid of positive Scalar multipliers."""
    _check_tdivisor(D)
    n = D.fan.dim
    rows = []
    for m in samples:
        m = m if isinstance(m, Scalar) else Scalar(m)
        if m.sign() <= 0:
            raise ValueError(f"sample {m} is not positive")
        value = h0(D.scale(m))
        rows.append(HilbertRow(m, value, Scalar(math.factorial(n)) * value / m**n))
    return rows


def volume(D: TDivisor) -> Scalar:
    """vol(D) = n! * euclidean volume of the section polytope (0 when empty)."""
    _check_tdivisor(D)
    p = polytope_of(D)
    if not _vertex_set(p):
        return Scalar(0)
    return Scalar(math.factorial(D.fan.dim)) * euclidean_volume(p)


def is_big(D: TDivisor) -> bool:
    """Big iff the section polytope is full-dimensional."""
    _check_tdivisor(D)
    return affine_rank(_vertex_set(polytope_of(D))) == D.fan.dim


def is_nef(D: TDivisor) -> bool:
    """Concavity of the support function across all maximal cones."""
    _check_tdivisor(D)
    fan = D.fan
    for cone in fan.max_cones:
        mat = [fan.rays[i] for i in cone]
        rhs = [-D.coeffs[i] for i in cone]
        u = solve_square(mat, rhs)
        if u is None:
            raise NonSimplicialCone(f"cone {cone} is degenerate")
        for i, ray in enumerate(fan.rays):
            if sum(c * x for c, x in zip(ray, u)) < -D.coeffs[i]:
                return False
    return True


def sigma(D: TDivisor, ray) -> Scalar:
    """Infimum of the coefficient along the ray over the effective members
    of the R-linear equivalence class; an exact LP over the section polytope."""
    _check_tdivisor(D)
    if not is_big(D):
        raise NotBig("sigma is defined for big divisors only")
    idx = D.fan.ray_index(ray)
    result = lp_solve(LPProblem(D.fan.rays[idx], polytope_of(D), D.coeffs[idx]))
    if result.status != "optimal":
        raise RdivError(f"sigma LP unexpectedly {result.status}")
    return result.value


@dataclass(frozen=True)
class SigmaDecomposition:
    """D = psigma + nsigma with nsigma carrying the sigma multiplicities."""

    original: TDivisor
    nsigma: TDivisor
    psigma: TDivisor


def sigma_decomposition(D: TDivisor) -> SigmaDecomposition:
    _check_tdivisor(D)
    if not is_big(D):
        raise NotBig("sigma decomposition is defined for big divisors only")
    neg = TDivisor(D.fan, tuple(sigma(D, i) for i in range(D.fan.nrays)))
    pos = D - neg
    for i in range(D.fan.nrays):
        if sigma(pos, i) != 0:
            raise RdivError("positive part retained a nonzero sigma multiplicity")
    return SigmaDecomposition(D, neg, pos)


def principal_divisor(fan: Fan, u) -> TDivisor:
    """div of the character u: coefficient <u, ray> on each ray."""
    u = tuple(x if isinstance(x, Scalar) else Scalar(x) for x in u)
    return TDivisor(
        fan, tuple(sum((a * b for a, b in zip(u, ray)), Scalar(0)) for ray in fan.rays)
    )


@lru_cache(maxsize=None)
def ample_divisor(fan: Fan) -> TDivisor:
    """Some ample divisor, from the strict-convexity margin LP.

    Variables: one coefficient per ray, one linear functional per maximal
    cone, and a margin t capped at 1; the functional of the first cone is
    pinned to zero to remove the translation freedom.  Maximizing t with
    equality on each cone's own rays and slack >= t elsewhere yields a
    strictly convex support function exactly when the fan is projective.
    """
    R, C, n = fan.nrays, len(fan.max_cones), fan.dim
    nvars = R + C * n + 1
    tvar = nvars - 1
    rows = []

    def row(indexed, offset=0):
        g = [0] * nvars
        for j, c in indexed:
            g[j] += c
        return (tuple(g), Scalar(offset))

    for ci, cone in enumerate(fan.max_cones):
        base = R + ci * n
        for ri in range(R):
            ray = fan.rays[ri]
            entries = [(base + j, ray[j]) for j in range(n)] + [(ri, 1)]
            if ri in cone:
                rows.append(row(entries))
                rows.append(row([(j, -c) for j, c in entries]))
            else:
                rows.append(row(entries + [(tvar, -1)]))
    for j in range(n):  # gauge: first cone's functional is zero
        rows.append(row([(R + j, 1)]))
        rows.append(row([(R + j, -1)]))
    rows.append(row([(tvar, -1)], -1))  # t <= 1

    objective = tuple(-1 if j == tvar else 0 for j in range(nvars))
    result = lp_solve(LPProblem(objective, HPolytope(nvars, tuple(rows))))
    if result.status != "optimal" or result.point[tvar].sign() <= 0:
        raise RdivError("fan admits no strictly convex support function")
    return TDivisor(fan, result.point[:R])


def bplus_div(D: TDivisor, max_halvings: int = 20, trace: bool = False):
    """Divisorial augmented base locus: the support of the negative part of
    D - eps*A along a halving eps schedule, accepted after stabilizing three
    times in a row."""
    _check_tdivisor(D)
    if not is_big(D):
        raise NotBig("the divisorial augmented base locus needs a big divisor")
    A = ample_divisor(D.fan)
    eps = Scalar(1)
    guard = 0
    while not is_big(D - A.scale(eps)):
        eps = eps / 2
        guard += 1
        if guard > 60:
            raise NoStabilization("could not make D - eps*A big")
    history = []
    for _ in range(max_halvings + 1):
        shifted = D - A.scale(eps)
        support = frozenset(i for i in range(D.fan.nrays) if sigma(shifted, i).sign() > 0)
        history.append((eps, support))
        if len(history) >= 3 and history[-1][1] == history[-2][1] == history[-3][1]:
            return history if trace else support
        eps = eps / 2
    raise NoStabilization(
        f"support of the negative part did not stabilize within {max_halvings} halvings"
    )


def intersection_nef(D: TDivisor, ray) -> Scalar:
    """D^(n-1).D_ray for nef big D: a normalized facet volume of the
    section polytope."""
    _check_tdivisor(D)
    if not is_big(D):
        raise NotBig("intersection numbers computed for big divisors")
    if not is_nef(D):
        raise NotNef("facet-volume intersection numbers need a nef divisor")
    idx = D.fan.ray_index(ray)
    n = D.fan.dim
    return Scalar(math.factorial(n - 1)) * facet_lattice_volume(polytope_of(D), idx)


def intersection_nef_div(D: TDivisor, E: TDivisor) -> Scalar:
    """D^(n-1).E for nef big D and effective invariant E, by linearity."""
    _check_tdivisor(D)
    _check_tdivisor(E)
    if not E.is_effective():
        raise NotEffective("intersection against a non-effective divisor")
    total = Scalar(0)
    for i, c in enumerate(E.coeffs):
        if c:
            total = total + c * intersection_nef(D, i)
    return total


def sigma_limit_oracle(D: TDivisor, ray, m_list) -> list[Scalar]:
    """Finite-level approximations (1/m) min mult_ray over sections of mD.

    Each value dominates sigma(D, ray) and the sequence converges to it
    along doubling chains.
    """
    _check_tdivisor(D)
    if not is_big(D):
        raise NotBig("the limit oracle needs a big divisor")
    idx = D.fan.ray_index(ray)
    ray_vec = D.fan.rays[idx]
    a = D.coeffs[idx]
    out = []
    for m in m_list:
        m = int(m)
        if m <= 0:
            raise ValueError("multiples must be positive integers")
        points = lattice_point_list(polytope_of(D.scale(m)))
        if not points:
            raise NoSections(m)
        best = None
        for u in points:
            mult = m * a + sum(c * x for c, x in zip(ray_vec, u))
            if best is None or mult < best:
                best = mult
        out.append(best / m)
    return out
