"""Decision procedures for the two volume/Hilbert-function equivalences.

Checker A decides whether subtracting an effective divisor E preserves
volume, sections and the negative part; checker B does the same for adding
E against the divisorial augmented base locus.  Clauses i) and ii) are
exact and authoritative; the "for all m" section-count clauses are sampled
on a finite grid and can only falsify.  A report whose decidable clauses
disagree, or whose sampled clause contradicts a decidable true clause, is
flagged as a counterexample candidate for replay.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction

from . import surface as surf
from . import toric
from .errors import NotBig, NotEffective
from .scalars import Scalar, parse_scalar

__all__ = [
    "ClauseValue",
    "TheoremReport",
    "check_theorem_a",
    "check_theorem_b",
    "negsections_check",
    "corpus_run",
    "CorpusInstance",
    "default_m_grid",
]

CONSISTENT = "ConsistentWithPaper"
CANDIDATE = "CounterexampleCandidate"


def default_m_grid(disc: int = 0) -> list[Scalar]:
    grid = [Scalar(1), Scalar(2), Scalar(3), Scalar(Fraction(5, 2))]
    if disc > 1:
        grid.append(Scalar(0, 1, disc))
    return grid


DEFAULT_R_GRID = [Scalar(1), Scalar(Fraction(1, 2))]


@dataclass(frozen=True)
class ClauseValue:
    status: str  # "true" | "false" | "skipped"
    witness: dict | None = None
    reason: str | None = None

    @property
    def is_true(self):
        return self.status == "true"

    @property
    def is_false(self):
        return self.status == "false"

    def to_json(self):
        out = {"status": self.status}
        if self.witness:
            out["witness"] = self.witness
        if self.reason:
            out["reason"] = self.reason
        return out


_TRUE = ClauseValue("true")


@dataclass(frozen=True)
class TheoremReport:
    theorem: str  # "A" | "B"
    clause_values: dict[str, ClauseValue]
    verdict: str

    def to_json(self):
        return {
            "theorem": self.theorem,
            "clauses": {k: v.to_json() for k, v in sorted(self.clause_values.items())},
            "verdict": self.verdict,
        }


def _verdict(clauses: dict[str, ClauseValue]) -> str:
    ci, cii = clauses["i"], clauses["ii"]
    if ci.status != cii.status:
        return CANDIDATE
    if cii.is_true and clauses["iv"].is_false:
        return CANDIDATE
    v = clauses.get("v")
    if v is not None and v.status in ("true", "false") and v.status != ci.status:
        return CANDIDATE
    return CONSISTENT


# ---------------------------------------------------------------------------
# fan-side helpers


def _fan_shifts(fan: toric.Fan, rng: random.Random | None, count: int = 2):
    """Small integer characters generating R-linear equivalences."""
    if rng is None:
        vecs = [tuple(1 if j == i else 0 for j in range(fan.dim)) for i in range(min(count, fan.dim))]
    else:
        vecs = []
        while len(vecs) < count:
            v = tuple(rng.randint(-1, 1) for _ in range(fan.dim))
            if any(v):
                vecs.append(v)
    return [toric.principal_divisor(fan, v) for v in vecs]


def _surface_shifts(model: surf.SurfaceModel, rng: random.Random | None, count: int = 2):
    """Fiber relabelings t*(F_i - F_j), trivial on the class."""
    if len(model.fibers) < 2:
        return []
    out = []
    pairs = [(0, 1)]
    if len(model.fibers) >= 4:
        pairs.append((2, 3))
    for i, j in pairs[:count]:
        t = Scalar(1) if rng is None else Scalar(Fraction(rng.randint(1, 3), 2))
        coeffs = {model.fibers[i]: t, model.fibers[j]: -t}
        out.append(model.divisor(coeffs))
    return out


class _FanSide:
    def __init__(self, D, E):
        self.D, self.E = D, E
        self.fan = D.fan

    def check_big(self):
        return toric.is_big(self.D)

    def effective(self, X):
        return X.is_effective()

    def vol(self, X):
        return toric.volume(X)

    def h0(self, X):
        return toric.h0(X)

    def nsigma_dominates(self, E):
        dec = toric.sigma_decomposition(self.D)
        for i, c in enumerate(E.coeffs):
            if c > dec.nsigma.coeffs[i]:
                return False, {"ray": self.fan.ray_name(i)}
        return True, None

    def bplus_contains_support(self, E):
        locus = toric.bplus_div(self.D)
        for i in sorted(E.support()):
            if i not in locus:
                return False, {"ray": self.fan.ray_name(i)}
        return True, None

    def is_nef(self):
        return toric.is_nef(self.D)

    def nef_intersection(self, E):
        return toric.intersection_nef_div(self.D, E)

    def zero_divisor(self):
        return toric.TDivisor(self.fan, tuple(Scalar(0) for _ in range(self.fan.nrays)))

    def shifts(self, rng):
        return _fan_shifts(self.fan, rng)


class _SurfaceSide:
    def __init__(self, D, E):
        self.D, self.E = D, E
        self.model = D.model

    def check_big(self):
        return surf.is_big_class(surf.class_of(self.D), self.model.e)

    def effective(self, X):
        return X.is_effective()

    def vol(self, X):
        return surf.volume_surface(X)

    def h0(self, X):
        return surf.h0_surface(X)

    def nsigma_dominates(self, E):
        pair = surf.zariski(self.D)
        if E.cC or any(E.fiber_coeffs):
            labels = sorted(E.support() - {"E"})
            return False, {"component": labels[0]}
        if E.cE > pair.N.cE:
            return False, {"component": "E"}
        return True, None

    def bplus_contains_support(self, E):
        locus = surf.bplus_surface(self.D)
        for label in sorted(E.support()):
            if label not in locus:
                return False, {"component": label}
        return True, None

    def is_nef(self):
        return surf.is_nef_class(surf.class_of(self.D), self.model.e)

    def nef_intersection(self, E):
        return surf.intersect_classes(surf.class_of(self.D), surf.class_of(E), self.model.e)

    def zero_divisor(self):
        return self.model.divisor({})

    def shifts(self, rng):
        return _surface_shifts(self.model, rng)


def _side(X, D, E):
    if isinstance(X, toric.Fan):
        return _FanSide(D, E)
    if isinstance(X, surf.SurfaceModel):
        return _SurfaceSide(D, E)
    raise TypeError(f"unsupported variety model {type(X).__name__}")


def _as_grid(values, fallback):
    if values is None:
        return list(fallback)
    return [v if isinstance(v, Scalar) else Scalar(v) for v in values]


def check_theorem_a(X, D, E, m_grid=None, rng=None) -> TheoremReport:
    """Volume drop under subtraction vs domination by the negative part.

    Clauses: i) vol(D-E) = vol(D); ii) E <= N_sigma(D); iv) sampled
    h0(mD'-mE) = h0(mD') over the grid, with D' ranging over the divisor
    and a few principal shifts of it; v) E = 0, evaluated when D is nef.
    """
    side = _side(X, D, E)
    if not side.check_big():
        raise NotBig("checker needs a big divisor D")
    if not side.effective(E):
        raise NotEffective("checker needs an effective divisor E")
    m_grid = _as_grid(m_grid, default_m_grid())

    clauses = {}
    vol_d, vol_sub = side.vol(D), side.vol(D - E)
    clauses["i"] = (
        _TRUE
        if vol_sub == vol_d
        else ClauseValue("false", {"vol_D": str(vol_d), "vol_D_minus_E": str(vol_sub)})
    )
    ok, witness = side.nsigma_dominates(E)
    clauses["ii"] = _TRUE if ok else ClauseValue("false", witness)

    clauses["iv"] = _TRUE
    for shift_idx, Dp in enumerate([None] + side.shifts(rng)):
        base = D if Dp is None else D + Dp
        for m in m_grid:
            if side.h0(base.scale(m) - E.scale(m)) != side.h0(base.scale(m)):
                witness = {"m": str(m)}
                if Dp is not None:
                    witness["shift"] = shift_idx
                clauses["iv"] = ClauseValue("false", witness)
                break
        if clauses["iv"].is_false:
            break

    if side.is_nef():
        clauses["v"] = _TRUE if E.is_zero() else ClauseValue("false", {"E": "nonzero"})
    else:
        clauses["v"] = ClauseValue("skipped", reason="D is not nef")

    return TheoremReport("A", clauses, _verdict(clauses))


def check_theorem_b(X, D, E, m_grid=None, r_grid=None, rng=None) -> TheoremReport:
    """Volume invariance under addition vs the augmented base locus.

    Clauses: i) vol(D+E) = vol(D); ii) Supp(E) inside the divisorial
    augmented base locus of D; iv) sampled h0(mD'+rE) = h0(mD') with r
    running over m itself and the r-grid, D' over principal shifts;
    v) D^(n-1).E = 0, evaluated when D is nef.
    """
    side = _side(X, D, E)
    if not side.check_big():
        raise NotBig("checker needs a big divisor D")
    if not side.effective(E):
        raise NotEffective("checker needs an effective divisor E")
    m_grid = _as_grid(m_grid, default_m_grid())
    r_grid = _as_grid(r_grid, DEFAULT_R_GRID)

    clauses = {}
    vol_d, vol_add = side.vol(D), side.vol(D + E)
    clauses["i"] = (
        _TRUE
        if vol_add == vol_d
        else ClauseValue("false", {"vol_D": str(vol_d), "vol_D_plus_E": str(vol_add)})
    )
    ok, witness = side.bplus_contains_support(E)
    clauses["ii"] = _TRUE if ok else ClauseValue("false", witness)

    clauses["iv"] = _TRUE
    for shift_idx, Dp in enumerate([None] + side.shifts(rng)):
        base = D if Dp is None else D + Dp
        for m in m_grid:
            h_base = side.h0(base.scale(m))
            r_values = [m] if Dp is None else [m] + r_grid
            for r in r_values:
                if side.h0(base.scale(m) + E.scale(r)) != h_base:
                    witness = {"m": str(m), "r": str(r)}
                    if Dp is not None:
                        witness["shift"] = shift_idx
                    clauses["iv"] = ClauseValue("false", witness)
                    break
            if clauses["iv"].is_false:
                break
        if clauses["iv"].is_false:
            break

    if side.is_nef():
        pairing = side.nef_intersection(E)
        clauses["v"] = _TRUE if pairing == 0 else ClauseValue("false", {"intersection": str(pairing)})
    else:
        clauses["v"] = ClauseValue("skipped", reason="D is not nef")

    return TheoremReport("B", clauses, _verdict(clauses))


def negsections_check(X, D, E, m_grid=None) -> bool:
    """When Supp(E) sits inside Supp(N_sigma(D)): the negative part grows by
    exactly E and section counts are untouched at every sampled multiple."""
    m_grid = _as_grid(m_grid, default_m_grid())
    if isinstance(X, toric.Fan):
        dec = toric.sigma_decomposition(D)
        if not E.support() <= dec.nsigma.support():
            raise ValueError("E is not supported inside the negative part")
        dec2 = toric.sigma_decomposition(D + E)
        expected = dec.nsigma + E
        if dec2.nsigma.coeffs != expected.coeffs:
            return False
        h = toric.h0
    else:
        pair = surf.zariski(D)
        if not E.support() <= ({"E"} if pair.N.cE else frozenset()):
            raise ValueError("E is not supported inside the negative part")
        pair2 = surf.zariski(D + E)
        if pair2.N.cE != pair.N.cE + E.cE:
            return False
        h = surf.h0_surface
    for m in m_grid:
        if h((D + E).scale(m)) != h(D.scale(m)):
            return False
    return True


# ---------------------------------------------------------------------------
# randomized corpus


@dataclass(frozen=True)
class CorpusInstance:
    index: int
    preset: str
    D_coeffs: tuple[str, ...]
    E_coeffs: tuple[str, ...]
    nef_constructed: bool

    def realize(self):
        fan = toric.preset_fan(self.preset)
        D = fan.divisor([parse_scalar(c) for c in self.D_coeffs])
        E = fan.divisor([parse_scalar(c) for c in self.E_coeffs])
        return fan, D, E

    def to_json(self):
        return {
            "index": self.index,
            "preset": self.preset,
            "D": list(self.D_coeffs),
            "E": list(self.E_coeffs),
            "nef_constructed": self.nef_constructed,
        }


_PRESETS = ("P2", "P1xP1", "F1", "F2", "P3")


def _rand_fraction(rng, lo=-3, hi=3, dens=(1, 2, 4)):
    den = rng.choice(dens)
    return Fraction(rng.randint(lo * den, hi * den), den)


def _nef_big_divisor(fan: toric.Fan, preset: str, rng) -> toric.TDivisor:
    """Random point of the nef cone interior, dressed with a principal shift."""
    if preset == "P2":
        D = fan.divisor({"H": Scalar(_rand_fraction(rng, 1, 3))})
    elif preset == "P3":
        D = fan.divisor({"H": Scalar(_rand_fraction(rng, 1, 2))})
    elif preset == "P1xP1":
        D = fan.divisor(
            {"H1": Scalar(_rand_fraction(rng, 1, 2)), "H2": Scalar(_rand_fraction(rng, 1, 2))}
        )
    else:  # F_e: aC + bF with a > 0, b >= 0
        D = fan.divisor(
            {"C": Scalar(_rand_fraction(rng, 1, 2)), "F": Scalar(_rand_fraction(rng, 0, 1))}
        )
    shift = tuple(rng.randint(-1, 1) for _ in range(fan.dim))
    return D + toric.principal_divisor(fan, shift)


def _random_big_divisor(fan: toric.Fan, rng) -> toric.TDivisor:
    for _ in range(200):
        D = fan.divisor([Scalar(_rand_fraction(rng)) for _ in range(fan.nrays)])
        if toric.is_big(D):
            return D
    raise RuntimeError("could not sample a big divisor")


def _random_effective(fan: toric.Fan, rng) -> toric.TDivisor:
    coeffs = []
    for _ in range(fan.nrays):
        if rng.random() < 0.5:
            coeffs.append(Scalar(0))
        else:
            coeffs.append(Scalar(_rand_fraction(rng, 0, 2)))
    return fan.divisor(coeffs)


def generate_corpus(seed: int, count: int, nef_share: float = 0.3) -> list[CorpusInstance]:
    """Deterministic instance list; about nef_share of the divisors are
    drawn from the nef cone so the nef clauses get exercised."""
    rng = random.Random(seed)
    out = []
    for index in range(count):
        preset = rng.choice(_PRESETS)
        fan = toric.preset_fan(preset)
        nef_wanted = rng.random() < nef_share
        D = _nef_big_divisor(fan, preset, rng) if nef_wanted else _random_big_divisor(fan, rng)
        E = _random_effective(fan, rng)
        out.append(
            CorpusInstance(
                index,
                preset,
                tuple(str(c) for c in D.coeffs),
                tuple(str(c) for c in E.coeffs),
                nef_wanted,
            )
        )
    return out


def corpus_run(seed: int, count: int, which: str = "both", m_grid=None) -> dict:
    """Run the checkers over a seeded corpus and aggregate verdicts.

    Returns a JSON-ready summary; any counterexample candidate is embedded
    in full for replay.
    """
    instances = generate_corpus(seed, count)
    shift_rng = random.Random(seed + 1)
    if m_grid is None:
        m_grid = default_m_grid(2)  # rational divisors, but sample sqrt(2) multiples too
    summary = {
        "seed": seed,
        "count": count,
        "which": which,
        "consistent": 0,
        "candidates": [],
        "nef_instances": 0,
        "negsections_checked": 0,
    }
    for inst in instances:
        fan, D, E = inst.realize()
        reports = {}
        if which in ("A", "both"):
            reports["A"] = check_theorem_a(fan, D, E, m_grid=m_grid, rng=shift_rng)
        if which in ("B", "both"):
            reports["B"] = check_theorem_b(fan, D, E, m_grid=m_grid, rng=shift_rng)
        if toric.is_nef(D):
            summary["nef_instances"] += 1
        dec = toric.sigma_decomposition(D)
        if E.support() and E.support() <= dec.nsigma.support():
            summary["negsections_checked"] += 1
            if not negsections_check(fan, D, E, m_grid=m_grid):
                summary["candidates"].append(
                    {"instance": inst.to_json(), "failure": "negative-part additivity"}
                )
                continue
        bad = {k: r for k, r in reports.items() if r and r.verdict == CANDIDATE}
        if bad:
            summary["candidates"].append(
                {
                    "instance": inst.to_json(),
                    "reports": {k: r.to_json() for k, r in reports.items() if r},
                }
            )
        else:
            summary["consistent"] += 1
    return summary


def summary_to_json(summary: dict) -> str:
    return json.dumps(summary, sort_keys=True, indent=2)
