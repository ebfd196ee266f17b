"""Hirzebruch surfaces with named fibers.

The ruled surface F_e carries the negative section E (E^2 = -e), the fiber
class F and the positive section C = E + eF.  Divisors supported on E, C
and finitely many named fibers admit closed-form section counts and the
classical two-step Zariski decomposition over the single negative curve E,
which is what makes irrational twists like C + (F1-F2) + sqrt(2)(F3-F4)
computable exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ExampleViolated, NotBig, NotPseudoeffective, UnsupportedModel
from .scalars import Scalar

__all__ = [
    "SurfaceModel",
    "SDivisor",
    "ZariskiPair",
    "class_of",
    "h0_class",
    "h0_surface",
    "volume_surface",
    "is_nef_class",
    "is_big_class",
    "intersect_classes",
    "zariski",
    "bplus_surface",
    "sigma_surface",
    "paper_example",
    "PaperExampleRow",
]


@dataclass(frozen=True)
class SurfaceModel:
    """F_e together with an ordered list of distinct fiber labels."""

    e: int
    fibers: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "fibers", tuple(self.fibers))
        if self.e < 0:
            raise UnsupportedModel("the ruling invariant e must be non-negative")
        if len(set(self.fibers)) != len(self.fibers):
            raise UnsupportedModel("fiber labels must be distinct")

    def divisor(self, coeffs: dict) -> "SDivisor":
        cE = cC = Scalar(0)
        fib = {}
        for key, val in coeffs.items():
            val = val if isinstance(val, Scalar) else Scalar(val)
            if key == "E":
                cE = val
            elif key == "C":
                cC = val
            elif key in self.fibers:
                fib[key] = val
            else:
                raise KeyError(f"unknown component {key!r} on F_{self.e}")
        return SDivisor(self, cE, cC, tuple(fib.get(label, Scalar(0)) for label in self.fibers))


@dataclass(frozen=True)
class SDivisor:
    """cE*E + cC*C + sum b_i * F_{p_i} on a fixed surface model."""

    model: SurfaceModel
    cE: Scalar
    cC: Scalar
    fiber_coeffs: tuple[Scalar, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "cE", _sc(self.cE))
        object.__setattr__(self, "cC", _sc(self.cC))
        object.__setattr__(self, "fiber_coeffs", tuple(_sc(b) for b in self.fiber_coeffs))
        if len(self.fiber_coeffs) != len(self.model.fibers):
            raise ValueError("fiber coefficient count does not match the model")

    def __add__(self, other: "SDivisor") -> "SDivisor":
        self._same_model(other)
        return SDivisor(
            self.model,
            self.cE + other.cE,
            self.cC + other.cC,
            tuple(a + b for a, b in zip(self.fiber_coeffs, other.fiber_coeffs)),
        )

    def __sub__(self, other: "SDivisor") -> "SDivisor":
        self._same_model(other)
        return SDivisor(
            self.model,
            self.cE - other.cE,
            self.cC - other.cC,
            tuple(a - b for a, b in zip(self.fiber_coeffs, other.fiber_coeffs)),
        )

    def scale(self, m) -> "SDivisor":
        m = _sc(m)
        return SDivisor(
            self.model, m * self.cE, m * self.cC, tuple(m * b for b in self.fiber_coeffs)
        )

    def _same_model(self, other):
        if self.model != other.model:
            raise ValueError("divisors live on different surface models")

    def is_effective(self) -> bool:
        return self.cE >= 0 and self.cC >= 0 and all(b >= 0 for b in self.fiber_coeffs)

    def is_zero(self) -> bool:
        return not (self.cE or self.cC or any(self.fiber_coeffs))

    def floor(self) -> "SDivisor":
        """Round each prime component down; this is the divisor whose
        sections are counted."""
        return SDivisor(
            self.model,
            Scalar(math.floor(self.cE)),
            Scalar(math.floor(self.cC)),
            tuple(Scalar(math.floor(b)) for b in self.fiber_coeffs),
        )

    def support(self) -> frozenset[str]:
        out = set()
        if self.cE:
            out.add("E")
        if self.cC:
            out.add("C")
        for label, b in zip(self.model.fibers, self.fiber_coeffs):
            if b:
                out.add(label)
        return frozenset(out)


def _sc(x) -> Scalar:
    return x if isinstance(x, Scalar) else Scalar(x)


def class_of(D: SDivisor) -> tuple[Scalar, Scalar]:
    """(x, y) with [D] = x*E + y*F; fibers collapse to the fiber class."""
    x = D.cE + D.cC
    y = Scalar(D.model.e) * D.cC + sum(D.fiber_coeffs, Scalar(0))
    return x, y


def intersect_classes(a: tuple[Scalar, Scalar], b: tuple[Scalar, Scalar], e: int) -> Scalar:
    """Intersection pairing of (E, F)-classes: E^2=-e, E.F=1, F^2=0."""
    return -Scalar(e) * a[0] * b[0] + a[0] * b[1] + a[1] * b[0]


def h0_class(x: int, y: int, e: int) -> int:
    """Sections of x*E + y*F: the ruling pushes them down to P^1 degrees
    y, y-e, ..., y-x*e."""
    if x < 0:
        return 0
    return sum(max(0, y - k * e + 1) for k in range(x + 1))


def h0_surface(D: SDivisor) -> int:
    """Round down per prime component, then count through the class."""
    x, y = class_of(D.floor())
    assert x.is_integer() and y.is_integer()
    return h0_class(math.floor(x), math.floor(y), D.model.e)


def is_nef_class(cls: tuple[Scalar, Scalar], e: int) -> bool:
    x, y = cls
    # non-negative against the extremal curves E and F
    return (y - Scalar(e) * x).sign() >= 0 and x.sign() >= 0


def is_big_class(cls: tuple[Scalar, Scalar], e: int) -> bool:
    # interior of the effective cone spanned by E and F
    x, y = cls
    return x.sign() > 0 and y.sign() > 0


@dataclass(frozen=True)
class ZariskiPair:
    """D = P + N with P nef, N effective on the negative section."""

    P: tuple[Scalar, Scalar]  # class coordinates x*E + y*F
    N: SDivisor

    def volume(self) -> Scalar:
        e = self.N.model.e
        return intersect_classes(self.P, self.P, e)


def zariski(D: SDivisor) -> ZariskiPair:
    """Two-step Zariski decomposition over the candidate negative set {E}."""
    model = D.model
    e = model.e
    x, y = class_of(D)
    de = y - Scalar(e) * x  # [D].E
    if e > 0 and de.sign() < 0:
        c = x - y / e
        P = (y / Scalar(e), y)
    else:
        c = Scalar(0)
        P = (x, y)
    if not is_nef_class(P, e):
        raise NotPseudoeffective("positive part fails nefness against E or F")
    if intersect_classes(P, P, e).sign() <= 0:
        raise NotBig("divisor class is not big")
    N = SDivisor(model, c, Scalar(0), tuple(Scalar(0) for _ in model.fibers))
    return ZariskiPair(P, N)


def volume_surface(D: SDivisor) -> Scalar:
    """vol(D) = P^2 through the Zariski decomposition; 0 off the big cone."""
    try:
        pair = zariski(D)
    except (NotBig, NotPseudoeffective):
        return Scalar(0)
    return pair.volume()


def sigma_surface(D: SDivisor, component: str) -> Scalar:
    """sigma multiplicity along a prime component; only E can carry one."""
    pair = zariski(D)
    return pair.N.cE if component == "E" else Scalar(0)


def bplus_surface(D: SDivisor) -> frozenset[str]:
    """Divisorial augmented base locus on F_e: {E} exactly when [D].E <= 0."""
    x, y = class_of(D)
    if not is_big_class((x, y), D.model.e):
        raise NotBig("the divisorial augmented base locus needs a big divisor")
    e = D.model.e
    if e > 0 and (y - Scalar(e) * x).sign() <= 0:
        return frozenset({"E"})
    return frozenset()


@dataclass(frozen=True)
class PaperExampleRow:
    m: Scalar
    floor_dot_e: int  # floor(m D').E
    h0_twisted: int
    h0_straight: int


def _twisted_divisor(model: SurfaceModel) -> SDivisor:
    """C + (F1 - F2) + sqrt(2)(F3 - F4) against the model's first four fibers."""
    if len(model.fibers) < 4:
        raise UnsupportedModel("need at least four named fibers")
    root2 = Scalar(0, 1, 2)
    coeffs = {
        "C": Scalar(1),
        model.fibers[0]: Scalar(1),
        model.fibers[1]: Scalar(-1),
        model.fibers[2]: root2,
        model.fibers[3]: -root2,
    }
    return model.divisor(coeffs)


def paper_example(e: int, samples=None, model: SurfaceModel | None = None) -> list[PaperExampleRow]:
    """The irrational twist of the positive section: same R-linear
    equivalence class as C, strictly fewer sections at every positive m.

    For each sample m the rounded twist meets E in floor(m) + floor(-m) +
    floor(sqrt(2) m) + floor(-sqrt(2) m) <= -1, and the section count drops
    strictly below that of mC.  A violation raises ExampleViolated.
    """
    if e < 1:
        raise UnsupportedModel("a negative section needs e >= 1")
    if model is None:
        model = SurfaceModel(e, ("F1", "F2", "F3", "F4"))
    D = _twisted_divisor(model)
    C = model.divisor({"C": 1})
    if samples is None:
        samples = [Scalar(1), Scalar(2), Scalar(Fraction(5, 2)), Scalar(0, 1, 2), Scalar(3)]
    rows = []
    for m in samples:
        m = _sc(m)
        if m.sign() <= 0:
            raise ValueError(f"sample {m} is not positive")
        floored = D.scale(m).floor()
        fclass = class_of(floored)
        s = math.floor(intersect_classes(fclass, (Scalar(1), Scalar(0)), e))
        h_twist = h0_surface(D.scale(m))
        h_plain = h0_surface(C.scale(m))
        row = PaperExampleRow(m, s, h_twist, h_plain)
        if s > -1:
            raise ExampleViolated(f"floor(mD').E = {s} at m = {m}")
        if not h_twist < h_plain:
            raise ExampleViolated(f"h0({m}D') = {h_twist} !< h0({m}C) = {h_plain}")
        rows.append(row)
    return rows
