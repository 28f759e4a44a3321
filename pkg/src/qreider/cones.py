"""Nefness, bigness, and minimal curve degrees over declared curve families.

A cone description is either a finite list of generator classes (trusted to
exhaust the degrees of irreducible curves; correctness of that declaration is
the caller's responsibility) or the builtin family of curve classes on the
rank-2 (G, F) lattice with G*G = -n, F*F = 0, G*F = 1, whose irreducible
classes are G, the F-class, and a*G + b*F with a >= 1, b >= n*a.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Union

from .lattice import DivisorClass, IntersectionLattice


class NotNefError(ValueError):
    """A minimal degree was requested for a class that is not certified nef."""


class DegreeFilter(str, Enum):
    """Which irreducible curves enter a minimal-degree computation."""

    ALL = "all"
    THROUGH_POINT = "through-p"
    CONTAINING_Z = "containing-z"


@dataclass(frozen=True)
class ConeGenerator:
    """One generator class, flagged by which degree filters it belongs to.

    A curve containing the length-2 scheme necessarily passes through its
    point, so ``contains_z`` forces ``through_p``.
    """

    cls: DivisorClass
    through_p: bool = False
    contains_z: bool = False

    def __post_init__(self):
        if self.contains_z and not self.through_p:
            raise ValueError("a generator containing Z must pass through the point")

    def matches(self, filt: DegreeFilter) -> bool:
        if filt is DegreeFilter.ALL:
            return True
        if filt is DegreeFilter.THROUGH_POINT:
            return self.through_p
        return self.contains_z


@dataclass(frozen=True)
class FiniteGenerators:
    generators: tuple[ConeGenerator, ...]

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise ValueError("generator list must be non-empty")
        lat = gens[0].cls.lattice
        if any(g.cls.lattice is not lat for g in gens):
            raise ValueError("all generators must live on one lattice")
        object.__setattr__(self, "generators", gens)

    @property
    def lattice(self) -> IntersectionLattice:
        return self.generators[0].cls.lattice


@dataclass(frozen=True)
class HirzebruchFamily:
    """The curve classification on the builtin rank-2 (G, F) lattice.

    The point filters are specialized to the marked configuration: the point
    is the intersection of the F-fiber with G, and the direction is tangent
    to G there (so curves containing the length-2 scheme are G or a*G + b*F
    with a >= 1; never the F-class).
    """

    n: int
    lattice: IntersectionLattice

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be a positive integer")
        if self.lattice.rank != 2:
            raise ValueError("builtin family needs a rank-2 lattice")
        g = self.lattice.gram
        expected = ((Fraction(-self.n), Fraction(1)), (Fraction(1), Fraction(0)))
        if g != expected:
            raise ValueError(f"lattice gram matrix must be ((-n, 1), (1, 0)) with n={self.n}")

    @property
    def g_class(self) -> DivisorClass:
        return self.lattice.divisor_class((1, 0))

    @property
    def f_class(self) -> DivisorClass:
        return self.lattice.divisor_class((0, 1))

    def family_corner(self) -> DivisorClass:
        """G + n*F, the minimizing member of the a >= 1, b >= n*a family."""
        return self.lattice.divisor_class((1, self.n))


ConeDescription = Union[FiniteGenerators, HirzebruchFamily]


def _require_lattice(m: DivisorClass, cone: ConeDescription) -> None:
    if m.lattice is not cone.lattice:
        raise ValueError("class does not live on the cone's lattice")


def is_nef(m: DivisorClass, cone: ConeDescription) -> bool:
    """True iff the class meets every declared curve class non-negatively."""
    _require_lattice(m, cone)
    if isinstance(cone, FiniteGenerators):
        return all(m.intersect(g.cls) >= 0 for g in cone.generators)
    # m.(aG+bF) = a*(m.G) + b*(m.F) >= a*(m.G + n*m.F) >= 0 once both signs check out
    return m.intersect(cone.g_class) >= 0 and m.intersect(cone.f_class) >= 0


def is_big(m: DivisorClass, cone: ConeDescription) -> bool:
    """Certify bigness for nef classes only: nef together with positive square."""
    return is_nef(m, cone) and m.self_intersection() > 0


def min_degree(m: DivisorClass, cone: ConeDescription, filt: DegreeFilter = DegreeFilter.ALL) -> Fraction:
    """Minimal pairing of a nef class against the declared curves in the filter."""
    if not is_nef(m, cone):
        raise NotNefError("minimal degree is only defined for nef classes")
    if isinstance(cone, FiniteGenerators):
        degrees = [m.intersect(g.cls) for g in cone.generators if g.matches(filt)]
        if not degrees:
            raise ValueError(f"no cone generator matches filter {filt.value!r}")
        return min(degrees)
    candidates = [cone.g_class, cone.family_corner()]
    if filt is not DegreeFilter.CONTAINING_Z:
        candidates.append(cone.f_class)
    return min(m.intersect(c) for c in candidates)
