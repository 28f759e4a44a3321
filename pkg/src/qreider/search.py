"""Rational parameter search for boundary decompositions.

Given an integral target divisor L, a family writes L = B(params) + M(params)
with coefficients affine in named rational parameters.  The search walks a
nested dyadic schedule (the first parameter takes values 2**-k, each later
parameter a dyadic fraction of its predecessor, honoring the intended
"much smaller than" coupling), instantiates the decomposition exactly at each
candidate, recomputes multiplicities, the square, and minimal degrees, and
runs the requested checker; the first established candidate wins.

The drivers at the bottom reproduce the two positivity claims for the
standard ruled-surface model end to end.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence, Union

from . import hirzebruch as hz
from .cones import ConeDescription, DegreeFilter, FiniteGenerators, HirzebruchFamily, is_nef
from .cones import min_degree as cone_min_degree
from .criteria import (
    BetaWitness,
    CriterionVerdict,
    TraceLine,
    check,
    freeness_at,
    riemann_roch_chi,
    separation,
    tangent_separation,
    very_ampleness,
)
from .lattice import DivisorClass, RationalLike, as_fraction
from .surface import QDivisor, SurfaceModel


class FamilyViolation(ValueError):
    """A candidate parameter value broke a family invariant."""


# ---------------------------------------------------------------------------
# affine parameter expressions


@dataclass(frozen=True)
class AffineExpr:
    """const + sum(coeff * param), with exact rational coefficients."""

    const: Fraction = Fraction(0)
    terms: Mapping[str, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "const", as_fraction(self.const))
        cleaned = {}
        for name, coeff in dict(self.terms).items():
            q = as_fraction(coeff)
            if q:
                cleaned[name] = q
        object.__setattr__(self, "terms", cleaned)

    @classmethod
    def constant(cls, value: RationalLike) -> "AffineExpr":
        return cls(as_fraction(value), {})

    @classmethod
    def parameter(cls, name: str) -> "AffineExpr":
        return cls(Fraction(0), {name: Fraction(1)})

    def is_constant(self) -> bool:
        return not self.terms

    def evaluate(self, values: Mapping[str, Fraction]) -> Fraction:
        total = self.const
        for name, coeff in self.terms.items():
            if name not in values:
                raise KeyError(f"no value for parameter {name!r}")
            total += coeff * values[name]
        return total

    def __add__(self, other: "AffineExpr") -> "AffineExpr":
        merged = dict(self.terms)
        for name, coeff in other.terms.items():
            merged[name] = merged.get(name, Fraction(0)) + coeff
        return AffineExpr(self.const + other.const, merged)

    def __sub__(self, other: "AffineExpr") -> "AffineExpr":
        return self + (-other)

    def __neg__(self) -> "AffineExpr":
        return AffineExpr(-self.const, {n: -c for n, c in self.terms.items()})

    def __mul__(self, other: Union["AffineExpr", RationalLike]) -> "AffineExpr":
        if isinstance(other, AffineExpr):
            if other.is_constant():
                other = other.const
            elif self.is_constant():
                self, other = other, self.const
            else:
                raise ValueError("product of two non-constant parameter expressions is not affine")
        q = as_fraction(other)
        return AffineExpr(q * self.const, {n: q * c for n, c in self.terms.items()})

    __rmul__ = __mul__

    def __repr__(self) -> str:
        parts = [str(self.const)] if self.const or not self.terms else []
        parts += [f"{c}*{n}" for n, c in sorted(self.terms.items())]
        return " + ".join(parts)


@dataclass(frozen=True)
class Param:
    """A named rational unknown with an open interval domain."""

    name: str
    lo: Fraction = Fraction(0)
    hi: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "lo", as_fraction(self.lo))
        object.__setattr__(self, "hi", as_fraction(self.hi))

    def contains(self, value: Fraction) -> bool:
        return self.lo < value < self.hi


@dataclass(frozen=True)
class ParamFamily:
    """A parametric decomposition target = boundary + positive part.

    Coefficients of both parts are affine in the parameters; the sum must be
    parameter-free and integral.  The boundary must stay in [0, 1) on the
    domain; this is checked at each instantiation, not symbolically.
    """

    surface: SurfaceModel
    params: tuple[Param, ...]
    boundary: Mapping[str, AffineExpr]
    positive: Mapping[str, AffineExpr]

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(self.params))
        object.__setattr__(self, "boundary", dict(self.boundary))
        object.__setattr__(self, "positive", dict(self.positive))
        names = [p.name for p in self.params]
        if len(set(names)) != len(names):
            raise ValueError("duplicate parameter names")
        for coeffs in (self.boundary, self.positive):
            for curve in coeffs:
                if curve not in self.surface.curves:
                    raise ValueError(f"family references undeclared curve {curve!r}")
        declared = set(names)
        used = {
            n
            for coeffs in (self.boundary, self.positive)
            for expr in coeffs.values()
            for n in expr.terms
        }
        if not used <= declared:
            raise ValueError(f"undeclared parameters in family: {sorted(used - declared)}")
        target = {}
        for curve in set(self.boundary) | set(self.positive):
            total = self.boundary.get(curve, AffineExpr()) + self.positive.get(curve, AffineExpr())
            if not total.is_constant():
                raise ValueError(f"boundary + positive part is not parameter-free on {curve!r}")
            if total.const.denominator != 1:
                raise ValueError(f"target coefficient on {curve!r} is not an integer")
            target[curve] = total.const
        object.__setattr__(self, "_target", self.surface.divisor(target))

    @property
    def target(self) -> QDivisor:
        return self._target

    def instantiate(self, values: Mapping[str, Fraction]) -> tuple[QDivisor, QDivisor]:
        for p in self.params:
            if p.name not in values:
                raise KeyError(f"no value for parameter {p.name!r}")
            if not p.contains(values[p.name]):
                raise FamilyViolation(f"{p.name} = {values[p.name]} outside ({p.lo}, {p.hi})")
        b = self.surface.divisor({c: e.evaluate(values) for c, e in self.boundary.items()})
        m = self.surface.divisor({c: e.evaluate(values) for c, e in self.positive.items()})
        if not b.is_boundary():
            raise FamilyViolation(f"boundary coefficients leave [0, 1) at {dict(values)}")
        if m.round_up() != self.target:
            raise FamilyViolation(f"round-up of the positive part misses the target at {dict(values)}")
        return b, m


# ---------------------------------------------------------------------------
# degree sources


@dataclass(frozen=True)
class LabeledClass:
    label: str
    cls: DivisorClass


@dataclass(frozen=True)
class ExplicitDegrees:
    """A declared family of candidate curve classes for a degree minimum."""

    description: str
    classes: tuple[LabeledClass, ...]

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))
        if not self.classes:
            raise ValueError("degree family needs at least one class")

    def min_degree(self, m: DivisorClass) -> Fraction:
        return min(m.intersect(lc.cls) for lc in self.classes)


@dataclass(frozen=True)
class ConeDegrees:
    """Degree minimum delegated to a cone description and filter."""

    cone: ConeDescription
    filt: DegreeFilter = DegreeFilter.ALL

    @property
    def description(self) -> str:
        return f"cone filter {self.filt.value}"

    def min_degree(self, m: DivisorClass) -> Fraction:
        return cone_min_degree(m, self.cone, self.filt)


DegreeSource = Union[ExplicitDegrees, ConeDegrees]

WitnessProvider = Union[BetaWitness, Callable[[Mapping[str, Fraction]], BetaWitness], None]


def _resolve_witness(provider: WitnessProvider, values: Mapping[str, Fraction]) -> Optional[BetaWitness]:
    if provider is None or isinstance(provider, BetaWitness):
        return provider
    return provider(values)


def _ambient_lines(m_cls: DivisorClass, cone: ConeDescription) -> list[TraceLine]:
    lines = []
    if isinstance(cone, HirzebruchFamily):
        lines.append(check("M.G >= 0 (nef)", m_cls.intersect(cone.g_class), ">=", 0))
        lines.append(check("M.F >= 0 (nef)", m_cls.intersect(cone.f_class), ">=", 0))
    else:
        assert isinstance(cone, FiniteGenerators)
        for i, gen in enumerate(cone.generators):
            lines.append(check(f"M.C_{i} >= 0 (nef)", m_cls.intersect(gen.cls), ">=", 0))
    lines.append(check("M^2 > 0 (big)", m_cls.self_intersection(), ">", 0))
    return lines


def _prefixed(label: str, lines: Sequence[TraceLine]) -> list[TraceLine]:
    if not label:
        return list(lines)
    return [TraceLine(f"{label}: {l.text}", l.lhs, l.rel, l.rhs, l.holds) for l in lines]


def _with_ambient(
    label: str, rule: str, ambient: Sequence[TraceLine], inner: Optional[CriterionVerdict]
) -> CriterionVerdict:
    lines = _prefixed(label, ambient)
    ambient_ok = all(l.holds for l in lines)
    if inner is None:
        return CriterionVerdict(False, rule, tuple(lines), note="positive part not nef and big")
    lines += _prefixed(label, inner.trace)
    return CriterionVerdict(
        ambient_ok and inner.established, inner.rule, tuple(lines), inner.witness, inner.note
    )


@dataclass(frozen=True)
class FreenessGoal:
    cone: ConeDescription
    point: str
    degrees: DegreeSource
    witness: WitnessProvider = None
    label: str = ""

    rule = "freeness/degree-bound"

    def evaluate(self, boundary: QDivisor, positive: QDivisor, values: Mapping[str, Fraction]) -> CriterionVerdict:
        m_cls = positive.divisor_class()
        ambient = _ambient_lines(m_cls, self.cone)
        if not all(l.holds for l in ambient):
            return _with_ambient(self.label, self.rule, ambient, None)
        mu = boundary.ord_at(self.point)
        verdict = freeness_at(
            mu, m_cls.self_intersection(), self.degrees.min_degree(m_cls), _resolve_witness(self.witness, values)
        )
        return _with_ambient(self.label, self.rule, ambient, verdict)


@dataclass(frozen=True)
class SeparationGoal:
    cone: ConeDescription
    first: str
    second: str
    degrees_first: DegreeSource
    degrees_second: DegreeSource
    degrees_joint: DegreeSource
    witness: WitnessProvider = None
    label: str = ""

    rule = "separation/degree-bounds"

    def evaluate(self, boundary: QDivisor, positive: QDivisor, values: Mapping[str, Fraction]) -> CriterionVerdict:
        m_cls = positive.divisor_class()
        ambient = _ambient_lines(m_cls, self.cone)
        if not all(l.holds for l in ambient):
            return _with_ambient(self.label, self.rule, ambient, None)
        verdict = separation(
            boundary.ord_at(self.first),
            boundary.ord_at(self.second),
            m_cls.self_intersection(),
            self.degrees_first.min_degree(m_cls),
            self.degrees_second.min_degree(m_cls),
            self.degrees_joint.min_degree(m_cls),
            _resolve_witness(self.witness, values),
        )
        return _with_ambient(self.label, self.rule, ambient, verdict)


@dataclass(frozen=True)
class TangentGoal:
    cone: ConeDescription
    tangent: str
    degrees_point: DegreeSource
    degrees_scheme: DegreeSource
    witness: WitnessProvider = None
    label: str = ""

    rule = "tangent/degree-bounds"

    def evaluate(self, boundary: QDivisor, positive: QDivisor, values: Mapping[str, Fraction]) -> CriterionVerdict:
        m_cls = positive.divisor_class()
        ambient = _ambient_lines(m_cls, self.cone)
        if not all(l.holds for l in ambient):
            return _with_ambient(self.label, self.rule, ambient, None)
        orders = boundary.ord_tangential(self.tangent)
        verdict = tangent_separation(
            orders.at_point,
            orders.at_infinitely_near,
            m_cls.self_intersection(),
            self.degrees_point.min_degree(m_cls),
            self.degrees_scheme.min_degree(m_cls),
            _resolve_witness(self.witness, values),
        )
        return _with_ambient(self.label, self.rule, ambient, verdict)


@dataclass(frozen=True)
class VeryAmpleGoal:
    cone: ConeDescription
    degrees: DegreeSource
    witness: WitnessProvider = None
    label: str = ""

    rule = "very-ample/witness"

    def evaluate(self, boundary: QDivisor, positive: QDivisor, values: Mapping[str, Fraction]) -> CriterionVerdict:
        m_cls = positive.divisor_class()
        ambient = _ambient_lines(m_cls, self.cone)
        if not all(l.holds for l in ambient):
            return _with_ambient(self.label, self.rule, ambient, None)
        verdict = very_ampleness(
            m_cls.self_intersection(), self.degrees.min_degree(m_cls), _resolve_witness(self.witness, values)
        )
        return _with_ambient(self.label, self.rule, ambient, verdict)


@dataclass(frozen=True)
class MultiGoal:
    """Conjunction of goals; established only when every part is."""

    goals: tuple
    rule: str = "composite"

    def evaluate(self, boundary: QDivisor, positive: QDivisor, values: Mapping[str, Fraction]) -> CriterionVerdict:
        lines: list[TraceLine] = []
        witnesses = []
        ok = True
        for goal in self.goals:
            verdict = goal.evaluate(boundary, positive, values)
            ok = ok and verdict.established
            lines.extend(verdict.trace)
            witnesses.append(verdict.witness)
        witness = witnesses[0] if witnesses and all(w == witnesses[0] for w in witnesses) else None
        return CriterionVerdict(ok, self.rule, tuple(lines), witness)


Goal = Union[FreenessGoal, SeparationGoal, TangentGoal, VeryAmpleGoal, MultiGoal]


# ---------------------------------------------------------------------------
# the schedule and the search


@dataclass(frozen=True)
class SearchReport:
    found: bool
    params: Mapping[str, Fraction]
    verdict: Optional[CriterionVerdict]
    attempts: int
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "params", dict(self.params))
        object.__setattr__(self, "notes", tuple(self.notes))
        if self.found and (self.verdict is None or not self.verdict.established):
            raise AssertionError("search reported success without an established verdict")


def dyadic_schedule(params: Sequence[Param], depth: int, first_exponent: int = 2):
    """Nested dyadic parameter candidates, outermost parameter first.

    The first parameter runs through 2**-k for k = first_exponent..depth; each
    later parameter through (previous parameter's value) * 2**-j for
    j = 1..depth.  Candidates outside a parameter's open domain are dropped.
    """
    params = tuple(params)

    def rec(i: int, acc: dict, prev: Fraction):
        if i == len(params):
            yield dict(acc)
            return
        p = params[i]
        if i == 0:
            exponents = range(first_exponent, depth + 1)
            base = Fraction(1)
        else:
            exponents = range(1, depth + 1)
            base = prev
        for e in exponents:
            value = base / (1 << e)
            if not p.contains(value):
                continue
            acc[p.name] = value
            yield from rec(i + 1, acc, value)
            del acc[p.name]

    yield from rec(0, {}, Fraction(1))


def search_params(
    family: ParamFamily, goal: Goal, depth: int = 24, first_exponent: int = 2
) -> SearchReport:
    """First parameter values along the dyadic schedule whose decomposition
    makes the goal's checker fire; exact verification at every candidate."""
    attempts = 0
    notes: list[str] = []
    for values in dyadic_schedule(family.params, depth, first_exponent):
        attempts += 1
        try:
            boundary, positive = family.instantiate(values)
        except FamilyViolation as exc:
            notes.append(str(exc))
            continue
        verdict = goal.evaluate(boundary, positive, values)
        if verdict.established:
            return SearchReport(True, values, verdict, attempts, tuple(notes))
    return SearchReport(False, {}, None, attempts, tuple(notes))


# ---------------------------------------------------------------------------
# drivers for the ruled-surface claims


@dataclass(frozen=True)
class ClaimCheck:
    name: str
    families: str
    report: SearchReport

    @property
    def ok(self) -> bool:
        return self.report.found


@dataclass(frozen=True)
class ClaimReport:
    """Structured outcome of one positivity claim on the ruled surface."""

    n: int
    part: int
    m: int
    chi: Fraction
    chi_expected: Fraction
    h_dot_g: Fraction
    h_dot_f: Fraction
    l_dot_g: Fraction
    l_nef: bool
    checks: tuple[ClaimCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks) and self.chi == self.chi_expected


def hirzebruch_claim(n: int, part: int, m: Optional[int] = None, depth: int = 24) -> ClaimReport:
    """Verify one part of the positivity claim for G + mF on the n-th model.

    Part 1 (m = n): base-point-freeness, the Euler characteristic, and the
    contraction degrees.  Part 2 (m >= n+1, default n+1): freeness, point
    separation in the four marked configurations, and tangent separation at
    the fiber-section point.  Every sub-check is a parameter search over a
    boundary decomposition; failures are reported, never raised.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    if part not in (1, 2):
        raise ValueError("part must be 1 or 2")
    if part == 1:
        if m is not None and m != n:
            raise ValueError("part 1 concerns m = n")
        m = n
    else:
        m = n + 1 if m is None else m
        if m < n + 1:
            raise ValueError("part 2 needs m >= n + 1")

    model = hz.hirzebruch_model(n)
    cone = hz.hirzebruch_cone(model, n)
    g_cls = hz.section_class(model)
    f_cls = hz.fiber_class(model)
    corner = hz.family_corner_class(model, n)
    h_cls = hz.hyperplane_class(model, m)
    l_cls = h_cls - model.canonical

    fam_all = ExplicitDegrees(
        "all irreducible curves: the section, the fiber class, the moving family",
        (LabeledClass("G", g_cls), LabeledClass("F", f_cls), LabeledClass("G+nF", corner)),
    )
    fam_off_section = ExplicitDegrees(
        "curves through a point off the section: its fiber and the moving family",
        (LabeledClass("F", f_cls), LabeledClass("G+nF", corner)),
    )
    fam_on_section = fam_all
    fam_scheme = ExplicitDegrees(
        "curves containing the tangent scheme: the section and the moving family",
        (LabeledClass("G", g_cls), LabeledClass("G+nF", corner)),
    )
    fam_joint_fiber = ExplicitDegrees(
        "curves through two points of one fiber: the fiber and the moving family",
        (LabeledClass("F", f_cls), LabeledClass("G+nF", corner)),
    )
    fam_joint_section = ExplicitDegrees(
        "curves through two points of the section: the section and the moving family",
        (LabeledClass("G", g_cls), LabeledClass("G+nF", corner)),
    )
    fam_joint_generic = ExplicitDegrees(
        "curves through two unrelated points: the moving family",
        (LabeledClass("G+nF", corner),),
    )

    eps = Param("eps")
    section_boundary = ParamFamily(
        surface=model,
        params=(eps,),
        boundary={"G": AffineExpr(1, {"eps": -1})},
        positive={"G": AffineExpr(2, {"eps": 1}), "F": AffineExpr.constant(m + n + 2)},
    )
    fiber_boundary = ParamFamily(
        surface=model,
        params=(eps, Param("alpha")),
        boundary={"G": AffineExpr(1, {"eps": -1}), "F": AffineExpr(1, {"alpha": -1})},
        positive={"G": AffineExpr(2, {"eps": 1}), "F": AffineExpr(m + n + 1, {"alpha": 1})},
    )

    free_witness = BetaWitness.single(Fraction(3), Fraction(3, 2), role="at-p")
    freeness_goal = MultiGoal(
        (
            FreenessGoal(cone, hz.POINT_GENERIC, fam_off_section, free_witness, label="off the section"),
            FreenessGoal(cone, hz.POINT_ON_G, fam_on_section, free_witness, label="on the section"),
        ),
        rule="freeness/degree-bound",
    )

    checks = [
        ClaimCheck(
            "freeness",
            f"{fam_off_section.description}; {fam_on_section.description}",
            search_params(section_boundary, freeness_goal, depth),
        )
    ]

    if part == 2:
        sep_fiber = SeparationGoal(
            cone,
            hz.POINT_ON_F,
            hz.POINT_ON_F2,
            fam_off_section,
            fam_off_section,
            fam_joint_fiber,
            witness=lambda v: BetaWitness.pair(
                Fraction(3, 2), Fraction(3, 2), 1 + v["eps"] / 2, 1 + v["eps"] / 2
            ),
            label="two points on one fiber, off the section",
        )
        sep_section = SeparationGoal(
            cone,
            hz.POINT_ON_G,
            hz.POINT_ON_G2,
            fam_on_section,
            fam_on_section,
            fam_joint_section,
            witness=lambda v: BetaWitness.pair(
                2, 2, Fraction(2) / (2 - v["eps"]), Fraction(2) / (2 - v["eps"])
            ),
            label="two points on the section",
        )
        sep_mixed_fiber = SeparationGoal(
            cone,
            hz.POINT_FG,
            hz.POINT_ON_F,
            fam_on_section,
            fam_off_section,
            fam_joint_fiber,
            witness=lambda v: BetaWitness.pair(
                1, 2, v["eps"] + v["alpha"], Fraction(2) / (2 - v["alpha"])
            ),
            label="fiber-section point with a fiber point",
        )
        sep_mixed_generic = SeparationGoal(
            cone,
            hz.POINT_ON_G,
            hz.POINT_GENERIC,
            fam_on_section,
            fam_off_section,
            fam_joint_generic,
            witness=lambda v: BetaWitness.pair(2, 2, Fraction(2) / (2 - v["eps"]), 2),
            label="section point with a general point",
        )
        tangent_goal = TangentGoal(
            cone,
            hz.TANGENT_G,
            fam_on_section,
            fam_scheme,
            witness=lambda v: BetaWitness(
                (Fraction(2), Fraction(2)),
                (Fraction(2) / (2 - v["eps"]),),
                ("at-p", "at-V"),
                ("global",),
            ),
            label="tangent to the section at the fiber-section point",
        )
        checks += [
            ClaimCheck(
                "separation on a fiber off the section",
                f"per point: {fam_off_section.description}; joint: {fam_joint_fiber.description}",
                search_params(fiber_boundary, sep_fiber, depth),
            ),
            ClaimCheck(
                "separation along the section",
                f"per point: {fam_on_section.description}; joint: {fam_joint_section.description}",
                search_params(section_boundary, sep_section, depth),
            ),
            ClaimCheck(
                "separation of the fiber-section point from a fiber point",
                f"joint: {fam_joint_fiber.description}",
                search_params(fiber_boundary, sep_mixed_fiber, depth),
            ),
            ClaimCheck(
                "separation of a section point from a general point",
                f"joint: {fam_joint_generic.description}",
                search_params(section_boundary, sep_mixed_generic, depth),
            ),
            ClaimCheck(
                "tangent separation at the fiber-section point",
                f"point: {fam_on_section.description}; scheme: {fam_scheme.description}",
                search_params(section_boundary, tangent_goal, depth),
            ),
        ]

    return ClaimReport(
        n=n,
        part=part,
        m=m,
        chi=riemann_roch_chi(h_cls, model.canonical, model.chi_structure_sheaf),
        chi_expected=Fraction(2 * m - n + 2),
        h_dot_g=h_cls.intersect(g_cls),
        h_dot_f=h_cls.intersect(f_cls),
        l_dot_g=l_cls.intersect(g_cls),
        l_nef=is_nef(l_cls, cone),
        checks=tuple(checks),
    )
