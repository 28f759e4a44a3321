"""Numerical criteria for adjoint linear systems, as exact decision procedures.

Every checker returns a :class:`CriterionVerdict` whose trace lists the exact
inequalities that were evaluated.  Verdicts are one-sided: ``established``
certifies the property through one of the implemented sufficient rules, while
``not-established`` only means no implemented rule fired on the given data.

Witness searches sweep dyadic rational candidates (denominators ``2**k``) and
verify each candidate exactly; in addition the exact rational corner of the
feasible region is always tried, so a search returns a witness whenever the
feasibility system has any real solution at all.  Every function here is a
pure, deterministic decision procedure over immutable data.
"""

from __future__ import annotations

import operator
import warnings
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import islice
from math import isqrt
from typing import Iterable, Optional, Union

from .lattice import DivisorClass, RationalLike, as_fraction

DEFAULT_DEPTH = 24
_PAIR_DEPTH = 12  # per-axis refinement depth for two-parameter searches


class DomainError(ValueError):
    """Inputs violate a checker's stated precondition."""


class PLCContextWarning(UserWarning):
    """The auxiliary divisor's multiplicity differs from the usual context value."""


# ---------------------------------------------------------------------------
# verdicts, traces, witnesses


_REL = {
    ">": operator.gt,
    ">=": operator.ge,
    "=": operator.eq,
    "<": operator.lt,
    "<=": operator.le,
}


@dataclass(frozen=True)
class TraceLine:
    text: str
    lhs: Fraction
    rel: str
    rhs: Fraction
    holds: bool


def check(text: str, lhs: RationalLike, rel: str, rhs: RationalLike) -> TraceLine:
    left, right = as_fraction(lhs), as_fraction(rhs)
    return TraceLine(text, left, rel, right, _REL[rel](left, right))


@dataclass(frozen=True)
class BetaWitness:
    """Positive rational bounds certifying one of the degree-bound rules."""

    beta2: tuple[Fraction, ...]
    beta1: tuple[Fraction, ...]
    beta2_roles: tuple[str, ...] = ()
    beta1_roles: tuple[str, ...] = ()

    def __post_init__(self):
        b2 = tuple(as_fraction(x) for x in self.beta2)
        b1 = tuple(as_fraction(x) for x in self.beta1)
        r2 = tuple(self.beta2_roles) or ("global",) * len(b2)
        r1 = tuple(self.beta1_roles) or ("global",) * len(b1)
        if len(r2) != len(b2) or len(r1) != len(b1):
            raise ValueError("witness role labels must match the value counts")
        if any(x <= 0 for x in b2 + b1):
            raise ValueError("witness values must be positive")
        object.__setattr__(self, "beta2", b2)
        object.__setattr__(self, "beta1", b1)
        object.__setattr__(self, "beta2_roles", r2)
        object.__setattr__(self, "beta1_roles", r1)

    @classmethod
    def single(cls, beta2: RationalLike, beta1: RationalLike, role: str = "global") -> "BetaWitness":
        return cls((as_fraction(beta2),), (as_fraction(beta1),), (role,), (role,))

    @classmethod
    def pair(
        cls,
        beta2_first: RationalLike,
        beta2_second: RationalLike,
        beta1_first: RationalLike,
        beta1_second: RationalLike,
        roles: tuple[str, str] = ("at-p", "at-q"),
    ) -> "BetaWitness":
        return cls(
            (as_fraction(beta2_first), as_fraction(beta2_second)),
            (as_fraction(beta1_first), as_fraction(beta1_second)),
            roles,
            roles,
        )


@dataclass(frozen=True)
class CriterionVerdict:
    established: bool
    rule: str
    trace: tuple[TraceLine, ...]
    witness: Optional[BetaWitness] = None
    note: str = ""

    def __post_init__(self):
        if self.established and not all(line.holds for line in self.trace):
            raise AssertionError("established verdict with a failing trace line")

    @property
    def status(self) -> str:
        return "established" if self.established else "not-established"


def _verdict(rule: str, lines: Iterable[TraceLine], witness: Optional[BetaWitness] = None, note: str = "") -> CriterionVerdict:
    trace = tuple(lines)
    return CriterionVerdict(all(l.holds for l in trace), rule, trace, witness, note)


# ---------------------------------------------------------------------------
# curve-level criterion and jets


class CurveAdjoint(str, Enum):
    NONE = "none"
    BASE_POINT_FREE = "base-point-free"
    VERY_AMPLE = "very-ample"


def curve_adjoint_check(deg: RationalLike) -> CurveAdjoint:
    """Positivity of the adjoint of a divisor of the given degree on a curve."""
    d = as_fraction(deg)
    if d >= 3:
        return CurveAdjoint.VERY_AMPLE
    if d >= 2:
        return CurveAdjoint.BASE_POINT_FREE
    return CurveAdjoint.NONE


def jet_separation(mu: RationalLike, s: int) -> CriterionVerdict:
    """Separation of s-jets at a point where the boundary has multiplicity mu."""
    m = as_fraction(mu)
    if m < 0:
        raise DomainError("multiplicity must be non-negative")
    s = int(s)
    if s < 0:
        raise DomainError("jet order must be non-negative")
    line = check("boundary multiplicity >= s + 2", m, ">=", s + 2)
    return _verdict("jet-separation", [line])


# ---------------------------------------------------------------------------
# the degree-bound minimum and dyadic candidate machinery


def min_formula(mu: RationalLike, beta2: RationalLike) -> Fraction:
    """The smaller of ``2 - mu`` and ``beta2 / (beta2 - (1 - mu))``.

    For ``1 <= mu < 2`` this is ``2 - mu``; for ``0 <= mu < 1`` it is the
    second branch, which never exceeds ``2 - mu`` (equality exactly at
    ``beta2 = 2 - mu``).
    """
    m, b2 = as_fraction(mu), as_fraction(beta2)
    if not 0 <= m < 2:
        raise DomainError(f"multiplicity must satisfy 0 <= mu < 2, got {m}")
    if b2 < 2 - m:
        raise DomainError(f"beta2 must be at least 2 - mu = {2 - m}, got {b2}")
    ratio = b2 / (b2 - (1 - m))
    return min(2 - m, ratio)


def _dyadic_below_sqrt(value: Fraction, depth: int) -> list[Fraction]:
    """For k = 0..depth, the largest multiple of 2**-k whose square is < value."""
    out: list[Fraction] = []
    if value <= 0:
        return out
    for k in range(depth + 1):
        scale = 1 << k
        bound = value * scale * scale
        a = isqrt(bound.numerator // bound.denominator)
        while a >= 0 and Fraction(a, scale) ** 2 >= value:
            a -= 1
        while Fraction(a + 1, scale) ** 2 < value:
            a += 1
        if a > 0:
            out.append(Fraction(a, scale))
    return out


def _dedupe(values: Iterable[Fraction]) -> list[Fraction]:
    seen: set[Fraction] = set()
    out: list[Fraction] = []
    for v in values:
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


def _degree_corner(mu: Fraction, mindeg: Fraction) -> Optional[Fraction]:
    """Smallest beta2 whose beta1 bound fits under mindeg, or None if none does.

    The bound from :func:`min_formula` is non-increasing in beta2, so the
    feasible beta2 range is an interval closed at this corner.
    """
    if mindeg >= 2 - mu:
        return 2 - mu
    if mu < 1 and mindeg > 1:
        corner = (1 - mu) * mindeg / (mindeg - 1)
        return max(corner, 2 - mu)
    return None


def _beta2_candidates(mu: Fraction, m2: Fraction, mindeg: Fraction, depth: int) -> list[Fraction]:
    lower = 2 - mu
    cands = [c for c in _dyadic_below_sqrt(m2, depth) if c >= lower]
    if lower > 0:
        cands.append(lower)
    corner = _degree_corner(mu, mindeg)
    if corner is not None and corner > 0:
        cands.append(corner)
    return _dedupe(cands)


def _dyadic_grid(lo: Fraction, hi: Fraction, levels: int) -> list[Fraction]:
    """Dyadic subdivision points of [lo, hi], endpoints included, lo first."""
    if hi < lo:
        return []
    span = hi - lo
    points = [lo]
    for k in range(1, levels + 1):
        scale = 1 << k
        for j in range(1, scale, 2):
            points.append(lo + span * Fraction(j, scale))
    points.append(hi)
    return _dedupe(points)


# ---------------------------------------------------------------------------
# freeness at a point


def freeness_witness(
    mu: RationalLike, m2: RationalLike, mindeg_p: RationalLike, depth: int = DEFAULT_DEPTH
) -> Optional[BetaWitness]:
    """Search for (beta2, beta1) certifying freeness at a low-multiplicity point.

    Complete: returns a witness iff the inequality system has a real solution.
    """
    m, sq, deg = as_fraction(mu), as_fraction(m2), as_fraction(mindeg_p)
    if not 0 <= m < 2:
        raise DomainError("freeness witness search requires 0 <= mu < 2")
    for b2 in _beta2_candidates(m, sq, deg, depth):
        if sq <= b2 * b2:
            continue
        bound = min_formula(m, b2)
        b1 = min(deg, bound)
        if b1 <= 0 or b1 < bound:
            continue
        return BetaWitness.single(b2, b1, role="at-p")
    return None


def _degree_bound_lines(
    mu: Fraction, m2: Fraction, mindeg: Fraction, b2: Fraction, b1: Fraction, where: str
) -> list[TraceLine]:
    lines = [
        check(f"M^2 > beta2{where}^2", m2, ">", b2 * b2),
        check(f"min degree{where} >= beta1{where}", mindeg, ">=", b1),
        check(f"beta2{where} >= 2 - mu{where}", b2, ">=", 2 - mu),
    ]
    if b2 >= 2 - mu:
        lines.append(
            check(
                f"beta1{where} >= min(2 - mu{where}, beta2{where}/(beta2{where} - (1 - mu{where})))",
                b1,
                ">=",
                min_formula(mu, b2),
            )
        )
    return lines


def _infeasible_lines(mu: Fraction, m2: Fraction, mindeg: Fraction, where: str) -> list[TraceLine]:
    corner = _degree_corner(mu, mindeg)
    lines = []
    if corner is not None:
        lines.append(check(f"M^2 > (minimal admissible beta2{where})^2", m2, ">", corner * corner))
    else:
        lines.append(check(f"M^2 > (2 - mu{where})^2", m2, ">", (2 - mu) ** 2))
    if mu < 1:
        lines.append(check(f"min degree{where} > 1 (forced when mu{where} < 1)", mindeg, ">", 1))
    else:
        lines.append(check(f"min degree{where} >= 2 - mu{where}", mindeg, ">=", 2 - mu))
    return lines


def freeness_at(
    mu: RationalLike,
    m2: RationalLike,
    mindeg_p: RationalLike,
    witness: Optional[BetaWitness] = None,
    depth: int = DEFAULT_DEPTH,
) -> CriterionVerdict:
    """Freeness of the adjoint system at a point.

    High multiplicity (mu >= 2) establishes freeness outright; otherwise the
    degree-bound rule runs with the supplied witness, or with a searched one.
    """
    m, sq, deg = as_fraction(mu), as_fraction(m2), as_fraction(mindeg_p)
    if m < 0:
        raise DomainError("multiplicity must be non-negative")
    if m >= 2:
        return _verdict("freeness/high-multiplicity", [check("mu >= 2", m, ">=", 2)])

    searched = witness is None
    if witness is None:
        witness = freeness_witness(m, sq, deg, depth)
    if witness is None:
        return _verdict(
            "freeness/degree-bound",
            _infeasible_lines(m, sq, deg, ""),
            note="no admissible (beta2, beta1) exists",
        )
    b2, b1 = witness.beta2[0], witness.beta1[0]
    note = "witness found by search" if searched else ""
    return _verdict("freeness/degree-bound", _degree_bound_lines(m, sq, deg, b2, b1, ""), witness, note)


# ---------------------------------------------------------------------------
# separation of two points


def separation_witness(
    mu_p: RationalLike,
    mu_q: RationalLike,
    m2: RationalLike,
    mindeg_p: RationalLike,
    mindeg_q: RationalLike,
    mindeg_pq: RationalLike,
    depth: int = _PAIR_DEPTH,
) -> Optional[BetaWitness]:
    """Search for (beta2, beta1) pairs certifying separation of two
    low-multiplicity points."""
    mp, mq = as_fraction(mu_p), as_fraction(mu_q)
    sq = as_fraction(m2)
    dp, dq, dpq = as_fraction(mindeg_p), as_fraction(mindeg_q), as_fraction(mindeg_pq)
    if not (0 <= mp < 2 and 0 <= mq < 2):
        raise DomainError("pair witness search requires both multiplicities in [0, 2)")
    corner_p = _degree_corner(mp, dp)
    corner_q = _degree_corner(mq, dq)
    if corner_p is None or corner_q is None:
        return None
    room_p = sq - corner_q * corner_q
    tops = _dyadic_below_sqrt(room_p, depth)
    if not tops:
        return None
    xs = _dyadic_grid(corner_p, tops[-1], levels=6) if tops[-1] >= corner_p else []
    for b2p in xs:
        bound_p = min_formula(mp, b2p)
        if bound_p > dp:
            continue
        room = sq - b2p * b2p
        ys = _dedupe(_dyadic_below_sqrt(room, depth)[-1:] + [corner_q])
        for b2q in ys:
            if b2q < corner_q or b2p * b2p + b2q * b2q >= sq:
                continue
            bound_q = min_formula(mq, b2q)
            if bound_q > dq or bound_p + bound_q > dpq:
                continue
            return BetaWitness.pair(b2p, b2q, bound_p, bound_q)
    return None


def _witness_for_side(witness: Optional[BetaWitness], side: int) -> Optional[BetaWitness]:
    """Extract one (beta2, beta1) slot from a possibly two-sided witness."""
    if witness is None:
        return None
    i = side if len(witness.beta2) > side else 0
    j = side if len(witness.beta1) > side else 0
    return BetaWitness.single(witness.beta2[i], witness.beta1[j], role="at-p")


def separation(
    mu_p: RationalLike,
    mu_q: RationalLike,
    m2: RationalLike,
    mindeg_p: RationalLike,
    mindeg_q: RationalLike,
    mindeg_pq: RationalLike,
    witness: Optional[BetaWitness] = None,
    depth: int = _PAIR_DEPTH,
) -> CriterionVerdict:
    """Separation of two distinct points by the adjoint system.

    Both multiplicities >= 2 establish separation outright.  With exactly one
    high multiplicity, the freeness-style degree bound runs at the other
    point.  With both below 2, the two-sided degree bounds run, including the
    joint bound for curves through both points.
    """
    mp, mq = as_fraction(mu_p), as_fraction(mu_q)
    sq = as_fraction(m2)
    dp, dq, dpq = as_fraction(mindeg_p), as_fraction(mindeg_q), as_fraction(mindeg_pq)
    if mp < 0 or mq < 0:
        raise DomainError("multiplicities must be non-negative")

    if mp >= 2 and mq >= 2:
        lines = [check("mu_p >= 2", mp, ">=", 2), check("mu_q >= 2", mq, ">=", 2)]
        return _verdict("separation/both-high-multiplicity", lines)

    if mp >= 2 or mq >= 2:
        # run the one-point degree bound at the low-multiplicity point
        if mp >= 2:
            high_text, high = "mu_p >= 2", mp
            low, low_deg, side = mq, dq, 1
        else:
            high_text, high = "mu_q >= 2", mq
            low, low_deg, side = mp, dp, 0
        sub = _witness_for_side(witness, side)
        searched = sub is None
        if sub is None:
            sub = freeness_witness(low, sq, low_deg, depth=DEFAULT_DEPTH)
        lines = [check(high_text, high, ">=", 2)]
        if sub is None:
            lines += _infeasible_lines(low, sq, low_deg, "")
            return _verdict("separation/one-high-multiplicity", lines, note="no admissible witness at the low point")
        lines += _degree_bound_lines(low, sq, low_deg, sub.beta2[0], sub.beta1[0], "")
        note = "witness found by search" if searched else ""
        return _verdict("separation/one-high-multiplicity", lines, sub, note)

    searched = witness is None
    if witness is None:
        witness = separation_witness(mp, mq, sq, dp, dq, dpq, depth)
    if witness is None:
        lines = _infeasible_lines(mp, sq, dp, "_p") + _infeasible_lines(mq, sq, dq, "_q")
        lines.append(
            check("M^2 > (2 - mu_p)^2 + (2 - mu_q)^2", sq, ">", (2 - mp) ** 2 + (2 - mq) ** 2)
        )
        return _verdict("separation/degree-bounds", lines, note="no admissible witness pair found")

    if len(witness.beta2) < 2 or len(witness.beta1) < 2:
        raise DomainError("two-point separation needs beta values for both points")
    b2p, b2q = witness.beta2[0], witness.beta2[1]
    b1p, b1q = witness.beta1[0], witness.beta1[1]
    lines = [check("M^2 > beta2_p^2 + beta2_q^2", sq, ">", b2p * b2p + b2q * b2q)]
    lines += [
        check("min degree at p >= beta1_p", dp, ">=", b1p),
        check("min degree at q >= beta1_q", dq, ">=", b1q),
        check("min degree through both >= beta1_p + beta1_q", dpq, ">=", b1p + b1q),
        check("beta2_p >= 2 - mu_p", b2p, ">=", 2 - mp),
        check("beta2_q >= 2 - mu_q", b2q, ">=", 2 - mq),
    ]
    if b2p >= 2 - mp:
        lines.append(check("beta1_p >= degree-bound minimum at p", b1p, ">=", min_formula(mp, b2p)))
    if b2q >= 2 - mq:
        lines.append(check("beta1_q >= degree-bound minimum at q", b1q, ">=", min_formula(mq, b2q)))
    note = "witness found by search" if searched else ""
    return _verdict("separation/degree-bounds", lines, witness, note)


# ---------------------------------------------------------------------------
# separation of a tangent direction


def tangent_beta1_bound(
    mu_p: RationalLike, mu_V: RationalLike, beta2_p: RationalLike, beta2_V: RationalLike
) -> Fraction:
    """Lower bound required of beta1 in the tangent degree-bound rule.

    For total multiplicity >= 2 the bound is ``(4 - mu_v)/2``; below 2 the
    relaxed branch ``s/(s - (2 - mu_v))`` applies with ``s`` the sum of the
    two beta2 values (its denominator is positive whenever the beta2 bounds
    hold, and the relaxed branch never exceeds the plain one).
    """
    mp, mv_ = as_fraction(mu_p), as_fraction(mu_V)
    b2p, b2v = as_fraction(beta2_p), as_fraction(beta2_V)
    mu_v = mp + mv_
    plain = (4 - mu_v) / 2
    if mu_v >= 2:
        return plain
    s = b2p + b2v
    denom = s - (2 - mu_v)
    if denom <= 0:
        return plain
    return min(plain, s / denom)


def tangent_witness(
    mu_p: RationalLike,
    mu_V: RationalLike,
    m2: RationalLike,
    mindeg_p: RationalLike,
    mindeg_Z: RationalLike,
    depth: int = _PAIR_DEPTH,
) -> Optional[BetaWitness]:
    """Search for (beta2_p, beta2_V, beta1) certifying tangent separation at a
    low-multiplicity point."""
    mp, mv_ = as_fraction(mu_p), as_fraction(mu_V)
    sq = as_fraction(m2)
    dp, dz = as_fraction(mindeg_p), as_fraction(mindeg_Z)
    if not (0 <= mv_ <= mp < 2):
        raise DomainError("tangent witness search requires 0 <= mu_V <= mu_p < 2")
    cap = min(dp, dz / 2)
    if cap <= 0:
        return None
    lower_p, lower_v = 2 - mp, 2 - mv_
    tops = _dyadic_below_sqrt(sq - lower_v * lower_v, depth)
    if not tops or tops[-1] < lower_p:
        return None
    for b2p in _dyadic_grid(lower_p, tops[-1], levels=6):
        room = sq - b2p * b2p
        ys = _dedupe(_dyadic_below_sqrt(room, depth)[-1:] + [lower_v])
        for b2v in ys:
            if b2v < lower_v or b2p * b2p + b2v * b2v >= sq:
                continue
            bound = tangent_beta1_bound(mp, mv_, b2p, b2v)
            if bound > cap or bound <= 0:
                continue
            return BetaWitness(
                beta2=(b2p, b2v), beta1=(bound,), beta2_roles=("at-p", "at-V"), beta1_roles=("global",)
            )
    return None


def tangent_separation(
    mu_p: RationalLike,
    mu_V: RationalLike,
    m2: RationalLike,
    mindeg_p: RationalLike,
    mindeg_Z: RationalLike,
    witness: Optional[BetaWitness] = None,
    depth: int = _PAIR_DEPTH,
) -> CriterionVerdict:
    """Separation of a tangent direction at a point.

    ``mu_V`` is the boundary's order at the infinitely-near point of the
    direction; the total multiplicity is ``mu_v = mu_p + mu_V``.  Degrees:
    ``mindeg_p`` over curves through the point, ``mindeg_Z`` over curves
    containing the length-2 scheme (through the point, tangent to the
    direction).
    """
    mp, mv_ = as_fraction(mu_p), as_fraction(mu_V)
    sq = as_fraction(m2)
    dp, dz = as_fraction(mindeg_p), as_fraction(mindeg_Z)
    if mp < 0 or mv_ < 0:
        raise DomainError("multiplicities must be non-negative")
    if mv_ > mp:
        raise DomainError("the infinitely-near order cannot exceed the order at the point")
    mu_v = mp + mv_

    if mp >= 3 or mu_v >= 4:
        if mp >= 3:
            lines = [check("mu_p >= 3", mp, ">=", 3)]
        else:
            lines = [check("mu_v >= 4", mu_v, ">=", 4)]
        return _verdict("tangent/high-multiplicity", lines)

    if mp >= 2:
        lines = [
            check("2 <= mu_p", mp, ">=", 2),
            check("M^2 > (4 - mu_v)^2", sq, ">", (4 - mu_v) ** 2),
            check("min degree at p >= (4 - mu_v)/2", dp, ">=", (4 - mu_v) / 2),
            check("min degree on Z >= 4 - mu_v", dz, ">=", 4 - mu_v),
        ]
        return _verdict("tangent/intermediate-multiplicity", lines)

    searched = witness is None
    if witness is None:
        witness = tangent_witness(mp, mv_, sq, dp, dz, depth)
    if witness is None:
        lines = [
            check("M^2 > (2 - mu_p)^2 + (2 - mu_V)^2", sq, ">", (2 - mp) ** 2 + (2 - mv_) ** 2)
        ]
        if mu_v >= 2:
            lines += [
                check("min degree at p >= (4 - mu_v)/2", dp, ">=", (4 - mu_v) / 2),
                check("min degree on Z >= 4 - mu_v", dz, ">=", 4 - mu_v),
            ]
        else:
            lines += [
                check("min degree at p > 1 (forced when mu_v < 2)", dp, ">", 1),
                check("min degree on Z > 2 (forced when mu_v < 2)", dz, ">", 2),
            ]
        return _verdict("tangent/degree-bounds", lines, note="no admissible witness found")

    if len(witness.beta2) < 2:
        raise DomainError("tangent separation needs beta2 values at the point and at V")
    b2p, b2v = witness.beta2[0], witness.beta2[1]
    b1 = witness.beta1[0]
    lines = [
        check("M^2 > beta2_p^2 + beta2_V^2", sq, ">", b2p * b2p + b2v * b2v),
        check("min degree at p >= beta1", dp, ">=", b1),
        check("min degree on Z >= 2*beta1", dz, ">=", 2 * b1),
        check("beta2_p >= 2 - mu_p", b2p, ">=", 2 - mp),
        check("beta2_V >= 2 - mu_V", b2v, ">=", 2 - mv_),
        check("beta1 >= tangent degree-bound minimum", b1, ">=", tangent_beta1_bound(mp, mv_, b2p, b2v)),
    ]
    note = "witness found by search" if searched else ""
    return _verdict("tangent/degree-bounds", lines, witness, note)


# ---------------------------------------------------------------------------
# global very-ampleness


def very_ampleness_witness(
    m2: RationalLike, mindeg_all: RationalLike, depth: int = DEFAULT_DEPTH
) -> Optional[BetaWitness]:
    """Search for (beta2, beta1) certifying very ampleness from global data.

    Complete: a witness is returned iff beta2 >= 2 with M^2 > 2*beta2^2 and
    2*beta2/(beta2 - 1) <= mindeg has a real solution.
    """
    sq, deg = as_fraction(m2), as_fraction(mindeg_all)
    half = sq / 2
    cands = [c for c in _dyadic_below_sqrt(half, depth) if c >= 2]
    cands.append(Fraction(2))
    if deg > 2:
        cands.append(max(Fraction(2), deg / (deg - 2)))
    for b2 in _dedupe(cands):
        if sq <= 2 * b2 * b2:
            continue
        b1 = b2 / (b2 - 1)
        if deg >= 2 * b1:
            return BetaWitness.single(b2, b1)
    return None


def very_ampleness(
    m2: RationalLike,
    mindeg_all: RationalLike,
    witness: Optional[BetaWitness] = None,
    depth: int = DEFAULT_DEPTH,
) -> CriterionVerdict:
    """Very ampleness of the adjoint system from global degree data."""
    sq, deg = as_fraction(m2), as_fraction(mindeg_all)
    searched = witness is None
    if witness is None:
        witness = very_ampleness_witness(sq, deg, depth)
    if witness is None:
        lines = [check("M^2 > 2*beta2^2 with beta2 >= 2 (forces M^2 > 8)", sq, ">", 8)]
        if deg > 2:
            corner = max(Fraction(2), deg / (deg - 2))
            lines.append(
                check("M^2 > 2*(minimal admissible beta2)^2", sq, ">", 2 * corner * corner)
            )
        lines.append(check("min degree > 2 (forced by 2*beta1 > 2)", deg, ">", 2))
        return _verdict("very-ample/witness", lines, note="no admissible (beta2, beta1) exists")
    b2, b1 = witness.beta2[0], witness.beta1[0]
    lines = [
        check("beta2 >= 2", b2, ">=", 2),
        check("beta1 >= beta2/(beta2 - 1)", b1, ">=", b2 / (b2 - 1)),
        check("M^2 > 2*beta2^2", sq, ">", 2 * b2 * b2),
        check("min degree >= 2*beta1", deg, ">=", 2 * b1),
    ]
    note = "witness found by search" if searched else ""
    return _verdict("very-ample/witness", lines, witness, note)


def _sqrt2_lower_convergents() -> Iterable[Fraction]:
    p, q = 1, 1
    while True:
        if p * p < 2 * q * q:
            yield Fraction(p, q)
        p, q = p + 2 * q, p + q


def threshold_very_ampleness(m2: RationalLike, mindeg_all: RationalLike) -> CriterionVerdict:
    """Very ampleness from the single irrational threshold, decided exactly.

    Requires M^2 > 6 + 4*sqrt(2) and min degree > 2 + sqrt(2); both are
    decided over the rationals by exact square comparisons.  On success the
    verdict carries an explicit witness for the two-parameter rule, obtained
    from continued-fraction approximations of sqrt(2) from below.
    """
    sq, deg = as_fraction(m2), as_fraction(mindeg_all)
    lines = [
        check("min degree > 2", deg, ">", 2),
        check("(min degree - 2)^2 > 2", (deg - 2) ** 2, ">", 2),
        check("M^2 > 6", sq, ">", 6),
        check("(M^2 - 6)^2 > 32", (sq - 6) ** 2, ">", 32),
    ]
    if not all(l.holds for l in lines):
        return _verdict("very-ample/threshold", lines)
    witness = None
    for conv in islice(_sqrt2_lower_convergents(), 200):
        b2 = 1 + conv
        if b2 < 2:
            continue
        b1 = b2 / (b2 - 1)
        if sq > 2 * b2 * b2 and deg >= 2 * b1:
            witness = BetaWitness.single(b2, b1)
            break
    if witness is None:  # unreachable once the threshold comparisons hold
        raise AssertionError("threshold passed but no rational witness materialized")
    return _verdict("very-ample/threshold", lines, witness, note="witness from sqrt(2) convergents")


# ---------------------------------------------------------------------------
# partially-log-canonical thresholds


@dataclass(frozen=True)
class LocalCurveData:
    """Boundary and auxiliary coefficients of one curve through the point."""

    name: str
    b: Fraction
    d: Fraction
    mult_p: int
    mult_V: Optional[int] = None
    contains_Z: Optional[bool] = None

    def __post_init__(self):
        object.__setattr__(self, "b", as_fraction(self.b))
        object.__setattr__(self, "d", as_fraction(self.d))
        object.__setattr__(self, "mult_p", int(self.mult_p))
        if not 0 <= self.b < 1:
            raise ValueError(f"boundary coefficient of {self.name!r} must be in [0, 1)")
        if self.d < 0:
            raise ValueError(f"auxiliary coefficient of {self.name!r} must be non-negative")
        if self.mult_p < 1:
            raise ValueError(f"{self.name!r} is listed through the point, so mult_p >= 1")
        if self.mult_V is not None:
            object.__setattr__(self, "mult_V", int(self.mult_V))
            if not 0 <= self.mult_V <= self.mult_p:
                raise ValueError(f"infinitely-near order of {self.name!r} must be in [0, mult_p]")


@dataclass(frozen=True)
class LocalConfig:
    """All curves through one point, with boundary/auxiliary data."""

    curves: tuple[LocalCurveData, ...]

    def __post_init__(self):
        object.__setattr__(self, "curves", tuple(self.curves))
        names = [c.name for c in self.curves]
        if len(set(names)) != len(names):
            raise ValueError("duplicate curve names in local configuration")

    @property
    def mu(self) -> Fraction:
        return sum((c.b * c.mult_p for c in self.curves), Fraction(0))

    @property
    def m_p(self) -> Fraction:
        return sum((c.d * c.mult_p for c in self.curves), Fraction(0))

    @property
    def mu_V(self) -> Fraction:
        return sum((c.b * (c.mult_V or 0) for c in self.curves), Fraction(0))

    @property
    def mu_v(self) -> Fraction:
        return self.mu + self.mu_V


@dataclass(frozen=True)
class ThresholdResult:
    """Either "already PLC" or the exact threshold with its achieving terms.

    ``achievers`` lists every term attaining the minimum, in declaration
    order; curve names for coefficient terms, ``"ord-cap"`` for the
    multiplicity cap, ``"one"`` for the constant cap of the primed variant.
    """

    is_plc: bool
    c: Optional[Fraction] = None
    achievers: tuple[str, ...] = ()

    SPECIAL = ("ord-cap", "one")

    @property
    def critical(self) -> Optional[str]:
        for label in self.achievers:
            if label not in self.SPECIAL:
                return label
        return None


class ThresholdMode(str, Enum):
    BASIC = "basic"
    CAP3 = "cap3"
    PRIME = "prime"


def plc_threshold(
    config: LocalConfig,
    mode: Union[str, ThresholdMode] = ThresholdMode.BASIC,
    *,
    c0: Optional[str] = None,
    weak_boundary: bool = False,
) -> ThresholdResult:
    """Exact threshold up to which the scaled auxiliary divisor keeps all
    combined coefficients at the point within the log-canonical range.

    basic:  minimum of (1 - b_i)/d_i over curves with b_i + d_i > 1; if there
            are none the configuration is already PLC at the point.
    cap3:   adds the term (3 - mu)/m_p when m_p > 0.
    prime:  primed variant relative to a chosen curve ``c0``: minimum of 1,
            (3 - mu)/m_p, (2 - b_0)/d_0, and (1 - b_i)/d_i over the *other*
            curves with b_i + d_i > 1.  ``weak_boundary=True`` switches that
            side condition to b_i + d_i >= 1.

    Curves with d_i = 0 never enter a minimum; m_p = 0 drops the cap term.
    In basic mode a context warning is emitted when m_p != 2 - mu, the value
    the threshold is normally used with.
    """
    mode = ThresholdMode(mode)
    mu, m_p = config.mu, config.m_p

    def coefficient_terms(exclude: Optional[str]) -> list[tuple[str, Fraction]]:
        out = []
        for cur in config.curves:
            if cur.name == exclude or cur.d == 0:
                continue
            total = cur.b + cur.d
            if total > 1 or (weak_boundary and mode is ThresholdMode.PRIME and total >= 1):
                out.append((cur.name, (1 - cur.b) / cur.d))
        return out

    terms: list[tuple[str, Fraction]] = []
    if mode is ThresholdMode.BASIC:
        if m_p != 2 - mu:
            warnings.warn(
                f"threshold taken with ord_p(D) = {m_p}, not the usual 2 - mu = {2 - mu}",
                PLCContextWarning,
                stacklevel=2,
            )
        terms = coefficient_terms(exclude=None)
        if not terms:
            return ThresholdResult(is_plc=True)
    elif mode is ThresholdMode.CAP3:
        if m_p > 0:
            terms.append(("ord-cap", (3 - mu) / m_p))
        terms += coefficient_terms(exclude=None)
        if not terms:
            return ThresholdResult(is_plc=True)
    else:
        if c0 is None:
            raise ValueError("primed threshold needs the distinguished curve c0")
        chosen = next((c for c in config.curves if c.name == c0), None)
        if chosen is None:
            raise ValueError(f"no curve named {c0!r} in the local configuration")
        terms.append(("one", Fraction(1)))
        if m_p > 0:
            terms.append(("ord-cap", (3 - mu) / m_p))
        if chosen.d > 0:
            terms.append((chosen.name, (2 - chosen.b) / chosen.d))
        terms += coefficient_terms(exclude=c0)

    c = min(v for _, v in terms)
    achievers = tuple(label for label, v in terms if v == c)
    return ThresholdResult(is_plc=False, c=c, achievers=achievers)


# ---------------------------------------------------------------------------
# Euler characteristic


def riemann_roch_chi(h: DivisorClass, k: DivisorClass, chi_o: RationalLike) -> Fraction:
    """chi of a line bundle on a surface: H.(H - K)/2 + chi(O)."""
    return h.intersect(h - k) / 2 + as_fraction(chi_o)
