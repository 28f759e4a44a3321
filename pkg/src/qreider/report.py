"""Query execution over a bound document, with text and JSON rendering.

Every rational in a report is rendered exactly; decimal approximations appear
only alongside, explicitly marked ``approx``.  JSON encodes rationals as
``{"num": ..., "den": ...}``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import __version__
from .cones import DegreeFilter, min_degree
from .criteria import (
    BetaWitness,
    CriterionVerdict,
    LocalConfig,
    LocalCurveData,
    TraceLine,
    freeness_at,
    plc_threshold,
    riemann_roch_chi,
    separation,
    tangent_separation,
    threshold_very_ampleness,
    very_ampleness,
)
from .document import BoundDocument, Document, ParseError, QueryDecl, bind
from .search import (
    ConeDegrees,
    FreenessGoal,
    ParamFamily,
    SearchReport,
    SeparationGoal,
    TangentGoal,
    VeryAmpleGoal,
    hirzebruch_claim,
    search_params,
)


class QueryError(ValueError):
    """A query could not be executed on the given document."""


@dataclass
class QueryResult:
    query: str
    status: str  # established | not-established | value | report | error
    rule: str = ""
    trace: tuple[TraceLine, ...] = ()
    witness: Optional[BetaWitness] = None
    values: dict[str, Fraction] = field(default_factory=dict)
    labels: dict[str, str] = field(default_factory=dict)
    flags: dict[str, bool] = field(default_factory=dict)
    found: Optional[bool] = None
    params: dict[str, Fraction] = field(default_factory=dict)
    attempts: Optional[int] = None
    checks: tuple["QueryResult", ...] = ()
    notes: tuple[str, ...] = ()
    error: str = ""
    elapsed_ms: float = 0.0


@dataclass
class Report:
    source: str
    results: tuple[QueryResult, ...]

    @property
    def any_error(self) -> bool:
        return any(r.status == "error" for r in self.results)


# ---------------------------------------------------------------------------
# helpers


def _require(q: QueryDecl, key: str) -> str:
    value = q.arg(key)
    if value is None:
        raise QueryError(f"query {q.kind!r} needs argument {key}=...")
    return value


def _rational_arg(q: QueryDecl, key: str) -> Optional[Fraction]:
    raw = q.arg(key)
    if raw is None:
        return None
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError):
        raise QueryError(f"argument {key}={raw!r} is not a rational") from None


def _need_model(bound: BoundDocument):
    if bound.model is None:
        raise QueryError("this query needs a declared surface")
    return bound.model


def _need_cone(bound: BoundDocument):
    if bound.cone is None:
        raise QueryError("this query needs a declared cone")
    return bound.cone


def _mindeg(bound: BoundDocument, m_cls, filt: DegreeFilter, override: Optional[Fraction]) -> Fraction:
    if override is not None:
        return override
    return min_degree(m_cls, _need_cone(bound), filt)


def _from_verdict(result: QueryResult, verdict: CriterionVerdict) -> QueryResult:
    result.status = verdict.status
    result.rule = verdict.rule
    result.trace = verdict.trace
    result.witness = verdict.witness
    if verdict.note:
        result.notes = result.notes + (verdict.note,)
    return result


def _from_search(result: QueryResult, report: SearchReport) -> QueryResult:
    result.found = report.found
    result.attempts = report.attempts
    result.params = dict(report.params)
    result.notes = result.notes + tuple(report.notes)
    if report.verdict is not None:
        _from_verdict(result, report.verdict)
    else:
        result.status = "not-established"
    return result


# ---------------------------------------------------------------------------
# individual queries


def _run_chi(bound: BoundDocument, q: QueryDecl, result: QueryResult) -> None:
    model = _need_model(bound)
    name = q.positional[0] if q.positional else q.arg("H")
    if name is None:
        raise QueryError("chi needs a divisor: 'chi H'")
    h = bound.concrete_divisor(name).divisor_class()
    value = riemann_roch_chi(h, model.canonical, model.chi_structure_sheaf)
    result.status = "value"
    result.values["chi"] = value


def _freeness_witness_args(q: QueryDecl) -> Optional[BetaWitness]:
    b2, b1 = _rational_arg(q, "beta2"), _rational_arg(q, "beta1")
    if b2 is None and b1 is None:
        return None
    if b2 is None or b1 is None:
        raise QueryError("give both beta2= and beta1=, or neither")
    return BetaWitness.single(b2, b1, role="at-p")


def _run_check_free(bound: BoundDocument, q: QueryDecl, result: QueryResult) -> None:
    _need_model(bound)
    point = _require(q, "point")
    boundary = bound.concrete_divisor(_require(q, "B"))
    positive = bound.concrete_divisor(_require(q, "M"))
    m_cls = positive.divisor_class()
    mu = boundary.ord_at(point)
    filt = DegreeFilter(q.arg("filter", "through-p"))
    deg = _mindeg(bound, m_cls, filt, _rational_arg(q, "mindeg"))
    m2 = m_cls.self_intersection()
    result.values.update({"mu": mu, "M2": m2, "mindeg": deg})
    _from_verdict(result, freeness_at(mu, m2, deg, _freeness_witness_args(q)))


def _run_check_separate(bound: BoundDocument, q: QueryDecl, result: QueryResult) -> None:
    _need_model(bound)
    p, qq = _require(q, "p"), _require(q, "q")
    boundary = bound.concrete_divisor(_require(q, "B"))
    positive = bound.concrete_divisor(_require(q, "M"))
    m_cls = positive.divisor_class()
    mu_p, mu_q = boundary.ord_at(p), boundary.ord_at(qq)
    deg_p = _mindeg(bound, m_cls, DegreeFilter.ALL, _rational_arg(q, "mindeg_p"))
    deg_q = _mindeg(bound, m_cls, DegreeFilter.ALL, _rational_arg(q, "mindeg_q"))
    deg_pq = _mindeg(bound, m_cls, DegreeFilter.ALL, _rational_arg(q, "mindeg_pq"))
    m2 = m_cls.self_intersection()
    witness = None
    parts = [_rational_arg(q, k) for k in ("beta2_p", "beta2_q", "beta1_p", "beta1_q")]
    if any(v is not None for v in parts):
        if any(v is None for v in parts):
            raise QueryError("give all of beta2_p=, beta2_q=, beta1_p=, beta1_q=, or none")
        witness = BetaWitness.pair(*parts)
    result.values.update(
        {"mu_p": mu_p, "mu_q": mu_q, "M2": m2, "mindeg_p": deg_p, "mindeg_q": deg_q, "mindeg_pq": deg_pq}
    )
    _from_verdict(result, separation(mu_p, mu_q, m2, deg_p, deg_q, deg_pq, witness))


def _run_check_tangent(bound: BoundDocument, q: QueryDecl, result: QueryResult) -> None:
    _need_model(bound)
    tangent = _require(q, "tangent")
    boundary = bound.concrete_divisor(_require(q, "B"))
    positive = bound.concrete_divisor(_require(q, "M"))
    m_cls = positive.divisor_class()
    orders = boundary.ord_tangential(tangent)
    deg_p = _mindeg(bound, m_cls, DegreeFilter.THROUGH_POINT, _rational_arg(q, "mindeg_p"))
    deg_z = _mindeg(bound, m_cls, DegreeFilter.CONTAINING_Z, _rational_arg(q, "mindeg_Z"))
    m2 = m_cls.self_intersection()
    witness = None
    parts = [_rational_arg(q, k) for k in ("beta2_p", "beta2_V", "beta1")]
    if any(v is not None for v in parts):
        if any(v is None for v in parts):
            raise QueryError("give all of beta2_p=, beta2_V=, beta1=, or none")
        witness = BetaWitness(
            (parts[0], parts[1]), (parts[2],), ("at-p", "at-V"), ("global",)
        )
    result.values.update(
        {
            "mu_p": orders.at_point,
            "mu_V": orders.at_infinitely_near,
            "mu_v": orders.total,
            "M2": m2,
            "mindeg_p": deg_p,
            "mindeg_Z": deg_z,
        }
    )
    _from_verdict(
        result,
        tangent_separation(orders.at_point, orders.at_infinitely_near, m2, deg_p, deg_z, witness),
    )


def _run_check_very_ample(bound: BoundDocument, q: QueryDecl, result: QueryResult) -> None:
    m2 = _rational_arg(q, "m2")
    deg = _rational_arg(q, "mindeg")
    if m2 is None or deg is None:
        positive = bound.concrete_divisor(_require(q, "M"))
        m_cls = positive.divisor_class()
        if m2 is None:
            m2 = m_cls.self_intersection()
        if deg is None:
            deg = _mindeg(bound, m_cls, DegreeFilter.ALL, None)
    result.values.update({"M2": m2, "mindeg": deg})
    _from_verdict(result, very_ampleness(m2, deg, _freeness_witness_args(q)))


def _run_check_corollary2(bound: BoundDocument, q: QueryDecl, result: QueryResult) -> None:
    m2 = _rational_arg(q, "m2")
    deg = _rational_arg(q, "mindeg")
    if m2 is None or deg is None:
        positive = bound.concrete_divisor(_require(q, "M"))
        m_cls = positive.divisor_class()
        if m2 is None:
            m2 = m_cls.self_intersection()
        if deg is None:
            deg = _mindeg(bound, m_cls, DegreeFilter.ALL, None)
    result.values.update({"M2": m2, "mindeg": deg})
    _from_verdict(result, threshold_very_ampleness(m2, deg))


def _run_plc_threshold(bound: BoundDocument, q: QueryDecl, result: QueryResult) -> None:
    model = _need_model(bound)
    point = model.point(_require(q, "point"))
    boundary = bound.concrete_divisor(_require(q, "B"))
    auxiliary = bound.concrete_divisor(_require(q, "D"))
    mode = q.arg("mode", "basic")
    weak = q.arg("weak", "false").lower() in ("1", "true", "yes")
    # declaration order of the point's curves decides threshold tie-breaking
    curves = tuple(
        LocalCurveData(name, boundary.coeff(name), auxiliary.coeff(name), mult)
        for name, mult in point.mults.items()
        if mult >= 1
    )
    config = LocalConfig(curves)
    outcome = plc_threshold(config, mode, c0=q.arg("c0"), weak_boundary=weak)
    result.status = "value"
    result.values.update({"mu": config.mu, "ord_D": config.m_p})
    result.flags["plc"] = outcome.is_plc
    if not outcome.is_plc:
        result.values["c"] = outcome.c
        if outcome.critical is not None:
            result.labels["critical"] = outcome.critical
        result.labels["achievers"] = ", ".join(outcome.achievers)


def _run_search(bound: BoundDocument, q: QueryDecl, result: QueryResult, default_depth: int = 24) -> None:
    model = _need_model(bound)
    cone = _need_cone(bound)
    goal_kind = _require(q, "goal")
    depth = int(q.arg("depth", str(default_depth)))
    boundary = bound.divisor_expr(_require(q, "B"))
    positive = bound.divisor_expr(_require(q, "M"))
    family = ParamFamily(model, bound.params, boundary, positive)
    if goal_kind == "free":
        goal = FreenessGoal(
            cone,
            _require(q, "point"),
            ConeDegrees(cone, DegreeFilter.THROUGH_POINT),
            _freeness_witness_args(q),
        )
    elif goal_kind == "separate":
        goal = SeparationGoal(
            cone,
            _require(q, "p"),
            _require(q, "q"),
            ConeDegrees(cone, DegreeFilter.ALL),
            ConeDegrees(cone, DegreeFilter.ALL),
            ConeDegrees(cone, DegreeFilter.ALL),
        )
    elif goal_kind == "tangent":
        goal = TangentGoal(
            cone,
            _require(q, "tangent"),
            ConeDegrees(cone, DegreeFilter.THROUGH_POINT),
            ConeDegrees(cone, DegreeFilter.CONTAINING_Z),
        )
    elif goal_kind == "very-ample":
        goal = VeryAmpleGoal(cone, ConeDegrees(cone, DegreeFilter.ALL), _freeness_witness_args(q))
    else:
        raise QueryError(f"unknown search goal {goal_kind!r}")
    _from_search(result, search_params(family, goal, depth))


def _claim_to_result(claim) -> list[QueryResult]:
    out = []
    for chk in claim.checks:
        sub = QueryResult(query=chk.name, status="not-established")
        _from_search(sub, chk.report)
        sub.labels["families"] = chk.families
        out.append(sub)
    return out


def _run_hirzebruch_claim(bound: BoundDocument, q: QueryDecl, result: QueryResult, default_depth: int = 24) -> None:
    n = int(_require(q, "n"))
    part = int(_require(q, "part"))
    m = q.arg("m")
    depth = int(q.arg("depth", str(default_depth)))
    claim = hirzebruch_claim(n, part, int(m) if m is not None else None, depth)
    result.status = "report"
    result.flags.update({"ok": claim.ok, "L_nef": claim.l_nef})
    if not claim.l_nef:
        result.labels["adjoint_difference"] = (
            "not nef, so the integral-class degree criterion is inapplicable without a boundary decomposition"
        )
    result.values.update(
        {
            "n": Fraction(claim.n),
            "part": Fraction(claim.part),
            "m": Fraction(claim.m),
            "chi": claim.chi,
            "chi_expected": claim.chi_expected,
            "H_dot_G": claim.h_dot_g,
            "H_dot_F": claim.h_dot_f,
            "L_dot_G": claim.l_dot_g,
        }
    )
    result.checks = tuple(_claim_to_result(claim))


_RUNNERS = {
    "chi": _run_chi,
    "check-free": _run_check_free,
    "check-separate": _run_check_separate,
    "check-tangent": _run_check_tangent,
    "check-very-ample": _run_check_very_ample,
    "check-corollary2": _run_check_corollary2,
    "plc-threshold": _run_plc_threshold,
    "search": _run_search,
    "hirzebruch-claim": _run_hirzebruch_claim,
}


def run_document(doc: Document, depth: int = 24, source: str = "<memory>") -> Report:
    """Execute the document's queries in order; per-query errors are embedded.

    ``depth`` is the default dyadic search depth; individual search queries
    may override it with a ``depth=`` argument.
    """
    bound = bind(doc)
    results = []
    for q in doc.queries:
        result = QueryResult(query=q.text(), status="error")
        start = time.perf_counter()
        try:
            if q.kind in ("search", "hirzebruch-claim"):
                _RUNNERS[q.kind](bound, q, result, depth)
            else:
                _RUNNERS[q.kind](bound, q, result)
        except (QueryError, ParseError, ValueError, KeyError) as exc:
            result.status = "error"
            result.error = str(exc)
        result.elapsed_ms = (time.perf_counter() - start) * 1000.0
        results.append(result)
    return Report(source, tuple(results))


# ---------------------------------------------------------------------------
# rendering


def _json_rational(q: Fraction) -> dict:
    out = {"num": q.numerator, "den": q.denominator}
    if q.denominator != 1:
        out["approx"] = float(q)
    return out


def _json_witness(w: Optional[BetaWitness]) -> Optional[dict]:
    if w is None:
        return None
    return {
        "beta2": [_json_rational(x) for x in w.beta2],
        "beta1": [_json_rational(x) for x in w.beta1],
        "beta2_roles": list(w.beta2_roles),
        "beta1_roles": list(w.beta1_roles),
    }


def _json_result(r: QueryResult) -> dict:
    out = {
        "query": r.query,
        "status": r.status,
        "elapsed_ms": round(r.elapsed_ms, 3),
    }
    if r.rule:
        out["rule"] = r.rule
    if r.trace:
        out["trace"] = [
            {
                "text": l.text,
                "lhs": _json_rational(l.lhs),
                "rel": l.rel,
                "rhs": _json_rational(l.rhs),
                "holds": l.holds,
            }
            for l in r.trace
        ]
    if r.witness is not None:
        out["witness"] = _json_witness(r.witness)
    if r.values:
        out["values"] = {k: _json_rational(v) for k, v in r.values.items()}
    if r.labels:
        out["labels"] = dict(r.labels)
    if r.flags:
        out["flags"] = dict(r.flags)
    if r.found is not None:
        out["found"] = r.found
    if r.params:
        out["params"] = {k: _json_rational(v) for k, v in r.params.items()}
    if r.attempts is not None:
        out["attempts"] = r.attempts
    if r.checks:
        out["checks"] = [_json_result(c) for c in r.checks]
    if r.notes:
        out["notes"] = list(r.notes)
    if r.error:
        out["error"] = r.error
    return out


def report_to_json(report: Report) -> dict:
    return {
        "version": __version__,
        "source": report.source,
        "queries": [_json_result(r) for r in report.results],
    }


def _fmt(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q} (approx {float(q):.6g})"


def _text_result(r: QueryResult, indent: str = "") -> list[str]:
    lines = [f"{indent}== {r.query}"]
    if r.error:
        lines.append(f"{indent}   error: {r.error}")
        return lines
    head = f"{indent}   status: {r.status}"
    if r.rule:
        head += f"   rule: {r.rule}"
    lines.append(head)
    if r.found is not None:
        shown = ", ".join(f"{k} = {_fmt(v)}" for k, v in r.params.items())
        lines.append(f"{indent}   search: found={r.found} attempts={r.attempts}" + (f" at {shown}" if shown else ""))
    for k, v in r.values.items():
        lines.append(f"{indent}   {k} = {_fmt(v)}")
    for k, v in r.labels.items():
        lines.append(f"{indent}   {k}: {v}")
    for k, v in r.flags.items():
        lines.append(f"{indent}   {k}: {'yes' if v else 'no'}")
    if r.witness is not None:
        w = r.witness
        b2 = ", ".join(f"{_fmt(x)} [{role}]" for x, role in zip(w.beta2, w.beta2_roles))
        b1 = ", ".join(f"{_fmt(x)} [{role}]" for x, role in zip(w.beta1, w.beta1_roles))
        lines.append(f"{indent}   witness: beta2 = {b2}; beta1 = {b1}")
    for l in r.trace:
        mark = "ok" if l.holds else "FAILS"
        lines.append(f"{indent}   {l.text}: {_fmt(l.lhs)} {l.rel} {_fmt(l.rhs)}  [{mark}]")
    for note in r.notes:
        lines.append(f"{indent}   note: {note}")
    for sub in r.checks:
        lines.extend(_text_result(sub, indent + "  "))
    return lines


def render_text(report: Report) -> str:
    lines = [f"report for {report.source}"]
    for r in report.results:
        lines.extend(_text_result(r))
    return "\n".join(lines) + "\n"
