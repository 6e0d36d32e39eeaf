"""End-to-end decision pipeline.

Takes a weight table and a time value, runs the combinatorial screens,
the exact group computation, and the analytic machinery on the kernel
curve, and produces a verdict with enough recorded evidence to re-check
every step independently.
"""
from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Tuple

from .model import PatternClass, PatternKind, WeightTable, pattern_class
from .kernel import GenusTag, KernelContext, KernelError, genus
from .curve import CurveError, unit_circle_paths
from .uniformization import (
    UniformizationError,
    tau_order_on_curve,
    uniformize,
)
from .group import (
    GroupError,
    GroupReport,
    OrbitSumVerdict,
    fixed_point_rationality,
    group_report,
    orbit_sum_on_curve,
)

__all__ = [
    "Verdict",
    "Evidence",
    "ClassificationReport",
    "classify",
    "emit_report",
    "emit_csv",
    "is_rational_square",
]


class Verdict(Enum):
    DEGENERATE = "DegenerateModel"
    GENUS_ZERO = "GenusZeroOutOfScope"
    ALGEBRAIC = "Algebraic"
    HOLONOMIC_NOT_ALGEBRAIC = "HolonomicNotAlgebraic"
    DIFFERENTIALLY_TRANSCENDENTAL = "DifferentiallyTranscendental"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Evidence:
    """One checkable statement behind the verdict."""

    claim: str
    detail: str
    value: str = ""

    def to_json_dict(self):
        return {"claim": self.claim, "detail": self.detail, "value": self.value}


@dataclass(frozen=True)
class ClassificationReport:
    model: WeightTable
    t: Fraction
    pattern: PatternClass
    genus: GenusTag
    verdict: Verdict
    dt_criterion: Optional[int]
    group: Optional[GroupReport]
    uniform: Optional[dict]
    evidence: Tuple[Evidence, ...]

    def verdict_label(self) -> str:
        if self.verdict is Verdict.DIFFERENTIALLY_TRANSCENDENTAL:
            return "%s(%d)" % (self.verdict.value, self.dt_criterion)
        return self.verdict.value

    def to_json_dict(self):
        return {
            "model": self.model.to_json_dict(),
            "t": str(self.t),
            "pattern": self.pattern.describe(),
            "genus": self.genus.value,
            "verdict": self.verdict.value,
            "dt_criterion": self.dt_criterion,
            "group": self.group.to_json_dict() if self.group else None,
            "uniformization": self.uniform,
            "evidence": [e.to_json_dict() for e in self.evidence],
        }


def is_rational_square(q: Fraction) -> bool:
    """Exact: q is the square of a rational."""
    if q < 0:
        return False
    n, d = q.numerator, q.denominator
    return math.isqrt(n) ** 2 == n and math.isqrt(d) ** 2 == d


def _square_witnesses(w: WeightTable):
    """The two leading discriminant values whose non-squareness forces
    differential transcendence, as (label, value, is_square)."""
    q1 = w.weight(1, 0) ** 2 - 4 * w.weight(1, -1) * w.weight(1, 1)
    q2 = w.weight(0, 1) ** 2 - 4 * w.weight(-1, 1) * w.weight(1, 1)
    return (
        ("d[1,0]^2 - 4*d[1,-1]*d[1,1]", q1, is_rational_square(q1)),
        ("d[0,1]^2 - 4*d[-1,1]*d[1,1]", q2, is_rational_square(q2)),
    )


def classify(
    w: WeightTable,
    t,
    cap: int = 24,
    tol: float = 1e-7,
    seed: int = 0,
    samples: int = 32,
) -> ClassificationReport:
    """Full pipeline; never raises, failures become report evidence.

    Order of decisions: degenerate pattern, genus, then on the elliptic
    curve the translation order of the composed involutions.  A finite
    order sends the verdict to the orbit-sum dichotomy (zero: algebraic;
    nonzero: holonomic but transcendental as an algebraic function).
    Without a finite order within the cap, the three transcendence
    criteria are tried in turn; each is asserted only under its exact
    hypotheses, for transcendental t.  Anything left over is reported
    as Inconclusive, never guessed.
    """
    t = Fraction(t)
    ev = []
    pattern = pattern_class(w)
    g = genus(w)

    if pattern.kind is PatternKind.DEGENERATE:
        ev.append(Evidence(
            "step pattern is degenerate",
            pattern.describe(),
        ))
        ev.append(Evidence(
            "walks reduce to a half-plane or one-dimensional model",
            "counting series of such models are classically algebraic",
        ))
        return ClassificationReport(w, t, pattern, g, Verdict.DEGENERATE,
                                    None, None, None, tuple(ev))

    if g is GenusTag.GENUS_ZERO:
        ev.append(Evidence(
            "kernel curve has genus zero",
            pattern.describe(),
        ))
        ev.append(Evidence(
            "elliptic machinery does not apply",
            "genus-zero models are out of scope for this classifier",
        ))
        return ClassificationReport(w, t, pattern, g, Verdict.GENUS_ZERO,
                                    None, None, None, tuple(ev))

    try:
        grp = group_report(w, cap=cap, seed=seed)
    except GroupError as exc:
        ev.append(Evidence("group computation failed", str(exc)))
        return ClassificationReport(w, t, pattern, g, Verdict.INCONCLUSIVE,
                                    None, None, None, tuple(ev))
    ev.append(Evidence(
        "group order over the product of projective lines",
        "exact orbit closure of random rational probes",
        str(grp.order_p1p1) if grp.order_p1p1 else "no closure within cap %d" % cap,
    ))

    try:
        ctx = KernelContext(w, t)
        unif = uniformize(ctx)
        uni_summary = unif.summary()
    except (KernelError, CurveError, UniformizationError, ValueError) as exc:
        ev.append(Evidence("uniformization failed", str(exc)))
        return ClassificationReport(w, t, pattern, g, Verdict.INCONCLUSIVE,
                                    None, grp, None, tuple(ev))

    order = tau_order_on_curve(unif, cap=cap)
    if order is not None:
        ell, k = order
        ev.append(Evidence(
            "translation ratio on the curve is rational",
            "omega3/omega2 matched within the cap and confirmed pointwise",
            "%d/%d" % (k, ell),
        ))
        ev.append(Evidence(
            "group order on the curve",
            "dihedral group generated by the two involutions",
            str(2 * ell),
        ))
        try:
            max_abs, is_zero = orbit_sum_on_curve(
                unif, ell, samples=samples, tol=tol, seed=seed)
        except GroupError as exc:
            ev.append(Evidence("orbit sum on the curve failed", str(exc)))
            return ClassificationReport(w, t, pattern, g, Verdict.INCONCLUSIVE,
                                        None, grp, uni_summary, tuple(ev))
        ev.append(Evidence(
            "orbit sum of x*y on the curve",
            "max |alternating sum| over %d sampled points, tolerance %g"
            % (samples, tol),
            "%.6e" % max_abs,
        ))
        formal = grp.orbit_sum.verdict
        if formal is not OrbitSumVerdict.UNDEFINED:
            ev.append(Evidence(
                "orbit sum in the function field",
                "exact alternating sum over the finite group",
                formal.value,
            ))
            if (formal is OrbitSumVerdict.ZERO) != is_zero:
                ev.append(Evidence(
                    "orbit-sum routes disagree",
                    "exact function-field sum contradicts the on-curve "
                    "evaluation; refusing to pick a side",
                ))
                return ClassificationReport(
                    w, t, pattern, g, Verdict.INCONCLUSIVE,
                    None, grp, uni_summary, tuple(ev))
        if grp.order_p1p1 is None:
            ev.append(Evidence(
                "verdict is specific to this t",
                "the group closes on the curve but not over the product "
                "of projective lines",
                str(t),
            ))
        verdict = Verdict.ALGEBRAIC if is_zero else Verdict.HOLONOMIC_NOT_ALGEBRAIC
        return ClassificationReport(w, t, pattern, g, verdict,
                                    None, grp, uni_summary, tuple(ev))

    ev.append(Evidence(
        "no finite translation order on the curve",
        "orders up to %d tested against the period ratio" % cap,
    ))

    # Criterion 1: a leading discriminant value that is not a rational
    # square.  Exact arithmetic, no group input needed.
    for label, value, square in _square_witnesses(w):
        if not square:
            ev.append(Evidence(
                "leading discriminant value is not a rational square",
                label,
                str(value),
            ))
            ev.append(_transcendental_t_note(t))
            return ClassificationReport(w, t, pattern, g,
                                        Verdict.DIFFERENTIALLY_TRANSCENDENTAL,
                                        1, grp, uni_summary, tuple(ev))

    # Criterion 2: double poles of the continuation increments, ruled
    # alone in their orbit when no involution fixed point is rational.
    if (w.weight(1, 1) == 0 and w.weight(1, 0) != 0 and w.weight(0, 1) != 0):
        try:
            fixed_rational = fixed_point_rationality(w)
        except GroupError as exc:
            ev.append(Evidence(
                "fixed-point rationality search failed", str(exc)))
            fixed_rational = None
        if fixed_rational is False:
            ev.append(Evidence(
                "no involution fixed point is rational over Q(t)",
                "both discriminant quartics have empty root sets in Q(t)",
            ))
            ev.append(_transcendental_t_note(t))
            return ClassificationReport(w, t, pattern, g,
                                        Verdict.DIFFERENTIALLY_TRANSCENDENTAL,
                                        2, grp, uni_summary, tuple(ev))
        if fixed_rational:
            ev.append(Evidence(
                "an involution fixed point is rational over Q(t)",
                "double-pole criterion does not apply",
            ))

    # Criterion 3: the triple-pole configurations, read off the weights.
    if w.weight(1, 1) == 0 and (
            (w.weight(1, 0) == 0 and w.weight(0, 1) != 0)
            or (w.weight(0, 1) == 0 and w.weight(1, 0) != 0)):
        which = ("d[1,1] = d[1,0] = 0 with d[0,1] > 0"
                 if w.weight(1, 0) == 0
                 else "d[1,1] = d[0,1] = 0 with d[1,0] > 0")
        ev.append(Evidence(
            "triple-pole weight configuration",
            which,
        ))
        ev.append(_transcendental_t_note(t))
        return ClassificationReport(w, t, pattern, g,
                                    Verdict.DIFFERENTIALLY_TRANSCENDENTAL,
                                    3, grp, uni_summary, tuple(ev))

    ev.append(Evidence(
        "no transcendence criterion applies",
        "square tests passed, and neither pole configuration matched",
    ))
    return ClassificationReport(w, t, pattern, g, Verdict.INCONCLUSIVE,
                                None, grp, uni_summary, tuple(ev))


def _transcendental_t_note(t) -> Evidence:
    return Evidence(
        "transcendence asserted for transcendental t",
        "the analytic pipeline evaluated at a rational t",
        str(t),
    )


# ---------------------------------------------------------------------------
# Report output.

def emit_report(report: ClassificationReport, format: str = "json") -> bytes:
    """Deterministic serialization: same report, same bytes."""
    if format == "json":
        return (json.dumps(report.to_json_dict(), indent=2) + "\n").encode()
    if format != "text":
        raise ValueError("unknown format %r" % format)
    lines = []
    nz = ", ".join("d[%d,%d]=%s" % (i, j, v)
                   for (i, j), v in report.model.items() if v)
    lines.append("model:    %s" % nz)
    lines.append("t:        %s" % report.t)
    lines.append("pattern:  %s" % report.pattern.describe())
    lines.append("genus:    %s" % report.genus.value)
    if report.group is not None:
        order = report.group.order_p1p1
        lines.append("group:    %s" % (order if order else "no finite order found"))
        lines.append("  iota1:  %s" % report.group.iota1_display)
        lines.append("  iota2:  %s" % report.group.iota2_display)
        lines.append("  orbit sum: %s" % report.group.orbit_sum.verdict.value)
    if report.uniform is not None:
        u = report.uniform
        lines.append("curve:    g2=%.12g g3=%.12g" % (u["g2"], u["g3"]))
        lines.append("periods:  omega1=%.12gj omega2=%.12g omega3=%.12g"
                     % (u["omega1_imag"], u["omega2"], u["omega3"]))
    lines.append("verdict:  %s" % report.verdict_label())
    lines.append("evidence:")
    for e in report.evidence:
        tail = " = %s" % e.value if e.value else ""
        detail = " (%s)" % e.detail if e.detail else ""
        lines.append("  - %s%s%s" % (e.claim, detail, tail))
    return ("\n".join(lines) + "\n").encode()


def emit_csv(ctx: KernelContext, directory: str, n: int = 256):
    """Write the four unit-circle path traces as CSV files and return
    their paths: both y-branches over |x|=1 and, via the transposed
    model, both x-branches over |y|=1."""
    os.makedirs(directory, exist_ok=True)
    w_t = WeightTable({(j, i): v for (i, j), v in ctx.w.items()})
    out = []
    for tag, circle_ctx in (("x_circle", ctx),
                            ("y_circle", KernelContext(w_t, ctx.t))):
        paths = unit_circle_paths(circle_ctx, n=n)
        root = "y" if tag == "x_circle" else "x"
        for branch, pts in (("minus", paths.y_minus), ("plus", paths.y_plus)):
            fname = os.path.join(directory, "%s_%s_%s.csv" % (tag, root, branch))
            with open(fname, "w", newline="") as fh:
                wr = csv.writer(fh)
                wr.writerow(["re_circle", "im_circle",
                             "re_%s" % root, "im_%s" % root])
                for x, p in zip(paths.xs, pts):
                    if p.is_infinite:
                        wr.writerow(["%.17g" % x.real, "%.17g" % x.imag,
                                     "inf", "inf"])
                    else:
                        z = p.as_affine()
                        wr.writerow(["%.17g" % x.real, "%.17g" % x.imag,
                                     "%.17g" % z.real, "%.17g" % z.imag])
            out.append(fname)
    return out
