"""Exact walk enumeration and the series side of the classification.

Counting is done in rational arithmetic.  The functional equation is
checked degree by degree in t, so a single verification covers every t
at once.  Truncated evaluations carry explicit tail bounds and are fed
into the continuation-relation residuals on the kernel curve.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .kernel import KernelContext
from .model import WeightTable, drift
from .uniformization import Uniformization, lambda_map
from .group import b2

__all__ = [
    "SeriesError",
    "NonConvergence",
    "NoSampleInDomain",
    "SeriesTruncation",
    "SeriesValue",
    "CriticalPoint",
    "walk_dp",
    "verify_functional_equation",
    "F1_trunc",
    "F2_trunc",
    "Q00",
    "continuation_residual",
    "critical_t",
]


class SeriesError(ValueError):
    pass


class NonConvergence(SeriesError):
    """Newton iteration for the critical point did not converge."""


class NoSampleInDomain(SeriesError):
    """No sample point admitted a series evaluation route."""


class SeriesTruncation:
    """Exact counts q(i, j, k) of quadrant walks from the origin,
    ending at (i, j) after k steps, for all k <= K."""

    __slots__ = ("K", "_layers")

    def __init__(self, K: int, layers):
        self.K = K
        self._layers = layers

    def q(self, i: int, j: int, k: int) -> Fraction:
        if k < 0 or k > self.K or i < 0 or j < 0 or i > k or j > k:
            return Fraction(0)
        return self._layers[k][i][j]

    def mass(self, k: int) -> Fraction:
        layer = self._layers[k]
        return sum(sum(row) for row in layer)

    def layer_dict(self, k: int):
        out = {}
        layer = self._layers[k]
        for i in range(k + 1):
            for j in range(k + 1):
                if layer[i][j]:
                    out[(i, j)] = layer[i][j]
        return out


def walk_dp(w: WeightTable, K: int) -> SeriesTruncation:
    """Exact dynamic program over the quadrant; walks leaving the
    quadrant are discarded, so layer masses may shrink below 1."""
    if K < 0:
        raise SeriesError("K must be >= 0")
    steps = [(i, j, w.weight(i, j)) for i in (-1, 0, 1) for j in (-1, 0, 1)
             if w.weight(i, j) != 0]
    zero = Fraction(0)
    layers = [[[zero] * (K + 1) for _ in range(K + 1)]]
    layers[0][0][0] = Fraction(1)
    for k in range(1, K + 1):
        prev = layers[-1]
        cur = [[zero] * (K + 1) for _ in range(K + 1)]
        for i in range(k + 1):
            row = cur[i]
            for j in range(k + 1):
                acc = zero
                for si, sj, wt in steps:
                    pi, pj = i - si, j - sj
                    if 0 <= pi <= k - 1 and 0 <= pj <= k - 1:
                        c = prev[pi][pj]
                        if c:
                            acc += wt * c
                row[j] = acc
        layers.append(cur)
    return SeriesTruncation(K, layers)


# ---------------------------------------------------------------------------
# Functional equation, degree by degree in t.
#
# Writing Q = sum_k t^k Q_k with Q_k a polynomial in x, y, the kernel
# equation splits into one exact polynomial identity per degree:
#   x*y*Q_k - P*Q_{k-1} = -A_{-1}(x) Q_{k-1}(x,0) - B_{-1}(y) Q_{k-1}(0,y)
#                          + d_{-1,-1} Q_{k-1}(0,0) + [k=0] x*y
# where P = x*y*S(x,y).  Verifying these through degree K-1 proves the
# functional equation for every t simultaneously.  The coefficient of
# t^K in K*Q mixes truncated and untruncated orders, so verification
# stops at K-1.

def _bivar_add(acc, other, scale=Fraction(1)):
    for key, c in other.items():
        v = acc.get(key, Fraction(0)) + scale * c
        if v:
            acc[key] = v
        else:
            acc.pop(key, None)
    return acc


def verify_functional_equation(w: WeightTable, t, K: int) -> int:
    """Check the kernel functional equation exactly through degree K-1
    in t; returns K-1.  A nonzero coefficient is an implementation bug
    and raises RuntimeError.

    The check is graded in t, so `t` only gets validated: the result
    holds for every t in (0,1) at once.
    """
    tq = Fraction(t)
    if not (0 < tq < 1):
        raise SeriesError(f"t must be in (0,1), got {t}")
    if K < 2:
        raise SeriesError("K must be >= 2")
    dp = walk_dp(w, K)
    pxy = {}
    for i in (-1, 0, 1):
        for j in (-1, 0, 1):
            c = w.weight(i, j)
            if c:
                pxy[(i + 1, j + 1)] = c
    arow = [w.weight(-1, -1), w.weight(0, -1), w.weight(1, -1)]
    bcol = [w.weight(-1, -1), w.weight(-1, 0), w.weight(-1, 1)]
    for k in range(K):
        qk = dp.layer_dict(k)
        qprev = dp.layer_dict(k - 1) if k else {}
        lhs = {}
        for (i, j), c in qk.items():
            lhs[(i + 1, j + 1)] = c
        for (pi, pj), pc in pxy.items():
            for (i, j), c in qprev.items():
                _bivar_add(lhs, {(i + pi, j + pj): c}, -pc)
        rhs = {}
        if k == 0:
            rhs[(1, 1)] = Fraction(1)
        else:
            corner = Fraction(0)
            for (i, j), c in qprev.items():
                if j == 0:
                    for s, a in enumerate(arow):
                        if a:
                            _bivar_add(rhs, {(i + s, 0): c}, -a)
                if i == 0:
                    for s, b in enumerate(bcol):
                        if b:
                            _bivar_add(rhs, {(0, j + s): c}, -b)
                if i == 0 and j == 0:
                    corner = c
            if corner and arow[0]:
                _bivar_add(rhs, {(0, 0): corner}, arow[0])
        diff = dict(lhs)
        _bivar_add(diff, rhs, Fraction(-1))
        if diff:
            key = next(iter(diff))
            raise RuntimeError(
                f"functional equation residual at t-degree {k}: "
                f"coefficient of x^{key[0]} y^{key[1]} is {diff[key]}"
            )
    return K - 1


# ---------------------------------------------------------------------------
# Truncated evaluations with tail bounds.

@dataclass(frozen=True)
class SeriesValue:
    """A truncated series evaluation: the partial sum, a bound on the
    discarded tail, and whether the evaluation point left the unit disk
    (where the a-priori bound degrades)."""
    value: complex
    tail_bound: float
    outside_disk: bool


def _tail(t: float, K: int, radius: float) -> float:
    r = t * max(1.0, radius)
    if r >= 1.0:
        return math.inf
    return r ** (K + 1) / (1.0 - r)


class _Evaluator:
    """Float views of the boundary series of one truncation, shared by
    the sample loops."""

    def __init__(self, ctx: KernelContext, dp: SeriesTruncation):
        self.ctx = ctx
        self.t = float(ctx.t)
        K = dp.K
        self.K = K
        self.xrows = [[float(dp.q(i, 0, k)) for i in range(k + 1)] for k in range(K + 1)]
        self.ycols = [[float(dp.q(0, j, k)) for j in range(k + 1)] for k in range(K + 1)]
        self.q00 = [float(dp.q(0, 0, k)) for k in range(K + 1)]
        self.a_low = ctx.a_tilde[-1]
        self.b_low = ctx.b_tilde[-1]

    def Qx0(self, x: complex) -> complex:
        acc = 0j
        for k in range(self.K, -1, -1):
            row = self.xrows[k]
            inner = 0j
            for c in reversed(row):
                inner = inner * x + c
            acc = acc * self.t + inner
        return acc

    def Q0y(self, y: complex) -> complex:
        acc = 0j
        for k in range(self.K, -1, -1):
            col = self.ycols[k]
            inner = 0j
            for c in reversed(col):
                inner = inner * y + c
            acc = acc * self.t + inner
        return acc

    def Q00(self) -> float:
        acc = 0.0
        for c in reversed(self.q00):
            acc = acc * self.t + c
        return acc

    def F1(self, x: complex) -> complex:
        return -self.t * complex(self.a_low.eval_complex(x)) * self.Qx0(x)

    def F2(self, y: complex) -> complex:
        return -self.t * complex(self.b_low.eval_complex(y)) * self.Q0y(y)

    def K00Q00(self) -> float:
        return -self.t * float(self.ctx.w.weight(-1, -1)) * self.Q00()

    def tail_estimate(self, which: str, r: float) -> float:
        """Estimated truncation tail of the x- or y-boundary series at
        radius r < 1, extrapolating the damped boundary masses m_k(r)
        geometrically beyond the last computed layer.  An estimate, not
        a bound; route admission in the residual test uses it."""
        rows = self.xrows if which == "x" else self.ycols
        K = self.K
        m_last = sum(c * r ** i for i, c in enumerate(rows[K]))
        m_prev = sum(c * r ** i for i, c in enumerate(rows[K - 1]))
        if m_last <= 0.0:
            return 0.0
        rho = m_last / m_prev if m_prev > 0.0 else 1.0
        q = self.t * min(rho, 1.0)
        if q >= 1.0:
            return math.inf
        return self.t ** K * m_last * q / (1.0 - q)

    def value_tail(self, which: str, r: float) -> float:
        """Tail estimate carried through to the F1 or F2 value: the
        boundary-series tail scaled by the section prefactor at r."""
        sec = self.a_low if which == "x" else self.b_low
        return self.t * abs(sec.eval_complex(r)) * self.tail_estimate(which, r)

    def corner_tail(self) -> float:
        """Tail estimate of the K(0,0)Q(0,0) term."""
        return self.t * float(self.ctx.w.weight(-1, -1)) * self.tail_estimate("x", 0.0)


def F1_trunc(ctx: KernelContext, x: complex, K: int,
             dp: Optional[SeriesTruncation] = None) -> SeriesValue:
    """Truncated F1(x;t) = K(x,0;t) Q(x,0;t) with a tail bound.

    The bound t^(K+1)/(1-t), scaled by the prefactor, uses that each
    layer of Q(x,0) has total mass at most 1; outside the unit disk it
    degrades to (t|x|)^(K+1)/(1-t|x|) and the flag is set.
    """
    if dp is None:
        dp = walk_dp(ctx.w, K)
    ev = _Evaluator(ctx, dp)
    pref = abs(ev.t * complex(ev.a_low.eval_complex(x)))
    r = abs(x)
    return SeriesValue(ev.F1(x), pref * _tail(ev.t, K, r), r > 1.0)


def F2_trunc(ctx: KernelContext, y: complex, K: int,
             dp: Optional[SeriesTruncation] = None) -> SeriesValue:
    if dp is None:
        dp = walk_dp(ctx.w, K)
    ev = _Evaluator(ctx, dp)
    pref = abs(ev.t * complex(ev.b_low.eval_complex(y)))
    r = abs(y)
    return SeriesValue(ev.F2(y), pref * _tail(ev.t, K, r), r > 1.0)


def Q00(ctx: KernelContext, K: int,
        dp: Optional[SeriesTruncation] = None) -> SeriesValue:
    if dp is None:
        dp = walk_dp(ctx.w, K)
    ev = _Evaluator(ctx, dp)
    return SeriesValue(complex(ev.Q00()), _tail(ev.t, K, 0.0), False)


# ---------------------------------------------------------------------------
# Continuation-relation residuals on the curve.

_IN = 1.0 - 1e-12


def continuation_residual(
    ctx: KernelContext,
    unif: Uniformization,
    samples: int = 16,
    K: int = 40,
    seed: int = 0,
    tail_tol: Optional[float] = None,
) -> float:
    """Max residual of the two curve relations over sampled omega.

    Relation A holds at every curve point with |x|<1 and |y|<1, by
    plugging the point into the convergent functional equation:
        F1(x(w)) + F2(y(w)) - K(0,0)Q(0,0) + x(w)y(w) = 0.

    Relation B is the one-step continuation of the sections:
        r_y(w+w3) - r_y(w) - b2(w) = 0,
    with r_y(w) = F2(y(w)) where |y(w)|<1, else
    -F1(x(w)) + K(0,0)Q(0,0) - x(w)y(w) where |x(w)|<1.

    The continued sections are w1-periodic but not w2-periodic, while
    the truncated series routes are built from x(w), y(w) alone, which
    are w2-periodic.  A route therefore represents the continued
    function only on the component of its modulus region attached to
    one designated copy of the domain band, tracked in unreduced
    coordinates: each route is certified by a horizontal walk to the
    anchor line through the first-cell domain band, staying inside the
    route's modulus region the whole way.  Samples whose walk fails are
    rejected rather than mis-evaluated.

    With tail_tol set, a sample is also admitted only where the
    estimated truncation tail of every series it evaluates stays below
    tail_tol, so the reported residual measures the relations and not
    the truncation order.

    Each relation must collect `samples` admissible points; failing
    that raises NoSampleInDomain.
    """
    dp = walk_dp(ctx.w, K)
    ev = _Evaluator(ctx, dp)
    k00q00 = ev.K00Q00()
    rng = random.Random(seed)
    om1, om2, om3 = unif.omega1, unif.omega2, unif.omega3
    step = om2 / 96.0

    def tails_ok(pairs, budget):
        if tail_tol is None:
            return True
        return sum(ev.value_tail(w_, r) for w_, r in pairs) + ev.corner_tail() <= budget

    def moduli(omega):
        xp, yp, _ = lambda_map(unif, omega)
        if xp.is_infinite or yp.is_infinite:
            return None
        return xp.as_affine(), yp.as_affine()

    anchor_re = _domain_anchor(unif, moduli)
    if anchor_re is None:
        raise NoSampleInDomain("no domain band found in the period cell")

    def certified(omega, coord):
        # Walk from omega to the anchor line at the same height, in
        # unreduced coordinates; the named coordinate must stay inside
        # the unit disk at every step and the endpoint must lie in the
        # domain.  No early stop: a domain copy in a neighboring cell
        # must not be mistaken for the anchor.
        dist = anchor_re - omega.real
        n = int(abs(dist) / step)
        if n > 200:
            return False
        sgn = 1.0 if dist >= 0 else -1.0
        pick = 0 if coord == "x" else 1
        for k in range(n + 1):
            c = moduli(omega + sgn * k * step)
            if c is None or abs(c[pick]) >= _IN:
                return False
        c = moduli(complex(anchor_re, omega.imag))
        return c is not None and abs(c[0]) < _IN and abs(c[1]) < _IN

    def r_y(omega):
        c = moduli(omega)
        if c is None:
            return None
        x, y = c
        half = math.inf if tail_tol is None else tail_tol / 2.0
        if abs(y) < _IN and tails_ok([("y", abs(y))], half) and certified(omega, "y"):
            return ev.F2(y)
        if abs(x) < _IN and tails_ok([("x", abs(x))], half) and certified(omega, "x"):
            return -ev.F1(x) + k00q00 - x * y
        return None

    worst = 0.0
    got_a = 0
    got_b = 0
    tries = 0
    max_tries = 400 * samples
    while (got_a < samples or got_b < samples) and tries < max_tries:
        tries += 1
        omega = rng.uniform(0.0, 1.0) * om2 + rng.uniform(0.02, 0.98) * om1
        c = moduli(omega)
        if c is None:
            continue
        x, y = c
        if (got_a < samples and abs(x) < _IN and abs(y) < _IN
                and tails_ok([("x", abs(x)), ("y", abs(y))],
                             math.inf if tail_tol is None else tail_tol)):
            res = abs(ev.F1(x) + ev.F2(y) - k00q00 + x * y)
            worst = max(worst, res)
            got_a += 1
        if got_b < samples:
            lhs = r_y(omega + om3)
            rhs = r_y(omega)
            bval = b2(unif, omega)
            if lhs is not None and rhs is not None and bval is not None:
                worst = max(worst, abs(lhs - rhs - bval))
                got_b += 1
    if got_a < samples or got_b < samples:
        raise NoSampleInDomain(
            f"found {got_a} domain and {got_b} continuation samples "
            f"of {samples} requested after {tries} tries"
        )
    return worst


def _domain_anchor(unif, moduli, n=192):
    """Real part of a vertical line through the first-cell domain band,
    taken as the midpoint of the longest run of both-inside points on a
    horizontal scan line."""
    om1, om2 = unif.omega1, unif.omega2
    for v in (0.37, 0.25, 0.61, 0.13, 0.49, 0.73, 0.85):
        flags = []
        for i in range(n):
            c = moduli((i + 0.5) / n * om2 + v * om1)
            flags.append(c is not None and abs(c[0]) < _IN and abs(c[1]) < _IN)
        best_len, best_mid, run = 0, None, 0
        for i, f in enumerate(flags + [False]):
            if f:
                run += 1
            else:
                if run > best_len:
                    best_len, best_mid = run, (i - run / 2.0) / n
                run = 0
        if best_len >= 6:
            return best_mid * om2
    return None


# ---------------------------------------------------------------------------
# Critical point of the jump polynomial on the positive quadrant.

@dataclass(frozen=True)
class CriticalPoint:
    x0: float
    y0: float
    t0: float


def critical_t(w: WeightTable) -> CriticalPoint:
    """Unique positive critical point of S and t0 = 1/S(x0,y0) >= 1.

    S is a posynomial, hence strictly convex in logarithmic coordinates
    on the support relevant here; Newton with backtracking converges
    quadratically.  Zero drift short-circuits to (1,1,1) exactly.
    """
    if drift(w) == (0, 0):
        return CriticalPoint(1.0, 1.0, 1.0)
    terms = [(i, j, float(w.weight(i, j))) for i in (-1, 0, 1) for j in (-1, 0, 1)
             if w.weight(i, j) != 0]

    def value_grad_hess(u: float, v: float):
        s = gu = gv = huu = huv = hvv = 0.0
        for i, j, c in terms:
            e = c * math.exp(i * u + j * v)
            s += e
            gu += i * e
            gv += j * e
            huu += i * i * e
            huv += i * j * e
            hvv += j * j * e
        return s, gu, gv, huu, huv, hvv

    u = v = 0.0
    s, gu, gv, huu, huv, hvv = value_grad_hess(u, v)
    for _ in range(100):
        gnorm = math.hypot(gu, gv)
        if gnorm < 1e-14 * max(1.0, s):
            x0, y0 = math.exp(u), math.exp(v)
            return CriticalPoint(x0, y0, 1.0 / s)
        det = huu * hvv - huv * huv
        if det <= 0:
            du, dv = -gu, -gv  # fall back to gradient descent direction
        else:
            du = -(hvv * gu - huv * gv) / det
            dv = -(huu * gv - huv * gu) / det
        step = 1.0
        while step > 1e-18:
            s2, gu2, gv2, huu2, huv2, hvv2 = value_grad_hess(u + step * du, v + step * dv)
            if s2 < s:
                u, v = u + step * du, v + step * dv
                s, gu, gv, huu, huv, hvv = s2, gu2, gv2, huu2, huv2, hvv2
                break
            step *= 0.5
        else:
            break
    gnorm = math.hypot(gu, gv)
    if gnorm < 1e-10 * max(1.0, s):
        return CriticalPoint(math.exp(u), math.exp(v), 1.0 / s)
    raise NonConvergence(
        f"critical point iteration stalled with |grad| = {gnorm:.3e}"
    )
