"""Elliptic parametrization of a nonsingular kernel curve.

For a nonsingular table and t in (0,1) the curve K(x,y;t)=0 has genus
one and is parametrized by Weierstrass functions for the invariants

    g2 = D''(a4)^2/3 - 2 D'(a4) D'''(a4)/3
    g3 = -D''(a4)^3/27 + D'(a4) D''(a4) D'''(a4)/9 - D'(a4)^2 D''''(a4)/6

when the branch point a4 is finite (D'(a4) > 0 in both sign cases), and

    g2 = (4/3) alpha2^2 - 4 alpha1 alpha3
    g3 = -(8/27) alpha2^3 + (4/3) alpha1 alpha2 alpha3 - 4 alpha0 alpha3^2

when a4 = [1:0] (the quartic D drops to degree 3). The parametrizing map
on the fundamental cell spanned by a real period omega2 and a purely
imaginary period omega1 is

    x(w) = a4 + D'(a4) / (p(w) - D''(a4)/6)      (finite a4)
    x(w) = (p(w) - alpha2/3) / alpha3            (a4 = [1:0])

with p the Weierstrass function for (g2, g3), and the y coordinate is
the same expression built from E at b4 with argument w - omega3/2. The
conformal shift omega3 in (0, omega2) is fixed by the second fiber
involution: at y = b4 the kernel fiber in x has the double root

    X(b4) = (b4 - t*Bt[0](b4)) / (2 t Bt[1](b4))

which lies on the real arc between a4 and a1, and

    omega3 = 2 * wp_inverse(u(X(b4)))

where u is the decreasing Moebius change mapping that arc onto
[e1, +infinity).

Periods are computed from the real cubic roots e1 > e2 > e3 of
4u^3 - g2 u - g3 by arithmetic-geometric means; direct quadrature of
dx/sqrt(+-D(x)) along the branch cuts is kept as an independent check.
The Weierstrass function itself is evaluated through Jacobi theta
quotients at the nome of the rectangular lattice, which stay accurate
to a few ulps across the whole cell; a Laurent-plus-duplication
evaluation is kept as a second, independent route for cross-checks.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .curve import BranchPoints, CurveError, branch_points, discriminants
from .kernel import ProjPoint, as_projpoint


class UniformizationError(ValueError):
    pass


class PoleAtLattice(UniformizationError):
    """The requested argument is a lattice point of the parametrization."""


class OutOfBranch(UniformizationError):
    """wp_inverse argument below e1, outside the principal real branch."""


@dataclass(frozen=True)
class A4Finite:
    a4: float
    Dp_a4: float
    Dpp_a4: float


@dataclass(frozen=True)
class A4Infinite:
    alpha2: float
    alpha3: float


def _poly_derivs_at(coeffs, x):
    """Value and first four derivatives of a quartic at x (floats)."""
    c = [float(v) for v in coeffs]
    d0 = (((c[4] * x + c[3]) * x + c[2]) * x + c[1]) * x + c[0]
    d1 = ((4 * c[4] * x + 3 * c[3]) * x + 2 * c[2]) * x + c[1]
    d2 = (12 * c[4] * x + 6 * c[3]) * x + 2 * c[2]
    d3 = 24 * c[4] * x + 6 * c[3]
    d4 = 24 * c[4]
    return d0, d1, d2, d3, d4


def invariants(ctx, bp, disc=None):
    """(g2, g3, case) of the x-projection discriminant at the context t."""
    disc = disc if disc is not None else discriminants(ctx.w)
    alphas = disc.alpha_at(ctx.t)
    if alphas[4] == 0:
        a1_, a2_, a3_ = (Fraction(a) for a in alphas[1:4])
        g2 = Fraction(4, 3) * a2_ * a2_ - 4 * a1_ * a3_
        g3 = (
            Fraction(-8, 27) * a2_ ** 3
            + Fraction(4, 3) * a1_ * a2_ * a3_
            - 4 * Fraction(alphas[0]) * a3_ * a3_
        )
        case = A4Infinite(alpha2=float(alphas[2]), alpha3=float(alphas[3]))
        return float(g2), float(g3), case
    a4 = bp.a[3]
    if not math.isfinite(a4):
        raise UniformizationError("branch data inconsistent: finite lead, infinite a4")
    _, dp, dpp, dppp, dpppp = _poly_derivs_at(alphas, a4)
    if dp <= 0:
        raise UniformizationError("D'(a4) = %g is not positive" % dp)
    g2 = dpp * dpp / 3.0 - 2.0 * dp * dppp / 3.0
    g3 = -(dpp ** 3) / 27.0 + dp * dpp * dppp / 9.0 - dp * dp * dpppp / 6.0
    return g2, g3, A4Finite(a4=a4, Dp_a4=dp, Dpp_a4=dpp)


def _cubic_real_roots(g2, g3):
    """Roots e1 > e2 > e3 of 4u^3 - g2 u - g3, all real and distinct."""
    scale = max(1.0, abs(g2) ** 0.5, abs(g3) ** (1.0 / 3.0))
    raw = np.roots([4.0, 0.0, -g2, -g3])
    es = []
    for z in raw:
        if abs(z.imag) > 1e-7 * scale:
            raise UniformizationError("cubic roots not all real: %s" % z)
        e = z.real
        for _ in range(3):
            f = 4 * e ** 3 - g2 * e - g3
            fp = 12 * e ** 2 - g2
            if fp == 0:
                break
            e -= f / fp
        es.append(e)
    es.sort(reverse=True)
    if es[0] - es[1] < 1e-10 * scale ** 2 or es[1] - es[2] < 1e-10 * scale ** 2:
        raise UniformizationError("cubic roots nearly collide: %r" % (es,))
    return tuple(es)


def _agm(a, b):
    for _ in range(64):
        if abs(a - b) <= 1e-16 * abs(a):
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def periods(g2, g3):
    """(omega1, omega2): purely imaginary and real lattice generators."""
    e1, e2, e3 = _cubic_real_roots(g2, g3)
    omega2 = math.pi / _agm(math.sqrt(e1 - e3), math.sqrt(e1 - e2))
    omega1 = complex(0.0, math.pi / _agm(math.sqrt(e1 - e3), math.sqrt(e2 - e3)))
    return omega1, omega2


@dataclass
class Uniformization:
    ctx: object
    disc: object
    bp: BranchPoints
    case: object
    alphas: tuple
    betas: tuple
    g2: float
    g3: float
    e1: float
    e2: float
    e3: float
    omega1: complex
    omega2: float
    omega3: float
    # y-map data: finite b4 with E derivatives, or the cubic fallback
    b4_finite: bool
    b4: float
    Ep_b4: float
    Epp_b4: float
    beta2: float
    beta3: float
    _laurent: tuple = ()
    _theta: tuple = ()

    def ratio(self):
        return self.omega3 / self.omega2

    def summary(self):
        return {
            "case": "a4_finite" if isinstance(self.case, A4Finite) else "a4_infinite",
            "g2": self.g2,
            "g3": self.g3,
            "e": [self.e1, self.e2, self.e3],
            "omega1_imag": self.omega1.imag,
            "omega2": self.omega2,
            "omega3": self.omega3,
            "period_ratio": self.ratio(),
            "branch_points_x": [_inf_str(v) for v in self.bp.a],
            "branch_points_y": [_inf_str(v) for v in self.bp.b],
        }


def _inf_str(v):
    return "inf" if (isinstance(v, float) and math.isinf(v)) else v


_LAURENT_TERMS = 22


def _laurent_coeffs(g2, g3):
    c = [0.0] * (_LAURENT_TERMS + 1)
    c[2] = g2 / 20.0
    c[3] = g3 / 28.0
    for k in range(4, _LAURENT_TERMS + 1):
        s = sum(c[m] * c[k - m] for m in range(2, k - 1))
        c[k] = 3.0 * s / ((2 * k + 1) * (k - 3))
    return tuple(c)


def _wp_series(coeffs, z):
    z2 = z * z
    p = 1.0 / z2
    dp = -2.0 / (z2 * z)
    zpow = 1.0 + 0j
    for k in range(2, _LAURENT_TERMS + 1):
        zpow *= z2  # z^(2k-2)
        c = coeffs[k]
        p += c * zpow
        dp += (2 * k - 2) * c * zpow / z
    return p, dp


def _reduce_to_cell(omega, omega1, omega2):
    im1 = omega1.imag
    n2 = round(omega.real / omega2)
    n1 = round(omega.imag / im1)
    return complex(omega.real - n2 * omega2, omega.imag - n1 * im1)


def _wp_pair_dup(unif, omega):
    """(p, p') by Laurent series plus duplication; cross-check route.

    Kept as an independent second algorithm: it agrees with the theta
    evaluation to roughly 1e-10 on healthy lattices but loses accuracy
    near half periods when e1 and e2 almost collide, so the theta route
    below is the one production code uses.
    """
    omega = complex(omega)
    z = _reduce_to_cell(omega, unif.omega1, unif.omega2)
    rmin = min(unif.omega2, unif.omega1.imag)
    if abs(z) < 1e-12 * rmin:
        raise PoleAtLattice("argument %r is a lattice point" % (omega,))
    if not unif._laurent:
        unif._laurent = _laurent_coeffs(unif.g2, unif.g3)
    m = 0
    az = abs(z)
    while az / (2 ** m) > 0.3 * rmin:
        m += 1
    p, dp = _wp_series(unif._laurent, z / (2 ** m))
    g2 = unif.g2
    for _ in range(m):
        if abs(dp) == 0.0:
            raise PoleAtLattice("duplication hit a half period exactly")
        psi = 6.0 * p * p - 0.5 * g2
        half = psi / (2.0 * dp)
        p, dp = (
            -2.0 * p + half * half,
            -dp + 3.0 * psi * p / dp - psi ** 3 / (4.0 * dp ** 3),
        )
    return p, dp


def _theta_consts(unif):
    """Nome and theta null values for the rectangular lattice.

    Validated against the modulus: (e2-e3)/(e1-e3) must equal
    (theta2/theta3)^4 at w = 0, which ties the AGM periods and the nome
    together and catches any convention slip.
    """
    q = math.exp(-math.pi * unif.omega1.imag / unif.omega2)
    th3 = 1.0
    th4 = 1.0
    for n in range(1, 64):
        qn = q ** (n * n)
        th3 += 2.0 * qn
        th4 += 2.0 * qn * (1 if n % 2 == 0 else -1)
        if qn < 1e-18:
            break
    th2 = 0.0
    for n in range(0, 64):
        term = q ** ((n + 0.5) ** 2)
        th2 += 2.0 * term
        if term < 1e-18:
            break
    s = math.sqrt(unif.e1 - unif.e3)
    m_ratio = (unif.e2 - unif.e3) / (unif.e1 - unif.e3)
    m_theta = (th2 / th3) ** 4
    if abs(m_ratio - m_theta) > 1e-8 * max(1.0, abs(m_ratio)):
        raise UniformizationError(
            "theta constants disagree with the modulus: %g vs %g"
            % (m_ratio, m_theta))
    return q, th2, th3, th4, s


def _wp_pair(unif, omega):
    """(p(omega), p'(omega)) for the lattice generated by omega1, omega2.

    Jacobi theta quotients at nome q = exp(-pi Im(omega1) / omega2):
    p = e3 + C1 (theta4(w)/theta1(w))^2 with w = pi z / omega2, and
    p' = -C2 theta2 theta3 theta4 / theta1^3.  The series decay like
    q^(n^2), so a handful of terms give full precision and the only
    division is by theta1, whose zeros are exactly the lattice points.
    """
    omega = complex(omega)
    z = _reduce_to_cell(omega, unif.omega1, unif.omega2)
    rmin = min(unif.omega2, unif.omega1.imag)
    if abs(z) < 1e-12 * rmin:
        raise PoleAtLattice("argument %r is a lattice point" % (omega,))
    if not unif._theta:
        unif._theta = _theta_consts(unif)
    q, th20, th30, th40, s = unif._theta
    w = math.pi * z / unif.omega2
    t1 = 0j
    t2 = 0j
    t3 = 1.0 + 0j
    t4 = 1.0 + 0j
    small = 0
    for n in range(64):
        qh = q ** ((n + 0.5) ** 2)
        t1 += 2.0 * qh * (-1) ** n * cmath.sin((2 * n + 1) * w)
        t2 += 2.0 * qh * cmath.cos((2 * n + 1) * w)
        if n >= 1:
            qn = q ** (n * n)
            c2 = cmath.cos(2 * n * w)
            t3 += 2.0 * qn * c2
            t4 += 2.0 * qn * (-1) ** n * c2
            if qh + qn < 1e-17 * (abs(t1) + abs(t3) + 1.0):
                small += 1
                if small >= 2:
                    break
    else:
        raise UniformizationError(
            "theta series for p did not converge; the period ratio "
            "%g is too extreme" % (unif.omega1.imag / unif.omega2))
    c1 = (s * th20 / th30) ** 2
    c2 = 2.0 * s ** 3 * (th20 * th40 / (th30 * th30)) ** 2
    r = t4 / t1
    p = unif.e3 + c1 * r * r
    dp = -c2 * t2 * t3 * t4 / (t1 * t1 * t1)
    return p, dp


def wp(unif, omega):
    return _wp_pair(unif, omega)[0]


def wp_prime(unif, omega):
    return _wp_pair(unif, omega)[1]


_GL_CACHE = {}


def _gl_nodes(n):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def _gl_adaptive(f, a, b, rel=1e-11, nmax=2048):
    if not b > a:
        return 0.0
    prev = None
    n = 48
    while True:
        xs, ws = _gl_nodes(n)
        pts = 0.5 * (b - a) * xs + 0.5 * (a + b)
        val = 0.5 * (b - a) * float(np.sum(ws * f(pts)))
        if prev is not None and abs(val - prev) <= rel * max(1.0, abs(val)):
            return val
        if n >= nmax:
            return val
        prev = val
        n *= 2


def wp_inverse(unif, u, tol=1e-8):
    """The unique w in (0, omega2/2] with p(w) = u, for real u >= e1.

    Computed by quadrature of the real branch integral
    int_u^inf ds / sqrt(4 s^3 - g2 s - g3), with a bisection fallback
    validated by a p(w) round trip. math.inf maps to 0.
    """
    if isinstance(u, complex):
        if abs(u.imag) > 1e-9 * (1.0 + abs(u.real)):
            raise OutOfBranch("wp_inverse needs a real argument, got %r" % (u,))
        u = u.real
    if math.isinf(u) and u > 0:
        return 0.0
    e1 = unif.e1
    scale = 1.0 + abs(e1)
    if u < e1 - 1e-9 * scale:
        raise OutOfBranch("u = %r below e1 = %r" % (u, e1))
    u = max(u, e1)
    g2, g3 = unif.g2, unif.g3

    U = 2.0 * (abs(u) + abs(unif.e3) + 1.0)

    def head(v):
        s = u + v * v
        return 2.0 * v / np.sqrt(4.0 * s ** 3 - g2 * s - g3)

    def tail(wv):
        return 2.0 / np.sqrt(4.0 - g2 * wv ** 4 - g3 * wv ** 6)

    w = _gl_adaptive(head, 0.0, math.sqrt(U - u)) + _gl_adaptive(
        tail, 0.0, 1.0 / math.sqrt(U)
    )

    # round-trip validation; fall back to bisection on the decreasing branch
    ok = False
    if 0.0 < w <= 0.5 * unif.omega2 * (1.0 + 1e-12):
        w = min(w, 0.5 * unif.omega2)
        try:
            pv = wp(unif, complex(w, 0.0))
            ok = abs(pv - u) <= max(tol, 1e-7 * (1.0 + abs(u)))
        except PoleAtLattice:
            ok = False
    if not ok:
        lo, hi = 1e-9 * unif.omega2, 0.5 * unif.omega2
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if wp(unif, complex(mid, 0.0)).real > u:
                lo = mid
            else:
                hi = mid
        w = 0.5 * (lo + hi)

    # Newton polish; a step is kept only if it reduces the round-trip
    # residual, so the quadrature value survives where p' degenerates
    # (u near e1 makes the root quadratic and caps the gain at ~1e-8)
    best, cur = w, w
    try:
        r_best = abs(wp(unif, complex(best, 0.0)) - u)
    except PoleAtLattice:
        return w
    for _ in range(3):
        try:
            p, dp = _wp_pair(unif, complex(cur, 0.0))
        except PoleAtLattice:
            break
        if abs(dp) <= 1e-30:
            break
        nxt = cur - ((p - u) / dp).real
        if not 0.0 < nxt <= 0.5 * unif.omega2:
            break
        try:
            r = abs(wp(unif, complex(nxt, 0.0)) - u)
        except PoleAtLattice:
            break
        if r < r_best:
            best, r_best = nxt, r
        cur = nxt
    return best


def u_of_x(unif, x):
    """The decreasing Moebius map sending the arc (a4 .. a1) onto (e1, inf)."""
    xp = as_projpoint(x)
    if isinstance(unif.case, A4Infinite):
        if xp.is_infinite:
            return math.inf
        return unif.case.alpha3 * complex(xp.as_affine()).real + unif.alphas[2] / 3.0
    c = unif.case
    if xp.is_infinite:
        return c.Dpp_a4 / 6.0
    xv = complex(xp.as_affine()).real
    if abs(xv - c.a4) < 1e-13 * (1.0 + abs(c.a4)):
        return math.inf
    return c.Dp_a4 / (xv - c.a4) + c.Dpp_a4 / 6.0


def iota2_fixed_x_at_b4(ctx, bp):
    """x-coordinate of the fixed point of the second involution at y = b4.

    At y = b4 the kernel fiber in x has a double root; returns it as a
    ProjPoint (it can be [1:0] when the fiber drops degree).
    """
    b4 = bp.b[3]
    t = ctx.tf
    if math.isinf(b4):
        c2 = -t * float(ctx.w.weight(1, 1))
        c1 = -t * float(ctx.w.weight(0, 1))
    else:
        c2 = -t * ctx.b_tilde[1](b4)
        c1 = b4 - t * ctx.b_tilde[0](b4)
    if abs(c2) <= 1e-14 * (1.0 + abs(c1)):
        return ProjPoint.infinity()
    return ProjPoint.from_affine(-c1 / (2.0 * c2))


def omega3(unif):
    """Conformal shift in (0, omega2) linking the two fiber involutions."""
    X = iota2_fixed_x_at_b4(unif.ctx, unif.bp)
    u = u_of_x(unif, X)
    if isinstance(u, complex):
        u = u.real
    val = 2.0 * wp_inverse(unif, u)
    if not (0.0 < val < unif.omega2 * (1.0 + 1e-12)):
        raise UniformizationError("omega3 = %r outside (0, omega2)" % val)
    return min(val, unif.omega2)


def uniformize(ctx):
    """Full parametrization data for a nonsingular context."""
    disc = discriminants(ctx.w)
    bp = branch_points(ctx, disc)
    g2, g3, case = invariants(ctx, bp, disc)
    e1, e2, e3 = _cubic_real_roots(g2, g3)
    om1, om2 = periods(g2, g3)

    betas = tuple(float(v) for v in disc.beta_at(ctx.t))
    beta4_zero = disc.beta_at(ctx.t)[4] == 0
    b4 = bp.b[3]
    if beta4_zero:
        y_data = dict(b4_finite=False, b4=math.inf, Ep_b4=0.0, Epp_b4=0.0,
                      beta2=betas[2], beta3=betas[3])
    else:
        _, ep, epp, _, _ = _poly_derivs_at(betas, b4)
        y_data = dict(b4_finite=True, b4=b4, Ep_b4=ep, Epp_b4=epp,
                      beta2=betas[2], beta3=betas[3])

    unif = Uniformization(
        ctx=ctx,
        disc=disc,
        bp=bp,
        case=case,
        alphas=tuple(float(v) for v in disc.alpha_at(ctx.t)),
        betas=betas,
        g2=g2,
        g3=g3,
        e1=e1,
        e2=e2,
        e3=e3,
        omega1=om1,
        omega2=om2,
        omega3=0.0,
        **y_data,
    )
    unif.omega3 = omega3(unif)
    return unif


def _mobius_x(unif, p):
    """x(w) from p = wp(w); p None encodes the pole at lattice points."""
    if isinstance(unif.case, A4Infinite):
        if p is None:
            return ProjPoint.infinity()
        return ProjPoint.from_affine((p - unif.alphas[2] / 3.0) / unif.case.alpha3)
    c = unif.case
    if p is None:
        return ProjPoint.from_affine(c.a4)
    den = p - c.Dpp_a4 / 6.0
    if abs(den) < 1e-12 * (1.0 + abs(p)):
        return ProjPoint.infinity()
    return ProjPoint.from_affine(c.a4 + c.Dp_a4 / den)


def _mobius_y(unif, q):
    if not unif.b4_finite:
        if q is None:
            return ProjPoint.infinity()
        return ProjPoint.from_affine((q - unif.beta2 / 3.0) / unif.beta3)
    if q is None:
        return ProjPoint.from_affine(unif.b4)
    den = q - unif.Epp_b4 / 6.0
    if abs(den) < 1e-12 * (1.0 + abs(q)):
        return ProjPoint.infinity()
    return ProjPoint.from_affine(unif.b4 + unif.Ep_b4 / den)


def lambda_map(unif, omega):
    """Point (x(w), y(w)) of the kernel curve, plus the diagnostic z.

    z satisfies z^2 = D(x) and equals 2 t At[1](x) y + (x - t At[0](x))
    up to the parametrization's sign convention; it is not part of the
    contractual surface.
    """
    try:
        p, dp = _wp_pair(unif, omega)
    except PoleAtLattice:
        p, dp = None, None
    try:
        q, _ = _wp_pair(unif, complex(omega) - unif.omega3 / 2.0)
    except PoleAtLattice:
        q = None

    x = _mobius_x(unif, p)
    y = _mobius_y(unif, q)

    z = None
    if p is not None:
        if isinstance(unif.case, A4Infinite):
            z = -dp / (2.0 * unif.case.alpha3)
        else:
            den = p - unif.case.Dpp_a4 / 6.0
            if abs(den) >= 1e-12 * (1.0 + abs(p)):
                z = unif.case.Dp_a4 * dp / (2.0 * den * den)
    elif isinstance(unif.case, A4Finite):
        z = 0.0
    return x, y, z


def _cf_convergents(value, qmax):
    """Continued fraction convergents p/q of value with q <= qmax."""
    p0, q0, p1, q1 = 0, 1, 1, 0
    x = value
    out = []
    for _ in range(64):
        a = math.floor(x)
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        if q1 > qmax:
            break
        out.append((p1, q1))
        frac = x - a
        if frac < 1e-15:
            break
        x = 1.0 / frac
    return out


def tau_order_on_curve(unif, cap=24, tol=1e-9, confirm_tol=1e-6, samples=8):
    """Smallest ell <= cap with omega3/omega2 = k/ell within tol, confirmed.

    Confirmation compares the curve point at w + ell*omega3 against the
    point at w for several generic w; both coordinates must agree in the
    chordal metric within confirm_tol. Returns (ell, k) or None.
    """
    from .kernel import chordal

    ratio = unif.ratio()
    for k, ell in _cf_convergents(ratio, cap):
        if ell < 1 or abs(ratio - k / ell) >= tol:
            continue
        ok = 0
        checked = 0
        for idx in range(samples * 3):
            frac_r = 0.137 + 0.7002003 * ((idx * 0.6180339887) % 1.0)
            frac_i = 0.231 + 0.451 * ((idx * 0.4142135623) % 1.0)
            w = (0.08 + 0.84 * (frac_r % 1.0)) * unif.omega2 \
                + (0.08 + 0.84 * (frac_i % 1.0)) * unif.omega1
            try:
                x0, y0, _ = lambda_map(unif, w)
                x1, y1, _ = lambda_map(unif, w + ell * unif.omega3)
            except UniformizationError:
                continue
            checked += 1
            if chordal(x0, x1) < confirm_tol and chordal(y0, y1) < confirm_tol:
                ok += 1
            if checked == samples:
                break
        if checked == samples and ok == samples:
            g = math.gcd(k, ell)
            return ell // g if g > 1 else ell, k // g if g > 1 else k
    return None


# ---- direct quadrature checks ------------------------------------------


def _sqrtD(coeffs, sign):
    c = np.array(coeffs[::-1], dtype=float)

    def f(x):
        return 1.0 / np.sqrt(sign * np.polyval(c, x))

    return f


def _piece_from_root(coeffs, sign, root, other):
    c = np.array(coeffs[::-1], dtype=float)
    direction = 1.0 if other >= root else -1.0

    def f(s):
        return 2.0 * s / np.sqrt(sign * np.polyval(c, root + direction * s * s))

    return _gl_adaptive(f, 0.0, math.sqrt(abs(other - root)))


def _int_finite(coeffs, sign, p, q, sp, sq):
    """integral over [p,q] of dx/sqrt(sign*D), desingularized at flagged ends."""
    if p == q:
        return 0.0
    if sp and sq:
        m = 0.5 * (p + q)
        return _piece_from_root(coeffs, sign, p, m) + _piece_from_root(coeffs, sign, q, m)
    if sp:
        return _piece_from_root(coeffs, sign, p, q)
    if sq:
        return _piece_from_root(coeffs, sign, q, p)
    return _gl_adaptive(_sqrtD(coeffs, sign), min(p, q), max(p, q))


def _int_to_infinity(coeffs, sign, p, sp, direction, sing_inf):
    """integral from p out to direction*infinity of dx/sqrt(sign*D)."""
    X = 2.0 * (abs(p) + 1.0)
    a, b = sorted((p, direction * X))
    total = _int_finite(coeffs, sign, a, b, sp if a == p else False,
                        sp if b == p else False)

    if sing_inf:
        # branch point at [1:0]: lead coefficient is zero, substitute w = +-s^2
        lead3 = float(coeffs[3])

        def f(s):
            w = direction * s * s
            # R(w)/w with R(w) = sum coeffs[4-k] w^k; coeffs[4] == 0 here
            val = (((float(coeffs[0]) * w + float(coeffs[1])) * w
                    + float(coeffs[2])) * w + lead3)
            return 2.0 / np.sqrt(sign * direction * val)

        total += _gl_adaptive(f, 0.0, math.sqrt(1.0 / X))
    else:
        def f(w):
            val = ((((float(coeffs[0]) * w + float(coeffs[1])) * w
                     + float(coeffs[2])) * w + float(coeffs[3])) * w
                   + float(coeffs[4]))
            return 1.0 / np.sqrt(sign * val)

        lo, hi = (0.0, 1.0 / X) if direction > 0 else (-1.0 / X, 0.0)
        total += _gl_adaptive(f, lo, hi)
    return total


def _wrap_through_infinity(coeffs, sign, p, sp, q, sq):
    """integral along p -> +inf, -inf -> q; [1:0] interior, lead nonzero."""
    Xp = 2.0 * (abs(p) + 1.0)
    Xq = 2.0 * (abs(q) + 1.0)
    total = _int_finite(coeffs, sign, p, Xp, sp, False)
    total += _int_finite(coeffs, sign, -Xq, q, False, sq)

    def f(w):
        val = ((((float(coeffs[0]) * w + float(coeffs[1])) * w
                 + float(coeffs[2])) * w + float(coeffs[3])) * w
               + float(coeffs[4]))
        return 1.0 / np.sqrt(sign * val)

    total += _gl_adaptive(f, -1.0 / Xq, 1.0 / Xp)
    return total


def periods_quadrature(unif):
    """(omega1, omega2) by direct quadrature along the branch cuts."""
    al = unif.alphas
    a1, a2, a3, a4 = unif.bp.a
    lead_zero = al[4] == 0.0

    if lead_zero:
        om2 = _int_to_infinity(al, 1.0, a1, True, -1.0, True)
        om1 = _int_to_infinity(al, -1.0, a3, True, 1.0, True)
    elif al[4] > 0:
        om2 = _wrap_through_infinity(al, 1.0, a4, True, a1, True)
        om1 = _int_finite(al, -1.0, a3, a4, True, True)
    else:
        om2 = _int_finite(al, 1.0, a4, a1, True, True)
        om1 = _wrap_through_infinity(al, -1.0, a3, True, a4, True)
    return complex(0.0, om1), om2


def omega3_quadrature(unif):
    """omega3 by quadrature of dx/sqrt(D) from a4 to the involution point."""
    al = unif.alphas
    a1, _, _, a4 = unif.bp.a
    X = iota2_fixed_x_at_b4(unif.ctx, unif.bp)
    lead_zero = al[4] == 0.0

    if lead_zero:
        if X.is_infinite:
            raise UniformizationError("involution point collides with a4")
        xv = X.as_affine().real
        return _int_to_infinity(al, 1.0, xv, False, -1.0, True)
    if al[4] > 0:
        if X.is_infinite:
            return _int_to_infinity(al, 1.0, a4, True, 1.0, False)
        xv = X.as_affine().real
        if xv >= a4:
            return _int_finite(al, 1.0, a4, xv, True, False)
        if xv >= a1:
            raise UniformizationError("involution point off the (a4,a1) arc")
        return (_int_to_infinity(al, 1.0, a4, True, 1.0, False)
                + _int_to_infinity(al, 1.0, xv, False, -1.0, False))
    xv = X.as_affine().real if not X.is_infinite else math.inf
    if not (a4 < xv < a1):
        raise UniformizationError("involution point off the (a4,a1) arc")
    return _int_finite(al, 1.0, a4, xv, True, False)
