"""Kernel polynomial of a walk model and its fiber structure.

For a weight table d and time value t in (0,1), the kernel is

    K(x,y;t) = xy*(1 - t*S(x,y)),   S(x,y) = sum d[i,j] x^i y^j.

Grouping S by powers of y gives Laurent coefficients A[-1], A[0], A[1]
in x with K quadratic in y after clearing denominators; grouping by
powers of x gives B[j] in y. We store the cleared polynomials

    At[j](x) = x*A[j](x) = d[-1,j] + d[0,j]*x + d[1,j]*x^2
    Bt[i](y) = y*B[i](y) = d[i,-1] + d[i,0]*y + d[i,1]*y^2

so that K(x,y) = -t*At[1](x)*y^2 + (x - t*At[0](x))*y - t*At[-1](x)
               = -t*Bt[1](y)*x^2 + (y - t*Bt[0](y))*x - t*Bt[-1](y).

Points on the kernel curve live in P1 x P1; the homogeneous kernel is

    Kbar(x0,x1,y0,y1) = x0*x1*y0*y1
        - t * sum d[i-1,j-1] x0^i x1^(2-i) y0^j y1^(2-j),  i,j in 0..2.

ProjPoint represents a point of P1(C) in complex double coordinates,
scaled so the larger coordinate has modulus 1. The point at infinity
[1:0] compares strictly above every finite modulus.
"""

from __future__ import annotations

import cmath
import math
from enum import Enum
from fractions import Fraction

from .model import PatternKind, pattern_class
from .polys import Poly


class KernelError(ValueError):
    pass


class DegenerateFiber(KernelError):
    """The fiber quadratic collapsed or its roots could not be labeled."""


class GenusTag(Enum):
    ELLIPTIC = "Elliptic"
    GENUS_ZERO = "GenusZero"
    DEGENERATE = "Degenerate"


class ProjPoint:
    """Point of the complex projective line, canonically scaled."""

    __slots__ = ("c0", "c1")

    def __init__(self, c0, c1):
        c0 = complex(c0)
        c1 = complex(c1)
        m = max(abs(c0), abs(c1))
        if m == 0.0 or not (math.isfinite(m)):
            raise ValueError("invalid projective coordinates (%r, %r)" % (c0, c1))
        object.__setattr__(self, "c0", c0 / m)
        object.__setattr__(self, "c1", c1 / m)

    def __setattr__(self, name, value):
        raise AttributeError("ProjPoint is immutable")

    @classmethod
    def from_affine(cls, z):
        if z is None or (isinstance(z, float) and math.isinf(z)):
            return cls(1.0, 0.0)
        return cls(complex(z), 1.0)

    @classmethod
    def infinity(cls):
        return cls(1.0, 0.0)

    @property
    def is_infinite(self):
        return self.c1 == 0

    def modulus(self):
        if self.c1 == 0:
            return math.inf
        return abs(self.c0) / abs(self.c1)

    def as_affine(self):
        """Affine value, math.inf for [1:0]."""
        if self.c1 == 0:
            return math.inf
        return self.c0 / self.c1

    def __repr__(self):
        return "[%g%+gi : %g%+gi]" % (
            self.c0.real, self.c0.imag, self.c1.real, self.c1.imag,
        )


def as_projpoint(v):
    if isinstance(v, ProjPoint):
        return v
    if isinstance(v, Fraction):
        return ProjPoint(float(v), 1.0)
    return ProjPoint.from_affine(v)


def chordal(p, q):
    """Chordal distance on P1; zero iff the points coincide."""
    p = as_projpoint(p)
    q = as_projpoint(q)
    num = abs(p.c0 * q.c1 - p.c1 * q.c0)
    np_ = math.hypot(abs(p.c0), abs(p.c1))
    nq = math.hypot(abs(q.c0), abs(q.c1))
    return num / (np_ * nq)


def solve_homogeneous_quadratic(c2, c1, c0, tol=0.0):
    """Roots [u0:u1] of c2*u0^2 + c1*u0*u1 + c0*u1^2 as a ProjPoint pair.

    Stable in the degenerate leading/trailing coefficient cases; raises
    DegenerateFiber if all three coefficients vanish (relative to tol).
    """
    scale = max(abs(c2), abs(c1), abs(c0))
    if scale == 0.0 or scale <= tol:
        raise DegenerateFiber("identically zero quadratic")
    if c2 == 0 and c1 == 0:
        # c0*u1^2: double root at infinity
        return ProjPoint.infinity(), ProjPoint.infinity()
    if c0 == 0 and c1 == 0:
        return ProjPoint(0.0, 1.0), ProjPoint(0.0, 1.0)
    disc = c1 * c1 - 4.0 * c2 * c0
    sq = cmath.sqrt(disc)
    if abs(c1 + sq) >= abs(c1 - sq):
        qq = -(c1 + sq) / 2.0
    else:
        qq = -(c1 - sq) / 2.0
    # roots are qq/c2 and c0/qq, kept projective; qq == 0 would force
    # c1 == 0 and c2*c0 == 0, which the rank cases above already took
    return ProjPoint(qq, c2), ProjPoint(c0, qq)


class KernelContext:
    """Weight table with a fixed rational time value t in (0,1)."""

    __slots__ = ("w", "t", "tf", "a_tilde", "b_tilde", "_ay", "_bx")

    def __init__(self, w, t):
        if not isinstance(t, Fraction):
            if isinstance(t, int):
                t = Fraction(t)
            else:
                raise KernelError("t must be an exact rational, got %r" % (t,))
        if not (0 < t < 1):
            raise KernelError("t must lie strictly between 0 and 1, got %s" % t)
        self.w = w
        self.t = t
        self.tf = float(t)
        # At[j](x), ascending in x; Bt[i](y), ascending in y
        self.a_tilde = {
            j: Poly([w.weight(-1, j), w.weight(0, j), w.weight(1, j)])
            for j in (-1, 0, 1)
        }
        self.b_tilde = {
            i: Poly([w.weight(i, -1), w.weight(i, 0), w.weight(i, 1)])
            for i in (-1, 0, 1)
        }
        # float coefficient triples for the homogenized sections
        self._ay = {
            j: (float(w.weight(-1, j)), float(w.weight(0, j)), float(w.weight(1, j)))
            for j in (-1, 0, 1)
        }
        self._bx = {
            i: (float(w.weight(i, -1)), float(w.weight(i, 0)), float(w.weight(i, 1)))
            for i in (-1, 0, 1)
        }

    # -- evaluation ---------------------------------------------------

    def jump_eval(self, x, y):
        """S(x,y) for nonzero complex x, y."""
        total = 0j
        for j in (-1, 0, 1):
            at = self.a_tilde[j]
            total += at.eval_complex(x) * y ** j
        return total / x

    def kernel_eval(self, x, y):
        """K(x,y;t) in complex doubles, via the y-quadratic form."""
        x = complex(x)
        y = complex(y)
        a1 = self.a_tilde[1].eval_complex(x)
        a0 = self.a_tilde[0].eval_complex(x)
        am = self.a_tilde[-1].eval_complex(x)
        return -self.tf * a1 * y * y + (x - self.tf * a0) * y - self.tf * am

    def kernel_eval_exact(self, x, y):
        """K(x,y;t) in exact rational arithmetic."""
        a1 = self.a_tilde[1](x)
        a0 = self.a_tilde[0](x)
        am = self.a_tilde[-1](x)
        return -self.t * a1 * y * y + (x - self.t * a0) * y - self.t * am

    def section_y(self, j, x0, x1):
        """Homogenized At[j] at (x0,x1): d[-1,j]*x1^2 + d[0,j]*x0*x1 + d[1,j]*x0^2."""
        cm, c0, cp = self._ay[j]
        return cm * x1 * x1 + c0 * x0 * x1 + cp * x0 * x0

    def section_x(self, i, y0, y1):
        cm, c0, cp = self._bx[i]
        return cm * y1 * y1 + c0 * y0 * y1 + cp * y0 * y0

    def y_fiber_coeffs(self, x0, x1):
        """(c2, c1, c0) with Kbar = c2*y0^2 + c1*y0*y1 + c0*y1^2 over (x0,x1)."""
        c2 = -self.tf * self.section_y(1, x0, x1)
        c1 = x0 * x1 - self.tf * self.section_y(0, x0, x1)
        c0 = -self.tf * self.section_y(-1, x0, x1)
        return c2, c1, c0

    def x_fiber_coeffs(self, y0, y1):
        c2 = -self.tf * self.section_x(1, y0, y1)
        c1 = y0 * y1 - self.tf * self.section_x(0, y0, y1)
        c0 = -self.tf * self.section_x(-1, y0, y1)
        return c2, c1, c0

    def kernel_eval_proj(self, xp, yp):
        """Homogeneous kernel at canonical representatives."""
        xp = as_projpoint(xp)
        yp = as_projpoint(yp)
        c2, c1, c0 = self.y_fiber_coeffs(xp.c0, xp.c1)
        return c2 * yp.c0 * yp.c0 + c1 * yp.c0 * yp.c1 + c0 * yp.c1 * yp.c1


def kernel_eval(ctx, x, y):
    return ctx.kernel_eval(x, y)


def kernel_eval_exact(ctx, x, y):
    return ctx.kernel_eval_exact(x, y)


def kernel_eval_proj(ctx, xp, yp):
    return ctx.kernel_eval_proj(xp, yp)


def genus(w):
    """Genus of the kernel curve, constant in t on (0,1)."""
    pat = pattern_class(w)
    if pat.kind is PatternKind.DEGENERATE:
        return GenusTag.DEGENERATE
    if pat.kind is PatternKind.GENUS_ZERO:
        return GenusTag.GENUS_ZERO
    return GenusTag.ELLIPTIC


def _fiber_pair(ctx, x0, x1):
    c2, c1, c0 = ctx.y_fiber_coeffs(x0, x1)
    # reference scale: with canonical (x0,x1) the coefficients are O(1)
    return solve_homogeneous_quadratic(c2, c1, c0, tol=1e-14 * ctx.tf)


def _match_pair(prev, cur):
    """Match unordered cur=(u,v) against ordered prev; returns ordered pair.

    Returns None when the matching is ambiguous (the pair moved by a
    distance comparable to its own separation).
    """
    u, v = cur
    keep = chordal(prev[0], u) + chordal(prev[1], v)
    swap = chordal(prev[0], v) + chordal(prev[1], u)
    sep = chordal(u, v)
    if min(keep, swap) > 0.3 * sep:
        return None
    return (u, v) if keep <= swap else (v, u)


def roots_in_y(ctx, x, steps=32):
    """Both kernel roots over x, labeled (Yminus, Yplus).

    On the unit circle the labels follow the moduli: |Yminus| < 1 < |Yplus|.
    Elsewhere the labels continue the circle labeling along the radial ray
    through x; crossing a branch point on that ray leaves them undefined
    and raises DegenerateFiber.
    """
    xp = as_projpoint(x)

    if xp.is_infinite:
        phase, target_r = 1.0, None
    else:
        z = xp.as_affine()
        r = abs(z)
        phase = z / r if r > 0 else 1.0
        target_r = r

    def fiber_at_radius(r):
        return _fiber_pair(ctx, phase * r, 1.0)

    base = _fiber_pair(ctx, phase, 1.0)
    m0, m1 = base[0].modulus(), base[1].modulus()
    if abs(m0 - 1.0) < 1e-12 and abs(m1 - 1.0) < 1e-12:
        raise DegenerateFiber("both fiber roots on the unit circle at x=%r" % (phase,))
    pair = (base[0], base[1]) if m0 < m1 else (base[1], base[0])

    if target_r is not None and abs(target_r - 1.0) < 1e-12:
        return pair

    # continue along the ray; endpoints 0 and [1:0] are approached through
    # a large finite radius and snapped with the exact homogeneous fiber
    far = 1e9
    if target_r is None:
        lo, hi, outward = 1.0, far, True
    elif target_r > 1.0:
        lo, hi, outward = 1.0, target_r, True
    else:
        lo, hi, outward = max(target_r, 1.0 / far), 1.0, False

    n = steps
    while True:
        ok = True
        cur = pair
        ratio = (hi / lo) ** (1.0 / n)
        for k in range(1, n + 1):
            r = lo * ratio ** k if outward else hi * ratio ** (-k)
            nxt = _match_pair(cur, fiber_at_radius(r))
            if nxt is None:
                ok = False
                break
            cur = nxt
        if ok:
            if target_r is None or target_r < 1.0 / far:
                # snap to the exact point at infinity or zero
                endpoint = (1.0, 0.0) if target_r is None else (0.0, 1.0)
                snapped = _match_pair(cur, _fiber_pair(ctx, *endpoint))
                if snapped is None:
                    raise DegenerateFiber("fiber labels ambiguous at the ray endpoint")
                cur = snapped
            return cur
        n *= 2
        if n > 4096:
            raise DegenerateFiber(
                "fiber roots collide along the ray through %r; labels undefined" % (x,)
            )


def _sort_key(p):
    if p.is_infinite:
        return (1, 0.0, 0.0)
    z = p.as_affine()
    return (0, round(z.real, 9), round(z.imag, 9))


def poles_of_xy(ctx):
    """The six points of the kernel curve where x*y has a pole.

    P1,P2 sit over x=[1:0]; Q1,Q2 have y=[1:0]; iota1(Q1), iota1(Q2) are
    the second fiber roots over x(Q1), x(Q2). Labels within each pair
    follow a fixed deterministic sort.
    """
    t = ctx.tf
    py = solve_homogeneous_quadratic(
        -t * ctx.section_y(1, 1.0, 0.0),
        -t * ctx.section_y(0, 1.0, 0.0),
        -t * ctx.section_y(-1, 1.0, 0.0),
    )
    py = sorted(py, key=_sort_key)
    qx = solve_homogeneous_quadratic(
        -t * ctx.section_x(1, 1.0, 0.0),
        -t * ctx.section_x(0, 1.0, 0.0),
        -t * ctx.section_x(-1, 1.0, 0.0),
    )
    qx = sorted(qx, key=_sort_key)

    out = {
        "P1": (ProjPoint.infinity(), py[0]),
        "P2": (ProjPoint.infinity(), py[1]),
        "Q1": (qx[0], ProjPoint.infinity()),
        "Q2": (qx[1], ProjPoint.infinity()),
    }
    for k in (1, 2):
        xq = out["Q%d" % k][0]
        roots = _fiber_pair(ctx, xq.c0, xq.c1)
        # the fiber over x(Q) contains y=[1:0]; take the other root
        other = max(roots, key=lambda p: chordal(p, ProjPoint.infinity()))
        if chordal(other, ProjPoint.infinity()) < 1e-8:
            other = ProjPoint.infinity()
        out["iota1Q%d" % k] = (xq, other)
    return out
