"""Discriminant quartics and branch points of the kernel curve.

Solving the kernel quadratic in y over a point x gives the two-valued
algebraic function with discriminant

    D(x) = (x - t*At[0](x))^2 - 4 t^2 At[1](x) At[-1](x),

a polynomial of degree at most 4 in x whose coefficients are polynomials
in t of degree at most 2 with exact rational coefficients. Symmetrically
E(y) is the discriminant of the quadratic in x. For a nonsingular table
and any t in (0,1), each of D and E has four distinct roots on the real
projective line (a root at infinity appears exactly when the degree-4
coefficient vanishes, which happens independently of t).

Branch point ordering follows the cycle of P1(R) that starts at -1, runs
up through +infinity, continues from -infinity and returns to -1: two
roots lie in (-1,1) and are labelled a1 < a2, and the remaining two are
labelled a3, a4 in the order the cycle meets them. Concretely:

    lead > 0:  a1 < a2 < 1 < a3 < a4
    lead = 0:  a1 < a2 < 1 < a3,  a4 = [1:0]
    lead < 0:  a4 < -1 < a1 < a2 < 1 < a3

E(y) splits over the reals where Bt[1](y)*Bt[-1](y) >= 0 as a product
Delta+ * Delta- with Delta+- = t*Bt[0](y) - y +- 2t*sqrt(Bt1*Bt-1).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .polys import Poly


class CurveError(ValueError):
    pass


class NonRealRegion(CurveError):
    """Delta factorization requested where Bt[1]*Bt[-1] < 0."""


class RootsNotSeparated(CurveError):
    """Branch points failed realness, residual or separation checks."""


@dataclass(frozen=True)
class Discriminants:
    """Coefficient lists of D and E; each entry is a Poly in t of degree <= 2."""

    alpha: tuple  # alpha[j] multiplies x^j in D(x)
    beta: tuple   # beta[j] multiplies y^j in E(y)

    def alpha_at(self, t):
        return tuple(p(t) for p in self.alpha)

    def beta_at(self, t):
        return tuple(p(t) for p in self.beta)


def _quartic_coeffs_in_t(sec_m, sec_0, sec_p):
    """Coefficients of (x - t*sec_0)^2 - 4 t^2 sec_p sec_m as Polys in t."""
    x = Poly.x()
    p0 = x * x
    p1 = Poly([0]) - 2 * (x * sec_0)
    p2 = sec_0 * sec_0 - 4 * (sec_p * sec_m)
    return tuple(Poly([p0[j], p1[j], p2[j]]) for j in range(5))


def discriminants(w):
    """Exact discriminant coefficients of both projections, symbolic in t."""
    at = {j: Poly([w.weight(-1, j), w.weight(0, j), w.weight(1, j)]) for j in (-1, 0, 1)}
    bt = {i: Poly([w.weight(i, -1), w.weight(i, 0), w.weight(i, 1)]) for i in (-1, 0, 1)}
    alpha = _quartic_coeffs_in_t(at[-1], at[0], at[1])
    beta = _quartic_coeffs_in_t(bt[-1], bt[0], bt[1])
    return Discriminants(alpha=alpha, beta=beta)


def delta_factors(ctx, y):
    """(Delta+, Delta-) at a real y; their product equals E(y).

    Exact rational input is evaluated exactly up to the single square
    root. Raises NonRealRegion where the radicand is negative.
    """
    exact = isinstance(y, (Fraction, int))
    b1 = ctx.b_tilde[1](y) if exact else ctx.b_tilde[1](float(y))
    bm = ctx.b_tilde[-1](y) if exact else ctx.b_tilde[-1](float(y))
    b0 = ctx.b_tilde[0](y) if exact else ctx.b_tilde[0](float(y))
    rad = b1 * bm
    if rad < 0:
        raise NonRealRegion("Bt[1]*Bt[-1] = %s < 0 at y=%s" % (rad, y))
    t = ctx.t if exact else ctx.tf
    base = t * b0 - y
    root = 2.0 * float(t) * math.sqrt(float(rad))
    return float(base) + root, float(base) - root


def _newton_polish_exact(coeffs, seed, steps=3):
    """Newton iteration with exact rational arithmetic from a float seed."""
    p = Poly(list(coeffs))
    dp = p.deriv()
    r = Fraction(seed)
    for _ in range(steps):
        d = dp(r)
        if d == 0:
            break
        r = r - p(r) / d
        # keep the representation small; 60 bits is far beyond double
        r = r.limit_denominator(1 << 62)
    return float(r)


def _real_roots_polished(coeffs_exact, label):
    """All real roots of the quartic/cubic with exact coefficients.

    Returns (roots ascending, has_infinite_root). Checks realness and
    residuals; separation is the caller's job.
    """
    lead_zero = coeffs_exact[4] == 0
    cs = coeffs_exact[: 4 if lead_zero else 5]
    if lead_zero and coeffs_exact[3] == 0:
        raise RootsNotSeparated(
            "%s drops degree below 3; the table is not nonsingular" % label
        )
    fl = [float(c) for c in cs]
    scale = max(abs(c) for c in fl)
    raw = np.roots(fl[::-1])
    roots = []
    for z in raw:
        if abs(z.imag) > 1e-6 * (1.0 + abs(z.real)):
            raise RootsNotSeparated(
                "%s has a non-real root %s; the table is not nonsingular" % (label, z)
            )
        roots.append(_newton_polish_exact(cs, z.real))
    roots.sort()
    p = Poly(list(cs))
    for r in roots:
        res = abs(p(r))
        if res > 1e-9 * scale * max(1.0, abs(r)) ** len(cs):
            raise RootsNotSeparated("%s root residual %.3e too large" % (label, res))
    return roots, lead_zero


def _order_branch_roots(roots, lead_zero, lead_sign, label):
    """Apply the cyclic ordering; validates the expected positions."""
    inside = [r for r in roots if abs(r) < 1.0]
    outside = [r for r in roots if abs(r) > 1.0]
    if len(inside) != 2 or len(inside) + len(outside) != len(roots):
        raise RootsNotSeparated(
            "%s roots not split 2/2 by the unit circle: %r" % (label, roots)
        )
    a1, a2 = sorted(inside)
    if lead_zero:
        (a3,) = outside
        if a3 <= 1.0:
            raise RootsNotSeparated("%s finite outer root %s not > 1" % (label, a3))
        return (a1, a2, a3, math.inf)
    if lead_sign > 0:
        a3, a4 = sorted(outside)
        if a3 <= 1.0:
            raise RootsNotSeparated("%s outer roots %r not both > 1" % (label, outside))
        return (a1, a2, a3, a4)
    pos = [r for r in outside if r > 1.0]
    neg = [r for r in outside if r < -1.0]
    if len(pos) != 1 or len(neg) != 1:
        raise RootsNotSeparated(
            "%s outer roots %r not split across signs" % (label, outside)
        )
    return (a1, a2, pos[0], neg[0])


@dataclass(frozen=True)
class BranchPoints:
    """Ordered branch points of both projections; math.inf encodes [1:0]."""

    a: tuple
    b: tuple


def branch_points(ctx, disc=None):
    """Branch points of the x- and y-projections at the context's t."""
    disc = disc if disc is not None else discriminants(ctx.w)
    out = []
    for coeffs, label in ((disc.alpha_at(ctx.t), "D"), (disc.beta_at(ctx.t), "E")):
        roots, lead_zero = _real_roots_polished(coeffs, label)
        expected = 3 if lead_zero else 4
        if len(roots) != expected:
            raise RootsNotSeparated("%s has %d real roots, expected %d"
                                    % (label, len(roots), expected))
        rs = sorted(roots)
        for u, v in zip(rs, rs[1:]):
            # scale per pair: a distant large root must not veto a
            # perfectly resolved gap between two small ones
            if v - u < 1e-7 * (1.0 + max(abs(u), abs(v))):
                raise RootsNotSeparated(
                    "%s roots %s and %s are not separated" % (label, u, v)
                )
        lead_sign = 0 if lead_zero else (1 if coeffs[4] > 0 else -1)
        out.append(_order_branch_roots(roots, lead_zero, lead_sign, label))
    return BranchPoints(a=out[0], b=out[1])


@dataclass
class UnitCirclePaths:
    """Sampled kernel roots over the unit circle |x| = 1."""

    xs: list
    y_minus: list
    y_plus: list

    def max_abs_minus(self):
        return max(p.modulus() for p in self.y_minus)

    def min_abs_plus(self):
        return min(p.modulus() for p in self.y_plus)

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["re_x", "im_x", "re_y", "im_y", "branch"])
            for x, ym, yp in zip(self.xs, self.y_minus, self.y_plus):
                for p, name in ((ym, "minus"), (yp, "plus")):
                    z = p.as_affine()
                    if isinstance(z, float) and math.isinf(z):
                        raise CurveError("infinite root over the unit circle")
                    wr.writerow(
                        ["%.17g" % x.real, "%.17g" % x.imag,
                         "%.17g" % z.real, "%.17g" % z.imag, name]
                    )


def unit_circle_paths(ctx, n=256):
    """Trace both y-branches over n equispaced points of |x| = 1."""
    from .kernel import roots_in_y

    xs, yms, yps = [], [], []
    for k in range(n):
        x = complex(math.cos(2 * math.pi * k / n), math.sin(2 * math.pi * k / n))
        ym, yp = roots_in_y(ctx, x)
        xs.append(x)
        yms.append(ym)
        yps.append(yp)
    return UnitCirclePaths(xs=xs, y_minus=yms, y_plus=yps)
