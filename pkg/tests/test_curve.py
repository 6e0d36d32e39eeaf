import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from walkclass.curve import (
    CurveError,
    NonRealRegion,
    branch_points,
    delta_factors,
    discriminants,
    unit_circle_paths,
)
from walkclass.kernel import KernelContext, GenusTag, genus

from conftest import model, random_elliptic, seeded

F = Fraction


def disc_direct(w, t, x):
    """(x - t*At[0](x))^2 - 4 t^2 At[1](x) At[-1](x), exact."""
    a = {j: w.weight(-1, j) + w.weight(0, j) * x + w.weight(1, j) * x * x
         for j in (-1, 0, 1)}
    return (x - t * a[0]) ** 2 - 4 * t * t * a[1] * a[-1]


class TestDiscriminants:
    def test_coefficients_reproduce_direct_formula(self):
        w = model("fig6_3")
        disc = discriminants(w)
        t = F(3, 7)
        alpha = disc.alpha_at(t)
        assert len(alpha) == 5
        for x in (F(2), F(-1, 3), F(5, 4)):
            from_coeffs = sum(alpha[j] * x ** j for j in range(5))
            assert from_coeffs == disc_direct(w, t, x)

    def test_beta_is_the_swapped_table(self):
        w = model("fig2")
        disc = discriminants(w)
        swapped = model("fig2")
        # E(y) of the table equals D(x) of the transposed table
        from walkclass.model import WeightTable
        tr = WeightTable({(j, i): v for (i, j), v in w.items()})
        t = F(24, 25)
        assert discriminants(tr).alpha_at(t) == disc.beta_at(t)

    def test_coefficients_quadratic_in_t(self):
        disc = discriminants(model("simple"))
        for p in disc.alpha:
            assert p.degree() <= 2


class TestBranchPoints:
    def test_simple_walk_closed_forms(self):
        # roots of ((1/2)x^2 - 3x + 1/2)((1/2)x^2 - 5x + 1/2)/16 at t=1/2
        ctx = KernelContext(model("simple"), F(1, 2))
        bp = branch_points(ctx)
        r6, r2 = math.sqrt(6), math.sqrt(2)
        expected = [5 - 2 * r6, 3 - 2 * r2, 3 + 2 * r2, 5 + 2 * r6]
        assert len(bp.a) == 4
        for got, ref in zip(bp.a, expected):
            assert abs(got - ref) < 1e-10
        # x/y symmetric model: same quartic on the other axis
        for got, ref in zip(bp.b, expected):
            assert abs(got - ref) < 1e-10

    def test_branch_points_are_discriminant_roots(self):
        w = model("fig6_1")
        ctx = KernelContext(w, F(1, 3))
        disc = discriminants(w)
        alpha = [float(c) for c in disc.alpha_at(F(1, 3))]
        bp = branch_points(ctx)
        for a in bp.a:
            if math.isinf(a):
                continue
            val = sum(alpha[j] * a ** j for j in range(5))
            assert abs(val) < 1e-9 * max(1.0, a ** 4)

    def test_kreweras_has_branch_point_at_infinity(self):
        ctx = KernelContext(model("kreweras"), F(1, 2))
        bp = branch_points(ctx)
        assert math.isinf(bp.a[3])
        assert all(math.isfinite(v) for v in bp.a[:3])

    def test_ordering_invariants_random(self):
        rng = seeded(7)
        for _ in range(25):
            w = random_elliptic(rng)
            ctx = KernelContext(w, F(rng.randint(1, 9), 10))
            bp = branch_points(ctx)
            a1, a2, a3, a4 = bp.a
            assert -1 < a1 < a2 < 1
            assert abs(a3) > 1 and (math.isinf(a4) or abs(a4) > 1)

    def test_degenerate_table_rejected(self):
        ctx = None
        from walkclass.kernel import KernelError
        with pytest.raises((CurveError, KernelError)):
            ctx = KernelContext(model("diagonal"), F(1, 2))
            branch_points(ctx)


class TestDeltaFactors:
    def test_product_equals_discriminant_of_other_axis(self):
        w = model("gessel")
        ctx = KernelContext(w, F(2, 5))
        disc = discriminants(w)
        y = F(3, 2)
        plus, minus = delta_factors(ctx, y)
        beta = disc.beta_at(F(2, 5))
        ref = float(sum(beta[j] * y ** j for j in range(5)))
        assert plus * minus == pytest.approx(ref, rel=1e-12)

    def test_negative_radicand_raises(self):
        # Bt[1](y)*Bt[-1](y) < 0 happens for tables with a sign change;
        # gessel has Bt[1] = (d[-1,1] + d[0,1] y + d[1,1] y^2) -> y^2/4*0...
        w = model("fig5_right")
        ctx = KernelContext(w, F(1, 2))
        with pytest.raises(NonRealRegion):
            delta_factors(ctx, F(-1000))


class TestUnitCirclePaths:
    def test_moduli_split_on_the_circle(self):
        for name, t in (("simple", F(1, 2)), ("fig2", F(24, 25)),
                        ("kreweras", F(1, 2))):
            ctx = KernelContext(model(name), t)
            paths = unit_circle_paths(ctx, n=64)
            assert paths.max_abs_minus() < 1 < paths.min_abs_plus(), name

    def test_default_resolution(self):
        ctx = KernelContext(model("simple"), F(1, 2))
        paths = unit_circle_paths(ctx)
        assert len(paths.xs) == 256
        assert len(paths.y_minus) == 256
        assert len(paths.y_plus) == 256

    def test_roots_lie_on_kernel(self):
        ctx = KernelContext(model("fig2"), F(24, 25))
        paths = unit_circle_paths(ctx, n=32)
        from walkclass.kernel import ProjPoint
        for x, ym in zip(paths.xs, paths.y_minus):
            val = ctx.kernel_eval_proj(ProjPoint.from_affine(x), ym)
            assert abs(val) < 1e-10

    def test_csv_write(self, tmp_path):
        ctx = KernelContext(model("simple"), F(1, 2))
        paths = unit_circle_paths(ctx, n=16)
        out = tmp_path / "paths.csv"
        paths.write_csv(out)
        lines = out.read_text().strip().splitlines()
        # header plus a minus-branch and a plus-branch row per sample
        assert len(lines) == 1 + 2 * 16
        assert lines[0] == "re_x,im_x,re_y,im_y,branch"
        assert lines[1].endswith("minus")
        assert lines[2].endswith("plus")


@given(st.integers(min_value=0, max_value=2 ** 32 - 1))
@settings(max_examples=25, deadline=None)
def test_discriminant_formula_random(seed):
    rng = seeded(seed)
    w = random_elliptic(rng)
    t = F(rng.randint(1, 19), 20)
    disc = discriminants(w)
    alpha = disc.alpha_at(t)
    x = F(rng.randint(1, 12), rng.randint(1, 12))
    assert sum(alpha[j] * x ** j for j in range(5)) == disc_direct(w, t, x)
