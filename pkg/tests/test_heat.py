import math

import numpy as np
import pytest

from conftest import closed_form_kernel, closed_form_log_kernel, l2_norm
from jacobiheat import (DomainError, HeatQuery, InputError, RadialFunction, apply_jacobi_operator,
                        convolve, heat_evolve, heat_kernel, heat_maximal, heat_multiplier,
                        log_heat_kernel, make_grid, mu_integral)
from jacobiheat.heat import (heat_grid_extent, heat_kernel_values,
                             sharp_estimate_ratio, sharp_ratio_table, weak_type_ratio)
from jacobiheat.transform import QuadratureConfig, heat_lambda_max
from jacobiheat.verify import resolved_extent


def family(params, n=1024):
    xs = make_grid(1e-3, resolved_extent(params), n, "hybrid")
    rho = max(params.rho, 1.0)
    return RadialFunction.from_callable(lambda x: np.exp(-rho * x * x), xs)


class TestMultiplier:
    def test_semigroup_law(self, params):
        lam = np.array([0.0, 0.7, 3.0 + 0.5j])
        a, b = HeatQuery(0.3, params, 0.2), HeatQuery(1.1, params, 0.2)
        ab = HeatQuery(1.4, params, 0.2)
        assert np.allclose(heat_multiplier(a, lam) * heat_multiplier(b, lam), heat_multiplier(ab, lam),
                           rtol=1e-14)

    def test_at_i_rho(self, params):
        q = HeatQuery(2.0, params, theta=0.3)
        assert heat_multiplier(q, 1j * params.rho) == pytest.approx(math.exp(0.6), rel=1e-14)

    @pytest.mark.parametrize("t", [0.0, -1.0, math.inf, math.nan])
    def test_bad_time(self, params, t):
        with pytest.raises(DomainError):
            HeatQuery(t, params)


class TestKernel:
    @pytest.mark.parametrize("t", [0.1, 1.0, 5.0])
    def test_matches_closed_form(self, closed_form, t):
        x = np.array([0.05, 0.3, 1.0, 4.0, 10.0])
        vals = heat_kernel_values(HeatQuery(t, closed_form), x).real
        assert np.allclose(vals, closed_form_kernel(t, x), rtol=1e-9, atol=0)

    @pytest.mark.parametrize("t", [0.1, 1.0])
    def test_log_kernel_far_out(self, closed_form, t):
        for x in (0.2, 2.0, 12.0, 20.0):
            assert log_heat_kernel(closed_form, t, x) == pytest.approx(
                closed_form_log_kernel(t, x), abs=1e-9)

    def test_value_at_one(self, closed_form):
        assert heat_kernel_values(HeatQuery(1.0, closed_form), [1.0])[0].real == pytest.approx(
            0.017194, abs=1e-6)

    @pytest.mark.parametrize("t", [0.2, 1.0, 4.0])
    def test_unit_mass_and_positive(self, params, t):
        xs = make_grid(1e-3, heat_grid_extent(params, t), 1024, "hybrid")
        h = heat_kernel(HeatQuery(t, params), xs)
        assert mu_integral(params, h).real == pytest.approx(1.0, abs=1e-8)
        assert np.all(h.values.real > 0)

    def test_theta_scales(self, params):
        x = np.array([0.2, 1.5])
        plain = heat_kernel_values(HeatQuery(0.8, params), x)
        shifted = heat_kernel_values(HeatQuery(0.8, params, theta=1.5), x)
        assert np.allclose(shifted, math.exp(1.2) * plain, rtol=1e-12)

    def test_semigroup_by_convolution(self, params):
        t = 0.25
        xs = make_grid(1e-3, resolved_extent(params), 1024, "hybrid")
        half = heat_kernel(HeatQuery(t / 2, params), xs)
        full = heat_kernel(HeatQuery(t, params), xs)
        quad = QuadratureConfig(heat_lambda_max(t / 2, 1e-14), 16, 16, tol=1e-8)
        conv = convolve(params, half, half, quad)
        m = (xs >= 0.1) & (xs <= 3.0)
        assert np.max(np.abs(conv.values - full.values)[m]) <= 1e-8 * np.max(np.abs(full.values))

    def test_monotone_in_x(self, params):
        x = np.linspace(0.05, 10.0, 60)
        logs = [log_heat_kernel(params, 0.7, v) for v in x]
        assert np.all(np.diff(logs) < 0)

    def test_rejects_bad_points(self, params):
        with pytest.raises(DomainError):
            log_heat_kernel(params, 1.0, 0.0)
        with pytest.raises(InputError):
            heat_kernel_values(HeatQuery(1.0, params), [-0.5])


class TestSharpProfile:
    def test_closed_form_ratio(self, closed_form):
        # the ratio reduces to 2x / ((1 + x)(1 - exp(-2x)) 8 sqrt(pi))
        ts = np.array([0.1, 1.0, 4.0])
        xs = np.array([0.1, 0.7, 3.0, 12.0])
        table = sharp_ratio_table(closed_form, ts, xs)
        expected = 2 * xs / ((1 + xs) * -np.expm1(-2 * xs) * 8 * math.sqrt(math.pi))
        assert np.allclose(table, expected[None, :], rtol=1e-8)

    def test_table_matches_pointwise(self, params):
        table = sharp_ratio_table(params, [0.5], [0.2, 2.0])
        assert table[0, 0] == pytest.approx(sharp_estimate_ratio(params, 0.5, 0.2), rel=1e-10)
        assert table[0, 1] == pytest.approx(sharp_estimate_ratio(params, 0.5, 2.0), rel=1e-10)


class TestEvolution:
    def test_pde_residual(self, params):
        # d/dt u = -Delta u with Delta the nonnegative Jacobi operator
        f = family(params, 2048)
        t, h = 0.3, 1e-3
        ev = [heat_evolve(HeatQuery(s, params), f).values for s in (t - h, t, t + h)]
        dudt = (ev[2] - ev[0]) / (2 * h)
        lap = apply_jacobi_operator(params, f.with_values(ev[1]))
        m = (lap.nodes >= 0.05) & (lap.nodes <= 0.8 * f.x_max)
        res = np.abs(dudt[2:-2] + lap.values)[m].max()
        assert res <= 2e-4 * np.abs(dudt).max()

    def test_semigroup(self, params):
        f = family(params)
        a = heat_evolve(HeatQuery(0.2, params), heat_evolve(HeatQuery(0.3, params), f))
        b = heat_evolve(HeatQuery(0.5, params), f)
        assert np.max(np.abs(a.values - b.values)) <= 1e-10 * np.max(np.abs(b.values))

    def test_theta_shift(self, params):
        f = family(params)
        a = heat_evolve(HeatQuery(0.4, params, theta=2.0), f)
        b = heat_evolve(HeatQuery(0.4, params), f)
        assert np.max(np.abs(a.values - math.exp(0.8) * b.values)) <= 1e-12 * np.max(np.abs(a.values))

    def test_l2_contraction_with_spectral_gap(self, params):
        f = family(params)
        t = 0.5
        u = heat_evolve(HeatQuery(t, params), f)
        assert l2_norm(params, u) <= math.exp(-t * params.rho ** 2) * l2_norm(params, f) * (1 + 1e-8)

    def test_mass_preserved(self, params):
        # the kernel has unit mass; keep t small so the evolved mass stays on the grid
        f = family(params)
        u = heat_evolve(HeatQuery(0.02, params), f)
        ratio = mu_integral(params, u).real / mu_integral(params, f).real
        assert ratio == pytest.approx(1.0, abs=1e-8)

    def test_approximate_identity(self, params):
        f = family(params)
        errs = [l2_norm(params, heat_evolve(HeatQuery(t, params), f) - f) for t in (1e-2, 1e-3)]
        assert errs[1] < 0.2 * errs[0]
        # ||e^{-t Delta} f - f|| <= t ||Delta f||
        lap = apply_jacobi_operator(params, f)
        assert errs[1] <= 1e-3 * l2_norm(params, lap) * 1.01

    def test_positivity_preserved(self, params):
        f = family(params)
        u = heat_evolve(HeatQuery(0.5, params), f)
        assert u.values.real.min() > -1e-10 * u.values.real.max()


class TestMaximal:
    @pytest.fixture
    def data(self, closed_form):
        xs = make_grid(1e-3, 10.0, 512, "hybrid")
        f = RadialFunction.from_callable(lambda x: np.exp(-(x - 1.5) ** 2 / 0.5), xs)
        g = RadialFunction.from_callable(lambda x: np.exp(-4 * x * x) * np.cos(3 * x), xs)
        return f, g

    def test_sublinear(self, closed_form, data):
        f, g = data
        ts = np.geomspace(0.01, 2.0, 8)
        mfg = heat_maximal(closed_form, f + g, ts)
        bound = heat_maximal(closed_form, f, ts).values + heat_maximal(closed_form, g, ts).values
        assert np.all(mfg.values <= bound + 1e-10)

    def test_homogeneous(self, closed_form, data):
        f, _ = data
        ts = np.geomspace(0.01, 2.0, 8)
        a = heat_maximal(closed_form, -3.0 * f, ts).values
        assert np.allclose(a, 3.0 * heat_maximal(closed_form, f, ts).values, rtol=1e-12, atol=1e-14)

    def test_dominates_each_time(self, closed_form, data):
        f, _ = data
        ts = np.geomspace(0.01, 2.0, 8)
        mf = heat_maximal(closed_form, f, ts)
        u = heat_evolve(HeatQuery(float(ts[3]), closed_form), f)
        assert np.all(mf.values >= np.abs(u.values) - 1e-9)

    def test_weak_type_ratio_finite(self, closed_form, data):
        f, _ = data
        mf = heat_maximal(closed_form, f, np.geomspace(0.01, 2.0, 8))
        r = weak_type_ratio(closed_form, f, mf)
        assert 0 < r < 10

    def test_rejects_empty_grid(self, closed_form, data):
        with pytest.raises(InputError):
            heat_maximal(closed_form, data[0], [])
