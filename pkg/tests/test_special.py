import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacobiheat import (InputError, JacobiParams, ParameterError, PoleError, RadialFunction,
                        apply_jacobi_operator, c_function, complex_gamma, hyp2f1, jacobi_phi,
                        loggamma, phi_values, plancherel_density)
from jacobiheat.special import REGIMES, log_c_function

# (alpha, beta, lambda, x, phi) from mpmath.hyp2f1 at 40 digits
PHI_GOLDEN = [
    (0, 0, 0.7, 0.3, 0.9672406019772082),
    (0, 0, 0.7, 2.5, 0.1458535782990457),
    (0, 0, 0.7, 9.0, 0.00010803939415746951),
    (0, 0, 3.0, 0.3, 0.7904002162803423),
    (0, 0, 3.0, 2.5, 0.07114585483395346),
    (0, 0, 3.0, 9.0, 6.175506692506832e-05),
    (0, 0, 0.4 - 0.25j, 0.3, 0.9758121408275525 + 0.004379821241835939j),
    (0, 0, 0.4 - 0.25j, 2.5, 0.2838050903913914 + 0.0854656045786319j),
    (0, 0, 0.4 - 0.25j, 9.0, -0.0017982434303864608 + 0.0006392263919307497j),
    (2, 1, 0.7, 0.3, 0.8848208204929695),
    (2, 1, 0.7, 2.5, 0.002900784786769396),
    (2, 1, 0.7, 9.0, -1.133965286297068e-14),
    (2, 1, 3.0, 0.3, 0.8294296862656849),
    (2, 1, 3.0, 2.5, -0.00011086027626096016),
    (2, 1, 3.0, 9.0, 2.3164155849248703e-16),
    (2, 1, 0.4 - 0.25j, 0.3, 0.8874397346981691 + 0.0013363400299242051j),
    (2, 1, 0.4 - 0.25j, 2.5, 0.0037118059712324693 + 0.0004602470320448116j),
    (2, 1, 0.4 - 0.25j, 9.0, -6.303375446509816e-14 + 8.53012794154324e-14j),
    (1.3, 0.2, 0.7, 0.3, 0.9366603717906222),
    (1.3, 0.2, 0.7, 2.5, 0.03235850648026788),
    (1.3, 0.2, 0.7, 9.0, -1.512929992309575e-09),
    (1.3, 0.2, 3.0, 0.3, 0.8607429817977097),
    (1.3, 0.2, 3.0, 2.5, 0.0005718864089006917),
    (1.3, 0.2, 3.0, 9.0, 2.1660482560579117e-10),
    (1.3, 0.2, 0.4 - 0.25j, 0.3, 0.9402685865349035 + 0.0018416846069159722j),
    (1.3, 0.2, 0.4 - 0.25j, 2.5, 0.04360542120820848 + 0.006486915393199815j),
    (1.3, 0.2, 0.4 - 0.25j, 9.0, -1.3239187920647992e-08 + 1.4391765838746108e-08j),
]

C_GOLDEN = [
    (0, 0, 0.5, 0.43057706009571967 - 1.325189202087486j),
    (0, 0, 2.0, 0.3435914099294521 - 0.44882725456241557j),
    (0, 0, 1 + 0.5j, 0.18337569308203702 - 0.6411744411345449j),
    (2, 1, 0.5, -30.09552798584412 - 48.09540735524395j),
    (2, 1, 2.0, -6.315716704875095 - 0.8387482674026149j),
    (2, 1, 1 + 0.5j, -26.440150841087725 + 5.997681354290856j),
    (1.3, 0.2, 0.5, -5.457060664846979 - 12.284649655376297j),
    (1.3, 0.2, 2.0, -1.448836369251002 - 1.0306129758966167j),
    (1.3, 0.2, 1 + 0.5j, -5.797584285829641 - 0.6321225322573734j),
]

GAMMA_GOLDEN = [
    (0.5, 1.772453850905516),
    (3.7, 4.170651783796604),
    (-2.5, -0.9453087204829419),
    (1 + 2j, 0.15190400267003615 + 0.01980488016185498j),
    (-3.3 + 0.4j, 0.09292423429825455 + 0.17778339387684028j),
    (25 + 10j, 5.699868950101422e22 + 6.3104019148274615e22j),
]


def mp_phi(params, lam, x):
    with mp.workdps(40):
        rho = params.rho
        v = mp.hyp2f1((rho - 1j * lam) / 2, (rho + 1j * lam) / 2, params.alpha + 1,
                      -mp.sinh(x) ** 2)
        return complex(v)


class TestParams:
    def test_rho(self):
        assert JacobiParams(2, 1).rho == 4.0

    @pytest.mark.parametrize("ab", [(-1, 0), (-0.5, -0.5), (0, 0.5), (0.2, -0.7), (math.nan, 0)])
    def test_rejects_inadmissible(self, ab):
        with pytest.raises(ParameterError):
            JacobiParams(*ab)

    def test_message_names_alpha_condition(self):
        with pytest.raises(ParameterError, match="alpha > -1/2"):
            JacobiParams(-1, -1)


class TestGamma:
    @pytest.mark.parametrize("z, expected", GAMMA_GOLDEN)
    def test_golden(self, z, expected):
        assert abs(complex_gamma(z) - expected) <= 1e-13 * abs(expected)

    @pytest.mark.parametrize("n", [0, 1, 2, 7])
    def test_pole(self, n):
        with pytest.raises(PoleError) as info:
            complex_gamma(-n)
        assert info.value.location == -n

    @given(st.complex_numbers(max_magnitude=30, allow_nan=False, allow_infinity=False))
    @settings(max_examples=200, deadline=None)
    def test_recurrence(self, z):
        # Gamma(z+1) = z Gamma(z), away from the poles
        if min(abs(z + k) for k in range(0, 33)) < 1e-3:
            return
        lhs = loggamma(z + 1)
        rhs = cmath.log(z) + loggamma(z)
        diff = lhs - rhs
        assert abs(diff.real) < 1e-11 * max(1.0, abs(lhs.real))
        assert abs(cmath.exp(1j * diff.imag) - 1) < 1e-10 * max(1.0, abs(lhs))

    def test_real_values_stay_real(self):
        assert complex_gamma(4.0).imag == 0.0
        assert complex_gamma(4.0).real == pytest.approx(6.0, rel=1e-14)


class TestHypergeometric:
    def test_elementary_identity(self):
        # 2F1(1, 1; 2; z) = -log(1 - z) / z
        z = np.array([-0.1, -0.7, -2.0, -9.0])
        assert np.allclose(hyp2f1(1, 1, 2, z), -np.log1p(-z) / z, rtol=1e-12, atol=0)

    @pytest.mark.parametrize("a,b,c,z", [(0.3, 1.7, 2.2, -0.4), (0.3, 1.7, 2.2, -2.0),
                                         (1.1 + 0.5j, 0.4, 1.5, -12.0), (0.5, 2.5, 1.25, -40.0)])
    def test_against_mpmath(self, a, b, c, z):
        ref = complex(mp.hyp2f1(a, b, c, z))
        assert abs(hyp2f1(a, b, c, z) - ref) <= 1e-11 * abs(ref)

    def test_nonpositive_c_rejected(self):
        with pytest.raises(ParameterError):
            hyp2f1(1, 1, -2, -0.5)

    def test_positive_z_rejected(self):
        with pytest.raises(ParameterError):
            hyp2f1(1, 1, 2, 0.5)


class TestCFunction:
    @pytest.mark.parametrize("a,b,lam,expected", C_GOLDEN)
    def test_golden(self, a, b, lam, expected):
        assert abs(c_function(JacobiParams(a, b), lam) - expected) <= 1e-12 * abs(expected)

    @pytest.mark.parametrize("lam", [0.5, 1.0, 2.0, 5.0])
    def test_closed_form_order(self, closed_form, lam):
        assert abs(c_function(closed_form, lam) - 1 / (1j * lam)) <= 1e-12 / lam
        assert plancherel_density(closed_form, lam) == pytest.approx(lam ** 2, rel=1e-12)

    def test_density_vanishes_at_origin(self, params):
        assert plancherel_density(params, 0.0) == 0.0

    def test_pole_at_zero(self, params):
        with pytest.raises(PoleError):
            c_function(params, 0.0)

    def test_removable_point(self, closed_form):
        # Gamma(i lambda) and a denominator gamma share the pole: c stays 1/(i lambda)
        assert c_function(closed_form, 2j) == pytest.approx(-0.5, abs=1e-14)

    def test_zero_of_c(self):
        # both denominator gammas have poles at i lambda = -2 for (1, 0)
        assert c_function(JacobiParams(1.0, 0.0), 2j) == 0j

    def test_density_is_even_and_vectorized(self, params):
        lam = np.array([0.3, 1.0, 4.0])
        assert np.array_equal(plancherel_density(params, lam), plancherel_density(params, -lam))

    def test_conjugation(self, params):
        # c(-conj(lambda)) = conj(c(lambda))
        lam = 0.8 + 0.3j
        assert abs(c_function(params, -lam.conjugate()) - c_function(params, lam).conjugate()) < 1e-13

    def test_log_c_matches_c(self, params):
        lam = 1.7 - 0.2j
        assert cmath.exp(log_c_function(params, lam)) == pytest.approx(c_function(params, lam))


class TestPhi:
    @pytest.mark.parametrize("a,b,lam,x,expected", PHI_GOLDEN)
    def test_golden(self, a, b, lam, x, expected):
        value = jacobi_phi(JacobiParams(a, b), lam, x)
        # the tail values are tiny and oscillating: compare against the envelope
        scale = max(abs(expected), 1e-3 * math.exp(-(a + b + 1) * x))
        assert abs(value - expected) <= 1e-10 * scale

    @pytest.mark.parametrize("lam", [0.5, 1.0, 2.0, 5.0])
    def test_closed_form(self, closed_form, lam):
        x = np.linspace(0.1, 15.0, 200)
        exact = np.sin(lam * x) / (lam * np.sinh(x))
        assert np.max(np.abs(phi_values(closed_form, lam, x) - exact) / np.abs(exact)) < 1e-8

    def test_value_at_origin(self, params):
        assert jacobi_phi(params, 2.3, 0.0) == 1.0

    def test_i_rho_is_constant(self, params):
        x = np.array([0.01, 1.0, 5.0, 12.0])
        assert np.allclose(phi_values(params, 1j * params.rho, x), 1.0, rtol=1e-11, atol=0)

    @given(lam=st.floats(0.05, 20.0), x=st.floats(0.01, 12.0))
    @settings(max_examples=60, deadline=None)
    def test_even_in_lambda(self, lam, x):
        p = JacobiParams(1.3, 0.2)
        assert jacobi_phi(p, lam, x) == pytest.approx(jacobi_phi(p, -lam, x), rel=1e-12, abs=1e-300)

    @given(lam=st.floats(0.0, 30.0), x=st.floats(0.0, 15.0))
    @settings(max_examples=60, deadline=None)
    def test_bounded_by_one_for_real_lambda(self, lam, x):
        p = JacobiParams(0.0, 0.0)
        assert abs(jacobi_phi(p, lam, x)) <= 1.0 + 1e-12

    def test_real_lambda_gives_real_values(self, params):
        v = phi_values(params, 1.7, np.linspace(0.1, 10, 7))
        assert np.all(v.imag == 0.0)

    @pytest.mark.parametrize("lam", [0.3, 4.0, 0.25 - 0.4j])
    def test_random_points_against_mpmath(self, lam):
        rng = np.random.default_rng(3)
        p = JacobiParams(0.8, -0.3)
        for x in rng.uniform(0.05, 14.0, 6):
            ref = mp_phi(p, lam, x)
            scale = max(abs(ref), 1e-3 * math.exp(-p.rho * x))
            assert abs(jacobi_phi(p, lam, x) - ref) <= 1e-10 * scale

    def test_degenerate_spectral_parameter(self, params):
        # i lambda = -1 is a removable point of the two-term expansion
        x = np.array([3.0, 8.0])
        v = phi_values(params, 1j, x)
        ref = [mp_phi(params, 1j, xi) for xi in x]
        assert np.allclose(v, ref, rtol=1e-9, atol=0)

    def test_large_lambda_small_x(self):
        p = JacobiParams(2.0, 1.0)
        ref = mp_phi(p, 150.0, 0.05)
        assert abs(jacobi_phi(p, 150.0, 0.05) - ref) <= 1e-9 * max(abs(ref), 1e-3)

    def test_report(self, params):
        _, rep = jacobi_phi(params, 1.0, 0.2, report=True)
        assert rep.regime == "series" and rep.terms_used > 0
        _, rep = jacobi_phi(params, 1.0, 10.0, report=True)
        assert rep.regime == "asymptotic"
        assert set(REGIMES) == {"series", "transformed-series", "asymptotic"}

    @pytest.mark.parametrize("lam", [0.7, 2.5, 0.2 + 0.3j])
    def test_regimes_agree_on_overlap(self, params, lam):
        x = np.linspace(5.0, 6.0, 11)
        a = phi_values(params, lam, x, regime="transformed-series")
        b = phi_values(params, lam, x, regime="asymptotic")
        assert np.max(np.abs(a - b) / np.abs(b)) < 1e-8

    def test_series_and_transformed_agree(self, params):
        x = np.linspace(0.3, 0.6, 7)
        a = phi_values(params, 1.3, x, regime="series")
        b = phi_values(params, 1.3, x, regime="transformed-series")
        assert np.max(np.abs(a - b)) < 1e-12

    def test_negative_x_rejected(self, params):
        with pytest.raises(InputError):
            phi_values(params, 1.0, [-1.0])


class TestJacobiOperator:
    @pytest.mark.parametrize("lam", [1.0, 0.3 + 0.3j, "irho"])
    def test_eigenrelation(self, params, lam):
        lam = 1j * params.rho if lam == "irho" else lam
        nodes = np.linspace(0.05, 5.05, 4001)
        phi = RadialFunction(nodes, phi_values(params, lam, nodes))
        lap = apply_jacobi_operator(params, phi)
        ev = lam * lam + params.rho ** 2
        keep = (lap.nodes >= 0.1) & (lap.nodes <= 5.0)
        res = np.abs(lap.values - ev * phi.values[2:-2])[keep].max()
        assert res <= 1e-6 * max(1.0, abs(ev))

    def test_constant_is_annihilated(self, params):
        nodes = np.geomspace(0.1, 5.0, 300)
        lap = apply_jacobi_operator(params, RadialFunction(nodes, np.ones_like(nodes)))
        assert np.max(np.abs(lap.values)) < 1e-9

    def test_needs_five_nodes(self, params):
        with pytest.raises(InputError):
            apply_jacobi_operator(params, RadialFunction(np.arange(1.0, 5.0), np.ones(4)))
