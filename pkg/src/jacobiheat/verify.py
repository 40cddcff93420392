"""Self-checks run by ``jacobiheat verify``.

Each suite returns a list of :class:`Check` records comparing a measured
quantity with a tolerance.  Closed-form checks that only exist for the order
``(1/2, -1/2)`` are skipped for other orders.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import dynamics as dyn
from .grid import RadialFunction, indicator, make_grid
from .heat import (HeatQuery, heat_grid_extent, heat_kernel, heat_quadrature,
                   sharp_estimate_ratio)
from .measure import (LorentzIndex, lorentz_norm, lorentz_norm_via_rearrangement, lp_norm,
                      measure_intervals, measure_origin, mu_integral)
from .special import (JacobiParams, apply_jacobi_operator, c_function, phi_values,
                      plancherel_density)
from .transform import (QuadratureConfig, convolve, forward_transform, inverse_transform,
                        invert_on, plancherel_norm, spectral_samples, transform, translate)

SUITES = ("special", "transform", "heat", "lorentz", "dynamics")


@dataclass(frozen=True)
class Check:
    check: str
    value: float | None
    tolerance: float | None
    passed: bool

    def as_dict(self) -> dict:
        return {"check": self.check, "value": self.value, "tolerance": self.tolerance,
                "pass": self.passed}


def _le(name: str, value: float, tol: float) -> Check:
    value = float(value)
    return Check(name, value, tol, bool(value <= tol))


def _is_closed_form_order(params: JacobiParams) -> bool:
    return params.alpha == 0.5 and params.beta == -0.5


def _l2(params: JacobiParams, f: RadialFunction) -> float:
    return math.sqrt(mu_integral(params, f.with_values(np.abs(f.values) ** 2)).real)


# ---------------------------------------------------------------------------

def suite_special(params: JacobiParams, **_) -> list[Check]:
    out = []
    cf = JacobiParams(0.5, -0.5)
    x = np.linspace(0.1, 15.0, 300)
    worst = 0.0
    for lam in (0.5, 1.0, 2.0, 5.0):
        exact = np.sin(lam * x) / (lam * np.sinh(x))
        worst = max(worst, float(np.max(np.abs(phi_values(cf, lam, x) - exact) / np.abs(exact))))
    out.append(_le("phi_closed_form_rel_err", worst, 1e-8))
    c_err = max(abs(c_function(cf, lam) - 1 / (1j * lam)) * lam for lam in (0.5, 1.0, 2.0, 5.0))
    out.append(_le("c_closed_form_rel_err", c_err, 1e-10))
    d_err = max(abs(plancherel_density(cf, lam) / lam ** 2 - 1) for lam in (0.5, 1.0, 2.0, 5.0))
    out.append(_le("plancherel_density_rel_err", d_err, 1e-10))

    nodes = np.linspace(0.05, 5.05, 4001)
    for lam in (1.0, 0.3 + 0.3j, 1j * params.rho):
        phi = RadialFunction(nodes, phi_values(params, lam, nodes))
        lap = apply_jacobi_operator(params, phi)
        ev = lam * lam + params.rho ** 2
        keep = (lap.nodes >= 0.1) & (lap.nodes <= 5.0)
        res = np.abs(lap.values - ev * phi.values[2:-2])[keep].max()
        out.append(_le(f"eigen_residual(lambda={lam})", res / max(1.0, abs(ev)), 1e-6))

    xs = np.linspace(5.0, 6.0, 21)
    worst = 0.0
    for lam in (0.7, 2.5, 0.2 + 0.3j):
        a = phi_values(params, lam, xs, regime="transformed-series")
        b = phi_values(params, lam, xs, regime="asymptotic")
        worst = max(worst, float(np.max(np.abs(a - b) / np.abs(b))))
    out.append(_le("regime_overlap_rel_diff[5,6]", worst, 1e-8))
    return out


def resolved_extent(params: JacobiParams, cap: float = 8.0) -> float:
    """Largest x at which inverted samples still give a usable ``f dmu``.

    Inversion errors are of size ``eps * exp(-rho x)`` while ``A`` grows like
    ``exp(2 rho x)``, so ``f dmu`` is resolved while ``exp(rho x) eps`` is small.
    """
    return min(cap, 18.0 / params.rho)


def _test_family(params: JacobiParams, n: int = 2048):
    """Gaussian ``exp(-rho x^2)`` on a grid that contains its mass and stays resolved."""
    xs = make_grid(1e-3, resolved_extent(params), n, "hybrid")
    rho = max(params.rho, 1.0)
    return xs, RadialFunction.from_callable(lambda x: np.exp(-rho * x * x), xs)


def suite_transform(params: JacobiParams, **_) -> list[Check]:
    out = []
    xs, f = _test_family(params)
    quad = QuadratureConfig(lambda_max=14.0 * math.sqrt(max(params.rho, 1.0)), panels=16, tol=1e-6)
    fh = transform(params, f, quad)
    back = invert_on(params, fh, xs, quad)
    tol_rt = 1e-6 if _is_closed_form_order(params) else 1e-4
    out.append(_le("round_trip_gaussian_rel_L2", _l2(params, back - f) / _l2(params, f), tol_rt))
    pl = plancherel_norm(params, fh, quad, f.x_max) / _l2(params, f)
    out.append(_le("plancherel_rel_err", abs(pl - 1.0), 1e-4))
    mass = mu_integral(params, f).real
    out.append(_le("transform_at_i_rho_vs_integral",
                   abs(forward_transform(params, f, 1j * params.rho) / mass - 1), 1e-8))
    rho = max(params.rho, 1.0)
    g = RadialFunction.from_callable(lambda x: np.exp(-2 * rho * x * x) * (1 + x), xs)
    fg = convolve(params, f, g, quad)
    gf = convolve(params, g, f, quad)
    out.append(_le("convolution_commutes_sup", np.abs(fg.values - gf.values).max(), 1e-8))
    prod = mu_integral(params, fg).real / (mass * mu_integral(params, g).real)
    out.append(_le("convolution_mass_rel_err", abs(prod - 1), 1e-5))
    t0 = translate(params, f, 0.0, quad)
    out.append(_le("translate_by_zero_sup", np.abs(t0.values - f.values).max(), 1e-8))
    if _is_closed_form_order(params):
        hq = heat_quadrature(1.0)
        g1 = spectral_samples(params, lambda lam: np.exp(-(lam ** 2 + 1)), hq, 1.0)
        val = inverse_transform(params, g1, 1.0, hq).real
        out.append(_le("inverse_of_heat_multiplier_at_1", abs(val - 0.017194), 1e-6))
    return out


def suite_heat(params: JacobiParams, t: float = 1.0, **_) -> list[Check]:
    out = []
    q = HeatQuery(t, params)
    xs = make_grid(1e-3, max(20.0, heat_grid_extent(params, t)), 1024, "hybrid")
    h = heat_kernel(q, xs)
    out.append(_le(f"mass(t={t})", abs(mu_integral(params, h).real - 1.0), 1e-4))
    out.append(_le(f"min_value(t={t})", -float(h.values.real.min()), 1e-10))
    half = heat_kernel(HeatQuery(t / 2, params), xs)
    conv = convolve(params, half, half, heat_quadrature(t / 2))
    m = (xs >= 0.1) & (xs <= 5.0)
    out.append(_le("semigroup(t/2 * t/2 = t) sup on [0.1,5]",
                   np.abs(conv.values - h.values)[m].max(), 1e-5))
    ratios = [sharp_estimate_ratio(params, t, x) for x in (0.1, 1.0, 5.0, 15.0)]
    out.append(Check("sharp_ratio_positive_finite", min(ratios), 0.0,
                     bool(all(0 < r < math.inf for r in ratios))))
    if _is_closed_form_order(params):
        out.append(_le("closed_form_h1(1)",
                       abs(heat_kernel(HeatQuery(1.0, params), np.array([0.5, 1.0])).values[1].real
                           - 0.017194), 1e-6))
        worst = 0.0
        for x in (0.1, 1.0, 5.0, 15.0):
            r = sharp_estimate_ratio(params, t, x)
            worst = max(worst, max(1 / (8 * math.sqrt(math.pi)) - r, r - 1 / (4 * math.sqrt(math.pi))))
        out.append(_le("sharp_ratio_outside_bracket", worst, 1e-3))
    return out


def suite_lorentz(params: JacobiParams, **_) -> list[Check]:
    out = []
    xs = make_grid(1e-3, 20.0, 1024, "hybrid")
    f = RadialFunction.from_callable(lambda x: np.exp(-x * x) * (1 + 0.3 * np.cos(3 * x)), xs)
    for p in (1.5, 2.0, 3.0):
        err = abs(lorentz_norm(params, f, LorentzIndex(p, p)) / lp_norm(params, f, p) - 1)
        out.append(_le(f"lorentz_pp_vs_lp(p={p})", err, 1e-6))
    r = 1.3
    e = indicator(r, xs)
    mu_e = measure_origin(params, float(xs[0])) + measure_intervals(params, [xs[0]], [r])[0]
    for q in (1.0, 2.0, math.inf):
        err = max(abs(lorentz_norm(params, e, LorentzIndex(p, q)) / mu_e ** (1 / p) - 1)
                  for p in (1.5, 3.0))
        out.append(_le(f"indicator_norm(q={q})", err, 1e-6))
    idx = LorentzIndex(2.0, 3.0)
    a = lorentz_norm(params, f, idx)
    b = lorentz_norm_via_rearrangement(params, f, idx)
    out.append(_le("level_set_vs_rearrangement_route", abs(a / b - 1), 1e-4))
    out.append(_le("homogeneity", abs(lorentz_norm(params, f * (-2.5), idx) / a - 2.5), 1e-12))
    return out


def suite_dynamics(params: JacobiParams, **_) -> list[Check]:
    out = []
    worst = max(abs(dyn.theta_threshold(params, p) - dyn.theta_threshold_vertex_form(params, p))
                for p in (1.2, 1.5, 2.0, 3.0, 4.0, 10.0))
    out.append(_le("theta_forms_agree", worst, 1e-14))
    bad = 0
    for p in np.linspace(1.05, 8.0, 50):
        tp = dyn.theta_threshold(params, p)
        for theta in np.linspace(-1.0, 2.0 * params.rho ** 2, 50):
            chaotic = dyn.classify(params, p, theta).verdict is dyn.Verdict.CHAOTIC
            bad += chaotic != (p > 2 and theta > tp)
    out.append(_le("classify_lattice_mismatches", bad, 0))
    # with theta = rho^2, z = 2 pi i k / T is admissible iff |k| < rho^2 T / (4 pi)
    rho, theta = params.rho, params.rho ** 2
    period = 100.0 / rho ** 2
    zs = dyn.periodic_eigenvalues(params, 4.0, theta, period)
    expected = 2 * math.ceil(rho ** 2 * period / (4 * math.pi) - 1)
    out.append(Check(f"periodic_count(T={period:g},p=4,theta={theta:g})", len(zs), expected,
                     len(zs) == expected))
    nodes = np.linspace(0.05, 5.05, 4001)
    worst = 0.0
    for z in zs:
        _, phi = dyn.eigenfunction_phi_z(params, 4.0, theta, z, nodes)
        worst = max(worst, dyn.verify_eigen_residual(params, theta, z, phi))
    out.append(_le("periodic_eigen_residual", worst, 1e-5))
    xs = make_grid(1e-3, 20.0, 1024, "hybrid")
    h1 = heat_kernel(HeatQuery(1.0, params), xs)
    probes = [0.2j, -0.2j, 0.1 + 0.1j, 0.5 + 0.05j, 1.0 - 0.1j, 2.0 + 0.3j,
              0.05 - 0.15j, 3.0 + 0.2j, 0.3 + 0.2j, 1.5 - 0.25j]
    worst = 0.0
    for z in probes:
        z = z * rho ** 2
        val = dyn.dsw_pairing(params, 4.0, theta, h1, z)
        worst = max(worst, abs(val - np.exp(-(z + theta))))
    out.append(_le("dsw_pairing_of_h1", worst, 1e-5))
    return out


_SUITES: dict[str, Callable[..., list[Check]]] = {
    "special": suite_special,
    "transform": suite_transform,
    "heat": suite_heat,
    "lorentz": suite_lorentz,
    "dynamics": suite_dynamics,
}


def run_suite(name: str, params: JacobiParams, **options) -> list[Check]:
    """Run one suite, or every suite for ``name='all'``."""
    names = SUITES if name == "all" else (name,)
    out = []
    for n in names:
        if n not in _SUITES:
            raise ValueError(f"unknown suite {n!r}; expected one of {SUITES + ('all',)}")
        out.extend(_SUITES[n](params, **options))
    return out
