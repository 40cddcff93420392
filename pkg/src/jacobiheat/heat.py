"""Heat kernel, heat semigroup and the heat maximal function.

Everything is spectral: ``h_t`` has transform ``exp(-t(lambda^2 + rho^2))``
and the (shifted) semigroup acts by multiplication with
``exp(-t(lambda^2 + rho^2 - theta))`` before inversion.

For pointwise values far out in ``x`` the real-line inversion integral is
useless in relative terms (its value is ``exp(-x^2/4t)`` times something of
order one, produced by cancellation).  :func:`log_heat_kernel` instead writes
``phi_lambda = c(lambda) Phi_lambda + c(-lambda) Phi_{-lambda}``, folds the two
halves into one integral of ``Phi_lambda / c(-lambda)`` over the real line
and moves it to ``Im lambda = x/2t``, where ``exp(-t lambda^2) Phi_lambda(x)``
no longer oscillates and its size ``exp(-x^2/4t - rho x - rho^2 t)`` can be
taken out exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InputError
from .grid import RadialFunction
from .measure import distribution_function, mu_integral
from .special import JacobiParams, _hc_drift_coefficients, log_c_function
from .transform import (QuadratureConfig, heat_lambda_max, inverse_transform, invert_on,
                        multiply_and_invert, spectral_samples, transform)

DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class HeatQuery:
    """Time ``t > 0``, shift ``theta`` and order of the semigroup ``exp(-t(Delta - theta))``."""

    t: float
    params: JacobiParams
    theta: float = 0.0

    def __post_init__(self):
        if not (self.t > 0 and math.isfinite(self.t)):
            raise DomainError(f"t must be positive and finite, got {self.t}")
        if not math.isfinite(self.theta):
            raise DomainError("theta must be finite")


def heat_multiplier(q: HeatQuery, lam):
    """exp(-t(lambda^2 + rho^2) + t theta) (scalar or array, complex lambda allowed)."""
    lam = np.asarray(lam, dtype=complex)
    out = np.exp(-q.t * (lam * lam + q.params.rho ** 2 - q.theta))
    return complex(out) if out.ndim == 0 else out


def heat_quadrature(t: float, tol: float = DEFAULT_TOL, panels: int = 16,
                    points_per_panel: int = 16) -> QuadratureConfig:
    """Inversion rule sized for data damped by ``exp(-t lambda^2)``."""
    return QuadratureConfig(heat_lambda_max(t, tol), panels, points_per_panel, tol)


def heat_grid_extent(params: JacobiParams, t: float) -> float:
    """Radius carrying all but a negligible part of the mass of ``h_t dmu``.

    ``h_t(x) A(x)`` behaves like ``exp(-(x - 2 rho t)^2 / 4t)`` for large x.
    """
    return 2.0 * params.rho * t + 10.0 * math.sqrt(t) + 5.0


def heat_kernel_values(q: HeatQuery, x, quad: QuadratureConfig | None = None,
                       contour_from: float = 0.5) -> np.ndarray:
    """h_t(x) (times ``exp(t theta)``) at an array of ``x``.

    Nodes below ``contour_from`` use the real-line inversion with ``quad``;
    the others use the shifted-contour integral of :func:`log_heat_kernel`,
    which keeps full relative accuracy where ``h_t`` is tiny.  The weight
    ``A(x)`` grows like ``exp(2 rho x)``, so absolute accuracy alone would not
    give a usable ``h_t dmu`` at large ``x``.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x < 0):
        raise InputError("x must be nonnegative")
    out = np.empty(x.shape, dtype=complex)
    near = x < contour_from
    if np.any(near):
        quad = heat_quadrature(q.t) if quad is None else quad
        xn = x[near]
        g = spectral_samples(q.params, lambda lam: heat_multiplier(q, lam), quad,
                             float(xn.max()))
        out[near] = inverse_transform(q.params, g, xn, quad)
    if np.any(~near):
        logs = np.array([_log_kernel_contour(q.params, q.t, float(v)) for v in x[~near]])
        out[~near] = np.exp(logs + q.t * q.theta)
    return out


def heat_kernel(q: HeatQuery, nodes, quad: QuadratureConfig | None = None) -> RadialFunction:
    """h_t (times ``exp(t theta)``) sampled on a grid."""
    nodes = np.asarray(nodes, dtype=float)
    return RadialFunction(nodes, heat_kernel_values(q, nodes, quad))


def heat_evolve(q: HeatQuery, f: RadialFunction, quad: QuadratureConfig | None = None,
                nodes=None) -> RadialFunction:
    """exp(-t(Delta - theta)) f = exp(t theta) (h_t * f), computed spectrally."""
    quad = heat_quadrature(q.t) if quad is None else quad
    return multiply_and_invert(q.params, f, lambda lam: heat_multiplier(q, lam), quad, nodes)


# ---------------------------------------------------------------------------
# log-space pointwise kernel
# ---------------------------------------------------------------------------

def _hc_sums(params: JacobiParams, lam: np.ndarray, x: float) -> np.ndarray:
    """sum_k G_k(lambda) e^{-2kx} for an array of lambda (see hc_coefficients)."""
    il = 1j * lam
    rho = params.rho
    q = math.exp(-2.0 * x)
    cap = 64
    a_m = _hc_drift_coefficients(2 * params.alpha + 1, 2 * params.beta + 1, cap)
    mug = [il - rho]
    total = np.ones(lam.shape, dtype=complex)
    peak = 1.0
    quiet = 0
    k = 0
    while quiet < 4:
        k += 1
        if k > cap:
            cap *= 2
            a_m = _hc_drift_coefficients(2 * params.alpha + 1, 2 * params.beta + 1, cap)
        acc = np.zeros(lam.shape, dtype=complex)
        for m in range(1, k + 1):
            acc += a_m[m] * mug[k - m]
        g = -acc / (4.0 * k * (k - il))
        mug.append((il - rho - 2 * k) * g)
        term = g * q ** k
        total += term
        mag = float(np.abs(term).max())
        peak = max(peak, float(np.abs(total).max()))
        quiet = quiet + 1 if (k > 4 and mag <= 1e-17 * peak) else 0
        if k > 100_000:
            raise DomainError("expansion does not converge at this x; use x >= 0.5")
    return total


_GL16 = np.polynomial.legendre.leggauss(16)


def _log_kernel_contour(params: JacobiParams, t: float, x: float) -> float:
    eta = x / (2.0 * t)
    u_max = math.sqrt(45.0 / t) + 3.0
    panels = max(4, math.ceil(u_max / 0.5))
    br = np.linspace(0.0, u_max, panels + 1)
    s, w = _GL16
    half = 0.5 * np.diff(br)
    u = (0.5 * (br[1:] + br[:-1])[:, None] + half[:, None] * s).ravel()
    wu = (half[:, None] * w).ravel()
    lam = u + 1j * eta
    log_inv_c = -log_c_function(params, -lam)
    sums = _hc_sums(params, lam, x)
    integrand = np.exp(-t * u * u + log_inv_c) * sums
    value = 2.0 * float(np.sum(wu * integrand.real)) / (2.0 * math.pi)
    if not value > 0:
        raise DomainError(f"contour integral lost positivity at t={t}, x={x}")
    rho = params.rho
    return math.log(value) - x * x / (4.0 * t) - rho * x - rho * rho * t


def log_heat_kernel(params: JacobiParams, t: float, x: float,
                    contour_from: float = 0.5) -> float:
    """log h_t(x), accurate in relative terms for every ``x > 0``.

    Below ``contour_from`` the real-line inversion is used directly.
    """
    if not t > 0 or not x > 0:
        raise DomainError("log_heat_kernel needs t > 0 and x > 0")
    if x >= contour_from:
        return _log_kernel_contour(params, t, x)
    value = float(heat_kernel_values(HeatQuery(t, params), x)[0].real)
    if not value > 0:
        raise DomainError(f"heat kernel not positive at t={t}, x={x}")
    return math.log(value)


def log_sharp_profile(params: JacobiParams, t: float, x: float) -> float:
    """log of t^{-a-1} (1+t+x)^{a-1/2} (1+x) e^{-rho x - rho^2 t - x^2/4t}."""
    a, rho = params.alpha, params.rho
    return (-(a + 1) * math.log(t) + (a - 0.5) * math.log1p(t + x) + math.log1p(x)
            - rho * x - rho * rho * t - x * x / (4.0 * t))


def sharp_estimate_ratio(params: JacobiParams, t: float, x: float) -> float:
    """h_t(x) divided by the two-sided sharp profile, computed in log space."""
    return math.exp(log_heat_kernel(params, t, x) - log_sharp_profile(params, t, x))


def sharp_ratio_table(params: JacobiParams, ts, xs, contour_from: float = 0.5) -> np.ndarray:
    """:func:`sharp_estimate_ratio` on the product grid ``ts x xs`` (rows indexed by t).

    All abscissae below ``contour_from`` share one real-line inversion per t.
    """
    ts = np.asarray(ts, dtype=float)
    xs = np.asarray(xs, dtype=float)
    if np.any(ts <= 0) or np.any(xs <= 0):
        raise DomainError("sharp_ratio_table needs positive t and x")
    near = xs < contour_from
    out = np.empty((ts.size, xs.size))
    for i, t in enumerate(ts):
        logs = np.empty(xs.size)
        if np.any(near):
            vals = heat_kernel_values(HeatQuery(float(t), params), xs[near]).real
            if np.any(vals <= 0):
                raise DomainError(f"heat kernel not positive at t={t}")
            logs[near] = np.log(vals)
        for j in np.nonzero(~near)[0]:
            logs[j] = _log_kernel_contour(params, float(t), float(xs[j]))
        prof = np.array([log_sharp_profile(params, float(t), float(x)) for x in xs])
        out[i] = np.exp(logs - prof)
    return out


# ---------------------------------------------------------------------------
# maximal function
# ---------------------------------------------------------------------------

def default_t_grid() -> np.ndarray:
    return np.geomspace(1e-3, 10.0, 32)


def heat_maximal(params: JacobiParams, f: RadialFunction, t_grid=None,
                 quad: QuadratureConfig | None = None, tol: float = 1e-10) -> RadialFunction:
    """max over ``t_grid`` of |h_t * f| at the nodes of ``f``.

    This is a lower bound for the maximal function sup_t |h_t * f|.  One
    inversion rule, sized for the smallest t, serves every t.
    """
    ts = default_t_grid() if t_grid is None else np.asarray(t_grid, dtype=float)
    if ts.size == 0 or np.any(ts <= 0):
        raise InputError("t_grid must be a nonempty list of positive times")
    if quad is None:
        # spectral data may add the Plancherel growth to exp(-t lambda^2): size
        # the cut-off for a thousandth of the tolerance that is then enforced
        quad = QuadratureConfig(heat_lambda_max(float(ts.min()), tol * 1e-3), 16, 16, tol)
    fh = transform(params, f, quad)
    lam = fh.lambda_nodes
    best = np.zeros(len(f))
    for t in ts:
        g = fh.with_values(fh.values * heat_multiplier(HeatQuery(float(t), params), lam))
        u = invert_on(params, g, f.nodes, quad)
        best = np.maximum(best, np.abs(u.values))
    return f.with_values(best)


def weak_type_ratio(params: JacobiParams, f: RadialFunction, mf: RadialFunction,
                    floor: float = 1e-12) -> float:
    """sup_s s mu{|mf| > s} / ||f||_1 over the sampled levels of ``|mf|``.

    Levels below ``floor * max|mf|`` are skipped: there the samples are
    dominated by rounding, which the weight ``A`` would amplify.
    """
    norm1 = mu_integral(params, f.with_values(np.abs(f.values))).real
    levels = np.unique(np.abs(mf.values))
    levels = np.nextafter(levels, 0.0)
    levels = levels[levels > floor * levels.max()]
    d = distribution_function(params, mf, levels)
    return float(np.max(levels * d) / norm1)


__all__ = ["HeatQuery", "heat_multiplier", "heat_quadrature", "heat_grid_extent",
           "heat_kernel", "heat_kernel_values", "heat_evolve", "log_heat_kernel", "log_sharp_profile",
           "sharp_estimate_ratio", "sharp_ratio_table", "heat_maximal", "default_t_grid", "weak_type_ratio"]
