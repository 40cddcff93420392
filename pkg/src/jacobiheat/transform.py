"""Forward and inverse Jacobi transforms and the spectral product structure.

The forward transform integrates sampled data against ``phi_lambda`` with the
weights of :func:`jacobiheat.measure.mu_weights`.  The inverse transform

    f(x) = (1/2pi) int_0^inf g(lambda) phi_lambda(x) |c(lambda)|^(-2) dlambda

is truncated at ``lambda_max`` and evaluated with composite Gauss-Legendre
panels, refined geometrically towards ``lambda = 0`` where the Plancherel
density vanishes like ``lambda^(2 alpha + 1)``.  Convolution and translation
are carried out on the spectral side only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import AccuracyError, InputError
from .grid import RadialFunction, SpectralFunction
from .measure import mu_weights
from .special import JacobiParams, phi_values, plancherel_density


@dataclass(frozen=True)
class QuadratureConfig:
    """Composite Gauss-Legendre rule for the inversion integral.

    Attributes
    ----------
    lambda_max : float
        Truncation point of the lambda integral.
    panels : int
        Minimum number of uniform panels on ``[lambda_max/panels, lambda_max]``.
        It is raised to ``ceil(lambda_max * x_max / 12)`` when the requested
        abscissae make ``phi_lambda`` oscillate faster than that.  The first
        panel is further split at 1/8, 1/4 and 1/2 of its width.
    points_per_panel : int
        Gauss-Legendre nodes per panel.
    tol : float
        Admissible tail: the integral of ``|g| |c|^-2 / 2pi`` over the last
        panel, relative to the same integral over ``[0, lambda_max]``.
    """

    lambda_max: float = 40.0
    panels: int = 32
    points_per_panel: int = 16
    tol: float = 1e-8

    def __post_init__(self):
        if not (self.lambda_max > 0 and math.isfinite(self.lambda_max)):
            raise InputError(f"lambda_max must be positive and finite, got {self.lambda_max}")
        if self.panels < 1:
            raise InputError(f"panels must be >= 1, got {self.panels}")
        if self.points_per_panel < 2:
            raise InputError(f"points_per_panel must be >= 2, got {self.points_per_panel}")
        if not self.tol > 0:
            raise InputError(f"tol must be positive, got {self.tol}")

    def with_lambda_max(self, lambda_max: float) -> "QuadratureConfig":
        return QuadratureConfig(lambda_max, self.panels, self.points_per_panel, self.tol)


def heat_lambda_max(t: float, tol: float) -> float:
    """Cut-off beyond which ``exp(-t lambda^2)`` is below ``tol`` (plus margin)."""
    return math.sqrt(math.log(1.0 / tol) / t) + 5.0


@dataclass(frozen=True)
class LambdaRule:
    """Nodes and weights of the inversion rule, weights include ``|c|^-2 / 2pi``."""

    nodes: np.ndarray
    weights: np.ndarray
    last_panel: np.ndarray = field(repr=False)


def _breakpoints(lambda_max: float, panels: int) -> np.ndarray:
    b = lambda_max / panels
    head = b * np.array([0.0, 0.125, 0.25, 0.5])
    return np.concatenate([head, np.linspace(b, lambda_max, panels)])


@lru_cache(maxsize=64)
def _lambda_rule(alpha: float, beta: float, lambda_max: float, panels: int,
                 points: int) -> LambdaRule:
    params = JacobiParams(alpha, beta)
    t, w = np.polynomial.legendre.leggauss(points)
    br = _breakpoints(lambda_max, panels)
    half = 0.5 * np.diff(br)
    mid = 0.5 * (br[1:] + br[:-1])
    nodes = (mid[:, None] + half[:, None] * t).ravel()
    weights = (half[:, None] * w).ravel() * plancherel_density(params, nodes) / (2 * math.pi)
    last = np.zeros(nodes.size, dtype=bool)
    last[-points:] = True
    for arr in (nodes, weights, last):
        arr.setflags(write=False)
    return LambdaRule(nodes, weights, last)


def lambda_rule(params: JacobiParams, quad: QuadratureConfig,
                x_max: float = 0.0) -> LambdaRule:
    """The inversion rule for abscissae up to ``x_max``."""
    panels = max(quad.panels, math.ceil(quad.lambda_max * x_max / 12.0))
    return _lambda_rule(params.alpha, params.beta, float(quad.lambda_max), int(panels),
                        int(quad.points_per_panel))


@lru_cache(maxsize=6)
def _phi_matrix_cached(alpha: float, beta: float, lam_key: bytes, x_key: bytes) -> np.ndarray:
    params = JacobiParams(alpha, beta)
    lam = np.frombuffer(lam_key, dtype=complex)
    x = np.frombuffer(x_key, dtype=float)
    out = np.empty((lam.size, x.size), dtype=complex)
    for i, l in enumerate(lam):
        out[i] = phi_values(params, l, x)
    out.setflags(write=False)
    return out


def phi_matrix(params: JacobiParams, lam, x) -> np.ndarray:
    """``M[i, j] = phi_{lam_i}(x_j)``, cached on the exact node arrays."""
    lam = np.ascontiguousarray(np.atleast_1d(lam), dtype=complex)
    x = np.ascontiguousarray(np.atleast_1d(x), dtype=float)
    return _phi_matrix_cached(params.alpha, params.beta, lam.tobytes(), x.tobytes())


# ---------------------------------------------------------------------------
# forward transform
# ---------------------------------------------------------------------------

def forward_transform(params: JacobiParams, f: RadialFunction, lam):
    """f^(lambda) = int f phi_lambda dmu over the grid of ``f``.

    ``lam`` may be a scalar or an array of complex values.  For
    ``Im lambda != 0`` the integrand only decays if ``f`` does so faster than
    ``exp(-(rho - |Im lambda|) x)``; use :func:`forward_tail` to check.
    """
    scalar = np.ndim(lam) == 0
    lam_arr = np.atleast_1d(np.asarray(lam, dtype=complex))
    w = mu_weights(params, f.nodes) * f.values
    out = phi_matrix(params, lam_arr, f.nodes) @ w
    return complex(out[0]) if scalar else out


def forward_tail(params: JacobiParams, f: RadialFunction, lam: complex) -> float:
    """Relative size of the contribution of the outer tenth of the grid to f^(lambda).

    A value near 1 (or larger) means the integrand does not visibly decay
    and the transform at ``lam`` is not meaningful on this grid.
    """
    w = np.abs(mu_weights(params, f.nodes) * f.values * phi_values(params, lam, f.nodes))
    total = w.sum()
    if total == 0.0:
        return 0.0
    cut = f.nodes[0] + 0.9 * (f.x_max - f.nodes[0])
    return float(w[f.nodes > cut].sum() / total)


def transform(params: JacobiParams, f: RadialFunction, quad: QuadratureConfig,
              x_max: float | None = None) -> SpectralFunction:
    """f^ sampled on the nodes of the inversion rule (ready for inversion)."""
    rule = lambda_rule(params, quad, f.x_max if x_max is None else x_max)
    return SpectralFunction(rule.nodes, forward_transform(params, f, rule.nodes))


# ---------------------------------------------------------------------------
# inverse transform
# ---------------------------------------------------------------------------

def _check_rule(g: SpectralFunction, rule: LambdaRule) -> None:
    if g.lambda_nodes.shape != rule.nodes.shape or not np.allclose(
            g.lambda_nodes, rule.nodes, rtol=1e-14, atol=0.0):
        raise InputError("spectral samples do not sit on the quadrature nodes; "
                         "build them with transform() or spectral_samples()")


def spectral_samples(params: JacobiParams, fn, quad: QuadratureConfig,
                     x_max: float = 0.0) -> SpectralFunction:
    """Samples of a callable ``fn(lambda_array)`` on the inversion nodes."""
    rule = lambda_rule(params, quad, x_max)
    return SpectralFunction(rule.nodes, np.asarray(fn(rule.nodes), dtype=complex))


def tail_estimate(g: SpectralFunction, rule: LambdaRule) -> float:
    """Last-panel share of ``int |g| |c|^-2 dlambda`` (0 for g = 0)."""
    mass = np.abs(g.values) * rule.weights
    total = mass.sum()
    return 0.0 if total == 0.0 else float(mass[rule.last_panel].sum() / total)


def inverse_transform(params: JacobiParams, g: SpectralFunction, x,
                      quad: QuadratureConfig):
    """(1/2pi) int_0^lambda_max g phi_lambda(x) |c|^-2 dlambda at ``x`` (scalar or array).

    ``g`` must be sampled on the nodes of ``lambda_rule(params, quad, max(x))``.

    Raises
    ------
    AccuracyError
        If the last panel carries more than ``quad.tol`` of the absolute
        integral; ``partial`` holds the truncated value.
    """
    scalar = np.ndim(x) == 0
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xa < 0):
        raise InputError("x must be nonnegative")
    rule = lambda_rule(params, quad, float(xa.max()))
    _check_rule(g, rule)
    vals = (g.values * rule.weights) @ phi_matrix(params, rule.nodes, xa)
    est = tail_estimate(g, rule)
    result = complex(vals[0]) if scalar else vals
    if est > quad.tol:
        raise AccuracyError(
            f"inversion tail {est:.3g} exceeds tol {quad.tol:.3g}; increase lambda_max",
            partial=result, estimate=est)
    return result


def invert_on(params: JacobiParams, g: SpectralFunction, nodes,
              quad: QuadratureConfig) -> RadialFunction:
    """:func:`inverse_transform` on a grid, packaged as a RadialFunction."""
    nodes = np.asarray(nodes, dtype=float)
    return RadialFunction(nodes, inverse_transform(params, g, nodes, quad))


# ---------------------------------------------------------------------------
# spectral product structure
# ---------------------------------------------------------------------------

def _output_nodes(f: RadialFunction, g: RadialFunction | None = None) -> np.ndarray:
    if g is None or np.array_equal(f.nodes, g.nodes):
        return f.nodes
    return np.union1d(f.nodes, g.nodes)


def convolve(params: JacobiParams, f: RadialFunction, g: RadialFunction,
             quad: QuadratureConfig, nodes=None) -> RadialFunction:
    """f * g through (f * g)^ = f^ g^.

    The output lives on ``nodes`` (default: the common grid, or the union
    of both grids).
    """
    out = _output_nodes(f, g) if nodes is None else np.asarray(nodes, dtype=float)
    x_max = float(out.max())
    fh = transform(params, f, quad, x_max)
    gh = transform(params, g, quad, x_max)
    return invert_on(params, fh.with_values(fh.values * gh.values), out, quad)


def translate(params: JacobiParams, f: RadialFunction, x: float,
              quad: QuadratureConfig, nodes=None) -> RadialFunction:
    """Generalized translate tau_x f through (tau_x f)^(lambda) = phi_lambda(x) f^(lambda)."""
    if x < 0:
        raise InputError("translation distance must be nonnegative")
    out = f.nodes if nodes is None else np.asarray(nodes, dtype=float)
    fh = transform(params, f, quad, float(out.max()))
    shift = phi_matrix(params, fh.lambda_nodes, np.array([float(x)]))[:, 0]
    return invert_on(params, fh.with_values(fh.values * shift), out, quad)


def multiply_and_invert(params: JacobiParams, f: RadialFunction, multiplier,
                        quad: QuadratureConfig, nodes=None) -> RadialFunction:
    """Inverse transform of ``multiplier(lambda) * f^(lambda)`` on ``nodes``."""
    out = f.nodes if nodes is None else np.asarray(nodes, dtype=float)
    fh = transform(params, f, quad, float(out.max()))
    m = np.asarray(multiplier(fh.lambda_nodes), dtype=complex)
    return invert_on(params, fh.with_values(fh.values * m), out, quad)


def plancherel_norm(params: JacobiParams, g: SpectralFunction, quad: QuadratureConfig,
                    x_max: float = 0.0) -> float:
    """((1/2pi) int |g|^2 |c|^-2 dlambda)^(1/2) on the inversion rule."""
    rule = lambda_rule(params, quad, x_max)
    _check_rule(g, rule)
    return math.sqrt(float(np.sum(np.abs(g.values) ** 2 * rule.weights)))
