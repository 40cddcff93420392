"""Spectral regions and the chaos classification of the shifted heat semigroup.

On ``L^p(mu)`` every ``lambda`` in the open strip
``|Im lambda| < |1 - 2/p| rho`` gives an eigenfunction ``phi_lambda`` of the
Jacobi operator with eigenvalue ``lambda^2 + rho^2``.  For the shifted
generator ``Delta_p - theta`` these eigenvalues fill the region

    Omega_theta = {z : z + theta - rho^2 not real <= 0,
                   |Im sqrt(z + theta - rho^2)| < (1 - 2/p) rho},

(principal root, ``Re > 0``), which meets the imaginary axis exactly when
``theta`` exceeds the vertex ``theta_p = 4 rho^2 / (p p')`` of the parabola.
Purely imaginary eigenvalues ``2 pi i k / T`` give ``T``-periodic points.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, InputError, RegionError, SlitError
from .grid import RadialFunction
from .special import JacobiParams, apply_jacobi_operator, phi_values
from .transform import forward_transform

BOUNDARY_TOL = 1e-12


def _conjugate(p: float) -> float:
    return math.inf if p == 1.0 else p / (p - 1.0)


def theta_threshold(params: JacobiParams, p: float) -> float:
    """theta_p = 4 rho^2 / (p p'), the vertex of the parabolic region P_p."""
    if not p > 1 or not math.isfinite(p):
        raise DomainError(f"theta_p needs 1 < p < inf, got p={p}")
    # 4 rho^2 s (1 - s) with s = 1/p: symmetric under p <-> p' also in rounding
    s = 1.0 / p
    return 4.0 * params.rho ** 2 * s * (1.0 - s)


def theta_threshold_vertex_form(params: JacobiParams, p: float) -> float:
    """The same threshold written as rho^2 - rho^2 (2/p - 1)^2."""
    if not p > 1 or not math.isfinite(p):
        raise DomainError(f"theta_p needs 1 < p < inf, got p={p}")
    rho2 = params.rho ** 2
    return rho2 - rho2 * (2.0 / p - 1.0) ** 2


@dataclass(frozen=True)
class StripRegion:
    """S_p = {|Im lambda| <= |1 - 2/p| rho}; note S_p = S_p'."""

    p: float
    rho: float

    def __post_init__(self):
        if not 1.0 <= self.p < math.inf:
            raise DomainError(f"strip needs 1 <= p < inf, got {self.p}")
        if not self.rho > 0:
            raise DomainError(f"rho must be positive, got {self.rho}")

    @property
    def half_width(self) -> float:
        return abs(1.0 - 2.0 / self.p) * self.rho


def in_strip(region: StripRegion, lam: complex) -> str:
    """'interior', 'boundary' or 'outside' (comparison at tolerance 1e-12)."""
    gap = abs(complex(lam).imag) - region.half_width
    if abs(gap) <= BOUNDARY_TOL:
        return "boundary"
    return "interior" if gap < 0 else "outside"


@dataclass(frozen=True)
class ParabolicRegion:
    """P_p = {lambda^2 + rho^2 : lambda in the open strip S_p}."""

    p: float
    rho: float

    @property
    def strip(self) -> StripRegion:
        return StripRegion(self.p, self.rho)


def in_parabolic_region(region: ParabolicRegion, z: complex) -> bool:
    """Whether ``z`` lies in the open region P_p.

    ``z = lambda^2 + rho^2`` has the two preimages ``+-sqrt(z - rho^2)``, with
    equal ``|Im|``; both are tested so the cut of the square root along the
    negative axis cannot change the answer.
    """
    w = cmath.sqrt(complex(z) - region.rho ** 2)
    strip = region.strip
    return any(in_strip(strip, r) == "interior" for r in (w, -w))


class Verdict(str, Enum):
    CHAOTIC = "Chaotic"
    NO_PERIODIC_POINTS = "NoPeriodicPoints"
    NO_PERIODIC_POINTS_NOT_HYPERCYCLIC = "NoPeriodicPointsNotHypercyclic"
    UNCLASSIFIED = "Unclassified"


@dataclass(frozen=True)
class DynamicsVerdict:
    """Outcome of :func:`classify` for ``exp(-t(Delta_p - theta))``.

    ``theta_p`` and ``margin = theta - theta_p`` are ``nan`` when ``p`` is
    outside ``(1, inf)``.
    """

    verdict: Verdict
    theta_p: float
    margin: float
    reason: str = ""

    def __post_init__(self):
        if self.verdict is Verdict.CHAOTIC and not self.margin > 0:
            raise ValueError("a chaotic verdict requires theta > theta_p")


def classify(params: JacobiParams, p: float, theta: float) -> DynamicsVerdict:
    """Chaos classification covered by the known theorems; Unclassified elsewhere."""
    if not (1.0 < p < math.inf):
        return DynamicsVerdict(Verdict.UNCLASSIFIED, math.nan, math.nan,
                               "outside theorem hypotheses")
    tp = theta_threshold(params, p)
    margin = theta - tp
    if p > 2.0:
        if margin > 0:
            return DynamicsVerdict(Verdict.CHAOTIC, tp, margin,
                                   "p > 2 and theta > theta_p")
        return DynamicsVerdict(Verdict.UNCLASSIFIED, tp, margin,
                               "p > 2 with theta <= theta_p is not covered")
    if p == 2.0:
        return DynamicsVerdict(Verdict.NO_PERIODIC_POINTS, tp, margin,
                               "p = 2: no periodic points; hypercyclicity not decided")
    return DynamicsVerdict(Verdict.NO_PERIODIC_POINTS_NOT_HYPERCYCLIC, tp, margin,
                           "1 < p < 2")


def _check_p(p: float) -> None:
    if not (2.0 < p < math.inf):
        raise DomainError(f"eigenfunctions in Omega_theta need 2 < p < inf, got p={p}")


def spectral_parameter(params: JacobiParams, p: float, theta: float, z: complex) -> complex:
    """lambda = sqrt(z + theta - rho^2) with Re lambda > 0, for ``z`` in Omega_theta.

    Raises
    ------
    SlitError
        If ``z + theta - rho^2`` is real and ``<= 0``.
    RegionError
        If ``|Im lambda|`` reaches the strip half-width ``(1 - 2/p) rho``.
    """
    _check_p(p)
    w = complex(z) + theta - params.rho ** 2
    if abs(w.imag) <= BOUNDARY_TOL * max(1.0, abs(w)) and w.real <= 0:
        raise SlitError(f"z={z} lies on the excluded slit z <= rho^2 - theta = "
                        f"{params.rho ** 2 - theta:g}")
    lam = cmath.sqrt(w)
    half = (1.0 - 2.0 / p) * params.rho
    if abs(lam.imag) >= half - BOUNDARY_TOL:
        raise RegionError(f"z={z} is outside Omega_theta: |Im lambda| = {abs(lam.imag):.6g} "
                          f">= {half:.6g}")
    return lam


def in_omega(params: JacobiParams, p: float, theta: float, z: complex) -> bool:
    try:
        spectral_parameter(params, p, theta, z)
    except (SlitError, RegionError):
        return False
    return True


def eigenfunction_phi_z(params: JacobiParams, p: float, theta: float, z: complex,
                        nodes) -> tuple[complex, RadialFunction]:
    """(lambda, phi_lambda sampled at ``nodes``) with (Delta - theta) phi = z phi."""
    lam = spectral_parameter(params, p, theta, z)
    nodes = np.asarray(nodes, dtype=float)
    return lam, RadialFunction(nodes, phi_values(params, lam, nodes))


def periodic_eigenvalues(params: JacobiParams, p: float, theta: float,
                         period: float) -> list[complex]:
    """All z = 2 pi i k / period, k != 0, inside Omega_theta (empty if theta <= theta_p).

    Membership is decided by the principal-root test of
    :func:`spectral_parameter`.  ``|Im sqrt(iy + c)|`` increases with ``|y|``
    for real ``c``, so the admissible ``k`` form a block around 0 that is
    scanned outwards until the first failure.
    """
    _check_p(p)
    if not period > 0:
        raise DomainError("period must be positive")
    if theta <= theta_threshold(params, p):
        return []
    step = 2.0 * math.pi / period
    out = []
    for sign in (1, -1):
        k = 1
        while in_omega(params, p, theta, 1j * sign * k * step):
            out.append(complex(0.0, sign * k * step))
            k += 1
    return sorted(out, key=lambda z: z.imag)


def dsw_pairing(params: JacobiParams, p: float, theta: float, f: RadialFunction,
                z: complex) -> complex:
    """F_f(z) = <f, phi_z> = f^(sqrt(z + theta - rho^2))."""
    lam = spectral_parameter(params, p, theta, z)
    return forward_transform(params, f, lam)


def verify_eigen_residual(params: JacobiParams, theta: float, z: complex,
                          phi: RadialFunction, window=(0.1, 5.0)) -> float:
    """sup |(Delta - theta) phi - z phi| / sup |phi| over the nodes inside ``window``."""
    inside = (phi.nodes >= window[0]) & (phi.nodes <= window[1])
    if inside.sum() < 16:
        raise InputError("grid too coarse: fewer than 16 nodes in the residual window")
    lap = apply_jacobi_operator(params, phi)
    keep = inside[2:-2]
    res = lap.values - (theta + complex(z)) * phi.values[2:-2]
    scale = float(np.abs(phi.values[2:-2][keep]).max())
    if scale == 0.0:
        return 0.0
    return float(np.abs(res[keep]).max() / scale)
