"""Sampled functions on the half-line and on the spectral half-axis."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InputError

SPACINGS = ("geometric", "uniform", "hybrid")


def make_grid(x_min: float = 1e-3, x_max: float = 20.0, n: int = 512,
              spacing: str = "geometric") -> np.ndarray:
    """Strictly increasing nodes in ``[x_min, x_max]``.

    ``geometric`` resolves the origin, ``uniform`` the tails; ``hybrid`` is
    geometric until the step reaches the uniform step of the remaining
    interval and uniform afterwards, which suits oscillatory integrands
    that also need the ``x**(2*alpha+1)`` behaviour near zero.
    """
    if n < 2:
        raise InputError(f"grid needs at least 2 nodes, got n={n}")
    if not (0.0 < x_min < x_max) or not np.isfinite(x_max):
        raise InputError(f"need 0 < x_min < x_max < inf, got ({x_min}, {x_max})")
    if spacing == "geometric":
        return np.geomspace(x_min, x_max, n)
    if spacing == "uniform":
        return np.linspace(x_min, x_max, n)
    if spacing == "hybrid":
        # smallest geometric ratio r for which x_min*r^k, switched to uniform
        # once the step x*(r-1) exceeds the uniform step, fits in n nodes
        lo, hi = 1.0 + 1e-12, (x_max / x_min) ** (1.0 / (n - 1))
        for _ in range(200):
            r = 0.5 * (lo + hi)
            nodes = _hybrid_nodes(x_min, x_max, n, r)
            if nodes is None:
                lo = r
            else:
                hi = r
        nodes = _hybrid_nodes(x_min, x_max, n, hi)
        assert nodes is not None
        return nodes
    raise InputError(f"unknown spacing {spacing!r}; expected one of {SPACINGS}")


def _hybrid_nodes(x_min, x_max, n, r):
    k = np.arange(n - 1)
    geo = x_min * r ** k
    remaining = n - 1 - k
    switch = np.nonzero(geo * (r - 1.0) >= (x_max - geo) / remaining)[0]
    if switch.size == 0:
        # never switched: pure geometric must already reach x_max
        if x_min * r ** (n - 1) < x_max * (1 - 1e-12):
            return None
        out = x_min * r ** np.arange(n)
        out[-1] = x_max
        return out
    m = int(switch[0])
    tail = np.linspace(geo[m], x_max, n - m)[1:]
    return np.concatenate([geo[: m + 1], tail])


@dataclass(frozen=True)
class RadialFunction:
    """Complex samples of a function on a strictly increasing grid in (0, inf)."""

    nodes: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        nodes = np.ascontiguousarray(self.nodes, dtype=float)
        values = np.ascontiguousarray(self.values, dtype=complex)
        if nodes.ndim != 1 or nodes.size < 2:
            raise InputError("RadialFunction needs a 1-d grid with at least 2 nodes")
        if values.shape != nodes.shape:
            raise InputError(f"values shape {values.shape} != nodes shape {nodes.shape}")
        if nodes[0] <= 0.0 or np.any(np.diff(nodes) <= 0.0):
            raise InputError("nodes must be strictly increasing and positive")
        if not np.all(np.isfinite(values)):
            raise InputError("values must be finite")
        nodes.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_callable(cls, fn: Callable[[np.ndarray], np.ndarray],
                      nodes: np.ndarray) -> "RadialFunction":
        nodes = np.asarray(nodes, dtype=float)
        return cls(nodes, np.asarray(fn(nodes), dtype=complex) * np.ones_like(nodes))

    @property
    def x_max(self) -> float:
        return float(self.nodes[-1])

    def __len__(self) -> int:
        return self.nodes.size

    def with_values(self, values) -> "RadialFunction":
        return RadialFunction(self.nodes, values)

    def __mul__(self, other) -> "RadialFunction":
        if isinstance(other, RadialFunction):
            _check_same_grid(self, other)
            return self.with_values(self.values * other.values)
        return self.with_values(self.values * other)

    __rmul__ = __mul__

    def __add__(self, other: "RadialFunction") -> "RadialFunction":
        _check_same_grid(self, other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "RadialFunction") -> "RadialFunction":
        _check_same_grid(self, other)
        return self.with_values(self.values - other.values)

    def abs(self) -> np.ndarray:
        return np.abs(self.values)

    def restrict(self, x_max: float) -> "RadialFunction":
        """Truncation to the nodes ``<= x_max``."""
        keep = self.nodes <= x_max * (1 + 1e-14)
        return RadialFunction(self.nodes[keep], self.values[keep])


def _check_same_grid(f: RadialFunction, g: RadialFunction) -> None:
    if f.nodes.shape != g.nodes.shape or not np.array_equal(f.nodes, g.nodes):
        raise InputError("functions live on different grids")


def indicator(r: float, nodes: np.ndarray, jump: float = 1e-10) -> RadialFunction:
    """Samples of the indicator of ``(0, r]``.

    The jump is represented by two nodes ``r`` and ``r*(1+jump)``, so a
    piecewise-linear reading of the samples differs from the true indicator
    only on an interval of relative width ``jump``.
    """
    nodes = np.asarray(nodes, dtype=float)
    if not nodes[0] < r < nodes[-1]:
        raise InputError(f"r={r} must lie strictly inside the grid")
    r_plus = r * (1.0 + jump)
    keep = (np.abs(nodes - r) > 2 * jump * r) & (np.abs(nodes - r_plus) > 2 * jump * r)
    xs = np.union1d(nodes[keep], [r, r_plus])
    return RadialFunction(xs, (xs <= r).astype(complex))


@dataclass(frozen=True)
class SpectralFunction:
    """Samples of a transform on increasing nodes in [0, inf)."""

    lambda_nodes: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        lam = np.ascontiguousarray(self.lambda_nodes, dtype=float)
        values = np.ascontiguousarray(self.values, dtype=complex)
        if lam.ndim != 1 or lam.size < 1:
            raise InputError("SpectralFunction needs a non-empty 1-d node array")
        if values.shape != lam.shape:
            raise InputError("values and lambda_nodes differ in shape")
        if lam[0] < 0.0 or np.any(np.diff(lam) <= 0.0):
            raise InputError("lambda_nodes must be increasing in [0, inf)")
        if not np.all(np.isfinite(values)):
            raise InputError("values must be finite")
        lam.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "lambda_nodes", lam)
        object.__setattr__(self, "values", values)

    @property
    def lambda_max(self) -> float:
        return float(self.lambda_nodes[-1])

    def with_values(self, values) -> "SpectralFunction":
        return SpectralFunction(self.lambda_nodes, values)
