"""Gamma, Gauss hypergeometric and Jacobi functions, c-function.

Jacobi functions are evaluated in one of three regimes chosen per node:

``series``
    the hypergeometric series in ``z = -sinh(x)**2`` (small ``x``);
``transformed-series``
    the Pfaff-transformed series in ``tanh(x)**2`` (moderate ``x``);
``asymptotic``
    the expansion ``phi = c(l) Phi_l + c(-l) Phi_{-l}`` with
    ``Phi_l(x) = exp((i l - rho) x) * sum_k G_k(l) exp(-2 k x)``.  The
    coefficients ``G_k`` come from substituting the expansion into the
    Jacobi ODE (see :func:`hc_coefficients`).  The series converges for every
    ``x > 0`` and, unlike both hypergeometric series, does not suffer from
    cancellation when ``|l|`` is large.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import AccuracyError, InputError, ParameterError, PoleError, RangeError
from .grid import RadialFunction

POLE_TOL = 1e-12
EPS = np.finfo(float).eps
_LOG_MAX = 700.0

# Lanczos approximation, g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS_P = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class JacobiParams:
    """Order ``(alpha, beta)`` of the Jacobi analysis; ``rho = alpha + beta + 1``."""

    alpha: float
    beta: float

    def __post_init__(self):
        a, b = float(self.alpha), float(self.beta)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ParameterError("alpha and beta must be finite")
        if not a > -0.5:
            raise ParameterError(f"alpha must satisfy alpha > -1/2, got alpha={a}")
        if not b >= -0.5:
            raise ParameterError(f"beta must satisfy beta >= -1/2, got beta={b}")
        if not a >= b:
            raise ParameterError(f"need alpha >= beta, got alpha={a}, beta={b}")
        if not a + b + 1.0 > 0.0:
            raise ParameterError(f"rho = alpha + beta + 1 must be positive, got {a + b + 1}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @property
    def rho(self) -> float:
        return self.alpha + self.beta + 1.0


@dataclass(frozen=True)
class EvalRegimeReport:
    regime: str
    terms_used: int
    est_error: float


# ---------------------------------------------------------------------------
# gamma
# ---------------------------------------------------------------------------

def _pole_mask(z: np.ndarray) -> np.ndarray:
    re = z.real
    return (np.abs(z.imag) <= POLE_TOL) & (re <= POLE_TOL) & (np.abs(re - np.round(re)) <= POLE_TOL)


def _loggamma_right(z: np.ndarray) -> np.ndarray:
    """Lanczos log-gamma for Re z >= 1/2."""
    zm = z - 1.0
    acc = np.full(z.shape, _LANCZOS_P[0], dtype=complex)
    for i in range(1, _LANCZOS_P.size):
        acc = acc + _LANCZOS_P[i] / (zm + i)
    t = zm + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (zm + 0.5) * np.log(t) - t + np.log(acc)


def _log_sin_pi(z: np.ndarray) -> np.ndarray:
    """A logarithm of sin(pi z), safe for large |Im z| (branch irrelevant)."""
    z = z - 2.0 * np.round(z.real / 2.0)
    out = np.empty(z.shape, dtype=complex)
    small = np.abs(z.imag) < 1.0
    out[small] = np.log(np.sin(np.pi * z[small]) + 0j)
    up = ~small & (z.imag > 0)
    zu = z[up]
    out[up] = -1j * np.pi * zu + np.log(0.5j) + np.log1p(-np.exp(2j * np.pi * zu))
    lo = ~small & (z.imag < 0)
    zl = z[lo]
    out[lo] = 1j * np.pi * zl + np.log(-0.5j) + np.log1p(-np.exp(-2j * np.pi * zl))
    return out


def loggamma(z):
    """A logarithm of Gamma(z) for complex ``z`` (scalar or array).

    The imaginary part is not reduced to the principal branch; only
    ``exp(loggamma(z))`` is meaningful.

    Raises
    ------
    PoleError
        If any ``z`` lies within ``POLE_TOL`` of a nonpositive integer.
    """
    zz = np.asarray(z, dtype=complex)
    scalar = zz.ndim == 0
    zz = np.atleast_1d(zz)
    poles = _pole_mask(zz)
    if np.any(poles):
        loc = complex(np.round(zz[poles][0].real))
        raise PoleError(f"Gamma has a pole at z={loc.real:g}", loc)
    out = np.empty(zz.shape, dtype=complex)
    right = zz.real >= 0.5
    out[right] = _loggamma_right(zz[right])
    left = ~right
    if np.any(left):
        zl = zz[left]
        out[left] = math.log(math.pi) - _log_sin_pi(zl) - _loggamma_right(1.0 - zl)
    return complex(out[0]) if scalar else out


def complex_gamma(z: complex) -> complex:
    """Gamma(z) for complex ``z`` off the poles {0, -1, -2, ...}."""
    lg = loggamma(complex(z))
    if lg.real > _LOG_MAX:
        raise RangeError(f"Gamma({z}) overflows", lg.real)
    value = cmath.exp(lg)
    if isinstance(z, (int, float)) or (isinstance(z, complex) and z.imag == 0):
        return complex(value.real, 0.0)
    return value


# ---------------------------------------------------------------------------
# power series machinery
# ---------------------------------------------------------------------------

_SERIES_TOL = 1e-17
_MAX_TERMS = 4_000_000


def _hyp_coefficients(a: complex, b: complex, c: complex, arg_max: float):
    """Coefficients (a)_n (b)_n / ((c)_n n!) until the tail at ``arg_max`` is negligible.

    Returns the coefficient array and the peak term magnitude.
    """
    chunks = [np.ones(1, dtype=complex)]
    last = 1.0 + 0j
    peak = 1.0
    n0 = 0
    size = 64
    while True:
        n = np.arange(n0, n0 + size, dtype=float)
        ratios = (a + n) * (b + n) / ((c + n) * (n + 1.0))
        block = last * np.cumprod(ratios)
        chunks.append(block)
        mags = np.abs(block) * arg_max ** (n + 1.0)
        peak = max(peak, float(mags.max(initial=0.0)))
        last = block[-1]
        n0 += size
        tail_ratio = abs(ratios[-1]) * arg_max
        if last == 0 or (tail_ratio < 1.0
                         and mags[-1] / (1.0 - tail_ratio) <= _SERIES_TOL * peak):
            break
        if n0 >= _MAX_TERMS:
            coeffs = np.concatenate(chunks)
            raise AccuracyError("hypergeometric series did not converge",
                                partial=coeffs, estimate=float(mags[-1]))
        size = min(2 * size, 1 << 16)
    coeffs = np.concatenate(chunks)
    return coeffs, peak


def _sum_powers(coeffs: np.ndarray, args: np.ndarray) -> np.ndarray:
    """sum_n coeffs[n] * args**n for real ``args`` (fixed summation order)."""
    args = np.asarray(args, dtype=float)
    if coeffs.size <= 4096:
        out = np.full(args.shape, coeffs[-1], dtype=complex)
        for cn in coeffs[-2::-1]:
            out = out * args + cn
        return out
    out = np.zeros(args.shape, dtype=complex)
    step = max(1, min(coeffs.size, 4_000_000 // max(args.size, 1)))
    for start in range(0, coeffs.size, step):
        n = np.arange(start, min(start + step, coeffs.size), dtype=float)
        out += np.power(args[:, None], n[None, :]) @ coeffs[start:start + n.size]
    return out


def _check_c(c: complex) -> None:
    if _pole_mask(np.array([c]))[0]:
        raise ParameterError(f"2F1 undefined: c={c} is a nonpositive integer")


def _series(a, b, c, z: np.ndarray):
    coeffs, peak = _hyp_coefficients(a, b, c, float(np.max(np.abs(z), initial=0.0)))
    return _sum_powers(coeffs, z), coeffs.size, peak


def _pfaff(a, b, c, z: np.ndarray, log1mz: np.ndarray):
    """2F1(a,b;c;z) = (1-z)^(-a) 2F1(a, c-b; c; z/(z-1)); ``log1mz = log(1-z)``."""
    w = z / (z - 1.0)
    coeffs, peak = _hyp_coefficients(a, c - b, c, float(np.max(w, initial=0.0)))
    return np.exp(-a * log1mz) * _sum_powers(coeffs, w), coeffs.size, peak


def _inverse_z(a, b, c, z: np.ndarray):
    """Connection formula to 1/z for z < -1 (requires a - b not an integer)."""
    out = np.zeros(z.shape, dtype=complex)
    log_mz = np.log(-z)
    u = 1.0 / z
    terms = 0
    for p, q in ((a, b), (b, a)):
        pref = loggamma(c) + loggamma(q - p) - loggamma(q) - loggamma(c - p)
        coeffs, _ = _hyp_coefficients(p, p - c + 1.0, p - q + 1.0, float(np.max(np.abs(u))))
        terms += coeffs.size
        out += np.exp(pref - p * log_mz) * _sum_powers(coeffs, u)
    return out, terms


def _circle_mean(fn, center: complex, radius: float = 0.1, points: int = 32):
    """Mean of ``fn`` over a circle; equals fn(center) up to O(radius**points)."""
    acc = None
    for k in range(points):
        v = fn(center + radius * cmath.exp(2j * math.pi * (k + 0.5) / points))
        acc = v if acc is None else acc + v
    return acc / points


def hyp2f1(a: complex, b: complex, c: complex, z):
    """Gauss hypergeometric function 2F1(a, b; c; z) for real ``z <= 0``.

    Parameters matching a Jacobi family (``a + b`` and ``c`` real and the
    implied order admissible) are routed through :func:`phi_values`, which
    stays accurate for large ``|a - b|``.  Otherwise the series is used for
    ``|z| <= 1/2``, the Pfaff transformation for ``-3 <= z < -1/2`` and the
    ``1/z`` connection formula beyond.

    Raises
    ------
    ParameterError
        If ``c`` is a nonpositive integer.
    DomainError
        If ``z > 0``.
    """
    a, b, c = complex(a), complex(b), complex(c)
    _check_c(c)
    zz = np.atleast_1d(np.asarray(z, dtype=float))
    scalar = np.ndim(z) == 0
    if np.any(zz > 0):
        raise ParameterError("hyp2f1 is implemented for real z <= 0 only")

    params = _jacobi_family(a, b, c)
    if params is not None:
        lam = 1j * (a - b)
        x = np.arcsinh(np.sqrt(-zz))
        out = phi_values(params, lam, x)
        return complex(out[0]) if scalar else out

    out = np.empty(zz.shape, dtype=complex)
    near = np.abs(zz) <= 0.5
    mid = ~near & (zz >= -3.0)
    far = zz < -3.0
    if np.any(near):
        out[near] = _series(a, b, c, zz[near])[0]
    if np.any(mid):
        out[mid] = _pfaff(a, b, c, zz[mid], np.log1p(-zz[mid]))[0]
    if np.any(far):
        d = a - b
        if abs(d - round(d.real)) < 0.05:
            out[far] = _circle_mean(lambda bb: _inverse_z(a, bb, c, zz[far])[0], b)
        else:
            out[far] = _inverse_z(a, b, c, zz[far])[0]
    return complex(out[0]) if scalar else out


def _jacobi_family(a: complex, b: complex, c: complex):
    s = a + b
    if abs(s.imag) > 1e-15 or abs(c.imag) > 1e-15:
        return None
    # a, b must be conjugate-symmetric around rho/2 up to the rotation by lambda:
    # a = (rho - i l)/2, b = (rho + i l)/2 for some complex l, always solvable.
    alpha = c.real - 1.0
    beta = s.real - alpha - 1.0
    try:
        return JacobiParams(alpha, beta)
    except ParameterError:
        return None


# ---------------------------------------------------------------------------
# c-function and Plancherel density
# ---------------------------------------------------------------------------

def log_c_function(params: JacobiParams, lam):
    """log c(lambda) (arrays allowed); ``-inf`` real part where c vanishes.

    Raises
    ------
    PoleError
        At ``i*lambda`` in {0, -1, -2, ...}.
    """
    lam = np.asarray(lam, dtype=complex)
    scalar = lam.ndim == 0
    lam = np.atleast_1d(lam)
    il = 1j * lam
    alpha, beta, rho = params.alpha, params.beta, params.rho
    out = (rho - il) * math.log(2.0) + math.lgamma(alpha + 1.0) + loggamma(il)
    for arg in ((rho + il) / 2.0, (alpha - beta + 1.0 + il) / 2.0):
        zero = _pole_mask(arg)
        safe = np.where(zero, 1.0, arg)
        out = out - loggamma(safe)
        out = np.where(zero, -np.inf + 0j, out)
    return complex(out[0]) if scalar else out


def c_function(params: JacobiParams, lam: complex) -> complex:
    """c(l) = 2^(rho - i l) G(alpha+1) G(i l) / (G((rho + i l)/2) G((rho + i l)/2 - beta)).

    Returns exactly ``0j`` where a denominator gamma has a pole.

    Raises
    ------
    PoleError
        If ``i*lambda`` is a nonpositive integer (e.g. ``lambda = 0``).
    """
    lam = complex(lam)
    il = 1j * lam
    n = round(il.real)
    if abs(il - n) <= POLE_TOL and n <= 0:
        return _c_at_gamma_pole(params, -n)
    lc = log_c_function(params, lam)
    if lc.real == -np.inf:
        return 0j
    if lc.real > _LOG_MAX:
        raise RangeError(f"c({lam}) overflows", lc.real)
    return cmath.exp(lc)


def _c_at_gamma_pole(params: JacobiParams, n: int) -> complex:
    """c at i*lambda = -n, where Gamma(i lambda) has a pole.

    The value is finite when one denominator gamma has a pole at the same
    point (ratio of residues), zero when both do, and a pole otherwise.
    """
    alpha, beta, rho = params.alpha, params.beta, params.rho
    # Gamma(-n + e) ~ (-1)^n / (n! e);  Gamma(-m + e/2) ~ 2 (-1)^m / (m! e)
    hits = []
    for shift in (rho, alpha - beta + 1.0):
        half = (shift - n) / 2.0
        if abs(half - round(half)) <= POLE_TOL and round(half) <= 0:
            hits.append(-round(half))
    if not hits:
        raise PoleError(f"c(lambda) has a pole at lambda = {complex(0.0, n)}", complex(0.0, n))
    if len(hits) == 2:
        return 0j
    m = hits[0]
    other = (alpha - beta + 1.0 - n) / 2.0 if abs((rho - n) / 2.0 + m) <= POLE_TOL \
        else (rho - n) / 2.0
    ratio = (-1) ** (n - m) * math.factorial(m) / (2.0 * math.factorial(n))
    return complex(2.0 ** (rho + n) * math.gamma(alpha + 1.0) * ratio / math.gamma(other))


def plancherel_density(params: JacobiParams, lam):
    """|c(lambda)|^(-2) for real lambda; 0 at lambda = 0 (scalar or array)."""
    lam = np.asarray(lam, dtype=float)
    scalar = lam.ndim == 0
    lam = np.abs(np.atleast_1d(lam))
    out = np.zeros(lam.shape)
    pos = lam > 0
    if np.any(pos):
        out[pos] = np.exp(-2.0 * log_c_function(params, lam[pos]).real)
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# Jacobi functions
# ---------------------------------------------------------------------------

def drift(params: JacobiParams, x):
    """Logarithmic derivative A'(x)/A(x) = (2a+1) coth x + (2b+1) tanh x."""
    x = np.asarray(x, dtype=float)
    return (2 * params.alpha + 1) / np.tanh(x) + (2 * params.beta + 1) * np.tanh(x)


def _hc_drift_coefficients(two_a1: float, two_b1: float, size: int) -> np.ndarray:
    m = np.arange(size + 1)
    a_m = 2 * two_a1 + 2 * two_b1 * np.where(m % 2 == 0, 1.0, -1.0)
    a_m[0] = 0.0
    return a_m


def hc_coefficients(params: JacobiParams, lam: complex, q_max: float) -> np.ndarray:
    """Coefficients G_k of Phi_lambda(x) = e^{(i l - rho) x} sum_k G_k e^{-2kx}.

    Writing A'/A = 2 rho + sum_{m>=1} a_m e^{-2mx} with
    a_m = 2(2 alpha+1) + 2(2 beta+1)(-1)^m and mu_k = i l - rho - 2k, the
    ODE gives G_0 = 1 and

        4k(k - i l) G_k = -sum_{m=1}^{k} a_m mu_{k-m} G_{k-m}.

    Terms are generated until ``|G_k| q_max**k`` is negligible.
    """
    il = 1j * complex(lam)
    rho = params.rho
    two_a1, two_b1 = 2 * params.alpha + 1, 2 * params.beta + 1
    cap = 256
    gam = np.zeros(cap, dtype=complex)
    mug = np.zeros(cap, dtype=complex)  # mu_k G_k
    gam[0] = 1.0
    mug[0] = il - rho
    a_m = _hc_drift_coefficients(two_a1, two_b1, cap)
    peak = 1.0
    quiet = 0
    k = 0
    while quiet < 4:
        k += 1
        if k >= cap:
            cap *= 2
            gam = np.resize(gam, cap)
            mug = np.resize(mug, cap)
            a_m = _hc_drift_coefficients(two_a1, two_b1, cap)
        g = -np.dot(a_m[1:k + 1], mug[k - 1::-1]) / (4.0 * k * (k - il))
        gam[k] = g
        mug[k] = (il - rho - 2 * k) * g
        mag = abs(g) * q_max ** k
        peak = max(peak, mag)
        quiet = quiet + 1 if (k > 4 and mag <= _SERIES_TOL * peak) else 0
        if k >= _MAX_TERMS:
            raise AccuracyError("Harish-Chandra expansion did not converge",
                                partial=gam[:k + 1], estimate=mag)
    return gam[:k + 1].copy()


def _hc_phi(params: JacobiParams, lam: complex, x: np.ndarray):
    """phi via c(l) Phi_l + c(-l) Phi_{-l}; ``lam`` must be non-degenerate."""
    q = np.exp(-2.0 * x)
    q_max = float(q.max())
    out = np.zeros(x.shape, dtype=complex)
    mag = np.zeros(x.shape)
    terms = 0
    for sgn in (1.0, -1.0):
        lm = sgn * lam
        lc = log_c_function(params, lm)
        if lc.real == -np.inf:
            continue
        gam = hc_coefficients(params, lm, q_max)
        terms += gam.size
        expo = lc + (1j * lm - params.rho) * x
        big = expo.real.max()
        if big > _LOG_MAX:
            raise RangeError(f"phi_lambda overflows for lambda={lam}", float(big))
        part = np.exp(expo) * _sum_powers(gam, q)
        out += part
        mag += np.abs(part)
    return out, terms, mag


def _degenerate(lam: complex) -> bool:
    il = 1j * lam
    return abs(il - round(il.real)) < 0.05


def _choose_regimes(lam: complex, x: np.ndarray, x_switch: float):
    s = np.sinh(x)
    L = abs(lam)
    series = (s * s <= 0.5) & (L * s <= 8.0)
    pfaff = ~series & (x <= x_switch) & (L * np.tanh(x) <= 8.0)
    hc = ~series & ~pfaff
    return series, pfaff, hc


REGIMES = ("series", "transformed-series", "asymptotic")


def phi_values(params: JacobiParams, lam: complex, x, *, x_switch: float = 2.0,
               regime: str | None = None, report: bool = False):
    """Jacobi function phi_lambda at an array of ``x >= 0``.

    Parameters
    ----------
    params : JacobiParams
    lam : complex
        Spectral parameter.
    x : array_like
        Nonnegative abscissae.
    x_switch : float
        Largest ``x`` handled by the Pfaff-transformed series.
    regime : {None, 'series', 'transformed-series', 'asymptotic'}
        Force one regime for every node (diagnostics and cross-validation).
    report : bool
        Also return one :class:`EvalRegimeReport` per regime used.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x < 0) or not np.all(np.isfinite(x)):
        raise InputError("x must be finite and nonnegative")
    lam = complex(lam)
    if not (math.isfinite(lam.real) and math.isfinite(lam.imag)):
        raise InputError("lambda must be finite")
    # phi is even in lambda; Im lam <= 0 keeps the Pfaff terms from growing
    if lam.imag > 0 or (lam.imag == 0 and lam.real < 0):
        lam = -lam
    rho = params.rho
    growth = (abs(lam.imag) - rho) * float(x.max(initial=0.0))
    if growth > _LOG_MAX:
        raise RangeError(f"phi_lambda(x) overflows: exponent {growth:.1f}", growth)

    a = 0.5 * (rho - 1j * lam)
    b = 0.5 * (rho + 1j * lam)
    c = params.alpha + 1.0
    if regime is None:
        masks = _choose_regimes(lam, x, x_switch)
    else:
        if regime not in REGIMES:
            raise InputError(f"unknown regime {regime!r}")
        masks = tuple(np.full(x.shape, r == regime) for r in REGIMES)
    out = np.empty(x.shape, dtype=complex)
    reports = []
    sel, pf, hc = masks
    if np.any(sel):
        z = -np.sinh(x[sel]) ** 2
        vals, n, peak = _series(a, b, c, z)
        out[sel] = vals
        reports.append(EvalRegimeReport("series", n, float(EPS * peak * 4)))
    if np.any(pf):
        xs = x[pf]
        z = -np.sinh(xs) ** 2
        log1mz = 2.0 * (np.logaddexp(xs, -xs) - math.log(2.0))
        vals, n, peak = _pfaff(a, b, c, z, log1mz)
        out[pf] = vals
        reports.append(EvalRegimeReport("transformed-series", n, float(EPS * peak * 4)))
    if np.any(hc):
        xs = x[hc]
        if np.any(xs == 0):
            raise InputError("asymptotic regime needs x > 0")
        if _degenerate(lam):
            vals = _circle_mean(lambda l: _hc_phi(params, l, xs)[0], lam)
            n, cond = 32, 20.0
        else:
            vals, n, mag = _hc_phi(params, lam, xs)
            cond = float(np.max(mag / np.maximum(np.abs(vals), 1e-300)))
        out[hc] = vals
        reports.append(EvalRegimeReport("asymptotic", int(n), float(EPS * 8 * cond)))
    # real parameters a, b (lam real or imaginary) give a real function
    if lam.imag == 0 or lam.real == 0:
        out = out.real + 0j
    if report:
        return out, reports
    return out


def jacobi_phi(params: JacobiParams, lam: complex, x: float, report: bool = False, **kw):
    """phi_lambda(x) = 2F1((rho - i l)/2, (rho + i l)/2; alpha + 1; -sinh(x)^2).

    With ``report=True`` returns ``(value, EvalRegimeReport)``.
    """
    if x < 0:
        raise InputError("x must be nonnegative")
    if x == 0:
        value = 1.0 + 0j
        rep = EvalRegimeReport("series", 1, 0.0)
    else:
        vals, reps = phi_values(params, lam, [x], report=True, **kw)
        value, rep = complex(vals[0]), reps[0]
    return (value, rep) if report else value


# ---------------------------------------------------------------------------
# the Jacobi operator
# ---------------------------------------------------------------------------

def _fd_weights(nodes: np.ndarray, center: int, order: int) -> np.ndarray:
    """Fornberg finite-difference weights for the derivative ``order`` at nodes[center]."""
    z = nodes[center]
    x = nodes
    n = x.size
    c = np.zeros((n, order + 1))
    c1, c4 = 1.0, x[0] - z
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, order)
        c2, c5 = 1.0, c4
        c4 = x[i] - z
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, order]


def derivative_weights(nodes: np.ndarray):
    """Five-point first/second derivative weights at interior nodes 2..n-3."""
    n = nodes.size
    d1 = np.empty((n - 4, 5))
    d2 = np.empty((n - 4, 5))
    for i in range(2, n - 2):
        local = nodes[i - 2:i + 3]
        h = local[3] - local[1]
        scaled = (local - local[2]) / h
        d1[i - 2] = _fd_weights(scaled, 2, 1) / h
        d2[i - 2] = _fd_weights(scaled, 2, 2) / h ** 2
    return d1, d2


def apply_jacobi_operator(params: JacobiParams, f: RadialFunction) -> RadialFunction:
    """Delta f = -f'' - (A'/A) f' on the nodes with a full five-point stencil."""
    if len(f) < 5:
        raise InputError("apply_jacobi_operator needs at least 5 nodes")
    d1, d2 = derivative_weights(f.nodes)
    n = len(f)
    idx = np.arange(2, n - 2)[:, None] + np.arange(-2, 3)[None, :]
    # differences against the centre node: the stencils then annihilate constants exactly
    window = f.values[idx] - f.values[2:n - 2, None]
    fp = np.sum(d1 * window, axis=1)
    fpp = np.sum(d2 * window, axis=1)
    xs = f.nodes[2:n - 2]
    return RadialFunction(xs, -fpp - drift(params, xs) * fp)
