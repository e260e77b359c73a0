"""Critical-line machinery: the Riemann-Siegel theta function, an
Euler-Maclaurin evaluation of zeta(s), and the Hardy Z-function.

Two independent evaluation routes are kept alive on purpose:

* Euler-Maclaurin: slow (term count grows with t) but near machine accuracy;
  validated for |t| <= 1e4 and used both as the low-height path of Z and as
  the cross-check oracle for the fast path.
* Riemann-Siegel: main sum of ~sqrt(t/2pi) terms plus four correction terms
  C0..C3 built from derivatives of the entire function
  Psi(p) = cos(2pi(p^2 - p - 1/16))/cos(2pi p).  Truncation error decays like
  (t/2pi)^(-11/4); the crossover to this path sits at RS_SWITCH, placed where
  its measured error is comfortably below the accuracy the zero-finder needs.

Every evaluation has a companion error estimate so downstream inequality
checks can demand margins exceeding accumulated error.  All functions are
pure; array-valued helpers are vectorised with numpy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from numpy.polynomial import chebyshev
from scipy.special import loggamma

from .errors import DomainError, OracleRangeError, PoleError

TWO_PI = 2.0 * math.pi
LOG_PI = math.log(math.pi)
_EPS = np.finfo(float).eps

#: Heights at or above this use the Riemann-Siegel path of hardy_z.
RS_SWITCH = 500.0

#: Range over which the Euler-Maclaurin accuracy contract (<= 1e-10) is validated.
EM_T_MAX = 1.0e4

# Riemann-Siegel theta asymptotic series: coefficient of t^-(2n-1) is
# (1 - 2^(1-2n)) |B_2n| / (4n (2n-1)).
_THETA_COEFFS = (
    1.0 / 48.0,
    7.0 / 5760.0,
    31.0 / 80640.0,
    127.0 / 430080.0,
)


def rs_theta(t):
    """Riemann-Siegel theta via its asymptotic expansion, for t >= 1.

    Absolute error is below 1e-12 for t >= 10 (the series is truncated after
    the t^-7 term, far past the point of diminishing returns there) but grows
    toward ~1e-3 near t = 2; see rs_theta_err.  Accepts scalars or arrays.
    """
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 1.0):
        raise DomainError("rs_theta requires t >= 1 (expansion unreliable below)")
    main = 0.5 * arr * (np.log(arr / TWO_PI) - 1.0) - math.pi / 8.0
    inv2 = 1.0 / (arr * arr)
    corr = np.zeros_like(arr)
    for c in reversed(_THETA_COEFFS):
        corr = (corr + c) * inv2
    corr *= arr  # series is in odd powers 1/t, 1/t^3, ...
    out = main + corr
    return float(out) if np.isscalar(t) else out


def rs_theta_err(t) -> float:
    """Bound on the absolute error of rs_theta (asymptotic-series truncation)."""
    t = float(np.min(t)) if not np.isscalar(t) else float(t)
    if t >= 10.0:
        return 1e-12
    if t >= 5.0:
        return 2e-7
    if t >= 2.0:
        return 2e-3
    return 5e-2


def rs_theta_deriv(t):
    """Derivative of the theta expansion; ~ 0.5 log(t/2pi) for large t."""
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 1.0):
        raise DomainError("rs_theta_deriv requires t >= 1")
    out = 0.5 * np.log(arr / TWO_PI)
    inv2 = 1.0 / (arr * arr)
    power = inv2.copy()
    for n, c in enumerate(_THETA_COEFFS, start=1):
        out -= (2 * n - 1) * c * power
        power *= inv2
    return float(out) if np.isscalar(t) else out


def _theta_gamma_arg(t):
    """Im log Gamma(1/4 + it/2) - (t/2) log pi: theta without asymptotics.

    Used for the rotation e^(i theta) below the Riemann-Siegel switch, where
    the asymptotic series is not yet at machine accuracy.
    """
    arr = np.asarray(t, dtype=float)
    val = np.imag(loggamma(0.25 + 0.5j * arr)) - 0.5 * arr * LOG_PI
    return float(val) if np.isscalar(t) else val


# ---------------------------------------------------------------------------
# Euler-Maclaurin zeta.
# ---------------------------------------------------------------------------

# B_2, B_4, ..., B_12 over (2k)! -- one extra pair beyond the B_10 cutoff so
# the first omitted term can be bounded, not guessed.
_BERN_OVER_FACT = (
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
)
_EM_BERN_TERMS = 5  # corrections through B_10


def _zeta_em_raw(s: complex, n_terms: int) -> tuple[complex, float]:
    """Euler-Maclaurin sum with n_terms initial terms; returns (value, err)."""
    n = np.arange(1, n_terms)
    terms = np.exp(-s * np.log(n))
    total = terms.sum()
    big_n = float(n_terms)
    total += 0.5 * big_n ** (-s) + big_n ** (1 - s) / (s - 1.0)
    fac = s * big_n ** (-s - 1.0)
    for k in range(1, _EM_BERN_TERMS + 1):
        total += _BERN_OVER_FACT[k - 1] * fac
        fac = fac * (s + 2 * k - 1) * (s + 2 * k) / (big_n * big_n)
    # First omitted Bernoulli term, inflated by the standard |s+2K+1|/(sigma+2K+1)
    # factor, plus a phase-rounding model: each power carries an argument error
    # ~|t| eps, so the sum's rounding scales with |t| eps sum|n^-s| (coefficient
    # calibrated against arbitrary-precision references, kept 3x conservative).
    k1 = _EM_BERN_TERMS + 1
    tail = abs(_BERN_OVER_FACT[k1 - 1] * fac) * (
        abs(s + 2 * k1 - 1) / (s.real + 2 * k1 - 1)
    )
    power_sum = float(np.abs(terms).sum()) + 1.0
    rounding = 0.15 * _EPS * (1.0 + abs(s.imag)) * power_sum + 3e-15
    return total, tail + rounding


def _em_n_terms(t: float) -> int:
    return max(20, int(math.ceil(2.0 * abs(t))))


def zeta_euler_maclaurin(sigma: float, t: float) -> complex:
    """zeta(sigma + it) by Euler-Maclaurin.

    Absolute error <= 1e-10 throughout |t| <= 1e4 for sigma >= 0.4 (which
    covers every oracle use; the companion error bound stays honest for
    smaller sigma, where |zeta| itself grows and only relative accuracy
    ~1e-12 is achievable in double precision).
    """
    value, _ = zeta_euler_maclaurin_with_err(sigma, t)
    return value


def zeta_euler_maclaurin_with_err(sigma: float, t: float) -> tuple[complex, float]:
    """Like zeta_euler_maclaurin but also returns the computed error bound."""
    if sigma == 1.0 and t == 0.0:
        raise PoleError("zeta has a pole at s = 1")
    if abs(t) > EM_T_MAX:
        raise OracleRangeError(
            f"Euler-Maclaurin accuracy contract covers |t| <= {EM_T_MAX:g}, got t={t}"
        )
    if sigma <= -8.0:
        raise DomainError("Bernoulli corrections through B_10 require sigma > -8")
    return _zeta_em_raw(complex(sigma, t), _em_n_terms(t))


def _zeta_em_batch_half(ts: np.ndarray, n_terms: int | None = None) -> np.ndarray:
    """zeta(1/2 + i t) for an array of heights, shared term count."""
    ts = np.asarray(ts, dtype=float)
    if n_terms is None:
        n_terms = _em_n_terms(float(np.max(ts))) if ts.size else 20
    n = np.arange(1, n_terms)
    logn = np.log(n)
    rsq = n ** -0.5
    out = np.empty(ts.shape, dtype=complex)
    chunk = max(1, 2_000_000 // n_terms)
    for i in range(0, ts.size, chunk):
        tt = ts[i:i + chunk, None]
        out[i:i + chunk] = (rsq * np.exp(-1j * tt * logn)).sum(axis=1)
    s = 0.5 + 1j * ts
    big_n = float(n_terms)
    out += 0.5 * big_n ** (-s) + big_n ** (1 - s) / (s - 1.0)
    fac = s * big_n ** (-s - 1.0)
    for k in range(1, _EM_BERN_TERMS + 1):
        out += _BERN_OVER_FACT[k - 1] * fac
        fac = fac * (s + 2 * k - 1) * (s + 2 * k) / (big_n * big_n)
    return out


# ---------------------------------------------------------------------------
# Riemann-Siegel correction terms.
# ---------------------------------------------------------------------------


def _psi(z: np.ndarray) -> np.ndarray:
    """Psi(z) = cos(2pi(z^2 - z - 1/16))/cos(2pi z), entire.

    The quarter-integer zeros of the denominator are all cancelled by the
    numerator; near them both cosines are rewritten about their nearest root
    so the ratio stays finite in floating point.
    """
    z = np.asarray(z, dtype=complex)
    a = TWO_PI * (z * z - z - 0.0625)
    b = TWO_PI * z
    den = np.cos(b)
    out = np.empty_like(z)
    near = np.abs(den) < 0.1
    safe = ~near
    out[safe] = np.cos(a[safe]) / den[safe]
    if np.any(near):
        an, bn = a[near], b[near]
        j = np.round(an.real / math.pi - 0.5)
        l = np.round(bn.real / math.pi - 0.5)
        da = an - (j + 0.5) * math.pi
        db = bn - (l + 0.5) * math.pi
        sign = np.where((j - l) % 2 == 0, 1.0, -1.0)
        out[near] = sign * np.sin(da) / np.sin(db)
    return out


_CHEB_NODES = 64
_CAUCHY_SAMPLES = 256
_CAUCHY_RADIUS = 0.25
_FACTORIALS = [math.factorial(k) for k in range(13)]

_cheb_models: list[np.ndarray] | None = None


def _psi_derivs_at(p: float, orders: tuple[int, ...]) -> dict[int, float]:
    """Derivatives of Psi at real p from a Cauchy integral over a circle."""
    k = np.arange(_CAUCHY_SAMPLES)
    # small phase offset keeps samples off the real axis's quarter points
    phi = TWO_PI * (k + 0.31) / _CAUCHY_SAMPLES
    ring = p + _CAUCHY_RADIUS * np.exp(1j * phi)
    vals = _psi(ring)
    out = {}
    for n in orders:
        coef = np.mean(vals * np.exp(-1j * n * phi)) / _CAUCHY_RADIUS ** n
        out[n] = coef.real * _FACTORIALS[n]
    return out


def _correction_models() -> list[np.ndarray]:
    """Chebyshev models of C0..C3 over p in [0, 1], built once per process.

    Concurrent first calls may build twice; both results are identical and
    the assignment is atomic, so the race is benign.
    """
    global _cheb_models
    if _cheb_models is not None:
        return _cheb_models
    xs = np.cos(math.pi * (np.arange(_CHEB_NODES + 1) + 0.5) / (_CHEB_NODES + 1))
    ps = 0.5 * (xs + 1.0)
    pi2 = math.pi ** 2
    pi4 = math.pi ** 4
    pi6 = math.pi ** 6
    c_vals = np.empty((4, ps.size))
    for i, p in enumerate(ps):
        d = _psi_derivs_at(float(p), (0, 1, 2, 3, 5, 6, 9))
        c_vals[0, i] = d[0]
        c_vals[1, i] = -d[3] / (96.0 * pi2)
        c_vals[2, i] = d[2] / (64.0 * pi2) + d[6] / (18432.0 * pi4)
        c_vals[3, i] = (-d[1] / (64.0 * pi2) - d[5] / (3840.0 * pi4)
                        - d[9] / (5308416.0 * pi6))
    _cheb_models = [chebyshev.chebfit(xs, c_vals[j], _CHEB_NODES) for j in range(4)]
    return _cheb_models


def _hardy_z_rs_batch(ts: np.ndarray) -> np.ndarray:
    """Riemann-Siegel Z for an array of heights (all >= RS_SWITCH)."""
    models = _correction_models()
    ts = np.asarray(ts, dtype=float)
    tau = np.sqrt(ts / TWO_PI)
    big_n = np.floor(tau).astype(int)
    p = tau - big_n
    theta = rs_theta(ts)
    out = np.zeros(ts.shape, dtype=float)
    order = np.argsort(ts)
    chunk = 200_000
    pos = 0
    while pos < order.size:
        idx = order[pos:pos + chunk]
        n_max = int(big_n[idx].max())
        n = np.arange(1, n_max + 1)
        mask = n[None, :] <= big_n[idx, None]
        phases = theta[idx, None] - ts[idx, None] * np.log(n)[None, :]
        out[idx] = 2.0 * np.where(mask, np.cos(phases) / np.sqrt(n)[None, :], 0.0).sum(axis=1)
        pos += chunk
    x = 2.0 * p - 1.0
    u = 1.0 / tau
    corr = (chebyshev.chebval(x, models[0])
            + chebyshev.chebval(x, models[1]) * u
            + chebyshev.chebval(x, models[2]) * u ** 2
            + chebyshev.chebval(x, models[3]) * u ** 3)
    sign = np.where(big_n % 2 == 1, 1.0, -1.0)  # (-1)^(N-1)
    out += sign * tau ** -0.5 * corr
    return out


def _hardy_z_em_batch(ts: np.ndarray, n_terms: int | None = None) -> np.ndarray:
    """Z via Euler-Maclaurin rotation, for heights below the RS switch."""
    ts = np.asarray(ts, dtype=float)
    zv = _zeta_em_batch_half(ts, n_terms)
    return np.real(np.exp(1j * _theta_gamma_arg(ts)) * zv)


def hardy_z_many(ts) -> np.ndarray:
    """Z(t) for an array of heights t >= 2, with per-height path selection."""
    ts = np.asarray(ts, dtype=float)
    if np.any(ts < 2.0):
        raise DomainError("hardy_z requires t >= 2")
    if np.any(ts > 1e6):
        raise DomainError("hardy_z validated for t <= 1e6")
    out = np.empty(ts.shape, dtype=float)
    lo = ts < RS_SWITCH
    if np.any(lo):
        out[lo] = _hardy_z_em_batch(ts[lo])
    if np.any(~lo):
        out[~lo] = _hardy_z_rs_batch(ts[~lo])
    return out


def hardy_z(t: float) -> float:
    """Hardy's Z(t) = e^(i theta(t)) zeta(1/2 + it), real on the critical line."""
    if np.ndim(t) != 0:
        return hardy_z_many(t)
    return float(hardy_z_many(np.array([float(t)]))[0])


def riemann_siegel_err(t: float) -> float:
    """Error envelope of the Riemann-Siegel path with corrections C0..C3.

    Truncation decays like (t/2pi)^(-11/4); the coefficient 0.02 was
    calibrated against the Euler-Maclaurin path with several-fold headroom.
    The second term models phase rounding of the main sum, which takes over
    at large heights.  Valid for t >= 30.
    """
    t = float(t)
    v = t / TWO_PI
    trunc = 0.02 * v ** -2.75
    rounding = 8.0 * _EPS * max(abs(rs_theta(t)), 10.0) * (v ** 0.25 + 1.0)
    return trunc + rounding


def hardy_z_err(t: float) -> float:
    """Bound on |computed - true| for hardy_z at height t."""
    t = float(t)
    if t < RS_SWITCH:
        return 1e-14 + 3e-15 * (1.0 + t)
    return riemann_siegel_err(t)


@dataclass(frozen=True)
class CriticalLinePoint:
    """One evaluation of Z(t) with its method tag and error estimate."""

    t: float
    z_value: float
    method: Literal["riemann_siegel", "euler_maclaurin"]
    abs_err_est: float


def hardy_z_point(t: float) -> CriticalLinePoint:
    method = "euler_maclaurin" if t < RS_SWITCH else "riemann_siegel"
    return CriticalLinePoint(
        t=float(t),
        z_value=hardy_z(t),
        method=method,
        abs_err_est=hardy_z_err(t),
    )
