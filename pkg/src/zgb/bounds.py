"""Closed-form estimates for the zero-counting function N(T) and for the
reciprocal-ordinate sum A(T) = sum of 1/gamma over ordinates gamma <= T.

The counting envelope is Rosser's explicit bound |N(T) - F(T)| <= R(T), valid
for T >= 2, with

    F(T) = (T/2pi) log(T/2pi) - T/2pi + 7/8
    R(T) = (137/1000) log T + (433/1000) log log T + 397/250

Pushing F and R through Stieltjes partial summation of A(T) produces a
two-sided explicit bound

    M(T) + 3/50 < A(T) < M(T) + 109/250

with M(T) = log^2(T)/(4pi) - log(2pi) log(T)/(2pi).  The lower bound holds for
T >= 2, the upper for T >= 2.222.  Everything needed for that derivation lives
here: both antiderivatives, the auxiliary function E(t) = integral over s >= 1
of ds/(s t^s) (an exponential integral in disguise), its two-sided envelope,
the sign-controlled tail terms, and the additive constants c_au and c_al
recomputed from scratch as numeric limits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from scipy.integrate import quad

from .errors import ConvergenceError, DomainError

TWO_PI = 2.0 * math.pi
FOUR_PI = 4.0 * math.pi
LOG_2PI = math.log(TWO_PI)

#: First zero ordinate, correct to double precision.  The zero-finder
#: reproduces this value independently; tests compare the two routes.
GAMMA1 = 14.134725141734694

#: Validity threshold of the simplified upper bound, taken verbatim as 2222/1000.
UPPER_THRESHOLD = 2.222

C_AU_CAP = Fraction(109, 250)
C_AL_FLOOR = Fraction(3, 50)

# Evaluation-error scale for the E1-based path of e_frak (relative ~1e-15,
# kept with generous headroom; used to assert strict inequalities with margin).
E_FRAK_EVAL_ERR = 1e-13


def big_f(T: float) -> float:
    """Smooth main term F(T) of the zero count, defined for T >= 2."""
    if T < 2:
        raise DomainError(f"big_f requires T >= 2, got {T}")
    x = T / TWO_PI
    return x * math.log(x) - x + 0.875


def big_r(T: float) -> float:
    """Rosser's explicit envelope radius R(T), defined for T >= 2."""
    if T < 2:
        raise DomainError(f"big_r requires T >= 2, got {T}")
    lt = math.log(T)
    return 0.137 * lt + 0.433 * math.log(lt) + 397.0 / 250.0


def main_term(T: float) -> float:
    """Main term M(T) = log^2(T)/(4pi) - log(2pi) log(T)/(2pi) of A(T)."""
    if T <= 1:
        raise DomainError(f"main_term requires T > 1, got {T}")
    lt = math.log(T)
    return lt * lt / FOUR_PI - LOG_2PI * lt / TWO_PI


def antideriv_f(t: float) -> float:
    """Antiderivative P of F(t)/t^2, so that P'(t) = big_f(t)/t^2."""
    if t < 2:
        raise DomainError(f"antideriv_f requires t >= 2, got {t}")
    lt = math.log(t)
    return (
        lt * lt / FOUR_PI
        - (1.0 + LOG_2PI) * lt / TWO_PI
        + (LOG_2PI * LOG_2PI - 2.0 * LOG_2PI) / FOUR_PI
        - 7.0 / (8.0 * t)
    )


def antideriv_r(t: float) -> float:
    """Antiderivative Q of R(t)/t^2, so that Q'(t) = big_r(t)/t^2."""
    if t < 2:
        raise DomainError(f"antideriv_r requires t >= 2, got {t}")
    return _antideriv_r_elementary(t) - 0.433 * e_frak(t)


def _antideriv_r_elementary(t: float) -> float:
    """The elementary part of antideriv_r (everything except the E(t) term)."""
    lt = math.log(t)
    return -0.433 * math.log(lt) / t - 0.137 * lt / t - 69.0 / (40.0 * t)


# ---------------------------------------------------------------------------
# E(t) = integral_{1}^{inf} ds / (s t^s) and its exponential-integral core.
# ---------------------------------------------------------------------------

_EULER_GAMMA = 0.5772156649015328606


def exp_integral_e1(x: float) -> float:
    """E1(x) for x > 0: power series for x <= 1, continued fraction beyond.

    Relative accuracy is a few ulps over the whole range used here.
    """
    if x <= 0:
        raise DomainError(f"exp_integral_e1 requires x > 0, got {x}")
    if x <= 1.0:
        # E1(x) = -euler_gamma - log x + sum_{k>=1} (-1)^(k+1) x^k / (k k!)
        total = -_EULER_GAMMA - math.log(x)
        term = 1.0
        for k in range(1, 40):
            term *= -x / k
            add = -term / k
            total += add
            if abs(add) < 1e-18 * max(abs(total), 1e-3):
                break
        return total
    # Modified Lentz evaluation of E1(x) = exp(-x) / (x + 1 - 1^2/(x + 3 - ...))
    tiny = 1e-300
    b = x + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 200):
        a = -float(i * i)
        b += 2.0
        d = a * d + b
        if d == 0.0:
            d = tiny
        c = b + a / c
        if c == 0.0:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return h * math.exp(-x)
    raise ConvergenceError(f"continued fraction for E1({x}) did not converge")


def e_frak(t: float) -> float:
    """E(t) evaluated through the identity E(t) = E1(log t).

    The substitution u = s log t turns the defining integral into the
    exponential integral; e_frak_quadrature integrates the definition
    directly and serves as the independent check.
    """
    if t < 1.0 + 1e-6:
        raise DomainError(f"e_frak requires t >= 1 + 1e-6, got {t}")
    return exp_integral_e1(math.log(t))


def e_frak_quadrature(t: float) -> float:
    """E(t) by adaptive quadrature of the defining integral (oracle path)."""
    if t < 1.0 + 1e-6:
        raise DomainError(f"e_frak_quadrature requires t >= 1 + 1e-6, got {t}")
    lt = math.log(t)
    val, _ = quad(lambda s: math.exp(-s * lt) / s, 1.0, math.inf,
                  epsabs=1e-14, epsrel=1e-13, limit=300)
    return val


class SandwichResult(NamedTuple):
    lo: float
    hi: float
    holds: bool
    margin_lo: float
    margin_hi: float


def e_frak_sandwich(t: float) -> SandwichResult:
    """Two-sided envelope 1/(tL) - 1/(tL^2) < E(t) < 1/(tL) - 31/(95 tL^2).

    `holds` demands both strict inequalities with margin exceeding the
    evaluation error of the E1 path (L = log t).
    """
    if t < 2:
        raise DomainError(f"e_frak_sandwich requires t >= 2, got {t}")
    lt = math.log(t)
    base = 1.0 / (t * lt)
    lo = base - 1.0 / (t * lt * lt)
    hi = base - (31.0 / 95.0) / (t * lt * lt)
    val = e_frak(t)
    margin_lo = val - lo
    margin_hi = hi - val
    holds = margin_lo > E_FRAK_EVAL_ERR and margin_hi > E_FRAK_EVAL_ERR
    return SandwichResult(lo, hi, holds, margin_lo, margin_hi)


# ---------------------------------------------------------------------------
# Tail terms and the assembled bounds for A(T).
# ---------------------------------------------------------------------------


def tail_upper(T: float) -> float:
    """Tail of the sharp upper bound; negative once T >= 2.222."""
    if T < 2:
        raise DomainError(f"tail_upper requires T >= 2, got {T}")
    lt = math.log(T)
    return -(137.0 * lt * lt + 433.0 * lt - 433.0) / (1000.0 * T * lt * lt)


def tail_lower(T: float) -> float:
    """Tail of the sharp lower bound; positive for all T >= 2."""
    if T < 2:
        raise DomainError(f"tail_lower requires T >= 2, got {T}")
    lt = math.log(T)
    llt = math.log(lt)
    num = (274.0 * lt**3 + 866.0 * llt * lt * lt + 3313.0 * lt * lt
           + 433.0 * lt - 433.0)
    return num / (1000.0 * T * lt * lt)


class BoundPair(NamedTuple):
    sharp: float
    simplified: float


def upper_bound_a(T: float, constants: "BoundConstants | None" = None) -> BoundPair:
    """Upper bounds for A(T), sharp and simplified, valid for T >= 2.222."""
    if T < UPPER_THRESHOLD:
        raise DomainError(f"upper_bound_a requires T >= {UPPER_THRESHOLD}, got {T}")
    c = constants if constants is not None else compute_constants()
    m = main_term(T)
    return BoundPair(m + c.c_au + tail_upper(T), m + float(C_AU_CAP))


def lower_bound_a(T: float, constants: "BoundConstants | None" = None) -> BoundPair:
    """Lower bounds for A(T), sharp and simplified, valid for T >= 2."""
    if T < 2:
        raise DomainError(f"lower_bound_a requires T >= 2, got {T}")
    c = constants if constants is not None else compute_constants()
    m = main_term(T)
    return BoundPair(m + c.c_al + tail_lower(T), m + float(C_AL_FLOOR))


# ---------------------------------------------------------------------------
# Envelope evaluation record and the additive constants.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EnvelopeEval:
    """F(T), R(T) and the interval [F - R, F + R] at one height."""

    T: float
    f_val: float
    r_val: float
    lower: float
    upper: float


def envelope_eval(T: float) -> EnvelopeEval:
    f = big_f(T)
    r = big_r(T)
    return EnvelopeEval(T=T, f_val=f, r_val=r, lower=f - r, upper=f + r)


@dataclass(frozen=True)
class BoundConstants:
    """Additive constants of the explicit bounds, plus their rational caps.

    c_au and c_al reproduce the constants of the published bound: in the
    boundary term at gamma_1 the value E(gamma_1) is replaced by its upper
    envelope 1/(g log g) - 31/(95 g log^2 g), the substitution that keeps
    both one-sided bounds valid.  c_au_sharp / c_al_sharp keep the exact
    E(gamma_1) instead and are the sharpest constants this derivation yields.
    """

    gamma1: float
    c_au: float
    c_al: float
    c_au_cap: Fraction
    c_al_floor: Fraction
    c_au_sharp: float
    c_al_sharp: float
    converged: bool


def _bound_gap_at(T: float, e_at_gamma1: float, sign: float) -> float:
    """UB_exact(T) - M(T) for sign=+1, LB_exact(T) - M(T) for sign=-1.

    UB_exact/LB_exact are the exact pre-extraction bounds
    [P(T) - P(g1)] +- [Q(T) - Q(g1)] + (F(T) +- R(T))/T, with the E-value
    used inside Q(g1) supplied by the caller.
    """
    q_g1 = _antideriv_r_elementary(GAMMA1) - 0.433 * e_at_gamma1
    p_part = antideriv_f(T) - antideriv_f(GAMMA1)
    q_part = antideriv_r(T) - q_g1
    return (p_part + sign * q_part
            + (big_f(T) + sign * big_r(T)) / T
            - main_term(T))


def compute_constants(limit_height: float = 1e10,
                      check_height: float = 1e9) -> BoundConstants:
    """Recompute c_au and c_al as numeric limits of the exact bounds.

    The extraction evaluates UB_exact(T) - M(T) and LB_exact(T) - M(T) at
    `limit_height`, where every 1/T and E(T) term has decayed below 1e-8,
    and flags non-convergence when the value at `check_height` disagrees by
    more than 1e-7.
    """
    e_envelope = (1.0 / (GAMMA1 * math.log(GAMMA1))
                  - (31.0 / 95.0) / (GAMMA1 * math.log(GAMMA1) ** 2))
    e_exact = e_frak(GAMMA1)

    c_au = _bound_gap_at(limit_height, e_envelope, +1.0)
    c_al = _bound_gap_at(limit_height, e_envelope, -1.0)
    c_au_sharp = _bound_gap_at(limit_height, e_exact, +1.0)
    c_al_sharp = _bound_gap_at(limit_height, e_exact, -1.0)

    converged = (
        abs(c_au - _bound_gap_at(check_height, e_envelope, +1.0)) <= 1e-7
        and abs(c_al - _bound_gap_at(check_height, e_envelope, -1.0)) <= 1e-7
    )
    return BoundConstants(
        gamma1=GAMMA1,
        c_au=c_au,
        c_al=c_al,
        c_au_cap=C_AU_CAP,
        c_al_floor=C_AL_FLOOR,
        c_au_sharp=c_au_sharp,
        c_al_sharp=c_al_sharp,
        converged=converged,
    )
