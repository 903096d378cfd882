"""Scalar special functions: Lambert W (both real branches), log-gamma, beta.

Lambert W solves w * exp(w) = v.  The principal branch ``lambert_w0`` covers
v >= -1/e with values in [-1, inf); the negative branch ``lambert_wm1``
covers -1/e <= v < 0 with values in (-inf, -1].  Both use Halley iteration
from branch-specific initial guesses.

log-gamma uses a Lanczos approximation (g = 7, 9 coefficients) with the
reflection formula for arguments below 0.5.
"""

from __future__ import annotations

import math

ABS_TOL = 1e-12     # Lambert W residual |w e^w - v|
REL_TOL = 1e-13     # log-gamma target relative error
MAX_ITER = 50

_INV_E = math.exp(-1.0)
# slack below -1/e tolerated at the branch point (quantile evaluation at
# u -> 1 lands exactly on -1/e in floating point)
_BRANCH_SLACK = 4.0 * math.ulp(_INV_E)


class SpecialDomainError(ValueError):
    """Argument outside the function's real domain."""


class NonConvergenceError(ArithmeticError):
    """Iteration failed to converge within MAX_ITER steps."""


def _branch_series(v: float, sign: float) -> float:
    # Series about the branch point v = -1/e in s = sign*sqrt(2(e*v + 1)).
    # sign=+1 gives W0, sign=-1 gives W-1.
    s = sign * math.sqrt(max(2.0 * (math.e * v + 1.0), 0.0))
    return -1.0 + s - s * s / 3.0 + 11.0 * s ** 3 / 72.0 - 43.0 * s ** 4 / 540.0


def _halley(v: float, w: float) -> float:
    for _ in range(MAX_ITER):
        ew = math.exp(w)
        f = w * ew - v
        if abs(f) <= ABS_TOL * abs(v):
            return w
        wp1 = w + 1.0
        if wp1 == 0.0:
            break
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
        step = f / denom
        w_new = w - step
        if w_new == w:
            return w
        w = w_new
    # accept if the residual is already at the attainable floor near -1
    if abs(w * math.exp(w) - v) <= 1e-10 * abs(v):
        return w
    raise NonConvergenceError(f"Lambert W Halley iteration stalled at v={v!r}")


def lambert_w0(v: float) -> float:
    """Principal branch W0(v) for v >= -1/e."""
    if math.isnan(v):
        raise SpecialDomainError("lambert_w0: NaN argument")
    if v < -_INV_E:
        if v >= -_INV_E - _BRANCH_SLACK:
            v = -_INV_E
        else:
            raise SpecialDomainError(f"lambert_w0: v={v!r} < -1/e")
    if v == 0.0:
        return 0.0
    if v <= -_INV_E:
        return -1.0
    if v < -0.30:
        w = _branch_series(v, +1.0)
    elif v > 3.0:
        lv = math.log(v)
        w = lv - math.log(lv)
    else:
        w = math.log1p(v)  # decent global guess for W0 on (-1/e, inf)
    return _halley(v, w)


def lambert_wm1(v: float) -> float:
    """Negative branch W-1(v) for -1/e <= v < 0."""
    if math.isnan(v) or v >= 0.0:
        raise SpecialDomainError(f"lambert_wm1: v={v!r} not in [-1/e, 0)")
    if v < -_INV_E:
        if v >= -_INV_E - _BRANCH_SLACK:
            return -1.0
        raise SpecialDomainError(f"lambert_wm1: v={v!r} < -1/e")
    if v == -_INV_E:
        return -1.0
    return lambert_wm1_exp(math.log(-v))


def lambert_wm1_exp(logmv: float) -> float:
    """W-1(-exp(logmv)) for logmv <= -1, stable when -exp(logmv) underflows.

    Solves w + log(-w) = logmv for w <= -1 by Newton iteration, which stays
    well-conditioned far into the tail where v = -exp(logmv) is subnormal
    or flushes to zero.
    """
    if math.isnan(logmv):
        raise SpecialDomainError("lambert_wm1_exp: NaN argument")
    if logmv > -1.0:
        if logmv <= -1.0 + 1e-12:
            return -1.0
        raise SpecialDomainError(f"lambert_wm1_exp: log(-v)={logmv!r} > -1")
    if logmv == -1.0:
        return -1.0
    if logmv > -2.5:
        # near the branch point: series guess + Halley in v-space is safe
        v = -math.exp(logmv)
        return _halley(v, _branch_series(v, -1.0))
    # asymptotic guess w ~ L - log(-L), L = logmv
    L = logmv
    lnl = math.log(-L)
    w = L - lnl + lnl / L
    for _ in range(MAX_ITER):
        # phi(w) = w + log(-w) - L, phi'(w) = 1 + 1/w
        f = w + math.log(-w) - L
        step = f / (1.0 + 1.0 / w)
        w_new = w - step
        if abs(w_new - w) <= 1e-15 * abs(w):
            return w_new
        w = w_new
    return w


def log_gamma(a: float) -> float:
    """Natural log of the gamma function for a > 0."""
    if not a > 0.0:
        raise SpecialDomainError(f"log_gamma: a={a!r} must be > 0")
    if a < 0.5:
        # reflection: log Gamma(a) = log(pi / sin(pi a)) - log Gamma(1 - a)
        return math.log(math.pi / math.sin(math.pi * a)) - _lanczos(1.0 - a)
    return _lanczos(a)


# Lanczos g = 7, 9-term coefficient set (Godfrey / Numerical Recipes lineage)
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _lanczos(a: float) -> float:
    # valid for a >= 0.5
    x = a - 1.0
    s = _LANCZOS_C[0]
    for i in range(1, len(_LANCZOS_C)):
        s += _LANCZOS_C[i] / (x + i)
    t = x + _LANCZOS_G + 0.5
    return 0.5 * math.log(2.0 * math.pi) + (x + 0.5) * math.log(t) - t + math.log(s)


def gamma_fn(a: float) -> float:
    """Gamma(a) for a > 0."""
    return math.exp(log_gamma(a))


def log_beta(a: float, b: float) -> float:
    """log B(a, b) = log Gamma(a) + log Gamma(b) - log Gamma(a + b)."""
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b)
