"""The seven competitor lifetime models and the model-comparison pipeline.

Each competitor carries closed-form pdf and cdf, an MLE fitting adapter
running on the same multi-start Nelder-Mead engine as the RTGLE fitter, and
its free-parameter count for AIC.

Two printed-source corrections, both forced by normalization (a density
must integrate to 1):
  * the transmuted log-logistic density factor is
    (1+lam)*(a^b + x^b) - 2*lam*x^b, and
  * the linear exponential density is (alpha + beta*x) * exp(-(alpha*x +
    beta*x^2/2)) -- i.e. the RT linear exponential with p = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize

from . import estimate
from .distribution import RtgleParams
from .estimate import (AllStartsFailed, EstimationMethod, OptimizerConfig,
                       _check_data)
from .gof import GofReport, PValueMode, gof_report


@dataclass(frozen=True)
class CompetitorModel:
    """A competitor distribution instance: kind tag plus parameter vector."""
    kind: str
    params: tuple[float, ...]

    @property
    def n_params(self) -> int:
        return len(_SPECS[self.kind].param_kinds)


@dataclass(frozen=True)
class _Spec:
    param_names: tuple[str, ...]
    param_kinds: tuple[str, ...]          # "pos" | "sym" (lambda) | "unit" (p)
    log_pdf: Callable
    cdf: Callable
    start: Callable                        # data -> natural-scale start


def _weibull_cdf(x, mu, sigma):
    return -np.expm1(-np.power(x / sigma, mu))


def _weibull_log_pdf(x, mu, sigma):
    t = x / sigma
    return (math.log(mu / sigma) + (mu - 1.0) * np.log(t) - np.power(t, mu))


def _transmute_cdf(g, lam):
    return (1.0 + lam) * g - lam * g * g


def _transmute_log_pdf(log_g_pdf, g, lam):
    factor = 1.0 + lam - 2.0 * lam * g
    with np.errstate(divide="ignore", invalid="ignore"):
        out = log_g_pdf + np.log(np.maximum(factor, 0.0))
    return np.where(factor > 0.0, out, -np.inf)


def _lindley_cdf(x, theta):
    return -np.expm1(np.log1p(theta * x / (theta + 1.0)) - theta * x)


def _lindley_log_pdf(x, theta):
    return (2.0 * math.log(theta) - math.log(theta + 1.0)
            + np.log1p(x) - theta * x)


def _loglogistic_cdf(x, a, b):
    xb = np.power(x, b)
    return xb / (a ** b + xb)


def _loglogistic_log_pdf(x, a, b):
    xb = np.power(x, b)
    return (math.log(b) + b * math.log(a) + (b - 1.0) * np.log(x)
            - 2.0 * np.log(a ** b + xb))


def _le_m(x, alpha, beta):
    return alpha * x + 0.5 * beta * x * x


_SPECS: dict[str, _Spec] = {}


def _register(kind, names, kinds, log_pdf, cdf, start):
    _SPECS[kind] = _Spec(tuple(names), tuple(kinds), log_pdf, cdf, start)


_register(
    "RTW", ("theta", "gamma", "p"), ("pos", "pos", "unit"),
    log_pdf=lambda x, th, g, p: (
        math.log(th * g) + (g - 1.0) * np.log(x) - th * np.power(x, g)
        + np.log(np.maximum(1.0 + p * (th * np.power(x, g) - 1.0), 1e-320))),
    cdf=lambda x, th, g, p: -np.expm1(
        np.log1p(p * th * np.power(x, g)) - th * np.power(x, g)),
    start=lambda x: (1.0 / np.mean(x), 1.0, 0.5),
)
_register(
    "W", ("mu", "sigma"), ("pos", "pos"),
    log_pdf=lambda x, mu, s: _weibull_log_pdf(x, mu, s),
    cdf=lambda x, mu, s: _weibull_cdf(x, mu, s),
    start=lambda x: (1.0, np.mean(x)),
)
_register(
    "TW", ("mu", "sigma", "lambda"), ("pos", "pos", "sym"),
    log_pdf=lambda x, mu, s, lam: _transmute_log_pdf(
        _weibull_log_pdf(x, mu, s), _weibull_cdf(x, mu, s), lam),
    cdf=lambda x, mu, s, lam: _transmute_cdf(_weibull_cdf(x, mu, s), lam),
    start=lambda x: (1.0, np.mean(x), 0.0),
)
_register(
    "TL", ("theta", "lambda"), ("pos", "sym"),
    log_pdf=lambda x, th, lam: _transmute_log_pdf(
        _lindley_log_pdf(x, th), _lindley_cdf(x, th), lam),
    cdf=lambda x, th, lam: _transmute_cdf(_lindley_cdf(x, th), lam),
    start=lambda x: (1.0 / np.mean(x), 0.0),
)
_register(
    "TLL", ("alpha", "beta", "lambda"), ("pos", "pos", "sym"),
    log_pdf=lambda x, a, b, lam: _transmute_log_pdf(
        _loglogistic_log_pdf(x, a, b), _loglogistic_cdf(x, a, b), lam),
    cdf=lambda x, a, b, lam: _transmute_cdf(_loglogistic_cdf(x, a, b), lam),
    start=lambda x: (np.median(x), 1.0, 0.0),
)
_register(
    "RTLE", ("alpha", "beta", "p"), ("pos", "pos", "unit"),
    log_pdf=lambda x, a, b, p: (
        np.log(a + b * x) - _le_m(x, a, b)
        + np.log(np.maximum(1.0 - p + p * _le_m(x, a, b), 1e-320))),
    cdf=lambda x, a, b, p: -np.expm1(
        np.log1p(p * _le_m(x, a, b)) - _le_m(x, a, b)),
    start=lambda x: (1.0 / np.mean(x), 0.1 / np.mean(x) ** 2, 0.5),
)
_register(
    "LE", ("alpha", "beta"), ("pos", "pos"),
    log_pdf=lambda x, a, b: np.log(a + b * x) - _le_m(x, a, b),
    cdf=lambda x, a, b: -np.expm1(-_le_m(x, a, b)),
    start=lambda x: (1.0 / np.mean(x), 0.1 / np.mean(x) ** 2),
)

COMPETITOR_KINDS = tuple(_SPECS)


def make_competitor(kind: str, *params: float) -> CompetitorModel:
    spec = _SPECS[kind]
    if len(params) != len(spec.param_kinds):
        raise ValueError(f"{kind} takes {len(spec.param_kinds)} parameters")
    for v, k in zip(params, spec.param_kinds):
        if k == "pos" and not v > 0.0:
            raise ValueError(f"{kind}: parameter must be > 0, got {v!r}")
        if k == "sym" and not -1.0 <= v <= 1.0:
            raise ValueError(f"{kind}: lambda must lie in [-1, 1], got {v!r}")
        if k == "unit" and not 0.0 <= v <= 1.0:
            raise ValueError(f"{kind}: p must lie in [0, 1], got {v!r}")
    return CompetitorModel(kind, tuple(float(v) for v in params))


def competitor_log_pdf(model: CompetitorModel, x):
    x = np.asarray(x, dtype=float)
    xp = np.where(x > 0.0, x, 1.0)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = _SPECS[model.kind].log_pdf(xp, *model.params)
    out = np.where(x > 0.0, out, -np.inf)
    out = np.where(np.isnan(out), -np.inf, out)
    return out if np.ndim(out) else float(out)


def competitor_pdf(model: CompetitorModel, x):
    with np.errstate(over="ignore"):
        return np.exp(competitor_log_pdf(model, x))


def competitor_cdf(model: CompetitorModel, x):
    x = np.asarray(x, dtype=float)
    xp = np.maximum(x, 0.0)
    with np.errstate(invalid="ignore", over="ignore"):
        out = _SPECS[model.kind].cdf(xp, *model.params)
    out = np.where(x <= 0.0, 0.0, out)
    return out if np.ndim(out) else float(out)


# --- fitting -------------------------------------------------------------------

def _to_unconstrained(values, kinds) -> np.ndarray:
    out = []
    for v, k in zip(values, kinds):
        if k == "pos":
            out.append(math.log(v))
        elif k == "sym":
            v = min(max(v, -1.0 + 1e-8), 1.0 - 1e-8)
            out.append(math.atanh(v))
        else:
            v = min(max(v, 1e-12), 1.0 - 1e-12)
            out.append(math.log(v / (1.0 - v)))
    return np.array(out)


def _from_unconstrained(theta, kinds) -> tuple[float, ...]:
    out = []
    for t, k in zip(theta, kinds):
        t = min(max(float(t), -40.0), 40.0)
        if k == "pos":
            out.append(math.exp(t))
        elif k == "sym":
            out.append(math.tanh(t))
        else:
            out.append(1.0 / (1.0 + math.exp(-t)))
    return tuple(out)


@dataclass
class CompetitorFit:
    model: CompetitorModel
    minus2loglik: float
    converged: bool
    n_starts_used: int
    standard_errors: tuple[float, ...] | None = None


def fit_competitor(kind: str, data,
                   config: OptimizerConfig | None = None) -> CompetitorFit:
    """Maximum likelihood fit of one competitor by multi-start Nelder-Mead."""
    config = config or OptimizerConfig()
    x = _check_data(data)
    spec = _SPECS[kind]
    kinds = spec.param_kinds

    def nll(theta):
        model = CompetitorModel(kind, _from_unconstrained(theta, kinds))
        lp = competitor_log_pdf(model, x)
        if np.any(np.isneginf(lp)):
            return math.inf
        return -float(np.sum(lp))

    center = _to_unconstrained(spec.start(x), kinds)
    rng = np.random.Generator(np.random.Philox(key=config.seed))
    best = None
    n_used = 0
    for s in range(config.n_starts):
        theta0 = center if s == 0 else center + rng.normal(scale=1.0,
                                                           size=len(kinds))
        n_used += 1
        if not np.isfinite(nll(theta0)):
            continue
        res = minimize(nll, theta0, method="Nelder-Mead",
                       options={"maxiter": config.max_iterations,
                                "fatol": config.tolerance, "xatol": 1e-8,
                                "adaptive": True})
        if np.isfinite(res.fun) and (best is None or res.fun < best.fun):
            best = res
    if best is None:
        raise AllStartsFailed(f"no start produced a finite likelihood "
                              f"for {kind}")
    model = CompetitorModel(kind, _from_unconstrained(best.x, kinds))
    se = _competitor_standard_errors(kind, best.x, x)
    return CompetitorFit(model=model, minus2loglik=2.0 * float(best.fun),
                         converged=bool(np.isfinite(best.fun)),
                         n_starts_used=n_used, standard_errors=se)


def _competitor_standard_errors(kind, theta, x):
    spec = _SPECS[kind]
    kinds = spec.param_kinds
    k = len(theta)

    def f(th):
        model = CompetitorModel(kind, _from_unconstrained(th, kinds))
        lp = competitor_log_pdf(model, x)
        return math.inf if np.any(np.isneginf(lp)) else -float(np.sum(lp))

    h = 1e-4 * (1.0 + np.abs(theta))
    hess = np.empty((k, k))
    f0 = f(theta)
    for i in range(k):
        for j in range(i, k):
            ei = np.zeros(k); ei[i] = h[i]
            ej = np.zeros(k); ej[j] = h[j]
            if i == j:
                val = (f(theta + ei) - 2.0 * f0 + f(theta - ei)) / h[i] ** 2
            else:
                val = (f(theta + ei + ej) - f(theta + ei - ej)
                       - f(theta - ei + ej) + f(theta - ei - ej)) \
                    / (4.0 * h[i] * h[j])
            hess[i, j] = hess[j, i] = val
    if not np.all(np.isfinite(hess)):
        return None
    try:
        cov_t = np.linalg.inv(hess)
    except np.linalg.LinAlgError:
        return None
    diag = np.diag(cov_t)
    if np.any(diag <= 0.0):
        return None
    nat = _from_unconstrained(theta, kinds)
    jac = []
    for v, kk in zip(nat, kinds):
        if kk == "pos":
            jac.append(v)
        elif kk == "sym":
            jac.append(1.0 - v * v)
        else:
            jac.append(v * (1.0 - v))
    return tuple(float(s) for s in np.sqrt(diag) * np.abs(jac))


# --- comparison pipeline --------------------------------------------------------

@dataclass
class ComparisonRow:
    model: str
    params: dict[str, float]
    standard_errors: dict[str, float] | None
    gof: GofReport | None
    error: str | None = None


def comparison_table(data, config: OptimizerConfig | None = None,
                     mode: PValueMode = PValueMode.ASYMPTOTIC,
                     kinds: tuple[str, ...] | None = None
                     ) -> list[ComparisonRow]:
    """Fit RTGLE and the competitors, compute GoF for each, sort by AIC.

    Per-model failures are kept as error rows so partial results survive.
    """
    from .distribution import cdf as rtgle_cdf
    x = _check_data(data)
    rows: list[ComparisonRow] = []

    if kinds is None or "RTGLE" in (kinds or ()):
        try:
            rf = estimate.fit(x, EstimationMethod.MLE, config)
            pr: RtgleParams = rf.params
            rep = gof_report(lambda t: rtgle_cdf(pr, t), x,
                             minus2loglik=2.0 * rf.objective, r=4, mode=mode)
            names = ("alpha", "beta", "gamma", "p")
            ses = (dict(zip(names, rf.standard_errors))
                   if rf.standard_errors else None)
            rows.append(ComparisonRow("RTGLE", dict(zip(names, pr.as_tuple())),
                                      ses, rep))
        except (AllStartsFailed, ValueError) as exc:
            rows.append(ComparisonRow("RTGLE", {}, None, None, str(exc)))

    for kind in (kinds or COMPETITOR_KINDS):
        if kind == "RTGLE":
            continue
        spec = _SPECS[kind]
        try:
            cf = fit_competitor(kind, x, config)
            rep = gof_report(lambda t, m=cf.model: competitor_cdf(m, t), x,
                             minus2loglik=cf.minus2loglik,
                             r=len(spec.param_kinds), mode=mode)
            ses = (dict(zip(spec.param_names, cf.standard_errors))
                   if cf.standard_errors else None)
            rows.append(ComparisonRow(kind,
                                      dict(zip(spec.param_names,
                                               cf.model.params)), ses, rep))
        except (AllStartsFailed, ValueError) as exc:
            rows.append(ComparisonRow(kind, {}, None, None, str(exc)))

    rows.sort(key=lambda r: (r.gof is None, r.gof.aic if r.gof else 0.0))
    return rows
