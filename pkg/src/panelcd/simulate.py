"""Monte Carlo engine: panel generators and size/power experiments.

Replications are mutually independent: replication j of an experiment with
seed s draws from the stream keyed by (s, j), so results are bit-identical
regardless of how replications are distributed over workers. Within a
replication the draw order is fixed: regressor scale draws, regressor
innovations (burn-in included), then the errors (under the null: unit
error scales, idiosyncratic noise; under an alternative: idiosyncratic
noise, factor loadings, factor path), unit effects, and finally per-unit
slopes in the heterogeneous variant.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .cdtests import TestName, run_all_tests
from .correlation import summarize_residuals
from .errors import PanelCdError
from .panel import PanelData, center_panel, fit_pooled_ols, fit_unit_ols

JOBS_ENV_VAR = "PANELCD_JOBS"

# Fixed result order of run_all_tests.
TEST_ORDER = (
    TestName.LM,
    TestName.CD,
    TestName.LM_ADJ,
    TestName.LM_BC,
    TestName.LM_RMT,
    TestName.LM_E,
    TestName.PET,
)


class ErrorDist(enum.Enum):
    NORMAL = "normal"
    STUDENT_T7 = "student_t7"
    CHISQ5 = "chisq5"


class SlopeMode(enum.Enum):
    FIXED_EFFECTS = "fixed_effects"
    HETEROGENEOUS = "heterogeneous"


class AltKind(enum.Enum):
    NULL = "null"
    DENSE = "dense"
    SPARSE = "sparse"
    LESS_SPARSE = "less_sparse"


@dataclass(frozen=True)
class Alternative:
    kind: AltKind
    h: float = 0.0

    def __post_init__(self):
        if self.kind is AltKind.DENSE and not self.h > 0:
            raise ValueError("dense alternative needs factor strength h > 0")


NULL_ALTERNATIVE = Alternative(AltKind.NULL)


@dataclass(frozen=True)
class DgpConfig:
    """One simulation cell. k counts regressors including the intercept,
    so k - 1 stochastic regressors are generated."""

    n: int
    T: int
    k: int
    error_dist: ErrorDist = ErrorDist.NORMAL
    slope_mode: SlopeMode = SlopeMode.FIXED_EFFECTS
    alternative: Alternative = NULL_ALTERNATIVE
    burn_in: int = 50
    ar_coef: float = 0.6

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"need n >= 2, got {self.n}")
        if self.k < 2:
            raise ValueError(f"need k >= 2 (intercept plus a regressor), got {self.k}")
        if self.T < self.k + 1:
            raise ValueError(f"need T >= k + 1, got T={self.T}, k={self.k}")


@dataclass(frozen=True)
class McReport:
    config: DgpConfig
    replications: int
    alpha: float
    seed: int
    rejection_rate: dict[TestName, float]
    mc_se: dict[TestName, float]
    excluded: int = 0


def replication_rng(seed: int, rep: int) -> np.random.Generator:
    """Independent, order-insensitive stream for one replication."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(rep,)))


def gen_regressors(
    rng: np.random.Generator,
    n: int,
    T: int,
    k: int,
    burn_in: int = 50,
    ar_coef: float = 0.6,
) -> np.ndarray:
    """AR(1) regressors with per-series chi-square innovation scales.

    Returns an (n, T, k-1) array; the first ``burn_in`` observations of
    each AR path are discarded. The innovation standard deviation sigma
    satisfies sigma^2 = tau^2 / (1 - ar_coef^2), so the stationary variance
    of each series is tau^2 / (1 - ar_coef^2)^2.
    """
    m = k - 1
    tau2 = rng.chisquare(6, size=(n, m)) / 6.0
    u = rng.standard_normal(size=(n, burn_in + T, m))
    sigma = np.sqrt(tau2 / (1.0 - ar_coef**2))
    x = lfilter([1.0], [1.0, -ar_coef], sigma[:, None, :] * u, axis=1)
    return np.ascontiguousarray(x[:, burn_in:, :])


def standardized_noise(
    rng: np.random.Generator, n: int, T: int, error_dist: ErrorDist
) -> np.ndarray:
    """Mean-zero, unit-variance draws from the chosen distribution."""
    if error_dist is ErrorDist.NORMAL:
        return rng.standard_normal(size=(n, T))
    if error_dist is ErrorDist.STUDENT_T7:
        return rng.standard_t(7, size=(n, T)) / math.sqrt(7.0 / 5.0)
    if error_dist is ErrorDist.CHISQ5:
        return (rng.chisquare(5, size=(n, T)) - 5.0) / math.sqrt(10.0)
    raise ValueError(f"unknown error distribution {error_dist!r}")


def gen_errors_null(
    rng: np.random.Generator, n: int, T: int, error_dist: ErrorDist
) -> np.ndarray:
    """Cross-sectionally independent errors sigma_i * eps_it.

    The unit variances sigma_i^2 are chi-square(2)/2 draws; eps_it is
    standardized to mean zero and unit variance under each distribution.
    """
    sigma = np.sqrt(rng.chisquare(2, size=n) / 2.0)
    return sigma[:, None] * standardized_noise(rng, n, T, error_dist)


def n_correlated_units(n: int, alternative: Alternative) -> int:
    """Number of units loading on the common factor under sparse designs."""
    if alternative.kind is AltKind.SPARSE:
        return int(math.floor(n**0.3))
    if alternative.kind is AltKind.LESS_SPARSE:
        return math.isqrt(n)
    raise ValueError(f"no sparse loading count for {alternative.kind}")


def gen_loadings(
    rng: np.random.Generator, n: int, alternative: Alternative
) -> np.ndarray:
    """Factor loadings for the three alternative designs."""
    if alternative.kind is AltKind.DENSE:
        b = math.sqrt(3.0 * alternative.h / n)
        return rng.uniform(-b, b, size=n)
    if alternative.kind in (AltKind.SPARSE, AltKind.LESS_SPARSE):
        m = n_correlated_units(n, alternative)
        lam = np.zeros(n)
        lam[:m] = rng.uniform(0.5, 1.5, size=m)
        return lam
    raise ValueError("loadings are only defined under an alternative")


def gen_panel_with_errors(
    config: DgpConfig, rng: np.random.Generator
) -> tuple[PanelData, np.ndarray]:
    """Draw one panel and also return its error matrix nu (n, T).

    Under the null the errors carry heteroskedastic unit scales; under a
    factor alternative they are nu = lam * f + eps with unit-variance
    idiosyncratic noise, so the correlation between units r and s is
    lam_r lam_s up to the (1 + lam^2) normalizations.
    """
    n, T, k = config.n, config.T, config.k
    x = gen_regressors(rng, n, T, k, config.burn_in, config.ar_coef)
    if config.alternative.kind is AltKind.NULL:
        nu = gen_errors_null(rng, n, T, config.error_dist)
    else:
        eps = standardized_noise(rng, n, T, config.error_dist)
        lam = gen_loadings(rng, n, config.alternative)
        f = rng.standard_normal(size=T)
        nu = lam[:, None] * f[None, :] + eps
    mu = rng.normal(1.0, 1.0, size=n)
    if config.slope_mode is SlopeMode.FIXED_EFFECTS:
        beta = np.arange(2, k + 1, dtype=np.float64)  # beta_l = l
        signal = x @ beta
    else:
        beta = rng.normal(1.0, 0.2, size=(n, k - 1))
        signal = np.einsum("itl,il->it", x, beta)
    y = 1.0 + signal + mu[:, None] + nu
    return PanelData(y=y, x=x), nu


def gen_panel(config: DgpConfig, rng: np.random.Generator) -> PanelData:
    return gen_panel_with_errors(config, rng)[0]


def _resolve_jobs(jobs: int | None) -> int:
    if jobs is None:
        env = os.environ.get(JOBS_ENV_VAR, "")
        jobs = int(env) if env else (os.cpu_count() or 1)
    return max(1, jobs)


def _chunk_ranges(replications: int, jobs: int) -> list[tuple[int, int]]:
    size = math.ceil(replications / jobs)
    return [
        (start, min(start + size, replications))
        for start in range(0, replications, size)
    ]


def _run_chunk(args):
    config, seed, start, stop, alpha, collect = args
    rejects = np.zeros(len(TEST_ORDER), dtype=np.int64)
    excluded = 0
    stats = np.full((stop - start, len(TEST_ORDER)), np.nan) if collect else None
    unit_slopes = config.slope_mode is SlopeMode.HETEROGENEOUS
    for rep in range(start, stop):
        rng = replication_rng(seed, rep)
        try:
            panel = gen_panel(config, rng)
            results = run_all_tests(panel, config.k, alpha, unit_slopes=unit_slopes)
        except PanelCdError:
            excluded += 1
            continue
        rejects += np.fromiter(
            (r.reject for r in results), dtype=np.int64, count=len(results)
        )
        if collect:
            stats[rep - start] = [r.statistic for r in results]
    return rejects, excluded, stats


def _map_chunks(worker, arg_list, jobs):
    if jobs == 1 or len(arg_list) == 1:
        return [worker(a) for a in arg_list]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, arg_list))


def run_experiment(
    config: DgpConfig,
    replications: int,
    alpha: float = 0.05,
    seed: int = 0,
    jobs: int | None = None,
) -> McReport:
    """Empirical rejection frequencies of all tests over replications.

    Replications that fail (for example a singular design) are excluded
    from the denominator and counted in ``excluded``. The result is
    identical for any worker count.
    """
    if replications < 1:
        raise ValueError("need at least one replication")
    jobs = _resolve_jobs(jobs)
    arg_list = [
        (config, seed, start, stop, alpha, False)
        for start, stop in _chunk_ranges(replications, jobs)
    ]
    parts = _map_chunks(_run_chunk, arg_list, jobs)
    rejects = sum(p[0] for p in parts)
    excluded = sum(p[1] for p in parts)
    effective = replications - excluded
    rates, ses = {}, {}
    for i, name in enumerate(TEST_ORDER):
        p = rejects[i] / effective if effective else math.nan
        rates[name] = float(p)
        ses[name] = (
            math.sqrt(p * (1.0 - p) / effective) if effective else math.nan
        )
    return McReport(
        config=config,
        replications=replications,
        alpha=alpha,
        seed=seed,
        rejection_rate=rates,
        mc_se=ses,
        excluded=excluded,
    )


def statistic_samples(
    config: DgpConfig,
    replications: int,
    alpha: float = 0.05,
    seed: int = 0,
    jobs: int | None = None,
) -> np.ndarray:
    """Raw statistic values, one row per replication in TEST_ORDER columns.

    Failed replications yield NaN rows.
    """
    jobs = _resolve_jobs(jobs)
    arg_list = [
        (config, seed, start, stop, alpha, True)
        for start, stop in _chunk_ranges(replications, jobs)
    ]
    parts = _map_chunks(_run_chunk, arg_list, jobs)
    return np.concatenate([p[2] for p in parts], axis=0)


def _centered_rows(mat: np.ndarray) -> np.ndarray:
    return mat - mat.mean(axis=1, keepdims=True)


def _probe_chunk(args):
    config, seed, start, stop = args
    gaps = np.full((stop - start, 2), np.nan)
    excluded = 0
    for rep in range(start, stop):
        rng = replication_rng(seed, rep)
        try:
            panel, errors = gen_panel_with_errors(config, rng)
            cp = center_panel(panel)
            if config.slope_mode is SlopeMode.HETEROGENEOUS:
                residuals = fit_unit_ols(cp).residuals
            else:
                residuals = fit_pooled_ols(cp).residuals
            cs_resid = summarize_residuals(residuals)
            cs_error = summarize_residuals(_centered_rows(errors))
        except PanelCdError:
            excluded += 1
            continue
        gaps[rep - start, 0] = abs(cs_resid.trace_r2 - cs_error.trace_r2)
        gaps[rep - start, 1] = abs(cs_resid.trace_r4 - cs_error.trace_r4)
    return gaps, excluded


def trace_gap_probe(
    config: DgpConfig,
    replications: int,
    seed: int = 0,
    jobs: int | None = None,
) -> np.ndarray:
    """Per-replication gaps |tr(Rhat^p) - tr(R^p)| for p = 2, 4.

    The residual-based and true-error-based correlation traces should
    converge as n and T grow proportionally; this probe measures the gap
    empirically. Restricted to the null DGP, where the trace comparison
    is meaningful.
    """
    if config.alternative.kind is not AltKind.NULL:
        raise ValueError("trace gap probe is defined under the null DGP only")
    jobs = _resolve_jobs(jobs)
    arg_list = [
        (config, seed, start, stop)
        for start, stop in _chunk_ranges(replications, jobs)
    ]
    parts = _map_chunks(_probe_chunk, arg_list, jobs)
    return np.concatenate([p[0] for p in parts], axis=0)
