from __future__ import annotations

import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
import structlog
from pydantic import BaseModel, Field

from calibration.errors import ConfigurationError, FitError
from engine.config import GameConfig, load_settings
from engine.runner import run_trials, trial_seed
from signgame.solver import SolverBudget

log = structlog.get_logger(__name__)

MIN_FIT_POINTS = 3

SIDESTEP_NOTE = (
    "exponent measured against the implemented forecaster only; the asymptotic "
    "lower bound over all forecasters is not reproducible at this scale"
)


class ScalingPoint(BaseModel):
    T: int
    mean_calerr: float
    std_err: float
    trials: int


class ScalingResult(BaseModel):
    adversary: str
    forecaster: str
    seed: int
    points: List[ScalingPoint]
    fitted_exponent: float
    intercept: float
    bootstrap_ci: Tuple[float, float]
    excluded: List[int] = Field(default_factory=list)  # T values with zero mean CalErr
    note: Optional[str] = None


def fit_loglog(ts: Sequence[float], means: Sequence[float]) -> Tuple[float, float, List[int]]:
    """Least-squares slope and intercept of ln(mean) against ln(T).

    Points with a zero mean are dropped with a warning and reported back.
    """
    t_arr = np.asarray(ts, dtype=float)
    m_arr = np.asarray(means, dtype=float)
    keep = m_arr > 0
    excluded = [int(t) for t in t_arr[~keep]]
    if excluded:
        log.warning("scaling_points_excluded", T=excluded, reason="zero mean calerr")
    if int(keep.sum()) < MIN_FIT_POINTS:
        raise FitError(f"need at least {MIN_FIT_POINTS} points with positive mean CalErr, got {int(keep.sum())}")
    slope, intercept = np.polyfit(np.log(t_arr[keep]), np.log(m_arr[keep]), 1)
    return float(slope), float(intercept), excluded


def bootstrap_slope_ci(
    ts: Sequence[int],
    samples: Sequence[np.ndarray],
    *,
    resamples: int,
    rng: np.random.Generator,
    level: float = 0.95,
) -> Tuple[float, float]:
    """Percentile interval of the log-log slope, resampling trials within each T."""
    x = np.log(np.asarray(ts, dtype=float))
    means = np.empty((resamples, len(samples)))
    for j, sample in enumerate(samples):
        sample = np.asarray(sample, dtype=float)
        picks = rng.integers(0, sample.size, size=(resamples, sample.size))
        means[:, j] = sample[picks].mean(axis=1)

    with np.errstate(divide="ignore"):
        y = np.log(means)
    usable = np.isfinite(y)
    slopes = []
    for row, mask in zip(y, usable):
        if mask.sum() < MIN_FIT_POINTS:
            continue
        xs, ys = x[mask], row[mask]
        dx = xs - xs.mean()
        slopes.append(float((dx * (ys - ys.mean())).sum() / (dx * dx).sum()))
    if not slopes:
        raise FitError("no bootstrap resample had enough positive means to fit")
    tail = (1 - level) / 2 * 100
    lo, hi = np.percentile(slopes, [tail, 100 - tail])
    return float(lo), float(hi)


def parse_t_list(text: str) -> List[int]:
    """`4096,8192,16384` or the power range `2^12..2^18`."""
    text = text.strip()
    try:
        if ".." in text:
            lo_text, hi_text = (part.strip() for part in text.split("..", 1))
            lo_base, _, lo_exp = lo_text.partition("^")
            hi_base, _, hi_exp = hi_text.partition("^")
            if not (lo_exp and hi_exp) or lo_base != hi_base:
                raise ValueError(text)
            base = int(lo_base)
            values = [base**e for e in range(int(lo_exp), int(hi_exp) + 1)]
        else:
            values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise ConfigurationError(f"cannot parse T list {text!r}; use '4096,8192' or '2^12..2^18'") from exc
    if any(v < 1 for v in values) or values != sorted(set(values)):
        raise ConfigurationError(f"T list must be increasing positive integers, got {values}")
    return values


def scaling_experiment(
    adversary: str,
    forecaster: str,
    t_list: Sequence[int],
    trials: int,
    seed: int = 0,
    *,
    alpha: Optional[float] = None,
    beta: Optional[float] = None,
    c0: Optional[float] = None,
    player_a: str = "binary",
    workers: int = 1,
    resamples: Optional[int] = None,
    budget: Optional[SolverBudget] = None,
) -> ScalingResult:
    """Mean CalErr over `trials` games per T, fitted to a power of T."""
    if len(t_list) < MIN_FIT_POINTS:
        raise ConfigurationError(f"scaling needs at least {MIN_FIT_POINTS} horizons, got {len(t_list)}")
    settings = load_settings()
    resamples = resamples or settings.bootstrap_resamples
    budget = budget or settings.solver_budget

    points: List[ScalingPoint] = []
    samples: List[np.ndarray] = []
    for T in t_list:
        config = GameConfig(
            horizon=T,
            seed=trial_seed(seed, T),
            adversary=adversary,
            forecaster=forecaster,
            alpha=alpha,
            beta=beta,
            c0=c0,
            player_a=player_a,
            keep_transcript=False,
        )
        results = run_trials(config, trials, workers=workers, budget=budget)
        errors = np.array([r.final_calerr for r in results], dtype=float)
        std_err = float(errors.std(ddof=1) / math.sqrt(errors.size)) if errors.size > 1 else 0.0
        points.append(ScalingPoint(T=T, mean_calerr=float(errors.mean()), std_err=std_err, trials=errors.size))
        samples.append(errors)
        log.info("scaling_point", T=T, mean_calerr=points[-1].mean_calerr, std_err=std_err)

    slope, intercept, excluded = fit_loglog([p.T for p in points], [p.mean_calerr for p in points])
    kept = [j for j, p in enumerate(points) if p.T not in excluded]
    lo, hi = bootstrap_slope_ci(
        [points[j].T for j in kept],
        [samples[j] for j in kept],
        resamples=resamples,
        rng=np.random.default_rng(seed),
    )
    return ScalingResult(
        adversary=adversary,
        forecaster=forecaster,
        seed=seed,
        points=points,
        fitted_exponent=slope,
        intercept=intercept,
        # percentile intervals can miss a skewed point estimate; widen to cover it
        bootstrap_ci=(min(lo, slope), max(hi, slope)),
        excluded=excluded,
        note=SIDESTEP_NOTE if "sidestep" in adversary else None,
    )
