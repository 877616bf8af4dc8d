"""Episode runner and Monte Carlo estimators.

All randomness descends from one base seed: episode ``rep`` of an
experiment derives stream ``j`` from
``numpy.random.SeedSequence(base_seed, spawn_key=(rep, j))`` with stream 0
feeding the policy and stream ``i+1`` feeding arm ``i``.  Replications are
therefore independent, embarrassingly parallel, and bit-reproducible;
aggregation sorts by replication index so serial and parallel runs agree
exactly.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .criteria import RiskCriterion
from .dist import EmpiricalDistribution, proxy_distribution
from .errors import DomainError
from .policy import Policy, PolicyState

__all__ = [
    "Episode",
    "EstimateRow",
    "RegretReport",
    "geometric_checkpoints",
    "run_episode",
    "run_replications",
    "estimate_performance",
    "estimate_proxy_regret",
    "estimate_horizon_gap",
    "estimate_reference_regret",
    "rate_curve",
    "dkw_exceedance",
    "write_report_csv",
    "read_report_csv",
]


@dataclass
class Episode:
    """One bandit trajectory, recorded at checkpoints.

    ``pooled_values[c]`` is the criterion on the pooled empirical CDF of all
    rewards up to checkpoint c; ``proxy_values[c]`` is the criterion on the
    pull-fraction mixture of the true arm CDFs.  ``flagged[c]`` marks
    checkpoints where criterion evaluation failed (values are NaN there).
    """

    seed: int
    rep: int
    horizon: int
    checkpoints: tuple[int, ...]
    tau: np.ndarray          # (n_checkpoints, k) pull counts
    pooled_values: np.ndarray
    proxy_values: np.ndarray
    flagged: np.ndarray


@dataclass
class EstimateRow:
    checkpoint: int
    estimator: str
    value: float
    stderr: float
    reps: int
    flagged: int = 0


@dataclass
class RegretReport:
    rows: list[EstimateRow]
    meta: dict = field(default_factory=dict)


def geometric_checkpoints(k: int, horizon: int) -> tuple[int, ...]:
    """Doubling grid {k, 2k, 4k, ...} capped at and including the horizon."""
    out = []
    t = k
    while t < horizon:
        out.append(t)
        t *= 2
    out.append(horizon)
    return tuple(out)


def _episode_streams(seed: int, rep: int, k: int):
    policy_rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(rep, 0)))
    arm_rngs = [
        np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(rep, i + 1)))
        for i in range(k)
    ]
    return policy_rng, arm_rngs


def run_episode(
    arms,
    policy: Policy,
    criterion: RiskCriterion,
    horizon: int,
    checkpoints=None,
    seed: int = 0,
    rep: int = 0,
) -> Episode:
    """Play one episode and record criterion values at the checkpoints."""
    k = len(arms)
    if horizon < k:
        raise DomainError(f"horizon {horizon} is below the arm count {k}")
    if checkpoints is None:
        checkpoints = geometric_checkpoints(k, horizon)
    checkpoints = tuple(sorted(set(int(c) for c in checkpoints)))
    if checkpoints[0] < k or checkpoints[-1] > horizon:
        raise DomainError(
            f"checkpoints must lie in [{k}, {horizon}], got {checkpoints}"
        )

    policy_rng, arm_rngs = _episode_streams(seed, rep, k)
    vertex = policy.vertex_arm(k)
    if vertex is not None:
        return _run_vertex_episode(
            arms, vertex, criterion, horizon, checkpoints, seed, rep, arm_rngs[vertex]
        )

    state = PolicyState(k)
    session = policy.start(k, criterion, policy_rng)

    n_cp = len(checkpoints)
    tau = np.zeros((n_cp, k), dtype=np.int64)
    pooled_values = np.full(n_cp, np.nan)
    proxy_values = np.full(n_cp, np.nan)
    flagged = np.zeros(n_cp, dtype=bool)
    next_cp = 0

    for _ in range(horizon):
        arm = session.select(state)
        reward = float(arms[arm].sample(arm_rngs[arm], 1)[0])
        state.update(arm, reward)
        if next_cp < n_cp and state.t == checkpoints[next_cp]:
            tau[next_cp] = state.pull_counts
            try:
                pooled_values[next_cp] = criterion.evaluate(state.pooled_empirical())
                proxy_values[next_cp] = criterion.evaluate(
                    proxy_distribution(arms, state.pull_counts, state.t)
                )
            except Exception:
                flagged[next_cp] = True
            next_cp += 1

    return Episode(seed, rep, horizon, checkpoints, tau, pooled_values, proxy_values, flagged)


def _run_vertex_episode(arms, vertex, criterion, horizon, checkpoints, seed, rep, rng):
    """Vectorized fast path for policies that always pull one arm.

    Bit-identical to the step loop: numpy generators produce the same stream
    for n scalar draws and one size-n draw, and only the pulled arm's stream
    is consumed either way.
    """
    k = len(arms)
    draws = arms[vertex].sample(rng, horizon)
    n_cp = len(checkpoints)
    tau = np.zeros((n_cp, k), dtype=np.int64)
    tau[:, vertex] = checkpoints
    pooled_values = np.full(n_cp, np.nan)
    proxy_values = np.full(n_cp, np.nan)
    flagged = np.zeros(n_cp, dtype=bool)
    for idx, c in enumerate(checkpoints):
        try:
            emp = EmpiricalDistribution.from_sorted(np.sort(draws[:c]))
            pooled_values[idx] = criterion.evaluate(emp)
            proxy_values[idx] = criterion.evaluate(proxy_distribution(arms, tau[idx], c))
        except Exception:
            flagged[idx] = True
    return Episode(seed, rep, horizon, checkpoints, tau, pooled_values, proxy_values, flagged)


def _run_one(args):
    arms, policy, criterion, horizon, checkpoints, seed, rep = args
    return run_episode(arms, policy, criterion, horizon, checkpoints, seed, rep)


def run_replications(
    arms,
    policy: Policy,
    criterion: RiskCriterion,
    horizon: int,
    reps: int,
    seed: int,
    checkpoints=None,
    parallel: int = 1,
) -> list[Episode]:
    """Independent episodes rep=0..reps-1; parallel runs match serial ones."""
    if reps < 1:
        raise DomainError(f"need at least one replication, got {reps}")
    jobs = [(arms, policy, criterion, horizon, checkpoints, seed, rep) for rep in range(reps)]
    if parallel <= 1:
        episodes = [_run_one(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            episodes = list(pool.map(_run_one, jobs, chunksize=max(1, reps // (4 * parallel))))
    episodes.sort(key=lambda e: e.rep)
    return episodes


# ---------------------------------------------------------------------------
# Estimators
# ---------------------------------------------------------------------------


def _check_common(episodes):
    if not episodes:
        raise DomainError("no episodes to aggregate")
    cps = episodes[0].checkpoints
    if any(e.checkpoints != cps or e.horizon != episodes[0].horizon for e in episodes):
        raise DomainError("episodes disagree on checkpoints or horizon")
    return cps


def _column_stats(episodes, column: str):
    """Per-checkpoint (mean, stderr, n, flagged) excluding flagged episodes."""
    cps = _check_common(episodes)
    values = np.stack([getattr(e, column) for e in episodes])
    flags = np.stack([e.flagged for e in episodes])
    out = []
    for c in range(len(cps)):
        good = ~flags[:, c]
        vals = values[good, c]
        n = int(good.sum())
        if n == 0:
            out.append((math.nan, math.nan, 0, len(episodes)))
            continue
        mean = float(np.mean(vals))
        stderr = float(np.std(vals, ddof=1) / math.sqrt(n)) if n > 1 else math.nan
        out.append((mean, stderr, n, len(episodes) - n))
    return cps, out


def estimate_performance(episodes) -> list[EstimateRow]:
    """Mean criterion value on the pooled empirical CDF, per checkpoint."""
    cps, stats = _column_stats(episodes, "pooled_values")
    return [
        EstimateRow(cp, "performance", m, se, n, fl)
        for cp, (m, se, n, fl) in zip(cps, stats)
    ]


def estimate_proxy_regret(episodes, p_star_value: float) -> list[EstimateRow]:
    """Mean of ``best stationary value - criterion(proxy mixture)``."""
    cps, stats = _column_stats(episodes, "proxy_values")
    return [
        EstimateRow(cp, "proxy-regret", p_star_value - m, se, n, fl)
        for cp, (m, se, n, fl) in zip(cps, stats)
    ]


def estimate_horizon_gap(episodes) -> list[EstimateRow]:
    """|mean(pooled - proxy)| with the stderr of the signed mean."""
    if len(episodes) < 2:
        raise DomainError("horizon gap needs at least 2 replications")
    cps = _check_common(episodes)
    pooled = np.stack([e.pooled_values for e in episodes])
    proxy = np.stack([e.proxy_values for e in episodes])
    flags = np.stack([e.flagged for e in episodes])
    rows = []
    for c, cp in enumerate(cps):
        good = ~flags[:, c]
        diff = pooled[good, c] - proxy[good, c]
        n = int(good.sum())
        if n < 2:
            rows.append(EstimateRow(cp, "horizon-gap", math.nan, math.nan, n, len(episodes) - n))
            continue
        rows.append(
            EstimateRow(
                cp,
                "horizon-gap",
                abs(float(np.mean(diff))),
                float(np.std(diff, ddof=1) / math.sqrt(n)),
                n,
                len(episodes) - n,
            )
        )
    return rows


def estimate_reference_regret(episodes, reference_episodes) -> list[EstimateRow]:
    """Mean pooled performance of the reference minus the candidate.

    The benchmark is an explicit named policy (finite-horizon optima are not
    computable in general), so rows read "reference regret vs <policy>".
    """
    cps = _check_common(episodes)
    ref_cps = _check_common(reference_episodes)
    if cps != ref_cps or episodes[0].horizon != reference_episodes[0].horizon:
        raise DomainError("candidate and reference episodes use different configs")
    _, cand = _column_stats(episodes, "pooled_values")
    _, ref = _column_stats(reference_episodes, "pooled_values")
    rows = []
    for cp, (m_c, se_c, n_c, fl_c), (m_r, se_r, n_r, fl_r) in zip(cps, cand, ref):
        se = math.sqrt(se_c**2 + se_r**2) if n_c > 1 and n_r > 1 else math.nan
        rows.append(
            EstimateRow(cp, "reference-regret", m_r - m_c, se, min(n_c, n_r), fl_c + fl_r)
        )
    return rows


_RATES = {
    "logT/T": lambda t: math.log(t) / t,
    "1/sqrtT": lambda t: 1.0 / math.sqrt(t),
    "1/T": lambda t: 1.0 / t,
}


def rate_curve(values, horizons, rate) -> np.ndarray:
    """``value / f(T)`` per horizon, for a named rate or a power exponent.

    A float ``rate`` gamma means ``f(T) = T**(-gamma)``.
    """
    values = np.asarray(values, dtype=float)
    horizons = np.asarray(horizons, dtype=float)
    if len(values) != len(horizons):
        raise DomainError("values and horizons must align")
    if isinstance(rate, str):
        if rate not in _RATES:
            raise DomainError(f"unknown rate {rate!r}; choose from {sorted(_RATES)}")
        f = np.array([_RATES[rate](t) for t in horizons])
    else:
        f = horizons ** (-float(rate))
    return values / f


# ---------------------------------------------------------------------------
# Empirical concentration
# ---------------------------------------------------------------------------


def dkw_exceedance(dist, t: int, x: float, reps: int, seed: int = 0) -> float:
    """Fraction of replications with ``sup |F_hat_t - F| >= x``.

    The sup is exact: over sample points (both sides) and the distribution's
    own jump points (both sides).
    """
    if reps < 100:
        raise DomainError(f"need at least 100 replications, got {reps}")
    if x <= 0.0:
        return 1.0
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0,)))
    draws = np.sort(dist.sample(rng, reps * t).reshape(reps, t), axis=1)
    grid = np.arange(1, t + 1) / t
    f_right = np.asarray(dist.cdf(draws))
    f_left = np.asarray(dist.cdf_left(draws))
    sup = np.maximum(
        np.max(grid[None, :] - f_right, axis=1),
        np.max(f_left - grid[None, :] + 1.0 / t, axis=1),
    )
    for b in dist.breakpoints():
        fb = float(dist.cdf(b))
        fb_left = float(dist.cdf_left(b))
        emp_right = np.sum(draws <= b, axis=1) / t
        emp_left = np.sum(draws < b, axis=1) / t
        sup = np.maximum(sup, np.abs(emp_right - fb))
        sup = np.maximum(sup, np.abs(emp_left - fb_left))
    return float(np.mean(sup >= x))


# ---------------------------------------------------------------------------
# CSV contract
# ---------------------------------------------------------------------------

_CSV_COLUMNS = ("checkpoint", "estimator", "value", "stderr", "reps", "flagged")


def write_report_csv(path, report: RegretReport) -> None:
    """One row per (checkpoint, estimator); metadata as '# key=value' header."""
    with open(path, "w", encoding="utf-8") as fh:
        for key in sorted(report.meta):
            fh.write(f"# {key}={report.meta[key]}\n")
        fh.write(",".join(_CSV_COLUMNS) + "\n")
        for row in report.rows:
            fh.write(
                f"{row.checkpoint},{row.estimator},{float(row.value)!r},"
                f"{float(row.stderr)!r},{row.reps},{row.flagged}\n"
            )


def read_report_csv(path) -> RegretReport:
    meta = {}
    rows = []
    with open(path, encoding="utf-8") as fh:
        header_seen = False
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                meta[key] = value
                continue
            if not header_seen:
                if line != ",".join(_CSV_COLUMNS):
                    raise DomainError(f"unexpected CSV header: {line}")
                header_seen = True
                continue
            cp, est, value, stderr, reps, flagged = line.split(",")
            rows.append(
                EstimateRow(int(cp), est, float(value), float(stderr), int(reps), int(flagged))
            )
    return RegretReport(rows, meta)
