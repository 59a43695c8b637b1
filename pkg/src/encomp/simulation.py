"""Monte Carlo harness: the mixture DGP, warp-speed size/power runs and ERP data.

Replication ``r`` draws its data from substream ``(seed, r, "dgp")`` and its
single bootstrap multiplier vector from ``(seed, r, "multiplier")``.  Neither
depends on ``gamma``, so runs over different ``gamma`` share random numbers.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import ndtr

from .bootstrap import TestConfig, bootstrap_sample, draw_multipliers, prepare
from .model import Sample, substream, validate_sample
from .statistics import ALL_KINDS, StatisticKind, compute_all


def m_fun(w):
    return w**3 - 2.0 * w


def h_fun(w):
    return w**2 - 0.25


def delta_fun(x):
    return x**4 - 3.0 * x**2


@dataclass(frozen=True)
class DgpSpec:
    """``Y = m(W) + h(W) X + gamma delta(X) + eta`` with ``X | W`` a two-normal mixture.

    ``W ~ N(0, sigma_w^2)``; the narrow component is drawn with probability
    ``P(W' <= W)`` for an independent copy ``W'``.  ``gamma = 0`` is the null.
    """

    n: int
    gamma: float = 0.0
    sigma_w: float = 0.5
    sds: tuple[float, float] = (0.25, 0.75)

    def mixing_weight(self, w):
        return ndtr(np.asarray(w, dtype=np.float64) / self.sigma_w)

    def cond_delta_mean(self, w):
        """``E[delta(X) | W = w]`` in closed form."""
        pw = self.mixing_weight(w)
        m1, m2 = (3.0 * s**4 - 3.0 * s**2 for s in self.sds)
        return pw * m1 + (1.0 - pw) * m2


def draw_dgp(spec: DgpSpec, rng: np.random.Generator, w=None) -> Sample:
    """One sample; pass ``w`` to fix the conditioning draws (testing hook)."""
    n = spec.n
    if w is None:
        w = spec.sigma_w * rng.standard_normal(n)
    else:
        w = np.broadcast_to(np.asarray(w, dtype=np.float64), (n,)).copy()
    u = rng.random(n)
    z = rng.standard_normal(n)
    eta = rng.standard_normal(n)
    x = z * np.where(u < spec.mixing_weight(w), spec.sds[0], spec.sds[1])
    y = m_fun(w) + h_fun(w) * x + spec.gamma * delta_fun(x) + eta
    return validate_sample(y, w, x)


@dataclass(frozen=True)
class SimulationCell:
    dgp: DgpSpec
    config: TestConfig = field(default_factory=TestConfig)
    kinds: tuple[StatisticKind, ...] = ALL_KINDS
    reps: int = 1000

    def __post_init__(self):
        if self.reps < 1:
            raise ValueError("reps must be at least 1")
        object.__setattr__(self, "kinds", tuple(StatisticKind(k) for k in self.kinds))


def warp_speed_pvalues(stats, boot_stats) -> np.ndarray:
    """``(1 + #{r': S*_r' >= S_r}) / (R + 1)`` for every replication ``r``."""
    stats = np.asarray(stats, dtype=np.float64)
    srt = np.sort(np.asarray(boot_stats, dtype=np.float64))
    count = srt.size - np.searchsorted(srt, stats, side="left")
    return (1.0 + count) / (srt.size + 1.0)


ERP_GRID = tuple(round(k / 100, 2) for k in range(1, 100))


@dataclass(frozen=True, eq=False)
class RejectionReport:
    cell: SimulationCell
    stats: dict  # kind -> (R,) original statistics
    boot_stats: dict  # kind -> (R,) one bootstrap statistic per replication
    pvalues: dict  # kind -> (R,)
    bandwidths: np.ndarray
    taus: np.ndarray

    @property
    def reps(self) -> int:
        return self.bandwidths.shape[0]

    def rejection(self, kind, level: float) -> float:
        return float(np.mean(self.pvalues[StatisticKind(kind)] <= level))

    def mc_se(self, kind, level: float) -> float:
        pi = self.rejection(kind, level)
        return float(np.sqrt(pi * (1.0 - pi) / self.reps))

    def table(self) -> list[tuple[StatisticKind, float, float, float]]:
        """``(kind, level, proportion, mc_se)`` rows."""
        return [
            (k, lv, self.rejection(k, lv), self.mc_se(k, lv))
            for k in self.cell.kinds
            for lv in self.cell.config.levels
        ]

    def erp_curve(self, kind, grid=ERP_GRID) -> list[tuple[float, float]]:
        return [(lv, self.rejection(kind, lv) - lv) for lv in grid]


def resolve_threads(threads: int | None = None) -> int:
    if threads is None:
        threads = int(os.environ.get("ENCOMP_THREADS", "1") or 1)
    return max(1, int(threads))


def _replicate(cell: SimulationCell, r: int):
    cfg = cell.config
    sample = draw_dgp(cell.dgp, substream(cfg.seed, r, "dgp"))
    prep = prepare(sample, cfg)
    y = prep.sample.y
    stats = compute_all(cell.kinds, y, prep.ctx, prep.A)
    xi = draw_multipliers(cfg.law, sample.n, substream(cfg.seed, r, "multiplier"))
    boot = compute_all(cell.kinds, bootstrap_sample(y, prep.ctx, xi), prep.ctx, prep.A)
    return stats, boot, prep.h, prep.ctx.tau


def warp_speed_run(cell: SimulationCell, threads: int | None = None) -> RejectionReport:
    """Warp-speed Monte Carlo: one bootstrap draw per replication, pooled across replications."""
    workers = resolve_threads(threads)
    reps = range(cell.reps)
    if workers == 1:
        out = [_replicate(cell, r) for r in reps]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            out = list(pool.map(lambda r: _replicate(cell, r), reps))
    stats = {k: np.array([o[0][k] for o in out]) for k in cell.kinds}
    boot = {k: np.array([o[1][k] for o in out]) for k in cell.kinds}
    pvals = {k: warp_speed_pvalues(stats[k], boot[k]) for k in cell.kinds}
    return RejectionReport(
        cell,
        stats,
        boot,
        pvals,
        np.array([o[2] for o in out]),
        np.array([o[3] for o in out]),
    )


def power_curve(base: SimulationCell, gammas, threads: int | None = None) -> dict[float, RejectionReport]:
    gammas = [float(g) for g in gammas]
    if 0.0 not in gammas:
        raise ValueError("gammas must include 0 (the size point)")
    return {
        g: warp_speed_run(replace(base, dgp=replace(base.dgp, gamma=g)), threads) for g in gammas
    }


def _mean_se(v: np.ndarray) -> tuple[float, float]:
    return float(v.mean()), float(v.std(ddof=1) / np.sqrt(v.size))


def encompassing_oracle_check(num_draws: int, rng: np.random.Generator, gamma: float = 1.0, s_values=(0.5, 1.0, 2.0)) -> dict:
    """Monte Carlo look at the mechanism behind the DGP's null.

    ``h_moments`` holds ``E[h(W) k(X)]`` (zero under the construction);
    ``residual_moments`` holds ``E[(Y - E(Y|W)) cos(sX)]`` at ``gamma``, which
    is nonzero for some ``s`` when ``gamma != 0``.  Each entry is
    ``(estimate, standard error)``.
    """
    spec = DgpSpec(num_draws, gamma)
    s = draw_dgp(spec, rng)
    w, x, y = s.w[:, 0], s.x[:, 0], s.y
    hw = h_fun(w)
    tests = {"1": np.ones_like(x), "x": x, "x^2": x**2, "cos(x)": np.cos(x)}
    resid = y - m_fun(w) - gamma * spec.cond_delta_mean(w)
    return {
        "h_moments": {name: _mean_se(hw * k) for name, k in tests.items()},
        "residual_moments": {sv: _mean_se(resid * np.cos(sv * x)) for sv in s_values},
        "delta_cos": _mean_se(delta_fun(x) * np.cos(x)),
    }
