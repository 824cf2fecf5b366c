"""Hyperparameter search: seeded random search and a light TPE variant."""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .space import SPACES, Dim, SearchSpace, check_family

GAMMA = 0.25
N_CANDIDATES = 24


def default_space(family: str) -> SearchSpace:
    return SPACES[check_family(family)]


@dataclass
class Trial:
    params: dict
    score: float
    duration_s: float = 0.0

    @property
    def failed(self) -> bool:
        return not math.isfinite(self.score)


@dataclass
class TrialLog:
    trials: list[Trial] = field(default_factory=list)

    @property
    def best_index(self) -> int | None:
        best = None
        for i, t in enumerate(self.trials):
            if not t.failed and (best is None or t.score > self.trials[best].score):
                best = i
        return best

    @property
    def best(self) -> Trial | None:
        i = self.best_index
        return None if i is None else self.trials[i]

    def running_best(self) -> list[float]:
        out, cur = [], -math.inf
        for t in self.trials:
            if not t.failed:
                cur = max(cur, t.score)
            out.append(cur)
        return out

    def to_jsonl(self, family: str = "") -> str:
        return "".join(json.dumps({"family": family, "params": t.params,
                                   "score": t.score if not t.failed else None,
                                   "duration_s": t.duration_s}, sort_keys=True) + "\n"
                       for t in self.trials)


def _numeric_density(dim: Dim, points: list, u: np.ndarray) -> np.ndarray:
    """Gaussian Parzen mixture on the unit interval plus a uniform prior component."""
    obs = np.array([dim.to_unit(p) for p in points])
    n = len(obs)
    bw = max(0.05, n ** (-1.0 / 5.0) * 0.5) if n else 1.0
    dens = np.full(u.shape, 1.0)        # prior: uniform on [0, 1]
    if n:
        z = (u[:, None] - obs[None]) / bw
        dens = dens + np.exp(-0.5 * z * z).sum(axis=1) / (bw * math.sqrt(2 * math.pi))
    return dens / (n + 1)


def _categorical_probs(dim: Dim, points: list) -> np.ndarray:
    counts = np.ones(len(dim.choices))
    for p in points:
        counts[dim.choices.index(p)] += 1
    return counts / counts.sum()


def _tpe_propose(space: SearchSpace, log: TrialLog, rng: np.random.Generator) -> dict:
    done = [t for t in log.trials if not t.failed]
    if len(done) < 2:
        return space.sample(rng)
    ranked = sorted(range(len(done)), key=lambda i: (-done[i].score, i))
    n_good = max(1, int(math.ceil(GAMMA * len(done))))
    good = [done[i].params for i in ranked[:n_good]]
    bad = [done[i].params for i in ranked[n_good:]]
    cands = [dict() for _ in range(N_CANDIDATES)]
    log_ratio = np.zeros(N_CANDIDATES)
    for dim in space.dims:
        g_pts = [p[dim.name] for p in good]
        b_pts = [p[dim.name] for p in bad]
        if dim.kind == "categorical":
            pl, pg = _categorical_probs(dim, g_pts), _categorical_probs(dim, b_pts)
            idx = rng.choice(len(dim.choices), N_CANDIDATES, p=pl)
            values = [dim.choices[i] for i in idx]
            log_ratio += np.log(pl[idx]) - np.log(pg[idx])
        else:
            obs = np.array([dim.to_unit(p) for p in g_pts])
            bw = max(0.05, len(obs) ** (-1.0 / 5.0) * 0.5)
            centers = np.concatenate([obs, [np.nan]])
            pick = rng.integers(0, len(centers), N_CANDIDATES)
            u = np.where(np.isnan(centers[pick]), rng.uniform(0, 1, N_CANDIDATES),
                         np.nan_to_num(centers[pick]) + bw * rng.normal(size=N_CANDIDATES))
            u = np.clip(u, 0.0, 1.0)
            values = [dim.from_unit(x) for x in u]
            snapped = np.array([dim.to_unit(v) for v in values])
            log_ratio += np.log(_numeric_density(dim, g_pts, snapped)) - np.log(_numeric_density(dim, b_pts, snapped))
        for c, v in zip(cands, values):
            c[dim.name] = v
    return cands[int(np.argmax(log_ratio))]


def _evaluate(objective, params) -> Trial:
    t0 = time.perf_counter()
    value = objective(params)
    value = float(value) if value is not None else -math.inf
    if not math.isfinite(value):
        value = -math.inf
    return Trial(params, value, time.perf_counter() - t0)


def search(space: SearchSpace, budget: int, objective: Callable[[dict], float], seed: int = 0,
           strategy: str = "tpe_lite", workers: int = 1) -> TrialLog:
    """Run exactly ``budget`` objective evaluations and return the trial log.

    Points are drawn serially from ``seed``; ``workers`` only parallelizes
    evaluation of points already drawn (the random batch, or tpe_lite's
    random start-up phase), so it never changes the trial sequence.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if strategy not in ("random", "tpe_lite"):
        raise ValueError(f"unknown strategy {strategy!r}")
    rng = np.random.default_rng(seed)
    n_random = budget if strategy == "random" else min(budget, max(10, budget // 5))
    first = [space.sample(rng) for _ in range(n_random)]
    log = TrialLog()
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            log.trials.extend(pool.map(lambda p: _evaluate(objective, p), first))
    else:
        log.trials.extend(_evaluate(objective, p) for p in first)
    while len(log.trials) < budget:
        log.trials.append(_evaluate(objective, _tpe_propose(space, log, rng)))
    return log
