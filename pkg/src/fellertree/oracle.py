"""Finite-population branching processes used as Monte Carlo ground truth.

Two pre-limit models converge to the Feller diffusion:

* a Bienayme-Galton-Watson (BGW) process with Poisson(lambda) offspring,
  where ``i`` generations correspond to ``alpha t = i log(lambda)`` and ``Y``
  individuals to ``alpha X = Y log(lambda) / sigma^2``;
* a binary birth-death (BD) process with per-capita rates
  ``1/(2 eps) + alpha/2`` and ``1/(2 eps) - alpha/2``, where ``X = eps M``.

Both record enough genealogy to walk any final individual back to its
ancestors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import DomainError, ResourceCapError

MEMORY_CAP = 10_000_000


# ---------------------------------------------------------------------------
# BGW


@dataclass(frozen=True)
class BgwConfig:
    lam: float
    generations: int
    founders: int = 1
    offspring_law: str = "poisson"
    memory_cap: int = MEMORY_CAP

    def __post_init__(self):
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise DomainError(f"lambda must be positive, got {self.lam}")
        if self.generations < 1:
            raise DomainError("generations must be >= 1")
        if self.founders < 1:
            raise DomainError("founders must be >= 1")
        if self.offspring_law != "poisson":
            raise DomainError(f"unsupported offspring law {self.offspring_law!r}")

    @property
    def sigma2(self) -> float:
        """Offspring variance (equal to the mean for Poisson offspring)."""
        return self.lam

    @property
    def log_lam(self) -> float:
        return math.log(self.lam)

    def scaled_time(self, generations):
        """``alpha t`` for a number of generations, with ``alpha`` set to 1."""
        return np.asarray(generations, dtype=float) * self.log_lam

    def scaled_population(self, y):
        """``alpha X`` for a head count ``y``."""
        return np.asarray(y, dtype=float) * self.log_lam / self.sigma2


@dataclass
class GenealogyTrace:
    """Per-generation sizes and parent pointers.

    ``parents[g][i]`` is the index, within generation ``g``, of the parent
    of individual ``i`` of generation ``g + 1``.
    """

    sizes: np.ndarray
    parents: List[np.ndarray]

    @property
    def generations(self) -> int:
        return len(self.parents)

    @property
    def final_size(self) -> int:
        return int(self.sizes[-1])

    def ancestors(self, idx, back: int) -> np.ndarray:
        """Indices, ``back`` generations earlier, of the ancestors of final ``idx``."""
        cur = np.asarray(idx, dtype=np.int64)
        g = self.generations
        for j in range(g - 1, g - 1 - back, -1):
            cur = self.parents[j][cur]
        return cur

    def founder_of_final(self) -> np.ndarray:
        own = np.arange(int(self.sizes[0]))
        for par in self.parents:
            own = own[par]
        return own


def _poisson_step(rng, lam, n):
    kids = rng.poisson(lam, size=n)
    return np.repeat(np.arange(n, dtype=np.int64), kids)


def simulate_bgw(cfg: BgwConfig, rng: np.random.Generator) -> GenealogyTrace:
    """Forward simulation recording every parent pointer."""
    n = cfg.founders
    sizes = [n]
    parents = []
    stored = n
    for _ in range(cfg.generations):
        par = _poisson_step(rng, cfg.lam, n)
        n = par.size
        stored += n
        if stored > cfg.memory_cap:
            raise ResourceCapError(
                f"genealogy exceeds {cfg.memory_cap} individuals; raise memory_cap")
        parents.append(par)
        sizes.append(n)
    return GenealogyTrace(np.array(sizes, dtype=np.int64), parents)


def simulate_bgw_sizes(cfg: BgwConfig, rng: np.random.Generator, paths: int) -> np.ndarray:
    """Population sizes only, shape ``(paths, generations + 1)``."""
    y = np.full(paths, cfg.founders, dtype=np.int64)
    out = [y]
    for _ in range(cfg.generations):
        y = rng.poisson(cfg.lam * y)
        if np.any(y > cfg.memory_cap):
            raise ResourceCapError(f"population exceeds {cfg.memory_cap}")
        out.append(y)
    return np.stack(out, axis=1)


def _pick_distinct(rng, size, n):
    if size < n:
        raise DomainError(f"final population {size} is smaller than the sample size {n}")
    return rng.choice(size, n, replace=False)


def sample_ancestor_profile(trace: GenealogyTrace, n: int, rng: np.random.Generator
                            ) -> np.ndarray:
    """``A_n`` at 0, 1, ..., G generations back for ``n`` distinct final individuals."""
    cur = _pick_distinct(rng, trace.final_size, n)
    prof = [n]
    for j in range(trace.generations - 1, -1, -1):
        cur = np.unique(trace.parents[j][cur])
        prof.append(cur.size)
    return np.array(prof, dtype=np.int64)


def extract_sample_mrca(trace: GenealogyTrace, n: int, rng: np.random.Generator) -> int:
    """Generations back to the MRCA of ``n`` distinct final individuals.

    Returns ``G + 1`` if the sample descends from more than one founder.
    """
    if n < 2:
        raise DomainError("an MRCA needs n >= 2")
    prof = sample_ancestor_profile(trace, n, rng)
    hit = np.nonzero(prof == 1)[0]
    return int(hit[0]) if hit.size else trace.generations + 1


def extract_ancestor_counts(trace: GenealogyTrace, s_grid) -> np.ndarray:
    """Distinct ancestors of the final population at each ``s`` generations back."""
    s_grid = np.asarray(s_grid, dtype=np.int64)
    if np.any((s_grid < 0) | (s_grid > trace.generations)):
        raise DomainError("s must lie in [0, generations]")
    counts = {0: trace.final_size}
    cur = np.arange(trace.final_size)
    for back, j in enumerate(range(trace.generations - 1, -1, -1), start=1):
        cur = np.unique(trace.parents[j][cur])
        counts[back] = cur.size
    return np.array([counts[int(s)] for s in s_grid], dtype=np.int64)


@dataclass
class SurvivorSample:
    """Per-path summaries from single-founder paths that survived.

    ``mrca`` is the pair MRCA depth in generations (-1 when ``final < 2``) and
    ``ancestors`` the ancestor count ``back`` generations earlier.
    """

    cfg: BgwConfig
    back: int
    final: np.ndarray
    mrca: np.ndarray
    ancestors: np.ndarray
    attempted: int = 0

    def scaled_final(self) -> np.ndarray:
        return self.cfg.scaled_population(self.final)


def _batch_survivors(cfg, rng, batch, back):
    pp = np.arange(batch, dtype=np.int64)
    parents = []
    owner_back = None
    stored = batch
    for g in range(cfg.generations):
        par = _poisson_step(rng, cfg.lam, pp.size)
        pp = pp[par]
        stored += pp.size
        if stored > cfg.memory_cap:
            raise ResourceCapError(f"batch genealogy exceeds {cfg.memory_cap} individuals")
        parents.append(par)
        if g + 1 == cfg.generations - back:
            owner_back = pp
    if back == cfg.generations:
        owner_back = np.arange(batch, dtype=np.int64)
    y = np.bincount(pp, minlength=batch)
    surv = np.nonzero(y > 0)[0]

    # ancestor counts `back` generations before the end, per founder
    cur = np.arange(pp.size)
    for j in range(cfg.generations - 1, cfg.generations - 1 - back, -1):
        cur = parents[j][cur]
    anc = np.bincount(owner_back[np.unique(cur)], minlength=batch)

    # one pair of distinct final individuals per path with y >= 2
    order = np.argsort(pp, kind="stable")
    start = np.searchsorted(pp[order], np.arange(batch))
    two = surv[y[surv] >= 2]
    n2 = y[two]
    i0 = np.floor(rng.random(two.size) * n2).astype(np.int64)
    i1 = (i0 + 1 + np.floor(rng.random(two.size) * (n2 - 1)).astype(np.int64)) % n2
    a = order[start[two] + i0]
    b = order[start[two] + i1]
    depth = np.full(two.size, -1, dtype=np.int64)
    for d, j in enumerate(range(cfg.generations - 1, -1, -1), start=1):
        a = parents[j][a]
        b = parents[j][b]
        hit = (a == b) & (depth < 0)
        depth[hit] = d
    mrca = np.full(batch, -1, dtype=np.int64)
    mrca[two] = depth
    return y[surv], mrca[surv], anc[surv]


def survivors(cfg: BgwConfig, n_paths: int, rng: np.random.Generator, back: int,
              batch: int = 20_000, min_pairs: Optional[int] = None) -> SurvivorSample:
    """Run single-founder BGW paths until ``n_paths`` survive.

    Survival conditioning is by rejection.  Paths are simulated as a forest
    of ``batch`` independent founders at a time.  With ``min_pairs`` the
    run continues until that many survivors also have two or more members.
    """
    if cfg.founders != 1:
        raise DomainError("survivors() runs single-founder paths")
    if n_paths < 1:
        raise DomainError("n_paths must be >= 1")
    if not 0 <= back <= cfg.generations:
        raise DomainError("back must lie in [0, generations]")
    need_pairs = 0 if min_pairs is None else int(min_pairs)
    ys, ms, an = [], [], []
    attempted = 0
    have = pairs = 0
    while have < n_paths or pairs < need_pairs:
        y, m, a = _batch_survivors(cfg, rng, batch, back)
        attempted += batch
        ys.append(y), ms.append(m), an.append(a)
        have += y.size
        pairs += int(np.sum(y >= 2))
    return SurvivorSample(cfg, back, np.concatenate(ys), np.concatenate(ms),
                          np.concatenate(an), attempted)


# ---------------------------------------------------------------------------
# birth-death


@dataclass(frozen=True)
class BdConfig:
    epsilon: float
    alpha: float
    horizon: float
    founders: int = 1
    memory_cap: int = MEMORY_CAP

    def __post_init__(self):
        if not self.epsilon > 0:
            raise DomainError("epsilon must be positive")
        if not self.horizon > 0:
            raise DomainError("horizon must be positive")
        if self.founders < 1:
            raise DomainError("founders must be >= 1")
        if not (self.birth_rate > 0 and self.death_rate > 0):
            raise DomainError(f"epsilon = {self.epsilon} is too large for alpha = {self.alpha}")

    @property
    def birth_rate(self) -> float:
        return 0.5 / self.epsilon + 0.5 * self.alpha

    @property
    def death_rate(self) -> float:
        return 0.5 / self.epsilon - 0.5 * self.alpha


@dataclass
class BdTrace:
    """Event-level genealogy of a birth-death run.

    Individual ``i`` was born at ``birth[i]`` to ``parent[i]`` (-1 for
    founders) and died at ``death[i]`` (``inf`` if alive at the horizon).
    """

    cfg: BdConfig
    birth: np.ndarray
    death: np.ndarray
    parent: np.ndarray
    event_times: np.ndarray = field(repr=False)
    event_sizes: np.ndarray = field(repr=False)

    @property
    def alive(self) -> np.ndarray:
        return np.nonzero(~np.isfinite(self.death))[0]

    @property
    def final_size(self) -> int:
        return int(self.alive.size)

    def scaled_final(self) -> float:
        return self.cfg.epsilon * self.final_size

    def ancestor_at(self, i: int, time: float) -> int:
        """The individual alive at ``time`` whose lineage leads to ``i``."""
        while self.birth[i] > time:
            i = int(self.parent[i])
        return i


def simulate_bd(cfg: BdConfig, rng: np.random.Generator) -> BdTrace:
    """Exact Gillespie simulation recording every birth and death."""
    lam, mu = cfg.birth_rate, cfg.death_rate
    p_birth = lam / (lam + mu)
    birth = list(np.zeros(cfg.founders))
    parent = [-1] * cfg.founders
    death = [math.inf] * cfg.founders
    alive = list(range(cfg.founders))
    t = 0.0
    ev_t, ev_m = [0.0], [cfg.founders]
    while alive:
        t += rng.standard_exponential() / ((lam + mu) * len(alive))
        if t >= cfg.horizon:
            break
        j = int(rng.random() * len(alive))
        if rng.random() < p_birth:
            birth.append(t)
            parent.append(alive[j])
            death.append(math.inf)
            alive.append(len(birth) - 1)
            if len(birth) > cfg.memory_cap:
                raise ResourceCapError(f"BD genealogy exceeds {cfg.memory_cap} individuals")
        else:
            death[alive[j]] = t
            alive[j] = alive[-1]
            alive.pop()
        ev_t.append(t)
        ev_m.append(len(alive))
    return BdTrace(cfg, np.array(birth), np.array(death), np.array(parent, dtype=np.int64),
                   np.array(ev_t), np.array(ev_m, dtype=np.int64))


def simulate_bd_sizes(cfg: BdConfig, rng: np.random.Generator, paths: int,
                      times=None) -> np.ndarray:
    """Final (or gridded) counts ``M`` for many independent paths.

    All paths advance one event per step, so the cost is vectorized over
    paths.  ``times`` optionally gives increasing observation times in
    ``(0, horizon]``; the result then has shape ``(paths, len(times))``.
    """
    lam, mu = cfg.birth_rate, cfg.death_rate
    p_birth = lam / (lam + mu)
    grid = np.array([cfg.horizon]) if times is None else np.asarray(times, dtype=float)
    if np.any(np.diff(grid) <= 0) or grid[0] <= 0 or grid[-1] > cfg.horizon:
        raise DomainError("observation times must increase within (0, horizon]")
    m = np.full(paths, cfg.founders, dtype=np.int64)
    t = np.zeros(paths)
    res = np.zeros((paths, grid.size), dtype=np.int64)
    nxt = np.zeros(paths, dtype=np.int64)  # next grid index per path
    idx = np.arange(paths)
    while idx.size:
        mm = m[idx]
        tn = t[idx] + rng.standard_exponential(idx.size) / ((lam + mu) * np.maximum(mm, 1))
        # record every grid point passed before the next event
        while True:
            k = nxt[idx]
            pend = k < grid.size
            passed = pend & (tn >= grid[np.minimum(k, grid.size - 1)])
            if not passed.any():
                break
            res[idx[passed], k[passed]] = mm[passed]
            nxt[idx[passed]] += 1
        step = rng.random(idx.size) < p_birth
        m[idx] = mm + np.where(step, 1, -1)
        t[idx] = tn
        if np.any(m > cfg.memory_cap):
            raise ResourceCapError(f"population exceeds {cfg.memory_cap}")
        done = (nxt[idx] >= grid.size) | (m[idx] == 0)
        # extinct paths keep zero for the remaining grid points
        idx = idx[~done]
    return res[:, 0] if times is None else res


def bd_sample_mrca(trace: BdTrace, n: int, rng: np.random.Generator) -> float:
    """Time before the horizon of the MRCA of ``n`` distinct surviving individuals.

    Returns ``inf`` if the sample descends from more than one founder.
    """
    if n < 2:
        raise DomainError("an MRCA needs n >= 2")
    lineages = {int(i) for i in trace.alive[_pick_distinct(rng, trace.final_size, n)]}
    # going back in time, the most recently born lineage folds into its parent
    while len(lineages) > 1:
        youngest = max(lineages, key=lambda i: trace.birth[i])
        if trace.parent[youngest] < 0:
            return math.inf
        lineages.discard(youngest)
        lineages.add(int(trace.parent[youngest]))
    return trace.cfg.horizon - trace.birth[youngest]
