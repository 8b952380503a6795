"""Upper bounds: tabu search over swap moves, exact optimum by enumeration.

The tabu search keeps part sizes feasible by only exchanging one vertex of
each part. Move gains are maintained incrementally: with D[v] the internal-
minus-external weighted degree of v, swapping a and b changes the cut by
D[a] + D[b] + 2 w(a,b). Recently moved vertices are tabu for a fixed tenure
unless the move improves the best cut seen (aspiration).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .graphs import Assignment, BisectionInstance, adjacency, cut_value

__all__ = ["TabuConfig", "tabu_search", "brute_force", "swap_delta"]

_BRUTE_FORCE_MAX_N = 24
_BRUTE_CHUNK = 4096


@dataclass(frozen=True)
class TabuConfig:
    max_iters: int | None = None  # defaults to 2000 n
    tenure: int | None = None  # defaults to round(0.1 n) clamped to [5, 50]
    restarts: int = 10
    seed: int = 0
    patience: int | None = None  # stop a restart after this many non-improving moves

    def resolve(self, n: int) -> tuple[int, int, int]:
        iters = self.max_iters if self.max_iters is not None else 2000 * n
        tenure = self.tenure if self.tenure is not None else min(50, max(5, round(0.1 * n)))
        patience = self.patience if self.patience is not None else min(iters, 300 * n)
        if iters <= 0 or tenure <= 0 or self.restarts <= 0 or patience <= 0:
            raise ValueError("tabu parameters must be positive")
        return iters, tenure, patience


def swap_delta(W: np.ndarray, side: np.ndarray, D: np.ndarray, a: int, b: int) -> float:
    """Cut change from exchanging a (part 1) with b (part 2)."""
    return float(D[a] + D[b] + 2.0 * W[a, b])


def _gains(W: np.ndarray, side: np.ndarray) -> np.ndarray:
    """D[v] = internal minus external weighted degree of v."""
    z = side.astype(float)
    same = W @ z
    total = W.sum(axis=1)
    internal = np.where(side, same, total - same)
    return 2.0 * internal - total


def tabu_search(inst: BisectionInstance, cfg: TabuConfig | None = None) -> tuple[Assignment, float]:
    """Best bisection found over seeded random restarts of tabu search."""
    cfg = cfg or TabuConfig()
    n = inst.n
    m1 = inst.m1
    iters, tenure, patience = cfg.resolve(n)
    W = adjacency(inst.graph)
    rng = np.random.default_rng(cfg.seed)

    best_side = None
    best_cut = np.inf
    for _ in range(cfg.restarts):
        part1 = rng.choice(n, size=m1, replace=False)
        side = np.zeros(n, dtype=bool)
        side[part1] = True
        side, cut = _tabu_run(W, side, iters, tenure, patience, best_cut)
        if cut < best_cut - 1e-12:
            best_cut = cut
            best_side = side
    assignment = Assignment.from_part1(n, np.flatnonzero(best_side))
    return assignment, float(best_cut)


def _tabu_run(W, side, iters, tenure, patience, global_best):
    n = len(side)
    side = side.copy()
    z = side.astype(float)
    cut = float(z @ (np.diag(W.sum(axis=1)) - W) @ z)
    D = _gains(W, side)
    tabu_until = np.zeros(n, dtype=int)
    best_side = side.copy()
    best_cut = cut
    last_improve = 0

    for it in range(1, iters + 1):
        idx1 = np.flatnonzero(side)
        idx2 = np.flatnonzero(~side)
        deltas = D[idx1][:, None] + D[idx2][None, :] + 2.0 * W[np.ix_(idx1, idx2)]
        free = (tabu_until[idx1] < it)[:, None] & (tabu_until[idx2] < it)[None, :]
        aspiring = cut + deltas < min(best_cut, global_best) - 1e-12
        allowed = free | aspiring
        if not allowed.any():
            allowed = np.ones_like(free)
        masked = np.where(allowed, deltas, np.inf)
        flat = int(np.argmin(masked))
        a = int(idx1[flat // len(idx2)])
        b = int(idx2[flat % len(idx2)])
        cut += swap_delta(W, side, D, a, b)
        sgn = np.where(side, 1.0, -1.0)
        D += 2.0 * sgn * (W[:, b] - W[:, a])
        side[a] = False
        side[b] = True
        for v in (a, b):
            z = side.astype(float)
            same = W[v] @ z
            total = W[v].sum()
            internal = same if side[v] else total - same
            D[v] = 2.0 * internal - total
        tabu_until[a] = it + tenure
        tabu_until[b] = it + tenure
        if cut < best_cut - 1e-12:
            best_cut = cut
            best_side = side.copy()
            last_improve = it
        elif it - last_improve > patience:
            break
    return best_side, best_cut


def brute_force(inst: BisectionInstance) -> tuple[Assignment, float]:
    """Exact minimum bisection by enumerating all part-1 subsets.

    Guarded to n <= 24. Ties resolve to the lexicographically smallest
    part-1 vertex set because subsets are enumerated in that order.
    """
    n = inst.n
    if n > _BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force is limited to n <= {_BRUTE_FORCE_MAX_N}, got {n}")
    m1 = inst.m1
    edges = inst.graph.edges
    best_cut = np.inf
    best_subset = None
    combos = itertools.combinations(range(n), m1)
    while True:
        chunk = list(itertools.islice(combos, _BRUTE_CHUNK))
        if not chunk:
            break
        Z = np.zeros((len(chunk), n), dtype=bool)
        rows = np.repeat(np.arange(len(chunk)), m1)
        Z[rows, np.array(chunk).ravel()] = True
        cuts = np.zeros(len(chunk))
        for i, j, w in edges:
            cuts += w * (Z[:, i] != Z[:, j])
        t = int(np.argmin(cuts))
        if cuts[t] < best_cut - 1e-12:
            best_cut = float(cuts[t])
            best_subset = chunk[t]
    assignment = Assignment.from_part1(n, best_subset)
    return assignment, float(best_cut)
