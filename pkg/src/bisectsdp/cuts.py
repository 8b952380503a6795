"""Triangle-inequality cuts for the order-n relaxation and the cutting-plane loop.

Two facet families strengthen the order-n relaxation, both written on the
matrix entries with x = diag(X):

    tri-a(i,j,k):  X_ik + X_jk <= X_kk + X_ij          (i < j, k distinct)
    tri-b(i,j,k):  x_i + x_j + x_k <= X_ij + X_ik + X_jk + 1   (i < j < k)

Separation enumerates every triple exactly (O(n^3) is trivial at the sizes
this package targets) and returns the most violated cuts in a deterministic
order. The loop re-solves after each batch and certifies every round with
the safe dual bound, so the reported value never depends on the solver
having converged.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .graphs import BisectionInstance
from .model import ConicProblem, RelaxationKind, SymCoeff, build_new
from .report import BoundReport, RoundTrace, ceil_bound
from .solver import SolverConfig, SolverStatus, safe_lower_bound, solve

__all__ = ["Cut", "CutPool", "LoopConfig", "separate", "append_cuts", "cutting_plane_loop"]

TRI_A = "tri-a"
TRI_B = "tri-b"

# a failed solver round ends the loop; "failed" means the returned iterate
# is too far from optimality for its bound to be worth iterating on
_ROUND_RESIDUAL_LIMIT = 1e-4


@dataclass(frozen=True)
class Cut:
    kind: str
    i: int
    j: int
    k: int
    violation: float = 0.0

    def key(self) -> tuple:
        return (self.kind, self.i, self.j, self.k)

    def label(self) -> str:
        return f"bqp-cut({self.kind},{self.i},{self.j},{self.k})"

    def coeff(self) -> SymCoeff:
        i, j, k = self.i, self.j, self.k
        if self.kind == TRI_A:
            entries = {
                (min(i, k), max(i, k)): 0.5,
                (min(j, k), max(j, k)): 0.5,
                (k, k): -1.0,
                (min(i, j), max(i, j)): -0.5,
            }
        else:
            entries = {
                (i, i): 1.0,
                (j, j): 1.0,
                (k, k): 1.0,
                (i, j): -0.5,
                (i, k): -0.5,
                (j, k): -0.5,
            }
        return SymCoeff.from_entries(entries)

    def rhs(self) -> float:
        return 0.0 if self.kind == TRI_A else 1.0

    def evaluate(self, X: np.ndarray) -> float:
        """Violation at X (positive means violated)."""
        i, j, k = self.i, self.j, self.k
        if self.kind == TRI_A:
            return float(X[i, k] + X[j, k] - X[k, k] - X[i, j])
        return float(
            X[i, i] + X[j, j] + X[k, k] - X[i, j] - X[i, k] - X[j, k] - 1.0
        )


class CutPool:
    """Cuts accumulated across rounds, deduplicated, capped."""

    def __init__(self, cap: int):
        self.cap = cap
        self._keys: set[tuple] = set()
        self.cuts: list[Cut] = []
        self.round_added: list[int] = []

    def __len__(self) -> int:
        return len(self.cuts)

    def filter_new(self, cuts: list[Cut]) -> list[Cut]:
        fresh = [c for c in cuts if c.key() not in self._keys]
        room = self.cap - len(self.cuts)
        return fresh[: max(room, 0)]

    def add(self, cuts: list[Cut], round_index: int) -> None:
        for c in cuts:
            if c.key() in self._keys:
                continue
            if len(self.cuts) >= self.cap:
                break
            self._keys.add(c.key())
            self.cuts.append(c)
            self.round_added.append(round_index)


def separate(X: np.ndarray, limit: int | None, eps: float = 1e-6) -> list[Cut]:
    """All triangle cuts violated at X by more than eps, strongest first.

    Ordering is violation descending, then (kind, i, j, k) lexicographic,
    which makes the cutting-plane loop deterministic. ``limit=None`` returns
    every violated cut.
    """
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    d = np.diag(X).copy()

    va = X[:, None, :] + X[None, :, :] - d[None, None, :] - X[:, :, None]
    iu, ju = np.triu_indices(n, 1)
    va = va[iu, ju, :]  # rows indexed by pairs i<j, columns by k
    kk = np.tile(np.arange(n), len(iu)).reshape(len(iu), n)
    valid = (kk != iu[:, None]) & (kk != ju[:, None])
    hit = (va > eps) & valid
    pi, pk = np.nonzero(hit)
    cuts_a = (
        np.zeros(len(pi), dtype=int),
        iu[pi],
        ju[pi],
        pk,
        va[pi, pk],
    )

    vb = (
        d[:, None, None]
        + d[None, :, None]
        + d[None, None, :]
        - X[:, :, None]
        - X[:, None, :]
        - X[None, :, :]
        - 1.0
    )
    ii, jj, kk3 = np.nonzero(vb > eps)
    keep = (ii < jj) & (jj < kk3)
    ii, jj, kk3 = ii[keep], jj[keep], kk3[keep]
    cuts_b = (
        np.ones(len(ii), dtype=int),
        ii,
        jj,
        kk3,
        vb[ii, jj, kk3],
    )

    kind = np.concatenate([cuts_a[0], cuts_b[0]])
    i_all = np.concatenate([cuts_a[1], cuts_b[1]])
    j_all = np.concatenate([cuts_a[2], cuts_b[2]])
    k_all = np.concatenate([cuts_a[3], cuts_b[3]])
    viol = np.concatenate([cuts_a[4], cuts_b[4]])
    order = np.lexsort((k_all, j_all, i_all, kind, -viol))
    if limit is not None:
        order = order[:limit]
    names = (TRI_A, TRI_B)
    return [
        Cut(names[kind[t]], int(i_all[t]), int(j_all[t]), int(k_all[t]), float(viol[t]))
        for t in order
    ]


def append_cuts(p: ConicProblem, cuts: list[Cut]) -> ConicProblem:
    """Append cut rows to an order-n relaxation in place; duplicates are skipped."""
    if p.kind not in (RelaxationKind.NEW, RelaxationKind.NEW_BARE):
        raise ValueError("cuts apply to the order-n relaxation only")
    n = p.block_order
    for c in cuts:
        if not (0 <= c.i < n and 0 <= c.j < n and 0 <= c.k < n):
            raise IndexError(f"cut indices {c.key()} out of range for n={n}")
        if p.has_label(c.label()):
            continue
        p.add_inequality(c.coeff(), c.rhs(), c.label())
    return p


@dataclass
class LoopConfig:
    max_rounds: int = 20
    cuts_per_round: int | None = None  # defaults to 2n
    eps: float = 1e-6
    stall_tol: float = 1e-5
    pool_cap_factor: int = 40
    solver: SolverConfig = field(default_factory=SolverConfig)


def cutting_plane_loop(inst: BisectionInstance, cfg: LoopConfig | None = None) -> BoundReport:
    """Strengthen the order-n relaxation with separated triangle cuts.

    Round 0 solves the relaxation with its elementwise families; each later
    round separates on the current primal matrix, appends at most
    ``cuts_per_round`` violated cuts, and re-solves from scratch. Stops when
    separation finds nothing, the round budget is exhausted, the certified
    bound stalls for two consecutive rounds, or a round fails. The certified
    bound is the max of the per-round safe bounds, so it is valid even if
    the last solve was poor.
    """
    cfg = cfg or LoopConfig()
    n = inst.n
    per_round = cfg.cuts_per_round if cfg.cuts_per_round is not None else 2 * n
    pool = CutPool(cap=cfg.pool_cap_factor * n)
    p = build_new(inst, with_nonneg=True)

    report = BoundReport(
        instance=inst.name,
        n=n,
        m1=inst.m1,
        m2=inst.m2,
        relaxation="new+cuts" if cfg.max_rounds > 0 else "new",
        integral_weights=inst.graph.integral_weights,
        config={
            "max_rounds": cfg.max_rounds,
            "cuts_per_round": per_round,
            "eps": cfg.eps,
            "stall_tol": cfg.stall_tol,
            "solver_tol": (cfg.solver.tol_primal, cfg.solver.tol_dual, cfg.solver.tol_gap),
        },
    )
    t_start = time.perf_counter()
    certified = -np.inf
    stalled_rounds = 0
    added = 0
    active_hint = None

    for rnd in range(cfg.max_rounds + 1):
        t0 = time.perf_counter()
        sol = solve(p, cfg.solver, ineq_hint=active_hint)
        # rows with nonzero multipliers seed the next round's working set
        active_hint = np.flatnonzero(sol.dual_ineq > 1e-12)
        sb = safe_lower_bound(p, sol)
        report.rounds.append(
            RoundTrace(
                round=rnd,
                cuts_added=added,
                cuts_total=len(pool),
                raw_bound=sol.objective_primal,
                safe_bound=sb.value,
                solver_status=sol.status.value,
                wall_time=time.perf_counter() - t0,
            )
        )
        improvement = sb.value - certified
        certified = max(certified, sb.value)
        failed = sol.status is not SolverStatus.OPTIMAL and (
            not np.isfinite(max(sol.residuals)) or max(sol.residuals) > _ROUND_RESIDUAL_LIMIT
        )
        if failed or rnd == cfg.max_rounds:
            break
        if rnd > 0 and improvement < cfg.stall_tol * (1.0 + abs(certified)):
            stalled_rounds += 1
            if stalled_rounds >= 2:
                break
        else:
            stalled_rounds = 0
        cuts = separate(sol.primal, limit=per_round, eps=cfg.eps)
        cuts = pool.filter_new(cuts)
        if not cuts:
            break
        append_cuts(p, cuts)
        pool.add(cuts, round_index=rnd + 1)
        added = len(cuts)

    report.certified_lower_bound = float(certified)
    report.ceiled_lower_bound = ceil_bound(certified, inst.graph.integral_weights)
    report.values["new"] = report.rounds[0].safe_bound
    report.values["new_cuts"] = float(certified)
    report.total_wall_time = time.perf_counter() - t_start
    return report
