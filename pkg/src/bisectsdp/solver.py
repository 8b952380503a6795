"""Primal-dual interior-point solver for the conic standard form.

A path-following method with Nesterov-Todd scaling and a Mehrotra
predictor-corrector step, specialized to one dense PSD block plus scalar
inequalities handled through nonnegative slacks. Problems in this package
are small (block order <= 300) and dense, so all factorizations are dense;
the Schur complement has one row per constraint.

Degenerate models need care: the vector-lifted relaxation has no strictly
feasible point, and the order-n relaxation loses its interior when the
smaller part has size 1 (the pair inequalities are forced tight on
average). The solver detects the resulting stall or divergence and retries
once on a Slater-restored problem: the primal block is shifted by eps*I
(rhs of every constraint moves by eps*tr of its coefficient) and every
inequality gains an eps margin. Convergence is always measured against the
original data, and the certified bound below never trusts the perturbation.

When the inequality list is large (elementwise nonnegativity families grow
as O(n^2)), the solver sifts: it repeatedly solves with a working subset of
inequalities and activates any that the iterate violates, which keeps the
Schur complement small. Multipliers of never-activated rows are zero, so
the returned solution satisfies the full problem's optimality contract.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .model import ConicProblem

__all__ = [
    "SolverStatus",
    "SolverConfig",
    "ConicSolution",
    "SafeBound",
    "UnsupportedProblem",
    "solve",
    "safe_lower_bound",
    "min_eigenvalue",
]

# Dense coefficient matrices (the all-ones families) switch to two full
# matrix products instead of outer-product accumulation in the Schur build.
_DENSE_NNZ_FACTOR = 4

_STALL_WINDOW = 40
_STALL_IMPROVE = 0.9
_SLATER_EPS = 1e-9


class SolverStatus(enum.Enum):
    OPTIMAL = "optimal"
    MAX_ITERS = "max_iters"
    NUMERICAL_TROUBLE = "numerical_trouble"


class UnsupportedProblem(ValueError):
    """Problem lacks structure required by the requested operation."""


@dataclass
class SolverConfig:
    tol_primal: float = 1e-7
    tol_dual: float = 1e-7
    tol_gap: float = 1e-7
    max_iters: int = 500
    verbosity: int = 0
    block_order_cap: int = 300
    step_fraction: float = 0.98
    sift_threshold: int = 700
    sift_max_passes: int = 60
    stall_window: int = _STALL_WINDOW
    stall_improve: float = _STALL_IMPROVE
    keep_iterates: bool = False

    def __post_init__(self):
        for t in (self.tol_primal, self.tol_dual, self.tol_gap):
            if not (0.0 < t <= 1e-2):
                raise ValueError(f"tolerances must lie in (0, 1e-2], got {t}")
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")


@dataclass
class ConicSolution:
    status: SolverStatus
    primal: np.ndarray
    dual_eq: np.ndarray
    dual_ineq: np.ndarray
    objective_primal: float
    objective_dual: float
    residuals: tuple[float, float, float]
    iterations: int
    regularized: bool = False
    message: str = ""
    iterates: list[np.ndarray] = field(default_factory=list)


@dataclass(frozen=True)
class SafeBound:
    value: float
    dual_eq: np.ndarray
    dual_ineq: np.ndarray
    slack_min_eigenvalue: float


def min_eigenvalue(M: np.ndarray) -> float:
    """Smallest eigenvalue of a symmetric matrix (dense, deterministic)."""
    M = np.asarray(M, dtype=float)
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    if M.shape[0] != M.shape[1]:
        raise ValueError("matrix must be square")
    scale = np.abs(M).max()
    if scale > 0 and np.abs(M - M.T).max() > 1e-8 * scale:
        raise ValueError("matrix must be symmetric")
    sym = 0.5 * (M + M.T)
    return float(sla.eigvalsh(sym, subset_by_index=[0, 0])[0])


# ---------------------------------------------------------------------------
# problem data in solver form
# ---------------------------------------------------------------------------

class _Data:
    """Stacked constraint data for one solve (equalities first).

    Rows are equilibrated to unit Frobenius norm; ``row_scale`` maps the
    scaled multipliers back to the original problem's multipliers.
    """

    def __init__(self, p: ConicProblem, ineq_idx: np.ndarray, equilibrate: bool = True):
        n = p.block_order
        self.n = n
        self.me = p.num_eq
        self.ineq_idx = ineq_idx
        self.mi = len(ineq_idx)
        self.m = self.me + self.mi
        self.C = 0.5 * (p.obj_matrix + p.obj_matrix.T)
        self.c0 = p.obj_offset
        coeffs = list(p.eq_coeffs) + [p.ineq_coeffs[j] for j in ineq_idx]
        raw_rhs = np.concatenate(
            [
                np.array(p.eq_rhs, dtype=float),
                np.array([p.ineq_rhs[j] for j in ineq_idx], dtype=float),
            ]
        ) if self.m else np.empty(0)

        rows_acc, cols_acc, data_acc = [], [], []
        self.triplets = []
        self.dense_K = []
        self.normA = np.empty(self.m)
        self.trA = np.empty(self.m)
        self.row_scale = np.empty(self.m)
        for i, k in enumerate(coeffs):
            off = k.rows != k.cols
            norm = np.sqrt(np.sum(k.vals**2 * np.where(off, 2.0, 1.0)))
            d = 1.0 / max(norm, 1e-300) if equilibrate else 1.0
            self.row_scale[i] = d
            vals = k.vals * d
            rows_acc.append(np.full(k.nnz + off.sum(), i))
            cols_acc.append(
                np.concatenate([k.rows * n + k.cols, (k.cols * n + k.rows)[off]])
            )
            data_acc.append(np.concatenate([vals, vals[off]]))
            self.normA[i] = 1.0
            self.trA[i] = vals[~off].sum()
            # halved diagonal values make T = U V^T + V U^T exact
            u = vals * np.where(off, 1.0, 0.5)
            if k.nnz > _DENSE_NNZ_FACTOR * n:
                self.triplets.append(None)
                K = k.to_dense(n) * d
                self.dense_K.append(K)
            else:
                self.triplets.append((k.rows, k.cols, u))
                self.dense_K.append(None)
        self.b = raw_rhs[: self.me] * self.row_scale[: self.me]
        self.h = raw_rhs[self.me :] * self.row_scale[self.me :]
        self.rhs = np.concatenate([self.b, self.h])
        self.A = sp.csr_matrix(
            (
                np.concatenate(data_acc) if data_acc else np.empty(0),
                (
                    np.concatenate(rows_acc) if rows_acc else np.empty(0, dtype=int),
                    np.concatenate(cols_acc) if cols_acc else np.empty(0, dtype=int),
                ),
            ),
            shape=(self.m, n * n),
        )
        self._Tbuf = None

    def apply(self, M: np.ndarray) -> np.ndarray:
        """All constraint inner products <K_i, M>."""
        return self.A @ M.ravel()

    def adjoint(self, yfull: np.ndarray) -> np.ndarray:
        """sum_i yfull_i K_i as a dense symmetric matrix."""
        return (self.A.T @ yfull).reshape(self.n, self.n)

    def schur(self, W: np.ndarray, d_lp: np.ndarray) -> np.ndarray:
        """Schur complement: S[i,j] = <K_i, W K_j W>, plus diag(u/q) on slacks."""
        n, m = self.n, self.m
        if self._Tbuf is None or self._Tbuf.shape != (m, n * n):
            self._Tbuf = np.empty((m, n * n))
        T = self._Tbuf
        for i in range(m):
            trip = self.triplets[i]
            Ti = T[i].reshape(n, n)
            if trip is None:
                np.matmul(W @ self.dense_K[i], W, out=Ti)
            else:
                r, c, u = trip
                U = W[:, r] * u
                V = W[:, c]
                # [U V][V U]^T gives the symmetrized product in one gemm
                np.matmul(
                    np.concatenate([U, V], axis=1),
                    np.concatenate([V, U], axis=1).T,
                    out=Ti,
                )
        S = self.A @ T.T
        S = 0.5 * (S + S.T)
        if self.mi:
            mi_slice = np.arange(self.me, m)
            S[mi_slice, mi_slice] += d_lp
        return S


def _chol_lower(M: np.ndarray) -> np.ndarray:
    """Cholesky with a tiny escalating diagonal shift on breakdown."""
    try:
        return np.linalg.cholesky(M)
    except np.linalg.LinAlgError:
        pass
    scale = max(np.trace(M) / len(M), 1e-30)
    jitter = 1e-14
    while jitter <= 1e-6:
        try:
            return np.linalg.cholesky(M + jitter * scale * np.eye(len(M)))
        except np.linalg.LinAlgError:
            jitter *= 100.0
    raise np.linalg.LinAlgError("cholesky breakdown")


def _factor_schur(S: np.ndarray):
    scale = max(float(np.mean(np.diag(S))), 1e-30)
    jitter = 0.0
    while True:
        try:
            return sla.cho_factor(
                S + jitter * scale * np.eye(len(S)), lower=True, check_finite=False
            )
        except np.linalg.LinAlgError:
            jitter = 1e-13 if jitter == 0.0 else jitter * 100.0
            if jitter > 1e-3:
                raise


def _max_step_psd(L: np.ndarray, dM: np.ndarray) -> float:
    """Largest alpha with M + alpha*dM PSD, M = L L^T."""
    Y = sla.solve_triangular(L, dM, lower=True, check_finite=False)
    Y = sla.solve_triangular(L, Y.T, lower=True, check_finite=False)
    lam = sla.eigvalsh(0.5 * (Y + Y.T), subset_by_index=[0, 0], check_finite=False)[0]
    if lam >= -1e-14:
        return np.inf
    return -1.0 / lam


def _max_step_vec(v: np.ndarray, dv: np.ndarray) -> float:
    neg = dv < 0
    if not np.any(neg):
        return np.inf
    return float(np.min(-v[neg] / dv[neg]))


# ---------------------------------------------------------------------------
# the interior-point iteration
# ---------------------------------------------------------------------------

def _ipm(data: _Data, cfg: SolverConfig, eps: float) -> ConicSolution:
    """Predictor-corrector iteration on the homogeneous self-dual embedding.

    The embedding carries (X, u; y, q; Z; tau, kappa) with the original
    optimum recovered at (X/tau, y/tau, ...). It keeps the dual bounded in
    embedding coordinates even when the dual supremum of a degenerate model
    is approached only in the limit, which is what makes the no-interior
    relaxations solvable to near machine accuracy. eps > 0 solves the
    Slater-restored perturbation; convergence is always judged on the
    original right-hand sides.
    """
    n, me, mi = data.n, data.me, data.mi
    step_frac = cfg.step_fraction
    b = data.b + eps * data.trA[:me]
    h = data.h + eps * (data.trA[me:] + 1.0)
    bh = np.concatenate([b, h])

    scale_rhs = 1.0 + (np.abs(data.rhs).max() if data.m else 0.0)
    cnorm = 1.0 + np.linalg.norm(data.C)
    Cm = data.C / cnorm
    norm_C = np.linalg.norm(Cm)

    X = np.eye(n)
    Z = np.eye(n)
    y = np.zeros(me)
    q = np.ones(mi)
    u = np.ones(mi)
    tau = 1.0
    kappa = 1.0

    best = None
    best_score = np.inf
    score_history: list[float] = []
    status = SolverStatus.MAX_ITERS
    message = ""
    iterates: list[np.ndarray] = []
    it = 0

    for it in range(1, cfg.max_iters + 1):
        yfull = np.concatenate([y, -q])
        AX = data.apply(X)
        AXu = AX.copy()
        if mi:
            AXu[me:] += u
        rP = bh * tau - AXu
        rD = Cm * tau - data.adjoint(yfull) - Z
        rG = kappa + float(np.tensordot(Cm, X)) - float(bh @ yfull)

        # de-homogenized metrics against the original data
        Xs = X / tau
        pobj = cnorm * float(np.tensordot(Cm, Xs)) + data.c0
        dobj = cnorm * float(data.b @ y - data.h @ q) / tau + data.c0
        AXs = AX / tau
        viol = np.maximum(AXs[me:] - data.h, 0.0) if mi else np.empty(0)
        pinf = max(
            np.abs(AXs[:me] - data.b).max() if me else 0.0,
            viol.max() if mi else 0.0,
        ) / scale_rhs
        dinf = np.linalg.norm(rD / tau) / (1.0 + norm_C)
        gap = abs(pobj - dobj) / (1.0 + abs(pobj) + abs(dobj))
        # selection prefers late, fully polished iterates; the sum keeps a
        # marginally larger pinf from outranking a large gap improvement
        score = pinf + dinf + gap
        if score < best_score:
            best_score = score
            best = (Xs.copy(), y / tau, q / tau, pobj, dobj, (pinf, dinf, gap))
        if cfg.keep_iterates:
            iterates.append(Xs.copy())
        if cfg.verbosity >= 2:
            print(
                f"  iter {it:3d}  pobj {pobj:+.8e}  dobj {dobj:+.8e}  "
                f"pinf {pinf:.2e}  dinf {dinf:.2e}  gap {gap:.2e}  tau {tau:.2e}"
            )
        if pinf <= cfg.tol_primal and dinf <= cfg.tol_dual and gap <= cfg.tol_gap:
            best = (Xs.copy(), y / tau, q / tau, pobj, dobj, (pinf, dinf, gap))
            status = SolverStatus.OPTIMAL
            break
        if not np.isfinite(score):
            status = SolverStatus.NUMERICAL_TROUBLE
            message = "non-finite iterate"
            break
        if tau < 1e-10 * max(1.0, kappa):
            status = SolverStatus.NUMERICAL_TROUBLE
            message = "infeasibility certificate (tau collapsed)"
            break
        score_history.append(best_score)
        if len(score_history) > cfg.stall_window:
            prev = score_history[-cfg.stall_window - 1]
            if best_score > cfg.stall_improve * prev:
                status = SolverStatus.NUMERICAL_TROUBLE
                message = "progress stalled"
                break

        mu = (
            float(np.tensordot(X, Z)) + float(u @ q) + tau * kappa
        ) / (n + mi + 1)

        try:
            Lx = _chol_lower(X)
            Lz = _chol_lower(Z)
            _, sv, Vtv = sla.svd(Lz.T @ Lx, check_finite=False)
            sv = np.maximum(sv, 1e-150)
            G = Lx @ Vtv.T / np.sqrt(sv)
            W = G @ G.T
            d_lp = u / q
            S = data.schur(W, d_lp)
            Sf = _factor_schur(S)
        except np.linalg.LinAlgError as exc:
            status = SolverStatus.NUMERICAL_TROUBLE
            message = f"factorization breakdown: {exc}"
            break

        def schur_solve(rhs: np.ndarray) -> np.ndarray:
            x = sla.cho_solve(Sf, rhs, check_finite=False)
            # one refinement pass recovers digits lost to the ill-conditioned
            # scaling near a degenerate face
            x += sla.cho_solve(Sf, rhs - S @ x, check_finite=False)
            return x

        WCW = W @ Cm @ W
        WrDW = W @ rD @ W
        chat = data.apply(WCW)
        gamma = float(np.tensordot(Cm, WCW))
        Qhat = schur_solve(bh + chat)
        denom_tau_base = float((bh - chat) @ Qhat) + gamma

        def raw_direction(rp_loc, rD_loc, rG_loc, Rxz, r_uq, rc_tau):
            # rD_loc None means exact zero (refinement passes): skip products
            body = Rxz if rD_loc is None else Rxz - W @ rD_loc @ W
            amr = data.apply(body)
            r0 = rp_loc - amr
            if mi:
                r0[me:] -= r_uq
            phat = schur_solve(r0)
            num = (
                rG_loc
                + float(np.tensordot(Cm, body))
                + rc_tau / tau
                - float((bh - chat) @ phat)
            )
            dtau = num / (denom_tau_base + kappa / tau)
            dyw = phat + Qhat * dtau
            dZ = Cm * dtau - data.adjoint(dyw)
            if rD_loc is not None:
                dZ += rD_loc
            dX = Rxz - W @ dZ @ W
            dq = -dyw[me:]
            du = r_uq - d_lp * dq
            dkappa = (rc_tau - kappa * dtau) / tau
            return [dX, du, dyw[:me], dZ, dq, dtau, dkappa, dyw]

        def direction(Rxz, r_uq, rc_tau, linear: bool = True):
            rp_loc = rP if linear else np.zeros(data.m)
            rD_loc = rD if linear else None
            rG_loc = rG if linear else 0.0
            d = raw_direction(rp_loc, rD_loc, rG_loc, Rxz, r_uq, rc_tau)
            # refine against the full Newton system: the Schur assembly
            # itself loses digits through the W products near a degenerate
            # face, which only a KKT-level residual can see
            for _ in range(2):
                dX, du, dy_, dZ, dq, dtau, dkap, dyw = d
                adx = data.apply(dX)
                if mi:
                    adx[me:] += du
                resP = rp_loc - (adx - bh * dtau)
                resG = rG_loc - (
                    float(bh @ dyw) - float(np.tensordot(Cm, dX)) - dkap
                )
                if max(np.abs(resP).max() if data.m else 0.0, abs(resG)) < 1e-13 * (
                    1.0 + np.abs(rp_loc).max() if data.m else 1.0
                ):
                    break
                dd = raw_direction(
                    resP, None, resG, np.zeros((n, n)), np.zeros(mi), 0.0
                )
                d = [a + b for a, b in zip(d, dd)]
            dX, du, dy_, dZ, dq, dtau, dkap, _ = d
            dX = 0.5 * (dX + dX.T)
            dZ = 0.5 * (dZ + dZ.T)
            return dX, du, dy_, dZ, dq, dtau, dkap

        # predictor
        dX_a, du_a, dy_a, dZ_a, dq_a, dtau_a, dkap_a = direction(
            -X, -u if mi else np.empty(0), -tau * kappa
        )
        if not np.all(np.isfinite(dX_a)) or not np.isfinite(dtau_a):
            status = SolverStatus.NUMERICAL_TROUBLE
            message = "non-finite search direction"
            break
        a_aff = min(
            1.0,
            _max_step_psd(Lx, dX_a),
            _max_step_vec(u, du_a),
            _max_step_psd(Lz, dZ_a),
            _max_step_vec(q, dq_a),
            _max_step_vec(np.array([tau, kappa]), np.array([dtau_a, dkap_a])),
        )
        mu_aff = (
            float(np.tensordot(X + a_aff * dX_a, Z + a_aff * dZ_a))
            + float((u + a_aff * du_a) @ (q + a_aff * dq_a))
            + (tau + a_aff * dtau_a) * (kappa + a_aff * dkap_a)
        ) / (n + mi + 1)
        sigma = min(0.999, max(1e-8, (max(mu_aff, 0.0) / mu) ** 3))

        # corrector
        Ginv = sla.solve_triangular(
            Lx.T, Vtv.T * np.sqrt(sv), lower=False, check_finite=False
        ).T
        Dx_a = Ginv @ dX_a @ Ginv.T
        Dz_a = G.T @ dZ_a @ G
        corr = 0.5 * (Dx_a @ Dz_a + Dz_a @ Dx_a)
        denom = 0.5 * (sv[:, None] + sv[None, :])
        Hs = (sigma * mu * np.eye(n) - np.diag(sv**2) - corr) / denom
        Rxz = G @ Hs @ G.T
        r_uq = (sigma * mu - u * q - du_a * dq_a) / q if mi else np.empty(0)
        rc_tau = sigma * mu - tau * kappa - dtau_a * dkap_a

        dX, du, dy, dZ, dq, dtau, dkap = direction(Rxz, r_uq, rc_tau)

        def max_alpha(dX_, du_, dZ_, dq_, dtau_, dkap_):
            return min(
                1.0,
                step_frac * _max_step_psd(Lx, dX_),
                step_frac * _max_step_vec(u, du_),
                step_frac * _max_step_psd(Lz, dZ_),
                step_frac * _max_step_vec(q, dq_),
                step_frac
                * _max_step_vec(np.array([tau, kappa]), np.array([dtau_, dkap_])),
            )

        alpha = max_alpha(dX, du, dZ, dq, dtau, dkap)
        if alpha < 0.25 * min(a_aff, 1.0):
            # second-order correction overshot the cone; retake a plain
            # centered step
            sigma_fb = max(sigma, 0.3)
            Hs = (sigma_fb * mu * np.eye(n) - np.diag(sv**2)) / denom
            Rxz = G @ Hs @ G.T
            r_uq = (sigma_fb * mu - u * q) / q if mi else np.empty(0)
            rc_tau = sigma_fb * mu - tau * kappa
            cand = direction(Rxz, r_uq, rc_tau)
            alpha_fb = max_alpha(cand[0], cand[1], cand[3], cand[4], cand[5], cand[6])
            if alpha_fb > alpha:
                dX, du, dy, dZ, dq, dtau, dkap = cand
                alpha = alpha_fb

        # centrality correctors: when the step is short, pull the trial
        # complementarity spectrum back into a box around its mean so the
        # cone boundary recedes; reuses the factorization
        for _ in range(3):
            if alpha >= 0.6:
                break
            a_try = min(1.0, alpha + 0.3)
            Dx_t = Ginv @ dX @ Ginv.T
            Dz_t = G.T @ dZ @ G
            Sig = np.diag(sv)
            P = (Sig + a_try * Dx_t) @ (Sig + a_try * Dz_t)
            P = 0.5 * (P + P.T)
            p_lp = (u + a_try * du) * (q + a_try * dq) if mi else np.empty(0)
            p_tk = (tau + a_try * dtau) * (kappa + a_try * dkap)
            mu_t = (float(np.trace(P)) + float(p_lp.sum()) + p_tk) / (n + mi + 1)
            lo, hi = 0.1 * mu_t, 10.0 * mu_t
            lam_p, Qp = sla.eigh(P, check_finite=False)
            lam_c = np.clip(lam_p, lo, hi)
            if np.allclose(lam_c, lam_p) and (
                not mi or np.all((p_lp >= lo) & (p_lp <= hi))
            ) and lo <= p_tk <= hi:
                break
            dP = Qp @ np.diag(lam_c - lam_p) @ Qp.T
            Rxz_add = G @ (dP / denom) @ G.T
            r_uq_add = (np.clip(p_lp, lo, hi) - p_lp) / q if mi else np.empty(0)
            rc_add = np.clip(p_tk, lo, hi) - p_tk
            add = direction(Rxz_add, r_uq_add, rc_add, linear=False)
            cand = tuple(a + b for a, b in zip((dX, du, dy, dZ, dq, dtau, dkap), add))
            alpha_c = max_alpha(cand[0], cand[1], cand[3], cand[4], cand[5], cand[6])
            if alpha_c <= 1.01 * alpha:
                break
            dX, du, dy, dZ, dq, dtau, dkap = cand
            alpha = alpha_c

        if alpha < 1e-10:
            status = SolverStatus.NUMERICAL_TROUBLE
            message = "step length collapsed"
            break

        X = X + alpha * dX
        u = u + alpha * du
        y = y + alpha * dy
        q = q + alpha * dq
        Z = Z + alpha * dZ
        tau = tau + alpha * dtau
        kappa = kappa + alpha * dkap
        X = 0.5 * (X + X.T)
        Z = 0.5 * (Z + Z.T)

    if best is None:
        best = (X, y, q, np.nan, np.nan, (np.inf, np.inf, np.inf))
    Xb, yb, qb, pobj, dobj, res = best
    return ConicSolution(
        status=status,
        primal=Xb,
        dual_eq=yb * (cnorm * data.row_scale[:me]),
        dual_ineq=qb * (cnorm * data.row_scale[me:]),
        objective_primal=pobj,
        objective_dual=dobj,
        residuals=res,
        iterations=it,
        regularized=eps > 0.0,
        message=message,
        iterates=iterates,
    )


def _solve_working(p: ConicProblem, cfg: SolverConfig, ineq_idx: np.ndarray) -> ConicSolution:
    """Solve on a working inequality set; retry once with Slater restoration."""
    data = _Data(p, ineq_idx)
    sol = _ipm(data, cfg, eps=0.0)
    if sol.status is not SolverStatus.OPTIMAL:
        retry = _ipm(data, cfg, eps=_SLATER_EPS)
        retry.message = (sol.message + "; retried with eps regularization").lstrip("; ")
        if retry.status is SolverStatus.OPTIMAL or sum(retry.residuals) < sum(sol.residuals):
            sol = retry
    dual_full = np.zeros(p.num_ineq)
    if len(ineq_idx):
        dual_full[ineq_idx] = sol.dual_ineq
    sol.dual_ineq = dual_full
    return sol


def solve(
    p: ConicProblem,
    cfg: SolverConfig | None = None,
    ineq_hint: np.ndarray | None = None,
) -> ConicSolution:
    """Solve a conic problem; sift inequalities when there are many.

    ``ineq_hint`` preselects inequality rows for the initial working set of
    the sifting loop (callers that solve a sequence of related problems pass
    the previously active rows). The interior-point iterations themselves
    always start cold.

    Returns the best iterate found together with the objective values and
    the (primal infeasibility, dual infeasibility, relative gap) triple.
    """
    cfg = cfg or SolverConfig()
    if p.block_order > cfg.block_order_cap:
        raise UnsupportedProblem(
            f"block order {p.block_order} exceeds cap {cfg.block_order_cap}"
        )
    mi = p.num_ineq
    if mi <= cfg.sift_threshold:
        return _solve_working(p, cfg, np.arange(mi))

    h = np.array(p.ineq_rhs)
    scale = 1.0 + max(
        np.abs(np.array(p.eq_rhs)).max() if p.num_eq else 0.0,
        np.abs(h).max() if mi else 0.0,
    )
    if ineq_hint is None:
        working = np.empty(0, dtype=int)
    else:
        working = np.unique(np.asarray(ineq_hint, dtype=int))
        working = working[(working >= 0) & (working < mi)]
    sol = None
    batch = max(4 * p.block_order, 400)
    full = _Data(p, np.arange(mi), equilibrate=False)
    for _ in range(cfg.sift_max_passes):
        sol = _solve_working(p, cfg, working)
        viol = (full.apply(sol.primal)[p.num_eq:] - full.h) / scale
        cand = np.setdiff1d(np.flatnonzero(viol > 0.5 * cfg.tol_primal), working)
        if len(cand) == 0:
            return sol
        order = np.lexsort((cand, -viol[cand]))
        working = np.sort(np.concatenate([working, cand[order[:batch]]]))
    sol.status = SolverStatus.MAX_ITERS
    sol.message = "inequality sifting did not settle"
    return sol


def _all_violations(p: ConicProblem, M: np.ndarray) -> np.ndarray:
    if not p.num_ineq:
        return np.empty(0)
    data = _Data(p, np.arange(p.num_ineq), equilibrate=False)
    vals = data.apply(M)[p.num_eq :]
    return vals - data.h


# ---------------------------------------------------------------------------
# rigorous lower bound from an approximate dual
# ---------------------------------------------------------------------------

def safe_lower_bound(p: ConicProblem, sol: ConicSolution) -> SafeBound:
    """Certified lower bound on the relaxation optimum from a dual iterate.

    Requires the model to fix the trace of the PSD variable to a known
    constant t (recorded at build time). For any multipliers (y, s >= 0),

        value = b^T y - h^T s + t * min(0, lambda_min(Zslack))

    is a valid lower bound, where Zslack = C - sum_i y_i A_i + sum_j s_j G_j.
    The eigenvalue term pays for dual infeasibility through the fixed trace.
    """
    t = p.trace_constant
    if t is None:
        raise UnsupportedProblem(
            "safe_lower_bound needs a trace-pinned model (trace_constant unset)"
        )
    y = np.asarray(sol.dual_eq, dtype=float)
    s = np.maximum(np.asarray(sol.dual_ineq, dtype=float), 0.0)
    data = _Data(p, np.arange(p.num_ineq), equilibrate=False)
    Zslack = data.C - data.adjoint(np.concatenate([y, -s]))
    lam = min_eigenvalue(Zslack)
    value = float(data.b @ y - data.h @ s) + t * min(0.0, lam) + p.obj_offset
    return SafeBound(value=value, dual_eq=y, dual_ineq=s, slack_min_eigenvalue=lam)
