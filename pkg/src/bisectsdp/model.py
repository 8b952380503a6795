"""Conic models of the bisection relaxations.

All four relaxations are expressed in one standard form over a single
symmetric matrix variable M:

    minimize    <C, M> + c0
    subject to  <A_i, M>  = b_i
                <G_j, M> <= h_j
                M PSD

The matrix variable differs per relaxation: the order-n relaxations use
X itself (or the shifted M = 2X - J), the vector-lifted one uses the
bordered matrix [[1, y^T], [y, Y]] of order 2n+1. Every builder calibrates
the objective so that a feasible 0/1 assignment evaluates exactly to its
cut weight, which makes the solved optima directly comparable across
relaxations.
"""

from __future__ import annotations

import enum
import io
from dataclasses import dataclass, field

import numpy as np

from .graphs import BisectionInstance, laplacian

__all__ = [
    "SymCoeff",
    "RelaxationKind",
    "ConicProblem",
    "build_basic",
    "build_new",
    "build_wz",
    "strictly_feasible_point",
    "integer_point",
    "problem_to_text",
    "problem_from_text",
]


class RelaxationKind(enum.Enum):
    BASIC = "basic"
    NEW = "new"
    NEW_BARE = "new-bare"
    WZ = "wz"


@dataclass(frozen=True)
class SymCoeff:
    """Symmetric coefficient matrix stored as upper-triangle COO.

    The stored value is the matrix entry K[r, c] (r <= c); the inner product
    <K, M> therefore counts off-diagonal entries twice.
    """

    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray

    @staticmethod
    def from_entries(entries: dict[tuple[int, int], float]) -> "SymCoeff":
        items = sorted((r, c, v) for (r, c), v in entries.items() if v != 0.0)
        if any(r > c for r, c, _ in items):
            raise ValueError("entries must be upper triangle (r <= c)")
        rows = np.array([r for r, _, _ in items], dtype=np.intp)
        cols = np.array([c for _, c, _ in items], dtype=np.intp)
        vals = np.array([v for _, _, v in items], dtype=float)
        return SymCoeff(rows, cols, vals)

    @property
    def nnz(self) -> int:
        return len(self.vals)

    def inner_weights(self) -> np.ndarray:
        """Per-entry weights so that <K, M> = w . M[rows, cols]."""
        return self.vals * np.where(self.rows == self.cols, 1.0, 2.0)

    def inner(self, M: np.ndarray) -> float:
        return float(self.inner_weights() @ M[self.rows, self.cols])

    def to_dense(self, n: int) -> np.ndarray:
        K = np.zeros((n, n))
        K[self.rows, self.cols] = self.vals
        K[self.cols, self.rows] = self.vals
        return K


def _sym_identity(n: int) -> SymCoeff:
    idx = np.arange(n)
    return SymCoeff(idx, idx, np.ones(n))


def _sym_allones(n: int) -> SymCoeff:
    r, c = np.triu_indices(n)
    return SymCoeff(r, c, np.ones(len(r)))


@dataclass
class ConicProblem:
    """One PSD block plus linear equalities and appendable inequalities."""

    block_order: int
    obj_matrix: np.ndarray
    obj_offset: float = 0.0
    kind: RelaxationKind | None = None
    graph_order: int | None = None
    part_sizes: tuple[int, int] | None = None
    trace_constant: float | None = None

    eq_coeffs: list[SymCoeff] = field(default_factory=list)
    eq_rhs: list[float] = field(default_factory=list)
    eq_labels: list[str] = field(default_factory=list)
    ineq_coeffs: list[SymCoeff] = field(default_factory=list)
    ineq_rhs: list[float] = field(default_factory=list)
    ineq_labels: list[str] = field(default_factory=list)

    def __post_init__(self):
        self._label_set = set(self.eq_labels) | set(self.ineq_labels)
        if len(self._label_set) != len(self.eq_labels) + len(self.ineq_labels):
            raise ValueError("constraint labels must be unique")

    # -- construction ------------------------------------------------------

    def add_equality(self, coeff: SymCoeff, rhs: float, label: str) -> None:
        if label in self._label_set:
            raise ValueError(f"duplicate constraint label {label!r}")
        self.eq_coeffs.append(coeff)
        self.eq_rhs.append(float(rhs))
        self.eq_labels.append(label)
        self._label_set.add(label)

    def add_inequality(self, coeff: SymCoeff, rhs: float, label: str) -> None:
        if label in self._label_set:
            raise ValueError(f"duplicate constraint label {label!r}")
        self.ineq_coeffs.append(coeff)
        self.ineq_rhs.append(float(rhs))
        self.ineq_labels.append(label)
        self._label_set.add(label)

    def has_label(self, label: str) -> bool:
        return label in self._label_set

    # -- introspection -----------------------------------------------------

    @property
    def num_eq(self) -> int:
        return len(self.eq_rhs)

    @property
    def num_ineq(self) -> int:
        return len(self.ineq_rhs)

    def eq_residuals(self, M: np.ndarray) -> np.ndarray:
        """<A_i, M> - b_i for every equality."""
        return np.array([k.inner(M) - b for k, b in zip(self.eq_coeffs, self.eq_rhs)])

    def ineq_violations(self, M: np.ndarray) -> np.ndarray:
        """<G_j, M> - h_j for every inequality (positive means violated)."""
        return np.array([k.inner(M) - h for k, h in zip(self.ineq_coeffs, self.ineq_rhs)])

    def objective_value(self, M: np.ndarray) -> float:
        return float(np.tensordot(self.obj_matrix, M)) + self.obj_offset


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def build_basic(inst: BisectionInstance) -> ConicProblem:
    """Order-n relaxation with the shifted variable M = 2X - J PSD.

    X has unit diagonal and <J, X> = m1^2 + m2^2; substituting X = (M + J)/2
    turns the cone condition 2X - J PSD into a plain PSD constraint on M and
    the objective (1/2) tr(L X) into (1/4) tr(L M) because tr(L J) = 0.
    """
    n = inst.n
    m1, m2 = inst.m1, inst.m2
    L = laplacian(inst.graph)
    p = ConicProblem(
        block_order=n,
        obj_matrix=L / 4.0,
        obj_offset=0.0,
        kind=RelaxationKind.BASIC,
        graph_order=n,
        part_sizes=(m1, m2),
        trace_constant=float(n),
    )
    for i in range(n):
        p.add_equality(SymCoeff.from_entries({(i, i): 1.0}), 1.0, f"diag({i})")
    p.add_equality(_sym_allones(n), 2.0 * (m1 * m1 + m2 * m2) - n * n, "j-trace")
    return p


def _row_sum_coeff(n: int, i: int, m1: int) -> SymCoeff:
    """Coefficient matrix of (X e)_i - m1 * X_ii = 0."""
    entries = {(min(i, j), max(i, j)): 0.5 for j in range(n) if j != i}
    entries[(i, i)] = 1.0 - m1
    return SymCoeff.from_entries(entries)


def build_new(inst: BisectionInstance, with_nonneg: bool = True) -> ConicProblem:
    """Order-n relaxation tied to part 1 only, with x = diag(X) eliminated.

    Equalities: tr(X) = m1, <J, X> = m1^2, and the n row constraints
    X e = m1 diag(X). The trace equality is implied by the others and kept
    (labelled) so tests can toggle it. The objective is tr(L X), which is
    the calibration under which a 0/1 point evaluates to its cut.

    With ``with_nonneg`` the three elementwise families are added as scalar
    inequalities: X >= 0, X_ij <= min(x_i, x_j), and x_i + x_j - X_ij <= 1,
    plus the diagonal consequence x_i <= 1.
    """
    n = inst.n
    m1 = inst.m1
    L = laplacian(inst.graph)
    p = ConicProblem(
        block_order=n,
        obj_matrix=L.copy(),
        obj_offset=0.0,
        kind=RelaxationKind.NEW if with_nonneg else RelaxationKind.NEW_BARE,
        graph_order=n,
        part_sizes=(inst.m1, inst.m2),
        trace_constant=float(m1),
    )
    p.add_equality(_sym_identity(n), float(m1), "trace")
    p.add_equality(_sym_allones(n), float(m1 * m1), "j-trace")
    for i in range(n):
        p.add_equality(_row_sum_coeff(n, i, m1), 0.0, f"row-sum({i})")
    if with_nonneg:
        # off-diagonal coefficients are 0.5 so each scalar row reads in
        # entry units: <K, X> doubles the off-diagonal contribution
        for i in range(n):
            for j in range(i, n):
                v = -1.0 if i == j else -0.5
                p.add_inequality(
                    SymCoeff.from_entries({(i, j): v}), 0.0, f"nonneg({i},{j})"
                )
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                a, b = min(i, j), max(i, j)
                # X_ab <= X_ii, oriented by the bounding diagonal index i
                p.add_inequality(
                    SymCoeff.from_entries({(a, b): 0.5, (i, i): -1.0}),
                    0.0,
                    f"bqp-ub({i},{j})",
                )
        for i in range(n):
            for j in range(i + 1, n):
                p.add_inequality(
                    SymCoeff.from_entries({(i, i): 1.0, (j, j): 1.0, (i, j): -0.5}),
                    1.0,
                    f"bqp-tri0({i},{j})",
                )
        for i in range(n):
            p.add_inequality(
                SymCoeff.from_entries({(i, i): 1.0}), 1.0, f"bqp-diag({i})"
            )
    return p


def build_wz(inst: BisectionInstance) -> ConicProblem:
    """Vector-lifted relaxation on the bordered matrix of order 2n+1.

    The variable is B = [[1, y^T], [y, Y]] with y = diag(Y) imposed through
    the border equalities, so B PSD is the Schur form of Y - y y^T PSD.
    Indices 1..n address the part-1 block, n+1..2n the part-2 block.
    This relaxation has no strictly feasible point; the solver detects the
    induced stalling and regularizes (see solver module).
    """
    n = inst.n
    m1, m2 = inst.m1, inst.m2
    N = 2 * n + 1
    L = laplacian(inst.graph)
    C = np.zeros((N, N))
    C[1 : n + 1, 1 : n + 1] = L / 2.0
    C[n + 1 :, n + 1 :] = L / 2.0
    p = ConicProblem(
        block_order=N,
        obj_matrix=C,
        obj_offset=0.0,
        kind=RelaxationKind.WZ,
        graph_order=n,
        part_sizes=(m1, m2),
        trace_constant=float(n + 1),
    )
    p.add_equality(SymCoeff.from_entries({(0, 0): 1.0}), 1.0, "corner")
    idx1 = np.arange(1, n + 1)
    idx2 = np.arange(n + 1, 2 * n + 1)
    p.add_equality(SymCoeff(idx1, idx1, np.ones(n)), float(m1), "trace-1")
    p.add_equality(SymCoeff(idx2, idx2, np.ones(n)), float(m2), "trace-2")
    r, c = np.triu_indices(n)
    p.add_equality(SymCoeff(r + 1, c + 1, np.ones(len(r))), float(m1 * m1), "j-trace-1")
    p.add_equality(
        SymCoeff(r + n + 1, c + n + 1, np.ones(len(r))), float(m2 * m2), "j-trace-2"
    )
    for i in range(n):
        p.add_equality(
            SymCoeff.from_entries({(1 + i, 1 + n + i): 0.5}), 0.0, f"y12-diag({i})"
        )
    cross_r = np.repeat(idx1, n)
    cross_c = np.tile(idx2, n)
    p.add_equality(
        SymCoeff(cross_r, cross_c, np.ones(n * n)), 2.0 * m1 * m2, "j-cross"
    )
    for a in range(1, N):
        p.add_equality(
            SymCoeff.from_entries({(0, a): 0.5, (a, a): -1.0}), 0.0, f"border({a - 1})"
        )
    for a in range(1, N):
        for b in range(a, N):
            v = -1.0 if a == b else -0.5
            p.add_inequality(
                SymCoeff.from_entries({(a, b): v}), 0.0, f"nonneg({a - 1},{b - 1})"
            )
    return p


def strictly_feasible_point(inst: BisectionInstance) -> np.ndarray:
    """Interior point of the order-n relaxation: a convex-combination matrix.

    Xhat = (m1/n) I + [m1(m1-1)/(n(n-1))] (J - I). Satisfies every equality
    of :func:`build_new` exactly; positive definite with eigenvalues m1^2/n
    (once) and m1(n-m1)/(n(n-1)) (n-1 times) for 1 <= m1 < n.
    """
    n = inst.n
    m1 = inst.m1
    a = m1 / n
    b = m1 * (m1 - 1) / (n * (n - 1))
    return (a - b) * np.eye(n) + b * np.ones((n, n))


def integer_point(inst: BisectionInstance, z: np.ndarray, kind: RelaxationKind) -> np.ndarray:
    """Lift the 0/1 part-1 indicator z to a feasible matrix of the given relaxation."""
    z = np.asarray(z, dtype=float)
    if kind in (RelaxationKind.NEW, RelaxationKind.NEW_BARE):
        return np.outer(z, z)
    if kind is RelaxationKind.BASIC:
        v = 2.0 * z - 1.0
        return np.outer(v, v)
    if kind is RelaxationKind.WZ:
        yhat = np.concatenate(([1.0], z, 1.0 - z))
        return np.outer(yhat, yhat)
    raise ValueError(f"unknown relaxation kind {kind}")


# ---------------------------------------------------------------------------
# text serialization (debugging / cross-solver verification)
# ---------------------------------------------------------------------------

def _coeff_to_text(k: SymCoeff) -> str:
    return " ".join(f"{r + 1},{c + 1},{v:.17g}" for r, c, v in zip(k.rows, k.cols, k.vals))


def _coeff_from_text(tok: str) -> SymCoeff:
    entries = {}
    for t in tok.split():
        r, c, v = t.split(",")
        entries[(int(r) - 1, int(c) - 1)] = float(v)
    return SymCoeff.from_entries(entries)


def problem_to_text(p: ConicProblem) -> str:
    """Sparse text dump: one constraint per line 'label | triplets | rhs | sense'.

    Triplets are 1-based upper-triangle (row,col,value). The objective and
    block metadata travel in header lines starting with '*'.
    """
    out = io.StringIO()
    out.write(f"* block_order {p.block_order}\n")
    out.write(f"* offset {p.obj_offset:.17g}\n")
    if p.trace_constant is not None:
        out.write(f"* trace_constant {p.trace_constant:.17g}\n")
    if p.kind is not None:
        out.write(f"* kind {p.kind.value}\n")
    r, c = np.triu_indices(p.block_order)
    mask = p.obj_matrix[r, c] != 0.0
    obj = SymCoeff(r[mask], c[mask], p.obj_matrix[r, c][mask])
    out.write(f"objective | {_coeff_to_text(obj)} | 0 | min\n")
    for k, b, lab in zip(p.eq_coeffs, p.eq_rhs, p.eq_labels):
        out.write(f"{lab} | {_coeff_to_text(k)} | {b:.17g} | =\n")
    for k, h, lab in zip(p.ineq_coeffs, p.ineq_rhs, p.ineq_labels):
        out.write(f"{lab} | {_coeff_to_text(k)} | {h:.17g} | <=\n")
    return out.getvalue()


def problem_from_text(text: str) -> ConicProblem:
    block_order = None
    offset = 0.0
    trace_constant = None
    kind = None
    obj = None
    rows = []
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln:
            continue
        if ln.startswith("*"):
            _, key, val = ln.split(None, 2)
            if key == "block_order":
                block_order = int(val)
            elif key == "offset":
                offset = float(val)
            elif key == "trace_constant":
                trace_constant = float(val)
            elif key == "kind":
                kind = RelaxationKind(val)
            continue
        lab, tok, rhs, sense = (t.strip() for t in ln.split("|"))
        if lab == "objective":
            obj = _coeff_from_text(tok)
            continue
        rows.append((lab, _coeff_from_text(tok), float(rhs), sense))
    if block_order is None or obj is None:
        raise ValueError("missing block_order header or objective line")
    p = ConicProblem(
        block_order=block_order,
        obj_matrix=obj.to_dense(block_order),
        obj_offset=offset,
        kind=kind,
        trace_constant=trace_constant,
    )
    for lab, k, rhs, sense in rows:
        if sense == "=":
            p.add_equality(k, rhs, lab)
        elif sense == "<=":
            p.add_inequality(k, rhs, lab)
        else:
            raise ValueError(f"unknown sense {sense!r}")
    return p
