import numpy as np
import pytest

from bisectsdp import (
    Assignment,
    BisectionInstance,
    ConicProblem,
    Graph,
    RelaxationKind,
    build_basic,
    build_new,
    build_wz,
    cut_value,
    gen_gnp,
    integer_point,
    laplacian,
    strictly_feasible_point,
)
from bisectsdp.model import SymCoeff, problem_from_text, problem_to_text


def random_assignment(inst, rng):
    part1 = rng.choice(inst.n, size=inst.m1, replace=False)
    return Assignment.from_part1(inst.n, part1)


def test_sym_coeff_inner_counts_off_diagonals_twice():
    k = SymCoeff.from_entries({(0, 1): 0.5, (1, 1): 2.0})
    M = np.array([[1.0, 3.0], [3.0, 4.0]])
    assert k.inner(M) == 0.5 * 3.0 * 2 + 2.0 * 4.0
    assert np.array_equal(k.to_dense(2), np.array([[0.0, 0.5], [0.5, 2.0]]))


def test_build_basic_counts(star31):
    p = build_basic(star31)
    assert p.num_eq == star31.n + 1
    assert p.num_ineq == 0
    assert p.trace_constant == star31.n
    assert p.kind is RelaxationKind.BASIC


def test_build_new_counts(star31):
    p = build_new(star31, with_nonneg=True)
    n = star31.n
    assert p.num_eq == n + 2
    expected_ineq = n * (n + 1) // 2 + n * (n - 1) + n * (n - 1) // 2 + n
    assert p.num_ineq == expected_ineq
    assert p.trace_constant == star31.m1
    bare = build_new(star31, with_nonneg=False)
    assert bare.num_ineq == 0
    assert bare.num_eq == p.num_eq
    assert np.array_equal(bare.obj_matrix, p.obj_matrix)
    assert bare.eq_rhs == p.eq_rhs


def test_build_wz_counts():
    inst = BisectionInstance(Graph.from_edges(3, [(0, 1), (1, 2)]), 2, 1)
    p = build_wz(inst)
    assert p.block_order == 7
    assert p.num_eq == 15
    assert p.num_ineq == 6 * 7 // 2
    assert p.trace_constant == 4


@pytest.mark.parametrize("kind", list(RelaxationKind))
def test_integer_points_feasible_and_calibrated(kind, gnp8):
    rng = np.random.default_rng(7)
    builders = {
        RelaxationKind.BASIC: build_basic,
        RelaxationKind.NEW: lambda i: build_new(i, True),
        RelaxationKind.NEW_BARE: lambda i: build_new(i, False),
        RelaxationKind.WZ: build_wz,
    }
    p = builders[kind](gnp8)
    for _ in range(5):
        a = random_assignment(gnp8, rng)
        z = a.indicator()
        M = integer_point(gnp8, z, kind)
        assert np.abs(p.eq_residuals(M)).max() <= 1e-9
        if p.num_ineq:
            assert p.ineq_violations(M).max() <= 1e-9
        assert np.linalg.eigvalsh(M)[0] >= -1e-9
        # the factor calibration: every relaxation measures the cut itself
        assert p.objective_value(M) == cut_value(gnp8.graph, a)


def test_objective_identities_behind_calibration(gnp8):
    L = laplacian(gnp8.graph)
    rng = np.random.default_rng(3)
    x = rng.standard_normal(gnp8.n)
    assert abs(np.ones(gnp8.n) @ L @ x) <= 1e-9
    assert abs(np.tensordot(L, np.ones((gnp8.n, gnp8.n)))) <= 1e-9


def test_strictly_feasible_point_values():
    inst = BisectionInstance(Graph.from_edges(4, [(0, 1)]), 3, 1)
    X = strictly_feasible_point(inst)
    assert np.allclose(np.diag(X), 0.75)
    off = X[0, 1]
    assert off == pytest.approx(0.5)
    assert np.allclose(X @ np.ones(4), 3 * 0.75 * np.ones(4))
    inst2 = BisectionInstance(Graph.from_edges(2, [(0, 1)]), 1, 1)
    assert np.array_equal(strictly_feasible_point(inst2), 0.5 * np.eye(2))


def test_strictly_feasible_point_spectrum():
    # closed form for aI + b(J-I): eigenvalues m1^2/n and m1(n-m1)/(n(n-1))
    inst = BisectionInstance(gen_gnp(18, 0.3, 1), 10, 8)
    X = strictly_feasible_point(inst)
    eigs = np.linalg.eigvalsh(X)
    n, m1 = 18, 10
    lam_big = m1 * m1 / n
    lam_small = m1 * (n - m1) / (n * (n - 1))
    assert eigs[-1] == pytest.approx(lam_big, rel=1e-12)
    assert np.allclose(eigs[:-1], lam_small, rtol=1e-10)
    assert eigs[0] > 0


def test_strictly_feasible_point_satisfies_new_equalities():
    inst = BisectionInstance(gen_gnp(11, 0.4, 2), 7, 4)
    p = build_new(inst, with_nonneg=True)
    X = strictly_feasible_point(inst)
    assert np.abs(p.eq_residuals(X)).max() <= 1e-12


def test_redundant_trace_equality_is_harmless(gnp8):
    from bisectsdp import SolverConfig, solve

    p = build_new(gnp8, with_nonneg=False)
    keep = [i for i, lab in enumerate(p.eq_labels) if lab != "trace"]
    q = ConicProblem(
        block_order=p.block_order,
        obj_matrix=p.obj_matrix,
        kind=p.kind,
        trace_constant=p.trace_constant,
        eq_coeffs=[p.eq_coeffs[i] for i in keep],
        eq_rhs=[p.eq_rhs[i] for i in keep],
        eq_labels=[p.eq_labels[i] for i in keep],
    )
    cfg = SolverConfig(tol_primal=1e-9, tol_dual=1e-9, tol_gap=1e-9)
    v_with = solve(p, cfg).objective_primal
    v_without = solve(q, cfg).objective_primal
    assert v_with == pytest.approx(v_without, abs=1e-6)


def test_unique_labels_enforced(star31):
    p = build_basic(star31)
    with pytest.raises(ValueError, match="duplicate"):
        p.add_equality(SymCoeff.from_entries({(0, 0): 1.0}), 1.0, "diag(0)")


def test_problem_text_round_trip(gnp8):
    p = build_new(gnp8, with_nonneg=True)
    text = problem_to_text(p)
    q = problem_from_text(text)
    assert q.block_order == p.block_order
    assert q.num_eq == p.num_eq and q.num_ineq == p.num_ineq
    assert q.eq_labels == p.eq_labels and q.ineq_labels == p.ineq_labels
    assert q.trace_constant == p.trace_constant
    assert q.kind is p.kind
    rng = np.random.default_rng(0)
    M = rng.standard_normal((p.block_order, p.block_order))
    M = M + M.T
    assert np.allclose(q.eq_residuals(M), p.eq_residuals(M), atol=1e-12)
    assert np.allclose(q.ineq_violations(M), p.ineq_violations(M), atol=1e-12)
    assert q.objective_value(M) == pytest.approx(p.objective_value(M), abs=1e-12)
