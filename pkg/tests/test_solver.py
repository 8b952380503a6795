import numpy as np
import pytest

from bisectsdp import (
    BisectionInstance,
    ConicProblem,
    SolverConfig,
    SolverStatus,
    UnsupportedProblem,
    build_basic,
    build_new,
    build_wz,
    gen_gnp,
    generate,
    min_eigenvalue,
    safe_lower_bound,
    solve,
    strictly_feasible_point,
)
from bisectsdp.model import SymCoeff
from conftest import enumerate_min_cut


def tight_cfg(**kw):
    return SolverConfig(tol_primal=1e-9, tol_dual=1e-9, tol_gap=1e-9, **kw)


def test_min_eigenvalue_basics():
    assert min_eigenvalue(np.eye(3)) == pytest.approx(1.0, abs=1e-12)
    assert min_eigenvalue(np.array([[0.0, 1.0], [1.0, 0.0]])) == pytest.approx(-1.0, abs=1e-12)
    with pytest.raises(ValueError):
        min_eigenvalue(np.array([[np.inf, 0.0], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        min_eigenvalue(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_min_eigenvalue_interior_point_closed_form():
    inst = BisectionInstance(gen_gnp(18, 0.3, 4), 10, 8)
    X = strictly_feasible_point(inst)
    expected = min(10 * 10 / 18, 10 * 8 / (18 * 17))
    assert min_eigenvalue(X) == pytest.approx(expected, rel=1e-10)


def test_solve_star_bounds_brute_force(star31):
    opt, _ = enumerate_min_cut(star31)
    assert opt == 1.0
    p = build_new(star31, with_nonneg=True)
    sol = solve(p, tight_cfg())
    assert sol.status is SolverStatus.OPTIMAL
    assert -1e-8 <= sol.objective_primal <= opt + 1e-7
    sb = safe_lower_bound(p, sol)
    assert np.ceil(sb.value - 1e-6) <= opt


def test_solve_pappus_new_bound_in_published_range():
    inst = BisectionInstance(generate("pappus"), 10, 8)
    sol = solve(build_new(inst, True), SolverConfig())
    assert sol.status is SolverStatus.OPTIMAL
    assert 5.0 < sol.objective_primal <= 6.0 + 1e-6


def test_contradictory_equalities_detected(gnp8):
    p = build_new(gnp8, with_nonneg=False)
    p.add_equality(
        SymCoeff.from_entries({(i, i): 1.0 for i in range(gnp8.n)}),
        gnp8.m1 + 1.0,
        "trace-conflict",
    )
    sol = solve(p, SolverConfig(max_iters=200))
    assert sol.status is not SolverStatus.OPTIMAL


def test_weak_duality_on_optimal_solves(gnp8):
    for build in (build_basic, lambda i: build_new(i, True), build_wz):
        p = build(gnp8)
        sol = solve(p, SolverConfig())
        gap_allow = 1e-6 * (1 + abs(sol.objective_primal))
        assert sol.objective_dual <= sol.objective_primal + gap_allow


def test_safe_bound_formula_by_hand():
    # min <I,X> s.t. tr X = 1: optimum 1; a hand-made dual with lambda < 0
    p = ConicProblem(block_order=2, obj_matrix=np.eye(2), trace_constant=1.0)
    p.add_equality(SymCoeff.from_entries({(0, 0): 1.0, (1, 1): 1.0}), 1.0, "trace")
    from bisectsdp.solver import ConicSolution

    sol = ConicSolution(
        status=SolverStatus.OPTIMAL,
        primal=0.5 * np.eye(2),
        dual_eq=np.array([1.0 + 1e-6]),
        dual_ineq=np.zeros(0),
        objective_primal=1.0,
        objective_dual=1.0 + 1e-6,
        residuals=(0.0, 0.0, 0.0),
        iterations=0,
    )
    sb = safe_lower_bound(p, sol)
    # slack matrix is -1e-6 I, so the certified value drops back to 1
    assert sb.slack_min_eigenvalue == pytest.approx(-1e-6, rel=1e-6)
    assert sb.value == pytest.approx(1.0, abs=1e-12)
    assert sb.value <= 1.0 + 1e-12


def test_safe_bound_matches_dual_objective_when_clean(gnp8):
    p = build_new(gnp8, with_nonneg=True)
    sol = solve(p, tight_cfg())
    sb = safe_lower_bound(p, sol)
    assert sb.value == pytest.approx(sol.objective_dual, abs=1e-6)
    assert sb.value <= sol.objective_primal + 1e-7


def test_safe_bound_below_brute_force_on_random_instances():
    rng = np.random.default_rng(11)
    for _ in range(6):
        n = int(rng.integers(6, 11))
        m1 = int(rng.integers(n // 2 + 1, n))
        inst = BisectionInstance(gen_gnp(n, 0.5, int(rng.integers(10**6))), m1, n - m1)
        opt, _ = enumerate_min_cut(inst)
        for build in (build_basic, lambda i: build_new(i, True), build_wz):
            p = build(inst)
            sb = safe_lower_bound(p, solve(p, SolverConfig()))
            assert sb.value <= opt + 1e-7


def test_safe_bound_requires_trace_constant(gnp8):
    p = build_new(gnp8, with_nonneg=False)
    p.trace_constant = None
    sol = solve(p, SolverConfig())
    with pytest.raises(UnsupportedProblem):
        safe_lower_bound(p, sol)


def test_block_order_cap():
    p = ConicProblem(block_order=301, obj_matrix=np.zeros((301, 301)))
    with pytest.raises(UnsupportedProblem):
        solve(p, SolverConfig())


def test_determinism(gnp8):
    p = build_new(gnp8, with_nonneg=True)
    cfg = SolverConfig(keep_iterates=True)
    a = solve(p, cfg)
    b = solve(p, cfg)
    assert np.array_equal(a.primal, b.primal)
    assert np.array_equal(a.dual_eq, b.dual_eq)
    assert a.objective_primal == b.objective_primal
    assert len(a.iterates) == len(b.iterates)
    assert all(np.array_equal(x, y) for x, y in zip(a.iterates, b.iterates))


def test_bound_never_decreases_when_cut_appended(gnp8):
    from bisectsdp import Cut, append_cuts

    p = build_new(gnp8, with_nonneg=True)
    v0 = solve(p, tight_cfg()).objective_primal
    append_cuts(p, [Cut("tri-b", 0, 1, 2)])
    v1 = solve(p, tight_cfg()).objective_primal
    assert v1 >= v0 - 2e-7 * (1 + abs(v0))


def test_sifting_handles_large_inequality_sets():
    inst = BisectionInstance(gen_gnp(30, 0.3, 21), 18, 12)
    p = build_new(inst, with_nonneg=True)
    assert p.num_ineq > 700  # exercises the working-set path
    sol = solve(p, SolverConfig())
    assert sol.status is SolverStatus.OPTIMAL
    viol = p.ineq_violations(sol.primal)
    scale = 1.0 + max(abs(v) for v in p.ineq_rhs + p.eq_rhs)
    assert viol.max() <= 1e-6 * scale
    assert len(sol.dual_ineq) == p.num_ineq


def test_wz_solves_close_to_new(gnp8):
    vn = solve(build_new(gnp8, True), tight_cfg()).objective_primal
    sw = solve(build_wz(gnp8), tight_cfg(max_iters=800, stall_window=120))
    assert abs(vn - sw.objective_primal) <= 1e-5 * (1 + abs(vn))
