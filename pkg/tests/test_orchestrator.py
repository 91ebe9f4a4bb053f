import math

import numpy as np
import pytest

import cases
from rdcontrol import (
    BinarySource,
    BoxRegion,
    Constant,
    Diminishing,
    DomainError,
    DualState,
    GaussianSource,
    LinearEntropyPenalty,
    LogLinear,
    LogRate,
    PrimalAllocation,
    Scenario,
    SolverCaps,
    SourceSpec,
    UnsupportedCombinationError,
    Zero,
    dual_iterate,
    dual_objective,
    lagrangian_value,
    primal_objective,
    primal_violation,
    solve,
)


def single_source_scenario(cap=10.0, K=1.0, w=1.0, **kw):
    return Scenario(
        sources=(SourceSpec(BinarySource(1.0, 0.5), LogLinear(K), LogRate(w)),),
        region=BoxRegion((cap,)),
        caps=SolverCaps(alpha_max=50.0, c_max=50.0, c_min=1e-9),
        step=Diminishing(0.3),
        **kw,
    )


# ----------------------------------------------------------- scenario type

def test_scenario_validation():
    src = SourceSpec(BinarySource(1.0, 0.5), LogLinear(1.0), LogRate(1.0))
    with pytest.raises(DomainError):
        Scenario(sources=(), region=BoxRegion((1.0,)))
    with pytest.raises(DomainError):
        Scenario(sources=(src,), region=BoxRegion((1.0, 2.0)))
    with pytest.raises(UnsupportedCombinationError):
        Scenario(
            sources=(SourceSpec(BinarySource(1.0, 0.5), LinearEntropyPenalty(1.0)),),
            region=BoxRegion((1.0,)),
        )
    with pytest.raises(UnsupportedCombinationError):
        Scenario(
            sources=(SourceSpec(GaussianSource(1.0, 1.0), LogLinear(1.0)),),
            region=BoxRegion((1.0,)),
        )


def test_dual_state_validation():
    with pytest.raises(DomainError):
        DualState(np.array([-0.1]), np.array([0.0]))


def test_step_rules():
    assert Constant(0.5).step_size(9) == 0.5
    assert Diminishing(1.0).step_size(4) == 0.5
    with pytest.raises(DomainError):
        Diminishing(0.0)


# ------------------------------------------------------- objective algebra

def test_lagrangian_zero_duals_is_plain_objective():
    scn = single_source_scenario()
    primal = PrimalAllocation([2.0], [-0.5], [1.5], [3.0])
    dual = DualState([0.0], [0.0])
    assert lagrangian_value(primal, dual, scn) == pytest.approx(
        primal_objective(primal, scn), abs=1e-12
    )


def test_lagrangian_hand_value():
    scn = Scenario(
        sources=(SourceSpec(BinarySource(1.0, 0.5), LogLinear(1.0), Zero()),),
        region=BoxRegion((10.0,)),
    )
    primal = PrimalAllocation([1.0], [0.0], [1.0], [1.0])
    dual = DualState([1.0], [1.0])
    assert lagrangian_value(primal, dual, scn) == 0.0


def test_lagrangian_upper_bounds_feasible_objective():
    scn = single_source_scenario()
    primal = PrimalAllocation([1.0], [-0.2], [2.0], [5.0])  # strictly feasible
    for mu, lam in [(0.3, 0.7), (2.0, 0.1), (0.0, 4.0)]:
        dual = DualState([mu], [lam])
        assert lagrangian_value(primal, dual, scn) >= primal_objective(primal, scn) - 1e-12


def test_lagrangian_rejects_nonpositive_alpha():
    scn = single_source_scenario()
    primal = PrimalAllocation([0.0], [0.0], [1.0], [1.0])
    with pytest.raises(DomainError):
        lagrangian_value(primal, DualState([0.0], [0.0]), scn)


def test_dual_objective_zero_duals_box():
    scn = single_source_scenario()
    got = dual_objective(DualState([0.0], [0.0]), scn)
    caps = scn.caps
    assert got == pytest.approx(math.log(caps.alpha_max) + math.log(caps.c_max), abs=1e-12)


def test_weak_duality_random_pairs():
    scn = single_source_scenario()
    feasible = PrimalAllocation([1.0], [-0.5], [0.5], [8.0])
    assert primal_violation(feasible, scn) == 0.0
    f = primal_objective(feasible, scn)
    rng = np.random.default_rng(11)
    for _ in range(100):
        dual = DualState(rng.uniform(0, 5, 1), rng.uniform(0, 5, 1))
        assert dual_objective(dual, scn) >= f - 1e-12


def test_dual_objective_hand_built():
    # mu=2 > K=1 pins (alpha, beta) = (1, -1); lam=3 > mu gives c = w/(lam-mu)=1
    scn = single_source_scenario(cap=10.0)
    g = dual_objective(DualState([2.0], [3.0]), scn)
    expect = (math.log(1.0) + 1 * (-1.0) - 2.0 * 0.0) + (math.log(1.0) - 1.0 * 1.0) + 3.0 * 10.0
    assert g == pytest.approx(expect, abs=1e-12)


# ------------------------------------------------------------- dual_iterate

def test_dual_iterate_slack_primal_decreases_duals():
    scn = single_source_scenario()
    state = DualState([2.0], [2.5])  # alpha+beta = 0 < c, and c < r at these prices
    new, primal = dual_iterate(state, scn, 0.1)
    assert primal.alpha[0] + primal.beta[0] < primal.c[0]
    assert primal.c[0] < primal.r[0]
    assert new.mu[0] < state.mu[0]
    assert new.lam[0] < state.lam[0]


def test_dual_iterate_zero_start_hits_caps():
    scn = single_source_scenario()
    _, primal = dual_iterate(DualState([0.0], [0.0]), scn, 0.1)
    assert primal.alpha[0] == scn.caps.alpha_max
    assert primal.c[0] == scn.caps.c_max


def test_dual_iterate_projects_to_nonnegative():
    scn = single_source_scenario()
    state = DualState([5.0], [5.0])
    for _ in range(50):
        state, _ = dual_iterate(state, scn, 1.0)
        assert np.all(state.mu >= 0.0)
        assert np.all(state.lam >= 0.0)


def test_dual_iterate_converges_on_unit_cap():
    scn = single_source_scenario(cap=1.0, max_iters=20_000)
    report = solve(scn)
    oracle = cases.oracle_objective(scn, steps=500)
    assert report.converged
    assert abs(report.recovered_objective - oracle) <= 0.01 * (1.0 + abs(oracle))


# -------------------------------------------------------------------- solve

@pytest.mark.parametrize("name, factory, steps", cases.SOLVER_CASES, ids=lambda v: str(v))
def test_solve_matches_grid_oracle(name, factory, steps):
    scn = factory()
    report = solve(scn)
    assert report.converged, name
    oracle = cases.oracle_objective(scn, steps)
    assert abs(report.recovered_objective - oracle) <= 0.01 * abs(oracle)


def test_solve_recovered_point_is_feasible():
    for _, factory, _ in cases.SOLVER_CASES:
        scn = factory()
        report = solve(scn)
        assert primal_violation(report.recovered, scn) <= 1e-6


def test_solve_weak_duality_along_trace():
    for _, factory, _ in cases.SOLVER_CASES:
        scn = factory()
        report = solve(scn)
        assert np.min(report.trace.dual_obj) >= report.recovered_objective - 1e-9
        # dual objective dominates the running best-feasible column too
        assert np.all(report.trace.dual_obj >= report.trace.primal_obj - 1e-9)


def test_solve_equality_at_optimum():
    for _, factory, _ in cases.SOLVER_CASES:
        scn = factory()
        rec = solve(scn).recovered
        assert np.max(np.abs(rec.alpha + rec.beta - rec.c)) <= 1e-3


def test_solve_symmetric_sources_get_equal_allocations():
    report = solve(cases.mac_symmetric())
    rec = report.recovered
    for vec in (rec.alpha, rec.beta, rec.c, rec.r):
        assert abs(vec[0] - vec[1]) <= 1e-3


def test_solve_trace_duals_nonnegative():
    report = solve(cases.box_single_tight())
    assert np.all(report.trace.mu >= 0.0)
    assert np.all(report.trace.lam >= 0.0)


def test_solve_non_convergence_flag():
    scn = single_source_scenario(max_iters=3)
    report = solve(scn)
    assert not report.converged
    assert report.iterations == 3
    assert len(report.trace) == 3


def test_solve_deterministic():
    scn = cases.box_two_mixed()
    r1 = solve(scn)
    r2 = solve(scn)
    assert r1.iterations == r2.iterations
    assert np.array_equal(r1.trace.mu, r2.trace.mu)
    assert np.array_equal(r1.recovered.c, r2.recovered.c)
    assert r1.recovered_objective == r2.recovered_objective
