import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from su2search.errors import DomainError, NoSolution, NotCertain
from su2search.matching import MatchingInputs, f_array, iteration_function_f, matched_phi, matched_phi_array
from su2search.oracle import oracle_minimal_iterations, oracle_success
from su2search.planner import (
    adjust_phases,
    certainty_residual,
    closed_form_optimal,
    final_phase,
    iteration_count,
    minimal_iterations,
    optimal_iterations,
    plan_search,
)
from su2search.su2 import TWO_PI, PhasePair


@pytest.mark.parametrize(
    "f,m", [(1.0, 1), (1.0 + 5e-10, 1), (1.0 - 5e-10, 1), (1.2, 2), (2.999999, 3), (0.3, 1), (7.0000001, 8)]
)
def test_iteration_count(f, m):
    assert iteration_count(f) == m


@pytest.mark.parametrize("f", [0.0, -1.0, math.inf, math.nan])
def test_iteration_count_rejects(f):
    with pytest.raises(DomainError):
        iteration_count(f)


def test_optimal_iterations_standard_grover():
    # N = 4 with the uniform start state: a single iteration
    assert optimal_iterations(MatchingInputs.from_angles(math.pi / 6, math.pi / 6)) == 1
    b = math.asin(1 / math.sqrt(1024))
    assert optimal_iterations(MatchingInputs.from_angles(b, b)) == math.ceil((math.pi / 2 - b) / (2 * b))


@pytest.mark.parametrize("b", [0.05, 0.1, math.pi / 10, 0.2, 0.3, 0.5])
def test_closed_form_optimal_is_certain(b):
    m_op, phi_op = closed_form_optimal(b)
    inputs = MatchingInputs.from_angles(b, b)
    p = PhasePair(phi_op, phi_op)
    assert iteration_function_f(p, inputs) == pytest.approx(m_op, abs=1e-9)
    succ, _ = oracle_success(p, inputs, m_op)
    assert succ > 1 - 1e-9


def test_closed_form_agrees_with_adjusted_phases():
    b = 0.2
    m_op, phi_op = closed_form_optimal(b)
    pairs = adjust_phases(m_op, MatchingInputs.from_angles(b, b))
    assert any(abs(p.phi - phi_op) < 1e-9 and abs(p.theta - phi_op) < 1e-9 for p in pairs)


def random_inputs(rng, lo=0.05, hi=1.4):
    return MatchingInputs.from_angles(rng.uniform(lo, hi), rng.uniform(0, math.pi / 2 - 1e-3), rng.uniform(0, TWO_PI))


def test_plan_is_certain_and_phase_is_right(rng):
    for _ in range(40):
        inputs = random_inputs(rng)
        plan = plan_search(inputs)
        succ, arg = oracle_success(plan.phases, inputs, plan.m)
        assert plan.exact
        assert succ > 1 - 1e-9
        assert abs(math.remainder(arg - plan.delta, TWO_PI)) < 1e-8


def test_minimal_iterations_agree_with_brute_scan(rng):
    for _ in range(8):
        inputs = random_inputs(rng, 0.15, 1.4)
        m, _ = minimal_iterations(inputs)
        assert m == oracle_minimal_iterations(inputs, m_max=m + 2, grid=1500).m


def test_later_root_needed_when_w_exceeds_quarter_turn():
    # large beta with a detuned start: w > pi/2 along the whole curve
    inputs = MatchingInputs.from_angles(1.227, 0.029, 4.445)
    m, winding = minimal_iterations(inputs)
    assert winding > 0
    plan = plan_search(inputs)
    assert plan.winding == winding and plan.m == m
    succ, arg = oracle_success(plan.phases, inputs, plan.m)
    assert succ > 1 - 1e-9
    assert abs(math.remainder(arg - plan.delta, TWO_PI)) < 1e-8


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 1.4), st.floats(0.0, 1.5), st.integers(1, 6))
def test_adjusted_phases_hit_integer(b, b0, m):
    inputs = MatchingInputs.from_angles(b, b0, 0.3)
    try:
        pairs = adjust_phases(m, inputs)
    except NoSolution:
        return
    for p in pairs:
        assert abs(iteration_function_f(p, inputs) - m) < 1e-9
        assert oracle_success(p, inputs, m)[0] > 1 - 1e-9


def test_adjust_phases_reports_min_f():
    inputs = MatchingInputs.from_angles(0.7, 1e-4)
    with pytest.raises(NoSolution) as info:
        adjust_phases(1, inputs)
    assert info.value.min_f == pytest.approx(1.1219259477, abs=1e-9)


def grid_argmin(inputs, n=2001):
    th = np.linspace(1e-3, TWO_PI - 1e-3, n)
    f, _ = f_array(th, matched_phi_array(th, inputs), inputs)
    j = int(np.argmin(np.where(np.isfinite(f), f, np.inf)))
    return th, f, j


@settings(max_examples=30, deadline=None)
@given(st.floats(1e-3, 1.5), st.floats(0.0, 1.5))
def test_f_minimum_at_pi_when_detuning_vanishes(b, b0):
    # with alpha + u = 0 the curve ends at w -> 0 only while 2 beta - beta0 < pi/2
    if 2 * b - b0 >= math.pi / 2 - 1e-3:
        return
    th, _, j = grid_argmin(MatchingInputs.from_angles(b, b0, 0.0))
    assert abs(th[j] - math.pi) <= (th[1] - th[0]) / 2 + 1e-12


def test_f_minimum_leaves_pi_for_wide_overlap():
    # 2 beta > pi/2: w grows towards pi at the curve ends, so f is smallest there
    th, f, j = grid_argmin(MatchingInputs.from_angles(1.0, 0.0, 0.0))
    assert abs(th[j] - math.pi) > 1.0
    assert f[j] < f[len(th) // 2]


def test_fixed_theta_plan(rng):
    inputs = MatchingInputs.from_angles(0.5, 0.1, 0.1)
    plan = plan_search(inputs, theta=2.0)
    assert plan.phases.theta == 2.0
    assert plan.phases.phi == pytest.approx(matched_phi(2.0, inputs), abs=1e-14)
    succ, arg = oracle_success(plan.phases, inputs, plan.m)
    assert succ == pytest.approx(plan.predicted_success, abs=1e-9)
    assert abs(math.remainder(arg - plan.delta, TWO_PI)) < 1e-8


def test_start_on_target_needs_no_iterations():
    plan = plan_search(MatchingInputs.from_angles(0.4, math.pi / 2))
    assert plan.m == 0 and plan.predicted_success == pytest.approx(1.0)


def test_final_phase_requires_certainty():
    inputs = MatchingInputs.from_angles(0.3, 0.3)
    with pytest.raises(NotCertain):
        final_phase(1, PhasePair(math.pi, math.pi), inputs)


def test_certainty_residual_zero_on_plan():
    inputs = MatchingInputs.from_angles(0.5, 0.1, 0.1)
    plan = plan_search(inputs)
    assert abs(certainty_residual(plan.m, plan.phases, inputs)) < 1e-9


def test_global_phase_shifts_delta():
    a = MatchingInputs.from_angles(0.5, 0.2, 0.3)
    b = MatchingInputs.from_angles(0.5, 0.2, 0.3, global_phase=0.7)
    pa, pb = plan_search(a), plan_search(b)
    assert abs(math.remainder(pb.delta - pa.delta - 0.7, TWO_PI)) < 1e-12
    assert abs(math.remainder(oracle_success(pb.phases, b, pb.m)[1] - pb.delta, TWO_PI)) < 1e-8
