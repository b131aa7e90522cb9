"""Contract enumeration against a from-scratch exhaustive oracle.

The oracle below rebuilds both optimizations with plain dict/max
plumbing.  It deliberately keeps two conventions identical so results
can be compared with ``==`` rather than tolerances: outcome terms are
accumulated in ascending outcome order, and candidates are generated in
lexicographic rule order with ``max`` keeping the earliest maximizer.
"""

import itertools
import math
import random

import pytest

import labormkt as lm
from labormkt.errors import InfeasibleError

IR_SLACK = 1e-12


# ---------------------------------------------------------------------
# Oracle
# ---------------------------------------------------------------------

def oracle_values(p, rule_levels):
    """(agent value per effort, principal value per effort) for one rule."""
    agent, principal = [], []
    for i, f_row in enumerate(p.density):
        a = 0.0
        v = 0.0
        for j in range(len(p.outcomes)):
            w = p.wage_grid[rule_levels[j]]
            a += f_row[j] * p.agent_utility(w)
            v += f_row[j] * p.principal_utility(p.outcomes[j] - w)
        agent.append(a - p.effort_costs[i])
        principal.append(v)
    return agent, principal


def oracle_first_best(p):
    candidates = []
    for rule in itertools.product(range(len(p.wage_grid)), repeat=len(p.outcomes)):
        agent, principal = oracle_values(p, rule)
        for i in range(len(p.efforts)):
            if agent[i] >= p.reservation - IR_SLACK:
                candidates.append((principal[i], rule, i, agent[i]))
    if not candidates:
        raise InfeasibleError("oracle: nothing feasible")
    return max(candidates, key=lambda c: c[0])


def oracle_second_best(p):
    candidates = []
    for rule in itertools.product(range(len(p.wage_grid)), repeat=len(p.outcomes)):
        agent, principal = oracle_values(p, rule)
        top = max(agent)
        tied = [i for i, a in enumerate(agent) if a == top]
        tied.sort(key=lambda i: (-principal[i], i))
        i = tied[0]
        if agent[i] >= p.reservation - IR_SLACK:
            candidates.append((principal[i], rule, i, agent[i]))
    if not candidates:
        raise InfeasibleError("oracle: nothing feasible")
    return max(candidates, key=lambda c: c[0])


def random_instance(rng, n_out=None, n_eff=None, n_levels=None):
    n_out = n_out or rng.randint(2, 3)
    n_eff = n_eff or rng.randint(2, 3)
    n_levels = n_levels or rng.randint(5, 15)
    outcomes = sorted({round(rng.uniform(0.0, 6.0), 3) for _ in range(n_out)})
    while len(outcomes) < n_out or max(outcomes) <= 0:
        outcomes = sorted({round(rng.uniform(0.5, 6.0), 3) for _ in range(n_out)})
    efforts = sorted({round(rng.uniform(0.0, 2.0), 3) for _ in range(n_eff)})
    while len(efforts) < n_eff:
        efforts = sorted({round(rng.uniform(0.0, 2.0), 3) for _ in range(n_eff)})
    density = []
    for _ in range(n_eff):
        row = [rng.uniform(0.05, 1.0) for _ in range(n_out)]
        s = sum(row)
        density.append(tuple(x / s for x in row))
    costs = sorted(round(rng.uniform(0.0, 0.7), 3) for _ in range(n_eff))
    return lm.ContractProblem(
        outcomes=tuple(outcomes), efforts=tuple(efforts),
        density=tuple(density), effort_costs=tuple(costs),
        reservation=rng.uniform(0.0, 0.5),
        wage_grid=lm.default_wage_grid(tuple(outcomes), n_levels))


# ---------------------------------------------------------------------
# The frozen 2x2 instance
# ---------------------------------------------------------------------

def two_by_two():
    return lm.ContractProblem(
        outcomes=(0.0, 4.0), efforts=(0.0, 1.0),
        density=((0.8, 0.2), (0.2, 0.8)),
        effort_costs=(0.0, 0.5), reservation=0.5,
        wage_grid=lm.default_wage_grid((0.0, 4.0), 21))


def test_frozen_instance():
    p = two_by_two()
    report = lm.welfare_gap(p)
    fb, sb = report.first_best, report.second_best
    assert fb.rule == (1.0, 1.0)
    assert fb.principal_value == pytest.approx(2.2, abs=1e-12)
    assert fb.effort == 1.0
    assert sb.rule == (0.0, 1.6)
    assert sb.principal_value == pytest.approx(1.92, abs=1e-12)
    assert sb.agent_value == pytest.approx(0.5119288512538815, abs=1e-12)
    assert sb.effort == 1.0
    assert report.gap == pytest.approx(0.28, abs=1e-9)
    assert report.gap > 0.0
    assert not report.effort_reduced


def test_frozen_instance_matches_oracle_exactly():
    p = two_by_two()
    pv, rule_idx, i, av = oracle_first_best(p)
    fb = lm.solve_first_best(p)
    assert fb.principal_value == pv
    assert fb.rule == tuple(p.wage_grid[k] for k in rule_idx)
    assert fb.effort_index == i
    pv, rule_idx, i, av = oracle_second_best(p)
    sb = lm.solve_second_best(p)
    assert sb.principal_value == pv
    assert sb.rule == tuple(p.wage_grid[k] for k in rule_idx)
    assert sb.effort_index == i
    assert sb.agent_value == av


# ---------------------------------------------------------------------
# Randomized cross-validation (must be exact, not approximate)
# ---------------------------------------------------------------------

def test_randomized_instances_match_oracle():
    rng = random.Random(91)
    for _ in range(40):
        p = random_instance(rng)
        try:
            want_fb = oracle_first_best(p)
        except InfeasibleError:
            with pytest.raises(InfeasibleError):
                lm.solve_first_best(p)
            continue
        fb = lm.solve_first_best(p)
        assert fb.principal_value == want_fb[0]
        assert fb.rule == tuple(p.wage_grid[k] for k in want_fb[1])
        assert fb.effort_index == want_fb[2]
        want_sb = oracle_second_best(p)
        sb = lm.solve_second_best(p)
        assert sb.principal_value == want_sb[0]
        assert sb.rule == tuple(p.wage_grid[k] for k in want_sb[1])
        assert sb.effort_index == want_sb[2]


def test_full_cap_instances_match_oracle():
    rng = random.Random(17)
    for _ in range(6):
        p = random_instance(rng, n_out=3, n_eff=3, n_levels=25)
        fb, sb = lm.solve_first_best(p), lm.solve_second_best(p)
        want_fb, want_sb = oracle_first_best(p), oracle_second_best(p)
        assert (fb.principal_value, fb.effort_index) == (want_fb[0], want_fb[2])
        assert (sb.principal_value, sb.effort_index) == (want_sb[0], want_sb[2])
        assert fb.rule == tuple(p.wage_grid[k] for k in want_fb[1])
        assert sb.rule == tuple(p.wage_grid[k] for k in want_sb[1])


def test_gap_is_never_negative():
    """Every incentive-feasible candidate is participation-feasible too,
    so the unconstrained optimum can only be weakly better — in exact
    float comparisons, not merely within tolerance."""
    rng = random.Random(23)
    for _ in range(100):
        p = random_instance(rng)
        try:
            report = lm.welfare_gap(p)
        except InfeasibleError:
            continue
        assert report.gap >= 0.0


def test_gap_zero_when_output_ignores_effort():
    rng = random.Random(5)
    for _ in range(20):
        p0 = random_instance(rng)
        flat = lm.ContractProblem(
            outcomes=p0.outcomes, efforts=p0.efforts,
            density=tuple(p0.density[0] for _ in p0.efforts),
            effort_costs=p0.effort_costs, reservation=p0.reservation,
            wage_grid=p0.wage_grid)
        try:
            report = lm.welfare_gap(flat)
        except InfeasibleError:
            continue
        assert report.gap == 0.0


def test_single_effort_has_no_incentive_problem():
    p = lm.ContractProblem(
        outcomes=(0.0, 4.0), efforts=(1.0,), density=((0.3, 0.7),),
        effort_costs=(0.2,), reservation=0.3,
        wage_grid=lm.default_wage_grid((0.0, 4.0), 21))
    report = lm.welfare_gap(p)
    assert report.gap == 0.0
    assert report.first_best.rule == report.second_best.rule


def test_participation_bar_is_respected():
    rng = random.Random(40)
    for _ in range(25):
        p = random_instance(rng)
        try:
            report = lm.welfare_gap(p)
        except InfeasibleError:
            continue
        assert report.first_best.agent_value >= p.reservation - 1e-9
        assert report.second_best.agent_value >= p.reservation - 1e-9


def test_unreachable_reservation_is_infeasible():
    p = lm.ContractProblem(
        outcomes=(0.0, 4.0), efforts=(0.0, 1.0),
        density=((0.8, 0.2), (0.2, 0.8)),
        effort_costs=(0.0, 0.5), reservation=50.0,
        wage_grid=lm.default_wage_grid((0.0, 4.0), 21))
    with pytest.raises(InfeasibleError):
        lm.solve_first_best(p)
    with pytest.raises(InfeasibleError):
        lm.solve_second_best(p)


def test_grid_refinement_never_hurts():
    """The 41-level grid contains the 21-level one exactly (same
    rationals, same rounding), so both optima are monotone under
    refinement — exactly, not approximately."""
    p21 = two_by_two()
    p41 = lm.ContractProblem(
        outcomes=p21.outcomes, efforts=p21.efforts, density=p21.density,
        effort_costs=p21.effort_costs, reservation=p21.reservation,
        wage_grid=lm.default_wage_grid((0.0, 4.0), 41))
    assert set(p21.wage_grid) <= set(p41.wage_grid)
    assert lm.solve_first_best(p41).principal_value >= \
        lm.solve_first_best(p21).principal_value
    assert lm.solve_second_best(p41).principal_value >= \
        lm.solve_second_best(p21).principal_value


# ---------------------------------------------------------------------
# Problem statement validation and utilities
# ---------------------------------------------------------------------

def test_utility_families():
    for spec, checks in [
        (lm.UtilitySpec("sqrt"), [(0.0, 0.0), (4.0, 2.0)]),
        (lm.UtilitySpec("linear"), [(0.0, 0.0), (3.0, 3.0)]),
        (lm.UtilitySpec("log1p"), [(0.0, 0.0), (math.e - 1.0, 1.0)]),
        (lm.UtilitySpec("crra", 0.5), [(0.0, 0.0), (4.0, 4.0)]),
    ]:
        for x, want in checks:
            assert spec(x) == pytest.approx(want, abs=1e-12)


def test_problem_validation():
    grid = lm.default_wage_grid((0.0, 4.0), 5)
    ok = dict(outcomes=(0.0, 4.0), efforts=(0.0, 1.0),
              density=((0.5, 0.5), (0.2, 0.8)),
              effort_costs=(0.0, 0.5), wage_grid=grid)
    lm.ContractProblem(**ok)   # sanity: the base case constructs
    with pytest.raises(ValueError):
        lm.ContractProblem(**{**ok, "density": ((0.5, 0.6), (0.2, 0.8))})
    with pytest.raises(ValueError):
        lm.ContractProblem(**{**ok, "efforts": (1.0, 0.0)})
    with pytest.raises(ValueError):
        lm.ContractProblem(**{**ok, "effort_costs": (0.5, 0.0)})
    with pytest.raises(ValueError):
        lm.ContractProblem(**{**ok, "density": ((0.5, 0.5),)})


def test_gap_report_serialization():
    report = lm.welfare_gap(two_by_two())
    d = report.to_dict()
    assert d["gap"] == report.gap
    assert d["first_best"]["rule"] == list(report.first_best.rule)
    assert float(report) == report.gap
