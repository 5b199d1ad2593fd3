import random
import warnings

import pytest

from ethplan.conflict import MoralProblem, is_lex_minimal
from ethplan.domain import sat_set
from ethplan.evaluation import EthicalPlanningDomain, Relation, ValueBase, compare, quant_compare
from ethplan.ltlf import parse_formula
from ethplan.search import (
    PlanQuery,
    count_plans,
    enumerate_plans,
    is_dominated,
    iter_non_dominated,
    maximal_profiles,
    non_dominated_set,
)
from conftest import PI1, PI2
from oracles import random_formula, random_state, random_theory


def test_enumerate_examples(theory):
    assert list(enumerate_plans({"a", "b"}, 2, "exact")) == [("a", "a"), ("a", "b"), ("b", "a"), ("b", "b")]
    assert list(enumerate_plans({"a", "b"}, 0)) == [()]
    assert list(enumerate_plans({"a", "b"}, 0, "exact")) == [()]
    assert len(list(enumerate_plans(theory.actions, 2, "exact"))) == 16
    assert list(enumerate_plans(["b", "a"], 1)) == [(), ("b",), ("a",)]
    with pytest.raises(ValueError):
        list(enumerate_plans([], 1))
    with pytest.raises(ValueError):
        list(enumerate_plans(["a"], -1))


@pytest.mark.parametrize("n,k", [(1, 3), (2, 4), (3, 3), (4, 2)])
def test_enumerate_counts(n, k):
    acts = [f"a{i}" for i in range(n)]
    for mode in ("exact", "all"):
        plans = list(enumerate_plans(acts, k, mode))
        assert len(plans) == len(set(plans)) == count_plans(n, k, mode)
    plans = list(enumerate_plans(acts, k))
    keys = [(len(p), [acts.index(a) for a in p]) for p in plans]
    assert keys == sorted(keys)


def test_is_dominated_hospital(hospital):
    q = PlanQuery(hospital.ethical_domain(3), 2, lengths="exact")
    witness = is_dominated(q, PI2)
    assert witness is not None
    assert compare(q.domain, witness, PI2).relation is Relation.FIRST_PREFERRED
    assert is_dominated(q, PI1) is None
    with pytest.raises(ValueError):
        is_dominated(q, ("ask",) * 3)


def test_empty_value_base(theory):
    d = EthicalPlanningDomain(theory, {"blocked"}, ValueBase(()))
    q = PlanQuery(d, 1)
    for plan in q.plans():
        assert is_dominated(q, plan) is None
    q1 = PlanQuery(d, 1, lengths="exact")
    assert non_dominated_set(q1) == list(enumerate_plans(theory.actions, 1, "exact"))


def test_non_dominated_hospital(hospital, omega1):
    d = hospital.ethical_domain(3)
    q = PlanQuery(d, 2, lengths="exact")
    reps = non_dominated_set(q, collapse_profiles=True)
    assert len(reps) == 1
    assert frozenset().union(*q.profile(reps[0])) == omega1
    assert PI1 in non_dominated_set(q)


def test_single_value_reach(theory):
    reach = parse_formula("F destination")
    d = EthicalPlanningDomain(theory, {"blocked"}, ValueBase.of([reach]))
    q = PlanQuery(d, 2)
    expected = [p for p in q.plans() if sat_set({reach}, p, d.initial, theory)]
    assert non_dominated_set(q) == expected
    assert ("ask", "move") in expected and ("move",) not in expected


def test_parallel_matches_sequential(hospital):
    for mu in (2, 3):
        for lengths in ("all", "exact"):
            q = PlanQuery(hospital.ethical_domain(mu), 3, lengths=lengths)
            assert non_dominated_set(q, workers=2) == non_dominated_set(q)


def _random_domain(rng):
    props = ("p", "q")
    th = random_theory(rng, props, ("a", "b"))
    pool = {random_formula(rng, 5, props) for _ in range(rng.randint(0, 4))}
    m = rng.randint(1, 3)
    levels = [set() for _ in range(m)]
    for phi in pool:
        levels[rng.randrange(m)].add(phi)
    return EthicalPlanningDomain(th, random_state(rng, props), ValueBase(tuple(map(frozenset, levels))))


def test_against_pairwise_oracle_and_correspondence():
    rng = random.Random(5)
    for _ in range(60):
        d = _random_domain(rng)
        horizon = rng.randint(0, 3)
        for mode in ("qual", "quant"):
            q = PlanQuery(d, horizon, mode)
            plans = list(q.plans())
            oracle = [
                p for p in plans
                if not any(compare(d, o, p, mode).relation is Relation.FIRST_PREFERRED for o in plans)
            ]
            got = non_dominated_set(q)
            assert got == oracle and got
            for p in plans:
                w = is_dominated(q, p)
                assert (w is None) == (p in got)
                if w is not None:
                    assert compare(d, p, w, mode).relation is Relation.SECOND_PREFERRED
        # quant-maximal plans are qual-non-dominated
        quant_best = non_dominated_set(PlanQuery(d, horizon, "quant"))
        qual_best = set(non_dominated_set(PlanQuery(d, horizon, "qual")))
        assert set(quant_best) <= qual_best
        # non-dominated iff its Sat-set is a lex-minimal contraction
        problem = MoralProblem(d.values.union(), d.theory, d.initial)
        for p in plans:
            contraction = problem.with_values(sat_set(problem.values, p, d.initial, d.theory))
            assert (p in qual_best) == is_lex_minimal(problem, d.values, contraction, horizon)


def test_streaming_matches_front(hospital):
    q = PlanQuery(hospital.ethical_domain(3), 3)
    front = maximal_profiles(q)
    assert list(iter_non_dominated(q, front)) == non_dominated_set(q)
    assert all(q.profile(p) in front for p in non_dominated_set(q))
