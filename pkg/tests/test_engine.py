import itertools

import pytest

from lllab.engine import (STABILIZED, STEP_LIMIT, run, run_exact,
                          select_maximal_disjoint, solve, start_trace, step,
                          violated_domains)
from lllab.instance import Instance, Variable, explicit_event, predicate_event
from lllab.tables import ExplicitTable, SeededTable


def test_violated_domains_examples(hyper_k5_n20):
    inst = hyper_k5_n20
    all_zero = [0] * 20
    assert violated_domains(inst, all_zero) == {tuple(sorted(e.vars))
                                                for e in inst.events}
    # proper 2-coloring of an even cycle's edge events
    cyc = Instance([Variable(i, 2) for i in range(6)],
                   [predicate_event(i, (i, (i + 1) % 6), "endpoints-equal")
                    for i in range(6)])
    assert violated_domains(cyc, [i % 2 for i in range(6)]) == set()
    # exactly the middle of three chained events violated
    chain = Instance([Variable(i, 2) for i in range(4)],
                     [explicit_event(0, (0, 1), [(0, 1)]),
                      explicit_event(1, (1, 2), [(0, 0)]),
                      explicit_event(2, (2, 3), [(1, 0)])])
    f = [0, 0, 0, 1]
    brute = {tuple(sorted(e.vars)) for e in chain.events
             if tuple(f[x] for x in e.vars) in e.assignments}
    assert violated_domains(chain, f) == brute == {(1, 2)}


def test_select_maximal_disjoint_examples():
    fam = [(0, 1), (1, 2), (3,)]
    assert select_maximal_disjoint(fam) == [(0, 1), (3,)]
    disjoint = [(0, 1), (2, 3), (4,)]
    assert select_maximal_disjoint(disjoint) == sorted(disjoint)
    assert select_maximal_disjoint([]) == []
    # oracle: the only maximal disjoint families of fam are these two
    maximal = []
    for r in range(1, 4):
        for sub in itertools.combinations(fam, r):
            flat = [x for d in sub for x in d]
            if len(flat) != len(set(flat)):
                continue
            if all(set(d) & set(flat) for d in fam):
                maximal.append(set(sub))
    assert {frozenset(m) for m in maximal} == {frozenset({(0, 1), (3,)}),
                                               frozenset({(1, 2), (3,)})}


def test_select_random_rule_is_maximal_and_seeded():
    fam = [(0, 1), (1, 2), (2, 3), (3, 4), (5,)]
    a = select_maximal_disjoint(fam, rule="random", rule_seed=1, round_index=0)
    b = select_maximal_disjoint(fam, rule="random", rule_seed=1, round_index=0)
    assert a == b
    used = set()
    for d in a:
        assert not used & set(d)
        used.update(d)
    for d in fam:
        assert used & set(d)
    with pytest.raises(ValueError):
        select_maximal_disjoint(fam, rule="bogus")
    with pytest.raises(ValueError):
        select_maximal_disjoint([()])


def single_event_instance():
    return Instance([Variable(0, 2)], [explicit_event(0, (0,), [(0,)])])


def test_step_hand_simulation():
    inst = single_event_instance()
    table = ExplicitTable(inst, {(0, 0): 0, (0, 1): 1})
    trace = start_trace(inst, table)
    step(trace)
    assert trace.t == [1] and trace.f == [1]
    step(trace)
    assert trace.status == STABILIZED
    assert trace.resample_rounds() == 1
    assert trace.steps[0].violated == ((0,),)
    assert trace.steps[1].violated == ()


def test_step_on_avoiding_start_stabilizes_immediately():
    inst = single_event_instance()
    table = ExplicitTable(inst, {(0, 0): 1})
    trace = start_trace(inst, table)
    step(trace)
    assert trace.status == STABILIZED and trace.resample_rounds() == 0
    with pytest.raises(ValueError):
        step(trace)


def test_run_examples(hyper_k5_n50):
    trace = run(hyper_k5_n50, SeededTable(hyper_k5_n50, 3), max_steps=10 ** 5,
                check_invariants=True)
    assert trace.status == STABILIZED
    assert violated_domains(hyper_k5_n50, trace.f) == set()

    inst = single_event_instance()
    table = ExplicitTable(inst, {(0, 0): 0})
    tr = run(inst, table, max_steps=0)
    assert tr.status == STEP_LIMIT
    assert len(tr.steps) == 1 and tr.steps[0].selected is None

    certain = Instance([Variable(0, 2)], [explicit_event(0, (0,), [(0,), (1,)])])
    tr = run(certain, SeededTable(certain, 5), max_steps=50)
    assert tr.status == STEP_LIMIT and tr.resample_rounds() == 50


def test_resample_counts_sum_to_t(hyper_k5_n50):
    inst = hyper_k5_n50
    for seed in range(5):
        trace = run(inst, SeededTable(inst, seed), max_steps=10 ** 5)
        assert trace.status == STABILIZED
        counts = trace.resamples_per_domain()
        for x in range(inst.n_vars()):
            total = sum(c for dom, c in counts.items() if x in dom)
            assert total == trace.t[x]


def test_traces_are_deterministic(hyper_k5_n50):
    inst = hyper_k5_n50
    a = run(inst, SeededTable(inst, 11), rule="random", rule_seed=2)
    b = run(inst, SeededTable(inst, 11), rule="random", rule_seed=2)
    assert a.f == b.f and a.t == b.t and a.status == b.status
    assert [(r.violated, r.selected, r.resampled) for r in a.steps] == \
           [(r.violated, r.selected, r.resampled) for r in b.steps]


def test_run_exact_truncates(hyper_k5_n50):
    inst = hyper_k5_n50
    tr = run_exact(inst, SeededTable(inst, 123), 1)
    full = run(inst, SeededTable(inst, 123))
    if full.resample_rounds() > 1:
        assert tr.status == STEP_LIMIT
    assert tr.resample_rounds() <= 1


def test_solve_reports(hyper_k5_n50):
    res = solve(hyper_k5_n50, seed=7)
    assert res.status == "stabilized"
    assert violated_domains(hyper_k5_n50, res.assignment) == set()
    assert res.steps >= 0 and res.seed == 7
    doc = res.to_dict()
    assert set(doc) >= {"status", "seed", "steps", "final_assignment",
                        "resamples_per_domain"}

    empty = Instance([Variable(0, 3), Variable(1, 2)], [])
    res = solve(empty, seed=9)
    assert res.status == "stabilized" and res.steps == 0
    assert res.resamples_per_domain == {}
    assert res.assignment == [SeededTable(empty, 9).value(x, 0) for x in (0, 1)]


def test_bounded_degree_linear_hypergraph_is_solved():
    from lllab.apps import gen_hypergraph_2col

    inst = gen_hypergraph_2col(5, 120, "random-linear", d=4, m=30, seed=2)
    from lllab.certify import check_slll

    assert check_slll(inst).valid  # e*(d+1) = 5e below 2^(k-1) = 16
    res = solve(inst, seed=0)
    assert res.status == "stabilized"
    assert violated_domains(inst, res.assignment) == set()
