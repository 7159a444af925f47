"""Randomized cross-backend fuzz: arbitrary instances, both rules.

Instances mix event kinds, domain sizes, and weight vectors; every run is
executed through the object engine, the pure loop, and (when built) the
kernel, and all three must agree exactly.
"""

from lllab.backend import compiled, fast_run, has_kernel
from lllab.engine import run, run_exact
from lllab.instance import Instance, Variable, explicit_event, predicate_event
from lllab.rng import stream_u64
from lllab.tables import SeededTable


def rnd(seed, *keys):
    h = seed
    for k in keys:
        h = stream_u64(h, k, 0)
    return h


def random_instance(trial):
    n = 4 + rnd(trial, 0) % 10
    variables = []
    for i in range(n):
        q = 2 + rnd(trial, 1, i) % 3
        if rnd(trial, 2, i) % 3 == 0:
            raw = [1 + rnd(trial, 3, i, j) % 5 for j in range(q)]
            total = sum(raw)
            weights = tuple(r / total for r in raw)
            # force an exact unit sum
            weights = weights[:-1] + (1.0 - sum(weights[:-1]),)
            variables.append(Variable(i, q, weights))
        else:
            variables.append(Variable(i, q))
    m = 2 + rnd(trial, 4) % 8
    events = []
    for e in range(m):
        size = 1 + rnd(trial, 5, e) % 4
        vars_ = []
        attempt = 0
        while len(vars_) < size:
            v = rnd(trial, 6, e, attempt) % n
            attempt += 1
            if v not in vars_:
                vars_.append(int(v))
        kind = rnd(trial, 7, e) % 4
        if kind == 0 or size == 1:
            qs = [variables[v].domain_size for v in vars_]
            total = 1
            for q in qs:
                total *= q
            count = rnd(trial, 8, e) % (total + 1)
            picked = set()
            for j in range(40 * (count + 1)):
                if len(picked) >= count:
                    break
                code = rnd(trial, 9, e, j) % total
                values = []
                for q in qs:
                    values.append(int(code % q))
                    code //= q
                picked.add(tuple(values))
            events.append(explicit_event(e, tuple(vars_), picked))
        elif kind == 1:
            events.append(predicate_event(e, tuple(vars_), "monochromatic"))
        elif kind == 2 and size % 2 == 0:
            events.append(predicate_event(e, tuple(vars_), "repetitive-path"))
        else:
            events.append(predicate_event(e, tuple(vars_), "two-colored-cycle"))
    return Instance(variables, events)


def test_fuzz_instances_agree_across_backends():
    for trial in range(40):
        inst = random_instance(trial)
        prog = compiled(inst)
        assert prog.supported, prog.reason
        rule = "random" if trial % 2 else "lex"
        for seed in (0, 17):
            trace = run(inst, SeededTable(inst, seed), max_steps=60,
                        rule=rule, rule_seed=5, check_invariants=True)
            py = fast_run(inst, seed, max_steps=60, rule=rule, rule_seed=5,
                          force_backend="python")
            assert py.f == trace.f and py.t == trace.t, trial
            assert py.steps == trace.resample_rounds()
            assert py.status == trace.status
            counts = {prog.domains[i]: c for i, c in enumerate(py.ind) if c}
            assert counts == trace.resamples_per_domain(), trial
            if has_kernel():
                cy = fast_run(inst, seed, max_steps=60, rule=rule, rule_seed=5,
                              force_backend="cython")
                assert (cy.f, cy.t, cy.ind, cy.steps, cy.status) == \
                       (py.f, py.t, py.ind, py.steps, py.status), trial


def test_fuzz_truncated_agree_across_backends():
    for trial in range(15):
        inst = random_instance(100 + trial)
        coloring = [int(stream_u64(trial, 30, x) % 5)
                    for x in range(inst.n_vars())]
        for rounds in (0, 2, 7):
            py = fast_run(inst, 3, exact_rounds=rounds, key_map=coloring,
                          force_backend="python")
            if has_kernel():
                cy = fast_run(inst, 3, exact_rounds=rounds, key_map=coloring,
                              force_backend="cython")
                assert (cy.f, cy.t, cy.ind, cy.steps, cy.status) == \
                       (py.f, py.t, py.ind, py.steps, py.status), trial
            from lllab.tables import LiftedTable

            obj = run_exact(inst, LiftedTable(inst, 3, coloring), rounds)
            assert py.f == obj.f and py.t == obj.t, trial
