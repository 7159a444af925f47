"""The resampling process: violated domains, maximal disjoint selection, steps.

Two execution paths share one semantics.  The object path below records a
full per-step trace (needed for witness audits) and accepts any table.  The
array path (lllab.backend) runs the same process over compiled arrays for
Monte-Carlo workloads; tests pin both paths to bit-identical results.
"""

import os
from dataclasses import dataclass, field

from .instance import Instance
from .rng import shuffle_in_place
from .tables import SeededTable

RUNNING = "running"
STABILIZED = "stabilized"
STEP_LIMIT = "step-limit"

DEFAULT_MAX_STEPS = int(os.environ.get("LLLAB_MAX_STEPS", 10 ** 6))


def violated_domains(inst: Instance, assignment) -> set:
    """Domains S whose restriction of the assignment is forbidden.

    This is the independent checker used to verify every solver output;
    it never consults the run that produced the assignment.
    """
    out = set()
    for e in inst.events:
        dom = tuple(sorted(e.vars))
        if dom in out:
            continue
        values = tuple(assignment[x] for x in e.vars)
        if e.violated_by(values, inst.event_vars(e)):
            out.add(dom)
    return out


def select_maximal_disjoint(domains, rule="lex", rule_seed=0, round_index=0):
    """Greedy maximal disjoint subfamily of a finite family of var-sets.

    Under the default lex rule candidates are ranked by
    (min var id, size, first occurrence); the random rule shuffles that
    ranking with a seeded stream before the greedy sweep.
    """
    seen, candidates = set(), []
    for i, d in enumerate(domains):
        dom = tuple(sorted(d))
        if not dom:
            raise ValueError("domains must be nonempty")
        if dom not in seen:
            seen.add(dom)
            candidates.append((dom[0], len(dom), i, dom))
    candidates.sort()
    order = [c[3] for c in candidates]
    if rule == "random":
        shuffle_in_place(order, rule_seed, round_index)
    elif rule != "lex":
        raise ValueError(f"unknown selection rule {rule!r}")
    picked, used = [], set()
    for dom in order:
        if all(x not in used for x in dom):
            picked.append(dom)
            used.update(dom)
    return picked


@dataclass
class StepRecord:
    violated: tuple  # A'_n as sorted domain tuples
    selected: tuple = None  # A_n; None in a truncated terminal record
    resampled: tuple = ()  # X_n


@dataclass
class ProcessTrace:
    inst: Instance
    table: object
    rule: str = "lex"
    rule_seed: int = 0
    status: str = RUNNING
    t: list = None
    f: list = None
    steps: list = field(default_factory=list)
    check_invariants: bool = False
    _violated: set = None  # event ids, maintained incrementally
    _first_event: dict = None  # domain -> smallest event id, fixes the lex rank
    _rounds: int = 0

    def resample_rounds(self) -> int:
        return self._rounds

    def assignment(self) -> list:
        return list(self.f)

    def resamples_per_domain(self) -> dict:
        counts = {}
        for r in self.steps:
            for dom in r.selected or ():
                counts[dom] = counts.get(dom, 0) + 1
        return counts


def _event_violated(inst, e, f):
    return e.violated_by(tuple(f[x] for x in e.vars), inst.event_vars(e))


def start_trace(inst: Instance, table, rule="lex", rule_seed=0,
                check_invariants=False) -> ProcessTrace:
    trace = ProcessTrace(inst, table, rule, rule_seed,
                         check_invariants=check_invariants)
    trace.t = [0] * inst.n_vars()
    trace.f = [table.value(x, 0) for x in range(inst.n_vars())]
    trace._violated = {e.id for e in inst.events if _event_violated(inst, e, trace.f)}
    trace._first_event = {}
    for e in inst.events:
        trace._first_event.setdefault(tuple(sorted(e.vars)), e.id)
    return trace


def step(trace: ProcessTrace) -> ProcessTrace:
    """One round: record A'_n, select A_n, bump t on X_n, re-read the table."""
    if trace.status != RUNNING:
        raise ValueError(f"cannot step a trace with status {trace.status!r}")
    inst = trace.inst
    first = trace._first_event
    violated = sorted({tuple(sorted(inst.events[i].vars)) for i in trace._violated})
    if not violated:
        trace.steps.append(StepRecord(violated=(), selected=(), resampled=()))
        trace.status = STABILIZED
        return trace
    ranked = sorted(violated, key=lambda d: (d[0], len(d), first[d]))
    selected = select_maximal_disjoint(ranked, trace.rule, trace.rule_seed,
                                       trace._rounds)
    resampled = tuple(sorted(x for dom in selected for x in dom))
    if trace.check_invariants:
        _assert_step_invariants(trace, violated, selected, resampled)
    trace.steps.append(StepRecord(tuple(violated), tuple(selected), resampled))
    trace._rounds += 1
    for x in resampled:
        trace.t[x] += 1
        trace.f[x] = trace.table.value(x, trace.t[x])
    touched = set()
    for x in resampled:
        touched.update(inst.var_index[x])
    for eid in touched:
        if _event_violated(inst, inst.events[eid], trace.f):
            trace._violated.add(eid)
        else:
            trace._violated.discard(eid)
    return trace


def _assert_step_invariants(trace, violated, selected, resampled):
    inst = trace.inst
    vset = set(violated)
    assert all(d in vset for d in selected), "A_n must be a subset of A'_n"
    used = set()
    for d in selected:
        assert not used.intersection(d), "A_n must be pairwise disjoint"
        used.update(d)
    for d in violated:
        assert used.intersection(d), "A_n must be maximal in A'_n"
    rset = set(resampled)
    for e in inst.events:
        if rset.isdisjoint(e.vars):
            assert not _event_violated(inst, e, trace.f), \
                "events disjoint from X_n must be avoided by f_n"


def run(inst: Instance, table, max_steps: int = DEFAULT_MAX_STEPS, rule="lex",
        rule_seed=0, check_invariants=False) -> ProcessTrace:
    """Iterate steps until stabilized or the step budget is exhausted."""
    if max_steps < 0:
        raise ValueError("max_steps must be nonnegative")
    trace = start_trace(inst, table, rule, rule_seed, check_invariants)
    while trace.status == RUNNING:
        if trace.resample_rounds() >= max_steps and trace._violated:
            violated = sorted({tuple(sorted(inst.events[i].vars))
                               for i in trace._violated})
            trace.steps.append(StepRecord(tuple(violated), None, ()))
            trace.status = STEP_LIMIT
            break
        step(trace)
    return trace


def run_exact(inst: Instance, table, rounds: int, rule="lex", rule_seed=0,
              check_invariants=False) -> ProcessTrace:
    """Execute exactly `rounds` resampling rounds (vacuous once stabilized).

    The trace ends with a terminal record holding the final violated set,
    so witnesses of height rounds+1 stay reachable through traceback.
    """
    trace = start_trace(inst, table, rule, rule_seed, check_invariants)
    for _ in range(rounds):
        if not trace._violated:
            break
        step(trace)
    violated = sorted({tuple(sorted(inst.events[i].vars))
                       for i in trace._violated})
    trace.steps.append(StepRecord(tuple(violated),
                                  None if violated else (), ()))
    trace.status = STEP_LIMIT if violated else STABILIZED
    return trace


@dataclass
class SolveResult:
    status: str
    assignment: list
    seed: int
    steps: int
    resamples_per_domain: dict
    surviving: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "seed": self.seed,
            "steps": self.steps,
            "final_assignment": self.assignment,
            "resamples_per_domain": {" ".join(map(str, k)): v
                                     for k, v in sorted(self.resamples_per_domain.items())},
            "surviving_domains": [list(d) for d in self.surviving],
        }


def solve(inst: Instance, seed: int, max_steps: int = DEFAULT_MAX_STEPS,
          rule="lex", rule_seed=0) -> SolveResult:
    """Fresh seeded table, run to stabilization, return the assignment.

    Dispatches to the compiled kernel when the instance supports it; the
    object path is the fallback and the semantics oracle.
    """
    from . import backend

    prog = backend.compiled(inst)
    if prog.supported and rule in ("lex", "random"):
        res = backend.fast_run(inst, seed, max_steps=max_steps, rule=rule,
                               rule_seed=rule_seed)
        counts = {prog.domains[i]: int(c) for i, c in enumerate(res.ind) if c}
        surviving = res.surviving_domains(inst)
        return SolveResult(res.status, list(res.f), seed, res.steps, counts, surviving)
    trace = run(inst, SeededTable(inst, seed), max_steps, rule, rule_seed)
    surviving = []
    if trace.status != STABILIZED:
        surviving = sorted({tuple(sorted(inst.events[i].vars)) for i in trace._violated})
    return SolveResult(trace.status, trace.assignment(), seed,
                       trace.resample_rounds(), trace.resamples_per_domain(),
                       surviving)
