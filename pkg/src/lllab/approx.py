"""Truncated resampling on finite graphs with shared tables.

Variables play the role of combinatorial atoms sitting over base points
(vertices of the demonstrated graph).  A proper coloring of a high enough
power of the dependency graph lets many variables share one fallback
stream; running the process a fixed number of rounds then leaves a defect
set whose expected measure is controlled by the witness-tree tail mass.
"""

import math
from dataclasses import dataclass, field

from .instance import Instance
from .tables import LiftedTable


@dataclass
class DependencyGraph:
    n: int
    adj: list  # sorted neighbor tuples

    def degree(self, v) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)


def build_dependency_graph(inst: Instance) -> DependencyGraph:
    """Atoms adjacent iff they co-occur in some event domain."""
    n = inst.n_vars()
    adj = [set() for _ in range(n)]
    for d in inst.domains():
        for a in d:
            for b in d:
                if a != b:
                    adj[a].add(b)
    return DependencyGraph(n, [tuple(sorted(s)) for s in adj])


def _ball(G: DependencyGraph, v: int, r: int):
    """Vertices within graph distance 1..r of v."""
    seen = {v}
    frontier = [v]
    out = []
    for _ in range(r):
        nxt = []
        for u in frontier:
            for w in G.adj[u]:
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
                    out.append(w)
        if not nxt:
            break
        frontier = nxt
    return out


def power_graph(G: DependencyGraph, r: int) -> DependencyGraph:
    if r < 1:
        raise ValueError("power must be at least 1")
    return DependencyGraph(G.n, [tuple(sorted(_ball(G, v, r))) for v in range(G.n)])


def greedy_coloring(G: DependencyGraph) -> list:
    colors = [-1] * G.n
    for v in range(G.n):
        used = {colors[u] for u in G.adj[v] if colors[u] >= 0}
        c = 0
        while c in used:
            c += 1
        colors[v] = c
    return colors


def greedy_power_coloring(G: DependencyGraph, r: int) -> list:
    """Greedy proper coloring of G^r without materializing the power graph."""
    colors = [-1] * G.n
    for v in range(G.n):
        used = {colors[u] for u in _ball(G, v, r) if colors[u] >= 0}
        c = 0
        while c in used:
            c += 1
        colors[v] = c
    return colors


def is_proper_at_power(G: DependencyGraph, coloring, r: int) -> bool:
    for v in range(G.n):
        cv = coloring[v]
        for u in _ball(G, v, r):
            if u > v and coloring[u] == cv:
                return False
    return True


# --- shadows and defect ------------------------------------------------------


def identity_atom_map(inst: Instance) -> dict:
    return {x: (x,) for x in range(inst.n_vars())}


def shadow_map(inst: Instance, atom_map: dict) -> dict:
    """Base point -> sorted tuple of event domains lying over it."""
    shadows = {}
    for d in inst.domains():
        for a in d:
            for x in atom_map[a]:
                shadows.setdefault(x, set()).add(d)
    return {x: tuple(sorted(s)) for x, s in shadows.items()}


def shadow(inst: Instance, atom_map: dict, x) -> tuple:
    out = {d for d in inst.domains() if any(x in atom_map[a] for a in d)}
    return tuple(sorted(out))


@dataclass
class DefectReport:
    base_points: list
    defect_set: list
    fraction: float

    def to_dict(self):
        return {"n_base_points": len(self.base_points),
                "defect_size": len(self.defect_set),
                "fraction": self.fraction}


def measure_defect(inst: Instance, assignment, atom_map=None, base_points=None) -> DefectReport:
    from .engine import violated_domains

    if atom_map is None:
        atom_map = identity_atom_map(inst)
    if base_points is None:
        base_points = sorted({x for pts in atom_map.values() for x in pts})
    bad = violated_domains(inst, assignment)
    defect = set()
    for d in bad:
        for a in d:
            defect.update(atom_map[a])
    defect &= set(base_points)
    return DefectReport(list(base_points), sorted(defect),
                        len(defect) / len(base_points) if base_points else 0.0)


# --- picking the truncation height ------------------------------------------


@dataclass
class ChosenN:
    N: int
    mode: str  # "analytic" | "empirical"
    epsilon: float
    details: dict = field(default_factory=dict)


def choose_N(inst: Instance, omega: dict, epsilon: float, atom_map=None,
             analytic_cap: int = 400, probe_seeds: int = 5,
             empirical_cap: int = 4096) -> ChosenN:
    """Smallest N whose height-(N+1) tree mass is at most epsilon/2 over
    every base point's shadow; falls back to doubling N against measured
    defect when no positive-margin certificate is available."""
    from .certify import check_glll

    if atom_map is None:
        atom_map = identity_atom_map(inst)
    cert = None
    try:
        cert = check_glll(inst, omega) if omega else None
    except (KeyError, ValueError):
        cert = None
    if cert is not None and cert.valid and cert.margin > 0:
        from .instance import domain_probability

        shadows = shadow_map(inst, atom_map)
        domains = inst.domains()
        probs = {d: domain_probability(inst, d) for d in domains}
        inter = getattr(inst, "_domain_inter", None)
        if inter is None:
            by_var = {}
            for d in domains:
                for x in d:
                    by_var.setdefault(x, []).append(d)
            inter = {d: sorted({d2 for x in d for d2 in by_var[x]})
                     for d in domains}
            inst._domain_inter = inter
        prev = {d: 0.0 for d in domains}
        for h in range(1, analytic_cap + 1):
            cur = {d: probs[d] * math.prod(1.0 + prev[d2] for d2 in inter[d])
                   for d in domains}
            delta = {d: cur[d] - prev[d] for d in domains}
            worst = max((sum(delta[d] for d in sh) for sh in shadows.values()),
                        default=0.0)
            if worst <= epsilon / 2.0:
                return ChosenN(h - 1, "analytic", epsilon,
                               {"tail_mass": worst, "height": h})
            prev = cur
    # empirical fallback: double N until the measured mean defect fits
    N = 1
    while N <= empirical_cap:
        fracs = [run_truncated(inst, None, seed, N, atom_map=atom_map,
                               check_coloring=False)[1].fraction
                 for seed in range(probe_seeds)]
        mean = sum(fracs) / len(fracs)
        if mean <= epsilon:
            return ChosenN(N, "empirical", epsilon, {"probe_mean_defect": mean})
        N *= 2
    raise RuntimeError("empirical search for N exceeded the cap")


def run_truncated(inst: Instance, coloring, table_seed: int, N: int,
                  atom_map=None, base_points=None, check_coloring: bool = True):
    """Exactly N rounds of the shared-table process; returns (f_N, defect).

    The coloring must be proper on the 2(N+1) power of the dependency
    graph; pass check_coloring=False only when the caller already verified
    it (the check walks every ball and can dominate small runs).
    """
    from . import backend
    from .engine import run_exact

    if atom_map is None:
        atom_map = identity_atom_map(inst)
    if coloring is None:
        coloring = list(range(inst.n_vars()))  # injective, trivially proper
    elif check_coloring:
        G = build_dependency_graph(inst)
        if not is_proper_at_power(G, coloring, 2 * (N + 1)):
            raise ValueError(f"coloring is not proper on the dependency graph "
                             f"power {2 * (N + 1)}")
    prog = backend.compiled(inst)
    if prog.supported:
        res = backend.fast_run(inst, table_seed, exact_rounds=N, key_map=coloring)
        f = res.f
    else:
        trace = run_exact(inst, LiftedTable(inst, table_seed, coloring), N)
        f = trace.f
    return f, measure_defect(inst, f, atom_map, base_points)
