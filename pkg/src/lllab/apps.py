"""Coloring applications: generators, pipelines, and independent verifiers.

Every pipeline output is re-checked by a verifier that scans the graph
directly and never consults the solver state.
"""

import math
from dataclasses import dataclass

from .engine import DEFAULT_MAX_STEPS, solve
from .graphs import GraphError, SimpleGraph
from .instance import Instance, Variable, predicate_event
from .rng import stream_u64


# --- hypergraph 2-coloring ----------------------------------------------------


def gen_hypergraph_2col(k: int, n: int, topology: str = "cyclic", d: int = None,
                        m: int = None, seed: int = 0) -> Instance:
    """One monochromatic event per edge of a k-uniform hypergraph."""
    if k < 2:
        raise ValueError("edges need at least two vertices")
    variables = [Variable(i, 2) for i in range(n)]
    if topology == "cyclic":
        if n < 2 * k:
            raise ValueError("cyclic topology needs n >= 2k")
        edges = [tuple((i + j) % n for j in range(k)) for i in range(n)]
    elif topology == "random-linear":
        if d is None:
            raise ValueError("random-linear topology needs a degree bound d")
        m = m if m is not None else n // k
        edges, degs = [], []
        attempt = 0
        while len(edges) < m:
            attempt += 1
            if attempt > 200 * m + 1000:
                raise ValueError("could not place edges under the degree bound; "
                                 "d is effectively unbounded for these parameters")
            picked = []
            pool = set()
            i = 0
            while len(picked) < k and i < 10 * k:
                v = stream_u64(seed, len(edges), attempt * 31 + i) % n
                i += 1
                if v not in pool:
                    pool.add(v)
                    picked.append(v)
            if len(picked) < k:
                continue
            cand = tuple(sorted(picked))
            shared = [len(pool.intersection(e)) for e in edges]
            if any(s > 1 for s in shared):
                continue
            new_deg = sum(1 for s in shared if s)
            if new_deg > d:
                continue
            if any(degs[j] + 1 > d for j, s in enumerate(shared) if s):
                continue
            for j, s in enumerate(shared):
                if s:
                    degs[j] += 1
            degs.append(new_deg)
            edges.append(cand)
    else:
        raise ValueError(f"unknown topology {topology!r}")
    events = [predicate_event(i, e, "monochromatic") for i, e in enumerate(edges)]
    return Instance(variables, events)


def hypergraph_slll_margin(k: int, d: int) -> float:
    """Closed form 1 - e * 2^(1-k) * (d+1) for uniform 2-coloring instances."""
    return 1.0 - math.e * 2.0 ** (1 - k) * (d + 1)


# --- regularization -----------------------------------------------------------


def regularize(G: SimpleGraph, d: int, depth: int):
    """Attach depth-truncated trees so every original vertex reaches degree d.

    Returns (H, embedding) where embedding maps original vertex ids into H;
    attached interior vertices have degree d, truncation leaves degree 1.
    """
    if G.max_degree() > d:
        raise GraphError(f"graph has degree {G.max_degree()} > {d}")
    nodes = [(x, ()) for x in range(G.n)]
    edges = [(u, v) for u, v in G.edges]
    index = {node: i for i, node in enumerate(nodes)}

    def add_node(node):
        index[node] = len(nodes)
        nodes.append(node)
        return index[node]

    frontier = []
    for x in range(G.n):
        missing = d - G.degree(x)
        for j in range(1, missing + 1):
            if depth >= 1:
                node = (x, (j,))
                i = add_node(node)
                edges.append((x, i))
                frontier.append(node)
    level = 1
    while level < depth:
        nxt = []
        for node in frontier:
            x, s = node
            for j in range(1, d):
                child = (x, s + (j,))
                i = add_node(child)
                edges.append((index[node], i))
                nxt.append(child)
        frontier = nxt
        level += 1
    H = SimpleGraph(len(nodes), edges)
    embedding = {x: x for x in range(G.n)}
    return H, embedding


# --- good partial colorings and greedy extension -------------------------------


def goodness_instance(G: SimpleGraph, eps: float) -> Instance:
    """One bad event per vertex: it loses its color and sees too few repeats."""
    d = G.max_degree()
    if not G.is_regular(d) or d % 2:
        raise GraphError("goodness instances need a d-regular graph with even d")
    if G.has_triangle():
        raise GraphError("goodness instances need a triangle-free graph")
    q = d // 2
    min_repeats = math.ceil(eps * d)
    variables = [Variable(i, q) for i in range(G.n)]
    events = []
    for x in range(G.n):
        neighbors = list(G.adj[x])
        ring = sorted({z for y in neighbors for z in G.adj[y]}
                      - {x} - set(neighbors))
        vars_ = [x] + neighbors + ring
        local = {v: i for i, v in enumerate(vars_)}
        adj = [tuple(sorted(local[z] for z in G.adj[y])) for y in neighbors]
        events.append(predicate_event(
            x, tuple(vars_), "goodness-failure",
            min_repeats=min_repeats, adj=tuple(adj)))
    return Instance(variables, events)


@dataclass
class GoodColoringResult:
    status: str
    full: list  # every vertex's tentative color
    colored: dict  # the partial proper coloring (kept vertices only)
    eps: float
    verified_proper: bool
    verified_good: bool
    steps: int


def kept_vertices(G: SimpleGraph, full) -> set:
    return {x for x in range(G.n) if all(full[y] != full[x] for y in G.adj[x])}


def verify_goodness(G: SimpleGraph, full, colored: dict, eps: float) -> bool:
    """Direct count: every uncolored vertex sees >= ceil(eps*d) repeats."""
    d = G.max_degree()
    need = math.ceil(eps * d)
    for x in range(G.n):
        if x in colored:
            continue
        counts = {}
        for y in G.adj[x]:
            if y in colored:
                counts[colored[y]] = counts.get(colored[y], 0) + 1
        repeated = sum(1 for c in counts.values() if c >= 2)
        if repeated < need:
            return False
    return True


def good_partial_coloring(G: SimpleGraph, eps: float, seed: int,
                          max_steps: int = DEFAULT_MAX_STEPS) -> GoodColoringResult:
    inst = goodness_instance(G, eps)
    res = solve(inst, seed, max_steps=max_steps)
    full = res.assignment
    kept = kept_vertices(G, full)
    colored = {x: full[x] for x in kept}
    proper = all(colored[u] != colored[v] for u, v in G.edges
                 if u in colored and v in colored)
    good = verify_goodness(G, full, colored, eps) if res.status == "stabilized" else False
    return GoodColoringResult(res.status, full, colored, eps, proper, good, res.steps)


def greedy_extend(G: SimpleGraph, partial: dict):
    """Complete a partial proper coloring with the min-free-color sweep.

    Uncolored vertices are scheduled by an auxiliary greedy coloring of the
    induced subgraph, one color class per round, so no two adjacent
    vertices are decided in the same round.
    """
    uncolored = sorted(x for x in range(G.n) if x not in partial)
    aux = {}
    for x in uncolored:
        used = {aux[y] for y in G.adj[x] if y in aux}
        c = 0
        while c in used:
            c += 1
        aux[x] = c
    f = dict(partial)
    rounds = 1 + max(aux.values(), default=-1)
    new_colors = {}
    for r in range(rounds):
        for x in uncolored:
            if aux[x] != r:
                continue
            used = {f[y] for y in G.adj[x] if y in f}
            c = 0
            while c in used:
                c += 1
            f[x] = c
            new_colors[x] = c
    return [f[x] for x in range(G.n)], new_colors


def verify_proper(G: SimpleGraph, coloring) -> bool:
    return all(coloring[u] != coloring[v] for u, v in G.edges)


# --- list coloring --------------------------------------------------------------


@dataclass
class ListColoringResult:
    status: str
    coloring: dict  # vertex -> chosen color (from its list)
    hypothesis_ok: bool
    violations: list
    verified: bool
    steps: int


def check_list_hypothesis(G: SimpleGraph, lists: dict, k: int):
    violations = []
    for x in range(G.n):
        L = lists[x]
        if len(L) < k:
            violations.append(("short-list", x, len(L)))
        for c in L:
            sharing = sum(1 for y in G.adj[x] if c in lists[y])
            if sharing > k / 8.0:
                violations.append(("over-shared", x, c, sharing))
    return violations


def list_coloring_lll(G: SimpleGraph, lists: dict, k: int, seed: int = 0,
                      max_steps: int = DEFAULT_MAX_STEPS) -> ListColoringResult:
    """Solve the one-event-per-(edge, shared color) instance.

    The hypothesis (list sizes >= k, each color shared with at most k/8
    neighbors) is checked and reported; solving is attempted either way.
    """
    violations = check_list_hypothesis(G, lists, k)
    lists_sorted = {x: sorted(lists[x]) for x in range(G.n)}
    variables = [Variable(x, max(1, len(lists_sorted[x]))) for x in range(G.n)]
    events = []
    for u, v in G.edges:
        shared = set(lists_sorted[u]).intersection(lists_sorted[v])
        for c in sorted(shared):
            iu, iv = lists_sorted[u].index(c), lists_sorted[v].index(c)
            events.append(predicate_event(len(events), (u, v), "list-conflict",
                                          values=(iu, iv)))
    inst = Instance(variables, events)
    res = solve(inst, seed, max_steps=max_steps)
    coloring = {x: lists_sorted[x][res.assignment[x]] for x in range(G.n)
                if lists_sorted[x]}
    verified = (res.status == "stabilized"
                and all(coloring[u] != coloring[v] for u, v in G.edges)
                and all(coloring[x] in lists[x] for x in range(G.n)))
    return ListColoringResult(res.status, coloring, not violations, violations,
                              verified, res.steps)


# --- nonrepetitive and acyclic colorings ----------------------------------------


class EnumerationBudgetError(RuntimeError):
    pass


def enumerate_paths(G: SimpleGraph, max_len: int, budget: int = 10 ** 6):
    """Simple paths with 2..max_len vertices, one orientation per path."""
    out = []
    count = 0

    def extend(path, seen):
        nonlocal count
        if len(path) >= 2 and path[0] < path[-1]:
            count += 1
            if count > budget:
                raise EnumerationBudgetError("path enumeration overflow")
            out.append(tuple(path))
        if len(path) == max_len:
            return
        for w in G.adj[path[-1]]:
            if w not in seen:
                seen.add(w)
                path.append(w)
                extend(path, seen)
                path.pop()
                seen.discard(w)

    for s in range(G.n):
        extend([s], {s})
    return out


def enumerate_cycles(G: SimpleGraph, max_len: int, budget: int = 10 ** 6):
    """Simple cycles with 3..max_len vertices, canonical orientation."""
    out = []
    count = 0

    def extend(path, seen):
        nonlocal count
        s = path[0]
        u = path[-1]
        if len(path) >= 3 and s in G.adj[u] and path[1] < u:
            count += 1
            if count > budget:
                raise EnumerationBudgetError("cycle enumeration overflow")
            out.append(tuple(path))
        if len(path) == max_len:
            return
        for w in G.adj[u]:
            if w > s and w not in seen:
                seen.add(w)
                path.append(w)
                extend(path, seen)
                path.pop()
                seen.discard(w)

    for s in range(G.n):
        extend([s], {s})
    return out


def gen_nonrepetitive(G: SimpleGraph, palette_size: int, Lmax: int = 8,
                      budget: int = 10 ** 6) -> Instance:
    """One repeated-halves event per even path with at most Lmax vertices."""
    if Lmax < 2 or Lmax % 2:
        raise ValueError("Lmax must be even and at least 2")
    variables = [Variable(i, palette_size) for i in range(G.n)]
    events = []
    for path in enumerate_paths(G, Lmax, budget):
        if len(path) % 2 == 0:
            events.append(predicate_event(len(events), path, "repetitive-path"))
    return Instance(variables, events)


def verify_nonrepetitive(G: SimpleGraph, coloring, Lmax: int,
                         budget: int = 10 ** 6) -> bool:
    for path in enumerate_paths(G, Lmax, budget):
        if len(path) % 2:
            continue
        h = len(path) // 2
        if all(coloring[path[i]] == coloring[path[i + h]] for i in range(h)):
            return False
    return True


def gen_acyclic(G: SimpleGraph, palette_size: int, Cmax: int = 8,
                budget: int = 10 ** 6) -> Instance:
    """Properness per edge plus a two-colored event per short even cycle."""
    if Cmax < 3:
        raise ValueError("Cmax must be at least 3")
    variables = [Variable(i, palette_size) for i in range(G.n)]
    events = [predicate_event(i, e, "endpoints-equal")
              for i, e in enumerate(G.edges)]
    for cyc in enumerate_cycles(G, Cmax, budget):
        if len(cyc) % 2 == 0:
            events.append(predicate_event(len(events), cyc, "two-colored-cycle"))
    return Instance(variables, events)


def verify_acyclic(G: SimpleGraph, coloring, Cmax: int, budget: int = 10 ** 6) -> bool:
    if not verify_proper(G, coloring):
        return False
    for cyc in enumerate_cycles(G, Cmax, budget):
        if len({coloring[v] for v in cyc}) < 3:
            return False
    return True
