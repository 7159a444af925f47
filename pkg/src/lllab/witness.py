"""Witness piles and trees: the combinatorial audit trail of a run.

A pile is a finite set of maps from event domains to resample indices with
pairwise disjoint graphs and downward-closed columns; `traceback` extracts
one from a recorded run for every violated domain.  Neat unique-top piles
embed injectively into proper sequence-trees; the tree weights bound the
expected number of resamples per domain.
"""

import math
from dataclasses import dataclass

from .instance import Instance, domain_probability
from .tables import SeededTable


def pile_element(mapping) -> tuple:
    """Canonical form of one layer: sorted ((var, value), ...) pairs."""
    items = tuple(sorted(mapping.items() if isinstance(mapping, dict) else mapping))
    if not items:
        raise ValueError("pile elements must have nonempty domains")
    return items


def make_pile(elements) -> frozenset:
    return frozenset(pile_element(e) for e in elements)


def elem_domain(elem) -> tuple:
    return tuple(x for x, _ in elem)


def elem_map(elem) -> dict:
    return dict(elem)


def supports(lower, upper) -> bool:
    """lower < upper: some shared var where lower sits one row below."""
    um = dict(upper)
    return any(x in um and v == um[x] - 1 for x, v in lower)


@dataclass
class PileReport:
    is_pile: bool
    is_neat: bool = False
    top: tuple = ()
    height: int = 0
    support: tuple = ()
    reason: str = ""


def validate_pile(pile) -> PileReport:
    elems = sorted(pile)
    if not elems:
        return PileReport(False, reason="empty set")
    seen_cells = set()
    for e in elems:
        for cell in e:
            if cell in seen_cells:
                return PileReport(False, reason=f"graphs overlap at {cell}")
            if cell[1] < 0:
                return PileReport(False, reason="negative resample index")
            seen_cells.add(cell)
    cells = {c for e in elems for c in e}
    for x, v in cells:
        if v > 0 and (x, v - 1) not in cells:
            return PileReport(False, reason=f"({x},{v}) lacks support below")
    support_vars = tuple(sorted({x for x, _ in cells}))

    succ = {e: [o for o in elems if o != e and supports(e, o)] for e in elems}
    color = {}
    order = []

    def dfs(e):
        color[e] = 1
        for o in succ[e]:
            if color.get(o) == 1:
                return False
            if o not in color and not dfs(o):
                return False
        color[e] = 2
        order.append(e)
        return True

    for e in elems:
        if e not in color and not dfs(e):
            return PileReport(True, is_neat=False, support=support_vars,
                              reason="the supports relation has a cycle")
    # longest chain in the supports DAG, following reverse topological order
    length = {}
    for e in order:
        length[e] = 1 + max((length[o] for o in succ[e]), default=0)
    height = max(length.values())
    top = tuple(sorted(e for e in elems if not succ[e]))
    return PileReport(True, True, top, height, support_vars)


def appears_in(pile, table, inst: Instance) -> bool:
    """Does every layer's induced assignment land in the forbidden set?"""
    for elem in pile:
        values = {x: table.value(x, v) for x, v in elem}
        dom = elem_domain(elem)
        hit = False
        for eid in inst.events_with_domain(dom):
            e = inst.events[eid]
            if e.violated_by(tuple(values[x] for x in e.vars), inst.event_vars(e)):
                hit = True
                break
        if not hit:
            return False
    return True


def traceback(trace, S, n: int) -> frozenset:
    """Reconstruct the pile witnessing S in A'_n of a recorded run."""
    S = tuple(sorted(S))
    if n >= len(trace.steps) or S not in set(trace.steps[n].violated):
        raise ValueError(f"domain {S} is not violated at step {n}")
    resampled = [set(r.resampled) for r in trace.steps]

    def t_at(m, x):
        return sum(1 for j in range(m) if x in resampled[j])

    layers = [frozenset([pile_element({x: t_at(n, x) for x in S})])]
    reach = set(S)
    for k in range(n):
        m = n - k - 1
        new = set()
        for dom in trace.steps[m].selected or ():
            if reach.intersection(dom):
                new.add(pile_element({x: t_at(m, x) for x in dom}))
        layers.append(frozenset(new))
        for elem in new:
            reach.update(elem_domain(elem))
    return frozenset().union(*layers)


# --- the pile <-> tree correspondence --------------------------------------
#
# Sequences of domains are compared lexicographically through Python tuple
# order, with domains ordered as sorted var-id tuples; every tree
# computation in the package uses this one order.


def pile_node_labels(pile) -> dict:
    """Element -> its lexicographically largest domain-path from the top."""
    report = validate_pile(pile)
    if not (report.is_pile and report.is_neat):
        raise ValueError(f"not a neat pile: {report.reason}")
    if len(report.top) != 1:
        raise ValueError("pile must have a unique top element")
    top = report.top[0]
    elems = sorted(pile)
    succ = {e: [o for o in elems if o != e and supports(e, o)] for e in elems}
    labels = {top: (elem_domain(top),)}

    def label(e):
        # two paths ending at the same element are never prefix-comparable
        # (the supports relation is acyclic), so appending preserves the
        # lex order within one parent; across parents compare the full
        # concatenations.
        if e not in labels:
            labels[e] = max(label(o) + (elem_domain(e),) for o in succ[e])
        return labels[e]

    for e in elems:
        label(e)
    return labels


def pile_to_tree(pile) -> frozenset:
    return frozenset(pile_node_labels(pile).values())


def tree_to_pile(tree) -> frozenset:
    nodes = sorted(tree)
    out = set()
    for w in nodes:
        tail = w[-1]
        elem = {}
        for x in tail:
            elem[x] = sum(1 for w2 in nodes if x in w2[-1] and w < w2)
        out.add(pile_element(elem))
    return frozenset(out)


def validate_tree(tree, root_domain=None) -> bool:
    nodes = set(tree)
    if not nodes:
        return False
    roots = [w for w in nodes if len(w) == 1]
    if len(roots) != 1:
        return False
    if root_domain is not None and roots[0][0] != tuple(sorted(root_domain)):
        return False
    for w in nodes:
        if len(w) == 0:
            return False
        for i in range(1, len(w)):
            if w[:i] not in nodes:
                return False
            if not set(w[i - 1]).intersection(w[i]):
                return False
    return True


def tree_weight(tree, inst: Instance) -> float:
    return math.prod(domain_probability(inst, w[-1]) for w in tree)


@dataclass
class TreeEnumeration:
    trees: list
    truncated: bool
    total_weight: float


def enumerate_trees(S, inst: Instance, max_height: int, max_nodes: int = 10 ** 5) -> TreeEnumeration:
    """All proper trees rooted at (S) within the caps, each exactly once.

    Trees of height <= h+1 correspond to one subtree-or-nothing choice per
    intersecting domain, which drives the recursion below.
    """
    S = tuple(sorted(S))
    domains = inst.domains()
    inter = {d: [d2 for d2 in domains if set(d).intersection(d2)] for d in domains}
    state = {"count": 0, "truncated": False}

    def gen(dom, height):
        # yields frozensets of node tuples for subtrees rooted at (dom,)
        root = (dom,)
        yield frozenset([root])
        if height <= 1:
            return
        opts = inter[dom]

        def combine(i):
            if i == len(opts):
                yield frozenset()
                return
            for rest in combine(i + 1):
                yield rest
                for sub in gen(opts[i], height - 1):
                    if len(sub) + len(rest) + 1 > max_nodes:
                        state["truncated"] = True
                        continue
                    shifted = frozenset(root + w for w in sub)
                    yield shifted | rest

        for chosen in combine(0):
            if chosen:
                yield frozenset([root]) | chosen

    trees = []
    total = 0.0
    for t in gen(S, max_height):
        if state["count"] >= max_nodes:
            state["truncated"] = True
            break
        trees.append(t)
        total += tree_weight(t, inst)
        state["count"] += 1
    return TreeEnumeration(trees, state["truncated"], total)


def enumerate_piles(inst: Instance, max_elements: int):
    """Exhaustive oracle: every pile with at most max_elements layers.

    Works from the definition: columns are forced to be 0..m_x-1 at each
    var x covered m_x times, so a pile is a domain multiset plus one value
    permutation per var.  Output includes non-neat piles; callers filter
    with validate_pile.
    """
    from itertools import combinations_with_replacement, permutations

    domains = inst.domains()
    piles = set()
    for size in range(1, max_elements + 1):
        for multiset in combinations_with_replacement(range(len(domains)), size):
            doms = [domains[i] for i in multiset]
            holders = {}
            for i, d in enumerate(doms):
                for x in d:
                    holders.setdefault(x, []).append(i)
            var_list = sorted(holders)

            def assign(vi, values):
                if vi == len(var_list):
                    elems = [dict() for _ in doms]
                    for x, per_elem in values.items():
                        for i, v in per_elem:
                            elems[i][x] = v
                    piles.add(make_pile(elems))
                    return
                x = var_list[vi]
                idxs = holders[x]
                for perm in permutations(range(len(idxs))):
                    values[x] = [(idxs[i], perm[i]) for i in range(len(idxs))]
                    assign(vi + 1, values)
                del values[x]

            assign(0, {})
    return sorted(piles)


# --- the per-domain resample bound ------------------------------------------


def tree_mass_by_height(inst: Instance, max_height: int) -> list:
    """W[h][domain] = total weight of proper trees of height <= h.

    Row h+1 comes from row h through the product recursion over
    intersecting domains; increments W[h+1] - W[h] are the exact mass of
    trees of height h+1 and upper-bound the matching pile layer.
    """
    domains = inst.domains()
    probs = {d: domain_probability(inst, d) for d in domains}
    by_var = {}
    for d in domains:
        for x in d:
            by_var.setdefault(x, []).append(d)
    inter = {d: sorted({d2 for x in d for d2 in by_var[x]}) for d in domains}
    rows = [{d: 0.0 for d in domains}]
    for _ in range(max_height):
        prev = rows[-1]
        rows.append({d: probs[d] * math.prod(1.0 + prev[d2] for d2 in inter[d])
                     for d in domains})
    return rows


@dataclass
class IndexBoundReport:
    domain: tuple
    n_tables: int
    mc_mean: float
    mc_se: float
    tree_weight_sum: float
    tree_height_cap: int
    rhs: float
    mc_within_bound: bool
    trees_within_bound: bool

    def to_dict(self):
        return {
            "domain": list(self.domain), "n_tables": self.n_tables,
            "mc_mean_index": self.mc_mean, "mc_se": self.mc_se,
            "tree_weight_sum": self.tree_weight_sum,
            "tree_height_cap": self.tree_height_cap,
            "rhs": self.rhs,
            "mc_within_bound": self.mc_within_bound,
            "trees_within_bound": self.trees_within_bound,
        }


def verify_index_bound(inst: Instance, omega: dict, S, n_tables: int,
                       max_height: int = 3, base_seed: int = 0,
                       max_steps: int = 10 ** 5) -> IndexBoundReport:
    """Monte-Carlo and enumerative checks of the resample bound for S."""
    from .certify import check_glll

    cert = check_glll(inst, omega)
    if not cert.valid:
        raise ValueError("omega does not certify the instance; bound undefined")
    S = tuple(sorted(S))
    rhs = sum(omega[eid] / (1.0 - omega[eid]) for eid in inst.events_with_domain(S))

    from . import backend

    prog = backend.compiled(inst)
    total, sq = 0.0, 0.0
    if prog.supported:
        dom_index = prog.domains.index(S)
        for i in range(n_tables):
            res = backend.fast_run(inst, base_seed + i, max_steps=max_steps)
            v = res.ind[dom_index]
            total += v
            sq += v * v
    else:
        from .engine import run

        for i in range(n_tables):
            trace = run(inst, SeededTable(inst, base_seed + i), max_steps=max_steps)
            v = trace.resamples_per_domain().get(S, 0)
            total += v
            sq += v * v
    mean = total / n_tables
    var = max(sq / n_tables - mean * mean, 0.0)
    se = math.sqrt(var / n_tables)

    # partial sum over trees of height <= max_height, via the recursion
    # (identical to summing the explicit enumeration, but scales)
    mass = tree_mass_by_height(inst, max_height)[max_height][S]
    return IndexBoundReport(
        domain=S, n_tables=n_tables, mc_mean=mean, mc_se=se,
        tree_weight_sum=mass, tree_height_cap=max_height,
        rhs=rhs,
        mc_within_bound=mean <= rhs + 3 * se,
        trees_within_bound=mass <= rhs + 1e-12,
    )


# --- serialization -----------------------------------------------------------


def pile_to_json(pile) -> list:
    return [{"vars": [x for x, _ in e], "values": [v for _, v in e]}
            for e in sorted(pile)]


def pile_from_json(doc) -> frozenset:
    return make_pile([dict(zip(e["vars"], e["values"])) for e in doc])


def tree_to_json(tree) -> list:
    return [[list(dom) for dom in w] for w in sorted(tree)]


def tree_from_json(doc) -> frozenset:
    return frozenset(tuple(tuple(dom) for dom in w) for w in doc)
