"""Simple graphs: containers, generators, and BFS utilities."""

import json

from .rng import stream_u64


class GraphError(ValueError):
    pass


class SimpleGraph:
    def __init__(self, n: int, edges):
        self.n = n
        self.adj = [set() for _ in range(n)]
        self.edges = []
        seen = set()
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) outside vertex range")
            key = (min(u, v), max(u, v))
            if key in seen:
                continue
            seen.add(key)
            self.adj[u].add(v)
            self.adj[v].add(u)
            self.edges.append(key)
        self.edges.sort()
        self.adj = [tuple(sorted(s)) for s in self.adj]

    def degree(self, v) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def is_regular(self, d=None):
        degs = {len(a) for a in self.adj}
        if d is None:
            return len(degs) <= 1
        return degs == {d} or (not degs and d == 0)

    def has_triangle(self) -> bool:
        for u, v in self.edges:
            if set(self.adj[u]).intersection(self.adj[v]):
                return True
        return False

    def girth(self):
        """Length of the shortest cycle via per-vertex BFS; None if acyclic."""
        best = None
        for s in range(self.n):
            dist = {s: 0}
            parent = {s: -1}
            frontier = [s]
            while frontier:
                nxt = []
                for u in frontier:
                    for w in self.adj[u]:
                        if w not in dist:
                            dist[w] = dist[u] + 1
                            parent[w] = u
                            nxt.append(w)
                        elif parent[u] != w and parent[w] != u:
                            cycle = dist[u] + dist[w] + 1
                            if best is None or cycle < best:
                                best = cycle
                frontier = nxt
                if best is not None and frontier and 2 * dist[frontier[0]] >= best:
                    break
        return best

    def to_dict(self):
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_dict(cls, doc):
        return cls(doc["n"], [tuple(e) for e in doc["edges"]])

    def dump(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def path_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def random_regular_bipartite(n_half: int, d: int, seed: int) -> SimpleGraph:
    """d-regular bipartite graph on 2*n_half vertices: d disjoint matchings.

    Bipartite, hence triangle-free; exactly the setting the good-coloring
    pipeline asks for.
    """
    if d > n_half:
        raise GraphError("degree cannot exceed one side's size")
    perms = []
    for i in range(d):
        perm = list(range(n_half))
        for a in range(n_half - 1, 0, -1):
            b = stream_u64(seed, i, a) % (a + 1)
            perm[a], perm[b] = perm[b], perm[a]
        tweak = 0
        while True:
            conflicts = [u for u in range(n_half)
                         if any(p[u] == perm[u] for p in perms)]
            if not conflicts:
                break
            for u in conflicts:
                v = stream_u64(seed, i + d, tweak) % n_half
                tweak += 1
                perm[u], perm[v] = perm[v], perm[u]
        perms.append(perm)
    edges = [(u, n_half + perm[u]) for perm in perms for u in range(n_half)]
    return SimpleGraph(2 * n_half, edges)


def random_graph_max_degree(n: int, max_deg: int, m: int, seed: int) -> SimpleGraph:
    """m random edges subject to a degree cap; deterministic for a seed."""
    edges, present = [], set()
    deg = [0] * n
    attempt = 0
    while len(edges) < m and attempt < 100 * m + 1000:
        u = stream_u64(seed, 0, attempt) % n
        v = stream_u64(seed, 1, attempt) % n
        attempt += 1
        if u == v:
            continue
        key = (min(u, v), max(u, v))
        if key in present or deg[u] >= max_deg or deg[v] >= max_deg:
            continue
        present.add(key)
        edges.append(key)
        deg[u] += 1
        deg[v] += 1
    return SimpleGraph(n, edges)
