"""Tables: the per-variable fallback streams consumed by the resampler.

A table assigns each (variable, resample count) pair a value in the
variable's domain.  Seeded tables derive values by inverse CDF from a
counter-based uniform stream, so materialization order is irrelevant.
Lifted tables share one stream per color class; two variables with the
same color read identical uniforms forever.
"""

import json
from bisect import bisect_right

from .instance import Instance
from .rng import stream_unit


class TableError(ValueError):
    pass


def _invcdf(cumw, u: float) -> int:
    j = bisect_right(cumw, u)
    return min(j, len(cumw) - 1)


class SeededTable:
    """Reproducible table: same seed, same value at every (x, n)."""

    kind = "seeded"

    def __init__(self, inst: Instance, seed: int):
        self.inst = inst
        self.seed = int(seed)
        self._cumw = [v.cum_weights() for v in inst.variables]

    def key_of(self, x: int) -> int:
        return x

    def unit(self, x: int, n: int) -> float:
        return stream_unit(self.seed, x, n)

    def value(self, x: int, n: int) -> int:
        return _invcdf(self._cumw[x], self.unit(x, n))


class LiftedTable:
    """Reads the color-class stream: unit(x, n) == base stream at (c(x), n)."""

    kind = "lifted"

    def __init__(self, inst: Instance, seed: int, coloring):
        self.inst = inst
        self.seed = int(seed)
        self.coloring = list(coloring)
        if len(self.coloring) != inst.n_vars():
            raise TableError("coloring must assign every variable a color")
        self._cumw = [v.cum_weights() for v in inst.variables]

    def key_of(self, x: int) -> int:
        return self.coloring[x]

    def unit(self, x: int, n: int) -> float:
        return stream_unit(self.seed, self.coloring[x], n)

    def value(self, x: int, n: int) -> int:
        return _invcdf(self._cumw[x], self.unit(x, n))


class ExplicitTable:
    """Hand-written columns for replaying small examples."""

    kind = "explicit"

    def __init__(self, inst: Instance, entries):
        self.inst = inst
        self.entries = {}
        for (x, n), value in dict(entries).items():
            if not (0 <= value < inst.variables[x].domain_size):
                raise TableError(f"value {value} outside domain of variable {x}")
            self.entries[(x, n)] = value

    def value(self, x: int, n: int) -> int:
        try:
            return self.entries[(x, n)]
        except KeyError:
            raise TableError(f"explicit table has no entry for variable {x}, row {n}")

    @classmethod
    def from_json(cls, inst: Instance, path) -> "ExplicitTable":
        with open(path) as fh:
            doc = json.load(fh)
        return cls(inst, {(e[0], e[1]): e[2] for e in doc["entries"]})


def load_table(inst: Instance, doc: dict):
    if doc["type"] == "seeded":
        return SeededTable(inst, doc["seed"])
    if doc["type"] == "explicit":
        return ExplicitTable(inst, {(e[0], e[1]): e[2] for e in doc["entries"]})
    raise TableError(f"unknown table type {doc['type']!r}")
