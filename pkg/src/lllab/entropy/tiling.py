"""Greedy quasi-tilings of intervals by smaller intervals.

A plan places translates of each tile inside the target so that translate
families are epsilon-disjoint (here: exactly disjoint), tile unions are
pairwise disjoint, and the union covers at least a (1-epsilon) fraction of
the target.  For intervals the greedy sweep, largest tile first, achieves
the definition whenever it is achievable at all.
"""

from dataclasses import dataclass

from .folner import FolnerError, Interval


@dataclass
class TilingPlan:
    target: Interval
    tiles: list  # Interval, ascending length
    centers: list  # list of center lists, aligned with tiles
    epsilon: float
    feasible: bool
    cover_fraction: float

    def translates(self, i):
        return [self.tiles[i].shift(c) for c in self.centers[i]]

    def covered_points(self):
        out = set()
        for i in range(len(self.tiles)):
            for tr in self.translates(i):
                out.update(tr.points())
        return out

    def uncovered_points(self):
        return sorted(set(self.target.points()) - self.covered_points())

    def check(self):
        """All three quasi-tiling requirements, from the definitions."""
        seen = set()
        for i in range(len(self.tiles)):
            for tr in self.translates(i):
                assert tr.inside(self.target), "translate escapes the target"
                pts = set(tr.points())
                assert not pts & seen, "translates overlap"
                seen.update(pts)
        # disjoint translates are epsilon-disjoint for every epsilon >= 0
        assert len(seen) >= (1.0 - self.epsilon) * len(self.target) - 1e-9, \
            "cover fraction below 1 - epsilon"
        return True

    def to_dict(self):
        return {
            "target": [self.target.lo, self.target.hi],
            "tiles": [[t.lo, t.hi] for t in self.tiles],
            "centers": [list(c) for c in self.centers],
            "epsilon": self.epsilon,
            "feasible": self.feasible,
            "cover_fraction": self.cover_fraction,
        }


def quasi_tile(target: Interval, tiles, epsilon: float) -> TilingPlan:
    """Deterministic greedy sweep: largest tile first, leftmost placement.

    Tiles must be strictly shorter than the target and strictly increasing
    in length; infeasibility (cover below 1 - epsilon) is reported on the
    plan, not raised.
    """
    tiles = list(tiles)
    if not tiles:
        raise FolnerError("need at least one tile")
    lengths = [len(t) for t in tiles]
    if any(b <= a for a, b in zip(lengths, lengths[1:])):
        raise FolnerError("tile lengths must strictly increase")
    if lengths[-1] >= len(target):
        raise FolnerError("tiles must be shorter than the target")
    if not (0.0 <= epsilon < 1.0):
        raise FolnerError("epsilon must lie in [0, 1)")

    free = [True] * len(target)
    centers = [[] for _ in tiles]
    for i in range(len(tiles) - 1, -1, -1):
        tile = tiles[i]
        L = len(tile)
        pos = 0
        while pos + L <= len(target):
            if all(free[pos:pos + L]):
                # translate tile by c so it lands at target.lo + pos
                centers[i].append(target.lo + pos - tile.lo)
                for j in range(pos, pos + L):
                    free[j] = False
                pos += L
            else:
                pos += 1
    covered = free.count(False)
    fraction = covered / len(target)
    feasible = fraction >= 1.0 - epsilon
    return TilingPlan(target, tiles, centers, epsilon, feasible, fraction)
