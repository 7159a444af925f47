"""Folner intervals over the integers.

The group is fixed to Z with generator 1; the window sequence is a strictly
increasing chain of symmetric intervals [-a_n, a_n].  Intervals are
Cayley-connected by construction, and the radius schedule must grow at
least linearly so the size/log ratio diverges on any materialized prefix.
"""

from dataclasses import dataclass


class FolnerError(ValueError):
    pass


@dataclass(frozen=True)
class Interval:
    lo: int  # inclusive
    hi: int  # exclusive

    def __post_init__(self):
        if self.hi <= self.lo:
            raise FolnerError(f"empty interval [{self.lo}, {self.hi})")

    def __len__(self):
        return self.hi - self.lo

    def __contains__(self, x):
        return self.lo <= x < self.hi

    def points(self):
        return range(self.lo, self.hi)

    def shift(self, c):
        return Interval(self.lo + c, self.hi + c)

    def inside(self, other):
        return other.lo <= self.lo and self.hi <= other.hi


class FolnerSeq:
    """Symmetric intervals PHI_n = [-a_n, a_n] with a strictly increasing
    radius schedule."""

    def __init__(self, radii):
        self.radii = list(radii)
        if not self.radii:
            raise FolnerError("need at least one window")
        if any(r < 0 for r in self.radii):
            raise FolnerError("radii must be nonnegative")
        for a, b in zip(self.radii, self.radii[1:]):
            if b <= a:
                raise FolnerError("radius schedule must strictly increase")

    @classmethod
    def linear(cls, count: int, step: int = 1):
        return cls([step * n for n in range(count)])

    def __len__(self):
        return len(self.radii)

    def window(self, n: int) -> Interval:
        a = self.radii[n]
        return Interval(-a, a + 1)

    def sizes(self):
        return [2 * a + 1 for a in self.radii]

    def growth_ratios(self):
        """|PHI_n| / log2(n) for n >= 2; diverges for any valid schedule."""
        import math

        return [(2 * self.radii[n] + 1) / math.log2(n)
                for n in range(2, len(self.radii))]

    def check(self):
        assert 0 in self.window(0)
        for n in range(len(self.radii) - 1):
            a, b = self.window(n), self.window(n + 1)
            assert a.inside(b) and len(a) < len(b)
        # linear-in-n sizes dominate log2(n) on any prefix
        for n in range(2, len(self.radii)):
            assert 2 * self.radii[n] + 1 >= n + 1
        return True
