"""The exact tiling code: header, remainder, frequency table, arrangement index.

code(m, w) = c0 c1 c2 c3 c4 for a word w of 2^s symbols on [0, m):

  c0  ceil(log2 m) ones, then a zero          (unary length header)
  c1  m itself, exactly ceil(log2 m) bits
  c2  w outside the tiled region, row-major, s bits per symbol
  c3  per tile class, the frequency of every possible tile word,
      fixed width ceil(log2(|C_i|+1)) bits per entry
  c4  per tile class, the index of the actual tile-word sequence among all
      arrangements of its multiset, exactly ceil(log2 #arrangements) bits

The tiling plan is recomputed from m by a deterministic rule, so decoding
needs only the blob and the rule.  c4 is enumerative (rank/unrank), which
meets the multinomial bound exactly rather than asymptotically.
"""

import math
from dataclasses import dataclass

from .folner import FolnerError, Interval
from .tiling import quasi_tile

FREQ_TABLE_BUDGET = 2 ** 20


class CodingError(ValueError):
    pass


@dataclass(frozen=True)
class PlanRule:
    """Deterministic map m -> tiling plan (plus the symbol width)."""

    tile_lengths: tuple
    epsilon: float
    s: int = 1

    def plan(self, m: int):
        usable = [L for L in self.tile_lengths if L < m]
        if not usable:
            return None
        return quasi_tile(Interval(0, m), [Interval(0, L) for L in usable],
                          self.epsilon)

    def check_budget(self, budget: int = FREQ_TABLE_BUDGET):
        worst = max(self.tile_lengths)
        if 2 ** (self.s * worst) > budget:
            raise CodingError(
                f"frequency table over 2^{self.s * worst} words exceeds the "
                f"budget; choose smaller s or shorter tiles")


@dataclass
class CodeBlob:
    bits: tuple
    layout: dict

    def __len__(self):
        return len(self.bits)


def _header_bits(m: int):
    # ceil(log2 m) ones, a zero, then m-1 in exactly that many bits
    # (m-1 < 2^j holds for every m in (2^(j-1), 2^j])
    j = max(0, math.ceil(math.log2(m))) if m > 1 else 0
    bits = [1] * j + [0]
    bits.extend(((m - 1) >> (j - 1 - b)) & 1 for b in range(j))
    return bits


def _read_header(bits, pos):
    j = 0
    while bits[pos + j] == 1:
        j += 1
    pos += j + 1
    if j == 0:
        return 1, pos
    value = 0
    for b in range(j):
        value = (value << 1) | bits[pos + b]
    return value + 1, pos + j


def _symbol_bits(value: int, s: int):
    return [(value >> (s - 1 - b)) & 1 for b in range(s)]


def _read_symbol(bits, pos, s):
    v = 0
    for b in range(s):
        v = (v << 1) | bits[pos + b]
    return v, pos + s


def _fixed_bits(value: int, width: int):
    return [(value >> (width - 1 - b)) & 1 for b in range(width)]


def _read_fixed(bits, pos, width):
    v = 0
    for b in range(width):
        v = (v << 1) | bits[pos + b]
    return v, pos + width


def multiset_arrangements(counts) -> int:
    total = sum(counts.values())
    out = math.factorial(total)
    for c in counts.values():
        out //= math.factorial(c)
    return out


def multiset_rank(seq, counts) -> int:
    """Index of seq among all arrangements of the multiset, symbol order."""
    remaining = dict(counts)
    total = multiset_arrangements(remaining)
    rem = len(seq)
    rank = 0
    for sym in seq:
        for u in sorted(remaining):
            if u == sym:
                break
            if remaining[u] > 0:
                rank += total * remaining[u] // rem
        total = total * remaining[sym] // rem
        remaining[sym] -= 1
        rem -= 1
    return rank


def multiset_unrank(rank: int, counts) -> list:
    remaining = {u: c for u, c in counts.items() if c > 0}
    rem = sum(remaining.values())
    total = multiset_arrangements(remaining)
    out = []
    while rem:
        for u in sorted(remaining):
            if remaining[u] == 0:
                continue
            here = total * remaining[u] // rem
            if rank < here:
                out.append(u)
                total = here
                remaining[u] -= 1
                rem -= 1
                break
            rank -= here
        else:
            raise CodingError("rank outside the arrangement range")
    return out


def encode(m: int, word, rule: PlanRule) -> CodeBlob:
    """Encode a word of 2^s symbols on [0, m); bit-exact inverse of decode."""
    s = rule.s
    if len(word) != m:
        raise CodingError(f"word length {len(word)} != m = {m}")
    if any(not (0 <= v < 2 ** s) for v in word):
        raise CodingError("symbol outside 2^s")
    rule.check_budget()
    plan = rule.plan(m)
    if plan is None:
        raise FolnerError(f"no tile shorter than m = {m}")

    bits = _header_bits(m)
    header_len = len(bits)

    rest = plan.uncovered_points()
    for p in rest:
        bits.extend(_symbol_bits(word[p], s))
    c2_len = s * len(rest)

    k = len(plan.tiles)
    tile_words = []
    freqs = []
    c3_len = 0
    for i in range(k):
        L = len(plan.tiles[i])
        centers = sorted(plan.centers[i])
        words_i = []
        for c in centers:
            lo = plan.tiles[i].lo + c
            sym = 0
            for off in range(L):
                sym = (sym << s) | word[lo + off]
            words_i.append(sym)
        tile_words.append(words_i)
        eta = {}
        for u in words_i:
            eta[u] = eta.get(u, 0) + 1
        freqs.append(eta)
        width = math.ceil(math.log2(len(centers) + 1)) if centers else 0
        for u in range(2 ** (s * L)):
            bits.extend(_fixed_bits(eta.get(u, 0), width))
            c3_len += width

    c4_len = 0
    for i in range(k):
        if not tile_words[i]:
            continue
        count = multiset_arrangements(freqs[i])
        width = max(0, math.ceil(math.log2(count))) if count > 1 else 0
        rank = multiset_rank(tile_words[i], freqs[i])
        bits.extend(_fixed_bits(rank, width))
        c4_len += width

    layout = {"m": m, "c0c1": header_len, "c2": c2_len, "c3": c3_len,
              "c4": c4_len, "tile_counts": [len(c) for c in plan.centers]}
    return CodeBlob(tuple(bits), layout)


def decode(bits, rule: PlanRule):
    """Recover (m, word) from an encoded bit sequence."""
    s = rule.s
    m, pos = _read_header(bits, 0)
    plan = rule.plan(m)
    if plan is None:
        raise CodingError("no plan exists for the decoded m")

    word = [None] * m
    for p in plan.uncovered_points():
        word[p], pos = _read_symbol(bits, pos, s)

    k = len(plan.tiles)
    freqs = []
    for i in range(k):
        L = len(plan.tiles[i])
        n_centers = len(plan.centers[i])
        width = math.ceil(math.log2(n_centers + 1)) if n_centers else 0
        eta = {}
        for u in range(2 ** (s * L)):
            count, pos = _read_fixed(bits, pos, width)
            if count:
                eta[u] = count
        freqs.append(eta)

    for i in range(k):
        centers = sorted(plan.centers[i])
        if not centers:
            continue
        count = multiset_arrangements(freqs[i])
        width = max(0, math.ceil(math.log2(count))) if count > 1 else 0
        rank, pos = _read_fixed(bits, pos, width)
        words_i = multiset_unrank(rank, freqs[i])
        L = len(plan.tiles[i])
        for c, sym in zip(centers, words_i):
            lo = plan.tiles[i].lo + c
            for off in range(L - 1, -1, -1):
                word[lo + off] = sym & ((1 << s) - 1)
                sym >>= s
    if any(v is None for v in word):
        raise CodingError("decoded word has holes; plan mismatch")
    return m, tuple(word)


def tile_frequencies(word, rule: PlanRule):
    """Per tile class, the count of each tile word read off the plan."""
    m = len(word)
    plan = rule.plan(m)
    s = rule.s
    out = []
    for i in range(len(plan.tiles)):
        L = len(plan.tiles[i])
        eta = {}
        for c in sorted(plan.centers[i]):
            lo = plan.tiles[i].lo + c
            sym = 0
            for off in range(L):
                sym = (sym << s) | word[lo + off]
            eta[sym] = eta.get(sym, 0) + 1
        out.append(eta)
    return out


def analytic_slack(m: int, rule: PlanRule) -> float:
    """Per-symbol overhead: epsilon*s plus all m-determined segment costs.

    mean(len(code)/m) <= tile-level empirical entropy + this slack for any
    sampled process, since c4 is bounded by the multinomial.
    """
    plan = rule.plan(m)
    if plan is None:
        raise FolnerError(f"no tile shorter than m = {m}")
    s = rule.s
    header = 2 * (math.ceil(math.log2(m)) if m > 1 else 0) + 1
    c3 = 0
    rounding = 0
    for i in range(len(plan.tiles)):
        n_centers = len(plan.centers[i])
        width = math.ceil(math.log2(n_centers + 1)) if n_centers else 0
        c3 += width * 2 ** (s * len(plan.tiles[i]))
        if n_centers:
            rounding += 1
    return rule.epsilon * s + (header + c3 + rounding) / m
