"""Computable description-length surrogates and the counting bound.

True shortest-description length is uncomputable; everything here is an
explicit upper bound (a tiling-code length or a general-purpose
compressor), and outputs are labeled as such.  The counting bound is the
exhaustive statement: programs of length at most n-c can name fewer than
2^(n-c+1) words, so the fraction of length-n words with description
length <= n-c is below 2^(-c+1).
"""

import zlib
from dataclasses import dataclass

from .coding import PlanRule, encode

SURROGATE_NOTE = ("description lengths are explicit upper bounds from a fixed "
                  "computable coder, not the uncomputable optimum")


# --- toy decompressors -------------------------------------------------------


def _identity(program):
    return tuple(program)


def _run_length(program):
    """Blocks of (value bit, 3-bit repeat count); None when bits run out."""
    out = []
    pos = 0
    n = len(program)
    while pos < n:
        if pos + 4 > n:
            return None
        b = program[pos]
        k = (program[pos + 1] << 2) | (program[pos + 2] << 1) | program[pos + 3]
        out.extend([b] * (k + 1))
        pos += 4
    return tuple(out)


DECOMPRESSORS = {"identity": _identity, "run-length": _run_length}


def _all_programs(max_len: int):
    for L in range(max_len + 1):
        for code in range(2 ** L):
            yield tuple((code >> (L - 1 - b)) & 1 for b in range(L))


@dataclass
class CountingReport:
    decompressor: str
    n: int
    c: int
    count: int
    fraction: float
    bound: float
    holds: bool

    def to_dict(self):
        return {"decompressor": self.decompressor, "n": self.n, "c": self.c,
                "count": self.count, "fraction": self.fraction,
                "bound": self.bound, "holds": self.holds,
                "note": SURROGATE_NOTE}


def counting_bound(decompressor: str, n: int, c: int) -> CountingReport:
    """Exhaustively count length-n outputs of programs of length <= n-c."""
    if n - c < 0:
        raise ValueError("need c <= n")
    if n > 20:
        raise ValueError("exhaustive enumeration is capped at n = 20")
    D = DECOMPRESSORS[decompressor]
    outputs = set()
    for program in _all_programs(n - c):
        out = D(program)
        if out is not None and len(out) == n:
            outputs.add(out)
    count = len(outputs)
    fraction = count / 2 ** n
    bound = 2.0 ** (-c + 1)
    return CountingReport(decompressor, n, c, count, fraction, bound,
                          fraction < bound)


# --- description-length surrogates -------------------------------------------

_CODE_RULE = PlanRule(tile_lengths=(2,), epsilon=0.5, s=1)


def _code_length(bits) -> int:
    m = len(bits)
    if m < 2:
        return (2 * max(0, m - 1) + 1) + m  # header plus raw payload
    return len(encode(m, list(bits), _CODE_RULE).bits)


def _zlib_length(bits) -> int:
    packed = bytearray()
    for i in range(0, len(bits), 8):
        byte = 0
        for b in bits[i:i + 8]:
            byte = (byte << 1) | b
        packed.append(byte)
    return 8 * len(zlib.compress(bytes(packed), 9))


SURROGATES = {"code-length": _code_length, "zlib": _zlib_length}


def surrogate_bits(name: str, bits) -> int:
    try:
        fn = SURROGATES[name]
    except KeyError:
        raise KeyError(f"unknown surrogate {name!r}; have {sorted(SURROGATES)}")
    return fn(tuple(bits))
