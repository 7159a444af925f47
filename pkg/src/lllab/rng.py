"""Counter-based deterministic random streams.

Every random value the engine consumes is a pure function of
(seed, key, index), so lazily materialized tables are reproducible and
independent of evaluation order.  The compiled kernel implements the same
arithmetic on C uint64; both sides must stay bit-identical.
"""

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """SplitMix64 finalizer; bijective on 64-bit words."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def stream_u64(seed: int, key: int, index: int) -> int:
    """The index-th 64-bit word of the (seed, key) stream."""
    base = mix64((seed & MASK64) ^ mix64(((key + 1) * GOLDEN) & MASK64))
    return mix64((base + ((index + 1) * GOLDEN)) & MASK64)


def stream_unit(seed: int, key: int, index: int) -> float:
    """Uniform float64 in [0, 1); exact power-of-two scaling."""
    return (stream_u64(seed, key, index) >> 11) * 2.0 ** -53


def shuffle_in_place(items: list, seed: int, key: int) -> None:
    """Fisher-Yates driven by the (seed, key) stream."""
    for i in range(len(items) - 1, 0, -1):
        j = stream_u64(seed, key, i) % (i + 1)
        items[i], items[j] = items[j], items[i]
