"""Plug-in entropy estimates and seeded process samplers."""

import math
from dataclasses import dataclass

from ..rng import stream_unit


@dataclass
class EntropyEstimate:
    bits_per_symbol: float
    window: int
    n_samples: int
    distinct_words: int
    note: str = ("plug-in estimate over the empirical block distribution; "
                 "biased low by up to (K-1)/(2 N ln 2) bits per block")

    def to_dict(self):
        return {"bits_per_symbol": self.bits_per_symbol, "window": self.window,
                "n_samples": self.n_samples, "distinct_words": self.distinct_words,
                "note": self.note}


def empirical_entropy(samples) -> EntropyEstimate:
    """Shannon entropy of the sample's block distribution, per symbol."""
    samples = [tuple(s) for s in samples]
    if not samples:
        raise ValueError("need at least one sample")
    window = len(samples[0])
    if any(len(s) != window for s in samples):
        raise ValueError("all samples must share one window length")
    freq = {}
    for s in samples:
        freq[s] = freq.get(s, 0) + 1
    n = len(samples)
    h = -sum((c / n) * math.log2(c / n) for c in freq.values())
    return EntropyEstimate(h / window, window, n, len(freq))


def sample_iid(n_samples: int, window: int, seed: int, symbols: int = 2):
    """Independent uniform symbols, one window per sample."""
    return [tuple(int(stream_unit(seed, i, j) * symbols)
                  for j in range(window))
            for i in range(n_samples)]


def sample_bernoulli(p: float, n_samples: int, window: int, seed: int):
    return [tuple(1 if stream_unit(seed, i, j) < p else 0
                  for j in range(window))
            for i in range(n_samples)]


def binary_entropy(p: float) -> float:
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def cyclic_config(M: int, seed: int, symbols: int = 2):
    """A fixed configuration on Z_M, used for shift-invariant sampling."""
    return tuple(int(stream_unit(seed, 99, j) * symbols) for j in range(M))


def sample_shift_windows(config, window_lo: int, window_hi: int,
                         n_samples: int, seed: int):
    """Windows of a uniformly rotated cyclic configuration.

    The rotation makes the sampled process shift-invariant, which is what
    the tile-frequency identity needs.
    """
    M = len(config)
    out = []
    for i in range(n_samples):
        x = int(stream_unit(seed, i, 0) * M)
        out.append(tuple(config[(x + g) % M] for g in range(window_lo, window_hi)))
    return out
