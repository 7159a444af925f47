import itertools
import math

import pytest

from lllab.entropy.coding import (CodingError, PlanRule, analytic_slack,
                                  decode, encode, multiset_arrangements,
                                  multiset_rank, multiset_unrank,
                                  tile_frequencies)
from lllab.entropy.estimate import sample_shift_windows, cyclic_config
from lllab.rng import stream_u64

RULE = PlanRule(tile_lengths=(4,), epsilon=0.1, s=1)


def random_word(m, seed, symbols=2):
    return [int(stream_u64(seed, 0, j) % symbols) for j in range(m)]


def test_header_length_identity():
    for m in list(range(1, 40)) + [64, 100, 1023, 1024, 1025]:
        word = [0] * m
        rule = PlanRule(tile_lengths=(2,), epsilon=0.9, s=1)
        if m < 3:
            continue
        blob = encode(m, word, rule)
        j = math.ceil(math.log2(m)) if m > 1 else 0
        assert blob.layout["c0c1"] == 2 * j + 1


def test_roundtrip_random_words():
    for seed in range(300):
        m = 8 + stream_u64(seed, 9, 0) % 120
        word = random_word(m, seed)
        blob = encode(m, word, RULE)
        m2, w2 = decode(blob.bits, RULE)
        assert m2 == m and list(w2) == word
        assert len(blob.bits) == sum(blob.layout[k]
                                     for k in ("c0c1", "c2", "c3", "c4"))


def test_roundtrip_wider_symbols():
    rule = PlanRule(tile_lengths=(3,), epsilon=0.2, s=2)
    for seed in range(60):
        m = 9 + stream_u64(seed, 5, 0) % 40
        word = random_word(m, seed, symbols=4)
        blob = encode(m, word, rule)
        assert decode(blob.bits, rule) == (m, tuple(word))


def test_constant_word_needs_no_arrangement_bits():
    blob = encode(64, [0] * 64, RULE)
    assert blob.layout["c4"] == 0
    assert blob.layout["c2"] == 0  # exact tiling, empty remainder
    m, w = decode(blob.bits, RULE)
    assert m == 64 and set(w) == {0}


def test_code_length_matches_enumerative_bound():
    for seed in range(40):
        word = random_word(64, seed)
        blob = encode(64, word, RULE)
        etas = tile_frequencies(word, RULE)
        expected_c4 = 0
        for eta in etas:
            count = multiset_arrangements(eta)
            expected_c4 += max(0, math.ceil(math.log2(count))) if count > 1 else 0
        assert blob.layout["c4"] == expected_c4


def test_rank_unrank_exhaustive():
    counts = {0: 2, 1: 1, 2: 1}
    seqs = sorted(set(itertools.permutations([0, 0, 1, 2])))
    total = multiset_arrangements(counts)
    assert total == len(seqs) == 12
    for seq in seqs:
        r = multiset_rank(list(seq), counts)
        assert 0 <= r < total
        assert multiset_unrank(r, counts) == list(seq)
    ranks = sorted(multiset_rank(list(s), counts) for s in seqs)
    assert ranks == list(range(total))


def test_validation_errors():
    with pytest.raises(CodingError):
        encode(10, [0] * 9, RULE)
    with pytest.raises(CodingError):
        encode(10, [2] * 10, RULE)  # symbol outside 2^1
    big = PlanRule(tile_lengths=(40,), epsilon=0.1, s=1)
    with pytest.raises(CodingError):
        encode(100, [0] * 100, big)  # frequency table budget


def test_tile_frequency_identity_for_shift_invariant_samples():
    """Sampled tile frequencies average to the block distribution."""
    M, m = 240, 48
    config = cyclic_config(M, seed=5)
    rule = PlanRule(tile_lengths=(4,), epsilon=0.1, s=1)
    plan = rule.plan(m)
    n_centers = len(plan.centers[0])
    n_samples = 4000
    words = sample_shift_windows(config, 0, m, n_samples, seed=8)
    u_target = 0b0101
    mean = sum(tile_frequencies(list(w), rule)[0].get(u_target, 0)
               for w in words) / (n_samples * n_centers)
    # block probability of 0101 within the cyclic configuration
    block = [(config[i], config[(i + 1) % M], config[(i + 2) % M],
              config[(i + 3) % M]) for i in range(M)]
    p_block = sum(b == (0, 1, 0, 1) for b in block) / M
    se = math.sqrt(p_block * (1 - p_block) / (n_samples * n_centers))
    assert abs(mean - p_block) <= 4 * se


def test_analytic_slack_accounts_for_every_fixed_segment():
    rule = PlanRule(tile_lengths=(4,), epsilon=0.05, s=1)
    m = 1024
    slack = analytic_slack(m, rule)
    blob = encode(m, [0] * m, rule)
    fixed = blob.layout["c0c1"] + blob.layout["c3"]
    assert slack >= rule.epsilon * rule.s + fixed / m
