import math

import pytest

from lllab.certify import (check_eps_correct, check_glll, check_slll,
                           suggest_omega)
from lllab.instance import Instance, Variable, explicit_event, predicate_event
from lllab.rng import stream_u64


def star_hypergraph(k, d):
    """d+1 monochromatic k-events sharing one variable: every degree is d."""
    n = 1 + (d + 1) * (k - 1)
    variables = [Variable(i, 2) for i in range(n)]
    events = []
    for j in range(d + 1):
        base = 1 + j * (k - 1)
        events.append(predicate_event(j, (0,) + tuple(range(base, base + k - 1)),
                                      "monochromatic"))
    return Instance(variables, events)


def isolated_event(p_num, p_den, domain=1):
    q = p_den
    variables = [Variable(i, q) for i in range(domain)]
    forbidden = [tuple((code // q ** i) % q for i in range(domain))
                 for code in range(p_num * q ** (domain - 1))]
    return Instance(variables, [explicit_event(0, tuple(range(domain)), forbidden)])


def test_slll_examples():
    cert = check_slll(star_hypergraph(5, 2))
    assert cert.valid and cert.margin == pytest.approx(1 - math.e * 0.0625 * 3)
    cert = check_slll(star_hypergraph(4, 2))
    assert not cert.valid
    empty = Instance([Variable(0, 2)], [])
    cert = check_slll(empty)
    assert cert.valid and cert.margin == 1.0


def test_slll_flips_exactly_at_the_symmetric_threshold():
    for k in range(3, 9):
        for d in range(0, 2 ** (k - 1) // 2 + 4):
            valid = check_slll(star_hypergraph(k, d)).valid
            assert valid == (math.e * (d + 1) < 2 ** (k - 1))


def test_glll_examples():
    inst = star_hypergraph(5, 2)  # p = 1/16 <= 4/27
    omega = {e.id: 1 / 3 for e in inst.events}
    cert = check_glll(inst, omega)
    assert cert.valid
    assert min(cert.per_event_margin.values()) == pytest.approx(
        (1 / 3) * (2 / 3) ** 2 - 0.0625)

    iso = isolated_event(1, 2)  # p = 0.5
    assert check_glll(iso, {0: 0.51}).valid
    assert not check_glll(iso, {0: 0.0}).valid
    with pytest.raises(KeyError):
        check_glll(iso, {})
    with pytest.raises(ValueError):
        check_glll(iso, {0: 1.0})


def test_slll_valid_implies_glll_with_uniform_degree_weights():
    for k, d in [(4, 1), (5, 2), (6, 4), (7, 8), (6, 10)]:
        inst = star_hypergraph(k, d)
        if check_slll(inst).valid and d >= 1:
            omega = {e.id: 1.0 / (d + 1) for e in inst.events}
            assert check_glll(inst, omega).valid, (k, d)


def test_eps_reduces_to_glll_at_one():
    for trial in range(10):
        k = 3 + trial % 3
        d = int(stream_u64(trial, 0, 0) % 6)
        inst = star_hypergraph(k, d)
        omega = {e.id: 0.05 + (stream_u64(trial, 1, e.id) % 80) / 100
                 for e in inst.events}
        a = check_glll(inst, omega)
        b = check_eps_correct(inst, 1.0, omega)
        assert a.valid == b.valid
        assert a.margin == pytest.approx(b.margin, abs=1e-15)


def test_eps_monotone_in_epsilon():
    for trial in range(10):
        inst = star_hypergraph(4 + trial % 3, 1 + trial % 4)
        omega = {e.id: 0.1 + (stream_u64(trial, 2, e.id) % 60) / 100
                 for e in inst.events}
        lo = check_eps_correct(inst, 0.5, omega)
        hi = check_eps_correct(inst, 0.9, omega)
        if lo.valid:
            assert hi.valid


def test_eps_isolated_example():
    inst = isolated_event(1, 100, domain=1)
    # one variable with 100 values, forbidden set of measure 0.01 on a
    # 3-variable domain: build directly instead
    variables = [Variable(i, 10) for i in range(3)]
    forbidden = [(a, b, 0) for a in range(10) for b in range(1)]  # 10 of 1000
    inst = Instance(variables, [explicit_event(0, (0, 1, 2), forbidden)])
    cert = check_eps_correct(inst, 0.3, {0: 0.5})
    assert cert.valid
    assert cert.margin == pytest.approx(0.3 ** 3 * 0.5 - 0.01)


def test_suggest_omega_validates_or_names_the_blocker():
    inst = star_hypergraph(6, 10)
    sug = suggest_omega(inst)
    assert sug.ok
    assert check_glll(inst, sug.omega).valid

    iso = isolated_event(1, 2)
    sug = suggest_omega(iso)
    assert sug.ok and 0.5 < sug.omega[0] < 1

    certain = Instance([Variable(0, 2)],
                       [explicit_event(0, (0,), [(0,), (1,)])])  # p = 1
    sug = suggest_omega(certain)
    assert not sug.ok and sug.failed_event == 0
