"""Pure-Python fast run over compiled arrays.

This is the fallback selected when the compiled kernel is unavailable.
It must mirror lllab._mtkernel operation for operation: same stream, same
inverse CDF, same selection sweep, same recheck order, so that results are
bit-identical across backends.
"""

from .rng import stream_u64

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

STATUS_STABILIZED = 0
STATUS_STEP_LIMIT = 1

K_EXPLICIT = 0
K_ALL_EQUAL = 1
K_REPEAT_HALVES = 2
K_TWO_COLORED = 3
K_GOODNESS = 4


def _mix64(z):
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def _draw(cumw, lo, hi, u):
    j = lo
    while j < hi and u >= cumw[j]:
        j += 1
    if j == hi:
        j = hi - 1
    return j - lo


def _violated(ei, f, L):
    ev_vars, ev_off = L["ev_vars"], L["ev_off"]
    kind = L["ev_kind"][ei]
    lo, hi = ev_off[ei], ev_off[ei + 1]
    if kind == K_ALL_EQUAL:
        first = f[ev_vars[lo]]
        for j in range(lo + 1, hi):
            if f[ev_vars[j]] != first:
                return False
        return True
    if kind == K_EXPLICIT:
        strides = L["ev_strides"]
        code = 0
        for j in range(lo, hi):
            code += f[ev_vars[j]] * strides[j]
        aux, alo = L["ev_aux"], L["aux_off"][ei]
        cnt = aux[alo]
        a, b = alo + 1, alo + 1 + cnt
        while a < b:
            mid = (a + b) // 2
            if aux[mid] < code:
                a = mid + 1
            else:
                b = mid
        return a < alo + 1 + cnt and aux[a] == code
    if kind == K_REPEAT_HALVES:
        h = (hi - lo) // 2
        for j in range(h):
            if f[ev_vars[lo + j]] != f[ev_vars[lo + h + j]]:
                return False
        return True
    if kind == K_TWO_COLORED:
        c1 = f[ev_vars[lo]]
        c2 = -1
        for j in range(lo + 1, hi):
            v = f[ev_vars[j]]
            if v != c1:
                if c2 == -1:
                    c2 = v
                elif v != c2:
                    return False
        return True
    # K_GOODNESS
    aux, alo = L["ev_aux"], L["aux_off"][ei]
    min_repeats, deg = aux[alo], aux[alo + 1]
    center = f[ev_vars[lo]]
    uncolored = False
    for j in range(1, deg + 1):
        if f[ev_vars[lo + j]] == center:
            uncolored = True
            break
    if not uncolored:
        return False
    counts = {}
    p = alo + 2
    for j in range(1, deg + 1):
        cnt = aux[p]
        p += 1
        cj = f[ev_vars[lo + j]]
        keeps = True
        for z in range(p, p + cnt):
            if f[ev_vars[lo + aux[z]]] == cj:
                keeps = False
                break
        p += cnt
        if keeps:
            counts[cj] = counts.get(cj, 0) + 1
    repeated = sum(1 for c in counts.values() if c >= 2)
    return repeated < min_repeats


def fast_run(prog, key_map, seed, rule, rule_seed, max_steps, exact_rounds):
    L = prog.as_lists()
    cumw, cumw_off = L["cumw"], L["cumw_off"]
    ev_off = L["ev_off"]
    vev, vev_off = L["vev"], L["vev_off"]
    dom_of_event = L["dom_of_event"]
    dom_vars, dom_off = L["dom_vars"], L["dom_off"]
    dom_order = L["dom_order"]
    n_vars, n_events, n_domains = prog.n_vars, prog.n_events, prog.n_domains
    seed &= MASK64
    rule_seed &= MASK64
    random_rule = rule == "random"

    base = [_mix64(seed ^ _mix64(((key_map[x] + 1) * GOLDEN) & MASK64))
            for x in range(n_vars)]

    def draw_value(x, n):
        u = (_mix64((base[x] + ((n + 1) * GOLDEN)) & MASK64) >> 11) * 2.0 ** -53
        return _draw(cumw, cumw_off[x], cumw_off[x + 1], u)

    f = [draw_value(x, 0) for x in range(n_vars)]
    t = [0] * n_vars
    ind = [0] * n_domains

    ev_state = [False] * n_events
    dom_vcount = [0] * n_domains
    total = 0
    for ei in range(n_events):
        if _violated(ei, f, L):
            ev_state[ei] = True
            dom_vcount[dom_of_event[ei]] += 1
            total += 1

    var_mark = [-1] * n_vars
    ev_stamp = [-1] * n_events
    budget = exact_rounds if exact_rounds >= 0 else max_steps
    rounds = 0
    while True:
        if total == 0:
            return f, t, ind, rounds, STATUS_STABILIZED
        if rounds >= budget:
            return f, t, ind, rounds, STATUS_STEP_LIMIT
        candidates = [d for d in dom_order if dom_vcount[d] > 0]
        if random_rule:
            for i in range(len(candidates) - 1, 0, -1):
                j = stream_u64(rule_seed, rounds, i) % (i + 1)
                candidates[i], candidates[j] = candidates[j], candidates[i]
        selected = []
        for d in candidates:
            ok = True
            for p in range(dom_off[d], dom_off[d + 1]):
                if var_mark[dom_vars[p]] == rounds:
                    ok = False
                    break
            if ok:
                selected.append(d)
                for p in range(dom_off[d], dom_off[d + 1]):
                    var_mark[dom_vars[p]] = rounds
        for d in selected:
            ind[d] += 1
            for p in range(dom_off[d], dom_off[d + 1]):
                x = dom_vars[p]
                t[x] += 1
                f[x] = draw_value(x, t[x])
        for d in selected:
            for p in range(dom_off[d], dom_off[d + 1]):
                x = dom_vars[p]
                for q in range(vev_off[x], vev_off[x + 1]):
                    ei = vev[q]
                    if ev_stamp[ei] == rounds:
                        continue
                    ev_stamp[ei] = rounds
                    now = _violated(ei, f, L)
                    if now != ev_state[ei]:
                        ev_state[ei] = now
                        delta = 1 if now else -1
                        dom_vcount[dom_of_event[ei]] += delta
                        total += delta
        rounds += 1
