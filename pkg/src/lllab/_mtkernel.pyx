# cython: language_level=3
"""Compiled resampling loop.

Operation-for-operation mirror of lllab._mtloop; the pure loop is the
reference semantics and the cross-backend tests pin bit-identical output.
"""

import numpy as np

from libc.stdlib cimport free, malloc

ctypedef unsigned long long u64

cdef enum:
    STATUS_STABILIZED = 0
    STATUS_STEP_LIMIT = 1
    K_EXPLICIT = 0
    K_ALL_EQUAL = 1
    K_REPEAT_HALVES = 2
    K_TWO_COLORED = 3
    K_GOODNESS = 4

cdef u64 GOLDEN = 0x9E3779B97F4A7C15ULL
cdef double SCALE = 1.0 / 9007199254740992.0  # 2^-53


cdef inline u64 mix64(u64 z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline u64 stream_u64(u64 seed, u64 key, u64 index) nogil:
    cdef u64 base = mix64(seed ^ mix64((key + 1) * GOLDEN))
    return mix64(base + (index + 1) * GOLDEN)


cdef inline int draw(const double[::1] cumw, long lo, long hi, double u) nogil:
    cdef long j = lo
    while j < hi and u >= cumw[j]:
        j += 1
    if j == hi:
        j = hi - 1
    return <int>(j - lo)


cdef inline double unit_at(u64 base, u64 index) nogil:
    return <double>(mix64(base + (index + 1) * GOLDEN) >> 11) * SCALE


cdef bint violated(long ei, const int[::1] f,
                   const int[::1] ev_vars, const long[::1] ev_off,
                   const signed char[::1] ev_kind, const long[::1] ev_strides,
                   const long[::1] ev_aux, const long[::1] aux_off,
                   long* counts, long counts_size) nogil:
    cdef long lo = ev_off[ei], hi = ev_off[ei + 1]
    cdef int kind = ev_kind[ei]
    cdef long j, a, b, mid, alo, cnt, p, z, deg, min_repeats
    cdef long code
    cdef int first, c1, c2, v, center, cj
    cdef bint uncolored, keeps
    cdef long repeated

    if kind == K_ALL_EQUAL:
        first = f[ev_vars[lo]]
        for j in range(lo + 1, hi):
            if f[ev_vars[j]] != first:
                return False
        return True
    if kind == K_EXPLICIT:
        code = 0
        for j in range(lo, hi):
            code += f[ev_vars[j]] * ev_strides[j]
        alo = aux_off[ei]
        cnt = ev_aux[alo]
        a = alo + 1
        b = alo + 1 + cnt
        while a < b:
            mid = (a + b) // 2
            if ev_aux[mid] < code:
                a = mid + 1
            else:
                b = mid
        return a < alo + 1 + cnt and ev_aux[a] == code
    if kind == K_REPEAT_HALVES:
        cnt = (hi - lo) // 2
        for j in range(cnt):
            if f[ev_vars[lo + j]] != f[ev_vars[lo + cnt + j]]:
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
    alo = aux_off[ei]
    min_repeats = ev_aux[alo]
    deg = ev_aux[alo + 1]
    center = f[ev_vars[lo]]
    uncolored = False
    for j in range(1, deg + 1):
        if f[ev_vars[lo + j]] == center:
            uncolored = True
            break
    if not uncolored:
        return False
    for j in range(counts_size):
        counts[j] = 0
    p = alo + 2
    for j in range(1, deg + 1):
        cnt = ev_aux[p]
        p += 1
        cj = f[ev_vars[lo + j]]
        keeps = True
        for z in range(p, p + cnt):
            if f[ev_vars[lo + ev_aux[z]]] == cj:
                keeps = False
                break
        p += cnt
        if keeps:
            counts[cj] += 1
    repeated = 0
    for j in range(counts_size):
        if counts[j] >= 2:
            repeated += 1
    return repeated < min_repeats


def fast_run(prog, key_map, seed, rule, rule_seed, max_steps, exact_rounds):
    cdef const double[::1] cumw = prog.cumw
    cdef const long[::1] cumw_off = prog.cumw_off
    cdef const int[::1] ev_vars = prog.ev_vars
    cdef const long[::1] ev_off = prog.ev_off
    cdef const signed char[::1] ev_kind = prog.ev_kind
    cdef const long[::1] ev_strides = prog.ev_strides
    cdef const long[::1] ev_aux = prog.ev_aux
    cdef const long[::1] aux_off = prog.aux_off
    cdef const int[::1] vev = prog.vev
    cdef const long[::1] vev_off = prog.vev_off
    cdef const int[::1] dom_of_event = prog.dom_of_event
    cdef const int[::1] dom_vars = prog.dom_vars
    cdef const long[::1] dom_off = prog.dom_off
    cdef const int[::1] dom_order = prog.dom_order
    cdef const long[::1] keys = key_map

    cdef long n_vars = prog.n_vars
    cdef long n_events = prog.n_events
    cdef long n_domains = prog.n_domains
    cdef u64 c_seed = <u64>(seed & 0xFFFFFFFFFFFFFFFF)
    cdef u64 c_rule_seed = <u64>(rule_seed & 0xFFFFFFFFFFFFFFFF)
    cdef bint random_rule = rule == "random"
    cdef long budget = exact_rounds if exact_rounds >= 0 else max_steps

    f_arr = np.zeros(n_vars, dtype=np.int32)
    t_arr = np.zeros(n_vars, dtype=np.int64)
    ind_arr = np.zeros(n_domains, dtype=np.int64)
    cdef int[::1] f = f_arr
    cdef long[::1] t = t_arr
    cdef long[::1] ind = ind_arr

    base_arr = np.zeros(n_vars, dtype=np.uint64)
    cdef u64[::1] base = base_arr
    cdef long x, ei, d, i, j, p, q, rounds, total, n_cand, n_sel, max_q
    cdef u64 swap_j
    cdef bint now, ok

    max_q = 1
    for x in range(n_vars):
        base[x] = mix64(c_seed ^ mix64((<u64>(keys[x] + 1)) * GOLDEN))
        if cumw_off[x + 1] - cumw_off[x] > max_q:
            max_q = cumw_off[x + 1] - cumw_off[x]
        f[x] = draw(cumw, cumw_off[x], cumw_off[x + 1], unit_at(base[x], 0))

    state_arr = np.zeros(n_events, dtype=np.int8)
    cdef signed char[::1] ev_state = state_arr
    vcount_arr = np.zeros(n_domains, dtype=np.int64)
    cdef long[::1] dom_vcount = vcount_arr
    mark_arr = np.full(n_vars, -1, dtype=np.int64)
    cdef long[::1] var_mark = mark_arr
    stamp_arr = np.full(n_events, -1, dtype=np.int64)
    cdef long[::1] ev_stamp = stamp_arr
    cand_arr = np.zeros(max(n_domains, 1), dtype=np.int64)
    cdef long[::1] cand = cand_arr
    sel_arr = np.zeros(max(n_domains, 1), dtype=np.int64)
    cdef long[::1] sel = sel_arr

    cdef long* counts = <long*>malloc(max_q * sizeof(long))
    if counts == NULL:
        raise MemoryError()

    total = 0
    try:
        with nogil:
            for ei in range(n_events):
                if violated(ei, f, ev_vars, ev_off, ev_kind, ev_strides,
                            ev_aux, aux_off, counts, max_q):
                    ev_state[ei] = 1
                    dom_vcount[dom_of_event[ei]] += 1
                    total += 1
            rounds = 0
            while True:
                if total == 0 or rounds >= budget:
                    break
                n_cand = 0
                for i in range(n_domains):
                    d = dom_order[i]
                    if dom_vcount[d] > 0:
                        cand[n_cand] = d
                        n_cand += 1
                if random_rule:
                    for i in range(n_cand - 1, 0, -1):
                        swap_j = stream_u64(c_rule_seed, <u64>rounds, <u64>i) % <u64>(i + 1)
                        j = <long>swap_j
                        d = cand[i]
                        cand[i] = cand[j]
                        cand[j] = d
                n_sel = 0
                for i in range(n_cand):
                    d = cand[i]
                    ok = True
                    for p in range(dom_off[d], dom_off[d + 1]):
                        if var_mark[dom_vars[p]] == rounds:
                            ok = False
                            break
                    if ok:
                        sel[n_sel] = d
                        n_sel += 1
                        for p in range(dom_off[d], dom_off[d + 1]):
                            var_mark[dom_vars[p]] = rounds
                for i in range(n_sel):
                    d = sel[i]
                    ind[d] += 1
                    for p in range(dom_off[d], dom_off[d + 1]):
                        x = dom_vars[p]
                        t[x] += 1
                        f[x] = draw(cumw, cumw_off[x], cumw_off[x + 1],
                                    unit_at(base[x], <u64>t[x]))
                for i in range(n_sel):
                    d = sel[i]
                    for p in range(dom_off[d], dom_off[d + 1]):
                        x = dom_vars[p]
                        for q in range(vev_off[x], vev_off[x + 1]):
                            ei = vev[q]
                            if ev_stamp[ei] == rounds:
                                continue
                            ev_stamp[ei] = rounds
                            now = violated(ei, f, ev_vars, ev_off, ev_kind,
                                           ev_strides, ev_aux, aux_off,
                                           counts, max_q)
                            if now and ev_state[ei] == 0:
                                ev_state[ei] = 1
                                dom_vcount[dom_of_event[ei]] += 1
                                total += 1
                            elif (not now) and ev_state[ei] == 1:
                                ev_state[ei] = 0
                                dom_vcount[dom_of_event[ei]] -= 1
                                total -= 1
                rounds += 1
    finally:
        free(counts)

    status = STATUS_STABILIZED if total == 0 else STATUS_STEP_LIMIT
    return f_arr, t_arr, ind_arr, int(rounds), status
