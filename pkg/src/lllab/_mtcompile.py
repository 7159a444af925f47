"""Lower an Instance to flat arrays for the fast run backends.

Event kinds are reduced to five machine checks: membership in a sorted
code array, all-values-equal, first-half-equals-second-half, at most two
distinct values, and the partial-coloring goodness check.  Events that do
not fit (and explicit sets too large to materialize) mark the program as
unsupported, in which case callers take the object path.
"""

from dataclasses import dataclass

import numpy as np

K_EXPLICIT = 0
K_ALL_EQUAL = 1
K_REPEAT_HALVES = 2
K_TWO_COLORED = 3
K_GOODNESS = 4

MATERIALIZE_CAP = 2 ** 16


@dataclass
class MTProgram:
    supported: bool
    reason: str = ""
    n_vars: int = 0
    n_events: int = 0
    n_domains: int = 0
    cumw: object = None  # float64 flat
    cumw_off: object = None
    ev_vars: object = None  # int32 flat, CSR by ev_off
    ev_off: object = None
    ev_kind: object = None
    ev_strides: object = None  # int64 flat, aligned with ev_vars
    ev_aux: object = None  # int64 flat, CSR by aux_off
    aux_off: object = None
    vev: object = None  # var -> event ids CSR
    vev_off: object = None
    dom_of_event: object = None
    dom_vars: object = None
    dom_off: object = None
    dom_order: object = None  # domain ids ranked by the lex selection key
    domains: tuple = ()  # python-side sorted var tuples, index = domain id
    _lists: dict = None

    def as_lists(self):
        """Plain-list mirror of the arrays for the pure-Python loop."""
        if self._lists is None:
            self._lists = {
                name: getattr(self, name).tolist()
                for name in ("cumw", "cumw_off", "ev_vars", "ev_off", "ev_kind",
                             "ev_strides", "ev_aux", "aux_off", "vev", "vev_off",
                             "dom_of_event", "dom_vars", "dom_off", "dom_order")
            }
        return self._lists


def _lower_event(e, inst):
    """Return (kind, vars, strides, aux) or None when unsupported."""
    qs = [inst.variables[x].domain_size for x in e.vars]
    if e.kind in ("monochromatic", "endpoints-equal"):
        return K_ALL_EQUAL, list(e.vars), [0] * len(e.vars), []
    if e.kind == "repetitive-path":
        if len(e.vars) % 2:
            return None
        return K_REPEAT_HALVES, list(e.vars), [0] * len(e.vars), []
    if e.kind == "two-colored-cycle":
        return K_TWO_COLORED, list(e.vars), [0] * len(e.vars), []
    if e.kind == "goodness-failure":
        params = e.param_dict()
        adj = params["adj"]
        aux = [params["min_repeats"], len(adj)]
        for row in adj:
            aux.append(len(row))
            aux.extend(row)
        return K_GOODNESS, list(e.vars), [0] * len(e.vars), aux

    # everything else becomes a sorted code set, enumerating if needed
    strides = [0] * len(e.vars)
    acc = 1
    for j in range(len(e.vars) - 1, -1, -1):
        strides[j] = acc
        acc *= qs[j]
        if acc > 2 ** 62:
            return None
    if e.kind == "explicit":
        codes = sorted(sum(v * s for v, s in zip(a, strides)) for a in e.assignments)
    elif e.kind == "list-conflict":
        i, j = e.param_dict()["values"]
        codes = [i * strides[0] + j * strides[1]]
    else:
        if acc > MATERIALIZE_CAP:
            return None
        variables = inst.event_vars(e)
        codes = []
        for code in range(acc):
            rem, values = code, []
            for s in strides:
                values.append(rem // s)
                rem %= s
            if e.violated_by(tuple(values), variables):
                codes.append(code)
    return K_EXPLICIT, list(e.vars), strides, [len(codes)] + codes


def compile_instance(inst) -> MTProgram:
    n_vars, n_events = inst.n_vars(), len(inst.events)
    cumw, cumw_off = [], [0]
    for v in inst.variables:
        cumw.extend(v.cum_weights())
        cumw_off.append(len(cumw))

    ev_vars, ev_off = [], [0]
    ev_kind, ev_strides = [], []
    ev_aux, aux_off = [], [0]
    for e in inst.events:
        lowered = _lower_event(e, inst)
        if lowered is None:
            return MTProgram(False, f"event {e.id} ({e.kind}) not lowerable")
        kind, vars_, strides, aux = lowered
        ev_kind.append(kind)
        ev_vars.extend(vars_)
        ev_strides.extend(strides)
        ev_off.append(len(ev_vars))
        ev_aux.extend(aux)
        aux_off.append(len(ev_aux))

    vev, vev_off = [], [0]
    for x in range(n_vars):
        vev.extend(inst.var_index[x])
        vev_off.append(len(vev))

    domains = inst.domains()
    dom_id = {d: i for i, d in enumerate(domains)}
    dom_of_event = [dom_id[tuple(sorted(e.vars))] for e in inst.events]
    dom_vars, dom_off = [], [0]
    for d in domains:
        dom_vars.extend(d)
        dom_off.append(len(dom_vars))
    first_event = {}
    for e in inst.events:
        first_event.setdefault(dom_id[tuple(sorted(e.vars))], e.id)
    dom_order = sorted(range(len(domains)),
                       key=lambda i: (domains[i][0], len(domains[i]), first_event[i]))

    return MTProgram(
        True, "",
        n_vars=n_vars, n_events=n_events, n_domains=len(domains),
        cumw=np.asarray(cumw, dtype=np.float64),
        cumw_off=np.asarray(cumw_off, dtype=np.int64),
        ev_vars=np.asarray(ev_vars, dtype=np.int32),
        ev_off=np.asarray(ev_off, dtype=np.int64),
        ev_kind=np.asarray(ev_kind, dtype=np.int8),
        ev_strides=np.asarray(ev_strides, dtype=np.int64),
        ev_aux=np.asarray(ev_aux, dtype=np.int64),
        aux_off=np.asarray(aux_off, dtype=np.int64),
        vev=np.asarray(vev, dtype=np.int32),
        vev_off=np.asarray(vev_off, dtype=np.int64),
        dom_of_event=np.asarray(dom_of_event, dtype=np.int32),
        dom_vars=np.asarray(dom_vars, dtype=np.int32),
        dom_off=np.asarray(dom_off, dtype=np.int64),
        dom_order=np.asarray(dom_order, dtype=np.int32),
        domains=tuple(domains),
    )
