"""Data model: discrete variables, bad events, instances.

A bad event is a forbidden set of assignments on an ordered tuple of
variables, given either explicitly or through a named predicate.  An
instance bundles events over a shared variable set together with the
inverse incidence index used for neighborhood queries.
"""

import json
import math
from dataclasses import dataclass

WEIGHT_TOL = 1e-12
ENUM_CAP = 2 ** 24


class InstanceError(ValueError):
    """Malformed variable, event, or instance document."""


class UnenumerableError(InstanceError):
    """Probability requires enumerating more assignments than the cap allows."""


@dataclass(frozen=True)
class Variable:
    id: int
    domain_size: int
    weights: tuple = None  # None means uniform

    def __post_init__(self):
        if self.domain_size < 1:
            raise InstanceError(f"variable {self.id}: domain_size must be positive")
        if self.weights is not None:
            w = tuple(float(x) for x in self.weights)
            if len(w) != self.domain_size:
                raise InstanceError(f"variable {self.id}: weights length != domain_size")
            if any(x < 0 for x in w):
                raise InstanceError(f"variable {self.id}: negative weight")
            if abs(sum(w) - 1.0) > WEIGHT_TOL:
                raise InstanceError(f"variable {self.id}: weights sum to {sum(w)}, not 1")
            object.__setattr__(self, "weights", w)

    def weight(self, value: int) -> float:
        if self.weights is None:
            return 1.0 / self.domain_size
        return self.weights[value]

    def cum_weights(self) -> tuple:
        """Cumulative distribution, shared verbatim with the run backends."""
        acc, out = 0.0, []
        for v in range(self.domain_size):
            acc += self.weight(v)
            out.append(acc)
        return tuple(out)


# --- predicate registry -----------------------------------------------------
#
# Each entry: violated(values, params, variables) -> bool, and
# probability(variables, params) -> float or None when no closed form exists
# (enumeration then takes over, subject to ENUM_CAP).


def _mono_violated(values, params, variables):
    first = values[0]
    return all(v == first for v in values)


def _mono_probability(variables, params):
    qmin = min(v.domain_size for v in variables)
    return sum(math.prod(v.weight(c) for v in variables) for c in range(qmin))


def _endpoints_violated(values, params, variables):
    return values[0] == values[1]


def _endpoints_probability(variables, params):
    x, y = variables
    qmin = min(x.domain_size, y.domain_size)
    return sum(x.weight(c) * y.weight(c) for c in range(qmin))


def _listconflict_violated(values, params, variables):
    return values[0] == params["values"][0] and values[1] == params["values"][1]


def _listconflict_probability(variables, params):
    i, j = params["values"]
    return variables[0].weight(i) * variables[1].weight(j)


def _repetitive_violated(values, params, variables):
    h = len(values) // 2
    return all(values[i] == values[i + h] for i in range(h))


def _repetitive_probability(variables, params):
    h = len(variables) // 2
    prob = 1.0
    for i in range(h):
        x, y = variables[i], variables[i + h]
        qmin = min(x.domain_size, y.domain_size)
        prob *= sum(x.weight(c) * y.weight(c) for c in range(qmin))
    return prob


def _twocol_violated(values, params, variables):
    seen = set(values)
    return len(seen) <= 2


def _twocol_probability(variables, params):
    sizes = {v.domain_size for v in variables}
    if len(sizes) != 1 or any(v.weights is not None for v in variables):
        return None
    q, n = sizes.pop(), len(variables)
    if q == 1:
        return 1.0
    exactly_two = (q * (q - 1) // 2) * (2 ** n - 2)
    return (exactly_two + q) / q ** n


def _goodness_violated(values, params, variables):
    # vars[0] is the uncolored candidate, vars[1..deg] its neighbors, the
    # rest is the outer ring needed to decide which neighbors keep their color.
    adj = params["adj"]
    deg = len(adj)
    center = values[0]
    if all(values[j] != center for j in range(1, deg + 1)):
        return False  # the candidate keeps its color, nothing to repair
    counts = {}
    for j in range(1, deg + 1):
        cj = values[j]
        if all(values[z] != cj for z in adj[j - 1]):
            counts[cj] = counts.get(cj, 0) + 1
    repeated = sum(1 for c in counts.values() if c >= 2)
    return repeated < params["min_repeats"]


def _lowcomplexity_violated(values, params, variables):
    from .entropy.kolmogorov import surrogate_bits

    s = params["s"]
    bits = []
    for v in values:
        bits.extend((v >> (s - 1 - b)) & 1 for b in range(s))
    threshold = (s - params["t"]) * len(values)
    return surrogate_bits(params["surrogate"], tuple(bits)) <= threshold


PREDICATES = {
    "monochromatic": (_mono_violated, _mono_probability),
    "endpoints-equal": (_endpoints_violated, _endpoints_probability),
    "list-conflict": (_listconflict_violated, _listconflict_probability),
    "repetitive-path": (_repetitive_violated, _repetitive_probability),
    "two-colored-cycle": (_twocol_violated, _twocol_probability),
    "goodness-failure": (_goodness_violated, lambda v, p: None),
    "low-complexity-surrogate": (_lowcomplexity_violated, lambda v, p: None),
}


@dataclass(frozen=True)
class BadEvent:
    id: int
    vars: tuple  # ordered, distinct variable ids
    kind: str  # "explicit" or a PREDICATES key
    assignments: frozenset = None  # for kind == "explicit": tuples over vars
    params: tuple = None  # for predicates: sorted (key, value) pairs

    def __post_init__(self):
        if len(self.vars) == 0:
            raise InstanceError(f"event {self.id}: empty domain")
        if len(set(self.vars)) != len(self.vars):
            raise InstanceError(f"event {self.id}: repeated variable")
        if self.kind == "explicit":
            if self.assignments is None:
                raise InstanceError(f"event {self.id}: explicit event without assignments")
        elif self.kind not in PREDICATES:
            raise InstanceError(f"event {self.id}: unknown predicate {self.kind!r}")

    @property
    def domain(self) -> frozenset:
        return frozenset(self.vars)

    def param_dict(self) -> dict:
        return dict(self.params) if self.params else {}

    def violated_by(self, values: tuple, variables=None) -> bool:
        """values[i] is the assignment of self.vars[i]."""
        if self.kind == "explicit":
            return tuple(values) in self.assignments
        check, _ = PREDICATES[self.kind]
        return check(values, self.param_dict(), variables)


def explicit_event(eid: int, vars: tuple, assignments) -> BadEvent:
    return BadEvent(eid, tuple(vars), "explicit",
                    assignments=frozenset(tuple(a) for a in assignments))


def predicate_event(eid: int, vars: tuple, name: str, **params) -> BadEvent:
    items = tuple(sorted(params.items()))
    return BadEvent(eid, tuple(vars), name, params=items)


def _freeze_params(obj):
    if isinstance(obj, dict):
        return tuple(sorted((k, _freeze_params(v)) for k, v in obj.items()))
    if isinstance(obj, (list, tuple)):
        return tuple(_freeze_params(v) for v in obj)
    return obj


def _thaw_params(obj):
    if isinstance(obj, tuple):
        return [_thaw_params(v) for v in obj]
    return obj


class Instance:
    """Immutable collection of bad events over a shared variable set."""

    def __init__(self, variables, events):
        self.variables = list(variables)
        self.events = list(events)
        for i, v in enumerate(self.variables):
            if v.id != i:
                raise InstanceError("variable ids must be dense 0..n-1 in order")
        for i, e in enumerate(self.events):
            if e.id != i:
                raise InstanceError("event ids must be dense 0..m-1 in order")
            for x in e.vars:
                if not (0 <= x < len(self.variables)):
                    raise InstanceError(f"event {i} references unknown variable {x}")
            if e.kind == "explicit":
                for a in e.assignments:
                    if len(a) != len(e.vars):
                        raise InstanceError(f"event {i}: assignment arity mismatch")
                    for x, val in zip(e.vars, a):
                        if not (0 <= val < self.variables[x].domain_size):
                            raise InstanceError(f"event {i}: value {val} outside domain of {x}")
        self.var_index = [[] for _ in self.variables]
        for e in self.events:
            for x in e.vars:
                self.var_index[x].append(e.id)
        self._domains = None
        self._domain_events = None

    def __eq__(self, other):
        return (isinstance(other, Instance)
                and self.variables == other.variables
                and self.events == other.events)

    def n_vars(self) -> int:
        return len(self.variables)

    def event_vars(self, event: BadEvent):
        return [self.variables[x] for x in event.vars]

    def domains(self):
        """Sorted unique event domains, each as a sorted tuple of var ids."""
        if self._domains is None:
            seen = {}
            for e in self.events:
                key = tuple(sorted(e.vars))
                seen.setdefault(key, []).append(e.id)
            self._domains = sorted(seen)
            self._domain_events = {d: tuple(seen[d]) for d in self._domains}
        return self._domains

    def events_with_domain(self, domain) -> tuple:
        self.domains()
        return self._domain_events.get(tuple(sorted(domain)), ())

    # --- serialization -------------------------------------------------

    def to_dict(self) -> dict:
        variables = []
        for v in self.variables:
            entry = {"id": v.id, "domain_size": v.domain_size}
            if v.weights is not None:
                entry["weights"] = list(v.weights)
            variables.append(entry)
        events = []
        for e in self.events:
            if e.kind == "explicit":
                spec = {"type": "explicit",
                        "assignments": sorted(list(a) for a in e.assignments)}
            else:
                spec = {"type": "predicate", "name": e.kind,
                        "params": {k: _thaw_params(v) for k, v in (e.params or ())}}
            events.append({"id": e.id, "vars": list(e.vars), "spec": spec})
        return {"variables": variables, "events": events}

    @classmethod
    def from_dict(cls, doc: dict) -> "Instance":
        try:
            variables = [
                Variable(v["id"], v["domain_size"],
                         tuple(v["weights"]) if "weights" in v else None)
                for v in doc["variables"]
            ]
            events = []
            for e in doc["events"]:
                spec = e["spec"]
                if spec["type"] == "explicit":
                    events.append(explicit_event(e["id"], tuple(e["vars"]),
                                                 spec["assignments"]))
                elif spec["type"] == "predicate":
                    params = {k: _freeze_params(v)
                              for k, v in spec.get("params", {}).items()}
                    events.append(predicate_event(e["id"], tuple(e["vars"]),
                                                  spec["name"], **params))
                else:
                    raise InstanceError(f"unknown spec type {spec['type']!r}")
            return cls(variables, events)
        except (KeyError, TypeError) as exc:
            raise InstanceError(f"malformed instance document: {exc}") from exc

    def dump(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)

    @classmethod
    def load(cls, path) -> "Instance":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def dedupe_events(inst: Instance) -> Instance:
    """Optional pass collapsing events with identical (vars, spec)."""
    seen, kept = set(), []
    for e in inst.events:
        key = (e.vars, e.kind, e.assignments, e.params)
        if key in seen:
            continue
        seen.add(key)
        kept.append(BadEvent(len(kept), e.vars, e.kind,
                             assignments=e.assignments, params=e.params))
    return Instance(inst.variables, kept)


# --- probabilities ----------------------------------------------------------


def _domain_product(variables) -> int:
    size = 1
    for v in variables:
        size *= v.domain_size
    return size


def _iter_assignments(variables):
    if not variables:
        yield ()
        return
    head, rest = variables[0], variables[1:]
    for tail in _iter_assignments(rest):
        for val in range(head.domain_size):
            yield (val,) + tail


def event_probability(event: BadEvent, inst: Instance, enum_cap: int = ENUM_CAP) -> float:
    """Product-measure mass of the forbidden assignment set."""
    variables = inst.event_vars(event)
    if event.kind == "explicit":
        total = 0.0
        for a in sorted(event.assignments):
            total += math.prod(v.weight(val) for v, val in zip(variables, a))
        return total
    _, closed_form = PREDICATES[event.kind]
    prob = closed_form(variables, event.param_dict())
    if prob is not None:
        return prob
    size = _domain_product(variables)
    if size > enum_cap:
        raise UnenumerableError(
            f"event {event.id}: {size} assignments exceed the enumeration cap {enum_cap}")
    total = 0.0
    for values in _iter_assignments(list(variables)):
        if event.violated_by(values, variables):
            total += math.prod(v.weight(val) for v, val in zip(variables, values))
    return total


def domain_probability(inst: Instance, domain, enum_cap: int = ENUM_CAP) -> float:
    """Mass of the union of all events sharing this exact domain."""
    eids = inst.events_with_domain(domain)
    if not eids:
        return 0.0
    if len(eids) == 1:
        return event_probability(inst.events[eids[0]], inst, enum_cap)
    dom = tuple(sorted(domain))
    variables = [inst.variables[x] for x in dom]
    size = _domain_product(variables)
    if size > enum_cap:
        raise UnenumerableError(
            f"domain {dom}: {size} assignments exceed the enumeration cap {enum_cap}")
    pos = {x: i for i, x in enumerate(dom)}
    total = 0.0
    for values in _iter_assignments(variables):
        for eid in eids:
            e = inst.events[eid]
            restricted = tuple(values[pos[x]] for x in e.vars)
            if e.violated_by(restricted, inst.event_vars(e)):
                total += math.prod(v.weight(val) for v, val in zip(variables, values))
                break
    return total


def neighborhood(event_id: int, inst: Instance) -> set:
    """Events other than event_id whose domains intersect its domain."""
    event = inst.events[event_id]
    out = set()
    for x in event.vars:
        out.update(inst.var_index[x])
    out.discard(event_id)
    return out
