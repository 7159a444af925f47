"""Weight-sequence arithmetic for the low-complexity instance family.

With geometric weights w_n = delta^n and branching d, the series
sum_k k (delta d)^k converges to c = delta*d / (1 - delta*d)^2, and the
threshold t = ceil(1 - log2(eps * delta * e^(-2c))) makes the per-size
requirement 2^(-t n + 1) <= eps^n w_n prod_k (1 - w_k)^(n k d^k) hold for
every n.  The verifier below checks that inequality numerically with a
certified truncation of the infinite product.
"""

import math
from dataclasses import dataclass

from ..instance import Instance, Variable, predicate_event
from .folner import FolnerSeq


@dataclass
class ParamResult:
    t: int
    c: float
    epsilon: float
    d: int
    delta: float
    verified_up_to: int
    verified: bool

    def to_dict(self):
        return {"t": self.t, "c": self.c, "epsilon": self.epsilon, "d": self.d,
                "delta": self.delta, "verified_up_to": self.verified_up_to,
                "verified": self.verified}


def _log2_weight_product(d: int, delta: float, tol: float = 1e-12):
    """sum_k k d^k log2(1 - delta^k), with a rigorous truncation bound."""
    r = delta * d
    total = 0.0
    k = 1
    while True:
        term = k * d ** k * math.log2(1.0 - delta ** k)
        total += term
        # remaining mass: |tail| <= sum_{j>k} j d^j delta^j / ((1-delta) ln 2)
        tail = (r ** (k + 1) * ((k + 1) * (1 - r) + r) / (1 - r) ** 2
                / ((1.0 - delta) * math.log(2)))
        if tail < tol:
            return total, tail
        k += 1
        if k > 10 ** 6:
            raise RuntimeError("series truncation did not certify")


def entropy_instance_params(epsilon: float, d: int, delta: float,
                            verify_n: int = 30) -> ParamResult:
    """Minimal integer threshold t, verified against the weight inequality."""
    if not (0.0 < epsilon <= 1.0):
        raise ValueError("epsilon must lie in (0, 1]")
    if not (0.0 < delta and delta * d < 1.0):
        raise ValueError("need 0 < delta < 1/d")
    c = delta * d / (1.0 - delta * d) ** 2
    t = math.ceil(1.0 - math.log2(epsilon * delta * math.exp(-2.0 * c)))

    log2_prod, tail = _log2_weight_product(d, delta)
    ok = True
    for n in range(1, verify_n + 1):
        lhs = -t * n + 1
        rhs_lower = n * (math.log2(epsilon) + math.log2(delta) + log2_prod - tail)
        if lhs > rhs_lower + 1e-9:
            ok = False
            break
    return ParamResult(t, c, epsilon, d, delta, verify_n, ok)


def gen_complexity_instance(s: int, t: int, folner: FolnerSeq, surrogate: str,
                            M: int, n_max: int = None) -> Instance:
    """Low-description-length window events on the cyclic group Z_M.

    For every window size in the Folner prefix and every translate, the
    event holds when the window's bit string has surrogate length at most
    (s - t) * window_size.  Window sizes must stay below M so translations
    embed the interval as a path.
    """
    if n_max is None:
        n_max = len(folner) - 1
    variables = [Variable(i, 2 ** s) for i in range(M)]
    events = []
    for n in range(n_max + 1):
        win = folner.window(n)
        if len(win) >= M:
            raise ValueError(f"window {n} does not embed in Z_{M}")
        for c in range(M):
            vars_ = tuple((c + g) % M for g in win.points())
            events.append(predicate_event(len(events), vars_,
                                          "low-complexity-surrogate",
                                          s=s, t=t, surrogate=surrogate))
    return Instance(variables, events)


def neighborhood_size_bound(dom_size: int, k: int, d: int = 2) -> int:
    """Cap on same-size-k neighbors of an event with |dom| = dom_size."""
    return dom_size * k * d ** k
