"""Correctness certifiers: symmetric, general, and epsilon-strengthened.

The symmetric condition is e * p * (d+1) < 1 (strict, as defined); the
general condition is P[B] <= omega(B) * prod (1 - omega(B')) over the
neighborhood (non-strict); the epsilon variant multiplies the right-hand
side by epsilon^{|dom(B)|}.  Margins are always reported so callers can
demand slack beyond the bare verdict.
"""

import math
from dataclasses import dataclass, field

from .instance import Instance, event_probability, neighborhood

CERT_TOL = 1e-12


@dataclass
class CorrectnessCertificate:
    kind: str  # "SLLL" | "GLLL" | "EPS"
    valid: bool
    margin: float
    omega: dict = None  # event id -> weight (absent for SLLL)
    epsilon: float = None  # EPS only
    per_event_margin: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        doc = {"kind": self.kind, "valid": self.valid, "margin": self.margin,
               "per_event_margin": {str(k): v for k, v in sorted(self.per_event_margin.items())}}
        if self.omega is not None:
            doc["omega"] = {str(k): v for k, v in sorted(self.omega.items())}
        if self.epsilon is not None:
            doc["epsilon"] = self.epsilon
        return doc


def check_slll(inst: Instance) -> CorrectnessCertificate:
    if not inst.events:
        return CorrectnessCertificate("SLLL", True, 1.0)
    p = max(event_probability(e, inst) for e in inst.events)
    d = max(len(neighborhood(e.id, inst)) for e in inst.events)
    margin = 1.0 - math.e * p * (d + 1)
    return CorrectnessCertificate("SLLL", margin > 0.0, margin)


def _check_weighted(inst, omega, epsilon, kind):
    for e in inst.events:
        if e.id not in omega:
            raise KeyError(f"omega missing event {e.id}")
        if not (0.0 <= omega[e.id] < 1.0):
            raise ValueError(f"omega[{e.id}]={omega[e.id]} outside [0, 1)")
    margins = {}
    for e in inst.events:
        rhs = omega[e.id]
        for b in neighborhood(e.id, inst):
            rhs *= 1.0 - omega[b]
        if epsilon is not None:
            rhs *= epsilon ** len(e.vars)
        margins[e.id] = rhs - event_probability(e, inst)
    margin = min(margins.values()) if margins else 1.0
    cert = CorrectnessCertificate(kind, margin >= -CERT_TOL, margin,
                                  omega=dict(omega), epsilon=epsilon,
                                  per_event_margin=margins)
    return cert


def check_glll(inst: Instance, omega: dict) -> CorrectnessCertificate:
    return _check_weighted(inst, omega, None, "GLLL")


def check_eps_correct(inst: Instance, epsilon: float, omega: dict) -> CorrectnessCertificate:
    if not (0.0 < epsilon <= 1.0):
        raise ValueError(f"epsilon={epsilon} outside (0, 1]")
    return _check_weighted(inst, omega, epsilon, "EPS")


@dataclass
class OmegaSuggestion:
    ok: bool
    omega: dict = None
    failed_event: int = None
    iterations: int = 0


def suggest_omega(inst: Instance, slack: float = 1e-6, max_iter: int = 1000) -> OmegaSuggestion:
    """Heuristic weight search: degree-based start, then fixed-point sweeps.

    On success the returned weights validate under check_glll; on failure
    the first event whose requirement cannot be met is reported.
    """
    if not inst.events:
        return OmegaSuggestion(True, {}, None, 0)
    probs = {e.id: event_probability(e, inst) for e in inst.events}
    nbhd = {e.id: sorted(neighborhood(e.id, inst)) for e in inst.events}
    for e in inst.events:
        if probs[e.id] >= 1.0:
            return OmegaSuggestion(False, None, e.id, 0)
    omega = {e.id: min(0.99, 1.0 / (len(nbhd[e.id]) + 1)) for e in inst.events}
    if check_glll(inst, omega).valid:
        return OmegaSuggestion(True, omega, None, 0)
    for it in range(1, max_iter + 1):
        new = {}
        for e in inst.events:
            denom = math.prod(1.0 - omega[b] for b in nbhd[e.id])
            if denom <= 0.0:
                return OmegaSuggestion(False, None, e.id, it)
            new[e.id] = min(0.99, probs[e.id] / denom + slack)
        changed = any(abs(new[k] - omega[k]) > 1e-15 for k in new)
        omega = new
        cert = check_glll(inst, omega)
        if cert.valid:
            return OmegaSuggestion(True, omega, None, it)
        if not changed:
            break
    cert = check_glll(inst, omega)
    worst = min(cert.per_event_margin, key=cert.per_event_margin.get)
    return OmegaSuggestion(False, None, worst, max_iter)
