"""lllab: a workbench for the Lovasz Local Lemma in the variable framework."""

__version__ = "0.1.0"

from .certify import check_eps_correct, check_glll, check_slll, suggest_omega
from .engine import run, solve, select_maximal_disjoint, violated_domains
from .instance import BadEvent, Instance, Variable, event_probability, neighborhood
from .tables import ExplicitTable, LiftedTable, SeededTable

__all__ = [
    "__version__",
    "BadEvent", "Instance", "Variable",
    "event_probability", "neighborhood",
    "check_slll", "check_glll", "check_eps_correct", "suggest_omega",
    "run", "solve", "select_maximal_disjoint", "violated_domains",
    "SeededTable", "ExplicitTable", "LiftedTable",
]
