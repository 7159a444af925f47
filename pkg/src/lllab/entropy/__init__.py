"""Desk-scale entropy machinery: Folner intervals over the integers,
greedy quasi-tilings, the bit-exact tiling code, plug-in entropy
estimates, description-length surrogates, and the weight arithmetic for
low-complexity instances."""

from .coding import CodeBlob, PlanRule, analytic_slack, decode, encode
from .estimate import empirical_entropy
from .folner import FolnerSeq, Interval
from .kolmogorov import counting_bound, surrogate_bits
from .params import entropy_instance_params, gen_complexity_instance
from .tiling import TilingPlan, quasi_tile

__all__ = [
    "CodeBlob", "PlanRule", "analytic_slack", "decode", "encode",
    "empirical_entropy", "FolnerSeq", "Interval",
    "counting_bound", "surrogate_bits",
    "entropy_instance_params", "gen_complexity_instance",
    "TilingPlan", "quasi_tile",
]
