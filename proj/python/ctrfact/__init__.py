"""Model checking and actual-cause analysis for counterfactual conditionals
over causal bases.

The core is a C++ engine with two independent evaluation routes — direct
enumeration of the state space and a quantified-boolean-formula encoding —
plus an interventionist and a counterfactual route for actual-cause
queries. See the individual functions' docstrings for the string-based
surface.
"""

from ._ctrfact import (
    __version__,
    causes,
    check,
    closest,
    encode,
    encode_cause,
    eval_qbf,
    is_cause,
    validate,
)

__all__ = [
    "__version__",
    "causes",
    "check",
    "closest",
    "encode",
    "encode_cause",
    "eval_qbf",
    "is_cause",
    "validate",
]
