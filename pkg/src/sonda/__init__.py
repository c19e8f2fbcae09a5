"""Exact real computation over regular string names.

Reals, closed planar sets and continuous functions are all given as
length-monotone string functions queried like oracles. Operators on them
(arithmetic, Apply, convex hull, a Lipschitz ODE solver) come with explicit
precision schedules, and their cost can be metered against second-order
polynomial bounds.
"""

from .encoding import Dyadic, decode_dyadic, parse_dyadic
from .names import Name, const_name, pad, pair
from .real import RealName, real_add, real_exp01, real_from_dyadic, real_mul, real_neg, real_sin
from .cfun import CFunName, LipName, apply, make_cfun, make_lip_name
from .ivp import lip_ivp
from .sets import ExactSet, convex_hull, load_exact_set, set_from_exact
from .sopoly import eval_sopoly, metered_run, sopoly_parse
from .expr import parse_expr

__version__ = "0.1.0"

__all__ = [
    "Dyadic", "decode_dyadic", "parse_dyadic",
    "Name", "const_name", "pad", "pair",
    "RealName", "real_add", "real_exp01", "real_from_dyadic", "real_mul", "real_neg", "real_sin",
    "CFunName", "LipName", "apply", "make_cfun", "make_lip_name",
    "lip_ivp",
    "ExactSet", "convex_hull", "load_exact_set", "set_from_exact",
    "eval_sopoly", "metered_run", "sopoly_parse",
    "parse_expr",
]
