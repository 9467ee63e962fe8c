"""Series expansion of (1+1/x)^x about x + 11/12 and Carleman weight tools.

Exact coefficient sequences are returned as fractions.Fraction; evaluation,
quadrature and report functions return floats (use pow_expr_str for more
digits). The heavy lifting happens in the compiled _core module.
"""

try:
    from ._core import *  # noqa: F401,F403
except ImportError:  # running against a build tree where _core is top-level
    from _core import *  # noqa: F401,F403

__version__ = "0.1.0"
