"""Traces of reciprocal singular moduli, their generating series, and the
associated theta machinery, backed by the high-precision C++ core."""

import os
import sys

_ext_dir = os.environ.get("KMLIFT_EXT_DIR")
if _ext_dir and _ext_dir not in sys.path:
    sys.path.insert(0, _ext_dir)

try:
    from _core import *  # noqa: F401,F403  (build-tree layout)
except ImportError:
    from ._core import *  # noqa: F401,F403  (installed layout)

__all__ = [
    "trace",
    "generating_series",
    "hurwitz_class_number",
    "class_representatives",
    "reduce_form",
    "cm_point",
    "j",
    "chowla_selberg",
    "theta_values",
    "completion_coefficient",
    "splitting_residual",
    "km_theta",
    "regularized_lift",
    "verify_reference_values",
]
