"""Hot numerical kernels with a compiled (Cython) lane and a numpy lane.

The compiled extension is preferred when it imports cleanly; setting the
environment variable ``PANELCD_PURE=1`` forces the numpy lane. Both lanes
implement the same three functions with identical semantics:

``trace_powers(corr)``
    Traces of the second and fourth matrix powers of a symmetric matrix.
``offdiag_sums(corr)``
    Sum and sum of squares of the off-diagonal entries.
``pair_projector_traces(designs, inv_grams)``
    For every ordered unit pair (r, s), the reduced projector traces
    tr(P_r P_s) and tr((P_r P_s)^2) computed through k x k products.
"""

import importlib
import os

from . import numpy_impl

_fast = None
if os.environ.get("PANELCD_PURE", "") != "1":
    try:
        _fast = importlib.import_module(__name__ + "._fast")
    except ImportError:
        _fast = None

USING_EXTENSION = _fast is not None

if USING_EXTENSION:
    trace_powers = _fast.trace_powers
    offdiag_sums = _fast.offdiag_sums
    pair_projector_traces = _fast.pair_projector_traces
else:
    trace_powers = numpy_impl.trace_powers
    offdiag_sums = numpy_impl.offdiag_sums
    pair_projector_traces = numpy_impl.pair_projector_traces

__all__ = [
    "USING_EXTENSION",
    "numpy_impl",
    "offdiag_sums",
    "pair_projector_traces",
    "trace_powers",
]
