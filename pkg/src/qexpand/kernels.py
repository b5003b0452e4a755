"""Kernel backend selection.

The compiled extension is used when it was built; otherwise the pure-Python
reference implementation is loaded. Set ``QEXPAND_PURE_PYTHON=1`` to force the
fallback (useful for comparing backends).
"""

import logging
import os

log = logging.getLogger(__name__)

if os.environ.get("QEXPAND_PURE_PYTHON") == "1":
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        from . import _kernels_py as _impl

        BACKEND = "python"
        log.debug("compiled kernels unavailable, using pure-Python fallback")

bm25_scores = _impl.bm25_scores
association = _impl.association
