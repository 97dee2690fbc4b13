"""Hot kernels, compiled when available.

The Cython extension ``hkbench._rank`` is used if it imports; otherwise the
numpy implementation in ``hkbench._rank_py`` is used.  Setting the
environment variable ``HKBENCH_PURE=1`` forces the fallback.
"""

import os

from . import _rank_py

BACKEND = "python"
rank_mod_p = _rank_py.rank_mod_p

if os.environ.get("HKBENCH_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _rank  # type: ignore[attr-defined]
    except ImportError:  # pragma: no cover - depends on the build
        pass
    else:
        rank_mod_p = _rank.rank_mod_p
        BACKEND = "compiled"

python_rank_mod_p = _rank_py.rank_mod_p
