"""Backend selection for the coloring search.

The compiled extension is used when it imports; set ``ABCAYLEY_PURE=1``
to force the pure-Python implementation.
"""

import os

from . import _search_py

BACKEND = "python"
dsatur_search = _search_py.dsatur_search

if not os.environ.get("ABCAYLEY_PURE"):
    try:
        from . import _search as _compiled
    except ImportError:
        _compiled = None
    if _compiled is not None:
        dsatur_search = _compiled.dsatur_search
        BACKEND = "cython"

python_dsatur_search = _search_py.dsatur_search
