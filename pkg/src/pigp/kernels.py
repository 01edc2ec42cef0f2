"""Select the kernel backend at import time.

The compiled ``_ckernels`` extension is used when it was built; otherwise the
pure-Python ``_pykernels`` module is used.  Setting ``PIGP_PURE=1`` forces the
pure-Python backend.
"""

import os

from . import _pykernels as pykernels

if os.environ.get("PIGP_PURE", "") not in ("", "0"):
    backend = pykernels
else:
    try:
        from . import _ckernels as backend
    except ImportError:  # extension not built
        backend = pykernels

BACKEND = backend.BACKEND


def prepared(group, module=None):
    """Prepared kernel handle for ``group`` (cached per backend)."""
    module = module or backend
    cache = group._cache
    key = ("kernel", module.BACKEND)
    h = cache.get(key)
    if h is None:
        h = module.prepare(group.table, group.inv, group.element_orders)
        cache[key] = h
    return h
