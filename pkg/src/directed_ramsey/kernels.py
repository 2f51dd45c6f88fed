"""Backend selection for the search kernels.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
pure-Python ``_pykernels`` module. Set ``DIRECTED_RAMSEY_PURE_PYTHON=1`` to
force the fallback (the test-suite does this to check both agree).
"""

import os

from . import _pykernels

if os.environ.get("DIRECTED_RAMSEY_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = _impl.BACKEND

max_transitive = _impl.max_transitive
transitive_witness = _impl.transitive_witness
embed = _impl.embed
propagate = _impl.propagate
complete = _impl.complete
canonical_labeling = _impl.canonical_labeling


def available_backends():
    """Name -> module for every backend that can be imported."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        found["cython"] = _ckernels
    return found
