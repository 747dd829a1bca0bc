"""Hot kernels, compiled when available.

The compiled extension ``_ckernels`` is preferred; the pure numpy module
``_pykernels`` is used when the extension is missing or when the
environment variable ``CAYLEY_IWASAWA_PURE`` is set to a non-empty value.
``BACKEND`` names the active implementation.
"""

from __future__ import annotations

import os

from . import _pykernels

_impl = _pykernels
BACKEND = "python"

if not os.environ.get("CAYLEY_IWASAWA_PURE"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        pass

det_mod_batch = _impl.det_mod_batch
det_mod = _impl.det_mod
local_smith = _impl.local_smith

__all__ = ["BACKEND", "det_mod_batch", "det_mod", "local_smith"]
