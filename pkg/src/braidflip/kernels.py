"""Hot-loop kernels, compiled when available.

``BACKEND`` is ``"cython"`` when the ``_ckernels`` extension imported and
``"python"`` otherwise.  Set ``BRAIDFLIP_PURE=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("BRAIDFLIP_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:
        pass
    else:
        BACKEND = "cython"

orient2d = _impl.orient2d
incircle = _impl.incircle
enumerate_labelings = _impl.enumerate_labelings
sixj_table = _impl.sixj_table

__all__ = ["BACKEND", "orient2d", "incircle", "enumerate_labelings", "sixj_table"]
