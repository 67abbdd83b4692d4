"""Kernel backend selection: compiled Cython core when built, NumPy otherwise.

NORTONLAB_FORCE_FALLBACK=1 forces the reference backend.
"""

import os

from . import reference

if os.environ.get("NORTONLAB_FORCE_FALLBACK") == "1":
    _impl = reference
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = reference

BACKEND = _impl.BACKEND
bfs_all = _impl.bfs_all
p_tensor = _impl.p_tensor
shell_stats = _impl.shell_stats
