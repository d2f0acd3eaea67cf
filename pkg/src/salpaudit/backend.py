"""Hot-kernel backend selection.

The package ships two implementations of its numeric inner loops: numba-jitted
kernels and a pure-numpy fallback. The environment variable SALPAUDIT_BACKEND
("numba" or "numpy") forces one at import time; the default prefers numba when
importable. ``use()`` switches at runtime (used by tests and the backend
benchmark script).
"""

from __future__ import annotations

import os

from . import _kernels_numpy

ENV_VAR = "SALPAUDIT_BACKEND"

_forced = os.environ.get(ENV_VAR, "").strip().lower()

if _forced == "numpy":
    # skip the numba import entirely when the fallback is forced
    _kernels_numba = None
    _HAS_NUMBA = False
else:
    try:
        from . import _kernels_numba

        _HAS_NUMBA = True
    except ImportError:
        _kernels_numba = None
        _HAS_NUMBA = False

kernels = _kernels_numpy
name = "numpy"


def available() -> tuple[str, ...]:
    return ("numba", "numpy") if _HAS_NUMBA else ("numpy",)


def use(backend_name: str):
    """Select the active kernel set; returns the kernel namespace."""
    global kernels, name
    if backend_name == "numpy":
        kernels = _kernels_numpy
    elif backend_name == "numba":
        if not _HAS_NUMBA:
            raise RuntimeError("backend 'numba' requested but numba is not importable")
        kernels = _kernels_numba
    else:
        raise ValueError(f"unknown backend {backend_name!r}; expected 'numba' or 'numpy'")
    name = backend_name
    return kernels


if _forced:
    use(_forced)
elif _HAS_NUMBA:
    use("numba")
