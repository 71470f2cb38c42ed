"""Switch between numba-compiled kernels and their numpy counterparts.

Set ``HITLAB_NO_JIT=1`` to force the numpy paths (numba is then never
imported).  ``use_jit()`` reports the active choice; tests and benchmarks
can flip it with ``set_jit``.
"""

from __future__ import annotations

import os

_requested = os.environ.get("HITLAB_NO_JIT", "").strip().lower() not in ("", "0", "false", "no")

if _requested:
    nb = None
else:
    try:
        import numba as nb
    except ImportError:  # pragma: no cover - numba is a declared dependency
        nb = None

_active = nb is not None


def njit(*args, **kwargs):
    """``numba.njit`` when numba is available, otherwise the identity decorator."""
    if nb is not None:
        return nb.njit(*args, **kwargs)
    if args and callable(args[0]):
        return args[0]
    return lambda func: func


def use_jit() -> bool:
    return _active


def set_jit(enabled: bool) -> bool:
    """Select the kernel family; returns the previous setting."""
    global _active
    prev = _active
    if enabled and nb is None:
        raise RuntimeError("numba kernels are unavailable in this process")
    _active = enabled
    return prev
