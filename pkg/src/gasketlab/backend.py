"""Backend selection for the hot kernels.

Two interchangeable implementations exist: a numba-jitted one
(`_numba_kernels`) and a plain numpy/python fallback (`_numpy_kernels`).
The active backend is chosen once at import from the environment variable
GASKETLAB_BACKEND ("numba" | "numpy"); tests and the benchmark switch at
runtime via `set_backend`.

Both backends feed the same canonicalization layer, so graphs, records and
rendered images are identical whichever one is active.
"""
from __future__ import annotations

import os

_BACKENDS = ("numba", "numpy")
_active: str | None = None
_impl = None


def _load(name: str):
    if name == "numba":
        from . import _numba_kernels as mod
    elif name == "numpy":
        from . import _numpy_kernels as mod
    else:
        raise ValueError(f"unknown backend {name!r}; choose from {_BACKENDS}")
    return mod


def default_backend() -> str:
    env = os.environ.get("GASKETLAB_BACKEND", "").strip().lower()
    if env:
        if env not in _BACKENDS:
            raise ValueError(f"GASKETLAB_BACKEND={env!r} not in {_BACKENDS}")
        return env
    try:
        import numba  # noqa: F401
        return "numba"
    except ImportError:
        return "numpy"


def set_backend(name: str) -> None:
    global _active, _impl
    _impl = _load(name)
    _active = name


def get_backend() -> str:
    if _active is None:
        set_backend(default_backend())
    return _active


def impl():
    if _impl is None:
        set_backend(default_backend())
    return _impl
