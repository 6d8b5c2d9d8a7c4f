"""Kernel backend selection.

The hot search loops have two interchangeable implementations: numba
JIT-compiled kernels and a no-JIT path built on numpy vectorization and
plain Python. Selection order:

1. a backend forced programmatically via :func:`use_backend`;
2. the environment variable ``GPFREE_BACKEND`` ("numba" or "numpy");
3. default: "numba" when numba imports cleanly, else "numpy".

Both implementations keep identical traversal order, node accounting and
tie-breaking, so every result is byte-identical across backends; only
speed differs.
"""

from __future__ import annotations

import importlib
import os
from contextlib import contextmanager

ENV_VAR = "GPFREE_BACKEND"
BACKENDS = ("numba", "numpy")

_MODULES = {
    "numba": "gpfree._kernels_numba",
    "numpy": "gpfree._kernels_numpy",
}

_forced: str | None = None
_default: str | None = None
_loaded: dict = {}


def _numba_available() -> bool:
    try:
        importlib.import_module("numba")
    except Exception:
        return False
    return True


def backend_name() -> str:
    """Name of the backend that kernels() would return right now."""
    if _forced is not None:
        return _forced
    env = os.environ.get(ENV_VAR)
    if env:
        if env not in BACKENDS:
            raise ValueError(
                "%s=%r is not a known backend (expected one of %s)"
                % (ENV_VAR, env, ", ".join(BACKENDS))
            )
        return env
    global _default
    if _default is None:
        _default = "numba" if _numba_available() else "numpy"
    return _default


def kernels():
    """Module object holding the active backend's kernel functions."""
    name = backend_name()
    mod = _loaded.get(name)
    if mod is None:
        mod = importlib.import_module(_MODULES[name])
        _loaded[name] = mod
    return mod


def available_backends() -> tuple[str, ...]:
    names = ["numpy"]
    if _numba_available():
        names.insert(0, "numba")
    return tuple(names)


@contextmanager
def use_backend(name: str):
    """Force a backend within a scope (used by tests and benchmarks)."""
    if name not in BACKENDS:
        raise ValueError("unknown backend %r" % (name,))
    global _forced
    prev = _forced
    _forced = name
    try:
        yield
    finally:
        _forced = prev
