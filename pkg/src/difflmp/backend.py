"""Kernel backend selection: compiled extension with a numpy fallback.

The compiled backend (difflmp._kernels, built from Cython) and the numpy
backend (difflmp._kernels_py) expose identical trial-kernel signatures.
The compiled one is preferred when importable; DIFFLMP_BACKEND=python or
DIFFLMP_BACKEND=compiled overrides the choice, as does the ``backend=``
argument threaded through the harness.

Backends agree to floating-point accumulation order over moderate
horizons.  Weighted variants whose logit spread saturates the clamp can
drift measurably apart over thousands of iterations (the truncation
trigger is sensitive to last-ulp differences); reproducibility is
therefore guaranteed per backend: one backend, one seed, one byte-exact
output, regardless of worker count.
"""

from __future__ import annotations

import os

from . import _kernels_py

_BACKENDS = {"python": _kernels_py}

try:
    from . import _kernels as _kernels_compiled
except ImportError:
    _kernels_compiled = None
else:
    _BACKENDS["compiled"] = _kernels_compiled


def available_backends() -> tuple[str, ...]:
    """Backend names usable on this installation, preferred first."""
    names = []
    if "compiled" in _BACKENDS:
        names.append("compiled")
    names.append("python")
    return tuple(names)


def default_backend() -> str:
    env = os.environ.get("DIFFLMP_BACKEND")
    if env:
        if env not in _BACKENDS:
            raise ValueError(
                f"DIFFLMP_BACKEND={env!r} not available; choices: {sorted(_BACKENDS)}"
            )
        return env
    return available_backends()[0]


def get_kernels(name: str | None = None):
    """Resolve a backend name (or the default) to its kernel module."""
    if name is None:
        name = default_backend()
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown backend {name!r}; choices: {sorted(_BACKENDS)}") from None
