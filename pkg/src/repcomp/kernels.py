"""Backend selection for the hot kernels.

The compiled extension ``repcomp._ckernels`` is used when it imports; otherwise
the numpy fallback in ``repcomp._pykernels`` is used. Setting the environment
variable ``REPCOMP_PURE=1`` forces the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("REPCOMP_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels


def get_backend(name: str | None = None):
    """Return the kernel module for ``name`` ("cython" or "python"); default is the active one."""
    if name is None:
        return _impl
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _ckernels

        return _ckernels
    raise ValueError(f"unknown backend {name!r}")


def rref_modp(a, p):
    return _impl.rref_modp(a, p)


def series_coeffs_modp(exps, coefs, eq_index, n_eq, jets, order, p):
    return _impl.series_coeffs_modp(exps, coefs, eq_index, n_eq, jets, order, p)
