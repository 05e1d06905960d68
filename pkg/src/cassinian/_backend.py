"""Kernel backend selection.

The compiled extension is preferred when present; set the environment
variable ``CASSINIAN_PURE=1`` to force the pure-Python twin. Both expose
the same functions (see ``_kernels_py`` for the documented contracts), so
everything downstream imports ``kernels`` from here.
"""

import os

if os.environ.get("CASSINIAN_PURE"):
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as kernels


def backend_name() -> str:
    return kernels.BACKEND
