"""Shooting-integrator backend selection.

Prefers the compiled extension, falls back to the pure-Python twin.  The
environment variable ``CAPSPEC_KERNEL`` forces a choice: ``compiled`` (fail
if the extension is missing) or ``python``.
"""

import os

from .pyshoot import integrate_radial as _py_integrate

_choice = os.environ.get("CAPSPEC_KERNEL", "auto").strip().lower()

if _choice in ("auto", ""):
    try:
        from ._shootrk import integrate_radial  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        integrate_radial = _py_integrate
        BACKEND = "python"
elif _choice == "compiled":
    from ._shootrk import integrate_radial  # type: ignore[no-redef]

    BACKEND = "compiled"
elif _choice == "python":
    integrate_radial = _py_integrate
    BACKEND = "python"
else:
    raise ImportError(
        f"CAPSPEC_KERNEL must be 'auto', 'compiled', or 'python', got {_choice!r}"
    )

__all__ = ["integrate_radial", "BACKEND"]
