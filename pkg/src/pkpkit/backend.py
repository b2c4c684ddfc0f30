"""Select the kernel implementation: compiled extension or NumPy fallback.

``PKPKIT_BACKEND=python`` / ``PKPKIT_BACKEND=compiled`` force one side;
otherwise the compiled core is used when importable. All call sites go
through ``backend.impl`` so tests can swap implementations at runtime.
"""

import os

_forced = os.environ.get("PKPKIT_BACKEND", "").strip().lower()

if _forced == "python":
    from . import _core_py as impl

    NAME = "python"
elif _forced == "compiled":
    from . import _core as impl  # noqa: F401 - hard failure is intentional here

    NAME = "compiled"
else:
    try:
        from . import _core as impl

        NAME = "compiled"
    except ImportError:
        from . import _core_py as impl

        NAME = "python"
