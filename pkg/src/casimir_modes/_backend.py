"""Kernel backend selection.

The compiled extension is used when importable.  Setting
``CASIMIR_MODES_BACKEND=python`` forces the numpy fallback.
"""
import os

if os.environ.get("CASIMIR_MODES_BACKEND", "").lower() == "python":
    from . import _core_py as core
else:
    try:
        from . import _core as core
    except ImportError:
        from . import _core_py as core

BACKEND = core.BACKEND
