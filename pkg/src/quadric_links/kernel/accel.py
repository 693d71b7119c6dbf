"""Selects the compiled elimination kernel when it is importable.

Set QUADRIC_LINKS_PURE_PYTHON=1 to force the pure-Python path (the
benchmark and the equivalence tests use this switch).
"""
import os

from . import _elim_py

BACKEND = "python"
_impl = _elim_py
if os.environ.get("QUADRIC_LINKS_PURE_PYTHON") != "1":
    try:
        from . import _elim as _compiled
    except ImportError:
        _compiled = None
    if _compiled is not None:
        _impl = _compiled
        BACKEND = "compiled"

cells_homology = _impl.cells_homology
FaceTable = _impl.FaceTable


def backend_module(name: str):
    """The kernel module for ``name`` ("python" or "compiled")."""
    if name == "python":
        return _elim_py
    if name == "compiled":
        from . import _elim

        return _elim
    raise ValueError(f"unknown backend {name!r}")
