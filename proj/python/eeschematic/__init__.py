"""Netlist-to-schematic compiler.

Parses a SPICE-subset netlist, recognizes analog substructures, places
symbols on a grid, routes wires, renders deterministic SVG, and scores the
drawing. Layouts and reports are exchanged as JSON strings.
"""

import os as _os

# The native module resolves its example library through this variable; point
# it at the packaged copy unless the caller already chose one.
_assets = _os.path.join(_os.path.dirname(__file__), "assets")
if "EESCHEMATIC_ASSET_DIR" not in _os.environ and _os.path.isdir(_assets):
    _os.environ["EESCHEMATIC_ASSET_DIR"] = _assets

from ._core import (  # noqa: E402
    CompileError,
    canonical_netlist,
    check,
    compile,
    detect_kinds,
    examples,
    place,
    render,
    route,
)

__version__ = "0.1.0"

__all__ = [
    "CompileError",
    "canonical_netlist",
    "check",
    "compile",
    "detect_kinds",
    "examples",
    "place",
    "render",
    "route",
    "__version__",
]
