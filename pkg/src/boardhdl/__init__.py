"""Compiler for a board-level hardware description language."""

from boardhdl.compiler import Compilation, compile_source
from boardhdl.errors import HdlError

__version__ = "0.1.0"

__all__ = ["Compilation", "HdlError", "compile_source"]
