from boardhdl.hdl.lexer import Token, tokenize
from boardhdl.hdl.lower import lower
from boardhdl.hdl.parser import parse_design, parse_expr

__all__ = ["Token", "tokenize", "parse_design", "parse_expr", "lower"]
