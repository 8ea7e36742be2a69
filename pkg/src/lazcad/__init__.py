"""Cylindrical algebraic decomposition with lex-least valuations and equational constraints."""

__version__ = "0.1.0"
