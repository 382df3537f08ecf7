"""Lexical topology measurements and decentralized navigation on synthetic graphs."""

__version__ = "0.1.0"
