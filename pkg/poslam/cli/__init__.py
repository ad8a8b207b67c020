"""
CLI - 具象構文とコマンドライン
"""

from .parser import parse_term
from .printer import print_term

__all__ = ['parse_term', 'print_term']
