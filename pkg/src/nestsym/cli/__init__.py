"""Command-line front end."""
from .main import main, run
from .parser import ExpressionSyntaxError, NonScalarDenominator, UnknownSymbol, parse_operator

__all__ = ["main", "run", "parse_operator", "ExpressionSyntaxError", "NonScalarDenominator", "UnknownSymbol"]
