"""Generalized (nested-commutator) symmetries of linear differential operators."""
from .diffop import DiffOp, commutator, nested_commutator, reduce_mod
from .solver import AnsatzSpec, solve_symmetries, structure_constants, verify_symmetry

__all__ = [
    "DiffOp", "commutator", "nested_commutator", "reduce_mod",
    "AnsatzSpec", "solve_symmetries", "structure_constants", "verify_symmetry",
]
__version__ = "0.1.0"
