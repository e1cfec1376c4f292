"""Saturation prover for higher-order logic with optimistic λ-superposition."""
from .clause import Clause, Literal
from .frontend import parse, parse_file, to_clauses
from .order import OrderParams, TermOrder
from .saturation import ProverConfig, Result, prove

__all__ = ["Clause", "Literal", "OrderParams", "ProverConfig", "Result", "TermOrder",
           "parse", "parse_file", "prove", "to_clauses"]
