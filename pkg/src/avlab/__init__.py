"""Exact Groebner-basis experiments on products of linear spaces.

Sparse polynomials over F_p or Q, a Buchberger engine with matrix term
orders, distributive lattices and straightening laws, polymatroid base
rings, and a seeded harness for the squarefree-initial-ideal conjectures.
"""
from .field import DEFAULT_PRIME, FieldConfig
from .groebner import (
    Budget,
    BudgetExceeded,
    GroebnerBasis,
    Ideal,
    MonomialIdeal,
    algebra_map_kernel,
    buchberger,
    eliminate,
    ideal_equal,
    intersect,
    normal_form,
    validating,
)
from .orders import TermOrder, degrevlex, elimination, lex, order_compare, weight_order
from .ring import Polynomial, RingContext, Variable

__all__ = [
    "DEFAULT_PRIME",
    "Budget",
    "BudgetExceeded",
    "FieldConfig",
    "GroebnerBasis",
    "Ideal",
    "MonomialIdeal",
    "Polynomial",
    "RingContext",
    "TermOrder",
    "Variable",
    "algebra_map_kernel",
    "buchberger",
    "degrevlex",
    "eliminate",
    "elimination",
    "ideal_equal",
    "intersect",
    "lex",
    "normal_form",
    "order_compare",
    "validating",
    "weight_order",
]

__version__ = "0.1.0"
