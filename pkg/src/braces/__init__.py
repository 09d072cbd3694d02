"""Finite left braces: constructions, structure analysis and Yang-Baxter solutions."""
from .core import (
    AbelianGroupSpec,
    BraceMap,
    FiniteBrace,
    brace_from_lambda,
    direct_product,
    lam,
    lam_inv,
    read_brace,
    star,
    trivial_brace,
    verify_brace_axioms,
    verify_morphism,
    write_brace,
)
from .errors import AxiomError, BraceError, HypothesisError, SizeGuardError, StructureError

__version__ = "0.1.0"
