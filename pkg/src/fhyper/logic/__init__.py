"""The formula language: syntax, parser, term evaluation and forcing."""

from .axioms import AxiomReport, check_structure_axioms
from .forcing import (
    Cover,
    Verdict,
    default_sampler,
    forces,
    forces_clausal,
    stable_set,
    substitute,
    substitute_formula,
    truth_index_set,
)
from .parser import Parser, parse, parse_formula, parse_seq, parse_set, parse_term
from .syntax import (
    And,
    BinOp,
    Bool,
    Call,
    Const,
    Formula,
    Implies,
    Index,
    Ite,
    Neg,
    Not,
    Or,
    Pow,
    Pred,
    Quant,
    Rel,
    SeqLit,
    St,
    Std,
    Term,
    Var,
    format_formula,
    format_term,
    free_vars,
)
from .terms import Env, Function, eval_term, function

__all__ = [
    "And", "AxiomReport", "BinOp", "Bool", "Call", "Const", "Cover", "Env", "Formula",
    "Function", "Implies", "Index", "Ite", "Neg", "Not", "Or", "Parser", "Pow", "Pred",
    "Quant", "Rel", "SeqLit", "St", "Std", "Term", "Var", "Verdict",
    "check_structure_axioms", "default_sampler", "eval_term", "forces", "forces_clausal",
    "format_formula", "format_term", "free_vars", "function", "parse", "parse_formula",
    "parse_seq", "parse_set", "parse_term", "stable_set", "substitute", "substitute_formula",
    "truth_index_set",
]
