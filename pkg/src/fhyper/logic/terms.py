"""Evaluation of terms to sequences under an environment.

An environment is any mapping from names to values: sequences for
variables, :class:`Function` objects for user functions, and internal
predicates for predicate atoms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from ..errors import ArgumentError
from ..index_algebra import OMEGA, IndexSet
from ..sequences import (
    Seq,
    absolute,
    arith,
    constant,
    index_seq,
    maximum,
    minimum,
    reciprocal,
    select,
)
from .syntax import BinOp, Call, Const, Index, Ite, Neg, Pow, SeqLit, Term, Var, term_vars

Env = Mapping[str, object]


@dataclass(frozen=True)
class Function:
    """A user function given by a term in its parameters."""

    params: tuple
    body: Term
    closure: Mapping = field(default_factory=dict, compare=False, hash=False)
    name: str | None = field(default=None, compare=False)

    def __call__(self, *args: Seq, domain: IndexSet = OMEGA) -> Seq:
        if len(args) != len(self.params):
            raise ArgumentError(f"{self.label} takes {len(self.params)} argument(s), got {len(args)}")
        env = dict(self.closure)
        env.update(zip(self.params, args))
        return eval_term(self.body, env, domain)

    @property
    def label(self) -> str:
        return self.name or "function"

    def __str__(self):
        return f"{self.label}({', '.join(self.params)}) = {self.body}"


def function(body: Term, param: str = "x", closure: Mapping | None = None,
             name: str | None = None) -> Function:
    free = term_vars(body) - {param} - set(closure or {})
    if free:
        raise ArgumentError(f"function body mentions unbound names {sorted(free)}")
    return Function((param,), body, dict(closure or {}), name)


def eval_term(t: Term, env: Env, domain: IndexSet = OMEGA) -> Seq:
    """The sequence denoted by ``t``.  Values off ``domain`` are irrelevant
    to the caller, so divisions only need to be defined on ``domain``."""
    if isinstance(t, Var):
        try:
            value = env[t.name]
        except KeyError:
            raise ArgumentError(f"unbound variable {t.name!r}") from None
        if not isinstance(value, Seq):
            raise ArgumentError(f"{t.name!r} is not a sequence")
        return value
    if isinstance(t, Const):
        return constant(t.value)
    if isinstance(t, Index):
        return index_seq()
    if isinstance(t, SeqLit):
        return t.seq
    if isinstance(t, BinOp):
        a = eval_term(t.left, env, domain)
        b = eval_term(t.right, env, domain)
        return arith(t.op, a, b, domain)
    if isinstance(t, Neg):
        return -eval_term(t.arg, env, domain)
    if isinstance(t, Pow):
        base = eval_term(t.base, env, domain)
        out = constant(1)
        for _ in range(abs(t.exp)):
            out = arith("*", out, base)
        return arith("/", constant(1), out, domain) if t.exp < 0 else out
    if isinstance(t, Call):
        args = [eval_term(a, env, domain) for a in t.args]
        if t.name == "abs":
            return absolute(args[0])
        if t.name == "min":
            return minimum(*args)
        if t.name == "max":
            return maximum(*args)
        if t.name == "inv":
            return reciprocal(args[0])
        fn = env.get(t.name)
        if not isinstance(fn, Function):
            raise ArgumentError(f"unknown function {t.name!r}")
        return fn(*args, domain=domain)
    if isinstance(t, Ite):
        from .forcing import truth_index_set

        cond = truth_index_set(t.cond, env)
        then = eval_term(t.then, env, domain & cond)
        other = eval_term(t.other, env, domain - cond)
        return select(cond, then, other)
    raise TypeError(f"not a term: {t!r}")
