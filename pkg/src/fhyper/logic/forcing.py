"""Truth sets and the forcing relation.

Every atom the engine supports is *set-determined*: there is an index set
X with F forcing the atom exactly when X belongs to F.  For ordinary
relations X is the truth set; for the filter-relative atoms it is read off
the limit behaviour of the sequences involved:

* a ~~ b   the cells of a - b along which it tends to 0
* S(a)     the cells on which a is constant
* st(a, b) the intersection of the two sets above for a and a - b

Forcing clauses for negation, conjunction and disjunction then reduce to
complement, intersection and union, because F forces the negation of a
set-determined atom exactly when the core of F meets X finitely.

``forces_clausal`` instead evaluates the clauses of the forcing definition
literally, quantifying over explicit extensions of the filter; the two
evaluators are meant to agree.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from ..errors import ArgumentError, FragmentError
from ..filters import Filter, contains, extend
from ..index_algebra import EMPTY, OMEGA, IndexSet, residue
from ..sequences import (
    bounded_set,
    infinitesimal_set,
    standard_set,
    truth_set,
)
from .syntax import (
    INDEX_RELATIONS,
    And,
    Bool,
    Formula,
    Implies,
    Not,
    Or,
    Pred,
    Quant,
    Rel,
    St,
    Std,
    Term,
    Var,
    term_vars,
)
from .terms import Env, eval_term, function

# exact truth sets -----------------------------------------------------------


def _atom_truth_set(phi: Formula, env: Env) -> IndexSet:
    if isinstance(phi, Bool):
        return OMEGA if phi.value else EMPTY
    if isinstance(phi, Rel) and phi.op in INDEX_RELATIONS:
        return truth_set(eval_term(phi.left, env), phi.op, eval_term(phi.right, env))
    if isinstance(phi, Pred):
        pred = env.get(phi.name)
        if pred is None or not hasattr(pred, "holds_set"):
            raise ArgumentError(f"unknown internal predicate {phi.name!r}")
        return pred.holds_set(eval_term(phi.arg, env))
    raise FragmentError(f"{phi} is filter-relative and has no truth set; use forces")


def _witness_env(phi: Quant, env: Env, positive: bool) -> dict:
    existential = (phi.kind == "exists") == positive
    if phi.witness is None:
        raise FragmentError(f"quantifier over {phi.var} needs a witness (x := term)")
    if not existential:
        where = "positive" if positive else "negative"
        raise FragmentError(
            f"witness on {phi.kind} {phi.var} in {where} position cannot be checked")
    inner = dict(env)
    inner[phi.var] = eval_term(phi.witness, env)
    return inner


def truth_index_set(phi: Formula, env: Env | None = None) -> IndexSet:
    """The set of indices at which phi holds coordinatewise."""
    return _truth(phi, env or {}, True)


def _truth(phi: Formula, env: Env, positive: bool) -> IndexSet:
    if isinstance(phi, Not):
        return ~_truth(phi.arg, env, not positive)
    if isinstance(phi, And):
        return _truth(phi.left, env, positive) & _truth(phi.right, env, positive)
    if isinstance(phi, Or):
        return _truth(phi.left, env, positive) | _truth(phi.right, env, positive)
    if isinstance(phi, Implies):
        return ~_truth(phi.left, env, not positive) | _truth(phi.right, env, positive)
    if isinstance(phi, Quant):
        return _truth(phi.body, _witness_env(phi, env, positive), positive)
    return _atom_truth_set(phi, env)


# stable sets ----------------------------------------------------------------


@dataclass
class _Trace:
    exact: bool = True
    witnesses: dict = field(default_factory=dict)


def atom_stable_set(phi: Formula, env: Env) -> IndexSet:
    """The set X with F |- phi iff X in F, for a single atom."""
    if isinstance(phi, Rel) and phi.op == "~~":
        return infinitesimal_set(eval_term(phi.left, env) - eval_term(phi.right, env))
    if isinstance(phi, Std):
        return standard_set(eval_term(phi.arg, env))
    if isinstance(phi, St):
        part = eval_term(phi.part, env)
        return standard_set(part) & infinitesimal_set(part - eval_term(phi.arg, env))
    return _atom_truth_set(phi, env)


def _continuity_shape(phi: Quant):
    """Match forall x (x ~~ c -> u ~~ u[c/x]) and its dual
    exists x (x ~~ c /\\ ~(u ~~ u[c/x])); returns (u, c, dual)."""
    x = phi.var
    body = phi.body
    if phi.kind == "forall" and isinstance(body, Implies):
        hyp, concl, dual = body.left, body.right, False
    elif phi.kind == "exists" and isinstance(body, And) and isinstance(body.right, Not):
        hyp, concl, dual = body.left, body.right.arg, True
    else:
        return None
    if not (isinstance(hyp, Rel) and hyp.op == "~~" and hyp.left == Var(x)):
        return None
    c = hyp.right
    if x in term_vars(c):
        return None
    if not (isinstance(concl, Rel) and concl.op == "~~"):
        return None
    if concl.right != substitute(concl.left, x, c):
        return None
    return concl.left, c, dual


def special_stable_set(phi: Quant, env: Env) -> IndexSet | None:
    """Exact sets for the unannotated quantifier shapes the engine decides."""
    if phi.witness is not None:
        return None
    body = phi.body
    if (phi.kind == "exists" and isinstance(body, St) and body.part == Var(phi.var)
            and phi.var not in term_vars(body.arg)):
        return bounded_set(eval_term(body.arg, env))
    shape = _continuity_shape(phi)
    if shape is None:
        return None
    u, c, dual = shape
    point = eval_term(c, env)
    if not point.is_constant:
        raise FragmentError("continuity shape needs a standard point")
    from ..calculus import check_continuity

    fn = function(u, phi.var, {k: v for k, v in env.items() if k != phi.var})
    report = check_continuity(fn, point.pieces[0][1].constant_value)
    holds = report.verdict != dual
    return OMEGA if holds else EMPTY


def stable_set(phi: Formula, env: Env | None = None) -> IndexSet:
    return _stable(phi, env or {}, True, _Trace())


def _stable(phi: Formula, env: Env, positive: bool, trace: _Trace) -> IndexSet:
    if isinstance(phi, Not):
        return ~_stable(phi.arg, env, not positive, trace)
    if isinstance(phi, And):
        return _stable(phi.left, env, positive, trace) & _stable(phi.right, env, positive, trace)
    if isinstance(phi, Or):
        return _stable(phi.left, env, positive, trace) | _stable(phi.right, env, positive, trace)
    if isinstance(phi, Implies):
        return ~_stable(phi.left, env, not positive, trace) | _stable(phi.right, env, positive, trace)
    if isinstance(phi, Quant):
        special = special_stable_set(phi, env)
        if special is not None:
            return special
        inner = _witness_env(phi, env, positive)
        trace.exact = False
        trace.witnesses[phi.var] = inner[phi.var]
        return _stable(phi.body, inner, positive, trace)
    return atom_stable_set(phi, env)


# verdicts -------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    """Outcome of a forcing query.

    ``truth_index_set`` is the set X with F |- phi iff X in F (the exact
    truth set for formulas without filter-relative atoms).  When ``exact``
    is False the formula used witness annotations and only a true verdict
    is conclusive."""

    value: bool
    truth_index_set: IndexSet | None
    certificate: object = None
    exact: bool = True

    def __bool__(self):
        return self.value

    def describe_certificate(self) -> str:
        cert = self.certificate
        if cert is None:
            return ""
        if isinstance(cert, Filter):
            return f"refuted by: {cert}"
        if isinstance(cert, Cover):
            return "cover: " + "; ".join(str(f) for f in cert.filters)
        if isinstance(cert, Mapping):
            return "witness: " + ", ".join(f"{k} := {v}" for k, v in cert.items())
        return str(cert)


@dataclass(frozen=True)
class Cover:
    """Extensions of F, one per disjunct, that between them cover F."""

    filters: tuple


def _disjuncts(phi: Formula) -> list[Formula]:
    if isinstance(phi, Or):
        return _disjuncts(phi.left) + _disjuncts(phi.right)
    return [phi]


def forces(f: Filter, phi: Formula, env: Env | None = None) -> Verdict:
    env = env or {}
    trace = _Trace()
    x = _stable(phi, env, True, trace)
    value = contains(f, x)
    cert = None
    if not value:
        cert = extend(f, ~x)
    elif trace.witnesses:
        cert = dict(trace.witnesses)
    else:
        parts = _disjuncts(phi)
        if len(parts) > 1:
            exts = []
            for part in parts:
                s = _stable(part, env, True, _Trace())
                if (f.core & s).is_infinite and not contains(f, s):
                    exts.append(extend(f, s))
            if exts:
                cert = Cover(tuple(exts))
    return Verdict(value, x, cert, trace.exact)


# the clausal evaluator ------------------------------------------------------

Sampler = Callable[[Filter], Iterable[Filter]]


def residue_probes(seed: int = 0, count: int = 8, max_modulus: int = 12) -> list[IndexSet]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        m = rng.randint(2, max_modulus)
        out.append(residue(rng.randrange(m), m))
    return out


def default_sampler(seed: int = 0) -> Sampler:
    """Eight seeded residue-class extensions."""
    probes = residue_probes(seed)

    def sample(g: Filter) -> list[Filter]:
        return [extend(g, p) for p in probes if (g.core & p).is_infinite]

    return sample


class _Node:
    def holds(self, g: Filter) -> bool:
        try:
            return self._memo[g]
        except KeyError:
            value = self._memo[g] = self.decide(g)
            return value

    def __init__(self):
        self._memo: dict = {}


class _SetAtom(_Node):
    def __init__(self, s: IndexSet):
        super().__init__()
        self.s = s

    def decide(self, g):
        return contains(g, self.s)


class _LimitAtom(_Node):
    """A filter-relative atom decided by the calculus module."""

    def __init__(self, test: Callable[[Filter], bool]):
        super().__init__()
        self.test = test

    def decide(self, g):
        return self.test(g)


class _Clausal:
    def __init__(self, phi: Formula, env: Env, sampler: Sampler):
        self.sampler = sampler
        self.gens: list[IndexSet] = []
        self.root = self.compile(phi, dict(env), True)
        self.regions = self._regions()
        self._cands: dict = {}

    def _regions(self) -> list[IndexSet]:
        regions = [OMEGA]
        for s in dict.fromkeys(self.gens):
            nxt = []
            for r in regions:
                for part in (r & s, r - s):
                    if part.is_infinite:
                        nxt.append(part)
            regions = nxt
        return regions

    def candidates(self, g: Filter) -> list[Filter]:
        try:
            return self._cands[g]
        except KeyError:
            pass
        out = {g: None}
        for r in self.regions:
            if (g.core & r).is_infinite:
                out.setdefault(extend(g, r), None)
        for h in self.sampler(g):
            out.setdefault(h, None)
        self._cands[g] = result = list(out)
        return result

    def compile(self, phi: Formula, env: dict, positive: bool) -> _Node:
        if isinstance(phi, Not):
            return _NotNode(self, self.compile(phi.arg, env, not positive))
        if isinstance(phi, And):
            return _AndNode(self.compile(phi.left, env, positive),
                            self.compile(phi.right, env, positive))
        if isinstance(phi, Or):
            return _OrNode(self, self.compile(phi.left, env, positive),
                           self.compile(phi.right, env, positive))
        if isinstance(phi, Implies):
            left = _NotNode(self, self.compile(phi.left, env, not positive))
            return _OrNode(self, left, self.compile(phi.right, env, positive))
        if isinstance(phi, Quant):
            special = special_stable_set(phi, env)
            if special is not None:
                self.gens.append(special)
                return _SetAtom(special)
            inner = _witness_env(phi, env, positive)
            body = self.compile(phi.body, inner, positive)
            if phi.kind == "exists":
                return _DenseNode(self, body)
            return body
        return self.atom(phi, env)

    def atom(self, phi: Formula, env: dict) -> _Node:
        from .. import calculus

        if isinstance(phi, Rel) and phi.op == "~~":
            a, b = eval_term(phi.left, env), eval_term(phi.right, env)
            h = a - b
            self.gens.extend(c for c, _ in h.pieces)
            return _LimitAtom(lambda g: calculus.in_halo(a, b, g))
        if isinstance(phi, Std):
            a = eval_term(phi.arg, env)
            self.gens.extend(c for c, _ in a.pieces)
            return _LimitAtom(lambda g: calculus.is_standard(a, g))
        if isinstance(phi, St):
            a, b = eval_term(phi.part, env), eval_term(phi.arg, env)
            self.gens.extend(c for c, _ in a.pieces)
            self.gens.extend(c for c, _ in (a - b).pieces)
            return _LimitAtom(lambda g: calculus.is_standard(a, g) and calculus.in_halo(a, b, g))
        s = _atom_truth_set(phi, env)
        self.gens.append(s)
        return _SetAtom(s)


class _NotNode(_Node):
    def __init__(self, ev: _Clausal, child: _Node):
        super().__init__()
        self.ev, self.child = ev, child

    def decide(self, g):
        # no extension of g forces the negated formula
        return not any(self.child.holds(h) for h in self.ev.candidates(g))


class _AndNode(_Node):
    def __init__(self, left: _Node, right: _Node):
        super().__init__()
        self.left, self.right = left, right

    def decide(self, g):
        return self.left.holds(g) and self.right.holds(g)


class _OrNode(_Node):
    def __init__(self, ev: _Clausal, left: _Node, right: _Node):
        super().__init__()
        self.ev, self.left, self.right = ev, left, right

    def decide(self, g):
        # every extension has a further extension forcing a disjunct
        cands = self.ev.candidates
        return all(any(self.left.holds(k) or self.right.holds(k) for k in cands(h))
                   for h in cands(g))


class _DenseNode(_Node):
    """Existential clause with the witness fixed in advance."""

    def __init__(self, ev: _Clausal, body: _Node):
        super().__init__()
        self.ev, self.body = ev, body

    def decide(self, g):
        cands = self.ev.candidates
        return all(any(self.body.holds(k) for k in cands(h)) for h in cands(g))


def forces_clausal(f: Filter, phi: Formula, env: Env | None = None,
                   sampler: Sampler | None = None) -> bool:
    """Decide F |- phi by the forcing clauses over explicit extensions."""
    ev = _Clausal(phi, env or {}, sampler or default_sampler())
    return ev.root.holds(f)


# substitution ---------------------------------------------------------------


def substitute(t: Term, name: str, value: Term) -> Term:
    from dataclasses import fields, replace

    from .syntax import Ite

    if t == Var(name):
        return value
    if isinstance(t, Ite):
        return Ite(substitute_formula(t.cond, name, value),
                   substitute(t.then, name, value), substitute(t.other, name, value))
    changes = {}
    for fld in fields(t):
        v = getattr(t, fld.name)
        if isinstance(v, Term):
            changes[fld.name] = substitute(v, name, value)
        elif isinstance(v, tuple) and v and isinstance(v[0], Term):
            changes[fld.name] = tuple(substitute(a, name, value) for a in v)
    return replace(t, **changes) if changes else t


def substitute_formula(phi: Formula, name: str, value: Term) -> Formula:
    from dataclasses import fields, replace

    if isinstance(phi, Quant):
        w = substitute(phi.witness, name, value) if phi.witness is not None else None
        body = phi.body if phi.var == name else substitute_formula(phi.body, name, value)
        return Quant(phi.kind, phi.var, w, body)
    changes = {}
    for fld in fields(phi):
        v = getattr(phi, fld.name)
        if isinstance(v, Term):
            changes[fld.name] = substitute(v, name, value)
        elif isinstance(v, Formula):
            changes[fld.name] = substitute_formula(v, name, value)
    return replace(phi, **changes) if changes else phi
