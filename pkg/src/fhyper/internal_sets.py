"""Internal predicates: one-variable quantifier-free templates whose
extension at each index is a finite union of rational intervals.

Atoms of a template have the shape ``x R t`` (or ``t R x``) with ``t`` free
of ``x``, atoms not mentioning ``x`` at all, and references ``B(x)`` to
other internal predicates.  Endpoint terms are sequences, so the order type
of all endpoints at index n is constant on the cells of a finite partition
of omega.  Emptiness, containment and the witness selector are therefore
computed once per cell, at a representative index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Mapping, Sequence, Union

from .errors import ArgumentError, FragmentError, PreconditionError
from .filters import Filter, contains
from .index_algebra import EMPTY, OMEGA, IndexSet, interval_from, union_all
from .intervals import EMPTY_UNION, EVERYTHING, IntervalUnion, relation
from .logic.forcing import forces, truth_index_set
from .logic.parser import parse
from .logic.syntax import (
    And,
    Bool,
    Const,
    Formula,
    Implies,
    Not,
    Or,
    Pred,
    Rel,
    Var,
    conj,
    disj,
    term_vars,
)
from .logic.terms import eval_term
from .sequences import Seq, constant, select, truth_set

_FLIP = {"<": ">", "<=": ">=", ">": "<", ">=": "<=", "=": "=", "#": "#"}


# compiled templates -----------------------------------------------------------


@dataclass(frozen=True)
class _Atom:
    op: str
    bound: Seq  # x op bound


@dataclass(frozen=True)
class _Fixed:
    truth: IndexSet  # atom not mentioning x


@dataclass(frozen=True)
class _Ref:
    pred: "InternalPred"


@dataclass(frozen=True)
class _Conn:
    op: str  # not, and, or
    args: tuple


_Node = Union[_Atom, _Fixed, _Ref, _Conn]


@dataclass(eq=False)
class InternalPred:
    """The internal predicate {x | template} under ``params``."""

    template: Formula
    params: Mapping = field(default_factory=dict)
    var: str = "x"
    name: str | None = None

    def __post_init__(self):
        self.params = dict(self.params)
        self._tree = self._compile(self.template)

    def __str__(self):
        return "{" + f"{self.var} | {self.template}" + "}"

    def __repr__(self):
        return f"InternalPred({self})"

    # compilation -----------------------------------------------------------

    def _compile(self, phi: Formula) -> _Node:
        x = self.var
        if isinstance(phi, Bool):
            return _Fixed(OMEGA if phi.value else EMPTY)
        if isinstance(phi, Not):
            return _Conn("not", (self._compile(phi.arg),))
        if isinstance(phi, And):
            return _Conn("and", (self._compile(phi.left), self._compile(phi.right)))
        if isinstance(phi, Or):
            return _Conn("or", (self._compile(phi.left), self._compile(phi.right)))
        if isinstance(phi, Implies):
            return _Conn("or", (_Conn("not", (self._compile(phi.left),)), self._compile(phi.right)))
        if isinstance(phi, Pred):
            sub = self.params.get(phi.name)
            if not isinstance(sub, InternalPred):
                raise ArgumentError(f"unknown internal predicate {phi.name!r}")
            if phi.arg == Var(x):
                return _Ref(sub)
            if x in term_vars(phi.arg):
                raise FragmentError(f"{phi}: predicate arguments must be {x} itself")
            return _Fixed(truth_index_set(phi, self.params))
        if isinstance(phi, Rel) and phi.op != "~~":
            left_x = x in term_vars(phi.left)
            right_x = x in term_vars(phi.right)
            if not (left_x or right_x):
                return _Fixed(truth_index_set(phi, self.params))
            if left_x and phi.left == Var(x) and not right_x:
                return _Atom(phi.op, eval_term(phi.right, self.params))
            if right_x and phi.right == Var(x) and not left_x:
                return _Atom(_FLIP[phi.op], eval_term(phi.left, self.params))
            raise FragmentError(f"{phi}: {x} must stand alone on one side")
        raise FragmentError(f"{phi} is not allowed in an internal predicate")

    # per-index extension -----------------------------------------------------

    def extension_at(self, i: int) -> IntervalUnion:
        return _extension(self._tree, i)

    def holds_set(self, b: Seq) -> IndexSet:
        """||A(b)||, the indices at which b(i) lies in A_i."""
        env = dict(self.params)
        env[self.var] = b
        return truth_index_set(self.template, env)

    def endpoint_seqs(self) -> list[Seq]:
        out: list[Seq] = []
        _collect(self._tree, out, [])
        return list(dict.fromkeys(out))

    def fixed_sets(self) -> list[IndexSet]:
        out: list[IndexSet] = []
        _collect(self._tree, [], out)
        return list(dict.fromkeys(out))


def _extension(node: _Node, i: int) -> IntervalUnion:
    if isinstance(node, _Atom):
        return relation(node.op, node.bound(i), node.bound)
    if isinstance(node, _Fixed):
        return EVERYTHING if i in node.truth else EMPTY_UNION
    if isinstance(node, _Ref):
        return node.pred.extension_at(i)
    parts = [_extension(a, i) for a in node.args]
    if node.op == "not":
        return ~parts[0]
    if node.op == "and":
        return parts[0] & parts[1]
    return parts[0] | parts[1]


def _collect(node: _Node, seqs: list, sets: list):
    if isinstance(node, _Atom):
        seqs.append(node.bound)
    elif isinstance(node, _Fixed):
        sets.append(node.truth)
    elif isinstance(node, _Ref):
        _collect(node.pred._tree, seqs, sets)
    else:
        for a in node.args:
            _collect(a, seqs, sets)


# construction helpers -----------------------------------------------------------


def internal(text: str, params: Mapping | None = None, name: str | None = None,
             set_names=None) -> InternalPred:
    """Parse ``{x | template}`` or a bare template in x."""
    body = text.strip()
    var = "x"
    if body.startswith("{") and body.endswith("}") and "|" in body:
        head, _, rest = body[1:-1].partition("|")
        var = head.strip()
        body = rest
    return InternalPred(parse(body, set_names), params or {}, var, name)


def interval_pred(lo, hi, lo_closed: bool = False, hi_closed: bool = False,
                  params: Mapping | None = None, name: str | None = None) -> InternalPred:
    """lo < x < hi (or with <=), with endpoints given as terms, Seqs or rationals."""
    params = dict(params or {})
    parts = []
    for k, (bound, closed, op_open, op_closed, rev) in enumerate(
            [(lo, lo_closed, "<", "<=", True), (hi, hi_closed, "<", "<=", False)]):
        if bound is None:
            continue
        term = _as_term(bound, params, f"_e{k}")
        op = op_closed if closed else op_open
        parts.append(Rel(op, term, Var("x")) if rev else Rel(op, Var("x"), term))
    template = conj(*parts) if parts else Bool(True)
    return InternalPred(template, params, "x", name)


def _as_term(bound, params: dict, slot: str):
    if isinstance(bound, Seq):
        params[slot] = bound
        return Var(slot)
    if isinstance(bound, (int, Fraction)):
        return Const(Fraction(bound))
    return bound


def boolean_internal(op: str, a: InternalPred, b: InternalPred | None = None) -> InternalPred:
    """Template-level negation, conjunction or disjunction."""
    op = {"¬": "not", "~": "not", "∧": "and", "/\\": "and", "&": "and",
          "∨": "or", "\\/": "or", "|": "or"}.get(op, op)
    if op == "not":
        return InternalPred(Not(Pred("_A", Var("x"))), {"_A": a})
    if b is None:
        raise ArgumentError(f"{op} needs two predicates")
    refs = (Pred("_A", Var("x")), Pred("_B", Var("x")))
    if op == "and":
        return InternalPred(And(*refs), {"_A": a, "_B": b})
    if op == "or":
        return InternalPred(Or(*refs), {"_A": a, "_B": b})
    raise ArgumentError(f"unknown connective {op!r}")


# membership -------------------------------------------------------------------


def extension_at(a: InternalPred, i: int) -> IntervalUnion:
    return a.extension_at(i)


def member_at(b: Seq, a: InternalPred, f: Filter) -> bool:
    return contains(f, a.holds_set(b))


# symbolic index sets -------------------------------------------------------------


def order_regions(seqs: Sequence[Seq], sets: Iterable[IndexSet] = ()) -> list[IndexSet]:
    """A partition of omega on whose cells every set is constant and the
    relative order of every pair of sequences is fixed."""
    regions = [OMEGA]

    def split(parts: list[IndexSet]):
        nonlocal regions
        regions = [r & p for r in regions for p in parts if not (r & p).is_empty]

    for s in dict.fromkeys(sets):
        split([s, ~s])
    for s, t in combinations(list(dict.fromkeys(seqs)), 2):
        lt = truth_set(s, "<", t)
        eq = truth_set(s, "=", t)
        split([lt, eq, ~(lt | eq)])
    return regions


def _regions_for(*preds: InternalPred) -> list[IndexSet]:
    seqs: list[Seq] = []
    sets: list[IndexSet] = []
    for p in preds:
        seqs += p.endpoint_seqs()
        sets += p.fixed_sets()
    return order_regions(seqs, sets)


def emptiness_set(a: InternalPred) -> IndexSet:
    """||A nonempty||: the indices i with A_i nonempty."""
    return union_all(r for r in _regions_for(a) if not a.extension_at(r.first()).is_empty)


def subset_set(a: InternalPred, b: InternalPred) -> IndexSet:
    """||A subset of B||: the indices i with A_i contained in B_i."""
    return union_all(r for r in _regions_for(a, b)
                     if a.extension_at(r.first()).issubset(b.extension_at(r.first())))


def selector_value(u: IntervalUnion) -> Fraction | None:
    """The fixed element choice: closed left endpoint of the leftmost
    interval, else its midpoint, else one unit inside its finite end."""
    iv = u.leftmost()
    if iv is None:
        return None
    if iv.lo is not None and iv.lo_closed:
        return iv.lo
    if iv.lo is not None and iv.hi is not None:
        return (iv.lo + iv.hi) / 2
    if iv.lo is not None:
        return iv.lo + 1
    if iv.hi is not None:
        return iv.hi - 1
    return Fraction(0)


def selector_seq(a: InternalPred) -> Seq:
    """The selector applied at every index, as an exact sequence (0 where
    the extension is empty)."""
    out = constant(0)
    for r in _regions_for(a):
        iv = a.extension_at(r.first()).leftmost()
        if iv is None:
            continue
        lo = iv.lo_src if iv.lo is not None else None
        hi = iv.hi_src if iv.hi is not None else None
        if lo is not None and iv.lo_closed:
            pick = lo
        elif lo is not None and hi is not None:
            pick = (lo + hi) / 2
        elif lo is not None:
            pick = lo + 1
        elif hi is not None:
            pick = hi - 1
        else:
            pick = constant(0)
        out = select(r, pick, out)
    return out


# countable saturation -----------------------------------------------------------

Chain = Union[Sequence[InternalPred], Callable[[int], InternalPred]]


@dataclass
class SaturationResult:
    witness: Seq
    depth: int
    j_sets: list  # J^k for k <= depth
    checks: dict  # k -> membership verdict at the filter

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def level(self, n: int) -> int | None:
        """k_n, the chain level used at index n (None if n is in no J^k)."""
        best = None
        for k in range(min(n, self.depth) + 1):
            if n in self.j_sets[k]:
                best = k
        return best


class ChainPlan:
    """Filter-independent data for a chain: the sets ||X^k nonempty||,
    ||X^(k+1) subset of X^k||, the sets J^k and the diagonal witness."""

    def __init__(self, chain: Chain, depth: int):
        if depth < 0:
            raise ArgumentError("depth must be non-negative")
        if callable(chain):
            preds = [chain(k) for k in range(depth + 1)]
        else:
            preds = list(chain)
            if len(preds) < depth + 1:
                raise ArgumentError(f"chain has {len(preds)} predicates, depth {depth} needs {depth + 1}")
            preds = preds[: depth + 1]
        self.preds = preds
        self.depth = depth
        self.nonempty = [emptiness_set(p) for p in preds]
        self.nested = [subset_set(preds[k + 1], preds[k]) for k in range(depth)]
        self.j_sets = []
        acc = OMEGA
        for k in range(depth + 1):
            self.j_sets.append(acc & self.nonempty[k])
            if k < depth:
                acc = acc & self.nested[k]
        self.witness = self._diagonal()
        # membership truth sets do not depend on the filter
        self.holds = [p.holds_set(self.witness) for p in preds]

    def _diagonal(self) -> Seq:
        # k_n = max{k <= min(n, depth) : n in J^k}; E_k is where k_n = k
        later = EMPTY
        cells = {}
        for k in range(self.depth, -1, -1):
            reach = self.j_sets[k] & interval_from(k)
            cells[k] = reach - later
            later = later | reach
        out = constant(0)
        for k in range(self.depth + 1):
            if not cells[k].is_empty:
                out = select(cells[k], selector_seq(self.preds[k]), out)
        return out

    def check(self, f: Filter):
        for k in range(self.depth + 1):
            if not contains(f, self.nonempty[k]):
                raise PreconditionError(f"X^{k} is not nonempty at {f}", k)
            if k < self.depth and not contains(f, self.nested[k]):
                raise PreconditionError(f"X^{k + 1} is not contained in X^{k} at {f}", k)


def saturation_witness(chain: Chain | ChainPlan, f: Filter, depth: int | None = None) -> SaturationResult:
    """An element forced into every X^k, k <= depth, by the diagonal
    construction."""
    if isinstance(chain, ChainPlan):
        plan = chain
    else:
        if depth is None:
            raise ArgumentError("depth is required")
        plan = ChainPlan(chain, depth)
    plan.check(f)
    a = plan.witness
    checks = {k: contains(f, h) for k, h in enumerate(plan.holds)}
    return SaturationResult(a, plan.depth, plan.j_sets, checks)


# finite sets of standard points ----------------------------------------------------


@dataclass
class FiniteCheckReport:
    predicate: InternalPred
    rows: list  # (element, member_at, forced disjunction)

    @property
    def ok(self) -> bool:
        return all(m == d for _, m, d in self.rows)


def finite_standard_internal_check(points: Sequence, f: Filter,
                                   elements: Sequence[Seq] | None = None) -> FiniteCheckReport:
    """A = {x | x = r_1 or ... or x = r_k}; membership of each element must
    agree with forcing the disjunction of equalities."""
    points = [Fraction(p) for p in points]
    if not points:
        template: Formula = Bool(False)
    else:
        template = disj(*(Rel("=", Var("x"), Const(p)) for p in points))
    a = InternalPred(template, {}, "x", "A")
    if elements is None:
        elements = [constant(p) for p in points] + [constant(max(points, default=0) + 1)]
    rows = []
    for b in elements:
        phi = disj(*(Rel("=", Var("b"), Const(p)) for p in points)) if points else Bool(False)
        rows.append((b, member_at(b, a, f), forces(f, phi, {"b": b}).value))
    return FiniteCheckReport(a, rows)
