"""Viewpoints: filters on omega generated by finitely many index sets
together with the cofinite sets."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import ImproperFilterError
from .index_algebra import OMEGA, IndexSet, intersect_all


@dataclass(frozen=True)
class Filter:
    """The filter {B : core \\ B is finite}.

    Generators are kept in the order given (duplicates dropped) so that
    printed certificates read naturally; equality compares cores, since two
    generator lists with the same core present the same filter."""

    generators: tuple = ()
    core: IndexSet = field(default=OMEGA)

    def __eq__(self, other):
        return isinstance(other, Filter) and self.core.periodic_part() == other.core.periodic_part()

    def __hash__(self):
        return hash(self.core.periodic_part())

    def __contains__(self, s: IndexSet) -> bool:
        return contains(self, s)

    def __str__(self):
        return format_filter(self)

    def __repr__(self):
        return f"Filter({self})"


def format_filter(f: Filter) -> str:
    return " + ".join(["F0", *(str(g) if _simple(g) else f"({g})" for g in f.generators)])


def _simple(s: IndexSet) -> bool:
    text = str(s)
    return not any(op in text for op in (" | ", " & ", " \\ "))


def frechet() -> Filter:
    """F0, the filter of cofinite sets."""
    return Filter()


F0 = frechet()


def mk_filter(gens: Iterable[IndexSet]) -> Filter:
    gens = tuple(dict.fromkeys(gens))
    core = intersect_all(gens)
    if core.is_finite:
        shown = ", ".join(str(g) for g in gens)
        raise ImproperFilterError(f"generators [{shown}] meet in the finite set {core}")
    return Filter(gens, core)


def contains(f: Filter, s: IndexSet) -> bool:
    return (f.core - s).is_finite


def extend(f: Filter, s: IndexSet) -> Filter:
    """Pass to the indices in s: the filter generated by f and s."""
    return mk_filter(f.generators + (s,))


def try_extend(f: Filter, s: IndexSet) -> Filter | None:
    return extend(f, s) if (f.core & s).is_infinite else None


def refines(f: Filter, g: Filter) -> bool:
    """True when f is at least as strong a viewpoint as g (g is a subset of f)."""
    return all(contains(f, s) for s in g.generators)


def compatible(f: Filter, g: Filter) -> bool:
    return (f.core & g.core).is_infinite


def join(f: Filter, g: Filter) -> Filter:
    return mk_filter(f.generators + g.generators)
