"""Sampled checks that a forcing procedure behaves like a possibility
structure: persistence, refinability, equality as a congruence, and
regular-openness of the set of forcing filters."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from ..filters import Filter, extend
from ..index_algebra import IndexSet, finite_set, residue
from ..sequences import Seq, piecewise
from .forcing import stable_set
from .forcing import forces as _forces
from .syntax import BinOp, Formula, Rel, Var, free_vars

Forcing = Callable[[Filter, Formula, dict], bool]


def default_forcing(f: Filter, phi: Formula, env: dict) -> bool:
    return _forces(f, phi, env).value


@dataclass
class AxiomReport:
    checks: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def record(self, name: str, ok: bool, detail: str = ""):
        self.checks[name] = self.checks.get(name, True) and ok
        if not ok:
            self.failures.append((name, detail))

    @property
    def ok(self) -> bool:
        return not self.failures

    def failed(self, name: str) -> bool:
        return any(n == name for n, _ in self.failures)

    def __str__(self):
        lines = [f"{name}: {'pass' if ok else 'FAIL'}" for name, ok in self.checks.items()]
        lines += [f"  {name}: {detail}" for name, detail in self.failures[:5]]
        return "\n".join(lines)


def _edit(a: Seq, points: Sequence[int], rng: random.Random) -> Seq:
    """a with finitely many values replaced."""
    pts = sorted(set(points))
    pieces = [(c - finite_set(pts), e) for c, e in a.pieces]
    pieces += [(finite_set([p]), Fraction(rng.randint(-5, 5))) for p in pts]
    return piecewise(pieces, warn=False)


def _extensions(f: Filter, rng: random.Random, count: int) -> list[Filter]:
    out = []
    for _ in range(count * 3):
        m = rng.randint(2, 12)
        s = residue(rng.randrange(m), m)
        if (f.core & s).is_infinite:
            out.append(extend(f, s))
        if len(out) >= count:
            break
    return out


def check_structure_axioms(phi: Formula, env: dict, filters: Sequence[Filter],
                           forcing: Forcing | None = None, seed: int = 0) -> AxiomReport:
    """Check the possibility-structure conditions for an atomic phi over
    sampled filters.  ``forcing`` is the procedure under test; the reference
    truth set used to build refining filters comes from the engine."""
    forcing = forcing or default_forcing
    rng = random.Random(seed)
    report = AxiomReport()
    reference = stable_set(phi, env)

    for f in filters:
        holds = forcing(f, phi, env)
        exts = _extensions(f, rng, 3)

        # persistence: what f forces, every refinement forces
        for g in exts:
            if holds and not forcing(g, phi, env):
                report.record("persistence", False, f"{f} forces {phi} but {g} does not")
        report.record("persistence", True)

        # refinability: a non-forcing f has a refinement no further
        # refinement of which forces phi
        if not holds:
            if (f.core - reference).is_infinite:
                g = extend(f, ~reference)
                bad = [h for h in [g, *_extensions(g, rng, 3)] if forcing(h, phi, env)]
                report.record("refinability", not bad,
                              f"{f} does not force {phi}, yet {bad[0]} does" if bad else "")
            else:
                report.record("refinability", False,
                              f"{f} does not force {phi} but contains its truth set")
        else:
            report.record("refinability", True)

        # regular-openness: f forces phi iff phi is dense below f
        cands = [f, *exts]
        if (f.core & reference).is_infinite:
            cands.append(extend(f, reference))
        if (f.core - reference).is_infinite:
            cands.append(extend(f, ~reference))
        dense = all(any(forcing(h, phi, env) for h in [g, *_refine(g, reference)])
                    for g in cands)
        report.record("regular-open", holds == dense,
                      f"at {f}: forced={holds}, dense={dense}" if holds != dense else "")

        _check_equality(f, phi, env, forcing, rng, report)
    return report


def _refine(g: Filter, s: IndexSet) -> list[Filter]:
    out = []
    for part in (s, ~s):
        if (g.core & part).is_infinite:
            out.append(extend(g, part))
    return out


def _check_equality(f: Filter, phi: Formula, env: dict, forcing: Forcing,
                    rng: random.Random, report: AxiomReport):
    names = sorted(n for n in free_vars(phi) if isinstance(env.get(n), Seq))
    if not names:
        return
    a, b, c = Var("_a"), Var("_b"), Var("_c")
    for name in names:
        x = env[name]
        x1 = _edit(x, [rng.randrange(20) for _ in range(3)], rng)
        x2 = _edit(x1, [rng.randrange(20) for _ in range(3)], rng)
        eq_env = {"_a": x, "_b": x1, "_c": x2}
        refl = forcing(f, Rel("=", a, a), eq_env)
        sym = forcing(f, Rel("=", a, b), eq_env) == forcing(f, Rel("=", b, a), eq_env)
        trans = (not (forcing(f, Rel("=", a, b), eq_env) and forcing(f, Rel("=", b, c), eq_env))
                 or forcing(f, Rel("=", a, c), eq_env))
        report.record("equality-equivalence", refl and sym and trans,
                      f"{name} at {f}" if not (refl and sym and trans) else "")

        # congruence: swapping in a variant equal at f preserves the verdict
        swapped = dict(env)
        swapped[name] = x1
        if forcing(f, Rel("=", a, b), eq_env):
            same = forcing(f, phi, env) == forcing(f, phi, swapped)
            report.record("equality-congruence", same,
                          f"replacing {name} changes {phi} at {f}" if not same else "")
            for op in "+-*":
                t_env = {"_a": x, "_b": x1, "_c": env[names[0]]}
                ok = forcing(f, Rel("=", BinOp(op, a, c), BinOp(op, b, c)), t_env)
                report.record("equality-congruence", ok,
                              f"{op} not congruent at {f}" if not ok else "")
