"""Command-line front end: a REPL and script runner over one session.

Every command produces a :class:`Record` with a verdict and an optional
certificate.  Plain mode prints them for people; ``--json`` prints one JSON
object per command so transcripts can be diffed.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

from .calculus import Branches, Unique, check_continuity, in_halo, standard_part
from .errors import EngineError, ParseError
from .filters import F0, Filter, extend
from .generic import (
    UltraOracle,
    mk_ultra,
    padic,
    quotient_sat,
    random_chooser,
    zero_chooser,
)
from .index_algebra import IndexSet
from .internal_sets import InternalPred, internal, saturation_witness
from .logic.axioms import check_structure_axioms
from .logic.forcing import forces, truth_index_set
from .logic.parser import KEYWORDS, RESERVED_TERMS, parse, parse_set, parse_term
from .logic.syntax import Formula, term_vars
from .logic.terms import Function, eval_term, function
from .sampling import random_filter
from .sequences import Seq, constant

NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
RESERVED = KEYWORDS | RESERVED_TERMS | {"F0", "omega", "empty", "evens", "odds", "res", "fin"}

HELP = """\
commands:
  let a = <term>                 bind a sequence (seq{cell -> expr, ...}, 1/(n+1), a*b, ...)
  let f(x) = <term>              bind a function of x
  let E = <set>                  bind an index set (res(r,m), fin{...}, evens, ~ & \\ |)
  filter G = F0 + <set> + ...    bind a filter
  force <filter> |= <formula>    decide forcing, with a certificate
  truthset <formula>             the index set where the formula holds
  st <term> @ <filter>           standard part
  halo <term> ~~ <term> @ <filter>
  cont <function or term in x> at <rational>      (or @ <rational>)
  internal A := {x | <template>}
  internal A at <i>              extension of A at index i
  saturate [X1, X2, ...] @ <filter> [depth d]
  saturate k => {x | <template in k>} @ <filter> [depth d]
  ultra [U =] zero | padic <base> <digits...> | random <seed>
  quotient U |= <formula>
  check <command> expect <verdict>
  check axioms <formula> [@ <filter>, ...]
  set json|timing on|off,  set seed <n>,  set depth <k>
  show [name],  help
lines starting with # are comments"""


@dataclass
class Record:
    command: str
    verdict: object = None
    certificate: str | None = None
    text: str = ""
    timing: float | None = None
    error: dict | None = None
    failed: bool = False

    def as_json(self) -> dict:
        out = {"command": self.command, "verdict": self.verdict,
               "certificate": self.certificate, "timing": self.timing}
        if self.error is not None:
            out["error"] = self.error
        return out


@dataclass
class Options:
    json: bool = False
    seed: int = 0
    depth: int = 10
    timing: bool = False


class CommandError(EngineError):
    """A malformed command; carries a span like ParseError."""

    kind = "command"

    def __init__(self, message, pos=0, end=None):
        super().__init__(message)
        self.pos = pos
        self.end = pos + 1 if end is None else end


# line segments keep their column in the original line


@dataclass(frozen=True)
class Seg:
    text: str
    start: int

    @property
    def end(self) -> int:
        return self.start + len(self.text)

    def strip(self) -> "Seg":
        lead = len(self.text) - len(self.text.lstrip())
        return Seg(self.text.strip(), self.start + lead)

    def split(self, sep: str, last: bool = False, required: bool = True):
        pattern = re.escape(sep) if not sep.isalpha() else rf"\b{sep}\b"
        hits = list(re.finditer(pattern, self.text))
        if not hits:
            if required:
                raise CommandError(f"expected {sep!r}", self.end, self.end + 1)
            return self, None
        m = hits[-1] if last else hits[0]
        return (Seg(self.text[:m.start()], self.start).strip(),
                Seg(self.text[m.end():], self.start + m.end()).strip())

    def error(self, message: str) -> CommandError:
        return CommandError(message, self.start, max(self.end, self.start + 1))


@dataclass
class Session:
    bindings: dict = field(default_factory=dict)
    options: Options = field(default_factory=Options)

    # lookups -------------------------------------------------------------------

    def env(self) -> dict:
        return {k: v for k, v in self.bindings.items()
                if isinstance(v, (Seq, Function, InternalPred))}

    def set_lookup(self, name: str):
        v = self.bindings.get(name)
        return v if isinstance(v, IndexSet) else None

    def _parse(self, fn: Callable, seg: Seg, *args):
        try:
            return fn(seg.text, *args)
        except ParseError as exc:
            raise ParseError(exc.args[0], exc.pos + seg.start, exc.end + seg.start) from None

    def formula(self, seg: Seg) -> Formula:
        return self._parse(parse, seg, self.set_lookup)

    def term(self, seg: Seg) -> Seq:
        t = self._parse(parse_term, seg, self.set_lookup)
        try:
            return eval_term(t, self.env())
        except EngineError as exc:
            raise _at(exc, seg) from None

    def index_set(self, seg: Seg) -> IndexSet:
        return self._parse(parse_set, seg, self.set_lookup)

    def filter(self, seg: Seg) -> Filter:
        offset = seg.start
        out: Filter | None = None
        for k, raw in enumerate(seg.text.split("+")):
            piece = Seg(raw, offset).strip()
            offset += len(raw) + 1
            if not piece.text:
                raise piece.error("empty filter component")
            bound = self.bindings.get(piece.text)
            if k == 0:
                if piece.text == "F0":
                    out = F0
                    continue
                if isinstance(bound, Filter):
                    out = bound
                    continue
                out = F0
            s = self.index_set(piece)
            try:
                out = extend(out, s)
            except EngineError as exc:
                raise _at(exc, piece) from None
        return out

    def lookup(self, seg: Seg, kind: type, what: str):
        v = self.bindings.get(seg.text)
        if not isinstance(v, kind):
            raise seg.error(f"{seg.text!r} is not a bound {what}")
        return v

    # execution -----------------------------------------------------------------

    def run_line(self, line: str) -> Record | None:
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            return None
        rec = Record(stripped)
        started = time.perf_counter()
        try:
            self._dispatch(Seg(line, 0).strip(), rec)
        except (EngineError, ValueError, TypeError, ZeroDivisionError) as exc:
            rec.verdict = "error"
            rec.certificate = None
            kind = getattr(exc, "kind", type(exc).__name__)
            pos = getattr(exc, "pos", 0)
            end = getattr(exc, "end", len(line))
            message = exc.args[0] if exc.args else str(exc)
            rec.error = {"kind": kind, "message": str(message), "span": [pos, end]}
            rec.text = _caret(line, kind, str(message), pos, end)
        if self.options.timing:
            rec.timing = round(time.perf_counter() - started, 6)
        return rec

    def _dispatch(self, seg: Seg, rec: Record):
        m = NAME.match(seg.text)
        if not m:
            raise seg.error("expected a command")
        word = m.group()
        rest = Seg(seg.text[m.end():], seg.start + m.end()).strip()
        handler = getattr(self, f"cmd_{word}", None)
        if handler is None:
            raise CommandError(f"unknown command {word!r}", seg.start, seg.start + len(word))
        handler(rest, rec)

    # bindings ------------------------------------------------------------------

    def _bind_name(self, seg: Seg) -> str:
        if not NAME.fullmatch(seg.text):
            raise seg.error(f"bad name {seg.text!r}")
        if seg.text in RESERVED:
            raise seg.error(f"{seg.text!r} is reserved")
        return seg.text

    def cmd_let(self, seg: Seg, rec: Record):
        lhs, rhs = seg.split("=")
        fm = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_']*)\s*\(([^)]*)\)", lhs.text)
        if fm:
            name = self._bind_name(Seg(fm.group(1), lhs.start))
            params = tuple(p.strip() for p in fm.group(2).split(","))
            body = self._parse(parse_term, rhs, self.set_lookup)
            closure = {k: v for k, v in self.env().items() if k not in params}
            free = term_vars(body) - set(params) - set(closure)
            if free:
                raise rhs.error(f"unbound names {sorted(free)}")
            value: object = Function(params, body, closure, name)
        else:
            name = self._bind_name(lhs)
            value = self._set_or_term(rhs)
            if isinstance(value, Seq):
                value = value.named(name)
        self.bindings[name] = value
        rec.verdict = str(value)
        rec.text = str(value) if isinstance(value, Function) else f"{name} = {value}"

    def _set_or_term(self, seg: Seg):
        try:
            return self.index_set(seg)
        except ParseError:
            return self.term(seg)

    def cmd_filter(self, seg: Seg, rec: Record):
        lhs, rhs = seg.split("=")
        name = self._bind_name(lhs)
        f = self.filter(rhs)
        self.bindings[name] = f
        rec.verdict = str(f)
        rec.text = f"{name} = {f}"

    def cmd_internal(self, seg: Seg, rec: Record):
        if ":=" not in seg.text:
            name, at = seg.split("at")
            a = self.lookup(name, InternalPred, "internal predicate")
            i = _natural(at)
            ext = a.extension_at(i)
            rec.verdict = str(ext)
            rec.text = f"{name.text} at {i}: {ext}"
            return
        lhs, rhs = seg.split(":=")
        name = self._bind_name(lhs)
        a = self._internal(rhs, self.env(), name)
        self.bindings[name] = a
        rec.verdict = str(a)
        rec.text = f"{name} := {a}"

    def _internal(self, seg: Seg, params: dict, name: str | None = None) -> InternalPred:
        text = seg.text
        shift = 0
        if text.startswith("{") and text.endswith("}") and "|" in text:
            shift = text.index("|") + 1
        try:
            return internal(text, params, name, self.set_lookup)
        except ParseError as exc:
            raise ParseError(exc.args[0], exc.pos + seg.start + shift,
                             exc.end + seg.start + shift) from None
        except EngineError as exc:
            raise _at(exc, seg) from None

    def cmd_ultra(self, seg: Seg, rec: Record):
        name = "U"
        if "=" in seg.text:
            lhs, seg = seg.split("=")
            name = self._bind_name(lhs)
        words = seg.text.split()
        if not words:
            raise seg.error("expected zero, padic or random")
        kind = words[0]
        try:
            nums = [int(w) for w in words[1:]]
        except ValueError:
            raise seg.error("expected integers") from None
        if kind == "zero" and not nums:
            u = mk_ultra(zero_chooser(), "zero")
        elif kind == "padic" and nums:
            u = mk_ultra(padic(nums[0], nums[1:]), f"padic {' '.join(words[1:])}")
        elif kind == "random" and len(nums) <= 1:
            s = nums[0] if nums else self.options.seed
            u = mk_ultra(random_chooser(s), f"random {s}")
        else:
            raise seg.error(f"cannot read oracle {seg.text!r}")
        self.bindings[name] = u
        rec.verdict = str(u)
        rec.text = f"{name} = {u}"

    # queries -------------------------------------------------------------------

    def cmd_force(self, seg: Seg, rec: Record):
        left, right = seg.split("|=")
        f = self.filter(left)
        phi = self.formula(right)
        try:
            v = forces(f, phi, self.env())
        except EngineError as exc:
            raise _at(exc, right) from None
        rec.verdict = v.value
        rec.certificate = v.describe_certificate() or None
        head = "true" if v.value else "false"
        if not v.exact and not v.value:
            head += "  (witnessed formula: only true is conclusive)"
        rec.text = f"{head}  ({rec.certificate})" if rec.certificate else head

    def cmd_truthset(self, seg: Seg, rec: Record):
        phi = self.formula(seg)
        try:
            s = truth_index_set(phi, self.env())
        except EngineError as exc:
            raise _at(exc, seg) from None
        rec.verdict = str(s)
        rec.text = str(s)

    def cmd_st(self, seg: Seg, rec: Record):
        left, right = seg.split("@", last=True)
        a = self.term(left)
        f = self.filter(right)
        res = standard_part(a, f)
        if isinstance(res, Unique):
            rec.verdict = _q(res.value)
            rec.certificate = f"case {res.case}"
            rec.text = f"{rec.verdict}  (case {res.case})"
        elif isinstance(res, Branches):
            rec.verdict = "branches"
            rows = [(str(b.cell), str(b.limit), b.case) for b in res.branches]
            rec.certificate = "; ".join(f"{c} -> {lim} (case {k})" for c, lim, k in rows)
            rec.text = _table(("cell", "limit", "case"), rows)
        else:
            rec.verdict = "unbounded"
            rows = [(str(c), str(lim)) for c, lim in res.cells]
            rec.certificate = "; ".join(f"{c} -> {lim}" for c, lim in rows)
            rec.text = "unbounded\n" + _table(("cell", "limit"), rows)

    def cmd_halo(self, seg: Seg, rec: Record):
        left, f_seg = seg.split("@", last=True)
        a_seg, b_seg = self._pair(left)
        a, b = self.term(a_seg), self.term(b_seg)
        f = self.filter(f_seg)
        ok = in_halo(b, a, f)
        rec.verdict = ok
        rec.text = "true" if ok else "false"

    def _pair(self, seg: Seg) -> tuple[Seg, Seg]:
        """Two terms written ``a ~~ b``, ``a, b`` or ``a b``."""
        for sep in ("~~", ","):
            if sep in seg.text:
                return seg.split(sep)
        words = seg.text.split()
        if len(words) != 2:
            raise seg.error("expected two terms: a ~~ b")
        return seg.split(" ")

    def cmd_cont(self, seg: Seg, rec: Record):
        sep = "@" if "@" in seg.text else "at"
        fn_seg, c_seg = seg.split(sep, last=True)
        c = _rational(c_seg)
        bound = self.bindings.get(fn_seg.text)
        if isinstance(bound, Function):
            fn = bound
        else:
            body = self._parse(parse_term, fn_seg, self.set_lookup)
            try:
                fn = function(body, "x", self.env())
            except EngineError as exc:
                raise _at(exc, fn_seg) from None
        try:
            report = check_continuity(fn, c)
        except EngineError as exc:
            raise _at(exc, fn_seg) from None
        rec.verdict = "continuous" if report.verdict else "discontinuous"
        if report.certificate is not None:
            rec.certificate = f"x = {report.certificate}"
        rec.text = report.summary()

    def cmd_saturate(self, seg: Seg, rec: Record):
        body, depth_seg = seg.split("depth", last=True, required=False)
        depth = self.options.depth if depth_seg is None else _natural(depth_seg)
        chain_seg, f_seg = body.split("@", last=True)
        f = self.filter(f_seg)
        chain = self._chain(chain_seg, depth)
        try:
            result = saturation_witness(chain, f, depth)
        except EngineError as exc:
            raise _at(exc, chain_seg) from None
        rec.verdict = "ok" if result.ok else "fail"
        rec.certificate = f"witness {result.witness}"
        bad = [k for k, ok in result.checks.items() if not ok]
        rec.text = (f"witness {result.witness}\n"
                    f"membership verified for k = 0..{depth}" if result.ok
                    else f"witness {result.witness}\nmembership fails at k = {bad}")
        rec.failed = not result.ok

    def _chain(self, seg: Seg, depth: int):
        if "=>" in seg.text:
            var_seg, tmpl = seg.split("=>")
            var = self._bind_name(var_seg)
            base = self.env()

            def level(k: int) -> InternalPred:
                params = dict(base)
                params[var] = constant(k)
                return self._internal(tmpl, params)

            return level
        text = seg.text
        if not (text.startswith("[") and text.endswith("]")):
            raise seg.error("expected [X1, X2, ...] or k => {x | ...}")
        items, offset = [], seg.start + 1
        for raw in text[1:-1].split(","):
            item = Seg(raw, offset).strip()
            offset += len(raw) + 1
            items.append(self.lookup(item, InternalPred, "internal predicate"))
        if len(items) < depth + 1:
            raise seg.error(f"chain has {len(items)} predicates; depth {depth} needs {depth + 1}")
        return items

    def cmd_quotient(self, seg: Seg, rec: Record):
        left, right = seg.split("|=")
        u = self.lookup(left, UltraOracle, "oracle")
        phi = self.formula(right)
        try:
            ok = quotient_sat(u, phi, self.env())
        except EngineError as exc:
            raise _at(exc, right) from None
        rec.verdict = ok
        rec.text = "true" if ok else "false"

    def cmd_check(self, seg: Seg, rec: Record):
        if seg.text.startswith("axioms"):
            self._check_axioms(Seg(seg.text[6:], seg.start + 6).strip(), rec)
            return
        cmd, expected = seg.split("expect", last=True)
        inner = Record(cmd.text)
        self._dispatch(cmd, inner)
        got = _verdict_text(inner.verdict)
        ok = got == expected.text
        rec.verdict = "pass" if ok else "fail"
        rec.certificate = inner.certificate
        rec.failed = not ok
        detail = f"  ({inner.certificate})" if inner.certificate else ""
        rec.text = (f"pass: {got}{detail}" if ok
                    else f"FAIL: expected {expected.text}, got {got}{detail}")

    def _check_axioms(self, seg: Seg, rec: Record):
        phi_seg, f_seg = seg.split("@", last=True, required=False)
        phi = self.formula(phi_seg)
        if f_seg is None:
            rng = random.Random(self.options.seed)
            filters = [F0] + [random_filter(rng) for _ in range(5)]
        else:
            filters, offset = [], f_seg.start
            for raw in f_seg.text.split(","):
                filters.append(self.filter(Seg(raw, offset).strip()))
                offset += len(raw) + 1
        report = check_structure_axioms(phi, self.env(), filters, seed=self.options.seed)
        rec.verdict = "pass" if report.ok else "fail"
        rec.certificate = None if report.ok else "; ".join(d for _, d in report.failures[:3])
        rec.failed = not report.ok
        rec.text = f"{rec.verdict}: axioms\n" + "\n".join("  " + ln for ln in str(report).splitlines())

    # options and introspection ---------------------------------------------------

    def cmd_set(self, seg: Seg, rec: Record):
        words = seg.text.split()
        if len(words) != 2:
            raise seg.error("usage: set json|timing on|off, set seed <n>, set depth <k>")
        key, value = words
        if key in ("json", "timing"):
            if value not in ("on", "off"):
                raise seg.error("expected on or off")
            setattr(self.options, key, value == "on")
        elif key in ("seed", "depth"):
            try:
                n = int(value)
            except ValueError:
                raise seg.error("expected an integer") from None
            if n < 0:
                raise seg.error("expected a non-negative integer")
            setattr(self.options, key, n)
        else:
            raise seg.error(f"unknown option {key!r}")
        rec.verdict = f"{key} = {value}"
        rec.text = rec.verdict

    def cmd_show(self, seg: Seg, rec: Record):
        if seg.text:
            if seg.text not in self.bindings:
                raise seg.error(f"{seg.text!r} is not bound")
            names = [seg.text]
        else:
            names = list(self.bindings)
        lines = [f"{k} = {self.bindings[k]}" for k in names]
        rec.verdict = "; ".join(lines)
        rec.text = "\n".join(lines) if lines else "(no bindings)"

    def cmd_help(self, seg: Seg, rec: Record):
        rec.verdict = "help"
        rec.text = HELP


# helpers ----------------------------------------------------------------------


def _at(exc: EngineError, seg: Seg) -> EngineError:
    """Attach the span of the argument being evaluated to an engine error."""
    if not hasattr(exc, "pos"):
        exc.pos, exc.end = seg.start, max(seg.end, seg.start + 1)
        # narrow to a quoted name from the message when it occurs in the argument
        named = re.search(r"'(\w+)'", str(exc.args[0]) if exc.args else "")
        hit = named and re.search(rf"\b{named.group(1)}\b", seg.text)
        if hit:
            exc.pos, exc.end = seg.start + hit.start(), seg.start + hit.end()
    return exc


def _caret(line: str, kind: str, message: str, pos: int, end: int) -> str:
    width = max(end - pos, 1)
    return f"error ({kind}): {message}\n  {line.rstrip()}\n  {' ' * pos}{'^' * width}"


def _q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _verdict_text(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _natural(seg: Seg) -> int:
    if not seg.text.isdigit():
        raise seg.error("expected a natural number")
    return int(seg.text)


def _rational(seg: Seg) -> Fraction:
    try:
        return Fraction(seg.text.replace(" ", ""))
    except (ValueError, ZeroDivisionError):
        raise seg.error("expected a rational such as 1/2 or -3") from None


def _table(head: tuple, rows: list[tuple]) -> str:
    widths = [max(len(str(r[i])) for r in [head, *rows]) for i in range(len(head))]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    return "\n".join(fmt.format(*r).rstrip() for r in [head, *rows])


# running ----------------------------------------------------------------------


def emit(rec: Record, session: Session, out) -> None:
    if session.options.json:
        print(json.dumps(rec.as_json(), sort_keys=False), file=out)
    elif rec.text:
        print(rec.text, file=out)


def run_lines(session: Session, lines, out=sys.stdout) -> int:
    """Run lines in order; the count of errors and failed checks."""
    bad = 0
    for line in lines:
        rec = session.run_line(line)
        if rec is None:
            continue
        emit(rec, session, out)
        bad += rec.error is not None or rec.failed
    return bad


def run_script(path: str | Path, session: Session | None = None, out=sys.stdout) -> int:
    session = session or Session()
    text = Path(path).read_text(encoding="utf-8")
    return run_lines(session, text.splitlines(), out)


def repl(session: Session) -> int:
    bad = 0
    while True:
        try:
            line = input("fhyper> " if sys.stdin.isatty() else "")
        except EOFError:
            break
        if line.strip() in ("quit", "exit"):
            break
        bad += run_lines(session, [line])
    return bad


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="fhyper", description="Filter-relative hyperreal engine.")
    ap.add_argument("script", nargs="?", help="a .dhr script to run")
    ap.add_argument("--script", dest="script_opt", metavar="PATH")
    ap.add_argument("--json", action="store_true", help="one JSON record per command")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--depth", type=int, default=10, help="default saturation depth")
    args = ap.parse_args(argv)
    session = Session(options=Options(json=args.json, seed=args.seed, depth=args.depth))
    path = args.script_opt or args.script
    if path is None:
        return 1 if repl(session) else 0
    try:
        bad = run_script(path, session)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
