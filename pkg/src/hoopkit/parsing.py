"""Text formats for theories and algebras.

Theory::

    theory NAME { op name/arity, ...; [point name;] eq TERM = TERM; ... }

Algebra::

    algebra NAME : THEORY { size N; op name = TABLE; ... }

Terms are prefix applications ``f(t, ...)``; constants may be written bare.
Variables are ``x``, ``y``, ``z`` (indices 0, 1, 2) or ``x0``, ``x1``, ...
``#`` starts a comment that runs to the end of the line.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np

from hoopkit.algebra import FiniteAlgebra
from hoopkit.terms import App, Equation, Signature, SignatureError, Term, Theory, Var


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {message}" if line else message)
        self.line = line
        self.col = col


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[{}()\[\],;=/:])
""", re.VERBOSE)

_VAR = re.compile(r"^(?:x|y|z|x(\d+))$")
_NAMED_VARS = {"x": 0, "y": 1, "z": 2}


def var_index(name: str) -> int | None:
    m = _VAR.match(name)
    if not m:
        return None
    if m.group(1) is not None:
        return int(m.group(1))
    return _NAMED_VARS[name]


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    line, start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), line, m.start() - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col)

    def next(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind in ("punct", "ident"):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if self.tok.text != text:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.next()

    def ident(self) -> str:
        if self.tok.kind != "ident":
            raise self.error(f"expected identifier, found {self.tok.text or 'end of input'!r}")
        return self.next().text

    def integer(self) -> int:
        if self.tok.kind != "int":
            raise self.error(f"expected integer, found {self.tok.text or 'end of input'!r}")
        return int(self.next().text)

    # -- theories

    def theory(self) -> Theory:
        self.expect("theory")
        name = self.ident()
        self.expect("{")
        symbols: list[tuple[str, int]] = []
        point = None
        point_tok = None
        equations: list[Equation] = []
        while not self.accept("}"):
            if self.accept("op"):
                while True:
                    tok = self.tok
                    sym = self.ident()
                    if var_index(sym) is not None:
                        raise self.error(f"{sym!r} is reserved for variables", tok)
                    if any(sym == s for s, _ in symbols):
                        raise self.error(f"duplicate symbol {sym!r}", tok)
                    self.expect("/")
                    symbols.append((sym, self.integer()))
                    if not self.accept(","):
                        break
                self.expect(";")
            elif self.accept("point"):
                point_tok = self.tok
                point = self.ident()
                self.expect(";")
            elif self.accept("eq"):
                sig = Signature(tuple(symbols))
                start = self.tok
                lhs = self.term(sig)
                self.expect("=")
                rhs = self.term(sig)
                self.expect(";")
                eq = Equation(lhs, rhs)
                vs = eq.variables()
                if vs and vs != set(range(max(vs) + 1)):
                    missing = sorted(set(range(max(vs) + 1)) - vs)
                    raise self.error(f"variable indices must be dense from 0 (missing {missing})", start)
                equations.append(eq)
            else:
                raise self.error(f"expected 'op', 'point', 'eq' or '}}', found {self.tok.text!r}")
        sig = Signature(tuple(symbols))
        if point is not None and (point not in sig or sig.arity(point) != 0):
            raise self.error(f"point {point!r} is not a declared constant", point_tok)
        return Theory(name, sig, tuple(equations), point)

    def term(self, sig: Signature) -> Term:
        tok = self.tok
        name = self.ident()
        if self.tok.text == "(":
            self.next()
            args: list[Term] = []
            if not self.accept(")"):
                while True:
                    args.append(self.term(sig))
                    if self.accept(")"):
                        break
                    self.expect(",")
            return self._app(sig, name, args, tok)
        v = var_index(name)
        if v is not None:
            return Var(v)
        return self._app(sig, name, [], tok)

    def _app(self, sig: Signature, name: str, args: list[Term], tok: Token) -> App:
        if name not in sig:
            raise self.error(f"unknown symbol {name!r}", tok)
        if sig.arity(name) != len(args):
            raise self.error(f"arity mismatch: {name!r} takes {sig.arity(name)} arguments, got {len(args)}", tok)
        return App(name, tuple(args))

    # -- algebras

    def algebra(self, theories: Mapping[str, Theory]) -> FiniteAlgebra:
        self.expect("algebra")
        name = self.ident()
        self.expect(":")
        th_tok = self.tok
        th_name = self.ident()
        if th_name not in theories:
            raise self.error(f"unknown theory {th_name!r}", th_tok)
        sig = theories[th_name].signature
        self.expect("{")
        size = None
        tables: dict[str, Any] = {}
        while not self.accept("}"):
            if self.accept("size"):
                size = self.integer()
                self.expect(";")
            elif self.accept("op"):
                tok = self.tok
                sym = self.ident()
                if sym not in sig:
                    raise self.error(f"unknown symbol {sym!r}", tok)
                self.expect("=")
                tables[sym] = (self.table(), tok)
                self.expect(";")
            else:
                raise self.error(f"expected 'size', 'op' or '}}', found {self.tok.text!r}")
        if size is None:
            raise self.error("missing size declaration")
        for sym, arity in sig:
            if sym not in tables:
                raise self.error(f"missing table for {sym!r}")
            table, tok = tables[sym]
            arr = np.array(table, dtype=object)
            if arr.shape != (size,) * arity:
                raise self.error(f"table for {sym!r} must have shape {(size,) * arity}", tok)
        try:
            return FiniteAlgebra(sig, size, {s: t for s, (t, _) in tables.items()}, name=name, theory=th_name)
        except (ValueError, SignatureError) as exc:
            raise self.error(str(exc)) from None

    def table(self):
        if self.accept("["):
            items = []
            if not self.accept("]"):
                while True:
                    items.append(self.table())
                    if self.accept("]"):
                        break
                    self.expect(",")
            return items
        return self.integer()


def _catalog() -> Mapping[str, Theory]:
    from hoopkit.theories import CATALOG
    return CATALOG


def parse_theory(text: str) -> Theory:
    p = _Parser(text)
    th = p.theory()
    if p.tok.kind != "eof":
        raise p.error("trailing input after theory")
    return th


def parse_term(text: str, sig: Signature) -> Term:
    """Parse a single term such as ``imp(x, dot(y, one))`` over ``sig``."""
    p = _Parser(text)
    t = p.term(sig)
    if p.tok.kind != "eof":
        raise p.error("trailing input after term")
    return t


def parse_document(text: str, theories: Mapping[str, Theory] | None = None
                   ) -> tuple[dict[str, Theory], list[FiniteAlgebra]]:
    """Parse any sequence of theory and algebra blocks.

    Algebras may refer to theories declared earlier in the same text or to the
    built-in catalog.
    """
    known = dict(_catalog() if theories is None else theories)
    declared: dict[str, Theory] = {}
    algebras: list[FiniteAlgebra] = []
    p = _Parser(text)
    while p.tok.kind != "eof":
        if p.tok.text == "theory":
            th = p.theory()
            declared[th.name] = th
            known[th.name] = th
        elif p.tok.text == "algebra":
            algebras.append(p.algebra(known))
        else:
            raise p.error(f"expected 'theory' or 'algebra', found {p.tok.text!r}")
    return declared, algebras


def parse_algebra(text: str, theories: Mapping[str, Theory] | None = None) -> FiniteAlgebra:
    _, algs = parse_document(text, theories)
    if len(algs) != 1:
        raise ParseError(f"expected exactly one algebra, found {len(algs)}")
    return algs[0]


# -- printing ----------------------------------------------------------------

def format_term(t: Term, short_vars: bool = True) -> str:
    if isinstance(t, Var):
        if short_vars and t.index < 3:
            return "xyz"[t.index]
        return f"x{t.index}"
    assert isinstance(t, App)
    if not t.args:
        return t.symbol
    return f"{t.symbol}({', '.join(format_term(a, short_vars) for a in t.args)})"


def format_equation(eq: Equation) -> str:
    short = eq.nvars <= 3
    return f"{format_term(eq.lhs, short)} = {format_term(eq.rhs, short)}"


def format_theory(th: Theory) -> str:
    lines = [f"theory {th.name} {{"]
    if len(th.signature):
        ops = ", ".join(f"{s}/{a}" for s, a in th.signature)
        lines.append(f"  op {ops};")
    if th.point_constant is not None:
        lines.append(f"  point {th.point_constant};")
    for eq in th.equations:
        lines.append(f"  eq {format_equation(eq)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _identifier(name: str) -> str:
    ident = re.sub(r"_+", "_", re.sub(r"[^A-Za-z0-9_]", "_", name)).strip("_") or "A"
    return "_" + ident if ident[0].isdigit() else ident


def format_algebra(alg: FiniteAlgebra, name: str | None = None, theory: str | None = None) -> str:
    # derived names such as M(C2) or L3xL2 are not identifiers; keep the output parseable
    name = _identifier(name or alg.name or "A")
    theory = theory or alg.theory or "unknown"
    lines = [f"algebra {name} : {theory} {{", f"  size {alg.size};"]
    for s, _ in alg.signature:
        table = json.dumps(alg.tables[s].tolist(), separators=(", ", ": "))
        lines.append(f"  op {s} = {table};")
    lines.append("}")
    return "\n".join(lines) + "\n"
