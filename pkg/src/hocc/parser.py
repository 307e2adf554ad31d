"""Reader and printer for the line-oriented problem format.

    sort N .                      cons s : N -> N .
    fun plus : N -> N -> N .      var x y : N .
    rule plus z y -> y .          eq plus x y = plus y x .
    prec times > plus .           prec f ~ g .
    status plus lex .             filter plus 1 2 .
    mode plain .                  # comment
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError, SystemInvalid
from .system import Equation, Hints, RewriteSystem, Rule, collect_variables, validate
from .terms import (
    Abs, App, Arrow, Base, SimpleType, Sym, Term, Var, show, type_constants,
)

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<arrow>->)
  | (?P<ident>[A-Za-z0-9_](?:[A-Za-z0-9_']|-(?!>))*)
  | (?P<punct>[().:=>~\\λ])
""", re.VERBOSE)

KEYWORDS = ("sort", "cons", "fun", "var", "rule", "eq", "prec", "status", "filter",
            "mode", "interp", "order")
MODES = ("plain", "modulo", "hopm")


@dataclass(frozen=True)
class Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Tok]:
    out, line, start, i = [], 1, 0, 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", line, i - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind not in ("ws", "comment"):
            tk = m.group()
            out.append(Tok("ident" if kind == "ident" else tk, tk, line, i - start + 1))
        i = m.end()
    return out


class _Parser:
    def __init__(self, toks: list[Tok], signature=None, variables=None, sorts=None):
        self.toks = toks
        self.i = 0
        self.sorts: list[str] = list(sorts or [])
        self.signature: dict[str, SimpleType] = dict(signature or {})
        self.variables: dict[str, Var] = dict(variables or {})
        self.decl_order: list[str] = []

    # -- token helpers

    def peek(self, k: int = 0) -> Tok | None:
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def error(self, msg: str, tok: Tok | None = None, kind: str = "ParseError"):
        tok = tok or self.peek() or (self.toks[-1] if self.toks else Tok("", "", 1, 1))
        return ParseError(msg, tok.line, tok.col, kind)

    def expect(self, kind: str) -> Tok:
        tok = self.peek()
        if tok is None or tok.kind != kind:
            found = "end of input" if tok is None else repr(tok.text)
            raise self.error(f"expected {kind!r}, found {found}")
        self.i += 1
        return tok

    def accept(self, kind: str) -> Tok | None:
        tok = self.peek()
        if tok is not None and tok.kind == kind:
            self.i += 1
            return tok
        return None

    # -- types

    def type_(self) -> SimpleType:
        left = self.type_atom()
        if self.accept("->"):
            return Arrow(left, self.type_())
        return left

    def type_atom(self) -> SimpleType:
        if self.accept("("):
            t = self.type_()
            self.expect(")")
            return t
        tok = self.expect("ident")
        if tok.text not in self.sorts:
            raise self.error(f"undeclared sort {tok.text}", tok, "UndeclaredSymbol")
        return Base(tok.text)

    # -- terms

    def term(self, scope: dict[str, Var]) -> Term:
        tok = self.peek()
        if tok is not None and tok.kind in ("\\", "λ"):
            self.i += 1
            binders = []
            while self.peek() is not None and self.peek().kind == "ident":
                btok = self.expect("ident")
                if self.accept(":"):
                    v = Var(btok.text, self.type_atom())
                elif btok.text in self.variables:
                    v = self.variables[btok.text]
                else:
                    raise self.error(f"binder {btok.text} has no declared type", btok,
                                     "UndeclaredSymbol")
                binders.append(v)
            if not binders:
                raise self.error("expected a binder")
            self.expect(".")
            inner = dict(scope)
            for v in binders:
                inner[v.name] = v
            body = self.term(inner)
            for v in reversed(binders):
                body = Abs(v, body)
            return body
        t = self.atom(scope)
        while True:
            tok = self.peek()
            if tok is None or tok.kind not in ("ident", "(", "\\", "λ"):
                return t
            if tok.kind in ("\\", "λ"):
                return App(t, self.term(scope))
            t = App(t, self.atom(scope))

    def atom(self, scope: dict[str, Var]) -> Term:
        if self.accept("("):
            t = self.term(scope)
            self.expect(")")
            return t
        tok = self.expect("ident")
        name = tok.text
        if name in scope:
            return scope[name]
        if name in self.variables:
            return self.variables[name]
        if name in self.signature:
            return Sym(name, self.signature[name])
        raise self.error(f"undeclared identifier {name}", tok, "UndeclaredSymbol")

    # -- statements

    def names_until(self, stop: str) -> list[Tok]:
        out = []
        while self.peek() is not None and self.peek().kind == "ident":
            out.append(self.expect("ident"))
        if self.peek() is None or self.peek().kind != stop:
            raise self.error(f"expected {stop!r}")
        return out

    def declare(self, tok: Tok) -> None:
        if tok.text in self.decl_order or tok.text in KEYWORDS:
            raise self.error(f"{tok.text} declared twice", tok, "DuplicateDeclaration")
        self.decl_order.append(tok.text)


def parse_type(text: str, sorts) -> SimpleType:
    p = _Parser(tokenize(text), sorts=sorts)
    t = p.type_()
    if p.peek() is not None:
        raise p.error("trailing input")
    return t


def parse_term(text: str, signature, variables, sorts=None) -> Term:
    """Parse a term; ``variables`` maps names to :class:`Var`.  Binder
    annotations may use ``sorts``, by default every sort in the signature."""
    if sorts is None:
        found: set[str] = set()
        for ty in list(signature.values()) + [v.type for v in variables.values()]:
            found |= type_constants(ty)
        sorts = sorted(found)
    p = _Parser(tokenize(text), signature, variables, sorts)
    t = p.term({})
    if p.peek() is not None:
        raise p.error("trailing input")
    return t


def parse_problem(text: str) -> RewriteSystem:
    """Parse and validate a problem file; errors carry a ``kind`` and location."""
    p = _Parser(tokenize(text))
    symbols: list[tuple[str, SimpleType]] = []
    cons: set[str] = set()
    rules: list[Rule] = []
    eqs: list[Equation] = []
    locs: dict[str, Tok] = {}
    prec_gt, prec_eq, statuses, filters = [], [], [], []
    mode, interp, order = "plain", None, None
    while p.peek() is not None:
        kw = p.expect("ident")
        k = kw.text
        if k == "sort":
            for tok in p.names_until("."):
                p.declare(tok)
                p.sorts.append(tok.text)
        elif k in ("cons", "fun"):
            names = p.names_until(":")
            p.expect(":")
            ty = p.type_()
            for tok in names:
                p.declare(tok)
                p.signature[tok.text] = ty
                symbols.append((tok.text, ty))
                if k == "cons":
                    cons.add(tok.text)
        elif k == "var":
            names = p.names_until(":")
            p.expect(":")
            ty = p.type_()
            for tok in names:
                p.declare(tok)
                p.variables[tok.text] = Var(tok.text, ty)
        elif k == "rule":
            lhs = p.term({})
            p.expect("->")
            rhs = p.term({})
            rid = f"R{len(rules) + 1}"
            rules.append(Rule(lhs, rhs, rid))
            locs[rid] = kw
        elif k == "eq":
            lhs = p.term({})
            p.expect("=")
            rhs = p.term({})
            eid = f"E{len(eqs) + 1}"
            eqs.append(Equation(lhs, rhs, eid))
            locs[eid] = kw
        elif k == "prec":
            chain = [p.expect("ident")]
            ops = []
            while p.peek() is not None and p.peek().kind in (">", "~"):
                ops.append(p.expect(p.peek().kind).kind)
                chain.append(p.expect("ident"))
            if not ops:
                raise p.error("expected '>' or '~'")
            for tok in chain:
                if tok.text not in p.signature:
                    raise p.error(f"undeclared symbol {tok.text}", tok, "UndeclaredSymbol")
            for a, op, b in zip(chain, ops, chain[1:]):
                (prec_gt if op == ">" else prec_eq).append((a.text, b.text))
        elif k == "status":
            f = p.expect("ident")
            s = p.expect("ident")
            if f.text not in p.signature:
                raise p.error(f"undeclared symbol {f.text}", f, "UndeclaredSymbol")
            if s.text not in ("lex", "mul"):
                raise p.error("status must be lex or mul", s)
            statuses.append((f.text, s.text))
        elif k == "filter":
            f = p.expect("ident")
            if f.text not in p.signature:
                raise p.error(f"undeclared symbol {f.text}", f, "UndeclaredSymbol")
            ks = []
            for tok in p.names_until("."):
                if not tok.text.isdigit() or int(tok.text) < 1:
                    raise p.error("filter entries are positive integers", tok)
                ks.append(int(tok.text))
            filters.append((f.text, tuple(ks)))
        elif k == "mode":
            tok = p.expect("ident")
            if tok.text not in MODES:
                raise p.error(f"mode must be one of {', '.join(MODES)}", tok)
            mode = tok.text
        elif k == "interp":
            tok = p.expect("ident")
            if tok.text not in ("basic", "acc"):
                raise p.error("interp must be basic or acc", tok)
            interp = tok.text
        elif k == "order":
            tok = p.expect("ident")
            if tok.text not in ("subterm-mul", "subterm-stat", "struct-stat", "aliens"):
                raise p.error(f"unknown order {tok.text}", tok)
            order = tok.text
        else:
            raise p.error(f"unknown statement {k!r}", kw)
        p.expect(".")
    hints = Hints(tuple(prec_gt), tuple(prec_eq), tuple(statuses), tuple(filters), mode, interp, order)
    system = RewriteSystem(tuple(p.sorts), tuple(symbols), tuple(rules), tuple(eqs),
                           frozenset(cons), tuple((v.name, v.type) for v in p.variables.values()),
                           hints)
    try:
        return validate(system)
    except SystemInvalid as e:
        kind, msg = e.problems[0]
        ident = msg.split(":", 1)[0]
        tok = locs.get(ident, Tok("", "", 1, 1))
        raise ParseError(msg, tok.line, tok.col, kind) from e


def print_type(ty: SimpleType) -> str:
    return str(ty)


def print_problem(system: RewriteSystem) -> str:
    lines = []
    if system.sorts:
        lines.append("sort " + " ".join(system.sorts) + " .")
    for name, ty in system.symbols:
        kw = "cons" if name in system.constructor_hints else "fun"
        lines.append(f"{kw} {name} : {ty} .")
    for name, ty in collect_variables(system).items():
        lines.append(f"var {name} : {ty} .")
    h = system.hints
    if h.mode != "plain":
        lines.append(f"mode {h.mode} .")
    if h.interp:
        lines.append(f"interp {h.interp} .")
    if h.order:
        lines.append(f"order {h.order} .")
    for a, b in h.prec_gt:
        lines.append(f"prec {a} > {b} .")
    for a, b in h.prec_eq:
        lines.append(f"prec {a} ~ {b} .")
    for f, s in h.statuses:
        lines.append(f"status {f} {s} .")
    for f, ks in h.filters:
        lines.append(f"filter {f}" + "".join(f" {k}" for k in ks) + " .")
    for r in system.rules:
        lines.append(f"rule {show(r.lhs)} -> {show(r.rhs)} .")
    for e in system.equations:
        lines.append(f"eq {show(e.lhs)} = {show(e.rhs)} .")
    return "\n".join(lines) + "\n"
