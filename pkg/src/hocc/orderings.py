"""Quasi-orderings: multiset/lex/product extensions, precedences, status
orderings with argument filters, and the structural subterm ordering."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import ConfigInvalid, FilterOutOfRange, LengthMismatch
from .system import (
    BaseOrder, RewriteSystem, arity_sup, defined_symbols, split_type,
    strictly_positive_args,
)
from .terms import (
    App, Arrow, Base, Sym, Term, Var, alpha_eq, free_vars_of, spine, type_of,
)


class Cmp(enum.Enum):
    GREATER = ">"
    EQUIVALENT = "="
    NOT_GE = "!"

    @property
    def ge(self) -> bool:
        return self is not Cmp.NOT_GE


Comparator = Callable[[object, object], Cmp]


class Family(str, enum.Enum):
    SUBTERM_MUL = "subterm-mul"
    SUBTERM_STAT = "subterm-stat"
    STRUCT_STAT = "struct-stat"
    ALIENS = "aliens"


# ---------------------------------------------------------------- extensions


def multiset_cmp(base: Comparator, m: Sequence, n: Sequence) -> Cmp:
    """Multiset extension of the quasi-ordering ``base``.

    Equivalent elements are cancelled class by class; the remaining part of
    ``n`` must then be dominated by the remaining part of ``m``.
    """
    rest_m = list(m)
    rest_n = []
    for y in n:
        for i, x in enumerate(rest_m):
            if base(x, y) is Cmp.EQUIVALENT:
                del rest_m[i]
                break
        else:
            rest_n.append(y)
    if not rest_m:
        return Cmp.EQUIVALENT if not rest_n else Cmp.NOT_GE
    for y in rest_n:
        if not any(base(x, y) is Cmp.GREATER for x in rest_m):
            return Cmp.NOT_GE
    return Cmp.GREATER


def lex_cmp(bases: Sequence[Comparator] | Comparator, xs: Sequence, ys: Sequence) -> Cmp:
    if len(xs) != len(ys):
        raise LengthMismatch(f"{len(xs)} vs {len(ys)}")
    for i, (x, y) in enumerate(zip(xs, ys)):
        b = bases if callable(bases) else bases[i]
        c = b(x, y)
        if c is not Cmp.EQUIVALENT:
            return c
    return Cmp.EQUIVALENT


def product_cmp(bases: Sequence[Comparator] | Comparator, xs: Sequence, ys: Sequence) -> Cmp:
    if len(xs) != len(ys):
        raise LengthMismatch(f"{len(xs)} vs {len(ys)}")
    strict = False
    for i, (x, y) in enumerate(zip(xs, ys)):
        b = bases if callable(bases) else bases[i]
        c = b(x, y)
        if c is Cmp.NOT_GE:
            return Cmp.NOT_GE
        strict = strict or c is Cmp.GREATER
    return Cmp.GREATER if strict else Cmp.EQUIVALENT


# ---------------------------------------------------------------- precedence


class Precedence:
    """Well-founded quasi-ordering on symbol names."""

    def __init__(self, gt=(), eq=()):
        parent: dict[str, str] = {}

        def find(x):
            parent.setdefault(x, x)
            while parent[x] != x:
                x = parent[x]
            return x

        for a, b in eq:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        for a, b in gt:
            find(a), find(b)
        self._root = {x: find(x) for x in parent}
        strict = {(self.rep(a), self.rep(b)) for a, b in gt}
        closure = set(strict)
        changed = True
        while changed:
            changed = False
            for a, b in list(closure):
                for c, d in list(closure):
                    if b == c and (a, d) not in closure:
                        closure.add((a, d))
                        changed = True
        if any(a == b for a, b in closure):
            raise ConfigInvalid("precedence is cyclic")
        self._strict = frozenset(closure)
        self.gt_pairs = tuple(gt)
        self.eq_pairs = tuple(eq)

    def rep(self, f: str) -> str:
        return self._root.get(f, f)

    def equivalent(self, f: str, g: str) -> bool:
        return self.rep(f) == self.rep(g)

    def greater(self, f: str, g: str) -> bool:
        return (self.rep(f), self.rep(g)) in self._strict

    def cmp(self, f: str, g: str) -> Cmp:
        if self.equivalent(f, g):
            return Cmp.EQUIVALENT
        return Cmp.GREATER if self.greater(f, g) else Cmp.NOT_GE

    def class_of(self, f: str, universe) -> frozenset[str]:
        return frozenset(g for g in universe if self.equivalent(f, g))

    def __repr__(self) -> str:
        return f"Precedence(gt={list(self.gt_pairs)}, eq={list(self.eq_pairs)})"


# ---------------------------------------------------------------- configuration


@dataclass
class OrderingConfig:
    family: Family = Family.SUBTERM_STAT
    precedence: Precedence = field(default_factory=Precedence)
    filters: dict[str, tuple[int, ...]] = field(default_factory=dict)
    statuses: dict[str, str] = field(default_factory=dict)

    def filter_of(self, system: RewriteSystem, f: str) -> tuple[int, ...]:
        if f in self.filters:
            return tuple(self.filters[f])
        return tuple(range(1, arity_sup(system, f, True) + 1))

    def status_of(self, f: str) -> str:
        return self.statuses.get(f, "lex")


def filter_norm(phi: Sequence[int]) -> int:
    return max([0, *phi])


def apply_filter(phi: Sequence[int], args: Sequence) -> tuple:
    if len(args) < filter_norm(phi):
        raise FilterOutOfRange(f"filter {list(phi)} needs {filter_norm(phi)} arguments, got {len(args)}")
    return tuple(args[k - 1] for k in phi)


def filtered_types(system: RewriteSystem, f: str, phi: Sequence[int]) -> tuple:
    args, _ = split_type(system.signature[f])
    return tuple(args[k - 1] for k in phi)


def is_maximal(head: Sym, args: Sequence) -> bool:
    return len(args) == len(split_type(head.type)[0])


Call = tuple[Sym, tuple[Term, ...]]


def status_cmp(system: RewriteSystem, config: OrderingConfig, base: Comparator,
               c1: Call, c2: Call) -> Cmp:
    """Compare two calls with the precedence, then the status of their class.

    A strict precedence step decides alone.  For the status families a call is
    comparable once it carries enough arguments for its filter; the
    ``subterm-mul`` family compares maximally applied calls only.
    """
    (f, ts), (g, us) = c1, c2
    pc = config.precedence.cmp(f.name, g.name)
    if pc is not Cmp.EQUIVALENT:
        return pc
    if config.family is Family.SUBTERM_MUL:
        if not (is_maximal(f, ts) and is_maximal(g, us)):
            return Cmp.NOT_GE
        return multiset_cmp(base, ts, us)
    x = apply_filter(config.filter_of(system, f.name), ts)
    y = apply_filter(config.filter_of(system, g.name), us)
    if config.status_of(f.name) == "mul":
        return multiset_cmp(base, x, y)
    if len(x) != len(y):
        return Cmp.NOT_GE
    return lex_cmp(base, x, y)


# ---------------------------------------------------------------- structural ordering


def acc_subterms(system: RewriteSystem, base: BaseOrder, allowed, t: Term) -> list[Term]:
    """All ``v`` with ``t ⊳acc⁺ v``: descend through strictly positive arguments
    of fully applied symbols in ``allowed``."""
    out: list[Term] = []
    todo = [t]
    while todo:
        u = todo.pop()
        head, args = spine(u)
        if not isinstance(head, Sym) or head.name not in allowed:
            continue
        if len(args) != len(split_type(head.type)[0]):
            continue
        for i in strictly_positive_args(system, head.name, base):
            out.append(args[i - 1])
            todo.append(args[i - 1])
    return out


def struct_gt(system: RewriteSystem, base: BaseOrder, allowed, lhs_args: Sequence[Term],
              t: Term, u: Term) -> bool:
    """``t >ss u`` relative to the left-hand side arguments ``lhs_args``."""
    tt, tu = type_of(t), type_of(u)
    if not (isinstance(tt, Base) and isinstance(tu, Base) and base.equiv(tt.name, tu.name)):
        return False
    fv = free_vars_of(lhs_args)
    candidates = [u]
    v = u
    while isinstance(v, App) and isinstance(v.arg, Var) and v.arg not in fv:
        v = v.fun
        candidates.append(v)
    subs = acc_subterms(system, base, allowed, t)
    return any(alpha_eq(s, c) for s in subs for c in candidates)


# ---------------------------------------------------------------- config checks


def check_config(system: RewriteSystem, config: OrderingConfig, universe=None) -> list[tuple[str, str]]:
    """Violations of the side conditions on filters, statuses and ranks."""
    out: list[tuple[str, str]] = []
    syms = sorted(universe if universe is not None else defined_symbols(system, True))
    for f in config.filters:
        if f not in system.signature:
            raise ConfigInvalid(f"filter for undeclared symbol {f}")
    for f in config.statuses:
        if config.statuses[f] not in ("lex", "mul"):
            raise ConfigInvalid(f"unknown status {config.statuses[f]!r} for {f}")
    if config.family in (Family.SUBTERM_MUL, Family.ALIENS):
        return out
    for f in syms:
        phi = config.filter_of(system, f)
        if any(k < 1 for k in phi) or filter_norm(phi) > arity_sup(system, f, True):
            out.append((f, f"filter {list(phi)} exceeds {arity_sup(system, f, True)} arguments"))
    seen: set[str] = set()
    for f in syms:
        if f in seen:
            continue
        cls = sorted(g for g in syms if config.precedence.equivalent(f, g))
        seen |= set(cls)
        stats = {config.status_of(g) for g in cls}
        if len(stats) > 1:
            out.append((f, f"mixed statuses in class {cls}"))
            continue
        status = stats.pop()
        if status == "lex" and len({len(config.filter_of(system, g)) for g in cls}) > 1:
            out.append((f, f"lex class {cls} with filters of different lengths"))
        if config.family is Family.STRUCT_STAT:
            out += _rank_violations(system, config, cls, status)
    return out


def _rank_violations(system, config, cls, status):
    out = []
    seqs = []
    for g in cls:
        phi = config.filter_of(system, g)
        try:
            tys = filtered_types(system, g, phi)
        except IndexError:
            continue
        if any(isinstance(t, Arrow) for t in tys):
            out.append((g, "filtered argument of arrow type"))
            return out
        seqs.append(tuple(t.name for t in tys))
    if status == "mul":
        consts = {c for s in seqs for c in s}
        if len(consts) > 1:
            out.append((cls[0], f"multiset class {cls} mixes argument types {sorted(consts)}"))
    elif len(set(seqs)) > 1:
        out.append((cls[0], f"lex class {cls} has differing argument types"))
    return out
