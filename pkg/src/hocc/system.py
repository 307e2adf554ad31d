"""Rewrite systems and their static analyses: defined and matched symbols,
type positivity, accessible arguments, base-type orderings, basic types."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .errors import IllTyped, NotBaseCodomain, SystemInvalid, Unsatisfiable
from .terms import (
    Arrow, Base, SimpleType, Sym, Term, Var, free_vars, spine, split_type,
    symbols_of, type_of, variables_of,
)


@dataclass(frozen=True)
class Rule:
    lhs: Term
    rhs: Term
    id: str

    @property
    def head(self) -> Term:
        return spine(self.lhs)[0]

    @property
    def args(self) -> tuple[Term, ...]:
        return spine(self.lhs)[1]

    def __str__(self) -> str:
        return f"{self.lhs} -> {self.rhs}"


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term
    id: str

    def reversed(self) -> "Equation":
        return Equation(self.rhs, self.lhs, self.id + "~")

    def __str__(self) -> str:
        return f"{self.lhs} = {self.rhs}"


@dataclass(frozen=True)
class Hints:
    """Ordering and mode pragmas read from a problem file."""

    prec_gt: tuple[tuple[str, str], ...] = ()
    prec_eq: tuple[tuple[str, str], ...] = ()
    statuses: tuple[tuple[str, str], ...] = ()
    filters: tuple[tuple[str, tuple[int, ...]], ...] = ()
    mode: str = "plain"
    interp: str | None = None
    order: str | None = None


@dataclass(frozen=True)
class RewriteSystem:
    sorts: tuple[str, ...]
    symbols: tuple[tuple[str, SimpleType], ...]
    rules: tuple[Rule, ...] = ()
    equations: tuple[Equation, ...] = ()
    constructor_hints: frozenset[str] = frozenset()
    variables: tuple[tuple[str, SimpleType], ...] = ()
    hints: Hints = field(default_factory=Hints)

    @cached_property
    def signature(self) -> dict[str, SimpleType]:
        return dict(self.symbols)

    def sym(self, name: str) -> Sym:
        return Sym(name, self.signature[name])

    def var(self, name: str) -> Var:
        return Var(name, dict(self.variables)[name])

    @property
    def mode(self) -> str:
        return self.hints.mode

    def with_rules(self, rules) -> "RewriteSystem":
        return RewriteSystem(self.sorts, self.symbols, tuple(rules), self.equations,
                             self.constructor_hints, self.variables, self.hints)

    def with_hints(self, **kw) -> "RewriteSystem":
        from dataclasses import replace
        return RewriteSystem(self.sorts, self.symbols, self.rules, self.equations,
                             self.constructor_hints, self.variables, replace(self.hints, **kw))

    def symbol_type(self, name: str) -> SimpleType:
        return self.signature[name]


# ---------------------------------------------------------------- validation


def validate(system: RewriteSystem) -> RewriteSystem:
    """Check well-formedness; raises :class:`SystemInvalid` listing every problem."""
    problems: list[tuple[str, str]] = []
    sorts = set(system.sorts)
    for name, ty in system.symbols:
        for c in _constants(ty):
            if c not in sorts:
                problems.append(("UndeclaredSymbol", f"sort {c} in type of {name}"))
    for rule in system.rules:
        problems += _check_pair(system, rule.lhs, rule.rhs, rule.id, is_rule=True)
        head = rule.head
        if isinstance(head, Sym) and head.name in system.constructor_hints:
            problems.append(("BadLhsShape", f"{rule.id}: constructor {head.name} heads a rule"))
    for eq in system.equations:
        problems += _check_pair(system, eq.lhs, eq.rhs, eq.id, is_rule=False)
    if problems:
        raise SystemInvalid(problems)
    return system


def _constants(ty: SimpleType) -> set[str]:
    if isinstance(ty, Base):
        return {ty.name}
    return _constants(ty.dom) | _constants(ty.cod)


def _check_pair(system, lhs, rhs, ident, is_rule):
    out = []
    for t in (lhs, rhs):
        for s in symbols_of(t):
            if s not in system.signature:
                out.append(("UndeclaredSymbol", f"{ident}: {s}"))
    if out:
        return out
    try:
        tl, tr = type_of(lhs), type_of(rhs)
        if tl != tr:
            out.append(("IllTyped", f"{ident}: sides have types {tl} and {tr}"))
    except IllTyped as e:
        out.append(("IllTyped", f"{ident}: {e}"))
    if is_rule:
        head = spine(lhs)[0]
        if not isinstance(head, Sym):
            out.append(("BadLhsShape", f"{ident}: left-hand side is not headed by a symbol"))
        if not free_vars(rhs) <= free_vars(lhs):
            extra = ", ".join(sorted(v.name for v in free_vars(rhs) - free_vars(lhs)))
            out.append(("FreeVarEscape", f"{ident}: {extra}"))
    return out


# ---------------------------------------------------------------- symbols


def _pairs(system: RewriteSystem, include_equations: bool):
    pairs = [(r.lhs, r.rhs) for r in system.rules]
    if include_equations:
        for e in system.equations:
            pairs += [(e.lhs, e.rhs), (e.rhs, e.lhs)]
    return pairs


def defined_symbols(system: RewriteSystem, include_equations: bool = False) -> frozenset[str]:
    out = set()
    for lhs, _ in _pairs(system, include_equations):
        head = spine(lhs)[0]
        if isinstance(head, Sym):
            out.add(head.name)
    return frozenset(out)


def undefined_symbols(system: RewriteSystem, include_equations: bool = False) -> frozenset[str]:
    d = defined_symbols(system, include_equations)
    return frozenset(n for n, _ in system.symbols if n not in d)


def arity_sup(system: RewriteSystem, f: str, include_equations: bool = False) -> int:
    """Largest number of arguments ``f`` takes in a left-hand side (0 if none)."""
    n = 0
    for lhs, _ in _pairs(system, include_equations):
        head, args = spine(lhs)
        if isinstance(head, Sym) and head.name == f:
            n = max(n, len(args))
    return n


def lhs_arg_symbols(system: RewriteSystem, include_equations: bool = False) -> frozenset[str]:
    out = set()
    for lhs, _ in _pairs(system, include_equations):
        for a in spine(lhs)[1]:
            out |= symbols_of(a)
    return frozenset(out)


# ---------------------------------------------------------------- type positions


def positive_positions(ty: SimpleType) -> frozenset[str]:
    if isinstance(ty, Base):
        return frozenset({""})
    return frozenset({"0" + p for p in negative_positions(ty.dom)}
                     | {"1" + p for p in positive_positions(ty.cod)})


def negative_positions(ty: SimpleType) -> frozenset[str]:
    if isinstance(ty, Base):
        return frozenset()
    return frozenset({"0" + p for p in positive_positions(ty.dom)}
                     | {"1" + p for p in negative_positions(ty.cod)})


def const_positions(b: str, ty: SimpleType) -> frozenset[str]:
    if isinstance(ty, Base):
        return frozenset({""}) if ty.name == b else frozenset()
    return frozenset({"0" + p for p in const_positions(b, ty.dom)}
                     | {"1" + p for p in const_positions(b, ty.cod)})


# ---------------------------------------------------------------- base orders


@dataclass(frozen=True)
class BaseOrder:
    """Quasi-ordering on type constants: equivalence classes plus a strict part."""

    class_of: tuple[tuple[str, int], ...]
    strict: frozenset[tuple[int, int]]  # (a, b): class a is above class b

    @cached_property
    def _cls(self) -> dict[str, int]:
        return dict(self.class_of)

    def equiv(self, b: str, c: str) -> bool:
        return b == c or (b in self._cls and self._cls.get(b) == self._cls.get(c))

    def lt(self, c: str, b: str) -> bool:
        """``c <_B b``."""
        if c not in self._cls or b not in self._cls:
            return False
        return (self._cls[b], self._cls[c]) in self.strict

    def classes(self) -> list[frozenset[str]]:
        groups: dict[int, set[str]] = {}
        for s, k in self.class_of:
            groups.setdefault(k, set()).add(s)
        return [frozenset(groups[k]) for k in sorted(groups)]

    def class_members(self, b: str) -> frozenset[str]:
        k = self._cls.get(b)
        return frozenset(s for s, j in self.class_of if j == k) if k is not None else frozenset({b})

    @staticmethod
    def from_relation(sorts, gt=(), eq=()) -> "BaseOrder":
        """Build from explicit pairs; strict part is transitively closed."""
        parent = {s: s for s in sorts}

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        for a, b in eq:
            parent[find(a)] = find(b)
        roots = sorted({find(s) for s in sorts})
        idx = {r: i for i, r in enumerate(roots)}
        cls = {s: idx[find(s)] for s in sorts}
        strict = {(cls[a], cls[b]) for a, b in gt}
        strict = _transitive(strict)
        if any(a == b for a, b in strict):
            raise ValueError("base order is cyclic")
        return BaseOrder(tuple(sorted(cls.items())), frozenset(strict))


def _transitive(pairs):
    closure = set(pairs)
    changed = True
    while changed:
        changed = False
        for a, b in list(closure):
            for c, d in list(closure):
                if b == c and (a, d) not in closure:
                    closure.add((a, d))
                    changed = True
    return closure


def _constructor_like(system: RewriteSystem, include_equations: bool) -> list[str]:
    """Symbols whose argument types shape the interpretation of their codomain."""
    und = undefined_symbols(system, include_equations)
    return sorted(und)


def dependency_base_order(system: RewriteSystem, include_equations: bool = False) -> BaseOrder:
    """SCCs of the dependency graph (B depends on C when C occurs in an argument
    type of an undefined symbol with codomain B), ordered by reachability."""
    sorts = list(system.sorts)
    reach = {s: set() for s in sorts}
    for name in _constructor_like(system, include_equations):
        args, cod = split_type(system.signature[name])
        for a in args:
            reach[cod.name] |= _constants(a)
    changed = True
    while changed:
        changed = False
        for s in sorts:
            extra = set()
            for c in reach[s]:
                extra |= reach.get(c, set())
            if not extra <= reach[s]:
                reach[s] |= extra
                changed = True
    eq = [(a, b) for a in sorts for b in sorts if a != b and b in reach[a] and a in reach[b]]
    gt = [(a, b) for a in sorts for b in sorts if b in reach[a] and a not in reach[b]]
    return BaseOrder.from_relation(sorts, gt, eq)


def standard_inductive_violations(system: RewriteSystem, base: BaseOrder,
                                  include_equations: bool = False) -> list[tuple[str, int]]:
    out = []
    for name in _constructor_like(system, include_equations):
        args, cod = split_type(system.signature[name])
        for i, t in enumerate(args, 1):
            if not _arg_ok(base, cod.name, t):
                out.append((name, i))
    return out


def _arg_ok(base: BaseOrder, b: str, t: SimpleType) -> bool:
    pos = positive_positions(t)
    for c in _constants(t):
        if base.lt(c, b):
            continue
        if base.equiv(c, b) and const_positions(c, t) <= pos:
            continue
        return False
    return True


def is_standard_inductive(system: RewriteSystem, base: BaseOrder,
                          include_equations: bool = False) -> bool:
    return not standard_inductive_violations(system, base, include_equations)


def infer_base_order(system: RewriteSystem, include_equations: bool = False) -> BaseOrder:
    """Finest base order making the system standard inductive.

    Every dependency forces ``C ≤ B``, so the SCC order is the only candidate
    up to adding unrelated strict pairs; if it fails, none succeeds.
    """
    base = dependency_base_order(system, include_equations)
    bad = standard_inductive_violations(system, base, include_equations)
    if bad:
        raise Unsatisfiable(*bad[0])
    return base


# ---------------------------------------------------------------- accessibility


def accessible_args(system: RewriteSystem, f: str, base: BaseOrder,
                    n_args: int | None = None) -> frozenset[int]:
    """1-based indices of the accessible arguments of ``f``."""
    ty = system.signature[f]
    args, cod = split_type(ty, n_args)
    if isinstance(cod, Arrow):
        raise NotBaseCodomain(f"{f} applied to {n_args} arguments has type {cod}")
    return frozenset(i for i, t in enumerate(args, 1) if _arg_ok(base, cod.name, t))


def matched_symbols(system: RewriteSystem, base: BaseOrder | None = None,
                    include_equations: bool = False) -> frozenset[str]:
    """Symbols occurring in left-hand-side arguments that have an accessible argument."""
    if base is None:
        base = dependency_base_order(system, include_equations)
    return frozenset(f for f in lhs_arg_symbols(system, include_equations)
                     if accessible_args(system, f, base))


def strictly_positive_args(system: RewriteSystem, f: str, base: BaseOrder) -> frozenset[int]:
    """Indices i with ``T_i = U⃗ ⇒ C``, ``C ≃ B`` and every constant of ``U⃗`` below ``B``."""
    args, cod = split_type(system.signature[f])
    out = set()
    for i, t in enumerate(args, 1):
        us, c = split_type(t)
        if base.equiv(c.name, cod.name) and all(
                base.lt(d, cod.name) for u in us for d in _constants(u)):
            out.add(i)
    return frozenset(out)


def is_basic_class(system: RewriteSystem, base: BaseOrder, b: str,
                   include_equations: bool = False, _memo=None) -> bool:
    memo = {} if _memo is None else _memo
    members = base.class_members(b)
    key = min(members)
    if key in memo:
        return memo[key]
    memo[key] = True  # cycles cannot arise through strictly smaller classes
    ok = True
    for f in matched_symbols(system, base, include_equations):
        args, cod = split_type(system.signature[f])
        if cod.name not in members:
            continue
        for i in accessible_args(system, f, base):
            t = args[i - 1]
            if isinstance(t, Arrow):
                ok = False
            elif t.name in members:
                continue
            elif base.lt(t.name, cod.name) and is_basic_class(system, base, t.name, include_equations, memo):
                continue
            else:
                ok = False
            if not ok:
                break
        if not ok:
            break
    memo[key] = ok
    return ok


def basic_sorts(system: RewriteSystem, base: BaseOrder, include_equations: bool = False) -> frozenset[str]:
    memo: dict = {}
    return frozenset(s for s in system.sorts if is_basic_class(system, base, s, include_equations, memo))


def call_graph_precedence(system: RewriteSystem) -> tuple[list[tuple[str, str]], list[tuple[str, str]]]:
    """(strict, equivalent) pairs: ``f ≥ g`` when g occurs in the right-hand side
    of a rule for f; strongly connected symbols are equivalent."""
    defined = defined_symbols(system, True)
    edges: dict[str, set[str]] = {f: set() for f in defined}
    for lhs, rhs in _pairs(system, True):
        f = spine(lhs)[0].name
        edges[f] |= symbols_of(rhs) & defined
    reach = {f: set(edges[f]) for f in defined}
    changed = True
    while changed:
        changed = False
        for f in defined:
            extra = set()
            for g in reach[f]:
                extra |= reach[g]
            if not extra <= reach[f]:
                reach[f] |= extra
                changed = True
    strict = sorted((f, g) for f in defined for g in reach[f] if f not in reach[g])
    equiv = sorted((f, g) for f in defined for g in reach[f] if f in reach[g] and f < g)
    return strict, equiv


def collect_variables(system: RewriteSystem) -> dict[str, SimpleType]:
    out = dict(system.variables)
    for r in system.rules:
        for v in variables_of(r.lhs) | variables_of(r.rhs):
            out.setdefault(v.name, v.type)
    for e in system.equations:
        for v in variables_of(e.lhs) | variables_of(e.rhs):
            out.setdefault(v.name, v.type)
    return out
