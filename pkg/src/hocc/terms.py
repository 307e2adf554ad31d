"""Simple types and λ-terms with named variables, compared modulo α."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Union

from .errors import BadPosition, IllTyped


# ---------------------------------------------------------------- types


@dataclass(frozen=True, slots=True)
class Base:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Arrow:
    dom: "SimpleType"
    cod: "SimpleType"

    def __str__(self) -> str:
        left = f"({self.dom})" if isinstance(self.dom, Arrow) else str(self.dom)
        return f"{left} -> {self.cod}"


SimpleType = Union[Base, Arrow]


def arrow(*types: SimpleType) -> SimpleType:
    """Right-associated arrow ``T1 -> ... -> Tn``."""
    result = types[-1]
    for t in reversed(types[:-1]):
        result = Arrow(t, result)
    return result


def split_type(ty: SimpleType, n: int | None = None) -> tuple[tuple[SimpleType, ...], SimpleType]:
    """Peel ``n`` argument types (all of them when ``n`` is None)."""
    args = []
    while isinstance(ty, Arrow) and (n is None or len(args) < n):
        args.append(ty.dom)
        ty = ty.cod
    if n is not None and len(args) < n:
        raise IllTyped(f"type {ty} cannot take {n} arguments", "")
    return tuple(args), ty


def type_arity(ty: SimpleType) -> int:
    return len(split_type(ty)[0])


def type_constants(ty: SimpleType) -> set[str]:
    if isinstance(ty, Base):
        return {ty.name}
    return type_constants(ty.dom) | type_constants(ty.cod)


# ---------------------------------------------------------------- terms


class Term:
    __slots__ = ()

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True, slots=True)
class Var(Term):
    name: str
    type: SimpleType

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Sym(Term):
    name: str
    type: SimpleType

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Abs(Term):
    var: Var
    body: Term
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True, slots=True)
class App(Term):
    fun: Term
    arg: Term
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __str__(self) -> str:
        return show(self)


Position = str  # word over {"0", "1"}; "" is the root
Substitution = Mapping[Var, Term]


def apply(head: Term, args) -> Term:
    t = head
    for a in args:
        t = App(t, a)
    return t


def lam(vars_, body: Term) -> Term:
    for v in reversed(list(vars_)):
        body = Abs(v, body)
    return body


def spine(t: Term) -> tuple[Term, tuple[Term, ...]]:
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    return t, tuple(reversed(args))


def size(t: Term) -> int:
    if isinstance(t, App):
        return 1 + size(t.fun) + size(t.arg)
    if isinstance(t, Abs):
        return 1 + size(t.body)
    return 1


# ---------------------------------------------------------------- typing


def type_of(t: Term) -> SimpleType:
    """Type of ``t``; raises :class:`IllTyped` with the offending position."""
    return _type_of(t, "")


def _type_of(t: Term, pos: str) -> SimpleType:
    if isinstance(t, (Var, Sym)):
        return t.type
    cached = t._cache.get("type")
    if cached is not None:
        return cached
    if isinstance(t, Abs):
        ty = Arrow(t.var.type, _type_of(t.body, pos + "0"))
    else:
        f = _type_of(t.fun, pos + "0")
        a = _type_of(t.arg, pos + "1")
        if not isinstance(f, Arrow):
            raise IllTyped(f"{show(t.fun)} : {f} is not a function", pos)
        if f.dom != a:
            raise IllTyped(f"argument {show(t.arg)} : {a} where {f.dom} expected", pos)
        ty = f.cod
    t._cache["type"] = ty
    return ty


def is_well_typed(t: Term) -> bool:
    try:
        type_of(t)
    except IllTyped:
        return False
    return True


# ---------------------------------------------------------------- variables


def free_vars(t: Term) -> frozenset[Var]:
    if isinstance(t, Var):
        return frozenset((t,))
    if isinstance(t, Sym):
        return frozenset()
    cached = t._cache.get("fv")
    if cached is None:
        if isinstance(t, Abs):
            cached = free_vars(t.body) - {t.var}
        else:
            cached = free_vars(t.fun) | free_vars(t.arg)
        t._cache["fv"] = cached
    return cached


def free_vars_of(terms) -> frozenset[Var]:
    out: frozenset[Var] = frozenset()
    for t in terms:
        out |= free_vars(t)
    return out


def all_var_names(t: Term) -> set[str]:
    """Names of every variable occurring in ``t``, free or bound."""
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Sym):
        return set()
    if isinstance(t, Abs):
        return {t.var.name} | all_var_names(t.body)
    return all_var_names(t.fun) | all_var_names(t.arg)


def bound_vars_at(t: Term, p: Position) -> frozenset[Var]:
    """Variables bound above position ``p`` in this representative of ``t``."""
    out = set()
    for step in p:
        if isinstance(t, Abs) and step == "0":
            out.add(t.var)
            t = t.body
        elif isinstance(t, App):
            t = t.fun if step == "0" else t.arg
        else:
            raise BadPosition(p)
    return frozenset(out)


_SUFFIX = re.compile(r"\d+$")


def fresh_name(base: str, avoid) -> str:
    """Smallest numeric suffix on ``base`` that is not in ``avoid``."""
    stem = _SUFFIX.sub("", base) or base
    k = 1
    while f"{stem}{k}" in avoid:
        k += 1
    return f"{stem}{k}"


def fresh_var(v: Var, avoid) -> Var:
    return Var(fresh_name(v.name, avoid), v.type)


# ---------------------------------------------------------------- alpha


def alpha_key(t: Term):
    """Hashable key such that ``alpha_key(t) == alpha_key(u)`` iff t =α u."""
    if isinstance(t, Var):
        return ("v", t.name, t.type)
    if isinstance(t, Sym):
        return ("s", t.name)
    cached = t._cache.get("key")
    if cached is None:
        cached = _key(t, {}, 0)
        t._cache["key"] = cached
    return cached


def _key(t: Term, env: dict, depth: int):
    if isinstance(t, Var):
        lvl = env.get(t)
        return ("v", t.name, t.type) if lvl is None else ("b", depth - lvl)
    if isinstance(t, Sym):
        return ("s", t.name)
    if isinstance(t, App):
        if not env:
            return ("a", alpha_key(t.fun), alpha_key(t.arg))
        return ("a", _key(t.fun, env, depth), _key(t.arg, env, depth))
    inner = dict(env)
    inner[t.var] = depth + 1
    return ("l", t.var.type, _key(t.body, inner, depth + 1))


def alpha_eq(t: Term, u: Term) -> bool:
    return t is u or alpha_key(t) == alpha_key(u)


# ---------------------------------------------------------------- substitution


def substitute(t: Term, sigma: Substitution) -> Term:
    """Capture-avoiding simultaneous substitution."""
    s = {x: u for x, u in sigma.items() if u != x}
    if not s:
        return t
    return _subst(t, s)


def _subst(t: Term, s: dict) -> Term:
    if isinstance(t, Var):
        return s.get(t, t)
    if isinstance(t, Sym):
        return t
    fv = free_vars(t)
    live = {x: u for x, u in s.items() if x in fv}
    if not live:
        return t
    if isinstance(t, App):
        return App(_subst(t.fun, live), _subst(t.arg, live))
    x = t.var
    range_fv = free_vars_of(live.values())
    if x in range_fv or any(v.name == x.name for v in range_fv):
        avoid = {v.name for v in range_fv} | all_var_names(t.body) | {v.name for v in live}
        x2 = fresh_var(x, avoid)
        live = dict(live)
        live[x] = x2
        return Abs(x2, _subst(t.body, live))
    return Abs(x, _subst(t.body, live))


def compose(s1: Substitution, s2: Substitution) -> dict[Var, Term]:
    """``t (compose s1 s2) == (t s1) s2``."""
    out = {x: substitute(u, s2) for x, u in s1.items()}
    for x, u in s2.items():
        out.setdefault(x, u)
    return out


def rename_binder(t: Abs, new: Var) -> Abs:
    return Abs(new, substitute(t.body, {t.var: new}))


# ---------------------------------------------------------------- positions


def positions(t: Term) -> list[Position]:
    """All positions in lexicographic (pre-order) order."""
    out: list[Position] = []

    def walk(u: Term, p: str) -> None:
        out.append(p)
        if isinstance(u, App):
            walk(u.fun, p + "0")
            walk(u.arg, p + "1")
        elif isinstance(u, Abs):
            walk(u.body, p + "0")

    walk(t, "")
    return out


def subterm_at(t: Term, p: Position) -> Term:
    for step in p:
        if isinstance(t, App) and step in "01":
            t = t.fun if step == "0" else t.arg
        elif isinstance(t, Abs) and step == "0":
            t = t.body
        else:
            raise BadPosition(p)
    return t


def replace_at(t: Term, p: Position, u: Term, avoid_capture: bool = False) -> Term:
    """Raw replacement ``t[u]_p``.

    Variables of ``u`` bound above ``p`` get captured, which is what rewriting
    under a binder needs.  With ``avoid_capture`` the enclosing binders are
    renamed away from ``FV(u)`` first.
    """
    if not p:
        return u
    if isinstance(t, App):
        if p[0] == "0":
            return App(replace_at(t.fun, p[1:], u, avoid_capture), t.arg)
        if p[0] == "1":
            return App(t.fun, replace_at(t.arg, p[1:], u, avoid_capture))
    elif isinstance(t, Abs) and p[0] == "0":
        if avoid_capture and t.var in free_vars(u):
            avoid = all_var_names(t) | {v.name for v in free_vars(u)}
            t = rename_binder(t, fresh_var(t.var, avoid))
        return Abs(t.var, replace_at(t.body, p[1:], u, avoid_capture))
    raise BadPosition(p)


def stable_subterms(t: Term) -> Iterator[tuple[Position, Term]]:
    """Occurrences ``(p, t|p)`` whose free variables are not bound above ``p``."""

    def walk(u: Term, p: str, bound: frozenset) -> Iterator[tuple[Position, Term]]:
        if not (free_vars(u) & bound):
            yield p, u
        if isinstance(u, App):
            yield from walk(u.fun, p + "0", bound)
            yield from walk(u.arg, p + "1", bound)
        elif isinstance(u, Abs):
            yield from walk(u.body, p + "0", bound | {u.var})

    yield from walk(t, "", frozenset())


def stable_subterm_ge(t: Term, u: Term) -> bool:
    """``t ⊵ss u``."""
    k = alpha_key(u)
    return any(alpha_key(s) == k for _, s in stable_subterms(t))


def stable_subterm_gt(t: Term, u: Term) -> bool:
    """``t ⊳ss u``."""
    k = alpha_key(u)
    return any(p and alpha_key(s) == k for p, s in stable_subterms(t))


# ---------------------------------------------------------------- shape predicates


def is_linear(t: Term) -> bool:
    seen: set[Var] = set()

    def walk(u: Term, bound: frozenset) -> bool:
        if isinstance(u, Var):
            if u in bound:
                return True
            if u in seen:
                return False
            seen.add(u)
            return True
        if isinstance(u, App):
            return walk(u.fun, bound) and walk(u.arg, bound)
        if isinstance(u, Abs):
            return walk(u.body, bound | {u.var})
        return True

    return walk(t, frozenset())


def is_algebraic(t: Term) -> bool:
    """No abstraction and no variable applied to arguments."""
    if isinstance(t, Abs):
        return False
    if isinstance(t, App):
        head, args = spine(t)
        return isinstance(head, Sym) and all(is_algebraic(a) for a in args)
    return True


def is_eta_long(t: Term) -> bool:
    if isinstance(t, Abs):
        return is_eta_long(t.body)
    head, args = spine(t)
    if isinstance(head, (Var, Sym)):
        if len(args) != type_arity(head.type):
            return False
    elif not is_eta_long(head):
        return False
    return all(is_eta_long(a) for a in args)


def symbols_of(t: Term) -> set[str]:
    if isinstance(t, Sym):
        return {t.name}
    if isinstance(t, Var):
        return set()
    if isinstance(t, Abs):
        return symbols_of(t.body)
    return symbols_of(t.fun) | symbols_of(t.arg)


def variables_of(t: Term) -> set[Var]:
    """Every variable object occurring in ``t``, binders included."""
    if isinstance(t, Var):
        return {t}
    if isinstance(t, Sym):
        return set()
    if isinstance(t, Abs):
        return {t.var} | variables_of(t.body)
    return variables_of(t.fun) | variables_of(t.arg)


# ---------------------------------------------------------------- printing


def show(t: Term) -> str:
    if isinstance(t, (Var, Sym)):
        return t.name
    if isinstance(t, Abs):
        return f"\\{t.var.name}. {show(t.body)}"
    head, args = spine(t)
    parts = [_show_atom(head)] + [_show_atom(a) for a in args]
    return " ".join(parts)


def _show_atom(t: Term) -> str:
    if isinstance(t, (Var, Sym)):
        return t.name
    return f"({show(t)})"
