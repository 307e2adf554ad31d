"""β, η and β₀ steps, first-order matching modulo α, and rule rewriting."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from .errors import FuelExhausted
from .terms import (
    Abs, App, Position, Sym, Term, Var, alpha_eq, alpha_key, free_vars,
    replace_at, show, substitute, subterm_at, type_of,
)


@dataclass(frozen=True)
class TraceStep:
    kind: str  # "beta", "eta", "beta0", or a rule id
    position: Position
    result: Term

    def __str__(self) -> str:
        return f"{self.kind}@{self.position or 'ε'}: {show(self.result)}"


Contract = Callable[[Term], Iterable[tuple[str, Term]]]


def _everywhere(t: Term, contract: Contract, pos: str = "") -> Iterator[TraceStep]:
    """All one-step contractions of ``t``, positions in lexicographic order."""
    for kind, c in contract(t):
        yield TraceStep(kind, pos, c)
    if isinstance(t, App):
        for s in _everywhere(t.fun, contract, pos + "0"):
            yield TraceStep(s.kind, s.position, App(s.result, t.arg))
        for s in _everywhere(t.arg, contract, pos + "1"):
            yield TraceStep(s.kind, s.position, App(t.fun, s.result))
    elif isinstance(t, Abs):
        for s in _everywhere(t.body, contract, pos + "0"):
            yield TraceStep(s.kind, s.position, Abs(t.var, s.result))


def _beta(t: Term):
    if isinstance(t, App) and isinstance(t.fun, Abs):
        yield "beta", substitute(t.fun.body, {t.fun.var: t.arg})


def _beta0(t: Term):
    if (isinstance(t, App) and isinstance(t.fun, Abs) and isinstance(t.arg, Var)
            and t.arg.type == t.fun.var.type):
        yield "beta0", substitute(t.fun.body, {t.fun.var: t.arg})


def _eta(t: Term):
    if (isinstance(t, Abs) and isinstance(t.body, App) and t.body.arg == t.var
            and t.var not in free_vars(t.body.fun)):
        yield "eta", t.body.fun


def beta_reducts(t: Term) -> list[TraceStep]:
    return list(_everywhere(t, _beta))


def eta_reducts(t: Term) -> list[TraceStep]:
    return list(_everywhere(t, _eta))


def beta0_reducts(t: Term) -> list[TraceStep]:
    return list(_everywhere(t, _beta0))


def eta_normal_form(t: Term) -> Term:
    if isinstance(t, App):
        return App(eta_normal_form(t.fun), eta_normal_form(t.arg))
    if isinstance(t, Abs):
        body = eta_normal_form(t.body)
        if isinstance(body, App) and body.arg == t.var and t.var not in free_vars(body.fun):
            return body.fun
        return t if body is t.body else Abs(t.var, body)
    return t


def eta_eq(t: Term, u: Term) -> bool:
    return type_of(t) == type_of(u) and alpha_eq(eta_normal_form(t), eta_normal_form(u))


def beta_normal_form(t: Term, fuel: int = 10_000) -> Term:
    for _ in range(fuel):
        steps = beta_reducts(t)
        if not steps:
            return t
        t = steps[0].result
    raise FuelExhausted(t, fuel)


# ---------------------------------------------------------------- matching


def match_alpha(pattern: Term, subject: Term, protected=frozenset()) -> dict[Var, Term] | None:
    """σ with ``pattern σ =α subject``; variables in ``protected`` are rigid."""
    sigma: dict[Var, Term] = {}
    if _match(pattern, subject, sigma, {}, {}, 0, protected):
        return sigma
    return None


def _match(p: Term, s: Term, sigma: dict, penv: dict, senv: dict, depth: int, protected) -> bool:
    if isinstance(p, Var):
        if p in penv:
            return isinstance(s, Var) and senv.get(s) == penv[p]
        if p in protected:
            return s == p and s not in senv
        if senv and free_vars(s) & senv.keys():
            return False
        if type_of(s) != p.type:
            return False
        bound = sigma.get(p)
        if bound is None:
            sigma[p] = s
            return True
        return alpha_eq(bound, s)
    if isinstance(p, Sym):
        return isinstance(s, Sym) and s.name == p.name
    if isinstance(p, App):
        return (isinstance(s, App)
                and _match(p.fun, s.fun, sigma, penv, senv, depth, protected)
                and _match(p.arg, s.arg, sigma, penv, senv, depth, protected))
    if isinstance(p, Abs):
        if not isinstance(s, Abs) or s.var.type != p.var.type:
            return False
        penv2 = dict(penv)
        penv2[p.var] = depth
        senv2 = dict(senv)
        senv2[s.var] = depth
        return _match(p.body, s.body, sigma, penv2, senv2, depth + 1, protected)
    return False


# ---------------------------------------------------------------- rewriting


def _rule_contract(rules) -> Contract:
    def contract(t: Term):
        for rule in rules:
            sigma = match_alpha(rule.lhs, t)
            if sigma is not None:
                yield rule.id, substitute(rule.rhs, sigma)
    return contract


def rewrite_reducts(rules, t: Term) -> list[TraceStep]:
    """One-step rule reducts; positions lexicographic, rules in declaration order."""
    return list(_everywhere(t, _rule_contract(rules)))


def rewrite_at(rules, t: Term, position: Position, rule_id: str) -> list[Term]:
    sub = subterm_at(t, position)
    out = []
    for rule in rules:
        if rule.id != rule_id:
            continue
        sigma = match_alpha(rule.lhs, sub)
        if sigma is not None:
            out.append(replace_at(t, position, substitute(rule.rhs, sigma)))
    return out


def one_step(rules, t: Term) -> list[TraceStep]:
    """β and rule steps together, ordered by position then β before rules."""
    rc = _rule_contract(rules)

    def contract(u: Term):
        yield from _beta(u)
        yield from rc(u)

    return list(_everywhere(t, contract))


def normalize(rules, t: Term, fuel: int = 10_000, strategy: str = "leftmost",
              trace: list | None = None) -> Term:
    """Reduce with β ∪ rules until normal.

    ``leftmost`` contracts the leftmost-outermost redex, ``full`` the
    leftmost-innermost one.  Raises :class:`FuelExhausted`.
    """
    if strategy not in ("leftmost", "full"):
        raise ValueError(f"unknown strategy {strategy!r}")
    rc = _rule_contract(rules)

    def contract(u: Term):
        yield from _beta(u)
        yield from rc(u)

    for _ in range(fuel):
        if strategy == "leftmost":
            step = next(_everywhere(t, contract), None)
        else:
            step = _innermost(t, contract)
        if step is None:
            return t
        if trace is not None:
            trace.append(step)
        t = step.result
    if next(_everywhere(t, contract), None) is None:
        return t
    raise FuelExhausted(t, fuel)


def _innermost(t: Term, contract: Contract, pos: str = "") -> TraceStep | None:
    if isinstance(t, App):
        s = _innermost(t.fun, contract, pos + "0")
        if s is not None:
            return TraceStep(s.kind, s.position, App(s.result, t.arg))
        s = _innermost(t.arg, contract, pos + "1")
        if s is not None:
            return TraceStep(s.kind, s.position, App(t.fun, s.result))
    elif isinstance(t, Abs):
        s = _innermost(t.body, contract, pos + "0")
        if s is not None:
            return TraceStep(s.kind, s.position, Abs(t.var, s.result))
    for kind, c in contract(t):
        return TraceStep(kind, pos, c)
    return None


def reachable(step: Callable[[Term], Iterable[Term]], t: Term, depth: int, limit: int = 500) -> list[Term]:
    """Terms reachable in 1..depth steps (breadth first, deduplicated modulo α)."""
    seen = {alpha_key(t)}
    frontier = [t]
    out: list[Term] = []
    for _ in range(depth):
        nxt = []
        for u in frontier:
            for v in step(u):
                k = alpha_key(v)
                if k in seen:
                    continue
                seen.add(k)
                out.append(v)
                nxt.append(v)
                if len(out) >= limit:
                    return out
        if not nxt:
            break
        frontier = nxt
    return out
