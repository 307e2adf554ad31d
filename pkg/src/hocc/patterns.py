"""Higher-order patterns: recognition, leaf positions, valuations, matching
modulo βη, β/η-completion and rewriting with matching modulo βη."""

from __future__ import annotations

from typing import Sequence

from .errors import InvalidValuation, NotAPattern
from .reduction import TraceStep, _everywhere, eta_eq, eta_normal_form
from .system import Rule
from .terms import (
    Abs, App, Arrow, Sym, Term, Var, all_var_names, alpha_eq, alpha_key, apply,
    free_vars, fresh_var, lam, spine, substitute, type_of, variables_of,
)


# ---------------------------------------------------------------- patterns


def pattern_violation(t: Term) -> str | None:
    """Position where ``t`` stops being a pattern, or None.

    A free variable may head an application only when its arguments
    η-reduce to pairwise distinct variables bound above it; a bound variable
    may not be applied at all.
    """
    return _violation(t, "", frozenset())


def _violation(t: Term, pos: str, bound: frozenset) -> str | None:
    if isinstance(t, Abs):
        return _violation(t.body, pos + "0", bound | {t.var})
    head, args = spine(t)
    n = len(args)
    arg_pos = [pos + "0" * (n - i - 1) + "1" for i in range(n)]
    if isinstance(head, Sym):
        for a, p in zip(args, arg_pos):
            bad = _violation(a, p, bound)
            if bad is not None:
                return bad
        return None
    if isinstance(head, Var):
        if head in bound:
            return None if n == 0 else pos
        seen = set()
        for a, p in zip(args, arg_pos):
            v = eta_normal_form(a)
            if not isinstance(v, Var) or v not in bound or v in seen:
                return p
            seen.add(v)
        return None
    return pos


def is_pattern(t: Term) -> bool:
    return pattern_violation(t) is None


def require_pattern(t: Term) -> None:
    bad = pattern_violation(t)
    if bad is not None:
        raise NotAPattern(bad)


def leaf_positions(t: Term) -> list[str]:
    if isinstance(t, Abs):
        return ["0" + p for p in leaf_positions(t.body)]
    head, args = spine(t)
    if isinstance(head, Sym):
        n = len(args)
        out = []
        for i, a in enumerate(args):
            prefix = "0" * (n - i - 1) + "1"
            out += [prefix + p for p in leaf_positions(a)]
        return out
    return [""]


# ---------------------------------------------------------------- valuation


def _peel(t: Term, n: int):
    vs = []
    while len(vs) < n and isinstance(t, Abs):
        vs.append(t.var)
        t = t.body
    return vs, t


def valuation(sigma, t: Term) -> Term:
    """σ̂(t) on a pattern: leaves ``x t⃗`` are replaced by ``a{y⃗ ↦ t⃗}`` where
    ``xσ = λy⃗.a``.  Raises :class:`InvalidValuation` when σ lacks the binders."""
    return _val(dict(sigma), t)


def _val(sigma: dict, t: Term) -> Term:
    if isinstance(t, Abs):
        x = t.var
        rng = set()
        for y, u in sigma.items():
            rng |= {v.name for v in free_vars(u)}
        if x in sigma or x.name in rng:
            avoid = rng | all_var_names(t) | {v.name for v in sigma}
            x2 = fresh_var(x, avoid)
            body = substitute(t.body, {x: x2})
            return Abs(x2, _val(sigma, body))
        return Abs(x, _val(sigma, t.body))
    head, args = spine(t)
    if isinstance(head, Sym):
        return apply(head, [_val(sigma, a) for a in args])
    if isinstance(head, Var):
        if head not in sigma:
            if args:
                raise InvalidValuation(f"{head.name} is applied but not instantiated")
            return head
        vs, a = _peel(sigma[head], len(args))
        if len(vs) < len(args) or len(set(vs)) < len(vs):
            raise InvalidValuation(f"{head.name} needs {len(args)} leading abstractions")
        return substitute(a, dict(zip(vs, args)))
    raise InvalidValuation(f"no valuation clause for {t}")


# ---------------------------------------------------------------- matching


def match_modulo_betaeta(pattern: Term, subject: Term) -> dict[Var, Term] | None:
    """σ with ``subject =η σ̂(pattern)``, or None."""
    require_pattern(pattern)
    if type_of(pattern) != type_of(subject):
        return None
    sigma: dict[Var, Term] = {}
    avoid = {v.name for v in variables_of(pattern) | variables_of(subject)}
    if not _hmatch(pattern, eta_normal_form(subject), {}, sigma, avoid):
        return None
    try:
        if not eta_eq(subject, valuation(sigma, pattern)):
            return None
    except InvalidValuation:
        return None
    return sigma


def _hmatch(p: Term, s: Term, env: dict, sigma: dict, avoid: set) -> bool:
    """``env`` maps pattern-bound variables to subject-bound variables."""
    if isinstance(p, Abs):
        if isinstance(s, Abs):
            env2 = dict(env)
            env2[p.var] = s.var
            return _hmatch(p.body, s.body, env2, sigma, avoid)
        y = fresh_var(p.var, avoid)
        avoid.add(y.name)
        env2 = dict(env)
        env2[p.var] = y
        return _hmatch(p.body, App(s, y), env2, sigma, avoid)
    head, args = spine(p)
    if isinstance(head, Var) and head in env:
        return isinstance(s, Var) and s == env[head]
    if isinstance(head, Var):
        ys = [env[eta_normal_form(a)] for a in args]
        bound_s = set(env.values())
        if (free_vars(s) & bound_s) - set(ys):
            return False
        cand = lam(ys, s)
        prev = sigma.get(head)
        if prev is None:
            sigma[head] = cand
            return True
        return eta_eq(prev, cand)
    sh, sargs = spine(s)
    if not isinstance(sh, Sym) or sh.name != head.name or len(sargs) != len(args):
        return False
    return all(_hmatch(a, b, env, sigma, avoid) for a, b in zip(args, sargs))


def rewrite_reducts_hopm(rules: Sequence[Rule], t: Term) -> list[TraceStep]:
    """Steps ``t[rσ]_p`` where ``t|_p =η σ̂(l)``."""

    def contract(u: Term):
        tu = type_of(u)
        for rule in rules:
            if type_of(rule.lhs) != tu:
                continue
            sigma = match_modulo_betaeta(rule.lhs, u)
            if sigma is not None:
                yield rule.id, substitute(rule.rhs, sigma)

    return list(_everywhere(t, contract))


# ---------------------------------------------------------------- completion


def rule_key(rule: Rule):
    """Key identifying a rule up to renaming of all its variables."""
    order: list[Var] = []

    def collect(t: Term, bound: frozenset):
        if isinstance(t, Var):
            if t not in bound and t not in order:
                order.append(t)
        elif isinstance(t, App):
            collect(t.fun, bound)
            collect(t.arg, bound)
        elif isinstance(t, Abs):
            collect(t.body, bound | {t.var})

    collect(rule.lhs, frozenset())
    ren = {v: Var(f"#{i}", v.type) for i, v in enumerate(order)}
    return alpha_key(substitute(rule.lhs, ren)), alpha_key(substitute(rule.rhs, ren))


def _rule_names(rule: Rule) -> set[str]:
    return all_var_names(rule.lhs) | all_var_names(rule.rhs)


def beta_extension(rule: Rule) -> Rule | None:
    ty = type_of(rule.lhs)
    if not isinstance(ty, Arrow):
        return None
    base = Var("x", ty.dom)
    x = fresh_var(base, _rule_names(rule)) if "x" in _rule_names(rule) else base
    if isinstance(rule.rhs, Abs):
        rhs = substitute(rule.rhs.body, {rule.rhs.var: x})
    else:
        rhs = App(rule.rhs, x)
    return Rule(App(rule.lhs, x), rhs, rule.id + ".b")


def eta_extension(rule: Rule) -> Rule | None:
    if not isinstance(rule.lhs, App):
        return None
    l, k = rule.lhs.fun, rule.lhs.arg
    x = eta_normal_form(k)
    if not isinstance(x, Var) or x in free_vars(l):
        return None
    if isinstance(rule.rhs, App):
        s, k2 = rule.rhs.fun, rule.rhs.arg
        if eta_normal_form(k2) == x and x not in free_vars(s):
            return Rule(l, s, rule.id + ".e")
    return Rule(l, Abs(x, rule.rhs), rule.id + ".e")


def _complete(rules: Sequence[Rule], extend) -> list[Rule]:
    out = list(rules)
    keys = {rule_key(r) for r in out}
    i = 0
    while i < len(out):
        new = extend(out[i])
        if new is not None:
            k = rule_key(new)
            if k not in keys:
                keys.add(k)
                out.append(new)
        i += 1
    return out


def beta_complete(rules: Sequence[Rule]) -> list[Rule]:
    return _complete(rules, beta_extension)


def eta_complete(rules: Sequence[Rule]) -> list[Rule]:
    return _complete(rules, eta_extension)


def complete(rules: Sequence[Rule]) -> list[Rule]:
    """Alternate β- and η-completion until neither adds a rule."""
    out = list(rules)
    while True:
        nxt = eta_complete(beta_complete(out))
        if len(nxt) == len(out):
            return nxt
        out = nxt


def is_beta_complete(rules: Sequence[Rule]) -> bool:
    return len(beta_complete(rules)) == len(rules)


def is_eta_complete(rules: Sequence[Rule]) -> bool:
    return len(eta_complete(rules)) == len(rules)


def completion_bound(rules: Sequence[Rule]) -> int:
    """``n + Σ |T⃗ⁱ|`` where ``lᵢ : T⃗ⁱ ⇒ Aᵢ``."""
    from .terms import type_arity
    return len(rules) + sum(type_arity(type_of(r.lhs)) for r in rules)
