"""Rewriting modulo equations: admissibility checks, bounded equivalence
classes, class rewriting, aliens and the alien-based ordering."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import BadEquationShape, BoundExceeded
from .orderings import Cmp, Precedence, is_maximal, multiset_cmp
from .reduction import TraceStep, _everywhere, match_alpha, rewrite_reducts
from .system import Equation, RewriteSystem, arity_sup, matched_symbols
from .terms import (
    Sym, Term, Var, alpha_eq, alpha_key, free_vars, is_algebraic, is_linear,
    size, spine, substitute,
)


# ---------------------------------------------------------------- admissibility


def check_regular(equations: Sequence[Equation]) -> list[bool]:
    return [free_vars(e.lhs) == free_vars(e.rhs) for e in equations]


def check_collapsing(equations: Sequence[Equation]) -> list[bool]:
    return [isinstance(e.lhs, Var) or isinstance(e.rhs, Var) for e in equations]


def check_neutral(system: RewriteSystem) -> list[bool]:
    """Both sides symbol-headed and applied to at least as many arguments as
    their head takes in any left-hand side of R ∪ E ∪ E⁻¹."""
    out = []
    for e in system.equations:
        ok = True
        for side in (e.lhs, e.rhs):
            head, args = spine(side)
            if not isinstance(head, Sym):
                raise BadEquationShape(f"{e.id}: side {side} is not headed by a symbol")
            ok = ok and len(args) >= arity_sup(system, head.name, True)
        out.append(ok)
    return out


def unmatched_heads(system: RewriteSystem) -> list[bool]:
    """Whether both heads lie outside the matched symbols (diagnostic only)."""
    matched = matched_symbols(system, include_equations=True)
    out = []
    for e in system.equations:
        heads = [spine(s)[0] for s in (e.lhs, e.rhs)]
        out.append(all(isinstance(h, Sym) and h.name not in matched for h in heads))
    return out


def check_commutation_criterion(equations: Sequence[Equation]) -> bool:
    """E linear, regular and algebraic, which makes =E commute with β."""
    return all(is_linear(s) and is_algebraic(s) for e in equations for s in (e.lhs, e.rhs)) \
        and all(check_regular(equations))


@dataclass
class AdmissibilityReport:
    regular: bool
    non_collapsing: bool
    neutral: bool
    commutation: bool
    per_equation: dict[str, dict[str, bool]] = field(default_factory=dict)

    @property
    def admissible(self) -> bool:
        return self.regular and self.non_collapsing and self.neutral and self.commutation

    def lines(self) -> list[str]:
        return [f"regular: {self.regular}", f"non-collapsing: {self.non_collapsing}",
                f"neutral: {self.neutral}", f"commutation: {self.commutation}"]


def admissibility(system: RewriteSystem) -> AdmissibilityReport:
    eqs = system.equations
    reg = check_regular(eqs)
    col = check_collapsing(eqs)
    try:
        neu = check_neutral(system)
    except BadEquationShape:
        neu = [False] * len(eqs)
    unm = unmatched_heads(system)
    per = {e.id: {"regular": r, "non-collapsing": not c, "neutral": n, "unmatched-heads": u}
           for e, r, c, n, u in zip(eqs, reg, col, neu, unm)}
    return AdmissibilityReport(all(reg), not any(col), all(neu),
                               check_commutation_criterion(eqs), per)


# ---------------------------------------------------------------- classes


def _both_ways(equations: Sequence[Equation]) -> list[Equation]:
    out = []
    for e in equations:
        out += [e, e.reversed()]
    return out


def equation_steps(equations: Sequence[Equation], t: Term) -> list[TraceStep]:
    """One ``↔E`` step at every position, both orientations."""
    eqs = _both_ways(equations)

    def contract(u: Term):
        for e in eqs:
            sigma = match_alpha(e.lhs, u)
            if sigma is not None and free_vars(e.rhs) <= set(sigma):
                yield e.id, substitute(e.rhs, sigma)

    return list(_everywhere(t, contract))


def eq_class(equations: Sequence[Equation], t: Term, bound: int = 1000) -> list[Term]:
    """The =E class of ``t`` (t first), explored breadth first.

    Raises :class:`BoundExceeded` once more than ``bound`` members appear or a
    member grows beyond twice the size of ``t``.
    """
    if not equations:
        return [t]
    cap = 2 * size(t)
    seen = {alpha_key(t)}
    members = [t]
    frontier = [t]
    while frontier:
        nxt = []
        for u in frontier:
            for step in equation_steps(equations, u):
                k = alpha_key(step.result)
                if k in seen:
                    continue
                if size(step.result) > cap:
                    raise BoundExceeded(f"member larger than {cap}")
                seen.add(k)
                members.append(step.result)
                nxt.append(step.result)
                if len(members) > bound:
                    raise BoundExceeded(f"class exceeds {bound} members")
        frontier = nxt
    return members


def eq_equivalent(equations, t: Term, u: Term, bound: int = 1000) -> bool:
    if alpha_eq(t, u):
        return True
    if not equations:
        return False
    k = alpha_key(u)
    return any(alpha_key(v) == k for v in eq_class(equations, t, bound))


def class_rewrite_reducts(rules, equations, t: Term, bound: int = 1000) -> list[Term]:
    """Reducts for ``=E →R``: rewrite any member of the class of ``t``."""
    out, seen = [], set()
    for u in eq_class(equations, t, bound):
        for step in rewrite_reducts(rules, u):
            k = alpha_key(step.result)
            if k not in seen:
                seen.add(k)
                out.append(step.result)
    return out


# ---------------------------------------------------------------- aliens


def aliens(heads: Iterable[str], terms: Sequence[Term]) -> list[Term]:
    """Unfold applications headed by a symbol of ``heads``; the rest are aliens."""
    heads = frozenset(heads)
    out: list[Term] = []
    for t in terms:
        h, args = spine(t)
        if isinstance(h, Sym) and h.name in heads:
            out += aliens(heads, args)
        else:
            out.append(t)
    return out


def phi(heads: Iterable[str], theta, terms: Sequence[Term]) -> list[Term]:
    """Aliens of ``Mθ`` computed from ``M``: heads introduced by θ are unfolded."""
    heads = frozenset(heads)
    out: list[Term] = []
    for a in terms:
        h, us = spine(a)
        if isinstance(h, Var) and h in theta:
            hh, ts = spine(theta[h])
            if isinstance(hh, Sym) and hh.name in heads:
                out += aliens(heads, ts)
                out += phi(heads, theta, aliens(heads, us))
                continue
        out.append(substitute(a, theta))
    return out


def alg_subterms(t: Term) -> list[Term]:
    """Strict subterms reachable through arguments of symbol-headed applications."""
    out: list[Term] = []
    h, args = spine(t)
    if isinstance(h, Sym):
        for a in args:
            out.append(a)
            out += alg_subterms(a)
    return out


def same_multiset(xs: Sequence[Term], ys: Sequence[Term]) -> bool:
    return Counter(alpha_key(x) for x in xs) == Counter(alpha_key(y) for y in ys)


def alien_base(equations, bound: int = 1000):
    """The quasi-ordering ``=E ⊵alg`` on terms."""
    cache: dict = {}

    def klass(t: Term) -> list[Term]:
        k = alpha_key(t)
        if k not in cache:
            cache[k] = eq_class(equations, t, bound)
        return cache[k]

    def cmp(t: Term, u: Term) -> Cmp:
        ku = alpha_key(u)
        members = klass(t)
        if any(alpha_key(v) == ku for v in members):
            return Cmp.EQUIVALENT
        for v in members:
            if any(alpha_key(w) == ku for w in alg_subterms(v)):
                return Cmp.GREATER
        return Cmp.NOT_GE

    return cmp


def head_class(precedence: Precedence, f: str, universe) -> frozenset[str]:
    return frozenset({f} | {g for g in universe if precedence.equivalent(f, g)})


def aliens_cmp(system: RewriteSystem, precedence: Precedence, base, c1, c2) -> Cmp:
    """Heads must be ≃F; then compare the alien multisets with ``base``.
    Both calls have to be maximally applied."""
    (f, ts), (g, us) = c1, c2
    if not precedence.equivalent(f.name, g.name):
        return Cmp.NOT_GE
    if not (is_maximal(f, ts) and is_maximal(g, us)):
        return Cmp.NOT_GE
    universe = [n for n, _ in system.symbols]
    cls = head_class(precedence, f.name, universe)
    return multiset_cmp(base, aliens(cls, ts), aliens(cls, us))


def aliens_compatible(system: RewriteSystem, precedence: Precedence) -> list[tuple[str, bool]]:
    universe = [n for n, _ in system.symbols]
    out = []
    for e in system.equations:
        (f, ls), (g, ms) = spine(e.lhs), spine(e.rhs)
        ok = (isinstance(f, Sym) and isinstance(g, Sym)
              and precedence.equivalent(f.name, g.name))
        if ok:
            cls = head_class(precedence, f.name, universe)
            ok = same_multiset(aliens(cls, ls), aliens(cls, ms))
        out.append((e.id, ok))
    return out
