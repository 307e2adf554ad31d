"""Computability-closure membership search, whole-system checks and the
automatic configuration search."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

from .certificate import Certificate, Node, Obligation, check_obligation
from .equational import (
    admissibility, alien_base, aliens_cmp, aliens_compatible, class_rewrite_reducts,
    eq_class, eq_equivalent,
)
from .errors import BoundExceeded, CertificateError, DepthExceeded, FilterOutOfRange
from .orderings import (
    Cmp, Family, OrderingConfig, Precedence, check_config, status_cmp, struct_gt,
)
from .patterns import (
    is_beta_complete, is_eta_complete, pattern_violation, rewrite_reducts_hopm,
)
from .reduction import TraceStep, beta_reducts, eta_normal_form, one_step, reachable
from .system import (
    BaseOrder, RewriteSystem, accessible_args, arity_sup, basic_sorts,
    call_graph_precedence, defined_symbols, dependency_base_order,
    is_standard_inductive, matched_symbols, standard_inductive_violations,
)
from .terms import (
    Abs, App, Base, Sym, Term, Var, alpha_key, free_vars, free_vars_of, fresh_var,
    show, spine, split_type, stable_subterm_ge, stable_subterm_gt, stable_subterms,
    substitute, symbols_of, type_of, variables_of,
)


@dataclass
class CheckerConfig:
    interpretation: str = "basic"  # "basic" or "acc"
    ordering: OrderingConfig = field(default_factory=OrderingConfig)
    mode: str | None = None  # defaults to the system's mode
    base_order: BaseOrder | None = None
    max_depth: int = 64
    red_fuel: int = 3
    order_depth: int = 8
    class_bound: int = 1000
    assume_commutation: bool = False

    def describe(self, system: RewriteSystem) -> str:
        o = self.ordering
        parts = [f"interp={self.interpretation}", f"order={o.family.value}"]
        if o.family in (Family.SUBTERM_STAT, Family.STRUCT_STAT):
            for f in sorted(defined_symbols(system, True)):
                phi = "".join(str(k) for k in o.filter_of(system, f)) or "ε"
                parts.append(f"{f}:{phi}/{o.status_of(f)}")
        gt = ", ".join(f"{a}>{b}" for a, b in o.precedence.gt_pairs)
        eq = ", ".join(f"{a}~{b}" for a, b in o.precedence.eq_pairs)
        if gt or eq:
            parts.append("prec{" + ", ".join(x for x in (gt, eq) if x) + "}")
        return " ".join(parts)


@dataclass(frozen=True)
class Hypothesis:
    name: str
    ok: bool
    detail: str = ""


class Context:
    """Everything the closure operations need to know about a system."""

    def __init__(self, system: RewriteSystem, config: CheckerConfig, _shared=None):
        if config.interpretation not in ("basic", "acc"):
            raise ValueError(f"unknown interpretation {config.interpretation!r}")
        self.system = system
        self.config = config
        self.mode = config.mode or system.mode
        self.interpretation = config.interpretation
        self.with_eqs = self.mode == "modulo"
        self.equations = system.equations if self.with_eqs else ()
        if _shared is not None:
            self.__dict__.update(_shared)
            return
        self.base = config.base_order or dependency_base_order(system, self.with_eqs)
        self.defined = defined_symbols(system, self.with_eqs)
        self.lhs_matched = matched_symbols(system, self.base, self.with_eqs)
        self.matched = self.lhs_matched if self.interpretation == "acc" else frozenset()
        if self.interpretation == "basic":
            self.basic = frozenset(system.sorts)
        else:
            self.basic = basic_sorts(system, self.base, self.with_eqs)
        self._acc: dict[str, frozenset[int]] = {}
        self._reach: dict = {}
        self._steps: dict = {}
        self._classes: dict = {}

    def with_ordering(self, ordering: OrderingConfig) -> "Context":
        shared = {k: v for k, v in self.__dict__.items()
                  if k in ("base", "defined", "lhs_matched", "matched", "basic",
                           "_acc", "_reach", "_steps", "_classes")}
        return Context(self.system, replace(self.config, ordering=ordering), shared)

    @property
    def ordering(self) -> OrderingConfig:
        return self.config.ordering

    def is_basic(self, sort: str) -> bool:
        return sort in self.basic

    def accessible(self, f: str) -> frozenset[int]:
        if f not in self._acc:
            self._acc[f] = accessible_args(self.system, f, self.base)
        return self._acc[f]

    # -- the reduction relation of the current mode

    def one_step(self, t: Term) -> list[TraceStep]:
        k = alpha_key(t)
        if k in self._steps:
            return self._steps[k]
        rules = self.system.rules
        if self.mode == "hopm":
            steps = beta_reducts(t) + rewrite_reducts_hopm(rules, t)
        elif self.mode == "modulo" and self.equations:
            steps = beta_reducts(t)
            try:
                members = eq_class(self.equations, t, self.config.class_bound)
            except BoundExceeded:
                members = [t]
            for u in members:
                steps += [TraceStep("E/" + s.kind, s.position, s.result)
                          for s in one_step(rules, u) if s.kind != "beta"]
        else:
            steps = one_step(rules, t)
        self._steps[k] = steps
        return steps

    def reach(self, t: Term) -> list[Term]:
        k = alpha_key(t)
        if k not in self._reach:
            self._reach[k] = reachable(lambda u: [s.result for s in self.one_step(u)],
                                       t, self.config.order_depth, limit=200)
        return self._reach[k]

    def eq_class(self, t: Term) -> list[Term]:
        k = alpha_key(t)
        if k not in self._classes:
            self._classes[k] = eq_class(self.equations, t, self.config.class_bound)
        return self._classes[k]

    def eq_equivalent(self, t: Term, u: Term) -> bool:
        ku = alpha_key(u)
        return any(alpha_key(v) == ku for v in self.eq_class(t))

    # -- base comparators

    def subterm_cmp(self, t: Term, u: Term) -> Cmp:
        """``→* ⊵ss`` with → explored to a bounded depth."""
        if alpha_key(t) == alpha_key(u):
            return Cmp.EQUIVALENT
        if stable_subterm_gt(t, u):
            return Cmp.GREATER
        if any(stable_subterm_ge(v, u) for v in self.reach(t)):
            return Cmp.GREATER
        return Cmp.NOT_GE

    def struct_cmp(self, lhs_args):
        allowed = (frozenset(n for n, _ in self.system.symbols) - self.defined) | self.lhs_matched

        def gt(t, u):
            return struct_gt(self.system, self.base, allowed, lhs_args, t, u)

        def cmp(t: Term, u: Term) -> Cmp:
            if alpha_key(t) == alpha_key(u):
                return Cmp.EQUIVALENT
            if gt(t, u):
                return Cmp.GREATER
            ku = alpha_key(u)
            if any(alpha_key(v) == ku or gt(v, u) for v in self.reach(t)):
                return Cmp.GREATER
            return Cmp.NOT_GE

        return cmp

    def rec_decrease(self, f: Sym, lhs_args, g: Sym, args) -> bool:
        """``(f, l⃗) > (g, m⃗)`` in the configured ordering."""
        o = self.ordering
        c1, c2 = (f, tuple(lhs_args)), (g, tuple(args))
        try:
            if o.family is Family.ALIENS:
                base = alien_base(self.equations, self.config.class_bound)
                return aliens_cmp(self.system, o.precedence, base, c1, c2) is Cmp.GREATER
            if o.family is Family.STRUCT_STAT:
                base = self.struct_cmp(tuple(lhs_args))
            else:
                base = self.subterm_cmp
            return status_cmp(self.system, o, base, c1, c2) is Cmp.GREATER
        except (FilterOutOfRange, BoundExceeded):
            return False

    # -- global side conditions

    def hypotheses(self) -> list[Hypothesis]:
        system, o = self.system, self.ordering
        out = []
        violations = check_config(system, o, defined_symbols(system, True))
        out.append(Hypothesis("ordering", not violations,
                              "; ".join(f"{f}: {m}" for f, m in violations)))
        if o.family is Family.STRUCT_STAT:
            out.append(Hypothesis("accessible-interpretation", self.interpretation == "acc"))
            bad = standard_inductive_violations(system, self.base, self.with_eqs)
            out.append(Hypothesis("standard-inductive", not bad,
                                  ", ".join(f"{c} argument {i}" for c, i in bad)))
        if self.mode == "modulo":
            rep = admissibility(system)
            out.append(Hypothesis("regular", rep.regular))
            out.append(Hypothesis("non-collapsing", rep.non_collapsing))
            out.append(Hypothesis("neutral", rep.neutral))
            if rep.commutation:
                out.append(Hypothesis("commutation", True, "linear, regular and algebraic"))
            else:
                out.append(Hypothesis("commutation", self.config.assume_commutation,
                                      "assumed" if self.config.assume_commutation else "not established"))
            if system.equations:
                out.append(Hypothesis("aliens-family", o.family is Family.ALIENS))
                if o.family is Family.ALIENS:
                    bad = [i for i, ok in aliens_compatible(system, o.precedence) if not ok]
                    out.append(Hypothesis("aliens-compatible", not bad, ", ".join(bad)))
        if self.mode == "hopm":
            rules = system.rules
            out.append(Hypothesis("accessible-interpretation", self.interpretation == "acc"))
            out.append(Hypothesis("beta-complete", is_beta_complete(rules)))
            out.append(Hypothesis("eta-complete", is_eta_complete(rules)))
            bad = []
            for r in rules:
                for a in r.args:
                    if pattern_violation(a) is not None or symbols_of(a) & self.defined:
                        bad.append(r.id)
                        break
            out.append(Hypothesis("undefined-patterns", not bad, ", ".join(bad)))
        return out


# ---------------------------------------------------------------- the search


class Closure:
    """Membership in the closure of ``f l⃗``.

    A known set is built forward from the arguments (subterm, reduction and
    equivalence steps); goals are then decomposed top-down.
    """

    MAX_KNOWN = 400

    def __init__(self, ctx: Context, head: Sym, lhs_args):
        self.ctx = ctx
        self.head = head
        self.lhs_args = tuple(lhs_args)
        self.lhs_fv = free_vars_of(self.lhs_args)
        self.lhs_names = {v.name for v in self.lhs_fv}
        self.known: dict = {}
        self.known_eta: dict = {}
        self.memo: dict = {}
        self.failed: list[Term] = []
        self._saturate()

    # -- forward part

    def _add(self, t: Term, node: Node, depth: int, todo: list) -> None:
        k = alpha_key(t)
        if k in self.known or len(self.known) >= self.MAX_KNOWN:
            return
        self.known[k] = node
        if self.ctx.mode == "hopm":
            self.known_eta.setdefault(alpha_key(eta_normal_form(t)), node)
        todo.append((node, depth))

    def _saturate(self) -> None:
        todo: list = []
        for i, a in enumerate(self.lhs_args, 1):
            self._add(a, Node("arg", a, {"index": i}), 0, todo)
        while todo:
            node, depth = todo.pop(0)
            for child, d in self._forward(node, depth):
                self._add(child.goal, child, d, todo)

    def _forward(self, node: Node, depth: int):
        ctx, t = self.ctx, node.goal
        head, args = spine(t)
        if isinstance(head, Sym) and head.name in ctx.matched and isinstance(type_of(t), Base):
            for i in sorted(ctx.accessible(head.name)):
                yield Node("subterm-acc", args[i - 1], {"symbol": head.name, "index": i}, [node]), depth
        for p, u in stable_subterms(t):
            if not p:
                continue
            ty = type_of(u)
            if isinstance(ty, Base) and ctx.is_basic(ty.name):
                yield Node("subterm-basic", u, {"position": p}, [node]), depth
        if ctx.mode == "hopm":
            if isinstance(t, Abs):
                x = t.var
                if x in self.lhs_fv or x.name in self.lhs_names:
                    x = fresh_var(x, self.lhs_names | {v.name for v in variables_of(t)})
                body = substitute(t.body, {t.var: x})
                yield Node("subterm-abs", body, {"binder": x}, [node]), depth
            if (isinstance(t, App) and isinstance(t.arg, Var) and t.arg not in self.lhs_fv
                    and t.arg not in free_vars(t.fun)):
                yield Node("subterm-app", t.fun, {"var": t.arg}, [node]), depth
        if ctx.mode == "modulo" and ctx.equations:
            try:
                members = ctx.eq_class(t)
            except BoundExceeded:
                members = [t]
            for u in members[1:]:
                yield Node("mod", u, {}, [node]), depth
        if depth < ctx.config.red_fuel:
            for s in ctx.one_step(t):
                yield Node("red", s.result, {"position": s.position, "via": s.kind}, [node]), depth + 1

    def _known(self, t: Term) -> Node | None:
        n = self.known.get(alpha_key(t))
        if n is not None:
            return n
        if self.ctx.mode == "hopm":
            n = self.known_eta.get(alpha_key(eta_normal_form(t)))
            if n is not None and type_of(n.goal) == type_of(t):
                return Node("eta", t, {}, [n])
        return None

    # -- backward part

    def prove(self, t: Term) -> Node | None:
        return self._prove(t, 0)

    def _prove(self, t: Term, depth: int) -> Node | None:
        if depth > self.ctx.config.max_depth:
            raise DepthExceeded(f"goal {show(t)} deeper than {self.ctx.config.max_depth}")
        k = alpha_key(t)
        if k in self.memo:
            return self.memo[k]
        node = self._attempt(t, depth)
        self.memo[k] = node
        if node is None:
            self.failed.append(t)
        return node

    def _attempt(self, t: Term, depth: int) -> Node | None:
        ctx = self.ctx
        known = self._known(t)
        if known is not None:
            return known
        if isinstance(t, Var):
            return None if t in self.lhs_fv else Node("var", t, {"var": t})
        if isinstance(t, Abs):
            x = t.var
            if x in self.lhs_fv or x.name in self.lhs_names:
                x = fresh_var(x, self.lhs_names | {v.name for v in variables_of(t)})
                t = Abs(x, substitute(t.body, {t.var: x}))
            body = self._prove(t.body, depth + 1)
            return Node("abs", t, {"binder": x}, [body]) if body else None
        head, args = spine(t)
        if isinstance(head, Sym):
            if head.name in ctx.defined:
                node = self._rec(t, head, args, depth)
                if node is not None:
                    return node
            elif not args:
                return self._undef(head)
            if not args:
                return None
        if isinstance(t, App):
            f = self._prove(t.fun, depth + 1)
            if f is None:
                return None
            a = self._prove(t.arg, depth + 1)
            return Node("app", t, {}, [f, a]) if a else None
        return None

    def _rec(self, t: Term, g: Sym, args, depth: int) -> Node | None:
        if not self.ctx.rec_decrease(self.head, self.lhs_args, g, args):
            return None
        kids = []
        for a in args:
            n = self._prove(a, depth + 1)
            if n is None:
                return None
            kids.append(n)
        return Node("rec", t, {"symbol": g.name, "arity": len(args)}, kids)

    def _undef(self, g: Sym) -> Node | None:
        if self.ctx.interpretation == "acc":
            return Node("undef", g, {"symbol": g.name})
        cod = split_type(g.type)[1].name
        if self.ctx.is_basic(cod):
            return Node("undef-basic", g, {"basic_type": cod})
        return None

    def frontier(self) -> list[Term]:
        """Failed goals none of whose proper subterms also failed."""
        keys = {alpha_key(t) for t in self.failed}
        out = []
        for t in self.failed:
            if not any(p and alpha_key(s) in keys for p, s in stable_subterms(t)):
                out.append(t)
        return out


def in_closure(ctx: Context, head: Sym, lhs_args, goal: Term) -> Node | None:
    return Closure(ctx, head, lhs_args).prove(goal)


# ---------------------------------------------------------------- whole systems


@dataclass
class Report:
    verdict: str  # "YES" or "MAYBE"
    obligations: list[Obligation]
    hypotheses: list[Hypothesis]
    config: CheckerConfig
    certificate: Certificate | None = None

    @property
    def yes(self) -> bool:
        return self.verdict == "YES"

    def lines(self) -> list[str]:
        out = []
        for ob in self.obligations:
            label = "RULE" if ob.kind == "rule" else "EQUATION"
            if ob.proved:
                out.append(f"{label} {ob.id}: IN-CLOSURE via [{', '.join(ob.derivation.ops())}]")
            else:
                where = show(ob.frontier[0]) if ob.frontier else show(ob.target)
                out.append(f"{label} {ob.id}: FAILED at {where}")
        for h in self.hypotheses:
            if not h.ok:
                out.append(f"HYPOTHESIS {h.name}: FAILED" + (f" ({h.detail})" if h.detail else ""))
        out.append(self.verdict)
        return out


def obligations_of(ctx: Context) -> list[Obligation]:
    out = []
    for r in ctx.system.rules:
        head, args = spine(r.lhs)
        out.append(Obligation("rule", r.id, head, args, r.rhs))
    if ctx.mode == "modulo":
        for e in ctx.system.equations:
            (f, ls), (g, ms) = spine(e.lhs), spine(e.rhs)
            for i, m in enumerate(ms, 1):
                out.append(Obligation("equation", f"{e.id}/rhs{i}", f, ls, m))
            for i, l in enumerate(ls, 1):
                out.append(Obligation("equation", f"{e.id}/lhs{i}", g, ms, l))
    return out


def _prove_obligation(ctx: Context, ob: Obligation, cache: dict) -> Obligation:
    key = (ob.head.name, tuple(alpha_key(a) for a in ob.lhs_args))
    cl = cache.get(key)
    if cl is None:
        cl = cache[key] = Closure(ctx, ob.head, ob.lhs_args)
    try:
        node = cl.prove(ob.target)
    except DepthExceeded:
        node = None
    frontier = [] if node else cl.frontier()
    return Obligation(ob.kind, ob.id, ob.head, ob.lhs_args, ob.target, node, frontier)


def check_system(system: RewriteSystem, config: CheckerConfig) -> Report:
    ctx = Context(system, config)
    return _check_with(ctx)


def _check_with(ctx: Context) -> Report:
    hyps = ctx.hypotheses()
    cache: dict = {}
    obs = [_prove_obligation(ctx, ob, cache) for ob in obligations_of(ctx)]
    ok = all(h.ok for h in hyps) and all(ob.proved for ob in obs)
    cert = Certificate(ctx.mode, ctx.interpretation, ctx.ordering.family.value, obs)
    return Report("YES" if ok else "MAYBE", obs, hyps, ctx.config, cert)


def verify_certificate(system: RewriteSystem, config: CheckerConfig, cert: Certificate) -> bool:
    try:
        check_certificate(system, config, cert)
    except CertificateError:
        return False
    return True


def check_certificate(system: RewriteSystem, config: CheckerConfig, cert: Certificate) -> None:
    """Re-check every node and the coverage of all obligations from scratch."""
    ctx = Context(system, config)
    if cert.mode != ctx.mode or cert.interpretation != ctx.interpretation \
            or cert.family != ctx.ordering.family.value:
        raise CertificateError("", "certificate was produced for another configuration")
    bad = [h.name for h in ctx.hypotheses() if not h.ok]
    if bad:
        raise CertificateError("", "hypotheses fail: " + ", ".join(bad))
    expected = obligations_of(ctx)
    if len(expected) != len(cert.obligations):
        raise CertificateError("", "wrong number of obligations")
    for want, got in zip(expected, cert.obligations):
        same = (want.id == got.id and want.kind == got.kind and want.head.name == got.head.name
                and len(want.lhs_args) == len(got.lhs_args)
                and all(alpha_key(a) == alpha_key(b) for a, b in zip(want.lhs_args, got.lhs_args))
                and alpha_key(want.target) == alpha_key(got.target))
        if not same:
            raise CertificateError("", f"obligation {got.id} does not match the system")
        check_obligation(ctx, got)


def check_derivation(system: RewriteSystem, config: CheckerConfig, ob: Obligation) -> bool:
    """Check a single (possibly instantiated) derivation."""
    try:
        check_obligation(Context(system, config), ob)
    except CertificateError:
        return False
    return True


# ---------------------------------------------------------------- automatic search


def call_graph_config(system: RewriteSystem) -> Precedence:
    gt, eq = call_graph_precedence(system)
    return Precedence(gt, eq)


def _filters_for(n: int, length: int, ordered: bool):
    gen = itertools.permutations if ordered else itertools.combinations
    return [tuple(p) for p in gen(range(1, n + 1), length)]


def _candidates(system: RewriteSystem, cls: list[str], family: Family):
    if family in (Family.SUBTERM_MUL, Family.ALIENS):
        yield {}, {}
        return
    ar = {f: arity_sup(system, f, True) for f in cls}
    top = min(3, max(ar.values(), default=0))
    for length in list(range(1, top + 1)) + [0]:
        for status in ("lex", "mul"):
            choices = [_filters_for(ar[f], length, status == "lex") for f in cls]
            if any(not c for c in choices):
                continue
            for combo in itertools.product(*choices):
                yield dict(zip(cls, combo)), {f: status for f in cls}


def _families(system: RewriteSystem, mode: str) -> list[Family]:
    if mode == "modulo" and system.equations:
        return [Family.ALIENS]
    return [Family.SUBTERM_STAT, Family.SUBTERM_MUL, Family.STRUCT_STAT, Family.ALIENS]


def auto_search(system: RewriteSystem, seed: CheckerConfig | None = None,
                **overrides) -> tuple[CheckerConfig | None, Report]:
    """First configuration that proves every obligation, or ``(None, report)``."""
    last = None
    if seed is not None:
        rep = check_system(system, seed)
        if rep.yes:
            return seed, rep
        last = rep
    mode = overrides.get("mode") or system.mode
    prec = call_graph_config(system)
    defined = sorted(defined_symbols(system, True))
    classes: list[list[str]] = []
    for f in defined:
        if not any(f in c for c in classes):
            classes.append(sorted(g for g in defined if prec.equivalent(f, g)))
    for interp in ("basic", "acc"):
        for family in _families(system, mode):
            base_cfg = CheckerConfig(interpretation=interp,
                                     ordering=OrderingConfig(family, prec), **overrides)
            ctx = Context(system, base_cfg)
            if not all(h.ok for h in ctx.hypotheses() if h.name != "ordering"):
                continue
            filters: dict = {}
            statuses: dict = {}
            ok = True
            for cls in classes:
                found = _search_class(ctx, cls, family, prec, filters, statuses)
                if found is None:
                    ok = False
                    break
                filters.update(found[0])
                statuses.update(found[1])
            if not ok:
                continue
            cfg = replace(base_cfg, ordering=OrderingConfig(family, prec, filters, statuses))
            rep = check_system(system, cfg)
            if rep.yes:
                return cfg, rep
            last = rep
    if last is None:
        last = check_system(system, CheckerConfig(ordering=OrderingConfig(Family.SUBTERM_STAT, prec),
                                                  **overrides))
    return None, last


def _search_class(ctx: Context, cls, family, prec, filters, statuses):
    members = set(cls)
    obs = [ob for ob in obligations_of(ctx) if ob.head.name in members]
    for fs, ss in _candidates(ctx.system, cls, family):
        o = OrderingConfig(family, prec, {**filters, **fs}, {**statuses, **ss})
        if check_config(ctx.system, o, cls):
            continue
        c2 = ctx.with_ordering(o)
        cache: dict = {}
        if all(_prove_obligation(c2, ob, cache).proved for ob in obs):
            return fs, ss
    return None
