"""Algebraic invariants checked on generated terms."""

import itertools

from hypothesis import given, settings, strategies as st

import gen
from gen import AC_PLUS, N, SYMS, VARS, terms, substitutions
from hocc.equational import alien_base, aliens, eq_class, eq_equivalent
from hocc.orderings import Cmp, multiset_cmp
from hocc.parser import parse_problem, parse_term
from hocc.patterns import (
    beta_complete, completion_bound, eta_complete, is_pattern, leaf_positions,
    match_modulo_betaeta, valuation,
)
from hocc.reduction import (
    beta_normal_form, beta_reducts, eta_eq, eta_normal_form, normalize, reachable,
)
from hocc.system import BaseOrder, accessible_args
from hocc.terms import (
    Abs, App, Arrow, Base, Var, alpha_eq, alpha_key, compose, free_vars, fresh_var,
    show, stable_subterm_ge, stable_subterms, substitute, subterm_at, type_of,
)

SIG = {name: s.type for name, s in SYMS.items()}
VAR_TABLE = {v.name: v for v in VARS + gen.BINDERS + [Var("e", N), Var("w", N)]}


@given(terms(), substitutions(), substitutions())
def test_substitution_composition(t, s1, s2):
    assert alpha_eq(substitute(substitute(t, s1), s2), substitute(t, compose(s1, s2)))


@given(terms(), substitutions())
def test_substitution_preserves_type(t, sigma):
    assert type_of(substitute(t, sigma)) == type_of(t)


@given(terms(), st.data())
def test_stable_subterm_stable_by_substitution(t, data):
    subs = list(stable_subterms(t))
    _, u = subs[data.draw(st.integers(0, len(subs) - 1))]
    sigma = data.draw(substitutions())
    assert stable_subterm_ge(substitute(t, sigma), substitute(u, sigma))


@given(terms())
def test_alpha_renaming_of_binders(t):
    def rename(u):
        if isinstance(u, Abs):
            x = fresh_var(u.var, {v.name for v in free_vars(u)} | {u.var.name, "zz"})
            return Abs(x, rename(substitute(u.body, {u.var: x})))
        if isinstance(u, App):
            return App(rename(u.fun), rename(u.arg))
        return u
    r = rename(t)
    assert alpha_key(r) == alpha_key(t) and type_of(r) == type_of(t)


@given(terms(budget=10))
def test_show_parse_round_trip(t):
    assert alpha_eq(parse_term(show(t), SIG, VAR_TABLE), t)


@given(terms(budget=10))
def test_eta_normal_form_is_idempotent(t):
    n = eta_normal_form(t)
    assert eta_normal_form(n) == n and eta_eq(n, t)


PLUS = parse_problem("""
sort N . cons z : N . cons s : N -> N . fun plus : N -> N -> N . var x y : N .
rule plus z y -> y .
rule plus (s x) y -> s (plus x y) .
""")


@st.composite
def numerals(draw):
    t = parse_term("z", PLUS.signature, {})
    for _ in range(draw(st.integers(0, 3))):
        t = App(PLUS.sym("s"), t)
    if draw(st.booleans()):
        return t
    return App(App(PLUS.sym("plus"), t), draw(numerals()))


@given(numerals())
def test_strategies_agree_on_confluent_system(t):
    assert normalize(PLUS.rules, t, 200, "leftmost") == normalize(PLUS.rules, t, 200, "full")


@given(st.lists(st.integers(0, 5), max_size=4), st.randoms(use_true_random=False))
def test_multiset_permutation_invariance(m, rnd):
    base = lambda a, b: Cmp.EQUIVALENT if a == b else (Cmp.GREATER if a > b else Cmp.NOT_GE)
    shuffled = list(m)
    rnd.shuffle(shuffled)
    assert multiset_cmp(base, m, shuffled) is Cmp.EQUIVALENT
    assert multiset_cmp(base, m + [9], m) is Cmp.GREATER


SORTS = ["A", "B", "C"]


@st.composite
def simple_types(draw, depth=2):
    if depth == 0 or draw(st.booleans()):
        return Base(draw(st.sampled_from(SORTS)))
    return Arrow(draw(simple_types(depth - 1)), draw(simple_types(depth - 1)))


@given(st.lists(simple_types(), min_size=1, max_size=3), st.sampled_from(SORTS),
       st.lists(st.tuples(st.sampled_from(SORTS), st.sampled_from(SORTS)), max_size=3),
       st.tuples(st.sampled_from(SORTS), st.sampled_from(SORTS)))
def test_acc_monotone_in_base_order(args, cod, gt, extra):
    ty = Base(cod)
    for a in reversed(args):
        ty = Arrow(a, ty)
    system = parse_problem("sort A B C .\n" + f"cons c : {ty} .\n")

    def order(pairs):
        try:
            return BaseOrder.from_relation(SORTS, gt=pairs)
        except Exception:
            return None
    small, big = order(gt), order(gt + [extra])
    if small is None or big is None or extra[0] == extra[1]:
        return
    if any(small.equiv(a, b) != big.equiv(a, b) for a in SORTS for b in SORTS):
        return
    assert accessible_args(system, "c", small) <= accessible_args(system, "c", big)


@given(terms(budget=9))
def test_aliens_dominated_by_term(t):
    heads = {"plus"}
    base = alien_base(AC_PLUS)
    assert multiset_cmp(base, [t], aliens(heads, [t])).ge


AC_SIG = {"plus": SYMS["plus"].type, "s": SYMS["s"].type, "z": N}


@st.composite
def plus_terms(draw, depth=2):
    if depth == 0 or draw(st.integers(0, 2)) == 0:
        return draw(st.sampled_from([SYMS["z"], VARS[0], VARS[1], VARS[2]]))
    if draw(st.integers(0, 3)) == 0:
        return App(SYMS["s"], draw(plus_terms(depth - 1)))
    return App(App(SYMS["plus"], draw(plus_terms(depth - 1))), draw(plus_terms(depth - 1)))


@settings(max_examples=60)
@given(plus_terms(), st.data())
def test_aliens_invariant_under_equations(t, data):
    cls = eq_class(AC_PLUS, t)
    u = cls[data.draw(st.integers(0, len(cls) - 1))]
    a, b = aliens({"plus"}, [t]), aliens({"plus"}, [u])
    assert len(a) == len(b)
    rest = list(b)
    for x in a:
        j = next(i for i, y in enumerate(rest) if eq_equivalent(AC_PLUS, x, y))
        rest.pop(j)


DER_VARS = {"F": Var("F", Arrow(Base("R"), Base("R")))}


@settings(max_examples=50)
@given(st.data())
def test_valuation_is_leaf_beta_development(data):
    system = gen.load("derivative")
    R = Base("R")
    F = Var("F", Arrow(R, R))
    lhs = parse_term(r"\x. sin (F x)", system.signature, {"F": F, "x": Var("x", R)})
    body = data.draw(st.sampled_from(["y", "sin y", "times y y", "cos (times y c)"]))
    y, c = Var("y", R), Var("c", R)
    sigma = {F: Abs(y, parse_term(body, system.signature, {"y": y, "c": c}))}
    assert is_pattern(lhs) and leaf_positions(lhs) == ["01"]
    target = valuation(sigma, lhs)
    reach = reachable(lambda t: [s.result for s in beta_reducts(t)], substitute(lhs, sigma), 2)
    assert any(alpha_eq(target, r) for r in reach + [substitute(lhs, sigma)])
    assert match_modulo_betaeta(lhs, target) is not None


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_completion_bound_and_idempotence(seed):
    rules = gen.small_system(gen.rng_pick(seed))
    done = beta_complete(rules)
    assert len(done) <= completion_bound(rules)
    assert beta_complete(done) == done
    e = eta_complete(rules)
    assert eta_complete(e) == e
