import pytest

from gen import load, parser
from hocc.closure import CheckerConfig, Context
from hocc.errors import ConfigInvalid, FilterOutOfRange, LengthMismatch
from hocc.orderings import (
    Cmp, Family, OrderingConfig, Precedence, acc_subterms, apply_filter, check_config,
    lex_cmp, multiset_cmp, product_cmp, status_cmp, struct_gt,
)
from hocc.parser import parse_problem
from hocc.system import dependency_base_order
from hocc.terms import Sym, stable_subterm_gt


def ss(t, u):
    """⊵ss as a comparator."""
    if t == u:
        return Cmp.EQUIVALENT
    return Cmp.GREATER if stable_subterm_gt(t, u) else Cmp.NOT_GE


T = parser()


def test_multiset_examples():
    assert multiset_cmp(ss, [T("s z"), T("y")], [T("z"), T("y")]) is Cmp.GREATER
    assert multiset_cmp(ss, [T("x"), T("y")], [T("y"), T("x")]) is Cmp.EQUIVALENT
    assert multiset_cmp(ss, [T("x"), T("y"), T("u")], [T("y"), T("u")]) is Cmp.GREATER
    assert multiset_cmp(ss, [T("y")], [T("x")]) is Cmp.NOT_GE
    assert multiset_cmp(ss, [], []) is Cmp.EQUIVALENT
    assert multiset_cmp(ss, [], [T("x")]) is Cmp.NOT_GE


def test_lex_and_product():
    a, b = [T("s x"), T("y")], [T("x"), T("s y")]
    assert lex_cmp(ss, a, b) is Cmp.GREATER
    assert product_cmp(ss, a, b) is Cmp.NOT_GE
    assert lex_cmp(ss, [T("x"), T("y")], [T("x"), T("y")]) is Cmp.EQUIVALENT
    assert product_cmp([ss, ss], [T("s x"), T("y")], [T("x"), T("y")]) is Cmp.GREATER
    with pytest.raises(LengthMismatch):
        lex_cmp(ss, a, b[:1])
    with pytest.raises(LengthMismatch):
        product_cmp(ss, a, b[:1])


def test_precedence():
    p = Precedence([("times", "plus")], [("f", "g")])
    assert p.cmp("times", "plus") is Cmp.GREATER
    assert p.cmp("plus", "times") is Cmp.NOT_GE
    assert p.cmp("g", "f") is Cmp.EQUIVALENT
    with pytest.raises(ConfigInvalid):
        Precedence([("a", "b"), ("b", "a")])
    with pytest.raises(ConfigInvalid):
        Precedence([("a", "b")], [("a", "b")])


def test_apply_filter():
    assert apply_filter((2, 1), ["a", "b", "c"]) == ("b", "a")
    with pytest.raises(FilterOutOfRange):
        apply_filter((3,), ["a", "b"])


def _ctx(name, **ordering):
    system = load(name)
    cfg = CheckerConfig(ordering=OrderingConfig(**ordering))
    return system, Context(system, cfg)


def test_status_ackermann():
    system, ctx = _ctx("ackermann", filters={"ack": (1, 2)}, statuses={"ack": "lex"})
    T = parser(system)
    ack = system.sym("ack")
    c1 = (ack, (T("s m"), T("s n")))
    c2 = (ack, (T("s m"), T("n")))
    assert status_cmp(system, ctx.ordering, ctx.subterm_cmp, c1, c2) is Cmp.GREATER
    assert status_cmp(system, ctx.ordering, ctx.subterm_cmp, c2, c1) is Cmp.NOT_GE


def test_status_subtype_needs_multiset():
    system = load("subtype")
    T = parser(system)
    le = system.sym("le")
    c1 = (le, (T("arrow x y"), T("arrow x' y'")))
    c2 = (le, (T("x'"), T("x")))
    for status, want in (("mul", Cmp.GREATER), ("lex", Cmp.NOT_GE)):
        o = OrderingConfig(filters={"le": (1, 2)}, statuses={"le": status})
        ctx = Context(system, CheckerConfig(ordering=o))
        assert status_cmp(system, o, ctx.subterm_cmp, c1, c2) is want


def test_status_equivalent_symbols():
    system = load("plus_times")
    T = parser(system)
    o = OrderingConfig(precedence=Precedence(eq=[("plus", "times")]),
                       filters={"plus": (1,), "times": (1,)})
    c1 = (system.sym("plus"), (T("x"), T("y")))
    c2 = (system.sym("times"), (T("x"), T("u")))
    assert status_cmp(system, o, ss, c1, c2) is Cmp.EQUIVALENT


def test_status_precedence_decides():
    system = load("plus_times")
    T = parser(system)
    o = OrderingConfig(precedence=Precedence([("times", "plus")]))
    c1 = (system.sym("times"), (T("x"), T("y")))
    c2 = (system.sym("plus"), (T("s x"), T("y")))
    assert status_cmp(system, o, ss, c1, c2) is Cmp.GREATER


def test_struct_gt_examples():
    system = load("ordinal")
    T = parser(system)
    base = dependency_base_order(system)
    allowed = {"zero", "suc", "lim", "z", "s"}
    lhs = (T("lim x"), T("b"))
    assert struct_gt(system, base, allowed, lhs, T("lim x"), T("x n"))
    assert not struct_gt(system, base, allowed, lhs, T("lim x"), T("lim x"))
    lhs2 = (T("suc a"), T("b"))
    assert struct_gt(system, base, allowed, lhs2, T("suc a"), T("a"))
    assert acc_subterms(system, base, allowed, T("suc (suc a)")) == [T("suc a"), T("a")]


def test_struct_gt_rejects_lhs_variable_argument():
    system = parse_problem("""
    sort N O .
    cons s : N -> N .
    cons lim : (N -> O) -> O .
    fun plus : O -> N -> O .
    var x : N -> O .
    var y n : N .
    """)
    T = parser(system)
    base = dependency_base_order(system)
    allowed = {"lim", "s"}
    lhs = (T("lim x"), T("y"))
    assert struct_gt(system, base, allowed, lhs, T("lim x"), T("x n"))
    assert not struct_gt(system, base, allowed, lhs, T("lim x"), T("x (s y)"))
    # y occurs in the left-hand side, so it may not be stripped
    assert not struct_gt(system, base, allowed, lhs, T("lim x"), T("x y"))


def test_check_config_examples():
    godel = load("godel_t")
    ok = OrderingConfig(Family.STRUCT_STAT, filters={"rec": (1,)}, statuses={"rec": "lex"})
    assert check_config(godel, ok) == []
    bad_filter = OrderingConfig(Family.STRUCT_STAT, filters={"rec": (3,)})
    assert [f for f, _ in check_config(godel, bad_filter)] == ["rec"]

    mixed = parse_problem("""
    sort N O . cons z : N . cons zero : O .
    fun f : N -> O -> N . fun g : N -> O -> N .
    var x : N . var a : O .
    rule f x a -> g x a .
    rule g x a -> f x a .
    """)
    prec = Precedence(eq=[("f", "g")])
    mul = OrderingConfig(Family.STRUCT_STAT, prec, {"f": (1, 2), "g": (1, 2)},
                         {"f": "mul", "g": "mul"})
    assert any("mixes" in msg for _, msg in check_config(mixed, mul))
    statuses = OrderingConfig(Family.SUBTERM_STAT, prec, {}, {"f": "mul", "g": "lex"})
    assert any("mixed statuses" in msg for _, msg in check_config(mixed, statuses))
    lengths = OrderingConfig(Family.SUBTERM_STAT, prec, {"f": (1,), "g": (1, 2)})
    assert any("different lengths" in msg for _, msg in check_config(mixed, lengths))
