from dataclasses import replace

import pytest

from gen import load, parser
from hocc.equational import (
    admissibility, alien_base, aliens, aliens_cmp, aliens_compatible, check_collapsing,
    check_commutation_criterion, check_neutral, check_regular, class_rewrite_reducts,
    eq_class, eq_equivalent, phi,
)
from hocc.errors import BadEquationShape, BoundExceeded
from hocc.orderings import Cmp, Precedence
from hocc.parser import parse_problem
from hocc.terms import show

ARITH = parse_problem("""
sort N F T .
cons z : N .
cons s : N -> N .
fun plus times : N -> N -> N .
fun conj : F -> F -> F .
fun all : (T -> F) -> F .
var x y u t : N .
var a : F .
var P : T -> T -> F .
var v w : T .
eq times x z = z .
eq plus x z = x .
eq plus x y = plus y x .
eq all (\\v. all (\\w. P v w)) = all (\\w. all (\\v. P v w)) .
eq conj a a = a .
eq times (plus x y) u = plus (times x u) (times y u) .
""")
E_NONREG, E_COLL, E_COMM, E_QUANT, E_IDEM, E_DIST = ARITH.equations
AC = load("ac_plus")
T = parser(AC)


def test_regular_and_collapsing():
    assert check_regular([E_NONREG, E_COMM]) == [False, True]
    assert check_collapsing([E_COLL, E_COMM]) == [True, False]


def test_commutation_criterion():
    assert check_commutation_criterion(AC.equations)
    assert not check_commutation_criterion([E_QUANT])
    assert not check_commutation_criterion([E_IDEM])


def test_admissibility_of_ac():
    rep = admissibility(AC)
    assert (rep.regular, rep.non_collapsing, rep.neutral, rep.commutation) == (True,) * 4
    assert rep.admissible
    assert check_neutral(AC) == [True, True]
    assert rep.lines() == ["regular: True", "non-collapsing: True", "neutral: True",
                           "commutation: True"]


def test_neutral_rejects_variable_side():
    sysm = replace(ARITH, equations=(E_COLL,))
    with pytest.raises(BadEquationShape):
        check_neutral(sysm)
    assert not admissibility(sysm).neutral


def test_eq_class_commutativity():
    members = {show(t) for t in eq_class(AC.equations, T("plus x y"))}
    assert members == {"plus x y", "plus y x"}


def test_eq_class_ac_size():
    # 3 leaves under AC: 3! orders times 2 bracketings
    assert len(eq_class(AC.equations, T("plus (plus x y) u"))) == 12


def test_eq_class_bound():
    with pytest.raises(BoundExceeded):
        eq_class(AC.equations, T("plus (plus x y) u"), bound=5)


def test_eq_equivalent():
    assert eq_equivalent(AC.equations, T("plus x (plus y u)"), T("plus (plus u y) x"))
    assert not eq_equivalent(AC.equations, T("plus x y"), T("plus x x"))


def test_class_rewrite():
    got = {show(t) for t in class_rewrite_reducts(AC.rules, AC.equations, T("plus x z"))}
    assert "x" in got


def test_aliens_example():
    Tn = parser(ARITH)
    got = aliens({"plus"}, [Tn("plus (plus x y) (times u (plus t z))")])
    assert [show(a) for a in got] == ["x", "y", "times u (plus t z)"]


def test_aliens_compatible():
    prec = Precedence()
    assert all(ok for _, ok in aliens_compatible(AC, prec))
    sysm = parse_problem("""
    sort N . fun f g : N -> N . fun plus times : N -> N -> N . var x y u : N .
    eq f x = g x .
    eq times (plus x y) u = plus (times x u) (times y u) .
    """)
    assert [ok for _, ok in aliens_compatible(sysm, prec)] == [False, False]
    both = Precedence(eq=[("plus", "times")])
    assert [ok for _, ok in aliens_compatible(sysm, both)] == [False, False]


def test_aliens_cmp_examples():
    plus = AC.sym("plus")
    base = alien_base(AC.equations)
    prec = Precedence()
    assert aliens_cmp(AC, prec, base, (plus, (T("plus x y"), T("u"))),
                      (plus, (T("y"), T("u")))) is Cmp.GREATER
    assert aliens_cmp(AC, prec, base, (plus, (T("x"), T("s y"))),
                      (plus, (T("x"), T("y")))) is Cmp.GREATER
    assert aliens_cmp(AC, prec, base, (plus, (T("x"), T("y"))),
                      (plus, (T("y"), T("x")))) is Cmp.EQUIVALENT


def test_phi_unfolds_introduced_heads():
    theta = {AC.var("x"): T("plus y u")}
    m = [T("x"), T("s x")]
    assert [show(a) for a in phi({"plus"}, theta, m)] == ["y", "u", "s (plus y u)"]
