import pytest

from gen import N, NN, parser
from hocc.errors import BadPosition, IllTyped
from hocc.terms import (
    Abs, App, Arrow, Base, Sym, Var, alpha_eq, apply, bound_vars_at, compose,
    free_vars, fresh_var, is_algebraic, is_eta_long, is_linear, is_well_typed, lam,
    positions, replace_at, show, size, spine, split_type, stable_subterm_ge,
    stable_subterm_gt, subterm_at, substitute, type_of,
)

T = parser()
x, y = Var("x", N), Var("y", N)
z, s = Sym("z", N), Sym("s", NN)
O = Base("O")


def test_type_of_application():
    assert type_of(T("s z")) == N


def test_type_of_abstraction():
    assert type_of(T(r"\x. x")) == Arrow(N, N)


def test_type_of_ill_typed_reports_position():
    with pytest.raises(IllTyped) as err:
        type_of(App(z, z))
    assert err.value.position == ""
    with pytest.raises(IllTyped) as err:
        type_of(App(s, App(z, z)))
    assert err.value.position == "1"
    assert not is_well_typed(App(z, z))


def test_split_type():
    assert split_type(Arrow(N, Arrow(O, N))) == ((N, O), N)
    assert split_type(Arrow(N, Arrow(O, N)), 1) == ((N,), Arrow(O, N))


def test_alpha_eq_renaming():
    assert alpha_eq(Abs(x, x), Abs(y, y))


def test_alpha_eq_respects_binder_type():
    assert not alpha_eq(Abs(x, x), Abs(Var("y", O), Var("y", O)))


def test_alpha_eq_capture_changes_meaning():
    assert not alpha_eq(T(r"\x. plus x y"), T(r"\y. plus y y"))


def test_free_vars():
    assert free_vars(T(r"\x. plus x y")) == {y}
    assert free_vars(T("s z")) == frozenset()


def test_bound_vars_at():
    t = Abs(x, App(Var("f", NN), x))
    assert bound_vars_at(t, "0") == {x}
    assert bound_vars_at(t, "") == frozenset()


def test_substitute_plain():
    assert substitute(T("plus x y"), {x: z}) == T("plus z y")


def test_substitute_avoids_capture():
    r = substitute(T(r"\x. plus x y"), {y: x})
    assert isinstance(r, Abs) and r.var != x
    assert alpha_eq(r, Abs(Var("x1", N), apply(Sym("plus", Arrow(N, NN)), [Var("x1", N), x])))
    assert show(r) == r"\x1. plus x1 x"


def test_substitute_leaves_bound_occurrence():
    assert substitute(Abs(x, x), {x: z}) == Abs(x, x)


def test_compose():
    s1 = {x: T("s y")}
    s2 = {y: T("z")}
    t = T("plus x y")
    assert alpha_eq(substitute(t, compose(s1, s2)), substitute(substitute(t, s1), s2))


def test_positions_of_lambda():
    f = Var("f", NN)
    assert positions(Abs(x, App(f, x))) == ["", "0", "00", "01"]


def test_subterm_at():
    assert subterm_at(T("plus z y"), "01") == z
    with pytest.raises(BadPosition):
        subterm_at(T("plus z y"), "11")


def test_replace_at_is_raw():
    t = Abs(x, App(s, z))
    assert replace_at(t, "01", x) == Abs(x, App(s, x))
    renamed = replace_at(t, "01", x, avoid_capture=True)
    assert free_vars(renamed) == {x}


def test_stable_subterm_examples():
    assert stable_subterm_ge(T("s (plus x y)"), T("plus x y"))
    assert not stable_subterm_ge(Abs(x, x), x)
    assert stable_subterm_ge(T("plus x y"), x)
    assert stable_subterm_gt(T("plus x y"), x)
    assert not stable_subterm_gt(x, x)


def test_shape_predicates():
    assert is_algebraic(T("plus x (s y)"))
    assert not is_algebraic(Abs(x, x))
    assert not is_linear(T("plus x x"))
    assert is_linear(T(r"\x. plus x x")) is True


def test_eta_long():
    h = Var("h", NN)
    assert not is_eta_long(h)
    assert is_eta_long(Abs(x, App(h, x)))


def test_fresh_var_uses_smallest_suffix():
    assert fresh_var(x, {"x", "x1"}).name == "x2"
    assert fresh_var(Var("x3", N), {"x1"}).name == "x2"


def test_spine_and_size():
    t = T("plus (s x) y")
    head, args = spine(t)
    assert head.name == "plus" and len(args) == 2
    assert size(t) == 7  # four atoms, three applications
    assert lam([x, y], t) == Abs(x, Abs(y, t))
