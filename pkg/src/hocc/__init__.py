"""Termination checking of higher-order rewrite systems with the
computability closure."""

from .closure import (
    CheckerConfig, Closure, Context, Report, auto_search, check_derivation,
    check_system, in_closure, verify_certificate,
)
from .orderings import Cmp, Family, OrderingConfig, Precedence
from .parser import parse_problem, parse_term, print_problem
from .system import Equation, RewriteSystem, Rule
from .terms import Abs, App, Arrow, Base, Sym, Var, alpha_eq, arrow, show

__all__ = [
    "Abs", "App", "Arrow", "Base", "CheckerConfig", "Closure", "Cmp", "Context",
    "Equation", "Family", "OrderingConfig", "Precedence", "Report", "RewriteSystem",
    "Rule", "Sym", "Var", "alpha_eq", "arrow", "auto_search", "check_derivation",
    "check_system", "in_closure", "parse_problem", "parse_term", "print_problem",
    "show", "verify_certificate",
]
