"""Derivation trees, their JSON form, and an independent checker."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator

from .errors import CertificateError, HoccError
from .reduction import eta_eq
from .terms import (
    Abs, App, Base, Sym, Term, Var, alpha_eq, free_vars, free_vars_of, show,
    spine, split_type, stable_subterms, substitute, type_of, variables_of,
)

# parameter keys and child counts per operation; ``None`` means "any"
SCHEMA: dict[str, tuple[frozenset, int | None]] = {
    "arg": (frozenset({"index"}), 0),
    "app": (frozenset(), 2),
    "red": (frozenset({"position", "via"}), 1),
    "undef-basic": (frozenset({"basic_type"}), 0),
    "var": (frozenset({"var"}), 0),
    "abs": (frozenset({"binder"}), 1),
    "subterm-basic": (frozenset({"position"}), 1),
    "rec": (frozenset({"symbol", "arity"}), None),
    "undef": (frozenset({"symbol"}), 0),
    "subterm-acc": (frozenset({"symbol", "index"}), 1),
    "mod": (frozenset(), 1),
    "subterm-abs": (frozenset({"binder"}), 1),
    "subterm-app": (frozenset({"var"}), 1),
    "eta": (frozenset(), 1),
}
OPS = tuple(SCHEMA)
VAR_PARAMS = ("var", "binder")


@dataclass
class Node:
    op: str
    goal: Term
    params: dict = field(default_factory=dict)
    children: list["Node"] = field(default_factory=list)

    def walk(self, path: str = "") -> Iterator[tuple[str, "Node"]]:
        yield path, self
        for i, c in enumerate(self.children):
            yield from c.walk(f"{path}.{i}" if path else str(i))

    def ops(self) -> list[str]:
        seen: list[str] = []
        for _, n in self.walk():
            if n.op not in seen:
                seen.append(n.op)
        return seen

    def size(self) -> int:
        return sum(1 for _ in self.walk())

    def substitute(self, sigma) -> "Node":
        return Node(self.op, substitute(self.goal, sigma), dict(self.params),
                    [c.substitute(sigma) for c in self.children])

    def pretty(self, indent: int = 0) -> list[str]:
        ps = ", ".join(f"{k}={_param_text(v)}" for k, v in self.params.items())
        line = "  " * indent + f"{self.op}: {show(self.goal)}" + (f"  [{ps}]" if ps else "")
        out = [line]
        for c in self.children:
            out += c.pretty(indent + 1)
        return out


@dataclass
class Obligation:
    kind: str  # "rule" or "equation"
    id: str
    head: Sym
    lhs_args: tuple[Term, ...]
    target: Term
    derivation: Node | None = None
    frontier: list[Term] = field(default_factory=list)

    @property
    def proved(self) -> bool:
        return self.derivation is not None

    def substitute(self, sigma) -> "Obligation":
        return Obligation(self.kind, self.id, self.head,
                          tuple(substitute(a, sigma) for a in self.lhs_args),
                          substitute(self.target, sigma),
                          self.derivation.substitute(sigma) if self.derivation else None)


@dataclass
class Certificate:
    mode: str
    interpretation: str
    family: str
    obligations: list[Obligation]


def _param_text(v) -> str | int:
    if isinstance(v, (Var, Sym)):
        return v.name
    return v


# ---------------------------------------------------------------- checking


def check_obligation(ctx, ob: Obligation) -> None:
    """Re-verify one derivation; raises :class:`CertificateError`."""
    if ob.derivation is None:
        raise CertificateError("", f"{ob.id} has no derivation")
    if not alpha_eq(ob.derivation.goal, ob.target):
        raise CertificateError("", f"root proves {show(ob.derivation.goal)}, not {show(ob.target)}")
    lhs_fv = free_vars_of(ob.lhs_args)
    _check(ctx, ob, lhs_fv, ob.derivation, "")


def _check(ctx, ob: Obligation, lhs_fv, node: Node, path: str) -> None:
    def fail(reason: str):
        raise CertificateError(path, f"{node.op}: {reason}")

    if node.op not in SCHEMA:
        fail("unknown operation")
    keys, nchild = SCHEMA[node.op]
    if set(node.params) != keys:
        fail(f"parameters {sorted(node.params)} do not fit")
    if nchild is not None and len(node.children) != nchild:
        fail(f"expected {nchild} premises")
    if not isinstance(node.goal, Term):
        fail("goal is not a term")
    try:
        type_of(node.goal)
    except HoccError as e:
        fail(str(e))
    for i, c in enumerate(node.children):
        _check(ctx, ob, lhs_fv, c, f"{path}.{i}" if path else str(i))
    try:
        ok, why = _side_condition(ctx, ob, lhs_fv, node)
    except HoccError as e:
        ok, why = False, str(e)
    except (IndexError, KeyError, TypeError, ValueError) as e:
        ok, why = False, f"malformed: {e}"
    if not ok:
        fail(why)


def _int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _side_condition(ctx, ob, lhs_fv, node: Node) -> tuple[bool, str]:
    g, p, ch = node.goal, node.params, node.children
    op = node.op
    if op == "arg":
        i = p["index"]
        if not _int(i) or not 1 <= i <= len(ob.lhs_args):
            return False, "index out of range"
        return alpha_eq(g, ob.lhs_args[i - 1]), "goal is not that argument"
    if op == "var":
        v = p["var"]
        if not (isinstance(g, Var) and g == v):
            return False, "goal differs from the variable"
        return g not in lhs_fv, "variable occurs in the left-hand side"
    if op == "abs":
        x = p["binder"]
        if not (isinstance(g, Abs) and g.var == x):
            return False, "goal is not an abstraction on the binder"
        if x in lhs_fv:
            return False, "binder occurs in the left-hand side"
        return alpha_eq(g.body, ch[0].goal), "body differs from premise"
    if op == "app":
        if not isinstance(g, App):
            return False, "goal is not an application"
        return alpha_eq(g.fun, ch[0].goal) and alpha_eq(g.arg, ch[1].goal), "premises differ"
    if op == "red":
        pos, via = p["position"], p["via"]
        if not isinstance(pos, str) or not isinstance(via, str):
            return False, "bad parameters"
        for s in ctx.one_step(ch[0].goal):
            if s.position == pos and s.kind == via and alpha_eq(s.result, g):
                return True, ""
        return False, "no such reduction step"
    if op == "undef-basic":
        if not isinstance(g, Sym) or g.name in ctx.defined:
            return False, "not an undefined symbol"
        cod = split_type(g.type)[1]
        if p["basic_type"] != cod.name:
            return False, "wrong codomain"
        return ctx.is_basic(cod.name), "codomain not basic"
    if op == "undef":
        if ctx.interpretation != "acc":
            return False, "needs the accessible interpretation"
        if not isinstance(g, Sym) or g.name in ctx.defined or p["symbol"] != g.name:
            return False, "not an undefined symbol"
        return True, ""
    if op == "subterm-basic":
        pos = p["position"]
        if not isinstance(pos, str) or not pos:
            return False, "needs a strict position"
        ty = type_of(g)
        if not isinstance(ty, Base) or not ctx.is_basic(ty.name):
            return False, "type is not basic"
        for q, s in stable_subterms(ch[0].goal):
            if q == pos:
                return alpha_eq(s, g), "subterm differs"
        return False, "no stable subterm there"
    if op == "rec":
        sym, n = p["symbol"], p["arity"]
        head, args = spine(g)
        if not (isinstance(head, Sym) and head.name == sym and _int(n) and len(args) == n):
            return False, "goal is not that call"
        if len(ch) != n or not all(alpha_eq(a, c.goal) for a, c in zip(args, ch)):
            return False, "premises differ from arguments"
        return ctx.rec_decrease(ob.head, ob.lhs_args, head, args), "call does not decrease"
    if op == "subterm-acc":
        sym, i = p["symbol"], p["index"]
        head, args = spine(ch[0].goal)
        if not (isinstance(head, Sym) and head.name == sym):
            return False, "premise head differs"
        if sym not in ctx.matched:
            return False, "symbol is not matched"
        if not isinstance(type_of(ch[0].goal), Base):
            return False, "premise not of base type"
        if not _int(i) or i not in ctx.accessible(sym) or i > len(args):
            return False, "argument not accessible"
        return alpha_eq(args[i - 1], g), "goal is not that argument"
    if op == "mod":
        if ctx.mode != "modulo":
            return False, "only modulo equations"
        return ctx.eq_equivalent(ch[0].goal, g), "not equivalent modulo E"
    if op == "subterm-abs":
        if ctx.mode != "hopm":
            return False, "only in pattern mode"
        x = p["binder"]
        if not isinstance(x, Var) or x in lhs_fv:
            return False, "bad binder"
        return alpha_eq(Abs(x, g), ch[0].goal), "premise is not λ of the goal"
    if op == "subterm-app":
        if ctx.mode != "hopm":
            return False, "only in pattern mode"
        x = p["var"]
        if not isinstance(x, Var) or x in lhs_fv or x in free_vars(g):
            return False, "bad variable"
        return alpha_eq(App(g, x), ch[0].goal), "premise is not goal applied to the variable"
    if op == "eta":
        if ctx.mode != "hopm":
            return False, "only in pattern mode"
        return eta_eq(g, ch[0].goal), "not η-equivalent"
    return False, "unknown operation"


# ---------------------------------------------------------------- JSON


def _term_vars(cert: Certificate) -> dict[str, str]:
    table: dict[str, str] = {}

    def add(t: Term):
        for v in variables_of(t):
            ty = str(v.type)
            if table.setdefault(v.name, ty) != ty:
                raise HoccError(f"variable {v.name} used at two types")

    for ob in cert.obligations:
        for a in ob.lhs_args:
            add(a)
        add(ob.target)
        if ob.derivation:
            for _, n in ob.derivation.walk():
                add(n.goal)
                for k in VAR_PARAMS:
                    if k in n.params and isinstance(n.params[k], Var):
                        add(n.params[k])
    return dict(sorted(table.items()))


def _node_json(n: Node) -> dict:
    return {
        "op": n.op,
        "goal": show(n.goal),
        "params": {k: _param_text(v) for k, v in n.params.items()},
        "children": [_node_json(c) for c in n.children],
    }


def certificate_to_json(cert: Certificate) -> str:
    doc = {
        "mode": cert.mode,
        "interpretation": cert.interpretation,
        "family": cert.family,
        "variables": _term_vars(cert),
        "obligations": [
            {
                "kind": ob.kind,
                "id": ob.id,
                "head": ob.head.name,
                "lhs_args": [show(a) for a in ob.lhs_args],
                "target": show(ob.target),
                "derivation": _node_json(ob.derivation) if ob.derivation else None,
            }
            for ob in cert.obligations
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def certificate_from_json(text: str, system) -> Certificate:
    from .parser import parse_term, parse_type
    doc = json.loads(text)
    vars_ = {name: Var(name, parse_type(ty, system.sorts)) for name, ty in doc["variables"].items()}

    def term(s: str) -> Term:
        return parse_term(s, system.signature, vars_, system.sorts)

    def node(d: dict) -> Node:
        params = {}
        for k, v in d["params"].items():
            params[k] = vars_[v] if k in VAR_PARAMS and isinstance(v, str) and v in vars_ else v
        return Node(d["op"], term(d["goal"]), params, [node(c) for c in d["children"]])

    obs = []
    for o in doc["obligations"]:
        obs.append(Obligation(o["kind"], o["id"], system.sym(o["head"]),
                              tuple(term(a) for a in o["lhs_args"]), term(o["target"]),
                              node(o["derivation"]) if o["derivation"] else None))
    return Certificate(doc["mode"], doc["interpretation"], doc["family"], obs)
