import json
from dataclasses import replace

import pytest

from gen import load, parser
from hocc.certificate import (
    SCHEMA, Certificate, Node, Obligation, certificate_from_json, certificate_to_json,
    check_obligation,
)
from hocc.cli import config_from
from hocc.closure import Context, check_certificate, check_system, verify_certificate
from hocc.errors import CertificateError
from hocc.orderings import Family


def _report(name):
    system = load(name)
    config = config_from(system)
    return system, config, check_system(system, config)


def _swap(cert, index, derivation):
    obs = list(cert.obligations)
    ob = obs[index]
    obs[index] = Obligation(ob.kind, ob.id, ob.head, ob.lhs_args, ob.target, derivation)
    return replace(cert, obligations=obs)


def test_schema_covers_every_operation():
    assert set(SCHEMA) == {"arg", "app", "red", "undef-basic", "var", "abs", "subterm-basic",
                           "rec", "undef", "subterm-acc", "mod", "subterm-abs",
                           "subterm-app", "eta"}


def test_json_round_trip():
    system, config, rep = _report("plus_times")
    text = certificate_to_json(rep.certificate)
    doc = json.loads(text)
    assert doc["family"] == "subterm-stat" and len(doc["obligations"]) == 6
    back = certificate_from_json(text, system)
    assert verify_certificate(system, config, back)
    assert certificate_to_json(back) == text


def test_json_round_trip_binders():
    system, config, rep = _report("rec_ordinal")
    back = certificate_from_json(certificate_to_json(rep.certificate), system)
    assert verify_certificate(system, config, back)


def test_failing_rec_is_rejected():
    system, config, rep = _report("ackermann")
    cert = rep.certificate
    ob = cert.obligations[2]  # ack (s m) (s n) -> ack m (ack (s m) n)
    T = parser(system)
    # claim the lhs itself as a recursive call
    args = ob.lhs_args
    bad = Node("rec", T("ack (s m) (s n)"), {"symbol": "ack", "arity": 2},
               [Node("arg", args[0], {"index": 1}), Node("arg", args[1], {"index": 2})])
    ob2 = Obligation(ob.kind, ob.id, ob.head, ob.lhs_args, T("ack (s m) (s n)"), bad)
    with pytest.raises(CertificateError, match="does not decrease"):
        check_obligation(Context(system, config), ob2)


def test_wrong_subterm_acc_index():
    system, config, rep = _report("ordinal")
    cert = rep.certificate
    i, ob = next((i, ob) for i, ob in enumerate(cert.obligations)
                 if "subterm-acc" in ob.derivation.ops())
    path, node = next((p, n) for p, n in ob.derivation.walk() if n.op == "subterm-acc")

    def rebuild(n, p=""):
        if p == path:
            return Node(n.op, n.goal, {**n.params, "index": n.params["index"] + 1}, n.children)
        return Node(n.op, n.goal, n.params,
                    [rebuild(c, f"{p}.{j}" if p else str(j)) for j, c in enumerate(n.children)])

    bad = _swap(cert, i, rebuild(ob.derivation))
    assert not verify_certificate(system, config, bad)
    with pytest.raises(CertificateError) as err:
        check_certificate(system, config, bad)
    assert err.value.path == path


def test_other_configuration_rejected():
    system, config, rep = _report("ackermann")
    other = replace(config, ordering=replace(config.ordering, family=Family.SUBTERM_MUL))
    assert not verify_certificate(system, other, rep.certificate)


def test_missing_obligation_rejected():
    system, config, rep = _report("ackermann")
    short = replace(rep.certificate, obligations=rep.certificate.obligations[:-1])
    assert not verify_certificate(system, config, short)


def test_unknown_op_and_arity():
    system, config, rep = _report("minus")
    ob = rep.certificate.obligations[1]
    for bad in (Node("magic", ob.target, {}), Node("arg", ob.target, {"index": 1, "x": 2}),
                Node("app", ob.target, {}, [])):
        with pytest.raises(CertificateError):
            check_obligation(Context(system, config),
                             Obligation(ob.kind, ob.id, ob.head, ob.lhs_args, ob.target, bad))


def test_pretty():
    system, config, rep = _report("godel_t")
    lines = rep.obligations[0].derivation.pretty()
    assert lines == ["arg: u  [index=2]"]
