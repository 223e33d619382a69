import random

import pytest

from conftest import inputs
from porkit.bits import all_strings
from porkit.measure import Oracle
from porkit.por import BRec, E, Q, eval_por, iter_nodes
from porkit.por_lib import CONC, corpus
from porkit.porlambda import (EPS, App, Arrow, Const, FlipTable, Lam, LambdaError,
                              LambdaFuelExhausted, LambdaTypeError, LVar, S_T, Unsupported,
                              app, as_bits, denumeral, first_order, format_lterm, lambda_stdlib,
                              lambda_to_por, normalize, numeral, order, parse_lterm, parse_ltype,
                              por_to_lambda, run, typecheck)

LIB = lambda_stdlib()


def test_typecheck_examples():
    assert typecheck(parse_lterm(r"\x:s. eps")) == Arrow(S_T, S_T)
    assert typecheck(Const("Flipcoin")) == Arrow(S_T, S_T)
    t = app(Const("Cond"), EPS, EPS, EPS)
    assert typecheck(t) == Arrow(S_T, S_T)


def test_typecheck_rejects():
    with pytest.raises(LambdaTypeError):
        typecheck(app(Const("Tail"), Const("Tail")))
    with pytest.raises(LambdaTypeError):
        typecheck(app(EPS, EPS))
    with pytest.raises(LambdaError):
        typecheck(LVar("free"))


def test_types_syntax():
    ty = parse_ltype("(s => s) => s")
    assert order(ty) == 2
    assert order(first_order(3)) == 1


def test_normalize_examples():
    assert normalize(app(Const("Tail"), EPS)) == EPS
    assert normalize(app(Const("Trunc"), numeral("011"), EPS)) == EPS
    assert normalize(app(Const("Trunc"), EPS, numeral("011"))) == EPS
    t = app(Const("Flipcoin"), numeral("01"))
    assert normalize(t, FlipTable({"01": 1}, "strict")) == numeral("1")


def test_flipcoin_strict_miss_and_stuck():
    t = app(Const("Flipcoin"), numeral("01"))
    with pytest.raises(LookupError):
        normalize(t, FlipTable({}, "strict"))
    # without a table the redex stays
    assert normalize(t) == t


def test_numeral_examples():
    assert numeral("") == EPS
    assert numeral("01") == app(Const("o"), app(Const("o"), EPS, Const("0")), Const("1"))
    assert denumeral(numeral("110")) == "110"
    with pytest.raises(LambdaError):
        denumeral(Lam("x", S_T, EPS))


def test_numeral_roundtrip_exhaustive():
    for s in all_strings(6):
        assert denumeral(numeral(s)) == s
        assert as_bits(numeral(s)) == s


def test_fuel_exhaustion():
    t = app(LIB["Eq"], numeral("0101"), numeral("0101"))
    with pytest.raises(LambdaFuelExhausted):
        normalize(t, fuel=20)


def test_parse_format_roundtrip():
    for name, t in LIB.items():
        assert parse_lterm(format_lterm(t)) == t, name


SPEC = {
    "B": lambda x: x[-1:],
    "BNeg": lambda x: {"": "", "0": "1", "1": "0"}[x[-1:]],
    "BOr": lambda x, y: "1" if x[-1:] == "1" else y[-1:],
    "BAnd": lambda x, y: {"": "", "0": "0", "1": y[-1:]}[x[-1:]],
    "Eps": lambda x: "1" if x == "" else "0",
    "Bool": lambda x: "1" if len(x) == 1 else "0",
    "Zero": lambda x: "1" if x == "0" else "0",
    "Conc": lambda x, y: x + y,
    "Times": lambda x, y: x * len(y),
    "Drop": lambda x, y: x[: max(len(x) - len(y), 0)],
    "At": lambda x, u: x[len(u)] if len(u) < len(x) else "",
    "Eq": lambda x, y: "1" if x == y else "0",
    "Sub": lambda x, y: "1" if y.startswith(x) else "0",
}


@pytest.mark.parametrize("name", sorted(SPEC))
def test_stdlib_matches_spec(name):
    t = LIB[name]
    n = 1 if SPEC[name].__code__.co_argcount == 1 else 2
    for args in inputs(n, 4):
        assert run(t, list(args)) == SPEC[name](*args), (name, args)


def test_stdlib_examples():
    assert run(LIB["Eq"], ["01", "01"]) == "1"
    assert run(LIB["Sub"], ["0", "01"]) == "1"
    assert run(LIB["Eps"], [""]) == "1"
    assert run(LIB["Eps"], ["0"]) == "0"


def test_bool_of_flipcoin():
    rng = random.Random(1)
    for s in all_strings(3):
        for _ in range(4):
            table = FlipTable({s: rng.randrange(2)}, "strict")
            t = app(LIB["Bool"], app(Const("Flipcoin"), numeral(s)))
            assert normalize(t, table) == numeral("1")


def test_subject_reduction_checked():
    # check_types re-types every contracted redex
    for name in ("Eq", "Sub", "Times"):
        t = app(LIB[name], numeral("10"), numeral("101"))
        out = normalize(t, None, check_types=True)
        assert typecheck(out) == S_T


def test_por_to_lambda_examples():
    assert por_to_lambda(E()) == Lam("x", S_T, EPS)
    assert por_to_lambda(Q()) == Const("Flipcoin")
    t = por_to_lambda(CONC)
    assert isinstance(t, Lam)
    body = t
    while isinstance(body, Lam):
        body = body.body
    head = body
    while isinstance(head, App):
        head = head.fn
    assert head == Const("Rec")


def _tables(rng, n=10):
    coords = list(all_strings(8))
    return [{c: rng.randrange(2) for c in coords} for _ in range(n)]


@pytest.mark.parametrize("name", ["E", "P2_2", "S1", "Q", "tail", "coinxor", "nestq"])
def test_por_to_lambda_faithful(name):
    f = corpus()[name]
    t = por_to_lambda(f)
    rng = random.Random(hash(name) % 1000)
    for table in _tables(rng, 3):
        for args in inputs(f.arity, 2):
            want = eval_por(f, list(args), Oracle(table, "zero"))
            assert run(t, list(args), FlipTable(table, "zero")) == want


def test_lambda_to_por_examples():
    f = lambda_to_por(parse_lterm(r"\x:s. eps"))
    assert f == E()
    assert lambda_to_por(Const("Flipcoin")) == Q()
    g = lambda_to_por(LIB["Conc"])
    assert any(isinstance(n, BRec) for n in iter_nodes(g))
    zero = Oracle({}, "zero")
    for x, y in inputs(2, 4):
        assert eval_por(g, [x, y], zero) == x + y


def test_lambda_to_por_rejects_higher_order():
    t = parse_lterm(r"\f:s => s. f eps")
    with pytest.raises(Unsupported):
        lambda_to_por(t)
    with pytest.raises(Unsupported):
        lambda_to_por(EPS)


def test_roundtrip_small():
    f = corpus()["coinxor"]
    g = lambda_to_por(por_to_lambda(f))
    rng = random.Random(3)
    for table in _tables(rng, 3):
        o = Oracle(table, "zero")
        for args in inputs(1, 2):
            assert eval_por(g, list(args), o) == eval_por(f, list(args), o)
