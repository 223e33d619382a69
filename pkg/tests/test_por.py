import random
from pathlib import Path

import pytest

from conftest import as_fractions, inputs, por_histogram
from porkit.bits import all_strings, is_initial_subword
from porkit.measure import Distribution, Dyadic, Oracle, OracleMiss
from porkit.por import (BBit, BCat, BEps, BRec, BTimes, BX, BY, C, Comp, CoordinateCapExceeded, E,
                        FuelExhausted, P, PorError, Q, S, eval_bound, eval_dist, eval_por,
                        format_por, has_query, iter_nodes, parse_bound, parse_por, size_bound)
from porkit.por_lib import AND, corpus, stdlib

HALF = Dyadic(1, 1)
LIB = stdlib()
ZERO = Oracle({}, "zero")


def test_cond_example():
    assert eval_por(C(), ["", "10", "0", "1"], ZERO) == "10"
    assert eval_por(C(), ["10", "11", "0", "1"], ZERO) == "0"
    assert eval_por(C(), ["01", "11", "0", "1"], ZERO) == "1"


def test_query_example():
    assert eval_por(Q(), ["01"], Oracle({"01": 1}, "strict")) == "1"


def test_substring_conditional_example():
    assert eval_por(LIB["sub"], ["0", "01"], ZERO) == "1"


def test_basic_functions():
    assert eval_por(E(), ["1011"], ZERO) == ""
    assert eval_por(P(3, 2), ["a", "b", "c"], ZERO) == "b"
    assert eval_por(S("0"), ["1"], ZERO) == "10"
    assert eval_por(S("1"), ["1"], ZERO) == "11"


def test_arity_checks():
    with pytest.raises(PorError):
        P(2, 3)
    with pytest.raises(PorError):
        Comp(C(), (P(1, 1),))
    with pytest.raises(PorError):
        Comp(S("1"), (P(1, 1), P(2, 1)))
    with pytest.raises(PorError):
        BRec(E(), P(2, 1), P(3, 1), BX(1))
    with pytest.raises(PorError):
        BRec(E(), P(3, 1), P(3, 1), BX(2))  # bound mentions x2, arity(g)=1
    with pytest.raises(PorError):
        eval_por(S("1"), ["0", "1"], ZERO)


def test_strict_oracle_miss():
    with pytest.raises(OracleMiss):
        eval_por(Q(), ["1"], Oracle({}, "strict"))


def test_fuel_exhausted():
    with pytest.raises(FuelExhausted):
        eval_por(LIB["eq"], ["0101", "0101"], ZERO, fuel=10)


def test_eval_dist_examples():
    qp = Comp(Q(), (P(1, 1),))
    assert eval_dist(qp, ["01"]) == Distribution({"0": HALF, "1": HALF})
    assert eval_dist(E(), ["1011"]) == Distribution.point("")
    # Q(x) AND Q(x): the second query reuses the first bit
    qq = Comp(AND, (qp, qp))
    assert eval_dist(qq, ["0"]) == Distribution({"0": HALF, "1": HALF})


def test_eval_dist_divergence_and_cap():
    d = eval_dist(LIB["eq"], ["0101", "0101"], fuel=10)
    assert d.divergence_mass == Dyadic(1) and not d.weights
    with pytest.raises(CoordinateCapExceeded):
        eval_dist(LIB["qprefixes"], ["111"], coord_cap=2)


def test_size_bound_examples():
    assert size_bound(E()) == BEps()
    assert size_bound(S("1")) == BCat(BX(1), BBit("1"))
    for x in all_strings(4):
        assert len(eval_por(S("1"), [x], ZERO)) <= len(eval_bound(size_bound(S("1")), [x]))


@pytest.mark.parametrize("name", ["conc", "tail", "eq", "sub", "times", "qprefixes", "collide"])
def test_size_bound_holds(name):
    f = LIB[name]
    t = size_bound(f)
    for args in inputs(f.arity, 4 if f.arity == 1 else 3):
        for v in por_histogram(f, args):
            assert len(v) <= len(eval_bound(t, list(args)))


def test_stdlib_examples():
    assert eval_por(LIB["sub"], ["0", "01"], ZERO) == "1"
    assert eval_por(LIB["eq"], ["01", "01"], ZERO) == "1"
    assert eval_por(LIB["tail"], [""], ZERO) == ""


# reference implementations for the derived functions (frozen brute force)
def _last_is1(x):
    return "1" if x[-1:] == "1" else "0"


REFERENCE = {
    "tail": lambda x: x[:-1],
    "is1": _last_is1,
    "is0": lambda x: "1" if x[-1:] == "0" else "0",
    "not": lambda x: "0" if x[-1:] == "1" else "1",
    "and": lambda x, y: "1" if x[-1:] == "1" and y[-1:] == "1" else "0",
    "or": lambda x, y: "1" if "1" in (x[-1:], y[-1:]) else "0",
    "xor": lambda x, y: "1" if (x[-1:] == "1") != (y[-1:] == "1") else "0",
    "trunc": lambda x, y: x[: len(y)],
    "sub": lambda x, y: "1" if y.startswith(x) else "0",
    "eq": lambda x, y: "1" if x == y else "0",
    "conc": lambda x, y: x + y,
    "times": lambda x, y: x * len(y),
}


@pytest.mark.parametrize("name", sorted(REFERENCE))
def test_stdlib_matches_reference(name):
    f = LIB[name]
    for args in inputs(f.arity, 4 if f.arity == 1 else 3):
        assert eval_por(f, list(args), ZERO) == REFERENCE[name](*args), (name, args)


def test_determinism_and_oracle_irrelevance():
    rng = random.Random(3)
    for name, f in LIB.items():
        if has_query(f):
            continue
        for args in inputs(f.arity, 2):
            base = eval_por(f, list(args), ZERO)
            for _ in range(20):
                table = {c: rng.randrange(2) for c in all_strings(3)}
                assert eval_por(f, list(args), Oracle(table, "one")) == base
            assert eval_dist(f, list(args)) == Distribution.point(base)


@pytest.mark.parametrize("name", list(corpus()))
def test_eval_dist_matches_brute_force(name):
    f = corpus()[name]
    for args in inputs(f.arity, 3 if f.arity <= 2 else 1):
        d = eval_dist(f, list(args))
        assert d.total() == Dyadic(1)
        assert as_fractions(d) == por_histogram(f, args), args


def test_syntax_roundtrip():
    for f in list(LIB.values()) + list(corpus().values()):
        assert parse_por(format_por(f)) == f
    b = BCat(BTimes(BX(1), BY()), BBit("0"))
    assert parse_bound(str(b)) == b
    with pytest.raises(PorError):
        parse_por("(P 1 2)")
    with pytest.raises(PorError):
        parse_por("(comp (S1)")


def test_shipped_corpus_files_match():
    d = Path(__import__("porkit").__file__).parent / "corpus"
    files = sorted(d.glob("*.por"))
    lib = corpus()
    assert len(files) == 13
    for path, name in zip(files, lib):
        text = path.read_text()
        assert text.splitlines()[0] == f"; {name}"
        assert parse_por(text) == lib[name]


def test_iter_nodes_counts_queries():
    assert has_query(LIB["coinxor"])
    assert not has_query(LIB["eq"])
    assert sum(isinstance(n, Q) for n in iter_nodes(LIB["coinxor"])) == 2


def test_truncation_law_prefix():
    # truncated recursion values are always prefixes of the unbounded run
    f = BRec(P(1, 1), Comp(S("0"), (P(3, 3),)), Comp(S("1"), (P(3, 3),)), BBit("1"))
    for x in all_strings(3):
        for y in all_strings(3):
            out = eval_por(f, [x, y], ZERO)
            if y:
                assert out == (x + y)[:1]
            else:
                assert out == x
            assert is_initial_subword(out, x + y)
