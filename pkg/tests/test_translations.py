import itertools
import random

import pytest

from conftest import inputs
from porkit.bits import all_strings
from porkit.compile_sifp import (decode_kv_list, encode_kv_list, por_to_sifpra,
                                 sifpra_to_sifpla)
from porkit.compile_stm import sifpla_to_odstm
from porkit.harness import build_pipeline, stage_distributions
from porkit.measure import BitStream, Distribution, Dyadic
from porkit.por import Comp, E, P, Q, S, eval_dist
from porkit.por_lib import corpus, stdlib
from porkit.sifp import (Append, Assign, RandBit, Reg, Seq, SifpError, assigned_registers,
                         format_stmt, inputs_store, iter_stmts, parse_sifp, run_la, run_la_dist,
                         run_ra_dist)
from porkit.stm import run, run_dist

HALF = Dyadic(1, 1)
COIN = Distribution({"0": HALF, "1": HALF})


def test_por_to_sifpra_examples():
    assert format_stmt(por_to_sifpra(E()).body) == "R <- eps"
    assert format_stmt(por_to_sifpra(Q()).body) == "flip(X1)"
    f = Comp(S("1"), (P(1, 1),))
    prog = por_to_sifpra(f)
    for (x,) in inputs(1, 3):
        assert run_ra_dist(prog, {"X1": x}) == eval_dist(f, [x])


@pytest.mark.parametrize("name", list(corpus()))
def test_inputs_never_assigned(name):
    prog = por_to_sifpra(corpus()[name])
    assert not any(r.startswith("X") for r in assigned_registers(prog.body))


def _counted(s):
    # count randbit executions in a spare register
    if isinstance(s, RandBit):
        return Seq((s, Assign("Y99", Append(Reg("Y99"), "1"))))
    if isinstance(s, Seq):
        return Seq(tuple(_counted(t) for t in s.body))
    from porkit.sifp import While
    if isinstance(s, While):
        return While(s.guard, _counted(s.body))
    return s


def _paths(la, store, n):
    """(output, consumed, randbit count) for every stream of length n."""
    prog = type(la)(_counted(la.body), "LA")
    out = set()
    for bits in itertools.product("01", repeat=n):
        st, used = run_la(prog, store, BitStream("".join(bits)))
        out.add((st.get("R", ""), used, len(st.get("Y99", ""))))
    return out


def test_ra_to_la_examples():
    one = sifpra_to_sifpla(parse_sifp("flip(eps)"))
    assert run_la_dist(one) == COIN
    twice = sifpra_to_sifpla(parse_sifp("flip(eps); flip(eps)"))
    assert run_la_dist(twice) == COIN
    assert {used for _, used, _ in _paths(twice, {}, 2)} == {1}
    two = sifpra_to_sifpla(parse_sifp("flip(eps); flip(eps.0)"))
    assert {used for _, used, _ in _paths(two, {}, 2)} == {2}
    # R ends as the second bit; all four streams are distinct outcomes
    p = parse_sifp("flip(eps); Y1 <- R; flip(eps.0); Y2 <- R")
    la = sifpra_to_sifpla(p)
    outs = []
    for bits in itertools.product("01", repeat=2):
        st, _ = run_la(la, {}, BitStream("".join(bits)))
        outs.append((st["Y1"], st["Y2"]))
    assert sorted(outs) == [("0", "0"), ("0", "1"), ("1", "0"), ("1", "1")]


def test_ra_to_la_rejects_reserved():
    with pytest.raises(SifpError):
        sifpra_to_sifpla(parse_sifp("T <- eps; flip(eps)"))


@pytest.mark.parametrize("name", ["Q", "coinxor", "qprefixes", "collide", "nestq"])
def test_bits_consumed_equals_randbits(name):
    f = corpus()[name]
    la = sifpra_to_sifpla(por_to_sifpra(f))
    for args in inputs(f.arity, 1):
        for _, used, count in _paths(la, inputs_store(args), 6):
            assert used == count


def test_odstm_examples():
    m = sifpla_to_odstm(parse_sifp("R <- eps.1", "LA"), 0)
    out, _, used = run(m, [], BitStream(""))
    assert out == "1" and used == 0
    m = sifpla_to_odstm(parse_sifp("randbit()"), 0)
    assert run_dist(m, []) == COIN
    for s in ("0", "1"):
        assert run(m, [], BitStream(s + "11"))[2] == 1


def test_odstm_deterministic_corpus_program():
    f = stdlib()["eq"]
    la = sifpra_to_sifpla(por_to_sifpra(f))
    m = sifpla_to_odstm(la, 2)
    for x, y in inputs(2, 2):
        st, _ = run_la(la, inputs_store([x, y]), BitStream(""))
        out, _, used = run(m, [x, y], BitStream(""))
        assert used == 0 and out == st["R"]


def test_kv_examples():
    assert encode_kv_list([]) == ""
    assert encode_kv_list([("", 1)]) == "011100"
    assert decode_kv_list("011100") == [("", 1)]
    with pytest.raises(ValueError):
        decode_kv_list("0111")
    with pytest.raises(ValueError):
        decode_kv_list("011")


def test_kv_roundtrip_random():
    rng = random.Random(0)
    keys = list(all_strings(4))
    for _ in range(100):
        entries = [(rng.choice(keys), rng.randrange(2)) for _ in range(rng.randint(0, 6))]
        assert decode_kv_list(encode_kv_list(entries)) == entries


def test_kv_roundtrip_exhaustive_small():
    entry_pool = [(k, b) for k in all_strings(2) for b in (0, 1)]
    for n in range(3):
        for entries in itertools.product(entry_pool, repeat=n):
            entries = list(entries)
            code = encode_kv_list(entries)
            assert decode_kv_list(code) == entries
            # prefix decodable: every entry boundary is visible from the left
            assert code.endswith("00") or not entries


def test_build_pipeline_examples():
    b = build_pipeline(Q())
    dists = stage_distributions(b, [""])
    assert all(d == COIN for d in dists.values())
    b = build_pipeline(E())
    assert all(d == Distribution.point("") for d in stage_distributions(b, ["01"]).values())
    b = build_pipeline(stdlib()["eq"])
    for x, y in inputs(2, 1):
        for d in stage_distributions(b, [x, y]).values():
            assert d == Distribution.point("1" if x == y else "0")
    man = b.manifest()
    assert set(man["passes"]) >= {"por_to_sifpra", "sifpra_to_sifpla", "sifpla_to_odstm"}
    assert set(man["digests"]) == {"por", "ra", "la", "od", "stm", "ptm"}
