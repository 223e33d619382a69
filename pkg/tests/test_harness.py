import json

import pytest

from porkit.harness import (EquivalenceReport, build_pipeline, check_corpus,
                            check_extractor_law, check_stage_equivalence, machine_sampler,
                            mutate_flip, por_sampler, statistical_compare)
from porkit.measure import Distribution, Dyadic
from porkit.por import E, Q, eval_dist
from porkit.por_lib import corpus
from porkit.sifp import parse_sifp
from porkit.stm import StmSpec, Transition

HALF = Dyadic(1, 1)
COIN = Distribution({"0": HALF, "1": HALF})


def test_equivalence_examples():
    rep = check_stage_equivalence(Q(), [("",)], keep=True)
    assert rep.ok and rep.distributions[("",)] == COIN
    rep = check_stage_equivalence(E(), [("01",)], keep=True)
    assert rep.ok and rep.distributions[("01",)] == Distribution.point("")


def test_fault_injection_is_caught():
    f = corpus()["coinxor"]
    ra = mutate_flip(build_pipeline(f).stage_ra)
    rep = check_stage_equivalence(f, [("",), ("1",)], bundle=build_pipeline(f, ra))
    assert not rep.ok
    d = rep.first_divergence
    assert d["stages"] == ["por", "ra"] and d["input"] == ["eps"]
    assert set(d["per_stage"]) == {"por", "ra", "la", "od", "stm", "ptm"}
    assert "differ" in rep.table()


def test_mutate_needs_flip():
    with pytest.raises(ValueError):
        mutate_flip(parse_sifp("R <- eps"))


def test_extractor_law_examples():
    for k, n in ((1, 2), (3, 8), (8, 256)):
        rep = check_extractor_law(k)
        assert rep.ok and rep.details["distinct"] == n
    with pytest.raises(ValueError):
        check_extractor_law(11)


def test_statistical_examples():
    rep = statistical_compare(Distribution.point("1"), lambda rng: "1", n=100)
    assert rep.ok and rep.details["tv"] == 0
    rep = statistical_compare(COIN, lambda rng: str(rng.getrandbits(1)), n=10 ** 4, seed=7)
    assert rep.ok and rep.details["tv"] < 0.05
    rep = statistical_compare(COIN, lambda rng: "0", n=1000)
    assert not rep.ok and rep.details["tv"] == 0.5
    with pytest.raises(ValueError):
        statistical_compare(COIN, lambda rng: "0", n=0)


def test_statistical_deterministic_given_seed():
    f = corpus()["coinxor"]
    exact = eval_dist(f, ["1"])
    a = statistical_compare(exact, por_sampler(f, ["1"]), n=2000, seed=3)
    b = statistical_compare(exact, por_sampler(f, ["1"]), n=2000, seed=3)
    assert a.dumps() == b.dumps() and a.ok


def test_machine_sampler():
    ts = [Transition("q0", ("_",), "0", ("0",), ("R",), "q1"),
          Transition("q0", ("_",), "1", ("1",), ("R",), "q1")]
    m = StmSpec(("q0", "q1"), "q0", 1, tuple(ts))
    rep = statistical_compare(COIN, machine_sampler(m, [""]), n=4000, seed=1)
    assert rep.ok


@pytest.mark.parametrize("name", ["Q", "tail", "coinxor"])
def test_fuel_monotone(name):
    f = corpus()[name]
    inputs = [("",), ("1",), ("01",)]
    low = check_stage_equivalence(f, inputs, fuel=10 ** 4)
    assert low.ok and not low.divergence_mass_seen
    high = check_stage_equivalence(f, inputs, fuel=10 ** 5)
    assert high.ok


def test_reports_deterministic():
    entries = {k: corpus()[k] for k in ("E", "Q", "S1")}
    a = [r.dumps() for r in check_corpus(entries, max_len=2)]
    b = [r.dumps() for r in check_corpus(entries, max_len=2)]
    assert a == b
    assert all(json.loads(s)["status"] == "pass" for s in a)


def test_report_serialises():
    rep = EquivalenceReport("x", 10)
    doc = json.loads(rep.dumps())
    assert doc["status"] == "pass" and doc["first_divergence"] is None
