"""Cross-stage equivalence checks, the extractor law, and a seeded
statistical fallback for distributions too large to enumerate."""

import hashlib
import json
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .bits import all_tuples, dyad, format_bits
from .compile_sifp import por_to_sifpra, sifpra_to_sifpla
from .compile_stm import sifpla_to_odstm
from .measure import BitStream, Distribution, Oracle, StreamUnderrun, extractor_e
from .por import FuelExhausted, PorFn, eval_dist, eval_por, pretty_por
from .sifp import (Append, Flip, Program, Seq, While, format_stmt, inputs_store,
                   run_la_dist, run_ra_dist)
from .stm import MachineFuelExhausted, format_machine, h_encode, run, run_dist, stm_to_ptm

STAGES = ("por", "ra", "la", "od", "stm", "ptm")
PASS_VERSIONS = {
    "por_to_sifpra": "1",
    "sifpra_to_sifpla": "1",
    "sifpla_to_odstm": "1",
    "h_encode": "1",
    "stm_to_ptm": "1",
}


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class PipelineBundle:
    source: PorFn
    stage_ra: Program
    stage_la: Program
    stage_od: object
    stage_stm: object
    stage_ptm: object
    provenance: dict = field(default_factory=dict, compare=False)

    def texts(self) -> dict:
        return {
            "por": pretty_por(self.source) + "\n",
            "ra": format_stmt(self.stage_ra.body) + "\n",
            "la": format_stmt(self.stage_la.body) + "\n",
            "od": format_machine(self.stage_od),
            "stm": format_machine(self.stage_stm),
            "ptm": format_machine(self.stage_ptm),
        }

    def manifest(self) -> dict:
        return {
            "passes": dict(PASS_VERSIONS),
            "arity": self.source.arity,
            "digests": {k: _digest(v) for k, v in self.texts().items()},
            "sizes": {
                "od_states": len(self.stage_od.states),
                "od_transitions": len(self.stage_od.transitions),
                "tapes": self.stage_od.tapes,
            },
            **self.provenance,
        }


def build_pipeline(f: PorFn, ra: Program = None) -> PipelineBundle:
    """Compile f through every stage.  A replacement RA program may be
    given, in which case the later stages are compiled from it."""
    custom = ra is not None
    ra = ra if custom else por_to_sifpra(f)
    la = sifpra_to_sifpla(ra)
    od = sifpla_to_odstm(la, f.arity)
    stm = h_encode(od)
    ptm = stm_to_ptm(stm)
    prov = {"ra_source": "supplied" if custom else "compiled"}
    return PipelineBundle(f, ra, la, od, stm, ptm, prov)


def stage_distributions(bundle: PipelineBundle, args, fuel: int = 10 ** 5,
                        coord_cap: int = 24) -> dict:
    args = list(args)
    store = inputs_store(args)
    return {
        "por": eval_dist(bundle.source, args, fuel=fuel, coord_cap=coord_cap),
        "ra": run_ra_dist(bundle.stage_ra, store, fuel=fuel, coord_cap=coord_cap),
        "la": run_la_dist(bundle.stage_la, store, fuel=fuel, max_bits=coord_cap),
        "od": run_dist(bundle.stage_od, args, fuel=fuel, max_depth=coord_cap),
        "stm": run_dist(bundle.stage_stm, args, fuel=fuel, max_depth=4 * fuel),
        "ptm": run_dist(bundle.stage_ptm, args, fuel=fuel, max_depth=4 * fuel),
    }


def _diverging_value(a: Distribution, b: Distribution):
    keys = sorted(set(a.weights) | set(b.weights), key=lambda s: (len(s), s))
    for k in keys:
        if a.weights.get(k) != b.weights.get(k):
            return k
    return None  # only the divergence masses differ


@dataclass
class EquivalenceReport:
    entry: str
    fuel: int
    inputs_checked: int = 0
    distributions: dict = field(default_factory=dict)
    first_divergence: Optional[dict] = None
    divergence_mass_seen: bool = False

    @property
    def ok(self) -> bool:
        return self.first_divergence is None

    @property
    def status(self) -> str:
        return "pass" if self.ok else "fail"

    def to_json(self) -> dict:
        return {
            "entry": self.entry,
            "fuel": self.fuel,
            "status": self.status,
            "inputs_checked": self.inputs_checked,
            "divergence_mass_seen": self.divergence_mass_seen,
            "distributions": {",".join(map(format_bits, k)): d.to_json()
                              for k, d in self.distributions.items()},
            "first_divergence": self.first_divergence,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def table(self) -> str:
        line = f"{self.entry:<12} {self.status:<5} inputs={self.inputs_checked}"
        if self.first_divergence:
            d = self.first_divergence
            line += (f"  {d['stages'][0]}/{d['stages'][1]} differ on input "
                     f"{d['input']} at {d['value']}: {d['weights'][0]} vs {d['weights'][1]}")
        return line


def check_stage_equivalence(f: PorFn, inputs, fuel: int = 10 ** 5, coord_cap: int = 24,
                            bundle: PipelineBundle = None, entry: str = None,
                            keep: bool = False) -> EquivalenceReport:
    """All six stages on every input, compared exactly.

    With ``keep`` the common distribution of each input is stored in the
    report; on failure the per-stage distributions of the failing input
    are recorded either way.
    """
    bundle = bundle or build_pipeline(f)
    rep = EquivalenceReport(entry or pretty_por(f)[:40], fuel)
    for args in inputs:
        args = tuple(args)
        dists = stage_distributions(bundle, args, fuel, coord_cap)
        rep.inputs_checked += 1
        base = dists["por"]
        for st in STAGES:
            if dists[st].divergence_mass:
                rep.divergence_mass_seen = True
        for st in STAGES[1:]:
            if dists[st] != base:
                value = _diverging_value(base, dists[st])
                pick = (lambda d: d.weights.get(value)) if value is not None else \
                    (lambda d: d.divergence_mass)
                rep.first_divergence = {
                    "stages": ["por", st],
                    "input": [format_bits(a) for a in args],
                    "value": format_bits(value) if value is not None else "diverge",
                    "weights": [str(pick(base) or 0), str(pick(dists[st]) or 0)],
                    "per_stage": {k: d.to_json() for k, d in dists.items()},
                }
                rep.distributions[args] = base
                return rep
        if keep:
            rep.distributions[args] = base
    return rep


def mutate_flip(p: Program) -> Program:
    """Fault injection: the first flip(e) becomes flip(e.0)."""
    done = [False]

    def walk(s):
        if isinstance(s, Flip) and not done[0]:
            done[0] = True
            return Flip(Append(s.expr, "0"))
        if isinstance(s, Seq):
            return Seq(tuple(walk(t) for t in s.body))
        if isinstance(s, While):
            return While(s.guard, walk(s.body))
        return s

    out = walk(p.body)
    if not done[0]:
        raise ValueError("program has no flip statement to mutate")
    return Program(out, p.dialect)


def check_corpus(entries: dict, max_len: int = 3, fuel: int = 10 ** 5,
                 coord_cap: int = 24) -> list:
    reports = []
    for name, f in entries.items():
        inputs = all_tuples(f.arity, max_len)
        reports.append(check_stage_equivalence(f, inputs, fuel, coord_cap, entry=name))
    return reports


# ---------------------------------------------------------------- extractor


@dataclass
class Report:
    name: str
    ok: bool
    details: dict = field(default_factory=dict)
    counterexample: Optional[dict] = None

    def to_json(self) -> dict:
        return {"name": self.name, "status": "pass" if self.ok else "fail",
                "details": self.details, "counterexample": self.counterexample}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def table(self) -> str:
        extra = ", ".join(f"{k}={v}" for k, v in self.details.items())
        return f"{self.name:<12} {'pass' if self.ok else 'fail':<5} {extra}"


def check_extractor_law(k: int) -> Report:
    """The extractor on 1^k sends the 2^k assignments of dyad(0..k-1)
    bijectively onto the strings of length k."""
    if not 0 <= k <= 10:
        raise ValueError("k must lie in 0..10")
    coords = [dyad(i) for i in range(k)]
    seen = {}
    for m in range(1 << k):
        table = {c: (m >> j) & 1 for j, c in enumerate(coords)}
        # strict oracle: touching any other coordinate is an error
        out = extractor_e("1" * k, Oracle(table, "strict"))
        if len(out) != k or out in seen:
            return Report("extractor", False, {"k": k},
                          {"assignment": {format_bits(c): b for c, b in table.items()},
                           "output": format_bits(out)})
        seen[out] = m
    return Report("extractor", True, {"k": k, "assignments": 1 << k, "distinct": len(seen)})


# ---------------------------------------------------------------- statistics


def statistical_compare(exact: Distribution, sampler, n: int = 10 ** 4, seed: int = 0,
                        threshold: float = 0.05) -> Report:
    """Empirical total-variation distance between ``n`` samples and ``exact``.

    ``sampler(rng)`` returns an output string, or None for a divergent run.
    """
    if n < 1:
        raise ValueError("n must be positive")
    rng = random.Random(seed)
    counts = Counter(sampler(rng) for _ in range(n))
    want = {k: w.to_fraction() for k, w in exact.weights.items()}
    if exact.divergence_mass:
        want[None] = exact.divergence_mass.to_fraction()
    tv = Fraction(0)
    for k in set(want) | set(counts):
        tv += abs(Fraction(counts.get(k, 0), n) - want.get(k, 0))
    tv /= 2
    return Report("statistical", tv <= threshold,
                  {"n": n, "seed": seed, "threshold": threshold, "tv": float(tv)})


def por_sampler(f: PorFn, args, fuel: int = 10 ** 5):
    """Sampler drawing a fresh lazily-filled random oracle per run."""
    args = list(args)

    def sample(rng):
        table = {}

        def oracle(c):
            if c not in table:
                table[c] = rng.getrandbits(1)
            return table[c]

        try:
            return eval_por(f, args, oracle, fuel)
        except FuelExhausted:
            return None

    return sample


def machine_sampler(machine, args, fuel: int = 10 ** 5, bits: int = 256):
    args = list(args)

    def sample(rng):
        prefix = ""
        while True:
            # standard machines read a bit every step: extend and rerun
            prefix += "".join(str(rng.getrandbits(1)) for _ in range(bits))
            try:
                return run(machine, args, BitStream(prefix), fuel)[0]
            except StreamUnderrun:
                pass
            except MachineFuelExhausted:
                return None

    return sample
