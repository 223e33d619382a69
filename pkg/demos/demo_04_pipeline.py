"""
From functions to machines
==========================

"""

# A function is compiled to a random-access while program, then to a
# program that only draws fresh random bits, then to a multi-tape machine,
# then to a machine that reads a bit on every step, then to a
# probabilistic machine.  All six give the same exact distribution.
from porkit import build_pipeline, check_stage_equivalence, stdlib
from porkit.bits import all_tuples
from porkit.harness import (check_extractor_law, mutate_flip, por_sampler,
                            stage_distributions, statistical_compare)
from porkit.por import eval_dist

f = stdlib()["coinxor"]
bundle = build_pipeline(f)
print("\n".join(bundle.texts()["ra"].splitlines()[:6]))
print(bundle.manifest()["sizes"])

for stage, dist in stage_distributions(bundle, ["1"]).items():
    print(stage, dist)

report = check_stage_equivalence(f, all_tuples(1, 2), entry="coinxor")
print(report.table())

# Breaking the first flip is caught with a concrete counterexample.
broken = build_pipeline(f, mutate_flip(bundle.stage_ra))
print(check_stage_equivalence(f, all_tuples(1, 2), bundle=broken, entry="broken").table())

# The extractor turns k oracle bits into k uniformly distributed bits.
print(check_extractor_law(6).table())

# Sampling is available when exact branching is out of reach.
print(statistical_compare(eval_dist(f, ["1"]), por_sampler(f, ["1"]), n=5000, seed=1).table())
