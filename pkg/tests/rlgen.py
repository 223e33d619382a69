"""Random generators for RL terms and bounded formulas, shared by tests."""

from porkit.rl import And, Eq, Exists, Flip, Forall, Implies, Not, Or, Sub, TBit, TCat, TEps, TTimes, Var


def rand_term(rng, names, depth=2):
    r = rng.random()
    if depth == 0 or r < 0.45:
        pick = rng.randrange(len(names) + 3)
        if pick < len(names):
            return Var(names[pick])
        return [TEps(), TBit("0"), TBit("1")][pick - len(names)]
    if r < 0.85:
        return TCat(rand_term(rng, names, depth - 1), rand_term(rng, names, depth - 1))
    # keep products small: a short left factor
    return TTimes(rng.choice([TBit("0"), TBit("1")]), rand_term(rng, names, depth - 1))


def rand_sigma0(rng, names, depth=4, fresh=None):
    """A random formula whose quantifiers are all subword/initial."""
    fresh = fresh if fresh is not None else [0]
    r = rng.random()
    if depth == 0 or r < 0.25:
        kind = rng.randrange(3)
        if kind == 0:
            return Flip(rand_term(rng, names))
        a, b = rand_term(rng, names), rand_term(rng, names)
        return Eq(a, b) if kind == 1 else Sub(a, b)
    if r < 0.35:
        return Not(rand_sigma0(rng, names, depth - 1, fresh))
    if r < 0.75:
        op = rng.choice([And, Or, Implies])
        return op(rand_sigma0(rng, names, depth - 1, fresh),
                  rand_sigma0(rng, names, depth - 1, fresh))
    fresh[0] += 1
    v = f"v{fresh[0]}"
    bound = rand_term(rng, names, 1)
    body = rand_sigma0(rng, names + [v], depth - 1, fresh)
    q = rng.choice([Exists, Forall])
    return q(v, rng.choice(["subword", "initial"]), bound, body)
