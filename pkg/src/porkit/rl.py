"""The RL word language: terms, formulas, a parser, the standard and the
cylinder (measure) semantics, and formula classification."""

import re
from dataclasses import dataclass
from typing import Tuple

from .bits import all_strings, is_initial_subword
from .measure import CylinderSet, cylinder_boolean


class RlError(ValueError):
    pass


class UnboundedQuantifier(RlError):
    pass


class InstantiationCapExceeded(RuntimeError):
    pass


# ---------------------------------------------------------------- terms


class Term:
    pass


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class TEps(Term):
    pass


@dataclass(frozen=True)
class TBit(Term):
    bit: str


@dataclass(frozen=True)
class TCat(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class TTimes(Term):
    left: Term
    right: Term


def lit(s: str) -> Term:
    """The numeral term of a bit string: eps, then one bit at a time."""
    t = TEps()
    for c in s:
        t = TBit(c) if isinstance(t, TEps) else TCat(t, TBit(c))
    return t


def cat(*ts) -> Term:
    out = ts[0]
    for t in ts[1:]:
        out = TCat(out, t)
    return out


def ones(t: Term) -> Term:
    """1^t abbreviates 1 x t."""
    return TTimes(TBit("1"), t)


def term_vars(t: Term) -> frozenset:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, (TCat, TTimes)):
        return term_vars(t.left) | term_vars(t.right)
    return frozenset()


def eval_term(t: Term, env) -> str:
    cls = type(t)
    if cls is Var:
        try:
            return env[t.name]
        except KeyError:
            raise RlError(f"unbound variable {t.name!r}") from None
    if cls is TCat:
        return eval_term(t.left, env) + eval_term(t.right, env)
    if cls is TTimes:
        return eval_term(t.left, env) * len(eval_term(t.right, env))
    if cls is TBit:
        return t.bit
    if cls is TEps:
        return ""
    raise RlError(f"not a term: {t!r}")


# ---------------------------------------------------------------- formulas


class Formula:
    pass


@dataclass(frozen=True)
class Flip(Formula):
    term: Term


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Sub(Formula):
    """left is an initial subword of right."""
    left: Term
    right: Term


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


QUANT_KINDS = ("unbounded", "bounded", "subword", "initial")


@dataclass(frozen=True)
class Quant(Formula):
    """exists/forall x, ranging per ``kind``: all strings (unbounded), strings
    no longer than the bound (bounded), subwords of it (subword) or its
    initial subwords (initial)."""

    exists: bool
    var: str
    kind: str
    bound: Term
    body: Formula

    def __post_init__(self):
        if self.kind not in QUANT_KINDS:
            raise RlError(f"unknown quantifier kind {self.kind!r}")
        if self.kind == "unbounded":
            if self.bound is not None:
                raise RlError("unbounded quantifiers carry no bound")
        elif self.var in term_vars(self.bound):
            raise RlError(f"quantifier bound mentions its own variable {self.var!r}")


def Exists(var, kind, bound, body):
    return Quant(True, var, kind, bound, body)


def Forall(var, kind, bound, body):
    return Quant(False, var, kind, bound, body)


def conj(*fs) -> Formula:
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disj(*fs) -> Formula:
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


def leq(t: Term, s: Term) -> Formula:
    """t <= s in length: 1^t is an initial subword of 1^s."""
    return Sub(ones(t), ones(s))


def trunc_eq(t: Term, r: Term, s: Term) -> Formula:
    """t cut at the length of r equals s."""
    return Or(conj(Sub(ones(r), ones(t)), Sub(s, t), Eq(ones(r), ones(s))),
              And(Sub(ones(t), ones(r)), Eq(s, t)))


def free_vars(f) -> frozenset:
    if isinstance(f, Term):
        return term_vars(f)
    if isinstance(f, Flip):
        return term_vars(f.term)
    if isinstance(f, (Eq, Sub)):
        return term_vars(f.left) | term_vars(f.right)
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (And, Or, Implies)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, Quant):
        bound = term_vars(f.bound) if f.bound is not None else frozenset()
        return bound | (free_vars(f.body) - {f.var})
    raise RlError(f"not a formula: {f!r}")


def has_quantifier(f: Formula) -> bool:
    if isinstance(f, Quant):
        return True
    if isinstance(f, Not):
        return has_quantifier(f.body)
    if isinstance(f, (And, Or, Implies)):
        return has_quantifier(f.left) or has_quantifier(f.right)
    return False


# ---------------------------------------------------------------- ranges


def quant_range(kind: str, bound: str):
    if kind == "bounded":
        return list(all_strings(len(bound)))
    if kind == "initial":
        return [bound[:i] for i in range(len(bound) + 1)]
    if kind == "subword":
        seen = {""}
        for i in range(len(bound)):
            for j in range(i + 1, len(bound) + 1):
                seen.add(bound[i:j])
        return sorted(seen, key=lambda s: (len(s), s))
    raise UnboundedQuantifier("unbounded quantifiers cannot be evaluated")


def _guard(kind: str, value: str, bound: str) -> bool:
    # the relativising formula of each abbreviation, checked per instance
    if kind == "bounded":
        return is_initial_subword("1" * len(value), "1" * len(bound))
    if kind == "initial":
        return is_initial_subword(value, bound)
    return value in bound


# ---------------------------------------------------------------- evaluators


DEFAULT_CAP = 2 ** 16


class _Evaluator:
    """Shared machinery: memoises subformula values on the values of their
    free variables, and checks the instantiation cap per quantifier block."""

    def __init__(self, cap):
        self.cap = cap
        self.fv = {}
        self.cache = {}
        self.scoped = {}

    def free(self, f):
        key = id(f)
        got = self.fv.get(key)
        if got is None:
            got = (f, tuple(sorted(free_vars(f))))
            self.fv[key] = got
        return got[1]

    def eval(self, f, env, block=1):
        names = self.free(f)
        key = (id(f), tuple(env.get(n) for n in names))
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        val = self.compute(f, env, block)
        self.cache[key] = val
        return val

    def quant(self, f, env, block):
        if f.kind == "unbounded":
            raise UnboundedQuantifier("unbounded quantifiers cannot be evaluated")
        bound = eval_term(f.bound, env)
        rng = quant_range(f.kind, bound)
        block *= len(rng)
        if block > self.cap:
            raise InstantiationCapExceeded(
                f"quantifier block needs {block} instantiations (cap {self.cap})")
        inner = block if isinstance(f.body, Quant) else 1
        vals = []
        for u in rng:
            if not _guard(f.kind, u, bound):
                continue
            sub_env = dict(env)
            sub_env[f.var] = u
            vals.append(self.eval(f.body, sub_env, inner))
            if self.saturated(vals[-1], f.exists):
                break
        return vals

    def run(self, f, env):
        key = id(f)
        got = self.scoped.get(key)
        if got is None:
            got = (f, miniscope(f))
            self.scoped[key] = got
        return self.eval(got[1], env)


def _flatten(f, cls):
    if isinstance(f, cls):
        return _flatten(f.left, cls) + _flatten(f.right, cls)
    return [f]


def _rebuild(parts, cls):
    out = parts[0]
    for p in parts[1:]:
        out = cls(out, p)
    return out


def miniscope(f: Formula) -> Formula:
    """Push bounded quantifiers as far inward as they go.

    Every bounded range contains eps, so a quantifier over a part that does
    not mention its variable can be dropped and existentials distribute over
    disjunctions (universals over conjunctions).  The result is equivalent
    and usually far cheaper to evaluate.
    """
    if isinstance(f, Not):
        return Not(miniscope(f.body))
    if isinstance(f, (And, Or, Implies)):
        return type(f)(miniscope(f.left), miniscope(f.right))
    if isinstance(f, Quant):
        body = miniscope(f.body)
        if f.kind == "unbounded":
            return Quant(f.exists, f.var, f.kind, f.bound, body)
        return _push(f, body)
    return f


def _push(q: Quant, body: Formula) -> Formula:
    if q.var not in free_vars(body):
        return body
    spread = Or if q.exists else And
    other = And if q.exists else Or
    if isinstance(body, spread):
        return spread(_push(q, body.left), _push(q, body.right))
    if isinstance(body, other):
        parts = _flatten(body, other)
        keep = [p for p in parts if q.var in free_vars(p)]
        rest = [p for p in parts if q.var not in free_vars(p)]
        if rest:
            return _rebuild(rest + [_push(q, _rebuild(keep, other))], other)
    if (isinstance(body, Quant) and body.exists == q.exists and body.kind != "unbounded"
            and q.var not in term_vars(body.bound) and body.var not in term_vars(q.bound)
            and body.var != q.var):
        return Quant(body.exists, body.var, body.kind, body.bound, _push(q, body.body))
    return Quant(q.exists, q.var, q.kind, q.bound, body)


class _Standard(_Evaluator):
    def __init__(self, oracle, cap):
        super().__init__(cap)
        self.oracle = oracle

    def saturated(self, v, exists):
        return v == exists

    def compute(self, f, env, block):
        cls = type(f)
        if cls is Eq:
            return eval_term(f.left, env) == eval_term(f.right, env)
        if cls is Sub:
            return is_initial_subword(eval_term(f.left, env), eval_term(f.right, env))
        if cls is Flip:
            return bool(self.oracle(eval_term(f.term, env)))
        if cls is Not:
            return not self.eval(f.body, env)
        if cls is And:
            return self.eval(f.left, env) and self.eval(f.right, env)
        if cls is Or:
            return self.eval(f.left, env) or self.eval(f.right, env)
        if cls is Implies:
            return (not self.eval(f.left, env)) or self.eval(f.right, env)
        if cls is Quant:
            vals = self.quant(f, env, block)
            return any(vals) if f.exists else all(vals)
        raise RlError(f"not a formula: {f!r}")


_FULL = CylinderSet.full()
_EMPTY = CylinderSet.empty()


class _Measure(_Evaluator):
    def saturated(self, v, exists):
        return v.is_full() if exists else v.is_empty()

    def compute(self, f, env, block):
        cls = type(f)
        if cls is Eq:
            return _FULL if eval_term(f.left, env) == eval_term(f.right, env) else _EMPTY
        if cls is Sub:
            ok = is_initial_subword(eval_term(f.left, env), eval_term(f.right, env))
            return _FULL if ok else _EMPTY
        if cls is Flip:
            return CylinderSet.coordinate(eval_term(f.term, env), 1)
        if cls is Not:
            return cylinder_boolean(self.eval(f.body, env), op="complement")
        if cls is And:
            a = self.eval(f.left, env)
            if a.is_empty():
                return a
            return cylinder_boolean(a, self.eval(f.right, env), "intersection")
        if cls is Or:
            a = self.eval(f.left, env)
            if a.is_full():
                return a
            return cylinder_boolean(a, self.eval(f.right, env), "union")
        if cls is Implies:
            a = cylinder_boolean(self.eval(f.left, env), op="complement")
            if a.is_full():
                return a
            return cylinder_boolean(a, self.eval(f.right, env), "union")
        if cls is Quant:
            vals = self.quant(f, env, block)
            op = "union" if f.exists else "intersection"
            acc = _EMPTY if f.exists else _FULL
            for v in vals:
                acc = cylinder_boolean(acc, v, op)
            return acc
        raise RlError(f"not a formula: {f!r}")


def eval_standard(f: Formula, env, oracle, cap: int = DEFAULT_CAP) -> int:
    """1 when f holds in env with Flip answered by ``oracle``, else 0."""
    _check_env(f, env)
    return int(_Standard(oracle, cap).run(f, dict(env)))


def eval_measure(f: Formula, env, cap: int = DEFAULT_CAP) -> CylinderSet:
    """The set of oracles satisfying f in env, as a cylinder set."""
    _check_env(f, env)
    return _Measure(cap).run(f, dict(env))


class MeasureEvaluator:
    """Reusable measure evaluator; keeps its cache across calls, which pays
    off when one formula is evaluated under many environments."""

    def __init__(self, cap: int = DEFAULT_CAP):
        self._ev = _Measure(cap)

    def __call__(self, f, env) -> CylinderSet:
        return self._ev.run(f, dict(env))


def _check_env(f, env):
    missing = free_vars(f) - set(env)
    if missing:
        raise RlError(f"environment misses {', '.join(sorted(missing))}")


# ---------------------------------------------------------------- classification


def _is_sigma0(f) -> bool:
    if isinstance(f, (Flip, Eq, Sub)):
        return True
    if isinstance(f, Not):
        return _is_sigma0(f.body)
    if isinstance(f, (And, Or, Implies)):
        return _is_sigma0(f.left) and _is_sigma0(f.right)
    if isinstance(f, Quant):
        return f.kind in ("subword", "initial") and _is_sigma0(f.body)
    return False


def _is_sigma1(f) -> bool:
    while isinstance(f, Quant) and f.exists and f.kind == "bounded":
        f = f.body
    return _is_sigma0(f)


def _is_extended(f) -> bool:
    # built from sigma_0 formulas by and, or, bounded exists and subword
    # quantification
    if _is_sigma0(f):
        return True
    if isinstance(f, (And, Or)):
        return _is_extended(f.left) and _is_extended(f.right)
    if isinstance(f, Quant):
        if f.kind == "bounded" and f.exists:
            return _is_extended(f.body)
        if f.kind in ("subword", "initial"):
            return _is_extended(f.body)
    return False


def classify(f: Formula) -> str:
    if _is_sigma0(f):
        return "Sigma_b_0"
    if _is_sigma1(f):
        return "Sigma_b_1"
    if _is_extended(f):
        return "extended_Sigma_b_1"
    return "other"


_LEVELS = {"Sigma_b_0": 0, "Sigma_b_1": 1, "extended_Sigma_b_1": 2, "other": 3}


def in_class(f: Formula, cls: str) -> bool:
    """Membership with the inclusions Sigma_b_0 < Sigma_b_1 < extended."""
    return _LEVELS[classify(f)] <= _LEVELS[cls]


def prenex(f: Formula) -> Formula:
    """Move bounded existentials out of conjunctions and disjunctions.

    Sound because every bounded range contains eps; variables must be
    distinct and not free elsewhere, which the builders guarantee.
    """
    prefix, matrix = _pull(f)
    for var, bound in reversed(prefix):
        matrix = Exists(var, "bounded", bound, matrix)
    return matrix


def _pull(f):
    if isinstance(f, Quant) and f.exists and f.kind == "bounded":
        inner, m = _pull(f.body)
        return [(f.var, f.bound)] + inner, m
    if isinstance(f, (And, Or)):
        pl, ml = _pull(f.left)
        pr, mr = _pull(f.right)
        clash = {v for v, _ in pl} & ({v for v, _ in pr} | free_vars(f.right))
        clash |= {v for v, _ in pr} & free_vars(f.left)
        if clash:
            raise RlError(f"cannot prenex: variable clash on {sorted(clash)}")
        return pl + pr, type(f)(ml, mr)
    return [], f


# ---------------------------------------------------------------- syntax


_TOKEN = re.compile(r'\s*(->|<=|"[01]*"|[A-Za-z_][A-Za-z0-9_\']*|[01]|[()^*=!&|.])')
KEYWORDS = {"eps", "flip", "sub", "in", "E", "A", "Ew", "Aw", "Ei", "Ai"}
_QUANTS = {"E": (True, "bounded"), "A": (False, "bounded"),
           "Ew": (True, "subword"), "Aw": (False, "subword"),
           "Ei": (True, "initial"), "Ai": (False, "initial")}


def _lex(src):
    pos, toks, offs = 0, [], []
    src = src.rstrip()
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise RlError(f"unexpected character at column {pos + 1}: {src[pos:pos + 10]!r}")
        toks.append(m.group(1))
        offs.append(m.start(1))
        pos = m.end()
    return toks, offs, len(src)


class _Parser:
    def __init__(self, src):
        self.toks, self.offs, self.end = _lex(src)
        self.pos = 0

    def error(self, msg, at=None):
        i = self.pos if at is None else at
        col = (self.offs[i] if i < len(self.offs) else self.end) + 1
        err = RlError(f"{msg} at column {col}")
        err.column = col
        return err

    def peek(self, k=0):
        i = self.pos + k
        return self.toks[i] if i < len(self.toks) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise self.error("unexpected end of input")
        self.pos += 1
        return tok

    def expect(self, tok):
        got = self.next()
        if got != tok:
            raise self.error(f"expected {tok!r}, got {got!r}", self.pos - 1)

    # terms: t ^ s is concatenation, t * s is times, * binds tighter
    def term(self):
        t = self.product()
        while self.peek() == "^":
            self.next()
            t = TCat(t, self.product())
        return t

    def product(self):
        t = self.tatom()
        while self.peek() == "*":
            self.next()
            t = TTimes(t, self.tatom())
        return t

    def tatom(self):
        tok = self.next()
        if tok == "(":
            t = self.term()
            self.expect(")")
            return t
        if tok == "eps":
            return TEps()
        if tok in ("0", "1"):
            return TBit(tok)
        if tok.startswith('"'):
            return lit(tok[1:-1])
        if re.match(r"^[A-Za-z_]", tok) and tok not in KEYWORDS:
            return Var(tok)
        raise self.error(f"unexpected {tok!r} in a term", self.pos - 1)

    # formulas: ! > & > | > ->, with -> right associative
    def formula(self):
        left = self.disj()
        if self.peek() == "->":
            self.next()
            return Implies(left, self.formula())
        return left

    def disj(self):
        f = self.conj()
        while self.peek() == "|":
            self.next()
            f = Or(f, self.conj())
        return f

    def conj(self):
        f = self.unary()
        while self.peek() == "&":
            self.next()
            f = And(f, self.unary())
        return f

    def unary(self):
        tok = self.peek()
        if tok == "!":
            self.next()
            return Not(self.unary())
        if tok in _QUANTS and self.peek(1) not in (None, "^", "*", "=", "sub", ")"):
            return self.quant()
        if tok == "flip":
            self.next()
            self.expect("(")
            t = self.term()
            self.expect(")")
            return Flip(t)
        if tok == "(":
            save = self.pos
            try:
                self.next()
                f = self.formula()
                self.expect(")")
                if self.peek() not in ("=", "sub", "^", "*"):
                    return f
            except RlError:
                pass
            self.pos = save
        t = self.term()
        op = self.next()
        if op == "=":
            return Eq(t, self.term())
        if op == "sub":
            return Sub(t, self.term())
        raise self.error(f"expected '=' or 'sub', got {op!r}", self.pos - 1)

    def quant(self):
        exists, kind = _QUANTS[self.next()]
        var = self.next()
        if not re.match(r"^[A-Za-z_]", var) or var in KEYWORDS:
            raise self.error(f"bad variable name {var!r}", self.pos - 1)
        if self.peek() == ".":
            self.next()
            return Quant(exists, var, "unbounded", None, self.formula())
        sep = self.next()
        if kind == "bounded" and sep != "<=":
            raise self.error(f"expected '<=' after the variable, got {sep!r}", self.pos - 1)
        if kind != "bounded" and sep != "in":
            raise self.error(f"expected 'in' after the variable, got {sep!r}", self.pos - 1)
        bound = self.term()
        self.expect(".")
        return Quant(exists, var, kind, bound, self.formula())


def parse(src: str):
    """Parse a formula, or a term when the text is not a formula."""
    p = _Parser(src)
    try:
        f = p.formula()
        if p.peek() is None:
            return f
        raise p.error(f"unexpected {p.peek()!r}")
    except RlError as err:
        first = err
    try:
        return parse_term(src)
    except RlError as err:
        # report whichever reading got further
        if getattr(err, "column", 0) > getattr(first, "column", 0):
            raise
        raise first from None


def parse_formula(src: str) -> Formula:
    p = _Parser(src)
    f = p.formula()
    if p.peek() is not None:
        raise p.error(f"unexpected {p.peek()!r}")
    return f


def parse_term(src: str) -> Term:
    p = _Parser(src)
    t = p.term()
    if p.peek() is not None:
        raise p.error(f"unexpected {p.peek()!r}")
    return t


def format_term(t: Term, ctx: int = 0) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, TEps):
        return "eps"
    if isinstance(t, TBit):
        return t.bit
    if isinstance(t, TCat):
        s = f"{format_term(t.left, 1)} ^ {format_term(t.right, 2)}"
        return f"({s})" if ctx > 1 else s
    if isinstance(t, TTimes):
        s = f"{format_term(t.left, 2)} * {format_term(t.right, 3)}"
        return f"({s})" if ctx > 2 else s
    raise RlError(f"not a term: {t!r}")


_PREC = {Implies: 1, Or: 2, And: 3}


def format_formula(f: Formula, ctx: int = 0) -> str:
    if isinstance(f, Flip):
        return f"flip({format_term(f.term)})"
    if isinstance(f, Eq):
        return f"{format_term(f.left)} = {format_term(f.right)}"
    if isinstance(f, Sub):
        return f"{format_term(f.left)} sub {format_term(f.right)}"
    if isinstance(f, Not):
        return "!" + format_formula(f.body, 4)
    if isinstance(f, (And, Or, Implies)):
        p = _PREC[type(f)]
        op = {And: "&", Or: "|", Implies: "->"}[type(f)]
        if isinstance(f, Implies):
            s = f"{format_formula(f.left, p + 1)} -> {format_formula(f.right, p)}"
        else:
            s = f"{format_formula(f.left, p)} {op} {format_formula(f.right, p + 1)}"
        return f"({s})" if ctx > p else s
    if isinstance(f, Quant):
        kw = {("bounded", True): "E", ("bounded", False): "A",
              ("subword", True): "Ew", ("subword", False): "Aw",
              ("initial", True): "Ei", ("initial", False): "Ai",
              ("unbounded", True): "E", ("unbounded", False): "A"}[(f.kind, f.exists)]
        if f.kind == "unbounded":
            s = f"{kw} {f.var} . {format_formula(f.body)}"
        else:
            sep = "<=" if f.kind == "bounded" else "in"
            s = f"{kw} {f.var} {sep} {format_term(f.bound)} . {format_formula(f.body)}"
        return f"({s})" if ctx > 0 else s
    raise RlError(f"not a formula: {f!r}")


# ---------------------------------------------------------------- representing formulas


def bound_to_term(t, xs) -> Term:
    """A POR bound term as an RL term, with x_i replaced by ``xs[i-1]``."""
    from .por import BBit, BCat, BEps, BTimes, BX, PorError

    if isinstance(t, BEps):
        return TEps()
    if isinstance(t, BBit):
        return TBit(t.bit)
    if isinstance(t, BX):
        return xs[t.index - 1]
    if isinstance(t, BCat):
        return TCat(bound_to_term(t.left, xs), bound_to_term(t.right, xs))
    if isinstance(t, BTimes):
        return TTimes(bound_to_term(t.left, xs), bound_to_term(t.right, xs))
    raise PorError(f"bound term {t} cannot occur here")


class _Names:
    def __init__(self, taken):
        self.taken = set(taken)
        self.count = {}

    def fresh(self, stem):
        while True:
            n = self.count.get(stem, 0) + 1
            self.count[stem] = n
            name = f"{stem}{n}"
            if name not in self.taken:
                self.taken.add(name)
                return name


def _repr(f, xs, y, names):
    from .por import BRec, C, Comp, E, P, PorError, Q, S, size_bound

    if isinstance(f, E):
        return And(Eq(xs[0], xs[0]), Eq(y, TEps()))
    if isinstance(f, P):
        parts = [Eq(xs[j], xs[j]) for j in range(f.n) if j != f.i - 1]
        return conj(*parts, Eq(y, xs[f.i - 1]))
    if isinstance(f, S):
        return Eq(y, TCat(xs[0], TBit(f.bit)))
    if isinstance(f, C):
        a, b = Var(names.fresh("w")), Var(names.fresh("w"))
        return disj(
            And(Eq(xs[0], TEps()), Eq(y, xs[1])),
            Exists(a.name, "bounded", xs[0],
                   And(Eq(xs[0], TCat(a, TBit("0"))), Eq(y, xs[2]))),
            Exists(b.name, "bounded", xs[0],
                   And(Eq(xs[0], TCat(b, TBit("1"))), Eq(y, xs[3]))))
    if isinstance(f, Q):
        return Or(And(Flip(xs[0]), Eq(y, TBit("1"))),
                  And(Not(Flip(xs[0])), Eq(y, TBit("0"))))
    if isinstance(f, Comp):
        zs = [Var(names.fresh("z")) for _ in f.hs]
        body = conj(*[_repr(h, xs, z, names) for h, z in zip(f.hs, zs)],
                    _repr(f.g, zs, y, names))
        for h, z in reversed(list(zip(f.hs, zs))):
            body = Exists(z.name, "bounded", bound_to_term(size_bound(h), xs), body)
        return body
    if isinstance(f, BRec):
        raise PorError("representing formulas are only built for functions without recursion")
    raise PorError(f"not a POR function: {f!r}")


def input_names(arity: int):
    return [f"x{i + 1}" for i in range(arity)]


def build_repr_formula(f, prenex_form: bool = True) -> Formula:
    """The representing formula of a recursion-free POR function, with
    inputs x1..xk and output y.  By default the bounded existentials are
    moved to the front so the result is a Sigma_b_1 formula."""
    xs = [Var(n) for n in input_names(f.arity)]
    names = _Names([v.name for v in xs] + ["y"])
    out = _repr(f, xs, Var("y"), names)
    return prenex(out) if prenex_form else out


# ---------------------------------------------------------------- representability


@dataclass
class Violation:
    condition: str
    args: Tuple[str, ...]
    output: str
    detail: str


@dataclass
class Report:
    classification: str
    checked_inputs: int = 0
    checked_outputs: int = 0
    checked_oracles: int = 0
    violations: list = None
    warnings: list = None

    def __post_init__(self):
        self.violations = list(self.violations or [])
        self.warnings = list(self.warnings or [])

    @property
    def ok(self) -> bool:
        return not self.violations

    def counts(self) -> dict:
        out = {"existence": 0, "uniqueness": 0, "condition3": 0, "distribution": 0}
        for v in self.violations:
            out[v.condition] += 1
        return out

    def first(self):
        return self.violations[0] if self.violations else None

    def summary(self) -> str:
        head = "pass" if self.ok else "FAIL"
        lines = [f"{head}: {self.checked_inputs} inputs, {self.checked_outputs} "
                 f"(input, output) pairs, {self.checked_oracles} oracle checks; "
                 f"formula class {self.classification}"]
        for w in self.warnings:
            lines.append(f"warning: {w}")
        if not self.ok:
            lines.append("violations: " + ", ".join(f"{k}={n}" for k, n in self.counts().items()))
            v = self.first()
            lines.append(f"first: {v.condition} at args {v.args!r} output {v.output!r}: {v.detail}")
        return "\n".join(lines)


def check_representability(F: Formula, f, max_len: int, inputs=None, output: str = "y",
                           cap: int = DEFAULT_CAP, max_coords: int = 14,
                           fuel: int = 10 ** 5) -> Report:
    """Semantic check that F represents f on all inputs up to ``max_len``.

    Candidate outputs range over all strings no longer than the longer of
    ``max_len`` and the longest output f produces on the input at hand.
    """
    from .bits import all_tuples
    from .measure import Oracle
    from .por import eval_dist, eval_por

    inputs = list(inputs or input_names(f.arity))
    if len(inputs) != f.arity:
        raise RlError(f"{len(inputs)} input variables for a function of arity {f.arity}")
    stray = free_vars(F) - set(inputs) - {output}
    if stray:
        raise RlError(f"formula has unexpected free variables {sorted(stray)}")
    rep = Report(classify(F))
    if not in_class(F, "Sigma_b_1"):
        rep.warnings.append(f"formula classifies as {rep.classification}, not Sigma_b_1")
    ev = MeasureEvaluator(cap)
    for args in all_tuples(f.arity, max_len):
        rep.checked_inputs += 1
        dist = eval_dist(f, args, fuel=fuel)
        longest = max((len(t) for t in dist.weights), default=0)
        taus = list(all_strings(max(max_len, longest)))
        env = dict(zip(inputs, args))
        sets = {}
        for tau in taus:
            env[output] = tau
            sets[tau] = ev(F, env)
        rep.checked_outputs += len(taus)
        # distribution form
        for tau in taus:
            mu = sets[tau].measure()
            want = dist.weights.get(tau)
            if mu != (want if want is not None else 0):
                rep.violations.append(Violation(
                    "distribution", args, tau, f"measure {mu}, probability {want or 0}"))
        # existence and uniqueness over the joint coordinates
        ks = set()
        for c in sets.values():
            ks |= set(c.coords)
        if len(ks) > max_coords:
            raise InstantiationCapExceeded(
                f"{len(ks)} oracle coordinates exceed the check limit {max_coords}")
        ks = sorted(ks)
        ext = {tau: c.extend(ks).members for tau, c in sets.items()}
        for m in range(1 << len(ks)):
            hits = [tau for tau in taus if m in ext[tau]]
            if len(hits) != 1:
                kind = "existence" if not hits else "uniqueness"
                table = {c: (m >> j) & 1 for j, c in enumerate(ks)}
                rep.violations.append(Violation(
                    kind, args, hits[1] if hits else "",
                    f"oracle {table} satisfies the formula for {len(hits)} outputs"))
            # condition 3 against actual runs of f
            table = {c: (m >> j) & 1 for j, c in enumerate(ks)}
            for policy in ("zero", "one"):
                oracle = Oracle(table, policy)
                value = eval_por(f, args, oracle, fuel=fuel)
                rep.checked_oracles += 1
                for tau in taus:
                    holds = sets[tau].contains(oracle)
                    if holds != (value == tau):
                        rep.violations.append(Violation(
                            "condition3", args, tau,
                            f"f gives {value!r} under oracle {table} ({policy} elsewhere) "
                            f"but the formula {'holds' if holds else 'fails'}"))
    return rep
