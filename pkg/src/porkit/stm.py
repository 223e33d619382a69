"""Stream Turing machines (standard, on-demand, multi-tape) and
probabilistic Turing machines.

A transition reads one symbol per tape (``*`` matches anything), carries an
oracle tag (``0``/``1`` consume that stream bit, ``~`` consumes nothing),
writes one symbol per tape (``*`` keeps the cell) and moves each head
``L``, ``R`` or ``S`` (stay).  A configuration with no applicable
transition is final.
"""

from dataclasses import dataclass, field
from itertools import product
from typing import Tuple

from .measure import BitStream, DistBuilder, Distribution, Dyadic, StreamUnderrun

BLANK = "_"
ANY = "*"
SYMBOLS = ("0", "1", BLANK)
NOCONSUME = "~"


class MachineError(ValueError):
    pass


class MachineFuelExhausted(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class Transition:
    state: str
    reads: Tuple[str, ...]
    tag: str
    writes: Tuple[str, ...]
    moves: Tuple[str, ...]
    next: str

    def __post_init__(self):
        for name in ("reads", "writes", "moves"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if self.tag not in ("0", "1", NOCONSUME):
            raise MachineError(f"bad oracle tag {self.tag!r}")
        if not len(self.reads) == len(self.writes) == len(self.moves):
            raise MachineError("transition arity does not match the tape count")
        for s in self.reads + self.writes:
            if s not in SYMBOLS and s != ANY:
                raise MachineError(f"bad tape symbol {s!r}")
        for m in self.moves:
            if m not in ("L", "R", "S"):
                raise MachineError(f"bad head move {m!r}")


def _overlap(a: Transition, b: Transition) -> bool:
    if a.tag != b.tag and NOCONSUME not in (a.tag, b.tag):
        return False
    return all(x == y or ANY in (x, y) for x, y in zip(a.reads, b.reads))


@dataclass(frozen=True)
class StmSpec:
    """A (multi-tape) stream machine.  ``inputs`` lists the tapes that
    receive the input strings, ``output`` the tape the result is read from."""

    states: Tuple[str, ...]
    initial: str
    tapes: int
    transitions: Tuple[Transition, ...]
    inputs: Tuple[int, ...] = (0,)
    output: int = 0
    _index: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "transitions", tuple(sorted(set(self.transitions))))
        object.__setattr__(self, "inputs", tuple(self.inputs))
        if self.tapes < 1:
            raise MachineError("a machine needs at least one tape")
        known = set(self.states)
        if self.initial not in known:
            raise MachineError(f"initial state {self.initial!r} is not declared")
        for t in self.transitions:
            if t.state not in known or t.next not in known:
                raise MachineError(f"transition mentions an undeclared state: {t}")
            if len(t.reads) != self.tapes:
                raise MachineError(f"transition has {len(t.reads)} tapes, machine has {self.tapes}")
        for i in self.inputs + (self.output,):
            if not 0 <= i < self.tapes:
                raise MachineError(f"tape index {i} out of range")
        by_state = {}
        for t in self.transitions:
            by_state.setdefault(t.state, []).append(t)
        for ts in by_state.values():
            for i, a in enumerate(ts):
                for b in ts[i + 1:]:
                    if _overlap(a, b):
                        raise MachineError(f"nondeterministic transitions:\n  {a}\n  {b}")

    @property
    def is_standard(self) -> bool:
        return all(t.tag != NOCONSUME for t in self.transitions)

    def index(self):
        if self._index is None:
            object.__setattr__(self, "_index", _Index(self.transitions, self.states, self.initial))
        return self._index


@dataclass(frozen=True)
class PtmSpec:
    """A probabilistic machine: δ_0 and δ_1 as untagged transition sets.
    Transitions reuse :class:`Transition` with a placeholder tag ``0``."""

    states: Tuple[str, ...]
    initial: str
    tapes: int
    delta0: Tuple[Transition, ...]
    delta1: Tuple[Transition, ...]
    inputs: Tuple[int, ...] = (0,)
    output: int = 0
    _index: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "delta0", tuple(sorted(set(self.delta0))))
        object.__setattr__(self, "delta1", tuple(sorted(set(self.delta1))))
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "inputs", tuple(self.inputs))

    def index(self):
        if self._index is None:
            tagged = [_retag(t, "0") for t in self.delta0] + [_retag(t, "1") for t in self.delta1]
            object.__setattr__(self, "_index", _Index(tagged, self.states, self.initial, True))
        return self._index


def _retag(t: Transition, tag: str) -> Transition:
    return Transition(t.state, t.reads, tag, t.writes, t.moves, t.next)


# ---------------------------------------------------------------- fast runner

_DELTA = {"L": -1, "R": 1, "S": 0}

# kinds of table entries
_DET, _MERGED, _BRANCH = 0, 1, 2


class _Index:
    """Integer-numbered states with per-state lookup tables.

    ``rows[q]`` is None for a state without transitions, else
    (watched, table): ``watched`` is a tape number when a single tape is
    inspected and a tuple otherwise; ``table`` maps the symbols read to
    (kind, action0, action1).  An action is (ops, next) with ops a tuple of
    (tape, write-or-None, delta).
    """

    def __init__(self, transitions, states, initial, ptm=False):
        self.number = {q: i for i, q in enumerate(states)}
        self.initial = self.number[initial]
        by_state = {}
        for t in transitions:
            by_state.setdefault(t.state, []).append(t)
        self.rows = [None] * len(states)
        for state, ts in by_state.items():
            watched = sorted({i for t in ts for i, sym in enumerate(t.reads) if sym != ANY})
            tags = {}
            for t in ts:
                choices = [(t.reads[i],) if t.reads[i] != ANY else SYMBOLS for i in watched]
                ops = tuple((i, None if w == ANY else w, _DELTA[m])
                            for i, (w, m) in enumerate(zip(t.writes, t.moves))
                            if w != ANY or m != "S")
                action = (ops, self.number[t.next])
                for key in product(*choices):
                    tags.setdefault(key, {})[t.tag] = action
            table = {}
            for key, by_tag in tags.items():
                if NOCONSUME in by_tag:
                    entry = (_DET, by_tag[NOCONSUME], None)
                else:
                    a0, a1 = by_tag.get("0"), by_tag.get("1")
                    entry = (_MERGED, a0, a1) if a0 == a1 else (_BRANCH, a0, a1)
                table[key[0] if len(watched) == 1 else key] = entry
            self.rows[self.number[state]] = (
                watched[0] if len(watched) == 1 else tuple(watched), table)


class _Tapes:
    """Mutable tapes: one list of cells and one head position per tape."""

    __slots__ = ("cells", "heads")

    def __init__(self, cells, heads):
        self.cells = cells
        self.heads = heads

    @classmethod
    def load(cls, tapes, contents):
        cells = [[BLANK] for _ in range(tapes)]
        heads = [1] * tapes
        for i, s in contents.items():
            cells[i] = [BLANK] + list(s)
        return cls(cells, heads)

    def copy(self):
        return _Tapes([list(c) for c in self.cells], list(self.heads))

    def read(self, i):
        c, h = self.cells[i], self.heads[i]
        return c[h] if h < len(c) else BLANK

    def key(self, watched):
        cells, heads = self.cells, self.heads
        if type(watched) is int:
            c, h = cells[watched], heads[watched]
            return c[h] if h < len(c) else BLANK
        out = []
        for i in watched:
            c, h = cells[i], heads[i]
            out.append(c[h] if h < len(c) else BLANK)
        return tuple(out)

    def apply(self, ops):
        cells, heads = self.cells, self.heads
        for i, w, d in ops:
            c = cells[i]
            h = heads[i]
            if w is not None:
                if h >= len(c):
                    c.extend(BLANK * (h - len(c) + 1))
                c[h] = w
            h += d
            if h < 0:
                c[0:0] = [BLANK] * 16
                h += 16
            heads[i] = h

    def left_of_head(self, i) -> str:
        # cells past the written part are blanks the head has moved over
        c, h = self.cells[i], self.heads[i]
        return "".join(c[:h]) + BLANK * max(h - len(c), 0)


def output_extract(left: str) -> str:
    """Longest blank-free suffix of the content left of the head."""
    k = left.rfind(BLANK)
    return left[k + 1:]


def _load_inputs(machine, inputs):
    if isinstance(inputs, str):
        inputs = [inputs]
    inputs = list(inputs)
    if len(inputs) > len(machine.inputs):
        raise MachineError(f"machine takes {len(machine.inputs)} inputs, got {len(inputs)}")
    return _Tapes.load(machine.tapes, dict(zip(machine.inputs, inputs)))


def _is_ptm(machine):
    return isinstance(machine, PtmSpec)


def run(machine, input="", stream=None, fuel: int = 10 ** 6):
    """Run on a concrete stream.  Returns (output, steps, bits consumed)."""
    index = machine.index()
    rows = index.rows
    ptm = _is_ptm(machine)
    tapes = _load_inputs(machine, input)
    state = index.initial
    stream = stream if stream is not None else BitStream("")
    steps = used = 0
    while True:
        row = rows[state]
        if row is None:
            break
        entry = row[1].get(tapes.key(row[0]))
        if entry is None:
            break
        kind, a0, a1 = entry
        if kind == _DET:
            action = a0
        else:
            bit = stream.peek()
            action = a1 if bit else a0
            if action is None:
                if not ptm:
                    break
            _, stream = stream.take()
            used += 1
        if steps >= fuel:
            raise MachineFuelExhausted("machine ran out of fuel")
        steps += 1
        if action is None:
            continue  # PTM: the drawn transition function is undefined here
        tapes.apply(action[0])
        state = action[1]
    return output_extract(tapes.left_of_head(machine.output)), steps, used


def run_dist(machine, input="", fuel: int = 10 ** 6, max_depth: int = 64) -> Distribution:
    """Exact output distribution over a uniformly random stream.

    Paths branch on each consumed bit; when both bits lead to the same
    action the two halves stay merged and the path keeps its weight.
    """
    index = machine.index()
    rows = index.rows
    ptm = _is_ptm(machine)
    out = DistBuilder()
    stack = [(_load_inputs(machine, input), index.initial, 0, 0)]
    while stack:
        tapes, state, steps, depth = stack.pop()
        cells, heads = tapes.cells, tapes.heads
        while True:
            row = rows[state]
            entry = None
            if row is not None:
                w, table = row
                if type(w) is int:
                    c, h = cells[w], heads[w]
                    entry = table.get(c[h] if h < len(c) else BLANK)
                else:
                    entry = table.get(tapes.key(w))
            if entry is None:
                out.add(output_extract(tapes.left_of_head(machine.output)), depth)
                break
            if steps >= fuel:
                out.diverge(depth)
                break
            kind, action, a1 = entry
            if kind == _BRANCH:
                if depth >= max_depth:
                    raise MachineError(f"more than {max_depth} branching bits on one path")
                depth += 1
                if action is None or a1 is None:
                    taken = action if action is not None else a1
                    if ptm:
                        # the other coin leaves the configuration unchanged
                        stack.append((tapes.copy(), state, steps + 1, depth))
                    else:
                        out.add(output_extract(tapes.left_of_head(machine.output)), depth)
                    action = taken
                else:
                    other = tapes.copy()
                    other.apply(a1[0])
                    stack.append((other, a1[1], steps + 1, depth))
            for i, wr, d in action[0]:
                c = cells[i]
                h = heads[i]
                if wr is not None:
                    if h >= len(c):
                        c.extend(BLANK * (h - len(c) + 1))
                    c[h] = wr
                h += d
                if h < 0:
                    c[0:0] = [BLANK] * 16
                    h += 16
                heads[i] = h
            state = action[1]
            steps += 1
    return out.build()


# ---------------------------------------------------------------- canonical configs


@dataclass(frozen=True)
class StmConfig:
    """State plus, per tape, the content left of the head and from the head
    on, with surrounding blanks stripped."""

    state: str
    tapes: Tuple[Tuple[str, str], ...]


def _canon(left: str, right: str):
    return left.lstrip(BLANK), right.rstrip(BLANK)


def initial_config(machine, input="") -> StmConfig:
    if isinstance(input, str):
        input = [input]
    contents = dict(zip(machine.inputs, input))
    return StmConfig(machine.initial,
                     tuple(_canon("", contents.get(i, "")) for i in range(machine.tapes)))


def _head(tape):
    return tape[1][0] if tape[1] else BLANK


def applicable(machine, config: StmConfig):
    """Tag -> transition applicable in ``config`` (slow reference path)."""
    out = {}
    transitions = machine.transitions if isinstance(machine, StmSpec) else (
        [_retag(t, "0") for t in machine.delta0] + [_retag(t, "1") for t in machine.delta1])
    heads = [_head(t) for t in config.tapes]
    for t in transitions:
        if t.state == config.state and all(r == ANY or r == h for r, h in zip(t.reads, heads)):
            out[t.tag] = t
    return out


def apply_transition(config: StmConfig, t: Transition) -> StmConfig:
    tapes = []
    for (left, right), w, m in zip(config.tapes, t.writes, t.moves):
        cur = right[0] if right else BLANK
        rest = right[1:]
        if w != ANY:
            cur = w
        if m == "R":
            left, right = left + cur, rest
        elif m == "L":
            prev = left[-1] if left else BLANK
            left, right = left[:-1], prev + cur + rest
        else:
            right = cur + rest
        tapes.append(_canon(left, right))
    return StmConfig(t.next, tuple(tapes))


def config_output(machine, config: StmConfig) -> str:
    return output_extract(config.tapes[machine.output][0])


def reach_layers(machine, input="", n: int = 6):
    """For each step count k <= n, the measure of the streams that drive the
    machine into each configuration after exactly k steps."""
    ptm = isinstance(machine, PtmSpec)
    layer = {initial_config(machine, input): Dyadic(1)}
    layers = [layer]
    half = Dyadic(1, 1)
    for _ in range(n):
        nxt = {}
        for c, w in layer.items():
            tags = applicable(machine, c)
            if NOCONSUME in tags:
                succ = [(apply_transition(c, tags[NOCONSUME]), w)]
            else:
                succ = []
                for b in "01":
                    if b in tags:
                        succ.append((apply_transition(c, tags[b]), w * half))
                    elif ptm and tags:
                        succ.append((c, w * half))
            for c2, w2 in succ:
                nxt[c2] = nxt.get(c2, Dyadic(0)) + w2
        layer = nxt
        layers.append(layer)
    return layers


def final_dist_reference(machine, input="", fuel: int = 8) -> Distribution:
    """Output distribution by explicit enumeration of streams of length
    ``fuel`` (independent of :func:`run_dist`; small machines only)."""
    out = DistBuilder()
    for bits in product("01", repeat=fuel):
        c = initial_config(machine, input)
        stream = list(bits)
        halted = False
        for _ in range(fuel):
            tags = applicable(machine, c)
            if NOCONSUME in tags:
                c = apply_transition(c, tags[NOCONSUME])
                continue
            b = stream.pop(0)
            if b in tags:
                c = apply_transition(c, tags[b])
            elif isinstance(machine, PtmSpec) and tags:
                continue
            else:
                halted = True
                break
        if not halted and applicable(machine, c):
            out.diverge(fuel)
        else:
            out.add(config_output(machine, c), fuel)
    return out.build()


# ---------------------------------------------------------------- encodings


def h_encode(m: StmSpec) -> StmSpec:
    """Replace each non-consuming transition by a 0- and a 1-consuming copy."""
    ts = []
    for t in m.transitions:
        if t.tag == NOCONSUME:
            ts.append(_retag(t, "0"))
            ts.append(_retag(t, "1"))
        else:
            ts.append(t)
    return StmSpec(m.states, m.initial, m.tapes, tuple(ts), m.inputs, m.output)


def stm_to_ptm(m: StmSpec) -> PtmSpec:
    if not m.is_standard:
        raise MachineError("only standard machines (every step consumes a bit) map to PTMs")
    d0 = tuple(t for t in m.transitions if t.tag == "0")
    d1 = tuple(_retag(t, "0") for t in m.transitions if t.tag == "1")
    return PtmSpec(m.states, m.initial, m.tapes, d0, d1, m.inputs, m.output)


def ptm_to_stm(p: PtmSpec) -> StmSpec:
    ts = [_retag(t, "0") for t in p.delta0] + [_retag(t, "1") for t in p.delta1]
    return StmSpec(p.states, p.initial, p.tapes, tuple(ts), p.inputs, p.output)


# ---------------------------------------------------------------- file format


def format_machine(m) -> str:
    lines = [f"states {' '.join(m.states)}", f"initial {m.initial}", f"tapes {m.tapes}",
             f"inputs {' '.join(map(str, m.inputs))}", f"output {m.output}"]
    if isinstance(m, PtmSpec):
        groups = (("delta0", m.delta0, "0"), ("delta1", m.delta1, "1"))
        lines[0:0] = ["kind ptm"]
        for _, ts, tag in groups:
            for t in ts:
                lines.append(_format_transition(_retag(t, tag)))
    else:
        for t in m.transitions:
            lines.append(_format_transition(t))
    return "\n".join(lines) + "\n"


def _format_transition(t: Transition) -> str:
    return " ".join([t.state, *t.reads, t.tag, *t.writes, *t.moves, t.next])


def parse_machine(src: str):
    header, rows, kind = {}, [], "stm"
    for raw in src.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        if words[0] in ("states", "initial", "tapes", "inputs", "output"):
            header[words[0]] = words[1:]
        elif words[0] == "kind":
            kind = words[1]
        else:
            rows.append(words)
    try:
        states = header["states"]
        initial = header["initial"][0]
        tapes = int(header.get("tapes", ["1"])[0])
    except (KeyError, IndexError, ValueError):
        raise MachineError("machine header needs 'states' and 'initial' lines")
    inputs = tuple(int(x) for x in header.get("inputs", ["0"]))
    output = int(header.get("output", ["0"])[0])
    ts = []
    for words in rows:
        if len(words) != 3 * tapes + 3:
            raise MachineError(f"transition line has {len(words)} fields, expected {3 * tapes + 3}")
        ts.append(Transition(words[0], tuple(words[1:1 + tapes]), words[1 + tapes],
                             tuple(words[2 + tapes:2 + 2 * tapes]),
                             tuple(words[2 + 2 * tapes:2 + 3 * tapes]), words[-1]))
    if kind == "ptm":
        d0 = [t for t in ts if t.tag == "0"]
        d1 = [_retag(t, "0") for t in ts if t.tag == "1"]
        return PtmSpec(tuple(states), initial, tapes, tuple(d0), tuple(d1), inputs, output)
    return StmSpec(tuple(states), initial, tapes, tuple(ts), inputs, output)


# ---------------------------------------------------------------- random machines


def random_machine(rng, max_states: int = 4, max_transitions: int = 8,
                   standard: bool = False, tapes: int = 1) -> StmSpec:
    """A random deterministic single- or multi-tape machine.

    On-demand machines get, per (state, symbol) key, either one ``~``
    transition or one or two bit-tagged ones.  Standard machines get both
    bit tags on every key they define, so the PTM and STM readings agree.
    """
    n = rng.randint(1, max_states)
    states = tuple(f"q{i}" for i in range(n))
    keys = [(q, syms) for q in states for syms in product(SYMBOLS, repeat=tapes)]
    rng.shuffle(keys)
    budget = rng.randint(0, max_transitions)
    ts = []

    def action():
        return (tuple(rng.choice(SYMBOLS + (ANY,)) for _ in range(tapes)),
                tuple(rng.choice("LRS") for _ in range(tapes)),
                rng.choice(states))

    for q, syms in keys:
        if len(ts) >= budget:
            break
        if standard:
            tags = ("0", "1")
        else:
            tags = rng.choice([("~",), ("0",), ("1",), ("0", "1")])
        if len(ts) + len(tags) > budget:
            continue
        for tag in tags:
            w, mv, nx = action()
            ts.append(Transition(q, syms, tag, w, mv, nx))
    return StmSpec(states, "q0", tapes, tuple(ts))
