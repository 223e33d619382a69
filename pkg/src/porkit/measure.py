"""Oracles, bit streams, exact dyadic probabilities, cylinder sets and
output distributions."""

import json
from fractions import Fraction
from functools import total_ordering
from itertools import product

from .bits import dy, format_bits, parse_bits, truncate


# ---------------------------------------------------------------- dyadics


@total_ordering
class Dyadic:
    """An exact number num / 2**log2den kept in canonical form."""

    __slots__ = ("num", "log2den")

    def __init__(self, num: int = 0, log2den: int = 0):
        if log2den < 0:
            num, log2den = num * 2 ** (-log2den), 0
        if num == 0:
            log2den = 0
        else:
            while log2den > 0 and num % 2 == 0:
                num //= 2
                log2den -= 1
        self.num = num
        self.log2den = log2den

    @classmethod
    def of(cls, value) -> "Dyadic":
        if isinstance(value, Dyadic):
            return value
        if isinstance(value, int):
            return cls(value, 0)
        frac = Fraction(value)
        den = frac.denominator
        k = den.bit_length() - 1
        if den != 1 << k:
            raise ValueError(f"{value} is not dyadic")
        return cls(frac.numerator, k)

    @classmethod
    def pow2(cls, k: int) -> "Dyadic":
        """2**-k."""
        return cls(1, k)

    def _align(self, other):
        k = max(self.log2den, other.log2den)
        return (self.num << (k - self.log2den), other.num << (k - other.log2den), k)

    def __add__(self, other):
        other = Dyadic.of(other)
        a, b, k = self._align(other)
        return Dyadic(a + b, k)

    __radd__ = __add__

    def __sub__(self, other):
        other = Dyadic.of(other)
        a, b, k = self._align(other)
        return Dyadic(a - b, k)

    def __rsub__(self, other):
        return Dyadic.of(other) - self

    def __neg__(self):
        return Dyadic(-self.num, self.log2den)

    def __mul__(self, other):
        other = Dyadic.of(other)
        return Dyadic(self.num * other.num, self.log2den + other.log2den)

    __rmul__ = __mul__

    def halve(self) -> "Dyadic":
        return Dyadic(self.num, self.log2den + 1)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Dyadic)):
            o = Dyadic.of(other)
            return self.num == o.num and self.log2den == o.log2den
        return NotImplemented

    def __lt__(self, other):
        a, b, _ = self._align(Dyadic.of(other))
        return a < b

    def __hash__(self):
        return hash((self.num, self.log2den))

    def __bool__(self):
        return self.num != 0

    def to_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.log2den)

    def __float__(self):
        return self.num / (1 << self.log2den)

    def __repr__(self):
        return f"Dyadic({self.num}, {self.log2den})"

    def __str__(self):
        if self.log2den == 0:
            return str(self.num)
        return f"{self.num}/{1 << self.log2den}"

    def to_json(self):
        return {"num": self.num, "log2den": self.log2den}

    @classmethod
    def from_json(cls, obj) -> "Dyadic":
        return cls(int(obj["num"]), int(obj["log2den"]))


ZERO = Dyadic(0)
ONE = Dyadic(1)
HALF = Dyadic(1, 1)


# ---------------------------------------------------------------- oracles


class OracleMiss(LookupError):
    pass


class Oracle:
    """A finite table of coordinate bits plus a policy for missing coordinates.

    Policies: ``strict`` raises on a miss, ``zero``/``one`` answer a constant.
    """

    POLICIES = ("strict", "zero", "one")

    def __init__(self, table=None, default_policy: str = "strict"):
        if default_policy not in self.POLICIES:
            raise ValueError(f"unknown oracle policy {default_policy!r}")
        self.table = dict(table or {})
        for k, v in self.table.items():
            if v not in (0, 1):
                raise ValueError(f"oracle bit for {k!r} must be 0 or 1")
        self.default_policy = default_policy

    def __call__(self, coord: str) -> int:
        bit = self.table.get(coord)
        if bit is not None:
            return bit
        if self.default_policy == "zero":
            return 0
        if self.default_policy == "one":
            return 1
        raise OracleMiss(coord)

    def __repr__(self):
        return f"Oracle({self.table!r}, {self.default_policy!r})"

    @classmethod
    def random(cls, rng, coords, default_policy="zero") -> "Oracle":
        return cls({c: rng.randrange(2) for c in coords}, default_policy)


class StreamUnderrun(IndexError):
    pass


class BitStream:
    """A finite prefix of an infinite bit stream with a read cursor.

    ``take`` returns the bit together with the advanced stream; the stream
    itself is never mutated.
    """

    __slots__ = ("prefix", "cursor")

    def __init__(self, prefix: str = "", cursor: int = 0):
        if not 0 <= cursor <= len(prefix):
            raise ValueError("cursor out of range")
        self.prefix = prefix
        self.cursor = cursor

    def peek(self) -> int:
        if self.cursor >= len(self.prefix):
            raise StreamUnderrun(self.cursor)
        return 1 if self.prefix[self.cursor] == "1" else 0

    def take(self):
        bit = self.peek()
        return bit, BitStream(self.prefix, self.cursor + 1)

    @property
    def remaining(self) -> str:
        return self.prefix[self.cursor:]

    def __eq__(self, other):
        return isinstance(other, BitStream) and self.remaining == other.remaining

    def __hash__(self):
        return hash(self.remaining)

    def __repr__(self):
        return f"BitStream({self.prefix!r}, {self.cursor})"


# ---------------------------------------------------------------- distributions


class Distribution:
    """Exact output distribution with explicit divergence mass."""

    def __init__(self, weights=None, divergence_mass=ZERO):
        self.weights = {}
        for k, w in (weights or {}).items():
            w = Dyadic.of(w)
            if w < 0:
                raise ValueError("negative weight")
            if w:
                self.weights[k] = w
        self.divergence_mass = Dyadic.of(divergence_mass)

    @classmethod
    def point(cls, value: str) -> "Distribution":
        return cls({value: ONE})

    def total(self) -> Dyadic:
        t = self.divergence_mass
        for w in self.weights.values():
            t = t + w
        return t

    def is_total(self) -> bool:
        return self.total() == ONE

    def __eq__(self, other):
        return isinstance(other, Distribution) and dist_equal(self, other)

    def __repr__(self):
        parts = [f"{format_bits(k)}: {w}" for k, w in sorted(self.weights.items())]
        if self.divergence_mass:
            parts.append(f"diverge: {self.divergence_mass}")
        return "{" + ", ".join(parts) + "}"

    def to_json(self) -> dict:
        out = {format_bits(k): w.to_json() for k, w in self.weights.items()}
        out["diverge"] = self.divergence_mass.to_json()
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, obj) -> "Distribution":
        obj = dict(obj)
        div = Dyadic.from_json(obj.pop("diverge", {"num": 0, "log2den": 0}))
        return cls({parse_bits(k): Dyadic.from_json(v) for k, v in obj.items()}, div)

    @classmethod
    def loads(cls, text: str) -> "Distribution":
        return cls.from_json(json.loads(text))


class DistBuilder:
    """Accumulates leaf weights given as powers of two, exactly."""

    def __init__(self):
        self._acc = {}
        self._div = []

    def add(self, value: str, depth: int):
        self._acc.setdefault(value, []).append(depth)

    def diverge(self, depth: int):
        self._div.append(depth)

    @staticmethod
    def _sum(depths):
        k = max(depths)
        return Dyadic(sum(1 << (k - d) for d in depths), k)

    def build(self) -> Distribution:
        weights = {v: self._sum(ds) for v, ds in self._acc.items()}
        div = self._sum(self._div) if self._div else ZERO
        return Distribution(weights, div)


def dist_equal(a: Distribution, b: Distribution) -> bool:
    return a.weights == b.weights and a.divergence_mass == b.divergence_mass


# ---------------------------------------------------------------- cylinders


class CylinderSet:
    """A set of oracles fixed by a finite coordinate set.

    ``members`` holds assignments as integers: bit j of a member is the
    value of ``coords[j]``.
    """

    __slots__ = ("coords", "members", "_index")

    def __init__(self, coords=(), members=()):
        coords = tuple(coords)
        if len(set(coords)) != len(coords):
            raise ValueError("duplicate cylinder coordinates")
        order = sorted(range(len(coords)), key=lambda j: coords[j])
        self.coords = tuple(coords[j] for j in order)
        if order != list(range(len(coords))):
            members = {_permute(m, order) for m in members}
        self.members = frozenset(members)
        limit = 1 << len(coords)
        for m in self.members:
            if not 0 <= m < limit:
                raise ValueError("member outside the coordinate space")
        self._index = {c: j for j, c in enumerate(self.coords)}

    @classmethod
    def full(cls) -> "CylinderSet":
        return cls((), {0})

    @classmethod
    def empty(cls) -> "CylinderSet":
        return cls((), ())

    @classmethod
    def coordinate(cls, coord: str, bit: int = 1) -> "CylinderSet":
        return cls((coord,), {bit})

    @classmethod
    def from_assignments(cls, coords, assignments) -> "CylinderSet":
        """Build from dicts coordinate -> bit."""
        coords = tuple(sorted(coords))
        members = set()
        for a in assignments:
            members.add(sum(a[c] << j for j, c in enumerate(coords)))
        return cls(coords, members)

    def assignments(self):
        for m in sorted(self.members):
            yield {c: (m >> j) & 1 for j, c in enumerate(self.coords)}

    def measure(self) -> Dyadic:
        return Dyadic(len(self.members), len(self.coords))

    def extend(self, coords) -> "CylinderSet":
        """The same set of oracles described over a superset of coordinates."""
        new = tuple(sorted(set(self.coords) | set(coords)))
        if new == self.coords:
            return self
        pos = [new.index(c) for c in self.coords]
        free = [j for j, c in enumerate(new) if c not in self._index]
        base = []
        for m in self.members:
            v = 0
            for j, p in enumerate(pos):
                if (m >> j) & 1:
                    v |= 1 << p
            base.append(v)
        members = set()
        for extra in range(1 << len(free)):
            add = 0
            for j, p in enumerate(free):
                if (extra >> j) & 1:
                    add |= 1 << p
            for v in base:
                members.add(v | add)
        out = CylinderSet.__new__(CylinderSet)
        out.coords = new
        out.members = frozenset(members)
        out._index = {c: j for j, c in enumerate(new)}
        return out

    def contains(self, oracle) -> bool:
        """Membership of an oracle (any callable coordinate -> bit)."""
        m = 0
        for j, c in enumerate(self.coords):
            if oracle(c):
                m |= 1 << j
        return m in self.members

    def is_full(self) -> bool:
        return len(self.members) == 1 << len(self.coords)

    def is_empty(self) -> bool:
        return not self.members

    def same_set(self, other: "CylinderSet") -> bool:
        ks = set(self.coords) | set(other.coords)
        return self.extend(ks).members == other.extend(ks).members

    def subset_of(self, other: "CylinderSet") -> bool:
        ks = set(self.coords) | set(other.coords)
        return self.extend(ks).members <= other.extend(ks).members

    def __repr__(self):
        return f"CylinderSet({self.coords!r}, {sorted(self.members)!r})"


def _permute(m: int, order) -> int:
    # new position i holds old position order[i]
    v = 0
    for i, j in enumerate(order):
        if (m >> j) & 1:
            v |= 1 << i
    return v


def cylinder_measure(c: CylinderSet) -> Dyadic:
    return c.measure()


def cylinder_boolean(a: CylinderSet, b=None, op: str = "union") -> CylinderSet:
    if op == "complement":
        full = (1 << len(a.coords)) - 1
        out = CylinderSet.__new__(CylinderSet)
        out.coords = a.coords
        out.members = frozenset(m for m in range(full + 1) if m not in a.members)
        out._index = a._index
        return out
    if b is None:
        raise ValueError(f"{op} needs two operands")
    if op not in ("union", "intersection", "difference"):
        raise ValueError(f"unknown cylinder operation {op!r}")
    # fast paths keep coordinate sets small
    if op == "union":
        if a.is_full() or b.is_empty():
            return a
        if b.is_full() or a.is_empty():
            return b
    elif op == "intersection":
        if a.is_empty() or b.is_full():
            return a
        if b.is_empty() or a.is_full():
            return b
    ks = set(a.coords) | set(b.coords)
    ea, eb = a.extend(ks), b.extend(ks)
    if op == "union":
        members = ea.members | eb.members
    elif op == "intersection":
        members = ea.members & eb.members
    else:
        members = ea.members - eb.members
    out = CylinderSet.__new__(CylinderSet)
    out.coords = ea.coords
    out.members = members
    out._index = ea._index
    return out


# ---------------------------------------------------------------- extractor


def extractor_e(x: str, oracle) -> str:
    """e(eps)=eps, e(xb) = e(x) followed by oracle(dy(xb)), cut to |xb|.

    dy(xb) only depends on |xb|, and bit k (from 0) ends up reading the
    coordinate dyad(k), so distinct positions read distinct coordinates.
    """
    out = ""
    for k in range(len(x)):
        xb = x[: k + 1]
        out = truncate(out + str(oracle(dy(xb))), xb)
    return out


def all_assignments(coords):
    coords = list(coords)
    for bits in product((0, 1), repeat=len(coords)):
        yield dict(zip(coords, bits))
