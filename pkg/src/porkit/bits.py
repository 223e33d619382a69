"""Binary strings and the word operations used throughout the package.

Bit strings are plain Python ``str`` values over the characters ``0`` and
``1``; the empty string is the empty word.  The textual literal for the empty
word is ``eps``.
"""

EPS_LITERAL = "eps"


class BitsError(ValueError):
    pass


def is_bits(x) -> bool:
    return isinstance(x, str) and all(c in "01" for c in x)


def check_bits(x: str) -> str:
    if not is_bits(x):
        raise BitsError(f"not a bit string: {x!r}")
    return x


def parse_bits(text: str) -> str:
    """Parse a literal: ``eps`` or a juxtaposed sequence of bits."""
    text = text.strip()
    if text == EPS_LITERAL:
        return ""
    if not text or not is_bits(text):
        raise BitsError(f"bad bit-string literal: {text!r}")
    return text


def format_bits(x: str) -> str:
    return x if x else EPS_LITERAL


def concat(x: str, y: str) -> str:
    return x + y


def times(x: str, y: str) -> str:
    """x repeated |y| times."""
    return x * len(y)


def truncate(t: str, r: str) -> str:
    """t cut to the length of r (t itself when shorter)."""
    return t[: len(r)]


def is_initial_subword(x: str, y: str) -> bool:
    """True when x is a prefix of y."""
    return y.startswith(x)


def is_subword(x: str, y: str) -> bool:
    return x in y


def ones(x: str) -> str:
    """1^x, the string of ones as long as x."""
    return "1" * len(x)


def binsucc(x: str) -> str:
    # binsucc(eps)=1, binsucc(x0)=x1|_{x00}, binsucc(x1)=binsucc(x)0|_{x00}
    if not x:
        return "1"
    head, b = x[:-1], x[-1]
    bound = x + "0"
    if b == "0":
        return truncate(head + "1", bound)
    return truncate(binsucc(head) + "0", bound)


def bin_(x: str) -> str:
    """Binary numeral of |x| computed by iterating binsucc along x."""
    acc = "0"
    for i in range(len(x)):
        acc = truncate(binsucc(acc), x[: i + 1])
    return acc


def lrs(x: str) -> str:
    """Drop the leftmost bit; eps stays eps."""
    return x[1:]


def dy(x: str) -> str:
    return lrs(bin_(x))


def dyad(n: int) -> str:
    """Binary of n+1 with its leading 1 removed."""
    if n < 0:
        raise BitsError("dyad expects a natural number")
    return format(n + 1, "b")[1:]


def undyad(x: str) -> int:
    return int("1" + x, 2) - 1


def all_strings(max_len: int, min_len: int = 0):
    """All bit strings of length min_len..max_len, shortest first."""
    for n in range(min_len, max_len + 1):
        for i in range(2 ** n):
            yield format(i, "b").zfill(n) if n else ""


def all_tuples(arity: int, max_len: int):
    import itertools

    pool = list(all_strings(max_len))
    return itertools.product(pool, repeat=arity)
