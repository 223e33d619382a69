import itertools

import pytest
from hypothesis import given, strategies as st

from porkit.bits import (BitsError, all_strings, bin_, binsucc, concat, dy, dyad, format_bits,
                         is_initial_subword, parse_bits, times, truncate, undyad)

bitstr = st.text(alphabet="01", max_size=12)


@pytest.mark.parametrize("x,y,out", [("", "01", "01"), ("01", "1", "011"), ("10", "10", "1010")])
def test_concat_examples(x, y, out):
    assert concat(x, y) == out


@pytest.mark.parametrize("x,y,out", [("01", "", ""), ("01", "111", "010101"), ("", "0011", "")])
def test_times_examples(x, y, out):
    assert times(x, y) == out


@pytest.mark.parametrize("t,r,out", [("0110", "11", "01"), ("01", "0000", "01"), ("", "101", "")])
def test_truncate_examples(t, r, out):
    assert truncate(t, r) == out


@pytest.mark.parametrize("x,y,out", [("", "10", True), ("01", "011", True), ("10", "011", False)])
def test_initial_subword_examples(x, y, out):
    assert is_initial_subword(x, y) is out


@pytest.mark.parametrize("x,out", [("", "1"), ("01", "10"), ("10", "11")])
def test_binsucc_examples(x, out):
    assert binsucc(x) == out


@pytest.mark.parametrize("x,out", [("", "0"), ("1", "1"), ("111", "11")])
def test_bin_examples(x, out):
    assert bin_(x) == out


@pytest.mark.parametrize("x,out", [("1", ""), ("11", "0"), ("111", "1")])
def test_dy_examples(x, out):
    assert dy(x) == out


@pytest.mark.parametrize("n,out", [(0, ""), (1, "0"), (4, "01")])
def test_dyad_examples(n, out):
    assert dyad(n) == out


def test_literals():
    assert parse_bits("eps") == ""
    assert parse_bits(" 0110 ") == "0110"
    assert format_bits("") == "eps"
    with pytest.raises(BitsError):
        parse_bits("012")
    with pytest.raises(BitsError):
        parse_bits("")


def test_concat_laws_exhaustive_small():
    pool = list(all_strings(4))
    for x, y, z in itertools.product(pool, repeat=3):
        assert concat(concat(x, y), z) == concat(x, concat(y, z))
    for x in pool:
        assert concat("", x) == x == concat(x, "")


@given(bitstr, bitstr)
def test_concat_length(x, y):
    assert len(concat(x, y)) == len(x) + len(y)


@given(bitstr, st.text(alphabet="01", max_size=6))
def test_times_is_repeated_concat(x, y):
    acc = ""
    for _ in y:
        acc = acc + x
    assert times(x, y) == acc
    assert len(times(x, y)) == len(x) * len(y)


@given(bitstr, bitstr)
def test_truncate_laws(t, r):
    out = truncate(t, r)
    assert is_initial_subword(out, t)
    assert len(out) == min(len(t), len(r))


def test_bin_of_ones_is_binary():
    for n in range(256):
        assert bin_("1" * n) == format(n, "b")


def test_dyad_bijection():
    images = [dyad(n) for n in range(2 ** 10)]
    assert len(set(images)) == len(images)
    assert set(all_strings(9)) <= set(images)
    for n in range(2 ** 10):
        assert undyad(dyad(n)) == n


def test_dy_of_ones_is_dyad():
    for n in range(512):
        assert dy("1" * (n + 1)) == dyad(n)


def test_dyad_rejects_negative():
    with pytest.raises(BitsError):
        dyad(-1)
