import pytest
from hypothesis import given
from hypothesis import strategies as st

from regsynth.lasso import (
    Lasso, LassoDataWord, LassoSyntaxError, format_lasso, interleave, parse_lasso, zip_lassos,
)

letters = st.tuples(st.sampled_from(["a", "b"]), st.integers(0, 3))
lassos = st.builds(LassoDataWord, st.lists(letters, max_size=4).map(tuple),
                   st.lists(letters, min_size=1, max_size=4).map(tuple))


def test_parse_and_index():
    w = parse_lasso("(req,1)(grt,1) | (idle,0)(idle,0)")
    assert w.prefix == (("req", 1), ("grt", 1))
    assert w[5] == ("idle", 0)
    assert w.take(3) == (("req", 1), ("grt", 1), ("idle", 0))
    assert parse_lasso("(a,2)").prefix == ()


@pytest.mark.parametrize("bad", ["", "(a,1) | ", "(a,1)|(b,2)|(c,3)", "(a,x)", "a,1"])
def test_parse_errors(bad):
    with pytest.raises(LassoSyntaxError):
        parse_lasso(bad)


def test_empty_loop_rejected():
    with pytest.raises(ValueError):
        Lasso((1,), ())


def test_interleave_and_split():
    u = parse_lasso("(req,1) | (idle,0)")
    v = parse_lasso("(grt,1)(idle,0)")
    w = interleave(u, v)
    assert w.is_relational()
    assert w.inp().same_word(u)
    assert w.out().same_word(v)


def test_out_needs_relational():
    with pytest.raises(ValueError):
        parse_lasso("(a,1)").out()


def test_canonical_example():
    w = parse_lasso("(a,1)(a,1) | (a,1)(a,1)")
    c = w.canonical()
    assert c.prefix == () and c.loop == (("a", 1),)


@given(lassos, st.integers(0, 3))
def test_unfold_and_rotate_keep_the_word(w, n):
    horizon = len(w) + 4 * len(w.loop) + n + 2
    for v in (w.unfold(n), w.rotate(), w.canonical()):
        assert v.take(horizon) == w.take(horizon)
        assert v.same_word(w)


@given(lassos)
def test_format_parse_round_trip(w):
    assert parse_lasso(format_lasso(w)) == w


@given(lassos, lassos)
def test_zip_is_pointwise(a, b):
    z = zip_lassos(a, b)
    for i in range(3 * (len(a) + len(b))):
        assert z[i] == (a[i], b[i])


@given(lassos, lassos)
def test_same_word_matches_long_prefix(a, b):
    horizon = 2 * (len(a) + len(b)) + 2 * len(a.loop) * len(b.loop)
    assert a.same_word(b) == (a.take(horizon) == b.take(horizon))
