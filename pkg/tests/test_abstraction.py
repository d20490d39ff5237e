import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from regsynth import fixtures as F
from regsynth.abstraction import (
    InAct, LabelMismatch, OutAct, build_Lk, compat_check, erase_data, label_projection, product_nra,
    zip_word,
)
from regsynth.core import (
    TOP, Kind, MalformedAutomaton, RegisterAutomaton, Semantics, Transition, bell_partitions,
    rename_registers, shift_colors,
)
from regsynth.lasso import Lasso, parse_lasso
from regsynth.simulate import nra_membership

import gen
import oracles
from lk_search import compare_prefixes


def test_compat_examples():
    assert compat_check([InAct("a", frozenset()), OutAct("b", frozenset({"r1"}), "r1")], [("a", 5), ("b", 5)])
    assert not compat_check([InAct("a", frozenset({"r1"})), OutAct("b", frozenset(), "r1")], [("a", 5), ("b", 0)])
    assert compat_check([], [])


def test_compat_errors():
    with pytest.raises(LabelMismatch):
        compat_check([InAct("a", frozenset())], [("z", 1)])
    with pytest.raises(LabelMismatch):
        compat_check([InAct("a", frozenset())], [])


def test_Lk_shape():
    assert len(build_Lk(1, {"a"}, {"b"}).states) == 3
    assert len(build_Lk(2, {"a"}, {"b"}).states) == 5
    with pytest.raises(MalformedAutomaton):
        build_Lk(0, {"a"}, {"b"})


@pytest.mark.parametrize("k", [1, 2])
def test_Lk_prefixes_match_compat(k):
    checked, bad = compare_prefixes(k, {"a"}, {"b"}, 4)
    assert checked > 50 and not bad


def _random_actions(rng, k, n_pairs):
    regs = [f"r{i}" for i in range(1, k + 1)]
    out = []
    for _ in range(n_pairs):
        out.append(InAct("a", frozenset(r for r in regs if rng.random() < 0.3)))
        out.append(OutAct("b", frozenset(r for r in regs if rng.random() < 0.5), rng.choice(regs)))
    return tuple(out)


@settings(max_examples=100)
@given(st.integers(0, 10**9), st.integers(1, 2))
def test_Lk_lassos_match_compat(seed, k):
    """A lasso is in L_k iff every finite prefix is compatible; prefixes up to
    the point where the fold must repeat are enough."""
    rng = random.Random(seed)
    acts = Lasso(_random_actions(rng, k, rng.randint(0, 2)), _random_actions(rng, k, rng.randint(1, 2)))
    w = gen.random_relational(rng, {"a"}, {"b"}, k + 2)
    z = zip_word(w, acts)
    horizon = len(z) + len(z.loop) * (k + 3) ** k * 2
    letters = z.take(horizon)
    want = compat_check([a for a, _ in letters], [(a.label, d) for a, d in letters], k)
    assert nra_membership(build_Lk(k, {"a"}, {"b"}), z)[0] == want


def test_zip_erase_round_trip():
    w = parse_lasso("(a,1)(b,1) | (a,2)(b,3)")
    acts = Lasso((), (InAct("a", frozenset()), OutAct("b", frozenset({"r1"}), "r1")))
    z = zip_word(w, acts)
    assert erase_data(z).same_word(acts)
    with pytest.raises(LabelMismatch):
        zip_word(parse_lasso("(b,1)(b,1)"), acts)


def _plain(states, trans, labels=("a", "b"), regs=()):
    return RegisterAutomaton(states, states[0], list(regs), trans, {q: 0 for q in states},
                             {q: Kind.PLAIN for q in states}, set(labels), set(), Semantics.NRA, name="U")


@settings(max_examples=60)
@given(st.integers(0, 10**9))
def test_product_with_universal_and_empty(seed):
    rng = random.Random(seed)
    B = gen.random_nra(rng)
    U = _plain(["u"], [Transition("u", l, TOP, frozenset(), "u") for l in "ab"])
    E = _plain(["e"], [])
    P = product_nra(U, B)
    for _ in range(10):
        w = gen.random_word(rng, "ab", 3)
        assert nra_membership(P, w)[0] == nra_membership(B, w)[0]
    assert not label_projection(product_nra(E, B)).accepted_lasso()


def test_product_preconditions():
    A = F.echo()
    with pytest.raises(MalformedAutomaton):
        product_nra(A, A)  # shared register names
    odd = rename_registers(shift_colors(F.request_grant()), {"r": "s"})
    with pytest.raises(MalformedAutomaton):
        product_nra(odd.replace(priority={q: 1 for q in odd.states}), F.request_grant())


def test_product_on_request_grant():
    S = F.request_grant()
    dual = rename_registers(shift_colors(S, flip=True), {"r": "s.r"})
    Lk = build_Lk(1, S.labels_in, S.labels_out)
    P = product_nra(Lk, dual, label_map=lambda act: act.label)
    rng = random.Random(2)
    for _ in range(60):
        w = gen.random_relational(rng, {"req", "idle"}, {"grt"}, 3)
        acts = w.labels().map(lambda l: InAct(l, frozenset({"r1"}) if rng.random() < .5 else frozenset())
                              if l != "grt" else OutAct(l, frozenset({"r1"}), "r1"))
        z = zip_word(w, acts)
        both = nra_membership(Lk, z)[0] and nra_membership(dual, w)[0]
        assert nra_membership(P, z)[0] == both


def test_projection_register_free_isomorphic():
    A = F.universal_spec(("a", "b"), ("c",))
    N = label_projection(A)
    assert len(N.states) == len(A.states)


@settings(max_examples=25)
@given(st.integers(0, 10**9))
def test_projection_vs_pool_search(seed):
    rng = random.Random(seed)
    B = gen.random_nra(rng)
    N = label_projection(B)
    assert len(N.states) <= len(B.states) * sum(1 for _ in bell_partitions(list(B.registers)))
    for lab in gen.label_lassos("ab", 4):
        assert N.accepts(lab) == oracles.pool_search(B, lab, len(B.registers) + 1)


def test_projection_request_grant():
    S = shift_colors(F.request_grant(), flip=True)
    N = label_projection(S)
    for text in ["(req,0)(grt,0)", "(req,0)(idle,0)", "(idle,0)(grt,0)", "(req,0)(grt,0)(idle,0)(idle,0)"]:
        lab = parse_lasso(text).labels()
        assert N.accepts(lab) == oracles.pool_search(S, lab, 2)
