import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from regsynth import fixtures as F
from regsynth.core import TOP, Kind, RegisterAutomaton, RegisterTransducer, Rule, Semantics, Transition
from regsynth.lasso import parse_lasso
from regsynth.simulate import membership, nra_membership, transducer_run, ura_membership
from regsynth.synth_bounded import synth_bounded
from regsynth.synth_dra import Realizable, synthesize_dra_ido
from regsynth.verify import (
    check_realizes, check_realizes_dra, check_realizes_tf, check_realizes_ura, nra_emptiness, random_check,
    shrink,
)

import gen
import oracles


def _loop(prio):
    return RegisterAutomaton(["q"], "q", [], [Transition("q", "a", TOP, frozenset(), "q")], {"q": prio},
                             {"q": Kind.PLAIN}, {"a"})


def test_emptiness_examples():
    assert nra_emptiness(_loop(1)).empty
    em = nra_emptiness(_loop(0))
    assert not em.empty and em.witness.same_word(parse_lasso("(a,0)"))
    assert em.verdict == "NONEMPTY"


@settings(max_examples=80)
@given(st.integers(0, 10**9))
def test_emptiness_vs_bounded_search(seed):
    rng = random.Random(seed)
    A = gen.random_nra(rng)
    em = nra_emptiness(A)
    pool = len(A.registers) + 1
    found = any(oracles.pool_search(A, lab, pool) for lab in gen.label_lassos(sorted(A.alphabet), 4))
    if found:
        assert not em.empty
    if not em.empty:
        assert nra_membership(A, em.witness)[0]
        assert oracles.nra_accepts(A, em.witness)
    assert nra_emptiness(A, pool + 3).empty == em.empty


def test_request_grant_checks():
    v = check_realizes_ura(F.immediate_grant(), F.request_grant())
    assert v.ok and str(v) == "OK"
    v = check_realizes_ura(F.lazy_grant(), F.request_grant())
    assert not v.ok and v.verdict == "FAIL"
    assert v.meta["replay"] == {"in_L(T)": True, "in_S": False}
    assert "req" in {l for l, _ in v.counterexample.inp().prefix + v.counterexample.inp().loop}


def test_universal_spec_accepts_anything():
    S = F.universal_spec(("req", "idle"), ("grt", "idle"))
    assert check_realizes_ura(F.lazy_grant(), S).ok


def test_alphabet_mismatch():
    with pytest.raises(ValueError):
        check_realizes_ura(F.immediate_grant(), F.echo())


def test_dra_checks():
    res = synthesize_dra_ido(F.echo())
    assert check_realizes_dra(res.transducer, F.echo()).ok
    ok = check_realizes_dra(F.identity_transducer(), F.conditional_copy())
    assert ok.ok and ok.meta["completed_with_sink"]
    bad = check_realizes_dra(F.identity_transducer(), F.different_output())
    assert not bad.ok
    assert bad.meta["replay"] == {"in_L(T)": True, "in_S": False}


def test_test_free_checks():
    assert check_realizes_tf(F.identity_transducer(), F.identity_spec()).ok
    stale = RegisterTransducer(["t"], "t", ["r"], {("t", "a"): [Rule(TOP, frozenset(), "a", "r", "t")]},
                               {"a"}, {"a"})
    v = check_realizes_tf(stale, F.identity_spec())
    assert not v.ok and v.meta["replay"]["in_S"] is False
    assert not nra_membership(F.identity_spec(), v.counterexample)[0]


def test_dispatch():
    assert check_realizes(F.immediate_grant(), F.request_grant()).ok
    with pytest.raises(ValueError):
        check_realizes(F.identity_transducer(), F.input_guard_nra())


def test_random_check_examples():
    rep = random_check(F.immediate_grant(), F.request_grant(), 500, seed=1)
    assert rep.ok and rep.samples == 500
    rep = random_check(F.lazy_grant(), F.request_grant(), 200, seed=1)
    assert rep.failures
    small, word = rep.failures[0]
    assert not ura_membership(F.request_grant(), word)
    assert len(small) <= 3
    assert random_check(F.lazy_grant(), F.request_grant(), 0).failures == []


def test_shrink_keeps_failure():
    inp = parse_lasso("(idle,3)(req,4)(idle,5) | (req,6)(idle,7)")
    small = shrink(F.lazy_grant(), F.request_grant(), inp)
    assert not membership(F.request_grant(), transducer_run(F.lazy_grant(), small))
    assert len(small) <= len(inp)


@pytest.mark.parametrize("name", ["reqgrant", "condcopy", "echo", "identity", "swaponce", "delayedpair"])
def test_exact_ok_never_contradicted(name):
    S = F.ALL_AUTOMATA[name]()
    res = synth_bounded(S, 2)
    assert isinstance(res, Realizable)
    assert random_check(res.transducer, S, 300, seed=5).ok


@settings(max_examples=30)
@given(st.integers(0, 10**9))
def test_random_universal_specs(seed):
    rng = random.Random(seed)
    S = gen.random_spec(rng, Semantics.URA)
    T = RegisterTransducer(["t"], "t", ["r"], {("t", l): [Rule(TOP, frozenset({"r"}) if rng.random() < .5 else frozenset(),
                                                                "c", "r", "t")] for l in "ab"}, {"a", "b"}, {"c"})
    v = check_realizes_ura(T, S)
    rep = random_check(T, S, 60, seed=seed, shrink_failures=False)
    if v.ok:
        assert rep.ok
    else:
        assert v.meta["replay"] == {"in_L(T)": True, "in_S": False}
