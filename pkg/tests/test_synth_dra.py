import random
import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from regsynth import fixtures as F
from regsynth.core import Eq, Kind, RegisterAutomaton, Semantics, Transition
from regsynth.games import EVE
from regsynth.goodform import to_good_form
from regsynth.lasso import parse_lasso
from regsynth.simulate import dra_run, transducer_run
from regsynth.synth_dra import (
    AdamStrategy, PreconditionError, Realizable, Unrealizable, concrete_play, defeats, game_of_dra,
    random_eve, synthesize_dra_ido, synthesize_dra_ido_bounded,
)
from regsynth.verify import check_realizes_dra

import gen
import oracles


def test_echo_is_realizable():
    res = synthesize_dra_ido(F.echo())
    assert isinstance(res, Realizable)
    T = res.transducer
    assert T.registers == ("r",)
    w = transducer_run(T, parse_lasso("(a,3)(a,4) | (a,5)"))
    assert w.same_word(parse_lasso("(a,3)(a,3)(a,4)(a,4) | (a,5)(a,5)"))
    assert check_realizes_dra(T, F.echo()).ok


def test_echo_trap_is_unrealizable():
    res = synthesize_dra_ido(F.echo_trap())
    assert isinstance(res, Unrealizable)
    assert isinstance(res.witness, AdamStrategy)
    arena = res.witness.arena
    succ = [[] for _ in range(arena.n)]
    for s, _, t in arena.edges:
        succ[s].append(t)
    assert oracles.brute_force_winner(arena.owner, arena.priority, succ, arena.initial) == 1


def test_adam_sink_start_is_unrealizable():
    # no input transition at all: every input leads to the sink
    A = RegisterAutomaton(["i", "o"], "i", ["r"], [Transition("o", "a", Eq("r"), frozenset(), "i")],
                          {"i": 0, "o": 0}, {"i": Kind.IN, "o": Kind.OUT}, {"a"}, {"a"}, Semantics.DRA)
    assert isinstance(synthesize_dra_ido(A), Unrealizable)


def test_bounded_variant():
    res = synthesize_dra_ido_bounded(F.echo(), 5)
    assert isinstance(res, Realizable) and len(res.transducer.registers) == 1
    assert isinstance(synthesize_dra_ido_bounded(F.echo_trap(), 3), Unrealizable)


def test_bounded_variant_below_register_count_warns():
    with warnings.catch_warnings(record=True) as got:
        warnings.simplefilter("always")
        A = gen.random_dra_ido(random.Random(0), registers=(2,))
        synthesize_dra_ido_bounded(A, 1)
    assert any("register count" in str(w.message) for w in got)


@pytest.mark.parametrize("A,code", [
    (F.request_grant(), "NOT_DETERMINISTIC"),
    (F.different_output(), "NOT_IDO"),
])
def test_preconditions(A, code):
    with pytest.raises(PreconditionError) as e:
        synthesize_dra_ido(A)
    assert e.value.code == code


def test_fig1_states_as_arena_owners():
    G = to_good_form(F.echo_trap())
    arena = game_of_dra(G)
    for v, name in enumerate(arena.names):
        if name in G.automaton.kind:
            assert (arena.owner[v] == EVE) == (G.automaton.kind[name] is Kind.OUT)


def test_adam_defeats_random_eves():
    res = synthesize_dra_ido(F.echo_trap())
    beaten, escaped = defeats(res.witness, F.echo_trap(), 100, seed=3)
    assert beaten == 100 and not escaped


@settings(max_examples=60)
@given(st.integers(0, 10**9))
def test_random_specs(seed):
    rng = random.Random(seed)
    A = gen.random_dra_ido(rng)
    res = synthesize_dra_ido(A)
    if isinstance(res, Realizable):
        T = res.transducer
        assert len(T.registers) == len(A.registers)
        assert T.is_complete()
        assert check_realizes_dra(T, A).ok
    else:
        for _ in range(20):
            w = concrete_play(res.witness, random_eve(res.witness.arena, rng))
            assert not dra_run(A, w)[0]
