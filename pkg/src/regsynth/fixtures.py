"""Reference automata and transducers used by the tests, the CLI and the docs."""

from __future__ import annotations

from .core import (
    TOP, Eq, Kind, Neq, RegisterAutomaton, RegisterTransducer, Rule, Semantics, Transition,
)

IN, OUT = Kind.IN, Kind.OUT


def _spec(name, sem, states, transitions, labels_in, labels_out, registers, initial=None):
    """``states``: list of (name, kind, priority); transitions: (src, label, test, asgn, dst)."""
    return RegisterAutomaton(
        states=[s for s, _, _ in states],
        initial=initial or states[0][0],
        registers=registers,
        transitions=[Transition(s, l, t, frozenset(a), d) for s, l, t, a, d in transitions],
        priority={s: p for s, _, p in states},
        kind={s: k for s, k, _ in states},
        labels_in=labels_in, labels_out=labels_out, semantics=sem, name=name,
    )


def request_grant() -> RegisterAutomaton:
    """Every request ``(req, i)`` is eventually followed by ``(grt, i)``.

    ``p_o`` (priority 1) is visited while a stored request is pending; the
    universal reading rejects as soon as one pending request is never granted.
    """
    r = "r"
    tr = [
        ("w_i", "req", TOP, {r}, "p_o"),
        ("w_i", "req", TOP, (), "w_o"),
        ("w_i", "idle", TOP, (), "w_o"),
        ("w_o", "grt", TOP, (), "w_i"),
        ("w_o", "idle", TOP, (), "w_i"),
        ("p_o", "idle", TOP, (), "p_i"),
        ("p_o", "grt", Neq(r), (), "p_i"),
        ("p_o", "grt", Eq(r), (), "s_i"),
        ("p_i", "req", TOP, (), "p_o"),
        ("p_i", "idle", TOP, (), "p_o"),
    ]
    states = [("w_i", IN, 0), ("w_o", OUT, 0), ("p_o", OUT, 1), ("p_i", IN, 0), ("s_i", IN, 0)]
    return _spec("reqgrant", Semantics.URA, states, tr, {"req", "idle"}, {"grt", "idle"}, [r])


def immediate_grant() -> RegisterTransducer:
    """One state: store each request and grant it at once; idle answers idle."""
    rules = {
        ("i", "req"): [Rule(TOP, frozenset({"r"}), "grt", "r", "i")],
        ("i", "idle"): [Rule(TOP, frozenset(), "idle", "r", "i")],
    }
    return RegisterTransducer(["i"], "i", ["r"], rules, {"req", "idle"}, {"grt", "idle"}, name="grant")


def lazy_grant() -> RegisterTransducer:
    """Broken implementation: grants the register it never writes."""
    rules = {
        ("i", "req"): [Rule(TOP, frozenset(), "grt", "r", "i")],
        ("i", "idle"): [Rule(TOP, frozenset(), "idle", "r", "i")],
    }
    return RegisterTransducer(["i"], "i", ["r"], rules, {"req", "idle"}, {"grt", "idle"}, name="lazy")


def different_output() -> RegisterAutomaton:
    """Store the first input, demand a different first output, then accept."""
    tr = [
        ("1", "a", TOP, {"r"}, "2"),
        ("2", "a", Neq("r"), (), "3"),
        ("3", "a", TOP, (), "4"),
        ("4", "a", TOP, (), "3"),
    ]
    states = [("1", IN, 1), ("2", OUT, 1), ("3", IN, 2), ("4", OUT, 1)]
    return _spec("diffout", Semantics.DRA, states, tr, {"a"}, {"a"}, ["r"])


def conditional_copy() -> RegisterAutomaton:
    """Copy the first datum; then the second output must differ from the first
    datum exactly when the second input does."""
    tr = [
        ("1", "a", TOP, {"r"}, "2"),
        ("2", "a", Eq("r"), (), "3"),
        ("3", "a", Neq("r"), (), "4"),
        ("3", "a", Eq("r"), (), "5"),
        ("4", "a", Neq("r"), (), "6"),
        ("5", "a", Eq("r"), (), "6"),
        ("6", "a", TOP, (), "7"),
        ("7", "a", TOP, (), "6"),
    ]
    states = [("1", IN, 1), ("2", OUT, 1), ("3", IN, 1), ("4", OUT, 1), ("5", OUT, 1),
              ("6", IN, 2), ("7", OUT, 1)]
    return _spec("condcopy", Semantics.DRA, states, tr, {"a"}, {"a"}, ["r"])


def echo() -> RegisterAutomaton:
    """E1: each output repeats the input just read."""
    tr = [("i", "a", TOP, {"r"}, "o"), ("o", "a", Eq("r"), (), "i")]
    return _spec("echo", Semantics.DRA, [("i", IN, 0), ("o", OUT, 0)], tr, {"a"}, {"a"}, ["r"])


def echo_trap() -> RegisterAutomaton:
    """E2: after one echo, every later input must equal the first one; a
    different datum leads into an odd-priority trap."""
    tr = [
        ("i0", "a", TOP, {"r"}, "o0"),
        ("o0", "a", Eq("r"), (), "i1"),
        ("i1", "a", Eq("r"), (), "o1"),
        ("o1", "a", Eq("r"), (), "i1"),
        ("i1", "a", Neq("r"), (), "bo"),
        ("bo", "a", Eq("r"), (), "bi"),
        ("bi", "a", TOP, (), "bo"),
    ]
    states = [("i0", IN, 0), ("o0", OUT, 0), ("i1", IN, 0), ("o1", OUT, 0), ("bo", OUT, 1), ("bi", IN, 1)]
    return _spec("echotrap", Semantics.DRA, states, tr, {"a"}, {"a"}, ["r"])


def identity_spec() -> RegisterAutomaton:
    """Test-free: every output equals the input just read."""
    tr = [("i", "a", TOP, {"r"}, "o"), ("o", "a", Eq("r"), (), "i")]
    return _spec("identity", Semantics.NRA, [("i", IN, 0), ("o", OUT, 0)], tr, {"a"}, {"a"}, ["r"])


def identity_transducer() -> RegisterTransducer:
    rules = {("t", "a"): [Rule(TOP, frozenset({"r"}), "a", "r", "t")]}
    return RegisterTransducer(["t"], "t", ["r"], rules, {"a"}, {"a"}, name="identity")


def swap_once() -> RegisterAutomaton:
    """Test-free: copy inputs, except that at most one output may replay an
    earlier input instead (guessed with the second register)."""
    tr = [
        ("c_i", "a", TOP, {"r", "s"}, "c_o"),
        ("c_i", "a", TOP, {"r"}, "c_o"),
        ("c_o", "a", Eq("r"), (), "c_i"),
        ("c_o", "a", Eq("s"), (), "d_i"),
        ("d_i", "a", TOP, {"r"}, "d_o"),
        ("d_o", "a", Eq("r"), (), "d_i"),
    ]
    states = [("c_i", IN, 0), ("c_o", OUT, 0), ("d_i", IN, 0), ("d_o", OUT, 0)]
    return _spec("swaponce", Semantics.NRA, states, tr, {"a"}, {"a"}, ["r", "s"])


def delayed_pair() -> RegisterAutomaton:
    """Test-free: outputs d1 d1 d2 then copies; needs two registers to hold
    d1 and d2 at the same time."""
    tr = [
        ("i0", "a", TOP, {"x"}, "o0"),
        ("o0", "a", Eq("x"), (), "i1"),
        ("i1", "a", TOP, {"y"}, "o1"),
        ("o1", "a", Eq("x"), (), "i2"),
        ("i2", "a", TOP, (), "o2"),
        ("o2", "a", Eq("y"), (), "i3"),
        ("i3", "a", TOP, {"x"}, "o3"),
        ("o3", "a", Eq("x"), (), "i3"),
    ]
    states = [(s, IN if s[0] == "i" else OUT, 0) for s in ["i0", "o0", "i1", "o1", "i2", "o2", "i3", "o3"]]
    return _spec("delayedpair", Semantics.NRA, states, tr, {"a"}, {"a"}, ["x", "y"])


def input_guard_nra() -> RegisterAutomaton:
    """Nondeterministic specification with an input equality test (outside the
    decidable test-free class)."""
    tr = [
        ("i", "a", TOP, {"r"}, "o"),
        ("o", "a", Eq("r"), (), "j"),
        ("j", "a", Eq("r"), (), "p"),
        ("j", "a", Neq("r"), (), "p"),
        ("p", "a", TOP, (), "j"),
    ]
    states = [("i", IN, 0), ("o", OUT, 0), ("j", IN, 0), ("p", OUT, 0)]
    return _spec("inputguard", Semantics.NRA, states, tr, {"a"}, {"a"}, ["r"])


def universal_spec(labels_in=("a",), labels_out=("a",)) -> RegisterAutomaton:
    tr = [("i", l, TOP, (), "o") for l in labels_in] + [("o", l, TOP, (), "i") for l in labels_out]
    return _spec("anything", Semantics.URA, [("i", IN, 0), ("o", OUT, 0)], tr, set(labels_in), set(labels_out), [])


def odd_spec() -> RegisterAutomaton:
    tr = [("i", "a", TOP, (), "o"), ("o", "a", TOP, (), "i")]
    return _spec("nothing", Semantics.URA, [("i", IN, 1), ("o", OUT, 1)], tr, {"a"}, {"a"}, [])


ALL_AUTOMATA = {
    "reqgrant": request_grant,
    "diffout": different_output,
    "condcopy": conditional_copy,
    "echo": echo,
    "echotrap": echo_trap,
    "identity": identity_spec,
    "swaponce": swap_once,
    "delayedpair": delayed_pair,
    "inputguard": input_guard_nra,
    "anything": universal_spec,
    "nothing": odd_spec,
}

ALL_TRANSDUCERS = {
    "grant": immediate_grant,
    "lazy": lazy_grant,
    "identity": identity_transducer,
}
