"""Command-line interface: ``regsynth <command> ...``.

Exit codes: 0 success / REALIZABLE / OK / accepted, 1 UNREALIZABLE / FAIL /
rejected, 2 usage or input error, 3 UNSUPPORTED.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .core import (
    RegisterAutomaton, RegisterTransducer, is_complete, is_complete_inputs, is_deterministic,
    is_ido, is_test_free,
)
from .dsl import (
    DSLSyntaxError, automaton_to_dot, load, print_transducer, transducer_to_dot,
)
from .fpa import FiniteParityAutomaton, to_dot, to_hoa, to_lines
from .lasso import LassoSyntaxError, format_lasso, parse_lasso
from .simulate import AlphabetMismatch, membership, transducer_run

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_UNSUPPORTED = 0, 1, 2, 3
JSON_FORMAT = 1


class UsageError(Exception):
    pass


def _load(path: str, want):
    try:
        doc = load(path)
    except OSError as e:
        raise UsageError(f"{path}: {e.strerror}") from None
    except DSLSyntaxError as e:
        raise UsageError(f"{path}:{e}") from None
    if not isinstance(doc.obj, want):
        kind = "a transducer" if want is RegisterTransducer else "an automaton"
        raise UsageError(f"{path}: expected {kind}")
    for w in doc.warnings:
        print(f"{path}: warning: {w}", file=sys.stderr)
    return doc.obj


def _word(text: str):
    try:
        return parse_lasso(text)
    except LassoSyntaxError as e:
        raise UsageError(f"bad lasso: {e}") from None


class _Out:
    """Collects a JSON payload or prints text lines."""

    def __init__(self, args):
        self.json = args.json
        self.payload: dict = {"format": JSON_FORMAT, "command": args.command}

    def text(self, s: str):
        if not self.json:
            sys.stdout.write(s if s.endswith("\n") else s + "\n")

    def put(self, **kw):
        self.payload.update(kw)

    def finish(self, code: int) -> int:
        if self.json:
            self.payload["exit_code"] = code
            sys.stdout.write(json.dumps(self.payload, indent=2, sort_keys=True, default=str) + "\n")
        return code


def _emit_transducer(T: RegisterTransducer, args, out: _Out):
    text = print_transducer(T)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        out.text(f"wrote {args.output}")
    else:
        out.text(text)
    out.put(transducer=text)


def _stage_writer(directory: str | None):
    if not directory:
        return None
    os.makedirs(directory, exist_ok=True)
    counter = [0]

    def hook(name: str, obj):
        counter[0] += 1
        stem = os.path.join(directory, f"{counter[0]:02d}-{name}")
        if isinstance(obj, FiniteParityAutomaton):
            Path(stem + ".fpa").write_text(to_lines(obj), encoding="utf-8")
            Path(stem + ".hoa").write_text(to_hoa(obj), encoding="utf-8")
        else:
            Path(stem + ".txt").write_text(describe(obj), encoding="utf-8")

    return hook


def describe(A: RegisterAutomaton) -> str:
    """Readable listing of an automaton whose states or labels are structured
    values (pipeline intermediates); states are numbered in order."""
    ids = {q: i for i, q in enumerate(A.states)}
    lines = [f"# {A.name}: {len(A.states)} states, registers {', '.join(A.registers) or '-'}",
             f"# semantics {A.semantics.value}, initial s{ids[A.initial]}"]
    for q in A.states:
        lines.append(f"state s{ids[q]} kind={A.kind[q].value} priority={A.priority[q]}  # {q}")
    for t in A.transitions:
        asg = f" set {{{', '.join(sorted(t.asgn))}}}" if t.asgn else ""
        lines.append(f"s{ids[t.src]} -- {t.label} [{t.test}]{asg} -> s{ids[t.dst]}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands


def cmd_check(args, out: _Out) -> int:
    x = _load(args.file, (RegisterAutomaton, RegisterTransducer))
    if isinstance(x, RegisterTransducer):
        report = {"kind": "transducer", "states": len(x.states), "registers": len(x.registers),
                  "deterministic": x.is_deterministic(), "complete": x.is_complete(),
                  "test_free": x.is_test_free()}
    else:
        report = {
            "kind": "automaton", "semantics": x.semantics.value, "specification": x.is_spec,
            "states": len(x.states), "registers": len(x.registers),
            "deterministic": is_deterministic(x), "complete": is_complete(x),
            "input_complete": is_complete_inputs(x) if x.is_spec else None,
            "ido": is_ido(x) if x.is_spec else None,
            "test_free": is_test_free(x),
        }
    for k, v in report.items():
        out.text(f"{k}: {v}")
    out.put(report=report)
    return EXIT_OK


def cmd_synth_dra(args, out: _Out) -> int:
    import random

    from .synth_dra import PreconditionError, Unrealizable, concrete_play, random_eve, synthesize_dra_ido

    A = _load(args.file, RegisterAutomaton)
    try:
        res = synthesize_dra_ido(A)
    except PreconditionError as e:
        out.text(f"UNSUPPORTED {e.code}: {e}")
        out.put(verdict="UNSUPPORTED", diagnostic=e.code, message=str(e))
        return EXIT_UNSUPPORTED
    out.put(verdict=res.verdict)
    if isinstance(res, Unrealizable):
        play = concrete_play(res.witness, random_eve(res.witness.arena, random.Random(args.seed)))
        out.text("UNREALIZABLE")
        out.text(f"counter-play: {format_lasso(play)}")
        out.put(counter_play=format_lasso(play))
        return EXIT_NO
    out.text("REALIZABLE")
    _emit_transducer(res.transducer, args, out)
    return EXIT_OK


def cmd_synth_bounded(args, out: _Out) -> int:
    from .synth_bounded import Unrealizable, Unsupported, synth_bounded

    A = _load(args.file, RegisterAutomaton)
    if args.k < 1:
        raise UsageError("--k must be at least 1 (an output names a register)")
    hook = _stage_writer(args.dump_stages)
    ks = range(1, args.k + 1) if args.search else [args.k]
    res = None
    for k in ks:
        stage = None
        if hook:
            stage = (lambda name, obj, k=k: hook(f"k{k}-{name}", obj))
        res = synth_bounded(A, k, stage=stage)
        if not isinstance(res, Unrealizable):
            break
    if isinstance(res, Unsupported):
        out.text(f"UNSUPPORTED: {res.reason}")
        out.put(verdict="UNSUPPORTED", message=res.reason)
        return EXIT_UNSUPPORTED
    out.put(verdict=res.verdict, k=res.meta["k"], route=res.meta.get("route"))
    if isinstance(res, Unrealizable):
        out.text(f"UNREALIZABLE with k={res.meta['k']}")
        return EXIT_NO
    out.text(f"REALIZABLE with k={res.meta['k']} (verified: {res.meta.get('verified')})")
    out.put(verified=res.meta.get("verified"))
    _emit_transducer(res.transducer, args, out)
    return EXIT_OK


def cmd_verify(args, out: _Out) -> int:
    from .verify import check_realizes, random_check

    T = _load(args.impl, RegisterTransducer)
    S = _load(args.spec, RegisterAutomaton)
    try:
        v = check_realizes(T, S)
    except ValueError as e:
        out.text(f"UNSUPPORTED: {e}")
        out.put(verdict="UNSUPPORTED", message=str(e))
        return EXIT_UNSUPPORTED
    out.put(verdict=v.verdict)
    if v.ok:
        out.text("OK")
    else:
        out.text(f"FAIL counterexample: {format_lasso(v.counterexample)}")
        out.put(counterexample=format_lasso(v.counterexample))
    if args.samples:
        rep = random_check(T, S, args.samples, seed=args.seed)
        out.text(f"random check: {len(rep.failures)} failures in {rep.samples} samples")
        out.put(random_failures=[format_lasso(w) for w, _ in rep.failures])
    return EXIT_OK if v.ok else EXIT_NO


def cmd_run(args, out: _Out) -> int:
    T = _load(args.impl, RegisterTransducer)
    w = transducer_run(T, _word(args.input))
    out.text(format_lasso(w))
    out.put(word=format_lasso(w))
    return EXIT_OK


def cmd_member(args, out: _Out) -> int:
    A = _load(args.file, RegisterAutomaton)
    ok = membership(A, _word(args.word))
    out.text("ACCEPT" if ok else "REJECT")
    out.put(accepted=ok)
    return EXIT_OK if ok else EXIT_NO


def cmd_project(args, out: _Out) -> int:
    from .abstraction import label_projection

    A = _load(args.file, RegisterAutomaton)
    P = label_projection(A)
    text = {"lines": to_lines, "hoa": to_hoa, "dot": to_dot}[args.format](P)
    out.text(text)
    out.put(automaton=text, states=len(P.states))
    return EXIT_OK


def cmd_export_dot(args, out: _Out) -> int:
    x = _load(args.file, (RegisterAutomaton, RegisterTransducer))
    text = transducer_to_dot(x) if isinstance(x, RegisterTransducer) else automaton_to_dot(x)
    out.text(text)
    out.put(dot=text)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    common.add_argument("--dump-stages", metavar="DIR", default=argparse.SUPPRESS,
                        help="write intermediate automata of the bounded pipeline")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for sampled checks")

    p = argparse.ArgumentParser(prog="regsynth", parents=[common],
                                description="Synthesis and verification of register transducers.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", parents=[common], help="report structural properties")
    s.add_argument("file")
    s.set_defaults(func=cmd_check)

    synth = sub.add_parser("synth", help="synthesise a transducer")
    ss = synth.add_subparsers(dest="method", required=True)
    s = ss.add_parser("dra-ido", parents=[common], help="deterministic input-driven-output specifications")
    s.add_argument("file")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_synth_dra, command="synth dra-ido")
    s = ss.add_parser("bounded", parents=[common], help="transducers with at most K registers")
    s.add_argument("file")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--search", action="store_true", help="try k = 1..K and stop at the first success")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_synth_bounded, command="synth bounded")

    s = sub.add_parser("verify", parents=[common], help="check that a transducer realises a specification")
    s.add_argument("--impl", required=True)
    s.add_argument("--spec", required=True)
    s.add_argument("--samples", type=int, default=0, help="also run N random lasso checks")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("run", parents=[common], help="run a transducer on an input lasso")
    s.add_argument("--impl", required=True)
    s.add_argument("--input", required=True)
    s.set_defaults(func=cmd_run)

    s = sub.add_parser("member", parents=[common], help="lasso membership")
    s.add_argument("file")
    s.add_argument("--word", required=True)
    s.set_defaults(func=cmd_member)

    s = sub.add_parser("project", parents=[common], help="label projection as a finite parity automaton")
    s.add_argument("file")
    s.add_argument("--format", choices=["lines", "hoa", "dot"], default="lines")
    s.set_defaults(func=cmd_project)

    s = sub.add_parser("export-dot", parents=[common], help="Graphviz rendering")
    s.add_argument("file")
    s.set_defaults(func=cmd_export_dot)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    # the shared options may appear before or after the subcommand; set_defaults
    # would leak into the shared action objects, so fill the gaps here
    for key, value in (("json", False), ("dump_stages", None), ("seed", 0)):
        if not hasattr(args, key):
            setattr(args, key, value)
    out = _Out(args)
    try:
        code = args.func(args, out)
    except UsageError as e:
        print(f"regsynth: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DSLSyntaxError as e:
        print(f"regsynth: {e}", file=sys.stderr)
        return EXIT_USAGE
    except AlphabetMismatch as e:
        print(f"regsynth: {e}", file=sys.stderr)
        return EXIT_USAGE
    return out.finish(code)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
