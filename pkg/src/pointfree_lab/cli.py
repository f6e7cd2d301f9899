"""Command-line front end.

Reports are KEY=VALUE lines, deterministic for a given seed and inputs;
`--json` mirrors each report as one JSON object with the same keys.  Exit
codes: 0 for verified/true verdicts, 1 for falsified verdicts (with their
witness lines), 2 for input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .errors import (
    HypothesisFailed,
    IsPointwise,
    NotATruncateSequence,
    NotAnUpperBound,
    ParseError,
    StabilizationNotReached,
    ToolkitError,
)
from .frames import booleanize, classify_frame, morphism_check
from .pointwise import (
    check_pointwise_sup,
    gap_characteristic,
    is_mobile,
    reconstruct,
    separating_morphism,
    validate_truncate_seq,
)
from .steps import arith, scalar_mul, validate_step
from .suites import run_suite, suite_cor1_identities
from .textio import parse_file, serialize_element, serialize_step, serialize_vec


class Reporter:
    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.pairs = []

    def add(self, key: str, value):
        self.pairs.append((key, value))

    def comment(self, text: str):
        if not self.as_json:
            print(f"# {text}")

    def flush(self):
        if self.as_json:
            print(json.dumps({k: str(v) for k, v in self.pairs}))
        else:
            for k, v in self.pairs:
                print(f"{k}={v}")
        self.pairs = []


def _yesno(b: bool) -> str:
    return "yes" if b else "no"


def _load(path: str):
    return parse_file(path)


def _pick_frame(env, name):
    if name is not None:
        if name not in env.frames:
            raise ParseError(0, 0, f"unknown frame {name!r}")
        return name, env.frames[name]
    if len(env.frames) != 1:
        raise ParseError(0, 0, "file declares several frames; name one")
    return next(iter(env.frames.items()))


def _pick(env, table: str, name: str):
    store = getattr(env, table)
    if name not in store:
        raise ParseError(0, 0, f"unknown {table[:-1]} {name!r}")
    return store[name]


# -- verb handlers ------------------------------------------------------------


def cmd_frame_check(args, rep: Reporter) -> int:
    env = _load(args.file)
    name, frame = _pick_frame(env, args.name)
    rep.add("FRAME", name)
    if getattr(frame, "is_finite", False):
        rep.add("POINTS", frame.base.size)
        rep.add("ELEMENTS", len(frame.elements))
        rep.add("COZ_PART", len(frame.coz_part))
    else:
        rep.add("ELEMENTS", "closed-form")
    rep.add("OK", "yes")
    return 0


def cmd_frame_classify(args, rep: Reporter) -> int:
    env = _load(args.file)
    name, frame = _pick_frame(env, args.name)
    flags = classify_frame(frame)
    rep.add("BOOLEAN", _yesno(flags.boolean))
    rep.add("ED", _yesno(flags.extremally_disconnected))
    rep.add("BD", _yesno(flags.basically_disconnected))
    rep.add("PFRAME", _yesno(flags.p_frame))
    if flags.witness:
        rep.add("WITNESS", flags.witness)
    return 0


def cmd_frame_booleanize(args, rep: Reporter) -> int:
    env = _load(args.file)
    name, frame = _pick_frame(env, args.name)
    result = booleanize(frame)
    report = morphism_check(result.map)
    rep.add("FRAME", name)
    rep.add("B_ELEMENTS", len(result.frame.elements))
    rep.add("ATOMS", len(result.atoms))
    rep.add("FRAME_MAP", _yesno(report.frame_map))
    rep.add("INJECTIVE", _yesno(bool(report.injective)))
    rep.add("B_BOOLEAN", _yesno(result.frame.classify().boolean))
    return 0


def cmd_rl_validate(args, rep: Reporter) -> int:
    env = _load(args.file)
    step = _pick(env, "steps", args.step)
    # Parsing already validated; revalidate the raw data to surface the
    # canonical form explicitly.
    canon = validate_step(step.frame, step.thresholds, step.values)
    rep.add("VALID", "yes")
    frame_name = next(
        (n for n, f in env.frames.items() if f is step.frame), "F"
    )
    rep.add("CANON", serialize_step(canon, args.step, frame_name))
    return 0


def cmd_rl_arith(args, rep: Reporter) -> int:
    env = _load(args.file)
    f = _pick(env, "steps", args.a)
    if args.op.startswith("scale:"):
        q = Fraction(args.op.split(":", 1)[1])
        result = scalar_mul(q, f)
    else:
        g = _pick(env, "steps", args.b)
        result = arith(args.op, f, g)
    frame_name = next((n for n, fr in env.frames.items() if fr is f.frame), "F")
    rep.add("RESULT", serialize_step(result, "result", frame_name))
    return 0


def cmd_rl_cor1(args, rep: Reporter) -> int:
    res = suite_cor1_identities(seed=args.seed, cases=args.cases, bound=args.bound)
    rep.add("PASS", res.passed)
    rep.add("FAIL", res.failed)
    if res.counterexample:
        rep.add("COUNTEREXAMPLE", res.counterexample)
    return 0 if res.failed == 0 else 1


def _verdict_report(rep: Reporter, verdict, family) -> None:
    rep.add("UPPER_BOUND", _yesno(verdict.is_upper_bound))
    rep.add("POINTWISE", _yesno(verdict.is_pointwise))
    if not verdict.is_pointwise:
        rep.add("FAILING_RAY", verdict.failing_ray)
        rep.add("LHS", repr(verdict.lhs) if verdict.lhs is not None else "")
        rep.add("RHS", repr(verdict.rhs) if verdict.rhs is not None else "")


def cmd_pw_check(args, rep: Reporter) -> int:
    env = _load(args.file)
    f0 = _pick(env, "steps", args.candidate)
    family = _pick(env, "families", args.family)
    verdict = check_pointwise_sup(f0, family)
    _verdict_report(rep, verdict, family)
    return 0 if verdict.is_pointwise else 1


def cmd_pw_separate(args, rep: Reporter) -> int:
    env = _load(args.file)
    f0 = _pick(env, "steps", args.candidate)
    family = _pick(env, "families", args.family)
    cert = separating_morphism(f0, family)
    rep.add("FAILING_RAY", cert.failing_ray)
    rep.add("BOUND", cert.bound)
    rep.add("PSI_OK", _yesno(cert.valid))
    rep.add("MEMBERS_BELOW_BOUND", _yesno(True))
    return 0 if cert.valid else 1


def cmd_pw_chi(args, rep: Reporter) -> int:
    env = _load(args.file)
    f0 = _pick(env, "steps", args.candidate)
    family = _pick(env, "families", args.family)
    witness = gap_characteristic(f0, family, Fraction(args.r), Fraction(args.s))
    frame_name = next((n for n, fr in env.frames.items() if fr is f0.frame), "F")
    rep.add("CHI", serialize_step(witness.chi, "chi", frame_name))
    rep.add("POSITIVE", _yesno(witness.positive))
    rep.add("DOMINATES", _yesno(witness.dominates))
    return 0 if witness.positive and witness.dominates else 1


def cmd_trunc_validate(args, rep: Reporter) -> int:
    env = _load(args.file)
    seq = _pick(env, "truncseqs", args.seq)
    try:
        validate_truncate_seq(seq)
    except NotATruncateSequence as exc:
        rep.add("VALID", "no")
        rep.add("CONDITION", exc.condition)
        rep.add("WITNESS", exc.witness)
        return 1
    rep.add("VALID", "yes")
    return 0


def cmd_trunc_reconstruct(args, rep: Reporter) -> int:
    env = _load(args.file)
    seq = _pick(env, "truncseqs", args.seq)
    h = reconstruct(seq)
    frame_name = next((n for n, fr in env.frames.items() if fr is h.frame), "F")
    rep.add("H", serialize_step(h, "h", frame_name))
    rep.add("ROUNDTRIP", "yes")
    rep.add("POINTWISE", "yes")
    return 0


def cmd_mobile_check(args, rep: Reporter) -> int:
    env = _load(args.file)
    z = _pick(env, "downsets", args.downset)
    verdict = is_mobile(z)
    rep.add("MOBILE", _yesno(verdict.mobile))
    if not verdict.mobile:
        rep.add("WITNESS", serialize_vec(verdict.witness))
        return 1
    rep.add("REASON", verdict.reason)
    return 0


def cmd_demo_omega(args, rep: Reporter) -> int:
    from .suites import omega_demo_instance

    candidate, family, verdict, oracle = omega_demo_instance()
    rep.comment("prefix indicators over the compactified naturals")
    rep.add("FAMILY", "prefix_indicators")
    rep.add("CANDIDATE", "const 1")
    rep.add("UPPER_BOUND", _yesno(verdict.is_upper_bound))
    rep.add("SUP_IN_G", _yesno(oracle.candidate_is_sup))
    rep.add("POINTWISE", _yesno(verdict.is_pointwise))
    rep.add("FAILING_RAY", verdict.failing_ray)
    rep.add("LHS", repr(verdict.lhs))
    rep.add("RHS", repr(verdict.rhs))
    rep.comment("LHS: all naturals, the limit point excluded")
    cert = separating_morphism(candidate, family)
    rep.add("SEPARATION_BOUND", cert.bound)
    rep.add("SEPARATION_VALID", _yesno(cert.valid))
    expected = (
        verdict.is_upper_bound
        and oracle.candidate_is_sup
        and not verdict.is_pointwise
        and verdict.failing_ray == Fraction(1, 2)
        and cert.valid
    )
    return 0 if expected else 1


def cmd_suite_run(args, rep: Reporter) -> int:
    res = run_suite(args.name, seed=args.seed, cases=args.cases, bound=args.bound)
    rep.add("SUITE", res.name)
    rep.add("SEED", args.seed)
    rep.add("PASS", res.passed)
    rep.add("FAIL", res.failed)
    if res.counterexample:
        rep.add("COUNTEREXAMPLE", res.counterexample)
    return 0 if res.failed == 0 else 1


# -- wiring -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pointfree-lab",
        description="frames, step-function reals, and pointwise suprema",
    )
    parser.add_argument("--json", action="store_true", help="JSON report lines")
    sub = parser.add_subparsers(dest="verb", required=True)

    def verb(name, handler, configure):
        p = sub.add_parser(name)
        configure(p)
        p.set_defaults(handler=handler)

    verb("frame-check", cmd_frame_check, lambda p: (
        p.add_argument("file"), p.add_argument("name", nargs="?")))
    verb("frame-classify", cmd_frame_classify, lambda p: (
        p.add_argument("file"), p.add_argument("name", nargs="?")))
    verb("frame-booleanize", cmd_frame_booleanize, lambda p: (
        p.add_argument("file"), p.add_argument("name", nargs="?")))
    verb("rl-validate", cmd_rl_validate, lambda p: (
        p.add_argument("file"), p.add_argument("step")))
    verb("rl-arith", cmd_rl_arith, lambda p: (
        p.add_argument("file"), p.add_argument("op"),
        p.add_argument("a"), p.add_argument("b", nargs="?")))
    verb("rl-cor1", cmd_rl_cor1, lambda p: (
        p.add_argument("--seed", type=int, default=0),
        p.add_argument("--cases", type=int, default=500),
        p.add_argument("--bound", type=int, default=64)))
    verb("pw-check", cmd_pw_check, lambda p: (
        p.add_argument("file"), p.add_argument("candidate"),
        p.add_argument("family")))
    verb("pw-separate", cmd_pw_separate, lambda p: (
        p.add_argument("file"), p.add_argument("candidate"),
        p.add_argument("family")))
    verb("pw-chi", cmd_pw_chi, lambda p: (
        p.add_argument("file"), p.add_argument("candidate"),
        p.add_argument("family"), p.add_argument("r"), p.add_argument("s")))
    verb("trunc-validate", cmd_trunc_validate, lambda p: (
        p.add_argument("file"), p.add_argument("seq")))
    verb("trunc-reconstruct", cmd_trunc_reconstruct, lambda p: (
        p.add_argument("file"), p.add_argument("seq")))
    verb("mobile-check", cmd_mobile_check, lambda p: (
        p.add_argument("file"), p.add_argument("downset")))
    verb("demo-omega", cmd_demo_omega, lambda p: None)
    verb("suite-run", cmd_suite_run, lambda p: (
        p.add_argument("name"),
        p.add_argument("--seed", type=int, default=0),
        p.add_argument("--cases", type=int, default=None),
        p.add_argument("--bound", type=int, default=None)))
    return parser


_VERDICT_ERRORS = (
    IsPointwise,
    NotAnUpperBound,
    HypothesisFailed,
    NotATruncateSequence,
    StabilizationNotReached,
)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    rep = Reporter(args.json)
    try:
        code = args.handler(args, rep)
    except _VERDICT_ERRORS as exc:
        rep.add("ERROR", type(exc).__name__)
        rep.add("MESSAGE", exc)
        rep.flush()
        return 1
    except (ToolkitError, ValueError, TypeError, OSError) as exc:
        rep.add("ERROR", type(exc).__name__)
        rep.add("MESSAGE", exc)
        rep.flush()
        return 2
    rep.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
