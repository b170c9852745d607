"""Command-line interface.

Reports go to stdout as ``key=value`` lines; anything meant for a human
reader goes to stderr.  Exit codes: 0 success, 1 user error, 2 precondition
violation, 3 internal assertion.
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter
from pathlib import Path

from .bott import bott_normalize
from .classify3 import Class3Label, ThreeParams, all_instances, canonical_class
from .cosets import DEFAULT_CAP
from .errors import (
    DidNotClose,
    InconsistentPresentation,
    InternalAssertionError,
    ParseError,
    PreconditionViolation,
    StructuralError,
)
from .invariants import (
    Kill,
    abelianization,
    b1_mod_p,
    finite_quotient_order,
    is_flat,
    is_orientable_level,
    is_rp1_tower,
    is_torus,
    subgroup_index,
    subgroup_is_normal,
)
from .presentation import TowerPresentation, format_normal_form
from .realize3 import verify_realization
from .towerfile import format_tower, parse_tower_file, parse_word
from .witness import IsomorphismWitness, format_word, verify_isomorphism

EXIT_OK, EXIT_USER, EXIT_PRECONDITION, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    kind = "usage-error"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # argparse would exit with 2, which is reserved for precondition failures
        raise UsageError(message)


def _bool(v: bool) -> str:
    return "true" if v else "false"


def _primes(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--mod expects comma-separated integers, got {text!r}") from None


def _load(args) -> TowerPresentation:
    if args.params is not None and args.input is not None:
        raise UsageError("give either an input file or --params, not both")
    if args.params is not None:
        try:
            return ThreeParams.parse(args.params).presentation()
        except ValueError as exc:
            raise UsageError(f"--params: {exc}") from None
    if args.input is None:
        raise UsageError("an input .tower file or --params is required")
    try:
        text = Path(args.input).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc.strerror}") from None
    return parse_tower_file(text)


def _witness_lines(w: IsomorphismWitness) -> list[str]:
    # domain generators are s_i, codomain generators t_i
    out = [f"forward.s{i}={format_word(x, 't')}" for i, x in enumerate(w.forward, start=1)]
    out += [f"backward.t{i}={format_word(x, 's')}" for i, x in enumerate(w.backward, start=1)]
    return out


def cmd_validate(args, out) -> int:
    p = _load(args)
    check = p.consistency_check()
    out.append(f"n={p.n}")
    out.append("valid=true")
    out.append(f"consistent={_bool(check.consistent)}")
    if not check.consistent:
        out.append("inconsistent.triple=" + ",".join(map(str, check.triple)))
        out.append(f"inconsistent.lhs={format_normal_form(check.lhs)}")
        out.append(f"inconsistent.rhs={format_normal_form(check.rhs)}")
    return EXIT_OK


def _require_consistent(p: TowerPresentation) -> None:
    check = p.consistency_check()
    if not check:
        raise InconsistentPresentation("presentation inconsistent at triple " + ",".join(map(str, check.triple)))


def cmd_invariants(args, out) -> int:
    p = _load(args)
    _require_consistent(p)
    h1 = abelianization(p)
    out.append(f"h1.free={h1.free_rank}")
    out.append("h1.torsion=" + ",".join(map(str, h1.torsion)))
    for q in _primes(args.mod):
        try:
            out.append(f"b1.mod{q}={b1_mod_p(p, q)}")
        except ValueError:
            raise UsageError(f"--mod: {q} is not prime") from None
    out.append(f"flat={_bool(is_flat(p, assume_consistent=True))}")
    out.append(f"rp1={_bool(is_rp1_tower(p))}")
    out.append(f"torus={_bool(is_torus(p))}")
    for j in range(2, p.n + 1):
        out.append(f"orientable.level{j}={_bool(is_orientable_level(p, j))}")
    for kill in (Kill.GAMMA, Kill.LAMBDA):
        name = kill.value
        out.append(f"{name}.index={subgroup_index(p, kill, cap=args.coset_cap)}")
        out.append(f"{name}.quotient={finite_quotient_order(p, kill, cap=args.coset_cap)}")
        out.append(f"{name}.normal={_bool(subgroup_is_normal(p, kill, cap=args.coset_cap))}")
    return EXIT_OK


def cmd_classify3(args, out) -> int:
    p = _load(args)
    if p.n != 3:
        raise UsageError(f"classify3 needs a height-3 presentation, got n={p.n}")
    t = ThreeParams.of(p)
    label, chain = canonical_class(t)
    out.append(f"class={label}")
    out.append("canonical=" + ",".join(map(str, (label.canonical().a, *label.canonical().signs))))
    for k, move in enumerate(chain.moves, start=1):
        out.append(f"move{k}={move}")
    out.extend(_witness_lines(chain.witness()))
    verdict = chain.verify()
    out.append(f"witness.verified={_bool(verdict.valid)}")
    if not verdict:
        raise InternalAssertionError(f"witness chain failed verification: {verdict.reason}")
    return EXIT_OK


def cmd_bott_normalize(args, out) -> int:
    p = _load(args)
    result = bott_normalize(p)
    verdict = verify_isomorphism(p, result.presentation, result.witness)
    if not verdict:
        raise InternalAssertionError(f"normalization witness failed: {verdict.reason}")
    text = format_tower(result.presentation)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        print(f"wrote {args.output}", file=args.stderr)
    else:
        out.extend(text.splitlines())
    for i, row in enumerate(result.matrix, start=1):
        out.append(f"bott.row{i}=" + " ".join(map(str, row)))
    out.append(f"steps={len(result.steps)}")
    out.extend(_witness_lines(result.witness))
    out.append("witness.verified=true")
    return EXIT_OK


def cmd_realize3(args, out) -> int:
    try:
        if args.a is not None and "(" not in args.cls:
            label = Class3Label(args.cls.strip(), args.a)
        else:
            label = Class3Label.parse(args.cls)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = verify_realization(label, depth=args.probe_depth)
    out.extend(report.lines())
    if not report.ok:
        raise InternalAssertionError(f"realization of {label} failed its checks")
    return EXIT_OK


def cmd_mult(args, out) -> int:
    p = _load(args)
    _require_consistent(p)
    u, v = parse_word(args.w1), parse_word(args.w2)
    for g, _ in u + v:
        if not 1 <= g <= p.n:
            raise UsageError(f"generator s{g} outside 1..{p.n}")
    x = p.multiply(p.evaluate(u), p.evaluate(v))
    out.append(f"product={format_normal_form(x)}")
    out.append(f"product.word={format_word(x)}")
    return EXIT_OK


def cmd_enumerate(args, out) -> int:
    if args.n != 3:
        raise UsageError("enumerate supports only --n 3")
    if args.max_a < 0:
        raise UsageError("--max-a must be non-negative")
    counts: Counter[Class3Label] = Counter()
    for t in all_instances(args.max_a):
        label, chain = canonical_class(t)
        if args.verify and not chain.verify():
            raise InternalAssertionError(f"witness chain for {t} failed verification")
        counts[label] += 1
    for label in sorted(counts, key=Class3Label.sort_key):
        out.append(f"{label}={counts[label]}")
    out.append(f"labels={len({lab.kind for lab in counts})}")
    out.append(f"buckets={len(counts)}")
    out.append(f"instances={sum(counts.values())}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="circletower", description="Compute with iterated circle-bundle groups.")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    def with_input(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("input", nargs="?", help="path to a .tower file")
        sp.add_argument("--params", help="height-3 shortcut a,eps,eps1,eps2")
        sp.set_defaults(func=func)
        return sp

    with_input("validate", cmd_validate, "check structure and consistency")
    sp = with_input("invariants", cmd_invariants, "abelian and finite-quotient invariants")
    sp.add_argument("--mod", default="2,3", help="primes for b1 mod p (default 2,3)")
    sp.add_argument("--coset-cap", type=int, default=DEFAULT_CAP)
    with_input("classify3", cmd_classify3, "canonical class of a height-3 group with witness")
    sp = with_input("bott-normalize", cmd_bott_normalize, "rewrite a flat RP^1-tower in Bott form")
    sp.add_argument("--output", help="write the normalized .tower file here")

    sp = sub.add_parser("realize3", help="affine realization of a canonical height-3 class")
    sp.add_argument("--class", dest="cls", required=True)
    sp.add_argument("--a", type=int)
    sp.add_argument("--probe-depth", type=int, default=6)
    sp.set_defaults(func=cmd_realize3)

    sp = sub.add_parser("mult", help="multiply two words")
    sp.add_argument("w1")
    sp.add_argument("w2")
    sp.add_argument("input", nargs="?")
    sp.add_argument("--params")
    sp.set_defaults(func=cmd_mult)

    sp = sub.add_parser("enumerate", help="bucket all height-3 instances by class")
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--max-a", type=int, default=10)
    sp.add_argument("--verify", action="store_true", help="also verify every witness chain")
    sp.set_defaults(func=cmd_enumerate)
    return parser


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    out: list[str] = []
    try:
        args = build_parser().parse_args(argv)
        args.stderr = stderr
        code = args.func(args, out)
    except (UsageError, ParseError, StructuralError) as exc:
        code, err = EXIT_USER, exc
    except (PreconditionViolation, InconsistentPresentation, DidNotClose) as exc:
        code, err = EXIT_PRECONDITION, exc
    except (InternalAssertionError, AssertionError) as exc:
        code, err = EXIT_INTERNAL, exc
    else:
        err = None
    for line in out:
        print(line, file=stdout)
    if err is not None:
        kind = getattr(err, "kind", "assertion-failure")
        print(f"error={kind}: {err}", file=stdout)
        print(f"circletower: {err}", file=stderr)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
