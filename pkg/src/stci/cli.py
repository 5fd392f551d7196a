"""Command line: ``stci decompose | build | verify | scan | emit``.

Exit codes: 0 ok, 2 bad input, 3 no admissible decomposition, 4 not a
polynomial, 5 verification failure, 6 output error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass, field
from typing import Sequence

from .equations import EquationSystem, NotPolynomialError, build_system
from .formats import FORMATS, pair_to_dict, render_system
from .polyring import is_prime
from .semigroup import (
    CurveError,
    CurveSpec,
    InputNotARepresentationError,
    NoAdmissibleDecompositionError,
    SelectionPolicy,
    SignedDecomposition,
    enumerate_decompositions,
    validate_curve,
)
from .verify import FiniteFieldConfig, full_verify

EXIT_OK, EXIT_INPUT, EXIT_NO_DECOMP, EXIT_NOT_POLY, EXIT_VERIFY, EXIT_IO = 0, 2, 3, 4, 5, 6
CONFIG_ENV = "STCI_CONFIG"

DEFAULTS = {"primes": [5, 7, 11, 13], "trials": 8, "budget": 10 ** 6, "policy": "strict", "format": "text"}


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    curve: tuple[int, ...] = ()
    policy: SelectionPolicy = SelectionPolicy.STRICT
    primes: tuple[int, ...] = (5, 7, 11, 13)
    trials: int = 8
    budget: int = 10 ** 6
    fmt: str = "text"
    output: str | None = None
    overrides: dict[int, SignedDecomposition] = field(default_factory=dict)

    def finite_field(self) -> FiniteFieldConfig:
        return FiniteFieldConfig(primes=self.primes, trials=self.trials, budget=self.budget)


@dataclass(frozen=True)
class FamilySpec:
    template: tuple[str, ...]
    start: int
    stop: int
    step: int = 1

    def instances(self) -> list[tuple[int, ...]]:
        return [
            tuple(M if t == "M" else int(t) for t in self.template)
            for M in range(self.start, self.stop + 1, self.step)
        ]


def parse_curve(text: str) -> tuple[int, ...]:
    parts = [p for p in re.sub(r"\s+", "", text).split(",") if p]
    if not parts:
        raise InputError("empty curve")
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise InputError(f"curve must be comma-separated positive integers, got {text!r}") from None


def read_batch(path: str) -> list[tuple[int, ...]]:
    curves = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                curves.append(parse_curve(line))
    return curves


def parse_primes(text: str) -> tuple[int, ...]:
    try:
        primes = tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise InputError(f"bad prime list {text!r}") from None
    for p in primes:
        if not is_prime(p):
            raise InputError(f"{p} is not prime")
    return primes


def parse_range(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"\s*(\d+)\s*\.\.\s*(\d+)\s*", text)
    if not m or int(m.group(1)) > int(m.group(2)):
        raise InputError(f"range must look like a..b with a <= b, got {text!r}")
    return int(m.group(1)), int(m.group(2))


def parse_override(text: str) -> tuple[int, SignedDecomposition]:
    m = re.fullmatch(r"\s*(\d+)\s*:\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*", text)
    if not m:
        raise InputError(f"--use expects LEVEL:ALPHA,BETA,GAMMA, got {text!r}")
    level, alpha, beta, gamma = map(int, m.groups())
    return level, SignedDecomposition(level, alpha, beta, gamma)


def load_defaults(environ=os.environ) -> dict:
    cfg = dict(DEFAULTS)
    path = environ.get(CONFIG_ENV)
    if path:
        with open(path) as fh:
            cfg.update(json.load(fh))
    return cfg


def summary_row(curve: CurveSpec, system: EquationSystem | None, error: str | None = None, verdict: str | None = None) -> str:
    """One ``|``-separated line: exponents, chosen decompositions, flags, verdict."""
    exps = ",".join(map(str, curve.exponents))
    if system is None:
        return f"{exps} | - | - | {error}"
    chosen, flags = [], []
    for d in system.diagnostics:
        s = system.pairs[d.level].signed
        chosen.append(f"{d.level}:({s.alpha},{s.beta},{s.gamma})")
        flags.append(f"{d.level}:{d.admitted_by}")
    return f"{exps} | {' '.join(chosen) or '-'} | {' '.join(flags) or '-'} | {verdict or 'built'}"


def _build(config: RunConfig) -> EquationSystem:
    curve = validate_curve(config.curve)
    return build_system(curve, config.policy, config.overrides)


def _write(text: str, config: RunConfig, out) -> None:
    if config.output:
        with open(config.output, "w") as fh:
            fh.write(text)
    else:
        out.write(text)


def cmd_decompose(config: RunConfig, out=sys.stdout) -> int:
    curve = validate_curve(config.curve)
    if curve.n < 3:
        out.write(f"{curve}: no levels to decompose\n")
        return EXIT_OK
    if config.fmt == "json":
        levels = {str(l): [pair_to_dict(p) for p in enumerate_decompositions(curve, l)] for l in range(3, curve.n + 1)}
        out.write(json.dumps({"curve": [str(m) for m in curve.exponents], "levels": levels}, indent=2) + "\n")
        return EXIT_OK
    for level in range(3, curve.n + 1):
        out.write(f"level {level}: m{level} = {curve.m(level)}\n")
        for pair in enumerate_decompositions(curve, level):
            p, s = pair.positive, pair.signed
            out.write(
                f"  (a,b,c)=({p.a},{p.b},{p.c})  (alpha,beta,gamma)=({s.alpha},{s.beta},{s.gamma})"
                f"  gamma_condition={'yes' if pair.gamma_condition else 'no'}"
                f"  sufficient={'yes' if pair.sufficient else 'no'}\n"
            )
    return EXIT_OK


def cmd_build(config: RunConfig, out=sys.stdout, summary: bool = False) -> int:
    system = _build(config)
    if summary:
        out.write(summary_row(system.curve, system) + "\n")
    else:
        _write(render_system(system, config.fmt), config, out)
    return EXIT_OK


def cmd_verify(config: RunConfig, out=sys.stdout) -> int:
    system = _build(config)
    report = full_verify(system, config.finite_field())
    text = render_system(system, "json", report) if config.fmt == "json" else report.render()
    _write(text, config, out)
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_scan(family: FamilySpec, config: RunConfig, out=sys.stdout, verify: bool = False) -> int:
    for exps in family.instances():
        try:
            curve = validate_curve(exps)
        except CurveError as exc:
            out.write(summary_row(CurveSpec(exps), None, f"skipped: {exc}") + "\n")
            continue
        try:
            system = build_system(curve, config.policy)
        except (NoAdmissibleDecompositionError, NotPolynomialError) as exc:
            out.write(summary_row(curve, None, f"failed: {exc}") + "\n")
            continue
        verdict = None
        if verify:
            verdict = full_verify(system, config.finite_field()).status
        out.write(summary_row(curve, system, verdict=verdict) + "\n")
    return EXIT_OK


def cmd_emit(config: RunConfig, out=sys.stdout) -> int:
    system = _build(config)
    text = render_system(system, config.fmt)
    try:
        _write(text, config, out)
    except OSError as exc:
        sys.stderr.write(f"cannot write {config.output}: {exc}\n")
        return EXIT_IO
    return EXIT_OK


def _parser(defaults: dict) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stci", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=FORMATS):
        p.add_argument("curve", help="comma-separated exponents, or @FILE with one curve per line")
        p.add_argument("--format", dest="fmt", choices=formats, default=defaults["format"] if defaults["format"] in formats else "text")
        p.add_argument("--policy", choices=[p.value for p in SelectionPolicy], default=defaults["policy"])
        p.add_argument("--use", action="append", default=[], metavar="LEVEL:ALPHA,BETA,GAMMA",
                       help="pin the signed decomposition used at a level")
        p.add_argument("-o", "--output")

    def verification(p):
        p.add_argument("--primes", default=",".join(map(str, defaults["primes"])))
        p.add_argument("--trials", type=int, default=defaults["trials"])
        p.add_argument("--budget", type=int, default=defaults["budget"])

    common(sub.add_parser("decompose", help="list decompositions per level"), ("text", "json"))
    b = sub.add_parser("build", help="build and print the equations")
    common(b, ("text", "latex", "json"))
    b.add_argument("--summary", action="store_true", help="print the one-line summary row instead")
    v = sub.add_parser("verify", help="build, then run every oracle")
    common(v, ("text", "json"))
    verification(v)
    s = sub.add_parser("scan", help="process a one-parameter family such as 1,2,3,M")
    s.add_argument("template")
    s.add_argument("--range", dest="range_", required=True)
    s.add_argument("--step", type=int, default=1)
    s.add_argument("--policy", choices=[p.value for p in SelectionPolicy], default=defaults["policy"])
    s.add_argument("--verify", action="store_true")
    verification(s)
    common(sub.add_parser("emit", help="write the equations in an interchange format"))
    return parser


def _config(args) -> RunConfig:
    cfg = RunConfig(policy=SelectionPolicy(args.policy))
    if hasattr(args, "primes"):
        cfg.primes = parse_primes(args.primes)
        cfg.trials, cfg.budget = args.trials, args.budget
        if cfg.trials < 1:
            raise InputError("trial count must be at least 1")
    if hasattr(args, "fmt"):
        cfg.fmt, cfg.output = args.fmt, args.output
        for text in args.use:
            level, signed = parse_override(text)
            cfg.overrides[level] = signed
    return cfg


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        defaults = load_defaults()
    except (OSError, ValueError) as exc:
        sys.stderr.write(f"error: bad config in ${CONFIG_ENV}: {exc}\n")
        return EXIT_INPUT
    args = _parser(defaults).parse_args(argv)
    try:
        config = _config(args)
        if args.command == "scan":
            template = tuple(t.strip() for t in args.template.split(","))
            if template.count("M") != 1 or not all(t == "M" or t.isdigit() for t in template):
                raise InputError(f"template needs exactly one M slot, got {args.template!r}")
            if args.step < 1:
                raise InputError("step must be positive")
            family = FamilySpec(template, *parse_range(args.range_), args.step)
            return cmd_scan(family, config, out, verify=args.verify)
        curves = read_batch(args.curve[1:]) if args.curve.startswith("@") else [parse_curve(args.curve)]
        code = EXIT_OK
        for exps in curves:
            config.curve = exps
            if args.command == "decompose":
                rc = cmd_decompose(config, out)
            elif args.command == "build":
                rc = cmd_build(config, out, summary=args.summary)
            elif args.command == "verify":
                rc = cmd_verify(config, out)
            else:
                rc = cmd_emit(config, out)
            code = max(code, rc)
        return code
    except (CurveError, InputError, InputNotARepresentationError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except NoAdmissibleDecompositionError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NO_DECOMP
    except NotPolynomialError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NOT_POLY
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
