import argparse
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from .algebra.hnn import (
    HnnFamily,
    Strategy,
    britton_reduce,
    make_hnn,
    random_word,
    snowflake_witness,
    to_klein_word,
)
from .algebra.presentations import SNOWFLAKE_ALPHABET, FamilyParams
from .algebra.words import format_word, parse_word
from .config import logging_config, path_config
from .config.limits_config import Limits
from .exceptions import NotFoundError, ParameterError, ResourceLimitError, WordParseError
from .service import dehn_service, equitable_service, verification_service
from .service.family_service import FAMILY_NAMES, make_family
from .util import file_util

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_RESOURCE = 2
EXIT_USAGE = 3
EXIT_INTERRUPTED = 130


@dataclass
class CommandResult:
    """Outcome of one subcommand: exit status, structured data, text lines and an optional table."""

    status: int
    data: Dict[str, Any]
    lines: List[str] = field(default_factory=list)
    table: Optional[pd.DataFrame] = None


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=["text", "json", "machine", "csv"], default="text")
    common.add_argument("--seed", type=int, default=None, help="random seed (default SNOWFLAKE_SEED or 0)")
    common.add_argument("--max-cosets", type=int, default=None)
    common.add_argument("--max-states", type=int, default=None)
    common.add_argument("--max-depth", type=int, default=None)
    common.add_argument("--length-slack", type=int, default=None)
    common.add_argument("--log-level", default=None, help="logging level (default SNOWFLAKE_LOG_LEVEL or WARNING)")
    return common


def _add_pq(parser: argparse.ArgumentParser, default: Optional[int] = None) -> None:
    required = default is None
    parser.add_argument("-p", type=int, required=required, default=default)
    parser.add_argument("-q", type=int, required=required, default=default)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="snowflake-groups",
        description="Snowflake groups G_{p,q}, one-relator groups R_{p,q} and their index-2 cover.",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    common = _common_options()

    def command(name: str, handler: Callable, help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, parents=[common], help=help_text)
        sub.set_defaults(handler=handler)
        return sub

    sub = command("present", _cmd_present, "print a family presentation")
    sub.add_argument("--family", choices=FAMILY_NAMES, required=True)
    _add_pq(sub, default=1)
    sub.add_argument("--params", type=int, nargs=4, metavar=("M", "N", "K", "L"),
                     help="(m, n, k, l) for the general R family")
    sub.add_argument("--save", type=Path, default=None, help="also write the presentation file here")

    sub = command("rewrite", _cmd_rewrite, "check the Klein-bottle rewrite of R_{p,q}")
    _add_pq(sub)

    sub = command("cover", _cmd_cover, "verify the index-2 cover R_{p,q} -> G_{p,q}")
    _add_pq(sub)
    sub.add_argument("--emit", choices=["table", "presentation", "report"], default="report")

    sub = command("wp", _cmd_wp, "solve the word problem")
    sub.add_argument("--group", choices=["R", "G", "klein", "Z2"], required=True)
    _add_pq(sub, default=1)
    sub.add_argument("--word", required=True)

    sub = command("witness", _cmd_witness, "build the distortion witness w_k = a^((2p)^k)")
    _add_pq(sub)
    sub.add_argument("-k", type=int, required=True)
    sub.add_argument("--verify", action="store_true", help="check w_k a^-N is trivial")

    sub = command("equitable", _cmd_equitable, "decide whether an equitable set exists")
    _add_pq(sub)
    sub.add_argument("--search", action="store_true", help="also run the bounded exhaustive search")
    sub.add_argument("--bound", type=int, default=6)
    sub.add_argument("--max-size", type=int, default=3)

    sub = command("area", _cmd_area, "minimal van Kampen area of a trivial word")
    source = sub.add_mutually_exclusive_group(required=True)
    source.add_argument("--family", choices=FAMILY_NAMES)
    source.add_argument("--presentation", type=Path, help="presentation file (gens: line, then relators)")
    _add_pq(sub, default=1)
    sub.add_argument("--word", required=True)

    sub = command("profile", _cmd_profile, "area profile over short trivial words")
    sub.add_argument("--family", choices=FAMILY_NAMES, required=True)
    _add_pq(sub, default=1)
    sub.add_argument("--maxlen", type=int, required=True)
    sub.add_argument("--save", type=Path, default=None, help="also write the CSV here")

    sub = command("alpha", _cmd_alpha, "exponent bookkeeping and witness slopes")
    _add_pq(sub)
    sub.add_argument("--levels", type=int, default=10)

    sub = command("density", _cmd_density, "find (p, q) with Dehn exponent near rho")
    sub.add_argument("--rho", type=float, required=True)
    sub.add_argument("--eps", type=float, default=0.01)
    sub.add_argument("--q-max", type=int, default=1000)

    sub = command("confluence", _cmd_confluence, "compare Britton reduction strategies on random words")
    sub.add_argument("--group", choices=["R", "G"], required=True)
    _add_pq(sub, default=1)
    sub.add_argument("--samples", type=int, default=1000)
    sub.add_argument("--max-length", type=int, default=40)

    sub = command("plot", _cmd_plot, "draw slope or profile figures")
    sub.add_argument("--kind", choices=["slopes", "profile"], required=True)
    sub.add_argument("--pairs", nargs="+", default=["2,1", "3,1", "3,2"],
                     help="p,q pairs for the slope plot")
    sub.add_argument("--family", choices=FAMILY_NAMES, default="Z2")
    _add_pq(sub, default=1)
    sub.add_argument("--maxlen", type=int, default=8)
    sub.add_argument("--output-dir", type=Path, default=path_config.PLOTS_OUTPUT_DIR)

    return parser


def _limits(args: argparse.Namespace) -> Limits:
    return Limits.from_env(
        max_cosets=args.max_cosets,
        max_states=args.max_states,
        max_depth=args.max_depth,
        length_slack=args.length_slack,
        seed=args.seed,
    )


def _cmd_present(args: argparse.Namespace, limits: Limits) -> CommandResult:
    params = FamilyParams(*args.params) if args.params else None
    family = make_family(args.family, args.p, args.q, params=params)
    presentation = family.presentation
    if args.save is not None and not file_util.write_presentation(args.save, presentation):
        raise ParameterError(f"could not write presentation to {args.save}")
    return CommandResult(EXIT_OK, presentation.to_dict(), presentation.to_text().splitlines())


def _report_lines(report: verification_service.VerificationReport) -> List[str]:
    lines = [f"{report.name}(p={report.p}, q={report.q}): {'PASS' if report.passed else 'FAIL'}"]
    for check in report.checks:
        mark = "ok  " if check.passed else "FAIL"
        detail = f"  [{check.detail}]" if check.detail else ""
        lines.append(f"  {mark} {check.stage}: {check.description}{detail}")
    if report.failed_stage:
        lines.append(f"failed stage: {report.failed_stage}")
    return lines


def _cmd_rewrite(args: argparse.Namespace, limits: Limits) -> CommandResult:
    report = verification_service.verify_rewrite(args.p, args.q)
    return CommandResult(EXIT_OK if report.passed else EXIT_NEGATIVE, report.to_dict(), _report_lines(report))


def _cmd_cover(args: argparse.Namespace, limits: Limits) -> CommandResult:
    report = verification_service.verify_cover_iso(args.p, args.q, limits)
    if report.passed:
        status = EXIT_OK
    elif report.resource_exhausted:
        status = EXIT_RESOURCE
    else:
        status = EXIT_NEGATIVE
    data = report.to_dict()
    lines = _report_lines(report)
    table = None
    if args.emit == "table" and report.table is not None:
        table = pd.DataFrame(report.table.rows())
        data["table"] = report.table.rows()
        lines = table.to_string(index=False).splitlines()
    elif args.emit == "presentation" and report.simplified is not None:
        presentation = report.simplified.presentation
        data["presentation"] = presentation.to_dict()
        lines = presentation.to_text().splitlines()
    return CommandResult(status, data, lines, table)


def _cmd_wp(args: argparse.Namespace, limits: Limits) -> CommandResult:
    family = make_family(args.group, args.p, args.q)
    word = parse_word(args.word, family.presentation.alphabet)
    hnn_word = to_klein_word(word) if args.group == "R" else word
    form = britton_reduce(family.hnn, hnn_word)
    verdict = "trivial" if form.is_identity else "nontrivial"
    data = {
        "group": args.group,
        "p": args.p,
        "q": args.q,
        "word": format_word(word, family.presentation.alphabet),
        "verdict": verdict,
        "syllable_count": form.syllable_count,
    }
    lines = [f"{verdict} (pinch-free form has {form.syllable_count} stable letters)"]
    return CommandResult(EXIT_OK if form.is_identity else EXIT_NEGATIVE, data, lines)


def _cmd_witness(args: argparse.Namespace, limits: Limits) -> CommandResult:
    witness = snowflake_witness(args.p, args.q, args.k)
    text = format_word(witness.word, SNOWFLAKE_ALPHABET)
    data = {"p": args.p, "q": args.q, "k": witness.k, "word": text, "N": witness.N, "len": witness.length}
    lines = [f"word: {text}", f"N: {witness.N}", f"len: {witness.length}"]
    status = EXIT_OK
    if args.verify:
        hnn = make_hnn(HnnFamily.G_SNOWFLAKE, args.p, args.q)
        check = witness.word * SNOWFLAKE_ALPHABET.letter("a", -witness.N)
        verified = britton_reduce(hnn, check).is_identity
        data["verified"] = verified
        lines.append(f"verified: {verified}")
        status = EXIT_OK if verified else EXIT_NEGATIVE
    return CommandResult(status, data, lines)


def _cmd_equitable(args: argparse.Namespace, limits: Limits) -> CommandResult:
    cert = equitable_service.decide_equitable(args.p, args.q)
    data = cert.to_dict()
    lines = [f"verdict: {cert.verdict.value}"]
    if cert.feasible:
        lines.append(f"set: {cert.candidate.as_tuples()}")
        lines.append(f"sums: {data['sums']}")
        lines.append(f"index: {cert.lattice_index}")
    else:
        lines.extend(f"  {step}" for step in cert.trace)
    if args.search:
        found = equitable_service.exhaustive_search(args.p, args.q, args.bound, args.max_size)
        data["search"] = {
            "bound": args.bound,
            "max_size": args.max_size,
            "set": found.as_tuples() if found else None,
            "agrees": (found is not None) == cert.feasible,
        }
        lines.append(f"search (bound {args.bound}, size <= {args.max_size}): "
                     f"{found.as_tuples() if found else 'none'}")
    return CommandResult(EXIT_OK if cert.feasible else EXIT_NEGATIVE, data, lines)


def _cmd_area(args: argparse.Namespace, limits: Limits) -> CommandResult:
    if args.presentation is not None:
        presentation = file_util.read_presentation(args.presentation)
        if presentation is None:
            raise ParameterError(f"could not load a presentation from {args.presentation}")
        source = str(args.presentation)
    else:
        presentation = make_family(args.family, args.p, args.q).presentation
        source = args.family
    word = parse_word(args.word, presentation.alphabet)
    area = dehn_service.min_area(presentation, word, limits)
    data = {"family": source, "word": format_word(word, presentation.alphabet), "area": area}
    if area is None:
        return CommandResult(EXIT_RESOURCE, data, ["area: unknown (search limits reached)"])
    return CommandResult(EXIT_OK, data, [f"area: {area}"])


def _cmd_profile(args: argparse.Namespace, limits: Limits) -> CommandResult:
    family = make_family(args.family, args.p, args.q)
    profile = dehn_service.area_profile(family.presentation, args.maxlen, family.require_oracle(), limits)
    frame = profile.to_frame()
    if args.save is not None:
        file_util.write_csv(args.save, frame)
    return CommandResult(EXIT_OK, {"family": args.family, "rows": profile.rows},
                         frame.to_string(index=False).splitlines(), frame)


def _cmd_alpha(args: argparse.Namespace, limits: Limits) -> CommandResult:
    report = dehn_service.alpha_exponent(args.p, args.q, args.levels)
    lines = [
        f"2p/q = {report.ratio}",
        f"alpha = {report.alpha:.6f}",
        f"dehn exponent = {report.dehn_exponent:.6f}",
        f"witness limit = {report.witness_limit:.6f}",
        f"fitted slope = {report.fitted_slope:.6f}",
    ]
    lines.extend(f"s_{k} = {s:.6f}" for k, s in enumerate(report.slope_samples))
    table = pd.DataFrame({"k": range(len(report.slope_samples)), "slope": report.slope_samples})
    return CommandResult(EXIT_OK, report.to_dict(), lines, table)


def _cmd_density(args: argparse.Namespace, limits: Limits) -> CommandResult:
    try:
        p, q = dehn_service.find_pq_for_exponent(args.rho, args.eps, args.q_max)
    except NotFoundError as e:
        return CommandResult(EXIT_NEGATIVE, {"rho": args.rho, "found": None, "best": e.best}, [str(e)])
    exponent = dehn_service.exponent_for(p, q)
    data = {"rho": args.rho, "eps": args.eps, "p": p, "q": q, "exponent": exponent}
    return CommandResult(EXIT_OK, data, [f"p={p} q={q} exponent={exponent:.6f}"])


def _cmd_confluence(args: argparse.Namespace, limits: Limits) -> CommandResult:
    family = HnnFamily.R_KLEIN if args.group == "R" else HnnFamily.G_SNOWFLAKE
    hnn = make_hnn(family, args.p, args.q)
    rng = np.random.default_rng(limits.seed)
    disagreements = 0
    trivial = 0
    for _ in range(args.samples):
        word = random_word(hnn.alphabet, int(rng.integers(args.max_length + 1)), rng)
        stack = britton_reduce(hnn, word, Strategy.STACK)
        shuffled = britton_reduce(hnn, word, Strategy.RANDOM, rng)
        trivial += stack.is_identity
        if stack.is_identity != shuffled.is_identity or stack.syllable_count != shuffled.syllable_count:
            disagreements += 1
            logger.error(f"Strategies disagree on {format_word(word, hnn.alphabet)}")
    data = {"group": args.group, "p": args.p, "q": args.q, "samples": args.samples,
            "trivial": trivial, "disagreements": disagreements}
    lines = [f"{args.samples} words, {trivial} trivial, {disagreements} disagreements"]
    return CommandResult(EXIT_OK if disagreements == 0 else EXIT_NEGATIVE, data, lines)


def _cmd_plot(args: argparse.Namespace, limits: Limits) -> CommandResult:
    from .visualization import AreaProfilePlotter, ExponentPlotter

    if args.kind == "slopes":
        pairs = []
        for pair in args.pairs:
            try:
                p, q = (int(part) for part in pair.split(","))
            except ValueError:
                raise ParameterError(f"expected p,q pair, got {pair!r}") from None
            pairs.append((p, q))
        reports = [dehn_service.alpha_exponent(p, q) for p, q in pairs]
        path = ExponentPlotter().plot_slope_convergence(reports, args.output_dir)
    else:
        family = make_family(args.family, args.p, args.q)
        profile = dehn_service.area_profile(family.presentation, args.maxlen, family.require_oracle(), limits)
        path = AreaProfilePlotter().plot_profile(profile.to_frame(), args.family, args.output_dir)
    return CommandResult(EXIT_OK, {"kind": args.kind, "path": str(path)}, [f"saved {path}"])


def render(result: CommandResult, args: argparse.Namespace, limits: Limits) -> str:
    """Render a result in the requested output mode; machine output is deterministic for a given seed."""
    if args.output in ("json", "machine"):
        return file_util.to_json({
            "schema_version": SCHEMA_VERSION,
            "command": args.command,
            "seed": limits.seed,
            "limits": limits.to_dict(),
            "status": result.status,
            "result": result.data,
        })
    header = f"# seed={limits.seed}\n"
    if args.output == "csv":
        table = result.table
        if table is None:
            table = pd.DataFrame([{key: value for key, value in result.data.items()
                                   if not isinstance(value, (list, dict))}])
        return header + table.to_csv(index=False)
    return header + "\n".join(result.lines) + "\n"


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    logging_config.setup_logging(args.log_level or os.getenv("SNOWFLAKE_LOG_LEVEL", "WARNING"))

    try:
        limits = _limits(args)
        result = args.handler(args, limits)
    except (ParameterError, WordParseError) as e:
        logger.error(f"Usage error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as e:
        logger.error(f"Resource limit reached: {e}")
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_RESOURCE

    sys.stdout.write(render(result, args, limits))
    return result.status


def main() -> int:
    """Entry point for the snowflake-groups command.

    Returns:
        int: 0 success, 1 negative verdict, 2 resource exhaustion, 3 usage error,
        130 interrupted
    """
    try:
        return dispatch()
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        return EXIT_INTERRUPTED


if __name__ == "__main__":
    sys.exit(main())
