"""
Command line interface

Exit statuses: 0 success (or Unsat certificate written), 1 a negative
finding (monochromatic tuple, Sat, checker violations), 64 usage error,
65 malformed data file, 70 budget exhausted or internal error, 130
interrupted.
"""

import argparse
import logging
import os
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any, NoReturn

from qcolor import ENV_LOG_LEVEL, __version__
from qcolor.cache import ResultCache
from qcolor.colorings import (
    ColoringError,
    ColoringReport,
    ColoringSpec,
    coloring_from_dict,
    evaluate,
    find_monochromatic,
    parse_coloring,
    strongly_free_check,
)
from qcolor.colorings import catalog as coloring_catalog
from qcolor.config import (
    BUILTIN_PREFIX,
    BUILTIN_UNIVERSES,
    DEFAULT_UNIVERSES,
    Config,
    ConfigError,
    RunConfig,
    UniverseConfig,
    resolve_builtin,
    validate_document,
)
from qcolor.engine import BudgetExceeded, EngineError, enumerate_colorings, is_consistent, parse_seed, search
from qcolor.equations import EquationError, LinearEquation, forbidden_ratios, parse_equation
from qcolor.proof import ProofError, ProofTree, Row, check_proof_table, export_proof
from qcolor.ratcore import RatcoreError, format_rational, parse_rational
from qcolor.universe import NodeUniverse, UniverseError, universe_from_config
from qcolor.utils import dumps, format_table, write_document

EXIT_OK = 0
EXIT_FOUND = 1
EXIT_USAGE = 64
EXIT_DATAERR = 65
EXIT_SOFTWARE = 70
EXIT_INTERRUPTED = 130


class CLIError(Exception):
    """Exception raised for CLI-specific errors"""

    def __init__(self, message: str, status: int = EXIT_USAGE) -> None:
        super().__init__(message)
        self.status = status


class ArgumentParser(argparse.ArgumentParser):
    """argparse parser whose usage errors exit with status 64"""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# Helpers
##############################################################################


def _load_universe(reference: str) -> UniverseConfig:
    loaded = Config(resolve_builtin(reference, BUILTIN_UNIVERSES), kind="universe").as_dataclass()
    if not isinstance(loaded, UniverseConfig):
        raise CLIError(f"'{reference}' is not a universe description", EXIT_DATAERR)
    return loaded


UNIVERSE_FLAGS = ("primes", "exponent", "no_negatives", "integers", "closure_rounds", "max_nodes")


def _default_universe(equation: str | None) -> UniverseConfig:
    """The packaged universe for equations that ship one, else the generic closure"""
    if equation:
        eq = parse_equation(equation)
        for coefficients in (eq.coefficients, tuple(-a for a in eq.coefficients)):
            name = DEFAULT_UNIVERSES.get(",".join(format_rational(a) for a in sorted(coefficients)))
            if name:
                logging.debug(f"Using the {BUILTIN_PREFIX}{name} universe for {eq}")
                return _load_universe(BUILTIN_PREFIX + name)
    return UniverseConfig()


def _universe_config(
    base: UniverseConfig | str | None,
    args: argparse.Namespace,
    equation: str | None = None,
) -> UniverseConfig:
    """Universe from --universe, the config file or the equation's default, then individual flags on top"""
    reference = getattr(args, "universe", None)
    if reference:
        config = _load_universe(reference)
    elif isinstance(base, str):
        config = _load_universe(base)
    elif base is not None:
        config = base
    elif any(getattr(args, flag, None) not in (None, False) for flag in UNIVERSE_FLAGS):
        config = UniverseConfig()
    else:
        config = _default_universe(equation)

    primes = getattr(args, "primes", None)
    exponent = getattr(args, "exponent", None)
    if primes is not None:
        config.primes = primes
        config.values = None
        config.integers = None
    if exponent is not None:
        config.bounds = {str(p): [-exponent, exponent] for p in config.primes}
    elif primes is not None:
        config.bounds = {str(p): config.bounds.get(str(p), [-3, 3]) for p in primes}
    if getattr(args, "no_negatives", False):
        config.negatives = False
    if getattr(args, "integers", None) is not None:
        config.integers = args.integers
        config.values = None
    for attr in ("closure_rounds", "max_nodes"):
        value = getattr(args, attr, None)
        if value is not None:
            setattr(config, attr, value)
    return config


def _run_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then the --config file, then command line flags"""
    cfg = RunConfig()
    if getattr(args, "config", None):
        loaded = Config(args.config, kind="run").as_dataclass()
        if not isinstance(loaded, RunConfig):
            raise CLIError(f"'{args.config}' is not a run configuration", EXIT_DATAERR)
        cfg = loaded
    cfg.command = args.command

    for attr in ("equation", "colors", "coloring", "limit", "output", "parallel"):
        value = getattr(args, attr, None)
        if value is not None:
            setattr(cfg, attr, value)
    if getattr(args, "seeds", None):
        cfg.seeds = list(args.seeds)
    if getattr(args, "strong", False):
        cfg.strong = True
    if getattr(args, "sequential_equivalent", False):
        cfg.sequential_equivalent = True
    if getattr(args, "format", None):
        cfg.fmt = args.format
    for attr in ("max_branches", "max_solutions", "max_seconds"):
        value = getattr(args, attr, None)
        if value is not None:
            setattr(cfg.budget, attr, value)

    cfg.universe = _universe_config(cfg.universe, args, cfg.equation)
    return cfg


def _equation(cfg: RunConfig) -> LinearEquation:
    if not cfg.equation:
        raise CLIError("An equation is required (--eq E(q,n) or --coeffs a1,a2,...)")
    return parse_equation(cfg.equation)


def _colors(cfg: RunConfig) -> int:
    if cfg.colors is None:
        raise CLIError("The number of colors is required (--colors)")
    if cfg.colors < 1:
        raise CLIError(f"--colors must be positive, got {cfg.colors}")
    return cfg.colors


def _coloring(value: dict[str, Any] | str | None) -> ColoringSpec:
    if value is None:
        raise CLIError("A coloring is required (--coloring cpn:2:3 or a JSON file)")
    if isinstance(value, dict):
        validate_document(value, "coloring", "--config")
        return coloring_from_dict(value)
    if value.endswith(".json") or Path(value).is_file():
        return coloring_from_dict(dict(Config(value, kind="coloring")))
    return parse_coloring(value)


def _universe(cfg: RunConfig, eq: LinearEquation | None = None, extra_core: Sequence[Any] = ()) -> NodeUniverse:
    config = cfg.universe
    if not isinstance(config, UniverseConfig):
        config = _load_universe(config)
    universe = universe_from_config(config, eq, extra_core)
    logging.info(f"Universe: {len(universe)} nodes over primes {list(universe.primes)}")
    return universe


def _cache(args: argparse.Namespace) -> ResultCache:
    if getattr(args, "no_cache", False):
        return ResultCache(None)
    return ResultCache.from_env(getattr(args, "cache_dir", None))


def _cached(
    cache: ResultCache,
    key: str,
    compute: Callable[[], dict[str, Any]],
    check: Callable[[dict[str, Any]], Any],
) -> dict[str, Any]:
    """Serve a stored result when it still parses, otherwise compute and store"""
    result = cache.lookup(key)
    if result is not None:
        try:
            check(result)
            logging.info(f"Served from cache ({key[:12]})")
            return result
        except (ProofError, KeyError, TypeError, ValueError) as e:
            logging.warning(f"Ignoring corrupt cache entry {key[:12]}: {e}")
    result = compute()
    cache.store(key, result)
    return result


def _emit(args: argparse.Namespace, cfg: RunConfig | None, document: Any, pretty: Callable[[], str]) -> None:
    text = pretty() if getattr(args, "pretty", False) else dumps(document)
    output = cfg.output if cfg is not None else getattr(args, "output", None)
    write_document(text, output)


def _fmt(values: Sequence[Any]) -> str:
    return "(" + ", ".join(format_rational(v) for v in values) + ")"


def _pretty_rows(rows: list[Row]) -> str:
    lines = []
    for row in rows:
        assumption = ", ".join(f"c({format_rational(f.node)})={f.color}" for f in row.assumption)
        claim = row.claim
        node = f"c({format_rational(claim.node)})"
        if claim.kind == "contradiction":
            text = f"{node} !?"
        elif claim.kind == "forcedColor":
            text = f"{node} = {claim.colors[0]}"
        else:
            text = f"{node} in {{{','.join(str(c) for c in claim.colors)}}}"
        reasons = []
        for color, reason in sorted(row.reasons.items()):
            if reason.kind == "ratio" and reason.node is not None and reason.ratio is not None:
                why = f"{format_rational(reason.node)}*{format_rational(reason.ratio)}"
            elif reason.kind == "tuple":
                why = _fmt(reason.values)
            else:
                why = "sym"
            reasons.append(f"not {color}: {why}")
        lines.append(f"{'  ' * row.depth}{assumption} => {text}   [{'; '.join(reasons)}]")
    return "\n".join(lines) + "\n" if lines else ""


def _pretty_report(report: ColoringReport) -> str:
    head = f"checked {report.checked_count} tuples over {len(report.exhausted_set)} values: "
    if report.free:
        return head + "no monochromatic solution\n"
    rows = [(_fmt(values), color) for values, color in report.monochromatic]
    return head + f"{len(rows)} monochromatic\n" + format_table(["solution", "color"], rows)


# Entry points
##############################################################################


def catalog(args: argparse.Namespace) -> int:
    """List the coloring families"""
    entries = coloring_catalog()
    if args.variant:
        entries = [e for e in entries if e["variant"].lower() == args.variant.lower()]
        if not entries:
            raise CLIError(f"Unknown coloring variant '{args.variant}'")
    rows = [(e["variant"], ", ".join(e["parameters"]), e["summary"]) for e in entries]
    _emit(args, None, entries, lambda: format_table(["variant", "parameters", "summary"], rows))
    return EXIT_OK


def eval_(args: argparse.Namespace) -> int:
    """Color of rationals under a coloring"""
    cfg = _run_config(args)
    spec = _coloring(cfg.coloring)
    colors = {format_rational(parse_rational(v)): evaluate(spec, v) for v in args.values}
    document = {"coloring": spec.to_dict(), "colors": colors}
    _emit(args, cfg, document, lambda: format_table(["value", "color"], list(colors.items())))
    return EXIT_OK


def verify(args: argparse.Namespace) -> int:
    """Scan a coloring for monochromatic solutions over a finite universe"""
    cfg = _run_config(args)
    eq = _equation(cfg)
    spec = _coloring(cfg.coloring)
    values = _universe(cfg).values

    document: dict[str, Any] = {"equation": eq.to_list(), "coloring": spec.to_dict()}
    if cfg.strong:
        reports = strongly_free_check(spec, eq.coefficients, values, cfg.limit)
        document["strong"] = True
        document["reports"] = [
            {"coefficients": [format_rational(a) for a in sub], **report.to_dict()} for sub, report in reports.items()
        ]
        found = any(not report.free for report in reports.values())

        def pretty() -> str:
            return "".join(f"{_fmt(sub)}: {_pretty_report(report)}" for sub, report in reports.items())

    else:
        report = find_monochromatic(spec, eq, values, cfg.limit)
        document.update(report.to_dict())
        found = not report.free

        def pretty() -> str:
            return _pretty_report(report)

    _emit(args, cfg, document, pretty)
    return EXIT_FOUND if found else EXIT_OK


def ratios(args: argparse.Namespace) -> int:
    """Forbidden ratios of an equation"""
    cfg = _run_config(args)
    eq = _equation(cfg)
    found = forbidden_ratios(eq)
    document = {"equation": eq.to_list(), "ratios": [fr.to_dict() for fr in found]}
    _emit(args, cfg, document, lambda: "".join(f"{format_rational(fr.ratio)}\n" for fr in found))
    return EXIT_OK


def prove(args: argparse.Namespace) -> int:
    """Search for an r-coloring; write an Unsat certificate when none exists"""
    cfg = _run_config(args)
    eq = _equation(cfg)
    r = _colors(cfg)
    seeds = [parse_seed(s) for s in cfg.seeds]
    if cfg.fmt not in ("json", "latex"):
        raise CLIError(f"Unknown format '{cfg.fmt}'")

    def compute() -> dict[str, Any]:
        universe = _universe(cfg, eq, [node for seed in seeds for node in seed.nodes])
        outcome = search(
            eq,
            r,
            universe,
            seeds,
            budget=cfg.budget,
            parallel=cfg.parallel,
            sequential_equivalent=cfg.sequential_equivalent,
        )
        logging.info(f"Search statistics: {outcome.stats.to_dict()}")
        result = outcome.to_dict()
        result.pop("stats", None)
        return result

    def check(result: dict[str, Any]) -> None:
        if result["result"] == "unsat":
            report = check_proof_table(ProofTree.from_dict(result["proof"], "cache"), eq, r)
            if not report.ok:
                raise ValueError(f"cached proof has {len(report.violations)} violations")
        elif result["result"] == "sat":
            assignment = {parse_rational(v): c for v, c in result["assignment"].items()}
            if not all(0 <= c < r for c in assignment.values()) or not is_consistent(eq, assignment):
                raise ValueError("cached coloring is not solution-free")
        else:
            raise ValueError(f"unknown result {result['result']!r}")

    result = _cached(_cache(args), cfg.cache_key(), compute, check)

    if result["result"] == "sat":
        assignment = result["assignment"]
        logging.info(f"Sat: a {r}-coloring of the universe avoids every solution")
        _emit(args, cfg, result, lambda: format_table(["value", "color"], list(assignment.items())))
        return EXIT_FOUND

    tree = ProofTree.from_dict(result["proof"], "search")
    logging.info(f"Unsat: {r}-regular over the universe, {len(tree.rows)} proof rows")
    text = export_proof(tree, "latex" if cfg.fmt == "latex" else "json")
    if getattr(args, "pretty", False) and cfg.fmt != "latex":
        text = _pretty_rows(tree.rows)
    write_document(text, cfg.output)
    return EXIT_OK


def enumerate_(args: argparse.Namespace) -> int:
    """All colorings of a universe free of solutions, up to relabeling"""
    cfg = _run_config(args)
    eq = _equation(cfg)
    r = _colors(cfg)

    def compute() -> dict[str, Any]:
        universe = _universe(cfg, eq)
        enumeration = enumerate_colorings(eq, r, universe, cfg.budget)
        logging.info(f"Enumeration statistics: {enumeration.stats.to_dict()}")
        result = enumeration.to_dict()
        result.pop("stats", None)
        return {"equation": eq.to_list(), "colors": r, **result}

    def check(result: dict[str, Any]) -> None:
        if len(result["classes"]) != result["count"]:
            raise ValueError("class count mismatch")

    result = _cached(_cache(args), cfg.cache_key(), compute, check)

    def pretty() -> str:
        lines = [f"{result['count']} classes over {len(result['values'])} values"]
        lines.extend(" ".join(str(c) for c in colors) for colors in result["classes"])
        return "\n".join(lines) + "\n"

    _emit(args, cfg, result, pretty)
    return EXIT_OK


def check_table(args: argparse.Namespace) -> int:
    """Validate a proof table"""
    cfg = _run_config(args)
    tree = ProofTree.load(args.table)
    eq = parse_equation(cfg.equation) if cfg.equation else None
    report = check_proof_table(tree, eq, cfg.colors)

    def pretty() -> str:
        if report.ok:
            return f"OK: {report.rows} rows, no violations\n"
        rows = [(v.row, v.code, v.message) for v in report.violations]
        return format_table(["row", "code", "message"], rows)

    _emit(args, cfg, report.to_dict(), pretty)
    return EXIT_OK if report.ok else EXIT_FOUND


def export(args: argparse.Namespace) -> int:
    """Render a checked proof as LaTeX or JSON"""
    cfg = _run_config(args)
    tree = ProofTree.load(args.proof)
    fmt = args.format or "latex"
    write_document(export_proof(tree, "json" if fmt == "json" else "latex"), cfg.output)
    return EXIT_OK


def clean(args: argparse.Namespace) -> int:
    """Remove cached results"""
    cache = ResultCache.from_env(args.cache_dir)
    if not cache.enabled:
        logging.info("No cache directory configured")
        return EXIT_OK
    removed = cache.clear()
    logging.info(f"Removed {removed} cache entries from {cache.directory}")
    return EXIT_OK


# Argument parsing
##############################################################################


def _rational_list(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in _rational_list(text)]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got '{text}'") from e


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected an integer, got '{text}'") from e
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def construct_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="qcolor", description="Colorings of Q* and regularity proofs")
    parser.set_defaults(func=lambda x: parser.print_usage() or EXIT_OK, command="")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers()

    # Logging options (mutually exclusive)
    log_group = parser.add_mutually_exclusive_group()
    log_group.add_argument(
        "-v",
        "--verbose",
        help="Enable verbose output (debug level)",
        action="store_true",
    )
    log_group.add_argument(
        "-q",
        "--quiet",
        help="Quiet mode (errors only)",
        action="store_true",
    )

    output_parent = ArgumentParser(add_help=False)
    output_parent.add_argument("-o", "--output", help="Write the document to this file instead of stdout")
    output_parent.add_argument("--pretty", help="Human readable tables instead of JSON", action="store_true")
    output_parent.add_argument("--config", help="Run configuration JSON file; flags override its values")

    eq_parent = ArgumentParser(add_help=False)
    eq_parent.add_argument("--eq", dest="equation", help="Equation as E(q,n) or a coefficient list such as 1,1,1,-4")
    eq_parent.add_argument("--coeffs", dest="equation", help="Coefficient list, e.g. 1,1,1,-4")

    coloring_parent = ArgumentParser(add_help=False)
    coloring_parent.add_argument(
        "--coloring",
        help="Coloring shorthand (cpn:2:3, cpvn:2:2:3, capcp:5, cpi:5, c4pi:1,0,2, odd:5:3, const:0, c23prime) "
        "or a JSON file",
    )

    universe_parent = ArgumentParser(add_help=False)
    universe_parent.add_argument("--universe", help="Universe JSON file or builtin:table1")
    universe_parent.add_argument("--primes", type=_int_list, help="Prime support, e.g. 2,3,5")
    universe_parent.add_argument("--exponent", type=int, help="Exponent bound: every prime ranges over [-N, N]")
    universe_parent.add_argument("--no-negatives", help="Positive nodes only", action="store_true")
    universe_parent.add_argument("--integers", type=_positive, help="Use the positive integers 1..N")
    universe_parent.add_argument("--closure-rounds", type=int, help="Closure growth rounds (0 = full box)")
    universe_parent.add_argument("--max-nodes", type=_positive, help="Node cap for closure growth")

    cache_parent = ArgumentParser(add_help=False)
    cache_parent.add_argument("--cache-dir", help="Result cache directory (default: $QCOLOR_CACHE_DIR)")
    cache_parent.add_argument("--no-cache", help="Neither read nor write cached results", action="store_true")

    budget_parent = ArgumentParser(add_help=False)
    budget_parent.add_argument("--colors", type=_positive, help="Number of colors r")
    budget_parent.add_argument("--max-branches", type=_positive, help="Branch budget")
    budget_parent.add_argument("--max-seconds", type=float, help="Time budget in seconds")

    catalog_group = subparsers.add_parser("catalog", parents=[output_parent], help="List coloring families")
    catalog_group.add_argument("variant", nargs="?", help="Describe one variant only")
    catalog_group.set_defaults(func=catalog, command="catalog")

    eval_group = subparsers.add_parser(
        "eval", parents=[output_parent, coloring_parent], help="Color of rationals under a coloring"
    )
    eval_group.add_argument("values", nargs="+", help="Rationals as n or n/d")
    eval_group.set_defaults(func=eval_, command="eval")

    verify_group = subparsers.add_parser(
        "verify",
        parents=[output_parent, eq_parent, coloring_parent, universe_parent],
        help="Scan a coloring for monochromatic solutions",
    )
    verify_group.add_argument("--strong", help="Check every sub-multiset of the coefficients", action="store_true")
    verify_group.add_argument("--limit", type=_positive, help="Report at most this many tuples")
    verify_group.set_defaults(func=verify, command="verify")

    ratios_group = subparsers.add_parser("ratios", parents=[output_parent, eq_parent], help="Forbidden ratios")
    ratios_group.set_defaults(func=ratios, command="ratios")

    prove_group = subparsers.add_parser(
        "prove",
        parents=[output_parent, eq_parent, universe_parent, cache_parent, budget_parent],
        help="Prove r-regularity over a node universe",
    )
    prove_group.add_argument(
        "--seed",
        dest="seeds",
        action="append",
        help="Seed constraint such as c(1)=c(3), c(2)=1 or c(1)=c(3)=0 (repeatable)",
    )
    prove_group.add_argument("--parallel", type=_positive, help="Worker processes for the first branch")
    prove_group.add_argument(
        "--sequential-equivalent",
        help="Merge parallel results exactly as a sequential run would",
        action="store_true",
    )
    prove_group.add_argument("--format", choices=["json", "latex"], help="Proof document format")
    prove_group.set_defaults(func=prove, command="prove")

    enumerate_group = subparsers.add_parser(
        "enumerate",
        parents=[output_parent, eq_parent, universe_parent, cache_parent, budget_parent],
        help="All solution-free colorings up to relabeling",
    )
    enumerate_group.add_argument("--max-solutions", type=_positive, help="Stop after this many classes")
    enumerate_group.set_defaults(func=enumerate_, command="enumerate")

    check_group = subparsers.add_parser(
        "check-table", parents=[output_parent, eq_parent], help="Validate a proof table"
    )
    check_group.add_argument("table", nargs="?", default="builtin:table1", help="Proof JSON file or builtin:table1")
    check_group.add_argument("--colors", type=_positive, help="Number of colors (default: the table's)")
    check_group.set_defaults(func=check_table, command="check-table")

    export_group = subparsers.add_parser("export", parents=[output_parent], help="Render a proof as LaTeX or JSON")
    export_group.add_argument("proof", help="Proof JSON file or builtin:table1")
    export_group.add_argument("--format", choices=["json", "latex"], help="Output format (default: latex)")
    export_group.set_defaults(func=export, command="export")

    clean_group = subparsers.add_parser("clean", help="Remove cached results")
    clean_group.add_argument("--cache-dir", help="Result cache directory (default: $QCOLOR_CACHE_DIR)")
    clean_group.set_defaults(func=clean, command="clean")

    return parser


# Main
##############################################################################


def _log_level(args: argparse.Namespace) -> int:
    if args.verbose:
        return logging.DEBUG
    if args.quiet:
        return logging.ERROR
    name = os.environ.get(ENV_LOG_LEVEL, "INFO").strip().upper()
    return logging.getLevelNamesMapping().get(name, logging.INFO)


def run(argv: Sequence[str] | None = None) -> int:
    """Parse arguments, run one command and return its exit status"""
    parser = construct_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=_log_level(args),
        format="%(message)s",
    )

    try:
        return int(args.func(args) or EXIT_OK)
    except CLIError as e:
        logging.error(f"Error: {e}")
        return e.status
    except BudgetExceeded as e:
        logging.error(f"Error: {e}")
        sys.stderr.write(dumps({"error": "budget", "message": str(e), "stats": e.stats.to_dict()}))
        return EXIT_SOFTWARE
    except (ConfigError, ProofError) as e:
        logging.error(f"Error: {e}")
        return EXIT_DATAERR
    except (RatcoreError, EquationError, ColoringError, UniverseError, EngineError) as e:
        logging.error(f"Error: {e}")
        return EXIT_USAGE
    except KeyboardInterrupt:
        logging.info("\nOperation cancelled by user.")
        return EXIT_INTERRUPTED
    except Exception as e:
        logging.error(f"Unexpected error: {e}")
        logging.debug("Full traceback:", exc_info=True)
        return EXIT_SOFTWARE


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
