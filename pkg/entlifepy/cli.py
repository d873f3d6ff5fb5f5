"""
entlifepy command line.

    entlifepy ghz spectrum|lifetime|mbound|mlifetime|scan|nscan|partition ...
    entlifepy graph pair-threshold|reduced-pair|degree-bound|sep-bound ...
    entlifepy oracle verify --suite {ghz,cluster,pair,choi}

Result tables go to stdout (csv, json or plain), diagnostics to stderr.
Exit codes: 0 success, 1 usage/domain/validation/resource errors,
2 numeric failures and failed verification checks.
"""

import argparse
import csv
import io
import json
import logging
import math
import sys
from datetime import datetime, timezone
from typing import Any, Callable, Dict, List, Optional, Sequence

from common.calculations import format_number, round_significant
from common.logger import setup_logging

from . import config
from .entlifeTypes import ExitCode, LatticeKind, OutputFormat, PartitionSpec, ResultTable, SuiteName
from .errors import DomainError, EntlifeError, NumericError, ValidationError
from .ghz_analysis import (
    equal_partition, ghz_spectrum, group_lifetime, lower_bound_lifetime, lower_bound_M,
    lifetime_scan, nparty_scan, partition_lifetime, upper_bound_M, upper_bound_lifetime,
)
from .graph_core import (
    default_pair, degree_bound, graph_separability_bound, graph_threshold, load_graph,
    make_lattice, pair_entangled, pair_threshold, reduced_pair_state, separability_bound,
)
from .noise_model import clamped_noise_from_p, clamped_noise_from_time
from .oracle import DensityMatrixOracle
from .suites import get_suite

logger = logging.getLogger("entlifepy")

# Keys of the argparse namespace that are not analysis parameters.
_INTERNAL_ARGS = {"handler", "format", "log_level", "group", "command"}


class UsageError(Exception):
    """Raised instead of argparse's own exit so that usage errors map to exit code 1."""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# ===================================================================
# OUTPUT
# ===================================================================

def _json_cell(value: Any) -> Any:
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return round_significant(value)
    if isinstance(value, (list, tuple)):
        return [_json_cell(v) for v in value]
    return str(value)


def emit_table(table: ResultTable, fmt: OutputFormat, color: bool = False) -> str:
    """Render a table; identical tables give byte-identical text."""
    fmt = OutputFormat(fmt)

    if fmt == OutputFormat.Csv:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([format_number(cell) for cell in row])
        return buf.getvalue()

    if fmt == OutputFormat.Json:
        doc: Dict[str, Any] = {
            "command": table.command,
            "params": {key: _json_cell(value) for key, value in table.params.items()},
            "columns": list(table.columns),
            "rows": [[_json_cell(cell) for cell in row] for row in table.rows],
        }
        if table.timestamp is not None:
            doc["timestamp"] = table.timestamp
        return json.dumps(doc, allow_nan=False) + "\n"

    cells = [[format_number(cell) for cell in row] for row in table.rows]
    widths = [max([len(col)] + [len(row[i]) for row in cells]) for i, col in enumerate(table.columns)]
    header = "  ".join(col.ljust(w) for col, w in zip(table.columns, widths)).rstrip()
    if color:
        header = f"\033[1m{header}\033[0m"
    lines = [header]
    lines += ["  ".join(cell.rjust(w) for cell, w in zip(row, widths)).rstrip() for row in cells]
    return "\n".join(lines) + "\n"


def _new_table(args: argparse.Namespace, columns: List[str]) -> ResultTable:
    params = {key: value for key, value in sorted(vars(args).items()) if key not in _INTERNAL_ARGS}
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds") if config.STAMP_RESULTS else None
    return ResultTable(command=f"{args.group} {args.command}", params=params, columns=columns, timestamp=stamp)


# ===================================================================
# ARGUMENT HELPERS
# ===================================================================

def _noise(args: argparse.Namespace):
    if args.p is not None:
        np_, _ = clamped_noise_from_p(args.p)
    else:
        np_, _ = clamped_noise_from_time(args.kt)
    return np_


def _graph(args: argparse.Namespace):
    if not args.lattice and not args.graph_file:
        raise ValidationError("a graph is required: --lattice or --graph-file")
    if args.graph_file:
        return load_graph(args.graph_file), LatticeKind.Custom, None
    kind = LatticeKind(args.lattice)
    if kind in (LatticeKind.Grid2D, LatticeKind.Grid3D):
        if not args.dims:
            raise ValidationError(f"--lattice {kind.value} needs --dims")
        dims = tuple(args.dims)
    else:
        if args.length is None:
            raise ValidationError(f"--lattice {kind.value} needs --length")
        dims = (args.length,)
    return make_lattice(kind, dims), kind, dims


def _pair(args: argparse.Namespace, g, kind, dims):
    if args.pair is not None:
        return tuple(args.pair)
    if kind == LatticeKind.Custom:
        return default_pair(g, kind, [])
    return default_pair(g, kind, dims)


def _parse_groups(text: str) -> PartitionSpec:
    try:
        groups = tuple(int(tok) for tok in text.replace(" ", "").split(",") if tok)
    except ValueError as e:
        raise ValidationError(f"--groups expects comma-separated integer labels, got {text!r}") from e
    return PartitionSpec(N=len(groups), groups=groups)


# ===================================================================
# GHZ COMMANDS
# ===================================================================

def cmd_ghz_spectrum(args) -> ResultTable:
    np_ = _noise(args)
    spectrum = ghz_spectrum(args.n, np_)
    table = _new_table(args, ["k", "sign", "lambda", "ln_lambda"])
    table.add_row([0, "+", spectrum.lambda0_plus, spectrum.log_lambda0_plus])
    table.add_row([0, "-", spectrum.lambda0_minus, spectrum.log_lambda0_minus])
    top = args.n // 2 if args.k_max is None else min(args.k_max, args.n - 1)
    for k in range(1, top + 1):
        table.add_row([k, "", spectrum.lambda_k(k), float(spectrum.log_lambda[k])])
    return table


def cmd_ghz_lifetime(args) -> ResultTable:
    threshold = group_lifetime(args.n, args.m)
    table = _new_table(args, ["N", "m", "p_crit", "kappa_t"])
    table.add_row([args.n, args.m, threshold.p, threshold.kappa_t])
    return table


def cmd_ghz_mbound(args) -> ResultTable:
    np_ = _noise(args)
    lower = lower_bound_M(np_)
    table = _new_table(args, ["p", "kappa_t", "M_upper", "M_lower", "lower_guaranteed"])
    table.add_row([np_.p, np_.kappa_t, upper_bound_M(np_), lower.value, lower.guaranteed])
    return table


def cmd_ghz_mlifetime(args) -> ResultTable:
    value = lower_bound_lifetime(args.m) if args.lower else upper_bound_lifetime(args.m)
    table = _new_table(args, ["M", "kappa_tau"])
    table.add_row([args.m, value])
    return table


def cmd_ghz_scan(args) -> ResultTable:
    if args.m_to < args.m_from:
        raise DomainError(f"--m-to {args.m_to} below --m-from {args.m_from}")
    table = _new_table(args, ["M", "kappa_tau"])
    for M, value in lifetime_scan(range(args.m_from, args.m_to + 1, args.m_step), workers=config.SCAN_WORKERS):
        table.add_row([M, value])
    return table


def cmd_ghz_nscan(args) -> ResultTable:
    if args.n_to < args.n_from:
        raise DomainError(f"--n-to {args.n_to} below --n-from {args.n_from}")
    table = _new_table(args, ["N", "p_crit", "kappa_tau"])
    for row in nparty_scan(range(args.n_from, args.n_to + 1, args.n_step), workers=config.SCAN_WORKERS):
        table.add_row(list(row))
    return table


def cmd_ghz_partition(args) -> ResultTable:
    if args.groups:
        partition = _parse_groups(args.groups)
    elif args.n is not None and args.m is not None:
        partition = equal_partition(args.n, args.m)
    else:
        raise ValidationError("ghz partition needs --groups or both --n and --m")
    threshold = partition_lifetime(partition)
    table = _new_table(args, ["N", "M", "min_group", "p_crit", "kappa_t"])
    table.add_row([partition.N, partition.M, partition.min_group_size, threshold.p, threshold.kappa_t])
    return table


# ===================================================================
# GRAPH COMMANDS
# ===================================================================

def cmd_graph_pair_threshold(args) -> ResultTable:
    g, kind, dims = _graph(args)
    table = _new_table(args, ["k", "l", "p_less", "kappa_t_less"])
    if args.worst:
        k, l, threshold = graph_threshold(g, workers=config.SCAN_WORKERS)
    else:
        k, l = _pair(args, g, kind, dims)
        threshold = pair_threshold(g, k, l)
    table.add_row([k, l, threshold.p, threshold.kappa_t])
    return table


def cmd_graph_reduced_pair(args) -> ResultTable:
    g, kind, dims = _graph(args)
    k, l = _pair(args, g, kind, dims)
    q = reduced_pair_state(g, _noise(args), k, l)
    table = _new_table(args, ["k", "l", "q00", "q01", "q10", "q11", "entangled"])
    table.add_row([k, l, *q.as_tuple(), pair_entangled(q)])
    return table


def cmd_graph_degree_bound(args) -> ResultTable:
    if args.dk is not None and args.dj is not None:
        d_k, d_j = args.dk, args.dj
    elif args.lattice or args.graph_file:
        g, kind, dims = _graph(args)
        k, l = _pair(args, g, kind, dims)
        d_k, d_j = g.degree(k), g.degree(l)
    else:
        raise ValidationError("graph degree-bound needs --dk and --dj, or a graph")
    table = _new_table(args, ["d_k", "d_j", "kappa_t_bound"])
    table.add_row([d_k, d_j, degree_bound(d_k, d_j)])
    return table


def cmd_graph_sep_bound(args) -> ResultTable:
    table = _new_table(args, ["m", "kappa_t_greater"])
    if args.m is not None:
        table.add_row([args.m, separability_bound(args.m)])
    elif args.lattice or args.graph_file:
        g, _, _ = _graph(args)
        table.add_row([g.max_degree, graph_separability_bound(g)])
    else:
        raise ValidationError("graph sep-bound needs --m or a graph")
    return table


# ===================================================================
# ORACLE COMMANDS
# ===================================================================

def cmd_oracle_verify(args) -> ResultTable:
    suite = get_suite(args.suite)
    oracle = DensityMatrixOracle()
    logger.info(f"Running verification suite '{suite.name}' (max {oracle.max_qubits} qubits)")
    table = _new_table(args, ["check", "observed", "expected", "tolerance", "passed"])
    for result in suite.run(oracle):
        table.add_row([result.name, result.observed, result.expected, result.tolerance, result.passed])
        if not result.passed:
            logger.warning(f"Check failed: {result.name} observed={result.observed!r} expected={result.expected!r}")
    return table


# ===================================================================
# PARSER
# ===================================================================

def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _common_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.Csv.value,
                        help="output format (default: csv)")
    return parent


def _noise_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_mutually_exclusive_group(required=True)
    group.add_argument("--p", type=float, help="survival parameter p in (0, 1]")
    group.add_argument("--kt", type=float, help="dimensionless time kappa*t >= 0")
    return parent


def _graph_parent(pair: bool = True) -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    source = parent.add_mutually_exclusive_group()
    source.add_argument("--lattice", choices=[k.value for k in LatticeKind if k != LatticeKind.Custom])
    source.add_argument("--graph-file", help="edge-list file ('i j' per line, optional 'n <count>' header)")
    parent.add_argument("--length", type=_positive_int, help="vertex count for linear, ring and star lattices")
    parent.add_argument("--dims", type=_positive_int, nargs="+", help="grid dimensions (2 for grid2d, 3 for grid3d)")
    if pair:
        parent.add_argument("--pair", type=int, nargs=2, metavar=("K", "L"),
                            help="edge to analyse (default: an interior edge)")
    return parent


def build_parser() -> argparse.ArgumentParser:
    common = _common_parent()
    noise = _noise_parent()

    parser = _ArgumentParser(prog="entlifepy", description="Lifetime of multiparty entanglement under decoherence.")
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], default=None,
                        help=f"override ENTLIFE_LOG_LEVEL (currently {config.LOG_LEVEL})")
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_ArgumentParser)

    # --- ghz ---
    ghz = groups.add_parser("ghz", help="GHZ states under depolarizing noise")
    ghz_cmds = ghz.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    p = ghz_cmds.add_parser("spectrum", parents=[common, noise], help="GHZ-basis coefficients")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k-max", type=int, default=None, help="largest k listed (default N/2)")
    p.set_defaults(handler=cmd_ghz_spectrum)

    p = ghz_cmds.add_parser("lifetime", parents=[common], help="PT-positivity threshold for a group of m particles")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=1)
    p.set_defaults(handler=cmd_ghz_lifetime)

    p = ghz_cmds.add_parser("mbound", parents=[common, noise], help="upper and lower bounds on entangled parties M")
    p.set_defaults(handler=cmd_ghz_mbound)

    p = ghz_cmds.add_parser("mlifetime", parents=[common], help="lifetime of M-party entanglement")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--lower", action="store_true", help="guaranteed-distillability time instead of the upper bound")
    p.set_defaults(handler=cmd_ghz_mlifetime)

    p = ghz_cmds.add_parser("scan", parents=[common], help="M-party lifetime for a range of M")
    p.add_argument("--m-from", type=int, default=2)
    p.add_argument("--m-to", type=int, required=True)
    p.add_argument("--m-step", type=_positive_int, default=1)
    p.set_defaults(handler=cmd_ghz_scan)

    p = ghz_cmds.add_parser("nscan", parents=[common], help="N-party lifetime for a range of N")
    p.add_argument("--n-from", type=int, default=2)
    p.add_argument("--n-to", type=int, required=True)
    p.add_argument("--n-step", type=_positive_int, default=1)
    p.set_defaults(handler=cmd_ghz_nscan)

    p = ghz_cmds.add_parser("partition", parents=[common], help="M-party distillability lifetime of a partition")
    p.add_argument("--groups", help="group label per particle, e.g. 0,0,1,1,2")
    p.add_argument("--n", type=int, help="with --m: split N particles into M near-equal groups")
    p.add_argument("--m", type=int)
    p.set_defaults(handler=cmd_ghz_partition)

    # --- graph ---
    graph = groups.add_parser("graph", help="graph states under depolarizing noise")
    graph_cmds = graph.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    p = graph_cmds.add_parser("pair-threshold", parents=[common, _graph_parent()], help="pair distillability threshold")
    p.add_argument("--worst", action="store_true", help="largest threshold over all edges")
    p.set_defaults(handler=cmd_graph_pair_threshold)

    p = graph_cmds.add_parser("reduced-pair", parents=[common, noise, _graph_parent()], help="Bell-diagonal pair state")
    p.set_defaults(handler=cmd_graph_reduced_pair)

    p = graph_cmds.add_parser("degree-bound", parents=[common, _graph_parent()], help="degree-based distillability time")
    p.add_argument("--dk", type=int)
    p.add_argument("--dj", type=int)
    p.set_defaults(handler=cmd_graph_degree_bound)

    p = graph_cmds.add_parser("sep-bound", parents=[common, _graph_parent(pair=False)], help="full-separability time")
    p.add_argument("--m", type=int, help="uniform vertex degree")
    p.set_defaults(handler=cmd_graph_sep_bound)

    # --- oracle ---
    oracle = groups.add_parser("oracle", help="dense density-matrix verification")
    oracle_cmds = oracle.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)
    p = oracle_cmds.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", choices=[s.value for s in SuiteName], required=True)
    p.set_defaults(handler=cmd_oracle_verify)

    return parser


# ===================================================================
# ENTRY POINT
# ===================================================================

def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, run one command and print its table; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return ExitCode.ValidationFailure.value
    except SystemExit as e:
        # --help
        return int(e.code or 0)

    level = args.log_level or config.LOG_LEVEL
    setup_logging("entlifepy", log_level=getattr(logging, level), log_to_file=config.LOG_TO_FILE)

    handler: Callable[[argparse.Namespace], ResultTable] = args.handler
    try:
        table = handler(args)
    except NumericError as e:
        logger.error(f"Numeric failure: {e}")
        return ExitCode.NumericFailure.value
    except EntlifeError as e:
        # DomainError, ValidationError and ResourceError
        logger.error(f"{type(e).__name__}: {e}")
        return ExitCode.ValidationFailure.value

    color = not config.NO_COLOR and sys.stdout.isatty()
    sys.stdout.write(emit_table(table, OutputFormat(args.format), color=color))

    if table.columns[-1] == "passed" and not all(row[-1] for row in table.rows):
        return ExitCode.NumericFailure.value
    return ExitCode.Success.value


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
