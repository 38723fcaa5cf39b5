#!/usr/bin/env python3
"""
escrit - chromatic edge-stability toolkit

Usage:
    python escrit.py analyze --g6 'D{c'            # full criticality report
    python escrit.py es --edges graph.txt          # edge-stability number
    python escrit.py build 'E:4,1;4,1;4,1'         # graph6 of a family member
    python escrit.py classify --g6 'EhEG'          # family tag and spec
    python escrit.py scan --n 7 --summary          # exhaustive verification
    python escrit.py ear --g6 'C~' --seed 0-1,1-2,2-0

Graphs come from --g6, --edges (edge-list file) or stdin (a graph6 line or an
edge list). JSON goes to stdout, diagnostics to stderr.
Exit codes: 0 success, 1 negative result (--expect-critical unmet, scan
violations), 2 usage or input error.
"""

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, TextIO

from chromatic_stability import edge_stability_number
from criticality import criticality_report
from escrit_config import ConfigManager, configure_logging, get_config, get_logger, set_config
from escrit_errors import ConfigError, EscritError, GraphFormatError
from families import FamilySpec, build_family, matching_families, recognize_family
from graph_core import (
    Graph, Subgraph, ear_decomposition, parse_edge_list, parse_graph6, to_graph6,
)
from verification_harness import ScanOptions, ScanSource, theorem_scan

logger = get_logger('cli')

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2


@dataclass
class CommandOutcome:
    exit_code: int
    payload: Optional[Dict[str, Any]] = None


class _ArgumentParser(argparse.ArgumentParser):
    """Raises instead of exiting so run() can report usage errors as exit code 2"""

    def error(self, message):
        raise GraphFormatError(f"usage: {message}")


# =============================================================================
# Argument parsing
# =============================================================================

def _add_graph_arguments(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group()
    source.add_argument('--g6', help='Graph as a graph6 string')
    source.add_argument('--edges', metavar='FILE', help="Edge-list file ('n m' then 'u v' lines)")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog='escrit',
        description='Chromatic edge-stability, (k,l)-criticality and the (3,2)-critical families',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Is the bowtie (3,2)-critical?
  python escrit.py analyze --g6 'D{c' --expect-critical

  # Build a ring of three 4-cycles
  python escrit.py build 'E:4,1;4,1;4,1'

  # Verify the characterization on all graphs up to 7 vertices
  python escrit.py scan --n 7 --summary --progress

  # Scan an externally generated graph6 file
  python escrit.py scan --stream graphs8.g6 --workers 4
        """
    )
    parser.add_argument('--config', metavar='FILE', help='Configuration file (default: escrit_config.json)')
    parser.add_argument('-v', '--verbose', action='store_true', help='Debug diagnostics on stderr')
    commands = parser.add_subparsers(dest='command', required=True)

    analyze = commands.add_parser('analyze', help='Criticality report of a graph')
    _add_graph_arguments(analyze)
    analyze.add_argument('--cap', type=int, help='Odd-cycle census cap')
    analyze.add_argument('--expect-critical', action='store_true',
                         help='Exit 1 unless the graph is edge-stability critical')

    es = commands.add_parser('es', help='Chromatic number and edge-stability number')
    _add_graph_arguments(es)
    es.add_argument('--max-es', type=int, help='Largest edge set tried by subset search')

    build = commands.add_parser('build', help="Build a family member from a compact spec, e.g. 'C:1,2,2,3'")
    build.add_argument('spec', help="A:3,5 | B:3,3 | C:1,2,2,3 | D:i:1,1,1,1,1,3 | E:4,1;4,1;4,1 | E':4,1;p1;4,1")

    classify = commands.add_parser('classify', help='Structural family recognition')
    _add_graph_arguments(classify)

    scan = commands.add_parser('scan', help='Exhaustive check of the family characterization')
    target = scan.add_mutually_exclusive_group(required=True)
    target.add_argument('--n', type=int, help='Scan every labeled graph with n_min..N vertices')
    target.add_argument('--stream', metavar='FILE', help="graph6 file, one graph per line ('-' for stdin)")
    scan.add_argument('--n-min', type=int, default=1, help='Smallest vertex count for --n (default: 1)')
    scan.add_argument('--cap', type=int, help='Odd-cycle census cap')
    scan.add_argument('--workers', type=int, help='Worker processes (default: physical cores)')
    scan.add_argument('--chunk-size', type=int, help='Graphs per worker task')
    scan.add_argument('--skip-structure', action='store_true', help='Skip the odd-cycle structure checks')
    scan.add_argument('--summary', action='store_true', help='Print a summary table on stderr')
    scan.add_argument('--progress', action='store_true', help='Show a progress bar on stderr')

    ear = commands.add_parser('ear', help='Ear decomposition from a nonseparable seed')
    _add_graph_arguments(ear)
    ear.add_argument('--seed', required=True, help="Seed edges, e.g. '0-1,1-2,2-0'")
    return parser


# =============================================================================
# Input helpers
# =============================================================================

def _read_graph(args: argparse.Namespace, stdin: TextIO) -> Graph:
    if args.g6 is not None:
        return parse_graph6(args.g6)
    if args.edges is not None:
        try:
            with open(args.edges, 'r') as f:
                return parse_edge_list(f.read())
        except OSError as e:
            raise GraphFormatError(f"cannot read {args.edges}: {e}") from e
    text = stdin.read()
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines:
        raise GraphFormatError("no graph given: use --g6, --edges or stdin")
    if len(lines[0].split()) == 1:
        return parse_graph6(lines[0])
    return parse_edge_list(text)


def parse_seed(text: str) -> Subgraph:
    """'0-1,1-2,2-0' -> Subgraph"""
    edges = []
    try:
        for item in text.split(','):
            u, v = item.strip().split('-')
            edges.append((int(u), int(v)))
    except ValueError as e:
        raise GraphFormatError(f"seed must look like '0-1,1-2,2-0', got {text!r}") from e
    return Subgraph.from_edges(edges)


def _load_config(path: Optional[str]) -> None:
    if path is not None and not os.path.exists(path):
        raise ConfigError(f"config file {path} does not exist")
    manager = ConfigManager(path) if path is not None else ConfigManager()
    set_config(manager.config)


# =============================================================================
# Commands
# =============================================================================

def _cmd_analyze(args, stdin, stderr) -> CommandOutcome:
    report = criticality_report(_read_graph(args, stdin), cap=args.cap)
    if args.expect_critical and not report.critical:
        logger.info("Graph is not edge-stability critical")
        return CommandOutcome(EXIT_NEGATIVE, report.to_dict())
    return CommandOutcome(EXIT_OK, report.to_dict())


def _cmd_es(args, stdin, stderr) -> CommandOutcome:
    g = _read_graph(args, stdin)
    payload = edge_stability_number(g, max_es=args.max_es).to_dict()
    payload['graph6'] = to_graph6(g)
    return CommandOutcome(EXIT_OK, payload)


def _cmd_build(args, stdin, stderr) -> CommandOutcome:
    spec = FamilySpec.parse(args.spec)
    g = build_family(spec)
    return CommandOutcome(EXIT_OK, {'spec': spec.to_dict(), 'graph6': to_graph6(g), 'n': g.n, 'm': g.m})


def _cmd_classify(args, stdin, stderr) -> CommandOutcome:
    g = _read_graph(args, stdin)
    spec = recognize_family(g)
    return CommandOutcome(EXIT_OK, {
        'graph6': to_graph6(g),
        'tag': spec.tag if spec else None,
        'spec': spec.to_dict() if spec else None,
        'families': matching_families(g),
    })


def _cmd_scan(args, stdin, stderr) -> CommandOutcome:
    if args.stream is not None:
        if args.stream == '-':
            source = ScanSource.graph6(stdin.read().splitlines())
        else:
            try:
                with open(args.stream, 'r') as f:
                    source = ScanSource.graph6(f.read().splitlines())
            except OSError as e:
                raise GraphFormatError(f"cannot read {args.stream}: {e}") from e
    else:
        source = ScanSource.internal(args.n, args.n_min)
    options = ScanOptions(
        cap=args.cap,
        workers=args.workers,
        chunk_size=args.chunk_size,
        check_structure=not args.skip_structure,
        progress=args.progress,
    )
    report = theorem_scan(source, options)
    if args.summary:
        print(report.summary_table().to_string(), file=stderr)
    return CommandOutcome(EXIT_OK if report.ok else EXIT_NEGATIVE, report.to_dict())


def _cmd_ear(args, stdin, stderr) -> CommandOutcome:
    g = _read_graph(args, stdin)
    seed = parse_seed(args.seed)
    ears = ear_decomposition(g, seed)
    return CommandOutcome(EXIT_OK, {
        'graph6': to_graph6(g),
        'seed': [list(e) for e in sorted(seed.edges)],
        'ears': [list(ear.path) for ear in ears],
    })


COMMANDS = {
    'analyze': _cmd_analyze,
    'es': _cmd_es,
    'build': _cmd_build,
    'classify': _cmd_classify,
    'scan': _cmd_scan,
    'ear': _cmd_ear,
}


def execute(argv: List[str], stdin: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> CommandOutcome:
    stdin = stdin if stdin is not None else sys.stdin
    stderr = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except GraphFormatError as e:
        configure_logging(False, stderr)
        logger.error(str(e))
        return CommandOutcome(EXIT_USAGE)
    except SystemExit as e:
        # --help
        return CommandOutcome(e.code if isinstance(e.code, int) else EXIT_USAGE)

    configure_logging(args.verbose, stderr)
    try:
        _load_config(args.config)
        logger.debug(f"Config: {get_config().to_dict()}")
        return COMMANDS[args.command](args, stdin, stderr)
    except EscritError as e:
        logger.error(f"error: {e}")
        return CommandOutcome(EXIT_USAGE)


def run(argv: List[str], stdin: Optional[TextIO] = None, stdout: Optional[TextIO] = None,
        stderr: Optional[TextIO] = None) -> int:
    outcome = execute(argv, stdin, stderr)
    if outcome.payload is not None:
        print(json.dumps(outcome.payload, sort_keys=True, indent=2), file=stdout or sys.stdout)
    return outcome.exit_code


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
