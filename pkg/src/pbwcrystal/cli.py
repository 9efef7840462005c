import argparse
import logging
import os
import re
import sys
import time

from pbwcrystal import crystal
from pbwcrystal.bracketing import canonical_word, f_bracket, plan
from pbwcrystal.config_schema import SUITES, load_config
from pbwcrystal.lusztig import datum_to_json, kostant_lines, kostant_parts, load_datum, parse_kostant
from pbwcrystal.report import VerificationReport
from pbwcrystal.rootsys import TypeRank, as_root_system
from pbwcrystal.verify import run_verification
from pbwcrystal.weyl import convex_order, format_word, lex_order, longest_word, parse_word

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY_FAILED = 2
EXIT_NULL = 3

_OP = re.compile(r"^(fstar|estar|f|e)(\d+)$")


class ArgumentParser(argparse.ArgumentParser):
    '''argparse with usage errors exiting 1.'''

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class NullResult(Exception):
    '''An e_i or e*_i step fell off the crystal.'''


def setup_logger(output_folder=None, level="INFO"):
    logger = logging.getLogger("pbwcrystal")
    logger.setLevel(level)
    formatter = logging.Formatter('%(asctime)s - %(levelname)s - %(message)s')

    # Ensure we don't add multiple handlers on rerun
    if logger.hasHandlers():
        logger.handlers.clear()

    if output_folder:
        os.makedirs(output_folder, exist_ok=True)
        fh = logging.FileHandler(os.path.join(output_folder, "run.log"))
        fh.setLevel(level)
        fh.setFormatter(formatter)
        logger.addHandler(fh)

    # stderr, stdout carries command output only
    ch = logging.StreamHandler(sys.stderr)
    ch.setLevel(level)
    ch.setFormatter(formatter)
    logger.addHandler(ch)
    return logger


def _type_rank(args):
    return TypeRank(args.type.upper(), args.rank)


def _order_from_args(args):
    tr = _type_rank(args)
    if args.word and args.enum:
        raise ValueError("give either --word or --enum, not both")
    if args.word:
        return convex_order(tr, parse_word(args.word))
    if args.enum:
        return lex_order(tr, parse_word(args.enum))
    if tr.is_classical:
        return canonical_word(tr)
    return convex_order(tr, longest_word(tr))


def parse_ops(tokens):
    '''"f2 e1 fstar3" (or the same split over several tokens) -> [("f", 2), ("e", 1), ("fstar", 3)].'''
    ops = []
    for token in " ".join(tokens).replace(",", " ").split():
        match = _OP.match(token)
        if match is None:
            raise ValueError(f"cannot parse operator {token!r}, expected e.g. f2, e1, fstar3, estar1")
        ops.append((match.group(1), int(match.group(2))))
    return ops


def apply_ops(d, ops, bracket=False, node_cap=None):
    logger = logging.getLogger("pbwcrystal")
    for name, i in ops:
        if i not in d.system.nodes:
            raise ValueError(f"operator {name}{i} names a node outside 1..{d.system.rank}")
        p = plan(d.order, i, node_cap=node_cap) if bracket and name == "f" else None
        if p is not None:
            result = f_bracket(i, d, p)
        else:
            if bracket and name == "f":
                logger.info(f"({format_word(d.order.word)}) is not simply braided for {i}; using transport")
            result = crystal.OPERATORS[name](i, d)
        if result is None:
            raise NullResult(f"{name}{i} of {d} is null")
        d = result
    return d


def cmd_order(args, config):
    order = _order_from_args(args)
    if args.show_word:
        print(format_word(order.word))
    print(order)
    return EXIT_OK


def cmd_apply(args, config):
    d = load_datum(args.datum)
    try:
        d = apply_ops(d, parse_ops(args.ops), bracket=args.bracket,
                      node_cap=config.Search_Parameters.node_cap)
    except NullResult as err:
        print(f"null: {err}", file=sys.stderr)
        return EXIT_NULL
    if args.format == "kostant":
        for line in kostant_lines(d):
            print(line)
    else:
        print(datum_to_json(d))
    return EXIT_OK


def cmd_graph(args, config):
    order = _order_from_args(args)
    graph = crystal.crystal_graph(order.system, order.word, args.depth)
    fmt = args.format or config.Output_Parameters.graph_format
    text = crystal.graph_to_dot(graph) if fmt == "dot" else crystal.graph_to_json(graph)
    if args.output:
        with open(args.output, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args, config):
    params = config.Verification_Parameters
    updates = {key: value for key, value in (("seed", args.seed), ("samples", args.samples),
                                             ("max_count", args.max_count), ("workers", args.workers))
               if value is not None}
    params = params.model_copy(update=updates)
    if args.type:
        if args.rank is None:
            raise ValueError("--type needs --rank")
        targets = [str(_type_rank(args))]
    else:
        targets = params.targets
    for target in targets:
        as_root_system(target)
    suites = list(SUITES) if args.suite == "all" else [args.suite]
    results = run_verification(suites, targets, params, config.Search_Parameters.node_cap)
    report = VerificationReport(results)
    sys.stdout.write(report.render())
    report_path = args.report or config.Output_Parameters.report_path
    if report_path:
        report.write_csv(report_path)
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def cmd_kostant(args, config):
    if args.parse:
        if not args.type or args.rank is None:
            raise ValueError("--parse needs --type and --rank")
        with open(args.parse) as f:
            d = parse_kostant(f.read(), _order_from_args(args))
        print(datum_to_json(d))
        return EXIT_OK
    if not args.datum:
        raise ValueError("give a datum file, or --parse with a partition file")
    d = load_datum(args.datum)
    lines = kostant_parts(d) if args.parts else kostant_lines(d)
    for line in lines:
        print(line)
    return EXIT_OK


def _add_type_flags(parser, required=True):
    parser.add_argument("--type", type=str, required=required,
                        help="Cartan type letter, A to F (G2 is not supported).")
    parser.add_argument("--rank", type=int, required=required, help="Rank of the type.")


def _add_order_flags(parser, required=True):
    _add_type_flags(parser, required=required)
    parser.add_argument("--word", type=str, default="", help="Reduced word of w0, e.g. 1,2,1.")
    parser.add_argument("--enum", type=str, default="", help="Enumeration of the nodes for a lex order.")


def build_parser():
    parser = ArgumentParser(prog="pbwcrystal", description="Crystal operators on Lusztig data.")
    parser.add_argument("--config", type=str, default=None, help="Path to the YAML configuration file.")
    parser.add_argument("--log-level", type=str, default="INFO",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Logging level.")
    parser.add_argument("--log-dir", type=str, default="", help="Directory for run.log.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("order", help="Print the convex order of a word or enumeration.")
    _add_order_flags(p)
    p.add_argument("--show-word", action="store_true", default=False, help="Also print the word.")
    p.set_defaults(handler=cmd_order)

    p = sub.add_parser("apply", help="Apply crystal operators to a datum file.")
    p.add_argument("datum", type=str, help="Datum JSON file.")
    p.add_argument("ops", nargs="*", help="Operators applied left to right, e.g. f2 e1 fstar3.")
    p.add_argument("--bracket", action="store_true", default=False, help="Compute f_i by the bracketing rule.")
    p.add_argument("--format", choices=["json", "kostant"], default="json", help="Output format.")
    p.set_defaults(handler=cmd_apply)

    p = sub.add_parser("graph", help="Export the crystal graph near the zero datum.")
    _add_order_flags(p)
    p.add_argument("--depth", type=int, default=2, help="Number of lowering steps from zero.")
    p.add_argument("--format", choices=["dot", "json"], default=None, help="Output format.")
    p.add_argument("--output", type=str, default="", help="Output file, stdout when empty.")
    p.set_defaults(handler=cmd_graph)

    p = sub.add_parser("verify", help="Run the verification suites.")
    p.add_argument("--suite", choices=list(SUITES) + ["all"], default="all", help="Suite to run.")
    _add_type_flags(p, required=False)
    p.add_argument("--seed", type=int, default=None, help="Random seed for reproducibility.")
    p.add_argument("--samples", type=int, default=None, help="Random samples per type.")
    p.add_argument("--max-count", type=int, default=None, help="Count bound for exhaustive sweeps.")
    p.add_argument("--workers", type=int, default=None, help="Worker processes.")
    p.add_argument("--report", type=str, default="", help="CSV report path.")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("kostant", help="Print the Kostant partition of a datum file, or read one back.")
    p.add_argument("datum", type=str, nargs="?", default="", help="Datum JSON file.")
    _add_order_flags(p, required=False)
    p.add_argument("--parse", type=str, default="",
                   help="Partition text (kostant output) to turn into a datum on the order of the flags.")
    p.add_argument("--parts", action="store_true", default=False, help="Print one part per line.")
    p.set_defaults(handler=cmd_kostant)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logger = setup_logger(args.log_dir, args.log_level)
    logger.info(f"=== pbwcrystal {args.command} ===")
    try:
        start_time = time.time()
        config = load_config(args.config)
        code = args.handler(args, config)
        logger.info(f"{args.command} finished in {time.time() - start_time:.2f} seconds.")
        return code
    except (ValueError, OSError) as e:
        print(f"pbwcrystal: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception:
        logger.exception(f"{args.command} failed with an unexpected error.")
        raise


if __name__ == "__main__":
    sys.exit(main())
