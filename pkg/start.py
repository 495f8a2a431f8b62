# import common packages

import argparse
import sys
from typing import Callable, Iterable, List, MutableMapping, Optional

# import config file and apply configuration
import vlcconfig
import logger
from codebook import load_codebook, require_valid, write_codebook, format_codebook
from codebuilder import search_codebooks
from corpus import blocks_from_file, pattern_histogram
from costmodel import cost_model, format_frequency_table, read_frequency_table, write_frequency_table
from evaluation import EvalOptions, parse_codecs, run_eval
from genericclasses import Block, DataError
from setup_corpus import SetupCorpus, parse_distribution
from treeshapes import DepthConstraint, count_shapes, enumerate_shapes
from vlccodec import block_write_cost, decode_block, encode_blocks, read_encoded_file, write_encoded_file

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_IO = 3


class ArgumentParser(argparse.ArgumentParser):
    """argparse exits with 2 on bad arguments; here 2 means bad data, so usage errors exit with 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> ArgumentParser:
    """ use argparse to handle command line arguments"""
    common = ArgumentParser(add_help=False)
    common.add_argument("--alpha0", help="cost of writing a 0 bit, decimal string (default 2)")
    common.add_argument("--alpha1", help="cost of writing a 1 bit, decimal string (default 1)")
    common.add_argument("--symbol-bits", type=int, choices=[2, 4], help="width of a data word (default 4)")
    common.add_argument("--min-len", type=int, help="shortest codeword length (default 3)")
    common.add_argument("--max-len", type=int, help="longest codeword length (default 5)")
    common.add_argument("--block-size", type=int, help="block size in bytes (default 64)")
    common.add_argument("--fnw-word-bits", type=int, choices=[4, 8, 16, 32], help="FNW word size (default 8)")
    common.add_argument("--flag-policy", choices=["include", "exclude"],
                        help="whether the dirty bit and FNW flags are costed (default include)")
    common.add_argument("--cost-fallback", action="store_true",
                        help="store a block encoded only if that is also strictly cheaper to write than raw")
    common.add_argument("--codebook", help="codebook file, 'table1' for the built-in code, or 'auto' (eval only) "
                                           "to build one from the corpus")
    common.add_argument("--codecs", help="comma separated codecs: vlc,fnw,fpc,bdi,fpc+bdi,raw")
    common.add_argument("--workers", type=int, help="worker processes (default 1)")
    common.add_argument("--synthetic", help="use a synthetic corpus instead of a file, e.g. zero-heavy:0.55")
    common.add_argument("--synthetic-blocks", type=int, help="number of synthetic blocks (default 10000)")
    common.add_argument("--randomseed", type=int, help="seed of the synthetic corpus")
    common.add_argument("--full-log", action="store_true", help="also write the per-block cost log of eval")
    common.add_argument("-p", "--showprogress", action="store_true", help="show progress")
    common.add_argument("-v", "--verbose", action="store_true", help="more detailed output")

    parser = ArgumentParser(description="Cost-optimal variable-length codes for memories with asymmetric write costs")
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    analyze = commands.add_parser("analyze", parents=[common], help="data word frequency table of a corpus")
    analyze.add_argument("corpus", nargs="?", help="binary corpus or .trace file")
    analyze.add_argument("-o", "--output", help="frequency table file (default stdout)")

    build = commands.add_parser("build-code", parents=[common], help="cheapest code for a frequency table")
    build.add_argument("freqs", nargs="?", help="frequency table file (or use --synthetic for an exact table)")
    build.add_argument("-o", "--output", help="codebook file (default stdout)")
    build.add_argument("--top", type=int, default=0, help="also list the N cheapest code trees")

    encode = commands.add_parser("encode", parents=[common], help="encode a corpus into an encoded block file")
    encode.add_argument("corpus", nargs="?", help="binary corpus or .trace file")
    encode.add_argument("-o", "--output", required=True, help="encoded block file")

    decode = commands.add_parser("decode", parents=[common], help="decode an encoded block file")
    decode.add_argument("encoded", help="encoded block file")
    decode.add_argument("-o", "--output", required=True, help="decoded binary file")

    evaluate = commands.add_parser("eval", parents=[common], help="compare write costs of the codecs")
    evaluate.add_argument("corpus", nargs="?", help="binary corpus or .trace file")
    evaluate.add_argument("--report", help="report file (default stdout)")
    evaluate.add_argument("--format", choices=list(logger.REPORT_FORMATS), default="csv", help="report format")
    evaluate.add_argument("--chart", help="codec,normalized_cost data file")
    evaluate.add_argument("--plot", help="bar chart image of the normalized costs")

    shapes = commands.add_parser("shapes", parents=[common], help="list or count code tree shapes")
    shapes.add_argument("--leaves", type=int, help="number of leaves (default 2^symbol-bits)")
    shapes.add_argument("--count-only", action="store_true", help="print only the number of shapes")
    return parser


def apply_overrides(args: argparse.Namespace) -> MutableMapping:
    """Run parameters: the config defaults with every flag given on the command line applied."""
    parameters = dict(vlcconfig.evaluation_parameters)
    overrides = {"alpha0": args.alpha0, "alpha1": args.alpha1, "symbol_bits": args.symbol_bits,
                 "min_len": args.min_len, "max_len": args.max_len, "block_bytes": args.block_size,
                 "fnw_word_bits": args.fnw_word_bits, "flag_policy": args.flag_policy, "codecs": args.codecs,
                 "workers": args.workers, "synthetic_blocks": args.synthetic_blocks, "random_seed": args.randomseed}
    for key, value in overrides.items():
        if value is not None:
            parameters[key] = value
    if args.cost_fallback:
        parameters["cost_fallback"] = True
    if parameters["workers"] < 1:
        raise ValueError(f"--workers must be at least 1, got {parameters['workers']}")
    if args.showprogress:
        vlcconfig.showprogress = True
    if args.verbose:
        vlcconfig.verbose = True
    if args.full_log:
        vlcconfig.slim_log = False
    return parameters


def corpus_source(args: argparse.Namespace, parameters: MutableMapping) -> Callable[[], Iterable[Block]]:
    """A function returning a fresh pass over the corpus named on the command line."""
    if args.synthetic:
        setup = SetupCorpus(args.synthetic, parameters["random_seed"], parameters["block_bytes"])
        blocks = setup.random_blocks(parameters["synthetic_blocks"])
        return lambda: iter(blocks)
    if not getattr(args, "corpus", None):
        raise ValueError("a corpus file or --synthetic is required")
    path = args.corpus
    return lambda: blocks_from_file(path, parameters["block_bytes"])


def length_constraint(parameters: MutableMapping) -> DepthConstraint:
    return DepthConstraint(parameters["min_len"], parameters["max_len"])


def write_text(path: Optional[str], text: str) -> None:
    if path is None:
        print(text, end="")
    else:
        with open(path, "w") as wfile:
            wfile.write(text)


def command_analyze(args, parameters) -> None:
    table = pattern_histogram(corpus_source(args, parameters)(), parameters["symbol_bits"], parameters["workers"])
    source = args.synthetic or args.corpus
    header = f"{parameters['symbol_bits']}-bit data word frequencies of {source}"
    if args.output is None:
        print(format_frequency_table(table, header), end="")
    else:
        write_frequency_table(args.output, table, header)


def command_build_code(args, parameters) -> None:
    if args.synthetic:
        freqs = parse_distribution(args.synthetic)
    elif args.freqs:
        freqs = read_frequency_table(args.freqs, args.symbol_bits)
    else:
        raise ValueError("a frequency table file or --synthetic is required")
    model = cost_model(parameters["alpha0"], parameters["alpha1"])
    result = search_codebooks(freqs, model, length_constraint(parameters), top=args.top,
                              workers=parameters["workers"])
    stats = result.stats
    header = "\n".join([
        f"{model} codeword lengths {parameters['min_len']}-{parameters['max_len']}",
        f"expected cost {stats.expected_cost} ({float(stats.expected_cost):.6f}) zeros {stats.expected_zeros} "
        f"ones {stats.expected_ones} length {stats.expected_length}",
        f"tree {result.shape.notation()} (shape {result.index} of {result.shapes_evaluated})",
    ])
    if args.output is None:
        print(format_codebook(result.codebook, header), end="")
    else:
        write_codebook(args.output, result.codebook, header)
    for rank, candidate in enumerate(result.candidates, start=1):
        print(f"{rank} {candidate.expected_cost} ({float(candidate.expected_cost):.6f}) "
              f"shape {candidate.index} {candidate.shape.notation()}")


def command_encode(args, parameters) -> None:
    if not args.codebook:
        raise ValueError("--codebook is required")
    book = require_valid(load_codebook(args.codebook))
    model = cost_model(parameters["alpha0"], parameters["alpha1"])
    encoded = list(encode_blocks(corpus_source(args, parameters)(), book, model, parameters["flag_policy"],
                                 parameters["cost_fallback"]))
    write_encoded_file(args.output, encoded)
    if vlcconfig.verbose:
        fallbacks = sum(not e.encoded for e in encoded)
        cost = sum(block_write_cost(e, model, parameters["flag_policy"]).total_cost for e in encoded)
        print(f"Encoded {len(encoded)} blocks ({fallbacks} stored raw), write cost {cost}")


def command_decode(args, parameters) -> None:
    if not args.codebook:
        raise ValueError("--codebook is required")
    book = require_valid(load_codebook(args.codebook))
    encoded = read_encoded_file(args.encoded, parameters["block_bytes"])
    with open(args.output, "wb") as wfile:
        for enc in encoded:
            wfile.write(decode_block(enc, book).payload)
    if vlcconfig.verbose:
        print(f"Decoded {len(encoded)} blocks")


def command_eval(args, parameters) -> None:
    codecs = parse_codecs(parameters["codecs"])
    model = cost_model(parameters["alpha0"], parameters["alpha1"])
    source = corpus_source(args, parameters)
    book = None
    if args.codebook == "auto":
        freqs = pattern_histogram(source(), 4, parameters["workers"])
        book = search_codebooks(freqs, model, length_constraint(parameters), workers=parameters["workers"]).codebook
    elif args.codebook:
        book = load_codebook(args.codebook)
    options = EvalOptions.from_config(fnw_word_bits=parameters["fnw_word_bits"],
                                      flag_policy=parameters["flag_policy"],
                                      cost_fallback=parameters["cost_fallback"], workers=parameters["workers"],
                                      chunk_blocks=parameters["chunk_blocks"])
    report = run_eval(source(), codecs, model, book, options)
    log = logger.Logger(args.report, args.format, args.chart)
    log.record_report(report)
    log.save_log()
    if args.plot:
        from visualisation import NormalizedCostChart

        NormalizedCostChart(report).save(args.plot)


def command_shapes(args, parameters) -> None:
    leaves = args.leaves if args.leaves is not None else 1 << parameters["symbol_bits"]
    constraint = None
    if args.min_len is not None or args.max_len is not None:
        constraint = DepthConstraint(args.min_len or 1, args.max_len or max(1, leaves - 1))
    if args.count_only:
        print(count_shapes(leaves, constraint))
        return
    lines: List[str] = [shape.notation() for shape in enumerate_shapes(leaves, constraint)]
    write_text(None, "".join(line + "\n" for line in lines))


COMMANDS = {
    "analyze": command_analyze,
    "build-code": command_build_code,
    "encode": command_encode,
    "decode": command_decode,
    "eval": command_eval,
    "shapes": command_shapes,
}


# main function
def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        parameters = apply_overrides(args)
        COMMANDS[args.command](args, parameters)
    except DataError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DATA
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_IO
    except ValueError as err:
        print(f"{parser.prog}: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


# main entry point
if __name__ == "__main__":
    sys.exit(main())
