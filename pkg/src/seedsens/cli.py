"""Command line entry point: ``seedsens sens | design | stats``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .automata import dump_dfa
from .design import ENDS, EnumSpec, automaton_stats, best_seed
from .errors import InputError, InvariantError, ResourceLimitError
from .oracle import brute_force_sensitivity
from .probmodel import parse_model
from .seeds import PRESETS, build_spi_automaton, parse_seed, parse_seed_alphabet, preset_for
from .sensitivity import MASS_TOLERANCE, compute_sensitivity, target_all_words

EXIT_INVARIANT = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3


def _fmt_weight(w: float) -> str:
    return str(int(w)) if w == int(w) else str(w)


def _flag(name: str, fn, *args):
    """Call ``fn`` and prefix input errors with the flag they came from."""
    try:
        return fn(*args)
    except InputError as exc:
        raise InputError(f"{name}: {exc}") from None


def _seed_alphabet(arg: str | None, alphabet):
    if arg is None:
        return _flag("--model", preset_for, alphabet)
    return _flag("--seed-alphabet", parse_seed_alphabet, arg, alphabet)


def _ends(args) -> str:
    return "any" if args.no_anchor else args.ends


def cmd_sens(args) -> int:
    g = _flag("--model", parse_model, args.model)
    seed_alphabet = _seed_alphabet(args.seed_alphabet, g.alphabet)
    seed = _flag("--seed", parse_seed, args.seed, seed_alphabet)
    target = _flag("--length", target_all_words, g.alphabet, args.length)
    result = compute_sensitivity(seed, target, g)
    print(f"{result.sensitivity:.6f}")
    if args.verbose:
        print(f"p_joint {result.p_joint:.12g}")
        print(f"p_target {result.p_target:.12g}")
        for key, value in result.diagnostics.items():
            print(f"{key} {value:.3g}" if isinstance(value, float) else f"{key} {value}")
    if args.dump_dfa:
        Path(args.dump_dfa).write_text(dump_dfa(build_spi_automaton(seed)))
    if args.oracle:
        try:
            reference = brute_force_sensitivity(seed, args.length, g)
        except ResourceLimitError as exc:
            print(f"oracle skipped: {exc}", file=sys.stderr)
        else:
            diff = abs(reference - result.sensitivity)
            print(f"oracle {reference:.6f} diff {diff:.1e}")
            if diff > MASS_TOLERANCE:
                raise InvariantError(f"oracle disagrees by {diff:.3g}")
    return 0


def cmd_design(args) -> int:
    g = _flag("--model", parse_model, args.model)
    seed_alphabet = _seed_alphabet(args.seed_alphabet, g.alphabet)
    if args.length < 1:
        raise InputError(f"--length: must be >= 1, got {args.length}")
    spec = EnumSpec(args.mode, args.weight, args.span_max, args.at, _ends(args))
    _, ranking = best_seed(
        spec, g, args.length, top=args.top, seed_alphabet=seed_alphabet,
        model_id=args.model, jobs=args.jobs,
    )
    sep = "\t" if args.tsv else " "
    for score in ranking:
        print(f"{score.seed}{sep}{score.sensitivity:.6f}")
    return 0


def cmd_stats(args) -> int:
    if (args.span_max is None) == (args.span_offset is None):
        raise InputError("give exactly one of --span-max and --span-offset")
    seed_alphabet = None
    if args.seed_alphabet:
        seed_alphabet = _flag("--seed-alphabet", parse_seed_alphabet, args.seed_alphabet)
    rows = []
    for w in args.weight:
        span_max = args.span_max if args.span_max is not None else int(w) + args.span_offset
        spec = EnumSpec(args.mode, w, span_max, args.at, _ends(args))
        rows.append((span_max, automaton_stats(spec, seed_alphabet, jobs=args.jobs)))
    if args.tsv:
        for _, r in rows:
            print(f"{_fmt_weight(r.weight)}\t{r.ac_avg:.2f}\t{r.spi_avg:.2f}\t{r.min_avg:.2f}")
        return 0
    header = ("w", "span", "seeds", "AC avg", "delta", "S_pi avg", "delta", "min avg")
    body = [
        (
            _fmt_weight(r.weight), str(span), str(r.seeds), f"{r.ac_avg:.2f}", f"{r.ac_ratio:.2f}",
            f"{r.spi_avg:.2f}", f"{r.spi_ratio:.2f}", f"{r.min_avg:.2f}",
        )
        for span, r in rows
    ]
    widths = [max(len(line[i]) for line in [header, *body]) for i in range(len(header))]
    for line in [header, *body]:
        print("  ".join(cell.rjust(width) for cell, width in zip(line, widths)))
    return 0


def _add_enum_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=("spaced", "subset"), required=True)
    p.add_argument("--at", type=int, default=2, help="number of '@' letters in subset mode (default 2)")
    p.add_argument("--ends", choices=ENDS, default="#",
                   help="first/last letter rule: '#', 'solid' (not '_') or 'any' (default '#')")
    p.add_argument("--no-anchor", action="store_true", help="same as --ends any")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    p.add_argument("--tsv", action="store_true", help="tab-separated output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="seedsens", description="Spaced and subset seed sensitivity.")
    parser.add_argument("--log-level", default="WARNING", help="logging level (default WARNING)")
    sub = parser.add_subparsers(dest="command", required=True)

    presets = ", ".join(PRESETS)
    p = sub.add_parser("sens", help="sensitivity of one seed")
    p.add_argument("--seed", required=True, help="seed glyph string, e.g. '##@#'")
    p.add_argument("--model", required=True, help="model file or bernoulli:p1,ph,p0")
    p.add_argument("--length", type=int, required=True, help="target alignment length")
    p.add_argument("--seed-alphabet", help=f"glyph=symbols;... or a preset ({presets}); "
                   "default: the preset over the model alphabet")
    p.add_argument("--oracle", action="store_true", help="cross-check by brute-force enumeration")
    p.add_argument("--verbose", action="store_true", help="print probabilities and state counts")
    p.add_argument("--dump-dfa", metavar="PATH", help="write the seed automaton to PATH")
    p.set_defaults(func=cmd_sens)

    p = sub.add_parser("design", help="rank all seeds of a given weight")
    _add_enum_flags(p)
    p.add_argument("--weight", type=float, required=True, help="design weight ('#'=1, '@'=0.5)")
    p.add_argument("--span-max", type=int, required=True)
    p.add_argument("--model", required=True, help="model file or bernoulli:p1,ph,p0")
    p.add_argument("--length", type=int, default=64, help="target alignment length (default 64)")
    p.add_argument("--top", type=int, default=1, help="number of seeds to print (default 1)")
    p.add_argument("--seed-alphabet", help="as for 'sens'")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("stats", help="average automaton sizes over an enumeration")
    _add_enum_flags(p)
    p.add_argument("--weight", type=float, nargs="+", required=True, help="one or more design weights")
    p.add_argument("--span-max", type=int, help="largest span, the same for every weight")
    p.add_argument("--span-offset", type=int, help="largest span as int(weight) + offset")
    p.add_argument("--seed-alphabet", help=f"glyph=symbols;... or a preset ({presets}); default by mode")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "top", 1) < 1 or getattr(args, "jobs", 1) < 1:
        print("error: --top and --jobs must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except InvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
