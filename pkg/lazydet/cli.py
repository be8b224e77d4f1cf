# lazydet/cli.py
"""Batch front end: load a model and a specification, print the probability."""

import argparse
import json
import logging
import sys
from typing import List, Optional, Union

from .automata import DeterministicAutomaton, NGBA
from .breakpoint import build_breakpoint
from .config import config
from .engine import model_check
from .exceptions import ConvergenceError, InputError
from .ght import RabinDeterminisation
from .hoa import hoa_emit, hoa_parse
from .ltl import parse_ltl, translate_ltl_to_ngba
from .models import load_model
from .semidet import build_semidet, determinise_parity
from .subset import build_subset

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CONVERGENCE = 3

EXPORTS = ('ngba', 'subset', 'breakpoint', 'rabin', 'parity')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='pmc',
        description="Probability that a Markov chain or MDP satisfies an LTL formula "
                    "or a generalized Büchi automaton, by lazy determinisation")
    parser.add_argument('--model', help="explicit transition file")
    parser.add_argument('--labels', help="state label file")
    parser.add_argument('--kind', choices=('mc', 'mdp'), default='mc', help="model type (default: mc)")
    spec = parser.add_mutually_exclusive_group(required=True)
    spec.add_argument('--ltl', help="LTL formula")
    spec.add_argument('--hoa', help="automaton file in HOA format")
    parser.add_argument('--mode', choices=('exact', 'max', 'min'),
                        help="exact for chains, max (default) or min for MDPs")
    parser.add_argument('--engine', choices=('lazy', 'rabin-oracle'), default='lazy')
    parser.add_argument('--fallback', choices=('multibreakpoint', 'rabin'),
                        help="layer deciding components the breakpoint layer leaves open")
    parser.add_argument('--tolerance', type=float, help="solver convergence threshold")
    parser.add_argument('--max-iterations', type=int, help="solver iteration limit")
    parser.add_argument('--threads', type=int, help="components decided in parallel")
    parser.add_argument('--no-cache', action='store_true', help="disable witness caching")
    parser.add_argument('--stats', action='store_true', help="print per-layer component counts")
    parser.add_argument('--format', choices=('plain', 'json'), default='plain', dest='output_format')
    parser.add_argument('--log-level', help="logging level (default: PMC_LOG_LEVEL or WARNING)")
    parser.add_argument('--export', choices=EXPORTS,
                        help="print the named automaton for the specification in HOA and exit")
    return parser


def settings_from(args: argparse.Namespace):
    overrides = {}
    if args.tolerance is not None:
        overrides['SOLVER_TOLERANCE'] = args.tolerance
    if args.max_iterations is not None:
        overrides['MAX_ITERATIONS'] = args.max_iterations
    if args.threads is not None:
        overrides['THREADS'] = max(1, args.threads)
    if args.fallback is not None:
        overrides['FALLBACK'] = args.fallback
    if args.no_cache:
        overrides['USE_CACHE'] = False
    base = config['default']
    return base.override(**overrides) if overrides else base


def _read(path: str) -> str:
    try:
        with open(path, encoding='utf-8') as handle:
            return handle.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from e


def load_spec(args: argparse.Namespace):
    if args.ltl is not None:
        return parse_ltl(args.ltl)
    return hoa_parse(_read(args.hoa))


def export_automaton(spec, name: str) -> str:
    if isinstance(spec, DeterministicAutomaton):
        if name != 'ngba':
            raise InputError(f"--export {name} needs a nondeterministic specification")
        return hoa_emit(spec)
    ngba: NGBA = spec if isinstance(spec, NGBA) else translate_ltl_to_ngba(spec)
    if name == 'ngba':
        return hoa_emit(ngba, name='ngba')
    if name == 'subset':
        return hoa_emit(build_subset(ngba).as_deterministic(under=True), name='subset')
    if name == 'breakpoint':
        return hoa_emit(build_breakpoint(ngba).as_rabin(over=True), name='breakpoint')
    if name == 'rabin':
        return hoa_emit(RabinDeterminisation(ngba).automaton, name='rabin')
    return hoa_emit(determinise_parity(build_semidet(ngba)), name='parity')


def _optimize(mode: Optional[str], is_mdp: bool) -> Optional[str]:
    if mode is None:
        return 'max' if is_mdp else None
    if mode == 'exact':
        if is_mdp:
            raise InputError("--mode exact is only defined for Markov chains; use max or min")
        return None
    return mode


def render(result, output_format: str, stats: bool) -> str:
    if output_format == 'json':
        return json.dumps(result.to_dict(), sort_keys=False)
    lines = [format(result.probability, '.17g')]
    if stats and result.statistics is not None:
        lines.append(result.statistics.format_table())
    return '\n'.join(lines)


def run_cli(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INPUT

    level = (args.log_level or config['default'].LOG_LEVEL).upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')

    try:
        spec: Union[object, NGBA, DeterministicAutomaton] = load_spec(args)
        if args.export:
            print(export_automaton(spec, args.export), end='')
            return EXIT_OK

        if not args.model or not args.labels:
            parser.print_usage(sys.stderr)
            raise InputError("--model and --labels are required unless --export is given")
        settings = settings_from(args)
        model = load_model(args.model, args.labels, args.kind, settings)
        optimize = _optimize(args.mode, model.is_mdp)
        result = model_check(model, spec, args.engine, settings, optimize)
    except InputError as e:
        logging.error(str(e))
        print(f"pmc: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ConvergenceError as e:
        logging.error(str(e))
        print(f"pmc: error: {e}", file=sys.stderr)
        return EXIT_CONVERGENCE

    print(render(result, args.output_format, args.stats))
    return EXIT_OK


def main() -> None:
    sys.exit(run_cli())
