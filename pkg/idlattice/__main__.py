import argparse
import logging
import sys
from time import perf_counter
from typing import List, Optional

from idlattice import api
from idlattice.constructors.familyspec import family_names
from idlattice.settings import Settings
from idlattice.verification.theorems import SUITES


def _tolerance_override(text: str):
    name, sep, value = text.partition('=')
    if not sep:
        raise argparse.ArgumentTypeError(f'Expected NAME=VALUE, got "{text}"')
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f'Tolerance value must be a number, got "{value}"')


def _add_input_arguments(parser: argparse.ArgumentParser):
    parser.add_argument('pmf_file', metavar='<pmf-file>', nargs='?', help='JSON file with truncation, probs and '
                                                                          'tail_bound')
    parser.add_argument('--family', metavar='<name:args>',
                        help=f'Named family instead of a file. Families: {", ".join(family_names())}')


class _ArgumentParser(argparse.ArgumentParser):
    # Malformed command lines are input errors, like unreadable files
    def error(self, message: str):
        print(f'error: {message}', file=sys.stderr)
        sys.exit(api.EXIT_INPUT_ERROR)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog='python -m idlattice',
        description='Infinite divisibility with integer-valued components of laws on the non-negative integers',
    )
    parser.add_argument('--settings', metavar='<settings-file>', help='JSON file with settings')
    parser.add_argument('--truncation', type=int, help='Largest index stored for named families (default 256)')
    parser.add_argument('--tolerance', type=_tolerance_override, action='append', default=[],
                        metavar='NAME=VALUE', help='Override a numerical threshold, e.g. negativity=1e-10')
    parser.add_argument('--seed', type=int, help='Seed of the verification sweeps')
    parser.add_argument('--json', action='store_true', help='Machine-readable JSON output')
    parser.add_argument('-v', '--verbose', action='store_true', help='Debug logging')
    commands = parser.add_subparsers(dest='command', required=True)

    _add_input_arguments(commands.add_parser('test-id', help='Decide infinite divisibility'))
    _add_input_arguments(commands.add_parser('factorize', help='Compound Poisson form'))

    root = commands.add_parser('root', help='n-th convolution root')
    root.add_argument('n', type=int, help='Root order')
    _add_input_arguments(root)
    root.add_argument('-o', '--output', metavar='<output-file>', help='Write the root as a pmf file')

    support = commands.add_parser('support', help='Atoms, gaps and lattice of the support')
    _add_input_arguments(support)
    support.add_argument('--horizon', type=int, help='Largest index examined')

    compose = commands.add_parser('compose', help='Compound Poisson law from a rate and a jump law')
    compose.add_argument('--rate', type=float, required=True, help='Poisson rate')
    _add_input_arguments(compose)
    compose.add_argument('-o', '--output', metavar='<output-file>', help='Write the law as a pmf file')

    verify = commands.add_parser('verify', help='Run verification suites')
    verify.add_argument('suites', nargs='+', choices=list(SUITES) + ['all'], metavar='<suite>',
                        help=f'One or more of {", ".join(SUITES)}, or all')
    return parser


def _settings(args: argparse.Namespace) -> Settings:
    settings = Settings.from_source(args.settings)
    if args.truncation is not None:
        settings.truncation = args.truncation
    if args.tolerance:
        settings.tolerances = settings.tolerances.updated(**dict(args.tolerance))
    if args.seed is not None:
        settings.seed = args.seed
    return settings


def _run(args: argparse.Namespace, settings: Settings):
    if args.command == 'test-id':
        return api.cmd_test_id(args.pmf_file, args.family, settings)
    if args.command == 'factorize':
        return api.cmd_factorize(args.pmf_file, args.family, settings)
    if args.command == 'root':
        return api.cmd_root(args.pmf_file, args.family, args.n, args.output, settings)
    if args.command == 'support':
        return api.cmd_support(args.pmf_file, args.family, args.horizon, settings)
    if args.command == 'compose':
        return api.cmd_compose(args.rate, args.pmf_file, args.family, args.output, settings)
    return api.cmd_verify(args.suites, settings, show_progress=not args.json)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s')
    t0 = perf_counter()
    try:
        settings = _settings(args)
        report, code = _run(args, settings)
    except (ValueError, OSError) as e:
        # IdLatticeError, unknown tolerance names and malformed settings files
        print(f'error: {e}', file=sys.stderr)
        return api.EXIT_INPUT_ERROR
    print(api.render(report, args.json))
    logging.getLogger(__name__).debug('Completed in %.3f s', perf_counter() - t0)
    return code


if __name__ == '__main__':
    sys.exit(main())
