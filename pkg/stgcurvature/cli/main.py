from __future__ import annotations

import logging
from argparse import ArgumentParser
from typing import Sequence

from .._metadata import __doc__ as description, __version__
from ..enums import VerifySuite
from .commands import EXIT_INVALID, cmd_grid_info, cmd_solve
from .verify import cmd_verify

__all__ = [
    'build_parser', 'main'
]


def build_parser() -> ArgumentParser:
    parser = ArgumentParser('stgcurvature', description=description)

    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('-v', '--verbose', action='store_true', help='log every iteration')

    commands = parser.add_subparsers(dest='command', required=True)

    solve = commands.add_parser('solve', help='minimize the quotient for a JSON problem config')
    solve.add_argument('config', help='path of the JSON config')

    verify = commands.add_parser('verify', help='run a verification suite')
    verify.add_argument('suite', help=f'one of: {", ".join(str(s) for s in VerifySuite)}')
    verify.add_argument('--report', default=None, help='also write the checks as JSON to this path')

    grid_info = commands.add_parser('grid-info', help='describe a sphere grid')
    grid_info.add_argument('n', type=int)
    grid_info.add_argument('resolution', type=int)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()

    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # --help and --version exit with 0; usage errors map to the invalid-input code
        return EXIT_INVALID if e.code else 0

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO, format='%(levelname)s %(name)s: %(message)s'
    )

    if args.command == 'solve':
        return cmd_solve(args.config)

    if args.command == 'verify':
        return cmd_verify(args.suite, args.report)

    return cmd_grid_info(args.n, args.resolution)
