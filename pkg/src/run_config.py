"""Command-line configuration: argument parsing and validation into a RunConfig"""

import argparse
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Tuple

from config.config import get_config
from .errors import UsageError
from .utils.validators import parse_float_list, parse_grid

COMMANDS = (
    'sample', 'dim', 'quadric', 'member', 'fiber', 'coclassify',
    'tiling', 'covolume', 'avolume', 'fibercount', 'certify',
)
OUTPUT_FORMATS = ('csv', 'json', 'svg')

_FLAG_PATTERN = re.compile(r'(--[A-Za-z][\w-]*)')


@dataclass(frozen=True)
class RunConfig:
    """Validated options of one command-line invocation"""

    command: str
    spec_path: Optional[str] = None
    ideal_path: Optional[str] = None
    samples: int = 100000
    seed: int = 42
    grid: Tuple[int, int] = (256, 256)
    mode: str = 'amoeba'
    point: Optional[Tuple[float, ...]] = None
    theta: Optional[Tuple[float, ...]] = None
    fiber: Optional[Tuple[float, ...]] = None
    starts: Optional[int] = None
    refine: int = 200
    tol: Optional[float] = None
    out: Optional[str] = None
    fmt: Optional[str] = None
    axes: Optional[Tuple[str, ...]] = None
    json_output: bool = False


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting"""

    def error(self, message: str):
        match = _FLAG_PATTERN.search(message)
        raise UsageError(message, match.group(1) if match else None)


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one subcommand per operation"""
    parser = _Parser(
        prog='cli.py',
        description=get_config('app.name', "Amoebas and coamoebas of linear spaces"),
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python cli.py covolume --spec line.json --samples 1000000 --seed 7
  python cli.py member --spec line.json --point=0,-1.5
  python cli.py quadric --spec example.json
  python cli.py certify --ideal ideal.json --fiber 0,1.0986 --grid 256
        """
    )
    parser.add_argument('--version', action='version',
                        version=f"%(prog)s {get_config('app.version', '1.0.0')}")
    subparsers = parser.add_subparsers(dest='command', metavar='command', parser_class=_Parser)

    def add(name: str, help_text: str, spec: bool = True) -> argparse.ArgumentParser:
        sub = subparsers.add_parser(name, help=help_text)
        if spec:
            sub.add_argument('--spec', required=True, help='Affine space JSON file')
        sub.add_argument('--json', action='store_true', dest='json_output', help='Print JSON instead of tables')
        return sub

    def add_sampling(sub: argparse.ArgumentParser) -> None:
        sub.add_argument('--samples', type=str, default=None, help='Number of samples (default: 100000)')
        sub.add_argument('--seed', type=str, default=None, help='Random seed (default: 42)')

    def add_output(sub: argparse.ArgumentParser, default_axes: str) -> None:
        sub.add_argument('--out', type=str, default=None, help='Output file (.csv, .json or .svg)')
        sub.add_argument('--format', type=str, default=None, dest='fmt', choices=OUTPUT_FORMATS,
                         help='Output format (default: from the file suffix)')
        sub.add_argument('--axes', type=str, default=None,
                         help=f'Columns to plot for SVG output (default: {default_axes})')

    sub = add('sample', 'Sample the amoeba (log) or coamoeba (arg) on a parameter grid')
    sub.add_argument('--mode', choices=('log', 'arg'), default='log')
    sub.add_argument('--grid', type=str, default=None, help='Grid RxT per parameter (default: 256x256)')
    add_output(sub, 'first two image columns')

    sub = add('dim', 'Estimate (co)amoeba dimension by numerical rank')
    sub.add_argument('--mode', choices=('amoeba', 'coamoeba'), default='amoeba')
    add_sampling(sub)

    add('quadric', 'Modulus quadrics of a real line')

    for name, text in (('member', 'Exact amoeba membership for a line'),
                       ('fiber', 'Exact Log fiber of a line')):
        sub = add(name, text)
        sub.add_argument('--point', type=str, required=True, help='Log point x0,x1,... (use --point=-1,2 for negatives)')
        sub.add_argument('--tol', type=float, default=None, help='Membership tolerance')

    sub = add('coclassify', 'Classify a torus point by the sign pattern of system (E)')
    sub.add_argument('--theta', type=str, required=True, help='Angles t1,...,t2k')

    sub = add('tiling', 'Sign-pattern frequencies over uniform torus samples')
    add_sampling(sub)
    add_output(sub, 'arg1,arg2')

    sub = add('covolume', 'Monte Carlo coamoeba volume')
    add_sampling(sub)

    sub = add('avolume', 'Monte Carlo amoeba volume of a real space')
    add_sampling(sub)

    sub = add('fibercount', 'Count Log fiber points by multistart Newton')
    sub.add_argument('--point', type=str, required=True, help='Log point x1,...,x2k')
    sub.add_argument('--starts', type=str, default=None, help='Number of Newton starts (default: 64*2^k)')
    sub.add_argument('--seed', type=str, default=None, help='Random seed (default: 42)')

    sub = add('certify', 'Certificate for a torus fiber of an ideal', spec=False)
    sub.add_argument('--ideal', required=True, help='Ideal JSON file (list of Laurent polynomials)')
    target = sub.add_mutually_exclusive_group(required=True)
    target.add_argument('--fiber', type=str, help='Log moduli r1,...,rn of the amoeba fiber')
    target.add_argument('--theta', type=str, help='Angles t1,...,tn of the coamoeba fiber')
    sub.add_argument('--grid', type=str, default=None, help='Angles per dimension (default: 256)')
    sub.add_argument('--refine', type=str, default=None, help='Refinement evaluations (default: 200)')

    return parser


def _int_option(value: Optional[str], flag: str, default: int, minimum: Optional[int] = None) -> int:
    if value is None:
        return default
    try:
        number = int(value)
    except ValueError:
        raise UsageError(f"expected an integer, got {value!r}", flag)
    if minimum is not None and number < minimum:
        raise UsageError(f"must be >= {minimum}, got {number}", flag)
    return number


def _float_list_option(value: Optional[str], flag: str) -> Optional[Tuple[float, ...]]:
    if value is None:
        return None
    values = parse_float_list(value)
    if values is None:
        raise UsageError(f"expected comma-separated numbers, got {value!r}", flag)
    return tuple(values)


def _check_path(path: Optional[str], flag: str) -> Optional[str]:
    if path is not None and not path.strip():
        raise UsageError("path must not be empty", flag)
    return path


def parse_config(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """
    Parse and validate command-line arguments

    Args:
        argv: Arguments without the program name (defaults to sys.argv[1:])

    Returns:
        RunConfig with defaults filled in
    """
    parser = build_parser()
    args = parser.parse_args(list(argv) if argv is not None else None)
    if args.command is None:
        raise UsageError("a command is required: " + ', '.join(COMMANDS))

    default_samples = int(get_config('sampling.samples', 100000))
    default_seed = int(get_config('sampling.seed', 42))
    default_grid = int(get_config('sampling.grid', 256))

    samples = _int_option(getattr(args, 'samples', None), '--samples', default_samples, minimum=0)
    seed = _int_option(getattr(args, 'seed', None), '--seed', default_seed)
    if not -2 ** 63 <= seed < 2 ** 64:
        raise UsageError("seed must fit in 64 bits", '--seed')

    grid = (default_grid, default_grid)
    if getattr(args, 'grid', None) is not None:
        parsed = parse_grid(args.grid)
        if parsed is None:
            raise UsageError(f"expected RxT or N, got {args.grid!r}", '--grid')
        grid = parsed
        if args.command == 'certify' and grid[0] < 8:
            raise UsageError("must be >= 8", '--grid')

    starts = getattr(args, 'starts', None)
    starts = _int_option(starts, '--starts', 0, minimum=1) if starts is not None else None
    refine = _int_option(getattr(args, 'refine', None), '--refine',
                         int(get_config('certificate.refine', 200)), minimum=0)

    out = _check_path(getattr(args, 'out', None), '--out')
    fmt = getattr(args, 'fmt', None)
    if out is not None and fmt is None:
        suffix = Path(out).suffix.lower().lstrip('.')
        if suffix not in OUTPUT_FORMATS:
            raise UsageError(f"cannot infer the format of {out!r}; pass --format", '--out')
        fmt = suffix

    axes = getattr(args, 'axes', None)
    if axes is not None:
        axes = tuple(a.strip() for a in axes.split(',') if a.strip())
        if len(axes) not in (2, 3):
            raise UsageError("expected two or three column names", '--axes')

    return RunConfig(
        command=args.command,
        spec_path=_check_path(getattr(args, 'spec', None), '--spec'),
        ideal_path=_check_path(getattr(args, 'ideal', None), '--ideal'),
        samples=samples,
        seed=seed,
        grid=grid,
        mode=getattr(args, 'mode', 'amoeba'),
        point=_float_list_option(getattr(args, 'point', None), '--point'),
        theta=_float_list_option(getattr(args, 'theta', None), '--theta'),
        fiber=_float_list_option(getattr(args, 'fiber', None), '--fiber'),
        starts=starts,
        refine=refine,
        tol=getattr(args, 'tol', None),
        out=out,
        fmt=fmt,
        axes=axes,
        json_output=bool(getattr(args, 'json_output', False)),
    )
