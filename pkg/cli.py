#!/usr/bin/env python3
"""
Amoeba / Coamoeba CLI
Membership, dimension, volume and fiber computations for affine linear spaces
"""

import sys
import time
from pathlib import Path
from typing import List, Optional

from tabulate import tabulate

# Add repository root to path
sys.path.insert(0, str(Path(__file__).parent))

from config.config import get_config
from src.errors import AmoebaError, UsageError
from src.exporters import to_json
from src.pipeline import AmoebaPipeline, CommandResult
from src.run_config import parse_config
from src.utils.logger import setup_logger

# Commands whose result is always printed as JSON
JSON_ONLY = {'quadric'}

TITLES = {
    'sample': '📈 Point cloud',
    'dim': '📐 Dimension estimate',
    'quadric': '🧮 Line quadrics',
    'member': '🔍 Amoeba membership',
    'fiber': '🎯 Log fiber',
    'coclassify': '🧭 Coamoeba classification',
    'tiling': '🧩 Sign-pattern tiling',
    'covolume': '📊 Coamoeba volume',
    'avolume': '📊 Amoeba volume',
    'fibercount': '🔢 Fiber count',
    'certify': '🛡️ Fiber certificate',
}


def configure_logging():
    return setup_logger(
        "src",
        log_file=get_config('logging.file_path'),
        level=get_config('logging.level', 'WARNING'),
        max_bytes=int(get_config('logging.max_bytes', 10485760)),
        backup_count=int(get_config('logging.backup_count', 5)),
        console_output=bool(get_config('logging.console_output', True)),
    )


def print_header(text: str):
    """Print formatted header"""
    print("\n" + "=" * 80)
    print(f"  {text}")
    print("=" * 80)


def _scalars(report: dict) -> List[list]:
    rows = []
    for key, value in report.items():
        if isinstance(value, (list, dict)):
            if len(value) > 8:
                value = f"[{len(value)} items]"
        rows.append([key, value])
    return rows


def print_result(result: CommandResult):
    """Print a command result as tables"""
    print_header(TITLES.get(result.command, result.command))
    report = result.to_dict()

    if 'verdict' in report:
        verdict_emoji = {'INSIDE': '✅', 'OUTSIDE': '❌', 'INDETERMINATE': '❓'}
        print(f"\n{verdict_emoji.get(report['verdict'], '❓')} Verdict: {report['verdict']}")
    elif 'status' in report:
        print(f"\n{'✅' if report['status'] == 'Inside' else '❌'} {report['status']}")
    elif 'outcome' in report:
        print(f"\n{'✅' if report['outcome'] == 'Interior' else '⚠️'} {report['outcome']}")

    if result.table is not None and not result.table.empty:
        print(tabulate(result.table, headers='keys', tablefmt='grid', floatfmt='.6g', showindex=False))
    else:
        print(tabulate(_scalars(report), headers=['field', 'value'], tablefmt='grid', floatfmt='.6g'))

    for path in result.outputs:
        print(f"✓ Wrote {path}")
    print(f"\n⚡ Total time: {result.elapsed:.2f}s")


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code"""
    try:
        config = parse_config(argv)
    except UsageError as e:
        print(f"❌ Usage error: {e}", file=sys.stderr)
        return e.exit_code

    logger = configure_logging()
    start_time = time.time()

    try:
        result = AmoebaPipeline(config).run()
    except KeyboardInterrupt:
        print("\n\n⚠️ Interrupted by user", file=sys.stderr)
        return 1
    except AmoebaError as e:
        logger.error(f"Error: {str(e)}", exc_info=True)
        print(f"❌ Error: {str(e)}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        logger.error(f"Unexpected error: {str(e)}", exc_info=True)
        print(f"❌ Error: {str(e)}", file=sys.stderr)
        return 1

    if config.json_output or config.command in JSON_ONLY:
        sys.stdout.write(to_json(result.report))
    else:
        print_result(result)

    logger.debug(f"Command {config.command} done in {time.time() - start_time:.2f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
