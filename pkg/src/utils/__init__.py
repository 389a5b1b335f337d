"""Utilities Module - Logging, seeded chunked execution and input validation"""

from .logger import setup_logger
from .parallel import run_chunked, map_chunks, worker_count
from .validators import reduce_angle, angle_distance, parse_float_list, parse_grid

__all__ = [
    'setup_logger', 'run_chunked', 'map_chunks', 'worker_count',
    'reduce_angle', 'angle_distance', 'parse_float_list', 'parse_grid',
]
