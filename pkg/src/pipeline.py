"""Amoeba Pipeline - dispatches a RunConfig to the analyzers and exporters"""

import logging
import math
import time
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

import pandas as pd

from .analyzers import (
    AmoebaVolumeAnalyzer,
    CertificateAnalyzer,
    CoamoebaSolver,
    LineAnalyzer,
    MultistartConfig,
    RankAnalyzer,
    TilingStats,
    TorusFiber,
)
from .analyzers.rank_analyzer import expected_dimension
from .errors import UsageError
from .exporters import CSVExporter, JSONExporter, SVGExporter
from .models.affine_space import AffineSpaceSpec, LogPoint, TorusPoint, load_spec
from .models.laurent import load_ideal
from .run_config import RunConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CommandResult:
    """
    Outcome of one command

    Attributes:
        command: Subcommand name
        report: Result object (with to_dict) or plain dict, printed by --json
        table: Optional table for human-readable output
        outputs: Files written
        elapsed: Wall time in seconds
    """

    command: str
    report: Any
    table: Optional[pd.DataFrame] = None
    outputs: Tuple[str, ...] = ()
    elapsed: float = 0.0

    def to_dict(self) -> Dict:
        return self.report.to_dict() if hasattr(self.report, 'to_dict') else dict(self.report)


class AmoebaPipeline:
    """Runs one command-line operation end to end"""

    def __init__(self, config: RunConfig):
        """
        Initialize pipeline

        Args:
            config: Validated run configuration
        """
        self.config = config
        self.rank_analyzer = RankAnalyzer()
        self.line_analyzer = LineAnalyzer()
        self.coamoeba_solver = CoamoebaSolver()
        self.volume_analyzer = AmoebaVolumeAnalyzer(self.rank_analyzer)
        self.certificate_analyzer = CertificateAnalyzer()
        self.csv_exporter = CSVExporter()
        self.json_exporter = JSONExporter()
        self.svg_exporter = SVGExporter()

        self._handlers: Dict[str, Callable[[], CommandResult]] = {
            'sample': self._sample,
            'dim': self._dim,
            'quadric': self._quadric,
            'member': self._member,
            'fiber': self._fiber,
            'coclassify': self._coclassify,
            'tiling': self._tiling,
            'covolume': self._covolume,
            'avolume': self._avolume,
            'fibercount': self._fibercount,
            'certify': self._certify,
        }

    @cached_property
    def spec(self) -> AffineSpaceSpec:
        return load_spec(self.config.spec_path)

    def run(self) -> CommandResult:
        """
        Execute the configured command

        Returns:
            CommandResult
        """
        handler = self._handlers.get(self.config.command)
        if handler is None:
            raise UsageError(f"unknown command {self.config.command!r}")

        logger.info(f"Running {self.config.command}")
        start = time.time()
        result = handler()
        elapsed = time.time() - start
        logger.info(f"{self.config.command} finished in {elapsed:.2f}s")
        return CommandResult(command=result.command, report=result.report, table=result.table,
                             outputs=result.outputs, elapsed=elapsed)

    # ------------------------------------------------------------------
    # Export
    # ------------------------------------------------------------------

    def _export_cloud(self, cloud: pd.DataFrame, default_axes: Sequence[str]) -> Tuple[str, ...]:
        cfg = self.config
        if cfg.out is None:
            return ()
        if cfg.fmt == 'csv':
            path = self.csv_exporter.export(cloud, cfg.out)
        elif cfg.fmt == 'json':
            path = self.json_exporter.export(cloud.to_dict(orient='list'), cfg.out)
        else:
            axes = cfg.axes or tuple(default_axes)
            path = self.svg_exporter.export(cloud, axes, cfg.out)
        return (path,)

    def _point(self, expected: int, flag: str = '--point') -> LogPoint:
        values = self.config.point
        if values is None or len(values) != expected:
            got = 0 if values is None else len(values)
            raise UsageError(f"expected {expected} coordinates, got {got}", flag)
        return LogPoint(values)

    # ------------------------------------------------------------------
    # Commands
    # ------------------------------------------------------------------

    def _sample(self) -> CommandResult:
        spec, cfg = self.spec, self.config
        cloud = self.rank_analyzer.sample_cloud(spec, cfg.mode, cfg.grid)
        prefix = 'x' if cfg.mode == 'log' else 'arg'
        outputs = self._export_cloud(cloud, (f"{prefix}{spec.n - 1}", f"{prefix}{spec.n}"))
        report = {'mode': cfg.mode, 'points': len(cloud), 'columns': list(cloud.columns)}
        return CommandResult('sample', report, table=cloud.head(10), outputs=outputs)

    def _dim(self) -> CommandResult:
        spec, cfg = self.spec, self.config
        dimension = self.rank_analyzer.dimension_estimate(spec, cfg.mode, max(cfg.samples, 1), cfg.seed)
        report = {
            'mode': cfg.mode,
            'dimension': dimension,
            'expected': expected_dimension(spec),
            'n_samples': max(cfg.samples, 1),
            'seed': cfg.seed,
        }
        return CommandResult('dim', report)

    def _quadric(self) -> CommandResult:
        quadrics = self.line_analyzer.real_line_quadrics(self.spec)
        table = pd.DataFrame([q.to_dict() for q in quadrics])
        return CommandResult('quadric', {'quadrics': [q.to_dict() for q in quadrics]}, table=table)

    def _member(self) -> CommandResult:
        spec = self.spec
        membership = self.line_analyzer.line_amoeba_membership(spec, self._point(spec.n), self.config.tol)
        return CommandResult('member', membership)

    def _fiber(self) -> CommandResult:
        spec = self.spec
        solutions = self.line_analyzer.line_fiber_solutions(spec, self._point(spec.n), self.config.tol)
        table = pd.DataFrame({'re': solutions.points[:, 0].real, 'im': solutions.points[:, 0].imag})
        return CommandResult('fiber', solutions, table=table)

    def _coclassify(self) -> CommandResult:
        spec = self.spec
        theta = self.config.theta
        if theta is None or len(theta) != 2 * spec.k:
            raise UsageError(f"expected {2 * spec.k} angles", '--theta')
        membership = self.coamoeba_solver.classify(spec, TorusPoint(theta))
        report = membership.to_dict()
        if not membership.degenerate:
            z = self.coamoeba_solver.witness_point(membership)
            report['witness_point'] = [{'re': float(v.real), 'im': float(v.imag)} for v in z]
        return CommandResult('coclassify', report)

    def _tiling(self) -> CommandResult:
        spec, cfg = self.spec, self.config
        if cfg.out is None:
            stats = self.coamoeba_solver.tiling_stats(spec, cfg.samples, cfg.seed)
            return CommandResult('tiling', stats, table=stats.to_frame())

        cloud = self.coamoeba_solver.sample_patterns(spec, cfg.samples, cfg.seed)
        stats = TilingStats.from_frame(cloud, cfg.seed)
        outputs = self._export_cloud(cloud, ('arg1', 'arg2'))
        return CommandResult('tiling', stats, table=stats.to_frame(), outputs=outputs)

    def _covolume(self) -> CommandResult:
        spec, cfg = self.spec, self.config
        estimate = self.coamoeba_solver.coamoeba_volume(spec, cfg.samples, cfg.seed)
        return CommandResult('covolume', estimate, table=_volume_table(estimate, math.pi ** (2 * spec.k)))

    def _avolume(self) -> CommandResult:
        spec, cfg = self.spec, self.config
        estimate = self.volume_analyzer.amoeba_volume(spec, cfg.samples, cfg.seed)
        reference = math.pi ** (2 * spec.k) / 2 ** spec.k
        return CommandResult('avolume', estimate, table=_volume_table(estimate, reference))

    def _fibercount(self) -> CommandResult:
        spec, cfg = self.spec, self.config
        multistart = MultistartConfig.for_dimension(spec.k, cfg.starts)
        result = self.volume_analyzer.fiber_count_numeric(spec, self._point(spec.n), multistart, cfg.seed)
        return CommandResult('fibercount', result)

    def _certify(self) -> CommandResult:
        cfg = self.config
        generators = load_ideal(cfg.ideal_path)
        n = generators[0].n
        if cfg.theta is not None:
            if len(cfg.theta) != n:
                raise UsageError(f"expected {n} angles", '--theta')
            report = self.certificate_analyzer.coamoeba_certificate(generators, TorusPoint(cfg.theta),
                                                                    cfg.grid[0], cfg.refine)
            return CommandResult('certify', report)

        if len(cfg.fiber) != n:
            raise UsageError(f"expected {n} log moduli", '--fiber')
        fiber = TorusFiber(LogPoint(cfg.fiber))
        report = self.certificate_analyzer.certificate(generators, fiber, cfg.grid[0], cfg.refine)
        return CommandResult('certify', report)


def _volume_table(estimate, reference: float) -> pd.DataFrame:
    return pd.DataFrame([{
        'value': estimate.value,
        'stderr': estimate.stderr,
        'reference': reference,
        'deviation_sigma': abs(estimate.value - reference) / estimate.stderr if estimate.stderr > 0 else float('nan'),
        'n_samples': estimate.n_samples,
        'seed': estimate.seed,
    }])
