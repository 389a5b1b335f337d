"""Coamoeba Solver Module - coamoeba membership of k-spaces in (C*)^2k via the linear system (E)"""

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
import pandas as pd

from config.config import get_config
from ..errors import DimensionMismatch, NotSquareCase, PreconditionError
from ..models.affine_space import AffineSpaceSpec, TorusPoint
from ..models.estimates import VolumeEstimate
from ..utils.parallel import run_chunked
from ..utils.validators import TWO_PI, reduce_angle, validate_samples

logger = logging.getLogger(__name__)

DEGENERATE_LABEL = 'degenerate'


@dataclass(frozen=True)
class SignPattern:
    """Element s of Z_2^2k written as a tuple of +1/-1"""

    s: Tuple[int, ...]

    def __post_init__(self):
        s = tuple(int(v) for v in self.s)
        if any(v not in (1, -1) for v in s):
            raise ValueError(f"sign pattern entries must be +1 or -1, got {self.s}")
        object.__setattr__(self, 's', s)

    @classmethod
    def from_code(cls, code: int, size: int) -> "SignPattern":
        """Bit i of code set means component i is negative"""
        return cls(tuple(-1 if (code >> i) & 1 else 1 for i in range(size)))

    @classmethod
    def from_label(cls, label: str) -> "SignPattern":
        return cls(tuple(1 if ch == '+' else -1 for ch in label))

    @classmethod
    def positive(cls, size: int) -> "SignPattern":
        return cls((1,) * size)

    @property
    def code(self) -> int:
        return sum(1 << i for i, v in enumerate(self.s) if v < 0)

    @property
    def label(self) -> str:
        return ''.join('+' if v > 0 else '-' for v in self.s)

    def is_positive(self) -> bool:
        return all(v > 0 for v in self.s)

    def __mul__(self, other: "SignPattern") -> "SignPattern":
        return SignPattern(tuple(u * v for u, v in zip(self.s, other.s)))

    def __len__(self) -> int:
        return len(self.s)

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True, eq=False)
class CoamoebaMembership:
    """
    Outcome of solving (E) at a torus point

    Interior results carry the sign pattern and the witness (x, y) with
    z = (x_1 e^{i theta_1}, ..., y_1 e^{i psi_1}, ...) on the space.
    """

    theta: np.ndarray
    pattern: Optional[SignPattern] = None
    x: Optional[np.ndarray] = None
    y: Optional[np.ndarray] = None

    @property
    def degenerate(self) -> bool:
        return self.pattern is None

    @property
    def outcome(self) -> str:
        return 'Degenerate' if self.degenerate else 'Interior'

    def to_dict(self) -> Dict:
        data = {'outcome': self.outcome, 'theta': [float(v) for v in self.theta]}
        if not self.degenerate:
            data['pattern'] = self.pattern.label
            data['x'] = [float(v) for v in self.x]
            data['y'] = [float(v) for v in self.y]
        return data


@dataclass(frozen=True, eq=False)
class BatchClassification:
    """
    Vectorized classification of N torus points

    Attributes:
        solutions: (N, 2k) solutions (x, y) of (E), NaN where degenerate
        codes: (N,) pattern codes, -1 where degenerate
    """

    solutions: np.ndarray
    codes: np.ndarray

    @property
    def degenerate(self) -> np.ndarray:
        return self.codes < 0


@dataclass(frozen=True)
class TilingStats:
    """Per-pattern sample counts over uniform torus samples"""

    counts: Dict[SignPattern, int] = field(default_factory=dict)
    degenerate_count: int = 0
    n_samples: int = 0
    seed: int = 0

    @classmethod
    def from_frame(cls, frame: pd.DataFrame, seed: int = 0) -> "TilingStats":
        """Counts from the labelled samples of CoamoebaSolver.sample_patterns"""
        labels = frame['pattern']
        degenerate = labels == DEGENERATE_LABEL
        counts = {
            SignPattern.from_label(label): int(c)
            for label, c in labels[~degenerate].value_counts().items()
        }
        return cls(counts=counts, degenerate_count=int(degenerate.sum()), n_samples=len(frame), seed=seed)

    def frequencies(self) -> Dict[SignPattern, float]:
        if self.n_samples == 0:
            return {}
        return {p: c / self.n_samples for p, c in self.counts.items()}

    @property
    def degenerate_fraction(self) -> float:
        return self.degenerate_count / self.n_samples if self.n_samples else 0.0

    def to_frame(self) -> pd.DataFrame:
        freqs = self.frequencies()
        rows = [
            {'pattern': p.label, 'count': c, 'frequency': freqs[p]}
            for p, c in sorted(self.counts.items(), key=lambda item: item[0].code)
        ]
        return pd.DataFrame(rows, columns=['pattern', 'count', 'frequency'])

    def to_dict(self) -> Dict:
        freqs = self.frequencies()
        return {
            'n_samples': self.n_samples,
            'seed': self.seed,
            'degenerate_count': self.degenerate_count,
            'patterns': {
                p.label: {'count': c, 'frequency': freqs[p]}
                for p, c in sorted(self.counts.items(), key=lambda item: item[0].code)
            },
        }


def _require_square(spec: AffineSpaceSpec) -> None:
    if spec.m != spec.k:
        raise NotSquareCase(spec.k, spec.m)


def system_matrices(spec: AffineSpaceSpec, thetas: np.ndarray) -> np.ndarray:
    """
    Real 2k x 2k matrices stack(Re B, Im B) with B = [a_jl e^{i theta_l} | -diag(e^{i psi_j})]

    Args:
        spec: Space with m = k
        thetas: Torus points of shape (N, 2k), ordered (theta_1..theta_k, psi_1..psi_k)

    Returns:
        Array of shape (N, 2k, 2k)
    """
    k = spec.k
    n_points = thetas.shape[0]
    complex_system = np.zeros((n_points, k, 2 * k), dtype=complex)
    complex_system[:, :, :k] = spec.a[None, :, :] * np.exp(1j * thetas[:, None, :k])
    idx = np.arange(k)
    complex_system[:, idx, k + idx] = -np.exp(1j * thetas[:, k:])
    return np.concatenate([complex_system.real, complex_system.imag], axis=1)


class CoamoebaSolver:
    """Sign-pattern classification of torus points for generic k-spaces in (C*)^2k"""

    def __init__(self, max_condition: Optional[float] = None, degenerate_tol: Optional[float] = None):
        """
        Initialize coamoeba solver

        Args:
            max_condition: Systems with a larger condition number are degenerate
            degenerate_tol: Solutions with a component this close to 0 are degenerate
        """
        self.max_condition = float(max_condition if max_condition is not None
                                   else get_config('coamoeba.max_condition', 1e12))
        self.degenerate_tol = float(degenerate_tol if degenerate_tol is not None
                                    else get_config('coamoeba.degenerate_tol', 1e-9))
        self.residual_tol = float(get_config('tolerances.on_space', 1e-9))

    def classify_batch(self, spec: AffineSpaceSpec, thetas: np.ndarray,
                       tol: Optional[float] = None) -> BatchClassification:
        """
        Solve (E) at many torus points at once

        Args:
            spec: Space with m = k
            thetas: Angles of shape (N, 2k)
            tol: Component threshold (coamoeba.degenerate_tol)

        Returns:
            BatchClassification
        """
        _require_square(spec)
        tol = self.degenerate_tol if tol is None else float(tol)
        thetas = np.asarray(thetas, dtype=float).reshape(-1, 2 * spec.k)
        n_points, size = thetas.shape

        matrices = system_matrices(spec, thetas)
        rhs = -np.concatenate([spec.b.real, spec.b.imag])
        solutions = np.full((n_points, size), np.nan)
        codes = np.full(n_points, -1, dtype=np.int64)
        if n_points == 0:
            return BatchClassification(solutions=solutions, codes=codes)

        sigma = np.linalg.svd(matrices, compute_uv=False)
        with np.errstate(divide='ignore', invalid='ignore'):
            condition = sigma[:, 0] / sigma[:, -1]
        solvable = np.isfinite(condition) & (condition <= self.max_condition)

        if np.any(solvable):
            system = matrices[solvable]
            solved = np.linalg.solve(system, np.broadcast_to(rhs, (system.shape[0], size))[..., None])[..., 0]
            residual = np.max(np.abs(np.einsum('nij,nj->ni', system, solved) - rhs), axis=1)
            scale = 1.0 + np.max(np.abs(rhs)) + sigma[solvable, 0] * np.max(np.abs(solved), axis=1)
            clean = (residual <= self.residual_tol * scale) & np.all(np.abs(solved) > tol, axis=1)

            solutions[solvable] = solved
            weights = 1 << np.arange(size, dtype=np.int64)
            solved_codes = (solved < 0).astype(np.int64) @ weights
            codes[np.flatnonzero(solvable)[clean]] = solved_codes[clean]
            solutions[np.flatnonzero(solvable)[~clean]] = np.nan

        return BatchClassification(solutions=solutions, codes=codes)

    def classify(self, spec: AffineSpaceSpec, theta: TorusPoint, tol: Optional[float] = None) -> CoamoebaMembership:
        """
        Decide which reflected coamoeba contains a torus point

        Pattern (+,...,+) means theta lies in the regular part of the coamoeba
        of the space itself.

        Args:
            spec: Space with m = k
            theta: Point of the real 2k-torus
            tol: Component threshold

        Returns:
            CoamoebaMembership
        """
        _require_square(spec)
        if len(theta) != 2 * spec.k:
            raise DimensionMismatch(f"torus point has length {len(theta)}, expected {2 * spec.k}")

        batch = self.classify_batch(spec, theta.angles[None, :], tol)
        code = int(batch.codes[0])
        if code < 0:
            return CoamoebaMembership(theta=theta.angles)

        solution = batch.solutions[0]
        return CoamoebaMembership(
            theta=theta.angles,
            pattern=SignPattern.from_code(code, 2 * spec.k),
            x=solution[:spec.k],
            y=solution[spec.k:],
        )

    @staticmethod
    def witness_point(membership: CoamoebaMembership) -> np.ndarray:
        """
        Point z of the space reconstructed from an Interior witness

        Multiplying z by the pattern signs gives a point with Arg = theta.
        """
        if membership.degenerate:
            raise PreconditionError("degenerate classification has no witness point")
        k = membership.x.size
        phases = np.exp(1j * membership.theta)
        return np.concatenate([membership.x * phases[:k], membership.y * phases[k:]])

    def _uniform_codes(self, spec: AffineSpaceSpec, rng: np.random.Generator, size: int):
        thetas = rng.uniform(0.0, TWO_PI, size=(size, 2 * spec.k))
        return thetas, self.classify_batch(spec, thetas).codes

    def tiling_stats(self, spec: AffineSpaceSpec, n_samples: int, seed: int = 42,
                     chunk_size: Optional[int] = None) -> TilingStats:
        """
        Classify uniform torus samples and count sign patterns

        Args:
            spec: Space with m = k
            n_samples: Number of samples (>= 0)
            seed: Random seed
            chunk_size: Samples per seeded chunk

        Returns:
            TilingStats with only the observed patterns
        """
        _require_square(spec)
        n_samples = validate_samples(n_samples)
        size = 2 * spec.k
        start = time.time()

        def count_chunk(rng: np.random.Generator, chunk: int) -> Tuple[np.ndarray, int]:
            _, codes = self._uniform_codes(spec, rng, chunk)
            valid = codes[codes >= 0]
            return np.bincount(valid, minlength=1 << size), int(codes.size - valid.size)

        chunks = run_chunked(count_chunk, n_samples, seed, chunk_size)
        totals = np.zeros(1 << size, dtype=np.int64)
        degenerate = 0
        for counts, n_degenerate in chunks:
            totals += counts
            degenerate += n_degenerate

        counts = {
            SignPattern.from_code(code, size): int(c)
            for code, c in enumerate(totals) if c > 0
        }
        logger.info(f"Classified {n_samples} torus samples in {len(chunks)} chunks "
                    f"({degenerate} degenerate, {time.time() - start:.2f}s)")
        if degenerate:
            logger.debug(f"Degenerate fraction {degenerate / n_samples:.2e}")
        return TilingStats(counts=counts, degenerate_count=degenerate, n_samples=n_samples, seed=seed)

    def sample_patterns(self, spec: AffineSpaceSpec, n_samples: int, seed: int = 42,
                        chunk_size: Optional[int] = None) -> pd.DataFrame:
        """
        Uniform torus samples with their pattern labels

        Returns:
            DataFrame with columns arg1..arg2k and pattern ('degenerate' for degenerate samples)
        """
        _require_square(spec)
        n_samples = validate_samples(n_samples)
        size = 2 * spec.k

        chunks = run_chunked(lambda rng, chunk: self._uniform_codes(spec, rng, chunk),
                             n_samples, seed, chunk_size)
        thetas = np.concatenate([c[0] for c in chunks]) if chunks else np.zeros((0, size))
        codes = np.concatenate([c[1] for c in chunks]) if chunks else np.zeros(0, dtype=np.int64)

        labels = [SignPattern.from_code(int(c), size).label if c >= 0 else DEGENERATE_LABEL for c in codes]
        frame = pd.DataFrame({f"arg{i + 1}": reduce_angle(thetas[:, i]) for i in range(size)})
        frame['pattern'] = pd.Series(labels, dtype=object)
        return frame

    def coamoeba_volume(self, spec: AffineSpaceSpec, n_samples: int, seed: int = 42,
                        chunk_size: Optional[int] = None) -> VolumeEstimate:
        """
        Coamoeba volume as the (+,...,+) frequency times (2*pi)^2k

        Args:
            spec: Space with m = k
            n_samples: Number of samples (>= 1)
            seed: Random seed
            chunk_size: Samples per seeded chunk

        Returns:
            VolumeEstimate with binomial standard error
        """
        n_samples = validate_samples(n_samples, minimum=1)
        stats = self.tiling_stats(spec, n_samples, seed, chunk_size)
        torus_volume = TWO_PI ** (2 * spec.k)
        hits = stats.counts.get(SignPattern.positive(2 * spec.k), 0)
        fraction = hits / n_samples
        stderr = torus_volume * math.sqrt(fraction * (1.0 - fraction) / n_samples)
        return VolumeEstimate(value=fraction * torus_volume, stderr=stderr, n_samples=n_samples, seed=seed)
