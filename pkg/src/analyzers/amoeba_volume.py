"""Amoeba Volume Module - Jacobian-density volume estimates and numerical Log fiber counts"""

import logging
import math
import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import integrate

from config.config import get_config
from ..errors import InvalidSpec, NonGeneric, NotALine, NotReal, NotSquareCase
from ..models.affine_space import AffineSpaceSpec, LogPoint, ParameterPoint, is_real
from ..models.estimates import VolumeEstimate
from ..utils.parallel import run_chunked
from ..utils.validators import TWO_PI, angle_distance, validate_length, validate_samples
from .rank_analyzer import RankAnalyzer, batched_jacobians, batched_rank, regular_mask

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MultistartConfig:
    """Multistart damped Newton settings for fiber counting"""

    n_starts: int
    newton_tol: float = 1e-12
    max_iters: int = 60
    dedup_radius: float = 1e-6

    def __post_init__(self):
        if self.n_starts <= 0 or self.newton_tol <= 0 or self.max_iters <= 0 or self.dedup_radius <= 0:
            raise InvalidSpec("multistart settings must all be positive")

    @classmethod
    def for_dimension(cls, k: int, n_starts: Optional[int] = None) -> "MultistartConfig":
        """Defaults from the amoeba_volume config section (starts_per_orthant * 2^k starts)"""
        if n_starts is None:
            n_starts = int(get_config('amoeba_volume.starts_per_orthant', 64)) * 2 ** k
        return cls(
            n_starts=int(n_starts),
            newton_tol=float(get_config('amoeba_volume.newton_tol', 1e-12)),
            max_iters=int(get_config('amoeba_volume.max_iters', 60)),
            dedup_radius=float(get_config('amoeba_volume.dedup_radius', 1e-6)),
        )


@dataclass(frozen=True, eq=False)
class FiberCountResult:
    """Distinct Newton solutions t of Log(rho(t)) = x"""

    solutions: np.ndarray
    non_converged: int
    n_starts: int
    regular: bool

    @property
    def count(self) -> int:
        return int(self.solutions.shape[0])

    def to_dict(self) -> Dict:
        return {
            'count': self.count,
            'regular': self.regular,
            'non_converged': self.non_converged,
            'n_starts': self.n_starts,
            'solutions': [[{'re': float(v.real), 'im': float(v.imag)} for v in row] for row in self.solutions],
        }


def _require_square(spec: AffineSpaceSpec) -> None:
    if spec.m != spec.k:
        raise NotSquareCase(spec.k, spec.m)


def density_batch(spec: AffineSpaceSpec, t: np.ndarray, zero_tol: float = 1e-12) -> np.ndarray:
    """
    |det| of the amoeba Jacobian at each row of t

    Rows where some f_j vanishes, and rows so far out that the weights
    a_ji t_i / f_j overflow, get density 0. The density decays like
    exp(-|log r|), so such rows carry nothing in double precision.
    """
    density = np.zeros(t.shape[0])
    with np.errstate(over='ignore', invalid='ignore', divide='ignore'):
        mask = np.all(np.isfinite(t), axis=-1)
        mask[mask] = regular_mask(spec, t[mask], zero_tol)
        if np.any(mask):
            det = np.abs(np.linalg.det(batched_jacobians(spec, t[mask], 'amoeba')))
            density[mask] = np.nan_to_num(det, nan=0.0, posinf=0.0)
    return density


class AmoebaVolumeAnalyzer:
    """Amoeba volume of real k-spaces in (C*)^2k and numerical fiber cardinality"""

    def __init__(self, rank_analyzer: Optional[RankAnalyzer] = None):
        """
        Initialize amoeba volume analyzer

        Args:
            rank_analyzer: Shared rank analyzer (for the genericity guard)
        """
        self.rank_analyzer = rank_analyzer or RankAnalyzer()
        self.zero_tol = float(get_config('tolerances.zero', 1e-12))
        self.genericity_samples = int(get_config('amoeba_volume.genericity_samples', 100))
        self.critical_fraction = float(get_config('amoeba_volume.critical_fraction', 0.5))
        self.density_floor = float(get_config('amoeba_volume.density_floor', 1e-8))

    def jacobian_density(self, spec: AffineSpaceSpec, p: ParameterPoint) -> float:
        """
        Push-forward density |det d(Log o rho)| in (log r, theta) coordinates

        Args:
            spec: Space with m = k
            p: Parameter point off the zero sets of the f_j

        Returns:
            Nonnegative density
        """
        _require_square(spec)
        return float(abs(np.linalg.det(self.rank_analyzer.amoeba_jacobian(spec, p))))

    def check_generic(self, spec: AffineSpaceSpec, seed: int = 0) -> float:
        """
        Reject spaces that are critical almost everywhere

        Returns:
            Fraction of random parameters at which the Jacobian drops rank
        """
        rng = np.random.default_rng(int(seed) & 0xFFFFFFFFFFFFFFFF)
        t = self.rank_analyzer.sample_parameters(rng, self.genericity_samples, spec.k)
        t = t[regular_mask(spec, t, self.zero_tol)]
        if t.shape[0] == 0:
            raise NonGeneric("no regular parameter found among random samples")
        ranks = batched_rank(batched_jacobians(spec, t, 'amoeba'), self.rank_analyzer.rank_tol)
        fraction = float(np.mean(ranks < 2 * spec.k))
        if fraction > self.critical_fraction:
            raise NonGeneric(f"{fraction:.0%} of random points are critical; the space is not generic")
        return fraction

    def amoeba_volume(self, spec: AffineSpaceSpec, n_samples: int, seed: int = 42,
                      chunk_size: Optional[int] = None) -> VolumeEstimate:
        """
        Importance-sampled amoeba volume of a real k-space in (C*)^2k

        log r_i are drawn from independent standard Cauchy laws and theta_i
        uniformly; the weighted density is averaged and divided by the fiber
        multiplicity 2^k.

        Args:
            spec: Real space with m = k
            n_samples: Number of weighted samples (>= 1)
            seed: Random seed
            chunk_size: Samples per seeded chunk

        Returns:
            VolumeEstimate
        """
        _require_square(spec)
        if not is_real(spec):
            raise NotReal()
        n_samples = validate_samples(n_samples, minimum=1)
        self.check_generic(spec, seed)

        k = spec.k
        start = time.time()

        def weighted_sums(rng: np.random.Generator, size: int) -> Tuple[float, float]:
            log_r = rng.standard_cauchy(size=(size, k))
            theta = rng.uniform(0.0, TWO_PI, size=(size, k))
            proposal = np.prod(1.0 / (math.pi * (1.0 + log_r ** 2)), axis=1) / TWO_PI ** k
            weights = density_batch(spec, np.exp(log_r + 1j * theta), self.zero_tol) / proposal
            return float(np.sum(weights)), float(np.sum(weights ** 2))

        chunks = run_chunked(weighted_sums, n_samples, seed, chunk_size)
        total = sum(c[0] for c in chunks)
        total_sq = sum(c[1] for c in chunks)

        mean = total / n_samples
        variance = max(total_sq / n_samples - mean ** 2, 0.0) * n_samples / max(n_samples - 1, 1)
        multiplicity = 2 ** k
        estimate = VolumeEstimate(
            value=mean / multiplicity,
            stderr=math.sqrt(variance / n_samples) / multiplicity,
            n_samples=n_samples,
            seed=seed,
        )
        logger.info(f"Amoeba volume {estimate.value:.6f} +- {estimate.stderr:.6f} from {n_samples} samples "
                    f"({len(chunks)} chunks, {time.time() - start:.2f}s)")
        return estimate

    def line_volume_quadrature(self, spec: AffineSpaceSpec) -> float:
        """
        Deterministic amoeba area of a real line in (C*)^2

        Integrates the density |Im(a t / (a t + b))| over (log r, theta) with
        adaptive quadrature, splitting at the zero t = -b/a, and divides by 2.

        Args:
            spec: Real line with m = 1

        Returns:
            Amoeba area
        """
        if spec.k != 1:
            raise NotALine(spec.k)
        _require_square(spec)
        if not is_real(spec):
            raise NotReal()
        a, b = complex(spec.a[0, 0]), complex(spec.b[0])
        if a == 0 or b == 0:
            raise NonGeneric("a line through the origin has a degenerate amoeba")

        root = -b / a
        u0, theta0 = math.log(abs(root)), float(np.angle(root)) % TWO_PI
        breaks = [p for p in (theta0,) if 0.0 < p < TWO_PI]

        def inner(u: float) -> float:
            r = math.exp(u)

            def density(theta: float) -> float:
                t = r * complex(math.cos(theta), math.sin(theta))
                f = a * t + b
                return 0.0 if f == 0 else abs((a * t / f).imag)

            value, _ = integrate.quad(density, 0.0, TWO_PI, points=breaks or None, limit=200)
            return value

        lower, _ = integrate.quad(inner, -np.inf, u0, limit=200)
        upper, _ = integrate.quad(inner, u0, np.inf, limit=200)
        return (lower + upper) / 2.0

    def fiber_count_numeric(self, spec: AffineSpaceSpec, x: LogPoint,
                            cfg: Optional[MultistartConfig] = None, seed: int = 42) -> FiberCountResult:
        """
        Count points of the fiber Log^-1(x) by multistart damped Newton

        Unknowns are (log r, theta); the starts use log r = x[:k] and uniform
        random angles. Converged solutions are merged within cfg.dedup_radius
        (angles compared on the circle).

        Args:
            spec: Space with m = k
            x: Point of R^2k
            cfg: Multistart settings (defaults from config)
            seed: Random seed for the starting angles

        Returns:
            FiberCountResult
        """
        _require_square(spec)
        k = spec.k
        validate_length(x.x, 2 * k, "log point")
        cfg = cfg or MultistartConfig.for_dimension(k)
        target = x.x

        def newton_chunk(rng: np.random.Generator, size: int) -> Tuple[np.ndarray, int]:
            u = np.tile(target[:k], (size, 1))
            theta = rng.uniform(0.0, TWO_PI, size=(size, k))
            return self._newton(spec, target, u, theta, cfg)

        chunks = run_chunked(newton_chunk, cfg.n_starts, seed)
        found = np.concatenate([c[0] for c in chunks])
        non_converged = sum(c[1] for c in chunks)

        distinct: List[np.ndarray] = []
        for q in found:
            if all(self._coordinate_gap(q, d, k) > cfg.dedup_radius for d in distinct):
                distinct.append(q)

        solutions = np.array([np.exp(q[:k] + 1j * q[k:]) for q in distinct], dtype=complex).reshape(-1, k)
        regular = bool(np.all(density_batch(spec, solutions, self.zero_tol) > self.density_floor))
        if non_converged:
            logger.debug(f"{non_converged} of {cfg.n_starts} Newton starts did not converge")
        if solutions.shape[0] and not regular:
            logger.warning("fiber contains a near-critical point; x may be a critical value")
        logger.info(f"Found {solutions.shape[0]} fiber points from {cfg.n_starts} starts")
        return FiberCountResult(solutions=solutions, non_converged=non_converged,
                                n_starts=cfg.n_starts, regular=regular)

    @staticmethod
    def _coordinate_gap(p: np.ndarray, q: np.ndarray, k: int) -> float:
        return max(float(np.max(np.abs(p[:k] - q[:k]))), float(np.max(angle_distance(p[k:], q[k:]))))

    def _newton(self, spec: AffineSpaceSpec, target: np.ndarray, u: np.ndarray, theta: np.ndarray,
                cfg: MultistartConfig) -> Tuple[np.ndarray, int]:
        """Batched damped Newton on log|rho(e^{u + i theta})| = target"""
        k = spec.k

        def residual(u_: np.ndarray, theta_: np.ndarray) -> np.ndarray:
            t = np.exp(u_ + 1j * theta_)
            with np.errstate(divide='ignore'):
                values = np.log(np.abs(spec.image(t))) - target
            return np.where(np.isfinite(values), values, np.inf)

        res = residual(u, theta)
        for _ in range(cfg.max_iters):
            norms = np.max(np.abs(res), axis=1)
            active = np.isfinite(norms) & (norms > cfg.newton_tol)
            if not np.any(active):
                break

            t = np.exp(u[active] + 1j * theta[active])
            steps = -np.einsum('nij,nj->ni', np.linalg.pinv(batched_jacobians(spec, t, 'amoeba')), res[active])

            # halve the step until the residual decreases
            alpha = np.ones(steps.shape[0])
            base = norms[active]
            best_u, best_theta = u[active].copy(), theta[active].copy()
            best_res = res[active].copy()
            pending = np.ones(steps.shape[0], dtype=bool)
            for _ in range(12):
                trial_u = u[active] + alpha[:, None] * steps[:, :k]
                trial_theta = np.mod(theta[active] + alpha[:, None] * steps[:, k:], TWO_PI)
                trial_res = residual(trial_u, trial_theta)
                better = pending & (np.max(np.abs(trial_res), axis=1) < base)
                best_u[better], best_theta[better], best_res[better] = trial_u[better], trial_theta[better], trial_res[better]
                pending &= ~better
                if not np.any(pending):
                    break
                alpha[pending] /= 2.0

            u[active], theta[active], res[active] = best_u, best_theta, best_res

        norms = np.max(np.abs(res), axis=1)
        converged = np.isfinite(norms) & (norms <= cfg.newton_tol)
        found = np.concatenate([u[converged], theta[converged]], axis=1)
        return found, int(np.sum(~converged))
