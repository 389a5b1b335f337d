"""Rank Analyzer Module - modulus/argument coordinates, Jacobians and (co)amoeba dimension"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import pandas as pd
from scipy.linalg import svdvals

from config.config import get_config
from ..errors import (
    DimensionMismatch,
    InvalidSpec,
    NotOnSpace,
    NotSquareCase,
    NumericalInconsistency,
    OffTorus,
    UndefinedArgument,
)
from ..models.affine_space import AffineSpaceSpec, ParameterPoint
from ..utils.parallel import run_chunked
from ..utils.validators import TWO_PI, reduce_angle, validate_length, validate_samples

logger = logging.getLogger(__name__)

MODES = ('amoeba', 'coamoeba')


@dataclass(frozen=True)
class ModulusCoords:
    """y_j = |f_j(t)|"""

    y: np.ndarray


@dataclass(frozen=True)
class ArgCoords:
    """psi_j = arg f_j(t) in [0, 2*pi)"""

    psi: np.ndarray


@dataclass(frozen=True)
class GaussMatrix:
    """
    Logarithmic Gauss map image A(z) of a point of a k-space in (C*)^2k

    Row j is (a_j1 z_1, ..., a_jk z_k, 0, ..., -z_{k+j}, ..., 0).
    """

    entries: np.ndarray

    @property
    def hat(self) -> np.ndarray:
        """stack(A, conj A), complex 2k x 2k"""
        return np.vstack([self.entries, np.conj(self.entries)])

    @property
    def tilde(self) -> np.ndarray:
        """stack(Re A, Im A), real 2k x 2k"""
        return np.vstack([self.entries.real, self.entries.imag])


def numerical_rank(matrix: np.ndarray, rank_tol: float) -> int:
    """Number of singular values above rank_tol * sigma_max"""
    sigma = svdvals(np.asarray(matrix))
    if sigma.size == 0 or sigma[0] == 0:
        return 0
    return int(np.sum(sigma > rank_tol * sigma[0]))


def batched_rank(matrices: np.ndarray, rank_tol: float) -> np.ndarray:
    """numerical_rank over a stack of matrices of shape (N, p, q)"""
    if matrices.shape[0] == 0:
        return np.zeros(0, dtype=int)
    sigma = np.linalg.svd(matrices, compute_uv=False)
    top = sigma[:, :1]
    return np.sum((sigma > rank_tol * top) & (top > 0), axis=1)


def form_weights(spec: AffineSpaceSpec, t: np.ndarray) -> np.ndarray:
    """w_ji = a_ji t_i / f_j(t) for a batch t of shape (N, k); returns (N, m, k)"""
    f = spec.forms(t)
    return spec.a[None, :, :] * t[:, None, :] / f[:, :, None]


def batched_jacobians(spec: AffineSpaceSpec, t: np.ndarray, mode: str) -> np.ndarray:
    """
    Analytic Jacobians of Log(rho) or Arg(rho) in (log r_1..log r_k, theta_1..theta_k)

    Args:
        spec: Affine space
        t: Parameters of shape (N, k), off the zero sets of the f_j
        mode: 'amoeba' or 'coamoeba'

    Returns:
        Array of shape (N, k+m, 2k)
    """
    k, m = spec.k, spec.m
    n_points = t.shape[0]
    w = form_weights(spec, t)
    jac = np.zeros((n_points, k + m, 2 * k))
    eye = np.eye(k)
    if mode == 'amoeba':
        jac[:, :k, :k] = eye
        jac[:, k:, :k] = w.real
        jac[:, k:, k:] = -w.imag
    elif mode == 'coamoeba':
        jac[:, :k, k:] = eye
        jac[:, k:, :k] = w.imag
        jac[:, k:, k:] = w.real
    else:
        raise InvalidSpec(f"mode must be one of {MODES}, got {mode!r}")
    return jac


def regular_mask(spec: AffineSpaceSpec, t: np.ndarray, zero_tol: float) -> np.ndarray:
    """Rows of t where every f_j(t) stays away from zero"""
    f = spec.forms(t)
    return np.all(np.abs(f) > zero_tol * spec.form_scale(t), axis=-1)


class RankAnalyzer:
    """Closed-form (co)amoeba coordinates, Jacobians and numerical dimension"""

    def __init__(
        self,
        rank_tol: Optional[float] = None,
        formula_tol: Optional[float] = None,
        fd_step: Optional[float] = None,
        log_radius: Optional[float] = None
    ):
        """
        Initialize rank analyzer

        Args:
            rank_tol: Relative singular value threshold (tolerances.rank)
            formula_tol: Agreement required between expansions and direct evaluation
            fd_step: Central finite-difference step
            log_radius: Moduli are sampled log-uniform in [e^-R, e^R]
        """
        self.rank_tol = float(rank_tol if rank_tol is not None else get_config('tolerances.rank', 1e-8))
        self.formula_tol = float(formula_tol if formula_tol is not None
                                 else get_config('tolerances.formula_check', 1e-10))
        self.fd_step = float(fd_step if fd_step is not None
                             else get_config('tolerances.finite_difference_step', 1e-6))
        self.log_radius = float(log_radius if log_radius is not None else get_config('sampling.log_radius', 2.0))
        self.zero_tol = float(get_config('tolerances.zero', 1e-12))
        self.on_space_tol = float(get_config('tolerances.on_space', 1e-9))

    # ------------------------------------------------------------------
    # Closed-form coordinates
    # ------------------------------------------------------------------

    def modulus_coords(self, spec: AffineSpaceSpec, p: ParameterPoint) -> ModulusCoords:
        """
        y_j = |f_j(t)| from the cosine expansion

            y_j^2 = |b_j|^2 + sum_i |a_ji|^2 r_i^2
                    + 2 sum_i |b_j||a_ji| r_i cos(theta_i + theta_aji - theta_bj)
                    + 2 sum_{i<l} |a_ji||a_jl| r_i r_l cos(theta_i - theta_l + theta_aji - theta_ajl)

        cross-checked against direct complex evaluation.

        Args:
            spec: Affine space
            p: Parameter point

        Returns:
            ModulusCoords
        """
        validate_length(p.r, spec.k, "parameter point")
        r, theta = p.r, p.theta
        mod_a, arg_a = np.abs(spec.a), np.angle(spec.a)
        mod_b, arg_b = np.abs(spec.b), np.angle(spec.b)

        y_sq = mod_b ** 2 + (mod_a ** 2) @ (r ** 2)
        y_sq = y_sq + 2 * np.sum(
            mod_b[:, None] * mod_a * r * np.cos(theta + arg_a - arg_b[:, None]), axis=1
        )
        for i, l in itertools.combinations(range(spec.k), 2):
            y_sq = y_sq + 2 * mod_a[:, i] * mod_a[:, l] * r[i] * r[l] * np.cos(
                theta[i] - theta[l] + arg_a[:, i] - arg_a[:, l]
            )

        direct_sq = np.abs(spec.forms(p.t)) ** 2
        scale_sq = np.maximum(1.0, spec.form_scale(p.t) ** 2)
        error = np.max(np.abs(y_sq - direct_sq) / scale_sq)
        if error > self.formula_tol:
            raise NumericalInconsistency(f"modulus expansion disagrees with |f_j(t)| by {error:.3e}")

        return ModulusCoords(y=np.sqrt(np.maximum(y_sq, 0.0)))

    def arg_coords(self, spec: AffineSpaceSpec, p: ParameterPoint) -> ArgCoords:
        """
        psi_j = arg f_j(t), validated against the arctan parametrization

            psi_j = theta_bj + arctan( sum_i |a_ji/b_j| r_i sin(theta_i + theta_aji - theta_bj)
                                     / (1 + sum_i |a_ji/b_j| r_i cos(theta_i + theta_aji - theta_bj)) )  mod pi

        (without the constant term when b_j = 0). The value itself comes from the
        two-argument arctangent of f_j(t), which fixes the branch.

        Args:
            spec: Affine space
            p: Parameter point

        Returns:
            ArgCoords with angles in [0, 2*pi)
        """
        validate_length(p.r, spec.k, "parameter point")
        t = p.t
        f = spec.forms(t)
        scale = spec.form_scale(t)
        for j in range(spec.m):
            if abs(f[j]) <= self.zero_tol * scale[j]:
                raise UndefinedArgument(j)

        psi = reduce_angle(np.angle(f))
        r, theta = p.r, p.theta
        for j in range(spec.m):
            a_j, b_j = spec.a[j], spec.b[j]
            if b_j != 0:
                weights = np.abs(a_j / b_j) * r
                phase = theta + np.angle(a_j) - np.angle(b_j)
                formula = np.angle(b_j) + np.arctan2(
                    np.sum(weights * np.sin(phase)), 1.0 + np.sum(weights * np.cos(phase))
                )
            else:
                weights = np.abs(a_j) * r
                phase = theta + np.angle(a_j)
                formula = np.arctan2(np.sum(weights * np.sin(phase)), np.sum(weights * np.cos(phase)))

            # compare modulo pi
            gap = np.mod(psi[j] - formula, math.pi)
            gap = min(gap, math.pi - gap)
            if gap > self.formula_tol * scale[j] / abs(f[j]):
                raise NumericalInconsistency(f"arctan formula for psi_{j + 1} off by {gap:.3e}")

        return ArgCoords(psi=psi)

    # ------------------------------------------------------------------
    # Jacobians
    # ------------------------------------------------------------------

    def _checked_parameter(self, spec: AffineSpaceSpec, p: ParameterPoint) -> np.ndarray:
        validate_length(p.r, spec.k, "parameter point")
        t = p.t[None, :]
        f = spec.forms(t)[0]
        scale = spec.form_scale(t)[0]
        for j in range(spec.m):
            if abs(f[j]) <= self.zero_tol * scale[j]:
                raise UndefinedArgument(j)
        return t

    def amoeba_jacobian(self, spec: AffineSpaceSpec, p: ParameterPoint) -> np.ndarray:
        """(k+m) x 2k Jacobian of Log(rho) in (log r, theta)"""
        return batched_jacobians(spec, self._checked_parameter(spec, p), 'amoeba')[0]

    def coamoeba_jacobian(self, spec: AffineSpaceSpec, p: ParameterPoint) -> np.ndarray:
        """(k+m) x 2k Jacobian of Arg(rho) in (log r, theta)"""
        return batched_jacobians(spec, self._checked_parameter(spec, p), 'coamoeba')[0]

    def finite_difference_jacobian(self, spec: AffineSpaceSpec, p: ParameterPoint, mode: str) -> np.ndarray:
        """Central finite differences of Log(rho) / Arg(rho) in (log r, theta)"""
        self._checked_parameter(spec, p)
        k = spec.k
        coords = np.concatenate([np.log(p.r), p.theta])
        h = self.fd_step

        def image(q: np.ndarray) -> np.ndarray:
            t = np.exp(q[:k] + 1j * q[k:])
            z = spec.image(t)
            return np.log(np.abs(z)) if mode == 'amoeba' else np.angle(z)

        columns = []
        for c in range(2 * k):
            step = np.zeros(2 * k)
            step[c] = h
            diff = image(coords + step) - image(coords - step)
            if mode == 'coamoeba':
                diff = np.mod(diff + math.pi, TWO_PI) - math.pi
            columns.append(diff / (2 * h))
        return np.column_stack(columns)

    def jacobian_error(self, spec: AffineSpaceSpec, p: ParameterPoint, mode: str) -> float:
        """Max entrywise gap between analytic and finite-difference Jacobians, relative to the matrix scale"""
        analytic = batched_jacobians(spec, self._checked_parameter(spec, p), mode)[0]
        numeric = self.finite_difference_jacobian(spec, p, mode)
        return float(np.max(np.abs(analytic - numeric)) / max(1.0, float(np.max(np.abs(analytic)))))

    # ------------------------------------------------------------------
    # Dimension
    # ------------------------------------------------------------------

    def sample_parameters(self, rng: np.random.Generator, size: int, k: int) -> np.ndarray:
        """Moduli log-uniform in [e^-R, e^R], angles uniform; returns t of shape (size, k)"""
        log_r = rng.uniform(-self.log_radius, self.log_radius, size=(size, k))
        theta = rng.uniform(0.0, TWO_PI, size=(size, k))
        return np.exp(log_r + 1j * theta)

    def dimension_estimate(
        self,
        spec: AffineSpaceSpec,
        mode: str = 'amoeba',
        n_samples: int = 64,
        seed: int = 42,
        rank_tol: Optional[float] = None
    ) -> int:
        """
        Maximum numerical rank of the (co)amoeba Jacobian over random parameters

        Args:
            spec: Affine space
            mode: 'amoeba' or 'coamoeba'
            n_samples: Number of random parameter points (>= 1)
            seed: Random seed
            rank_tol: Relative singular value threshold

        Returns:
            Estimated real dimension of the (co)amoeba
        """
        if mode not in MODES:
            raise InvalidSpec(f"mode must be one of {MODES}, got {mode!r}")
        n_samples = validate_samples(n_samples, minimum=1)
        tol = self.rank_tol if rank_tol is None else float(rank_tol)

        def chunk_rank(rng: np.random.Generator, size: int) -> int:
            t = self.sample_parameters(rng, size, spec.k)
            t = t[regular_mask(spec, t, self.zero_tol)]
            ranks = batched_rank(batched_jacobians(spec, t, mode), tol)
            return int(ranks.max()) if ranks.size else 0

        dimension = max(run_chunked(chunk_rank, n_samples, seed))
        logger.info(f"{mode} dimension estimate {dimension} (k={spec.k}, m={spec.m}, {n_samples} samples)")
        return dimension

    # ------------------------------------------------------------------
    # Logarithmic Gauss map (m = k)
    # ------------------------------------------------------------------

    def gauss_matrix(self, spec: AffineSpaceSpec, z) -> GaussMatrix:
        """
        A(z) for a point z of a k-space in (C*)^2k

        Args:
            spec: Affine space with m = k
            z: Point of length 2k lying on the space

        Returns:
            GaussMatrix
        """
        if spec.m != spec.k:
            raise NotSquareCase(spec.k, spec.m)
        k = spec.k
        z = np.asarray(z, dtype=complex).ravel()
        validate_length(z, 2 * k, "torus point")
        zero = np.flatnonzero(z == 0)
        if zero.size:
            raise OffTorus(int(zero[0]))

        residual = np.abs(spec.forms(z[:k]) - z[k:])
        if np.any(residual > self.on_space_tol * np.maximum(1.0, np.abs(z[k:]))):
            raise NotOnSpace(f"point is off the space (residual {residual.max():.3e})")

        entries = np.zeros((k, 2 * k), dtype=complex)
        entries[:, :k] = spec.a * z[:k]
        entries[:, k:] = -np.diag(z[k:])
        return GaussMatrix(entries=entries)

    def is_critical(self, spec: AffineSpaceSpec, z, rank_tol: Optional[float] = None) -> bool:
        """True iff the real rank of stack(Re A(z), Im A(z)) drops below 2k"""
        tol = self.rank_tol if rank_tol is None else float(rank_tol)
        gauss = self.gauss_matrix(spec, z)
        return numerical_rank(gauss.tilde, tol) < 2 * spec.k

    # ------------------------------------------------------------------
    # Point clouds
    # ------------------------------------------------------------------

    def sample_cloud(self, spec: AffineSpaceSpec, mode: str, grid: Tuple[int, int]) -> pd.DataFrame:
        """
        Image of a polar parameter grid under Log ('log') or Arg ('arg')

        Args:
            spec: Affine space
            mode: 'log' or 'arg'
            grid: (radial, angular) grid sizes per parameter

        Returns:
            DataFrame with columns log_r*, theta* then x* (log) or arg* (arg)
        """
        if mode not in ('log', 'arg'):
            raise InvalidSpec(f"sample mode must be 'log' or 'arg', got {mode!r}")
        k, n = spec.k, spec.n
        radial, angular = grid
        max_points = int(get_config('sampling.max_grid_points', 4000000))
        if (radial * angular) ** k > max_points:
            raise InvalidSpec(f"grid {radial}x{angular} gives {(radial * angular) ** k} points for k={k}; "
                              f"limit is {max_points}")
        log_r_axis = np.linspace(-self.log_radius, self.log_radius, radial)
        theta_axis = np.arange(angular) * (TWO_PI / angular)

        mesh = np.meshgrid(*([log_r_axis] * k + [theta_axis] * k), indexing='ij')
        coords = np.stack([g.ravel() for g in mesh], axis=-1)
        t = np.exp(coords[:, :k] + 1j * coords[:, k:])
        keep = regular_mask(spec, t, self.zero_tol)
        coords, t = coords[keep], t[keep]

        z = spec.image(t)
        image = np.log(np.abs(z)) if mode == 'log' else reduce_angle(np.angle(z))
        prefix = 'x' if mode == 'log' else 'arg'

        columns = {}
        for i in range(k):
            columns[f"log_r{i + 1}"] = coords[:, i]
        for i in range(k):
            columns[f"theta{i + 1}"] = coords[:, k + i]
        for c in range(n):
            columns[f"{prefix}{c + 1}"] = image[:, c]
        logger.info(f"Sampled {len(t)} {mode} points on a {radial}x{angular} grid")
        return pd.DataFrame(columns)


def expected_dimension(spec: AffineSpaceSpec) -> int:
    """min{2k, k+m}"""
    return min(2 * spec.k, spec.k + spec.m)

