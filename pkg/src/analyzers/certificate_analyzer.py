"""Certificate Analyzer Module - torus-fiber search and positive certificates for (co)amoebas of ideals"""

import logging
import time
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import least_squares

from config.config import get_config
from ..errors import DimensionMismatch, DimensionTooLarge, InvalidSpec
from ..models.affine_space import LogPoint, TorusPoint
from ..models.laurent import LaurentPolynomial
from ..utils.parallel import map_chunks
from ..utils.validators import TWO_PI

logger = logging.getLogger(__name__)

INSIDE = 'INSIDE'
OUTSIDE = 'OUTSIDE'
INDETERMINATE = 'INDETERMINATE'


@dataclass(frozen=True, eq=False)
class TorusFiber:
    """The real torus T_r of points whose coordinate moduli are exp(r.x)"""

    r: LogPoint

    @property
    def n(self) -> int:
        return len(self.r)

    @property
    def moduli(self) -> np.ndarray:
        return np.exp(self.r.x)

    def points(self, angles: np.ndarray) -> np.ndarray:
        """Points R e^{i theta} for angles of shape (..., n)"""
        return self.moduli * np.exp(1j * np.asarray(angles, dtype=float))


@dataclass(frozen=True, eq=False)
class CertificateReport:
    """
    Positive certificate G = sum f_j g_j on a fiber

    Attributes:
        G: The certificate polynomial (equal to sum |f_j|^2 on the fiber)
        grid_min: Minimum of sum |f_j|^2 over the search grid
        grid_size: Grid points per dimension
        identity_residual: max |G - sum |f_j|^2| over the check grid, scaled by max(1, sum of squared bounds)
        refined_min: Minimum after local refinement of the best grid points
        lipschitz_bound: Bound on the variation of sum |f_j|^2 per unit grid coordinate (summed over axes)
        verdict: INSIDE, OUTSIDE or INDETERMINATE
        argmin: Grid coordinates of the best point found
    """

    G: LaurentPolynomial
    grid_min: float
    grid_size: int
    identity_residual: float
    refined_min: float
    lipschitz_bound: float
    verdict: str
    argmin: np.ndarray

    def to_dict(self) -> Dict:
        return {
            'verdict': self.verdict,
            'grid_min': self.grid_min,
            'refined_min': self.refined_min,
            'grid_size': self.grid_size,
            'identity_residual': self.identity_residual,
            'lipschitz_bound': self.lipschitz_bound,
            'argmin': [float(v) for v in self.argmin],
            'G': self.G.to_dict(),
        }


@dataclass(frozen=True)
class _SearchResult:
    grid_min: float
    refined_min: float
    argmin: np.ndarray


def conjugate_reflection(f: LaurentPolynomial, fiber: TorusFiber) -> LaurentPolynomial:
    """
    g(z) = sum conj(a_alpha) (R^2 / z)^alpha, so that f g = |f|^2 on T_r

    Args:
        f: Laurent polynomial
        fiber: Torus fiber with moduli R

    Returns:
        g with terms (-alpha, conj(a_alpha) R^(2 alpha))
    """
    if fiber.n != f.n:
        raise DimensionMismatch(f"fiber has {fiber.n} coordinates, polynomial has {f.n}")
    moduli_sq = fiber.moduli ** 2
    return LaurentPolynomial(tuple(
        (tuple(-e for e in alpha), np.conj(c) * float(np.prod(moduli_sq ** np.array(alpha))))
        for alpha, c in f.terms
    ))


def coamoeba_reflection(f: LaurentPolynomial, theta: TorusPoint) -> LaurentPolynomial:
    """
    g(z) = sum conj(a_alpha) e^{-2i <theta, alpha>} z^alpha, so that f g = |f|^2 on Arg^-1(theta)

    Args:
        f: Laurent polynomial
        theta: Point of the real torus

    Returns:
        g with terms (alpha, conj(a_alpha) e^{-2i <theta, alpha>})
    """
    if len(theta) != f.n:
        raise DimensionMismatch(f"torus point has {len(theta)} coordinates, polynomial has {f.n}")
    return LaurentPolynomial(tuple(
        (alpha, np.conj(c) * np.exp(-2j * float(np.dot(theta.angles, alpha))))
        for alpha, c in f.terms
    ))


def certificate_polynomial(generators: Sequence[LaurentPolynomial],
                           reflections: Sequence[LaurentPolynomial]) -> LaurentPolynomial:
    """G = sum_j f_j g_j"""
    total = None
    for f, g in zip(generators, reflections):
        total = f * g if total is None else total + f * g
    return total


class CertificateAnalyzer:
    """Fiber minimization and certificate construction for finitely generated ideals"""

    def __init__(self, max_dim: Optional[int] = None, inside_tol: Optional[float] = None,
                 check_grid: Optional[int] = None, candidates: Optional[int] = None,
                 log_box: Optional[float] = None):
        """
        Initialize certificate analyzer

        Args:
            max_dim: Largest torus dimension accepted for grid search
            inside_tol: sqrt(refined minimum) at or below this means INSIDE
            check_grid: Grid per dimension for the identity check (capped by the search grid)
            candidates: Number of best grid points refined locally
            log_box: Half-width of the log-modulus box searched for coamoeba certificates
        """
        self.max_dim = int(max_dim if max_dim is not None else get_config('certificate.max_dim', 3))
        self.inside_tol = float(inside_tol if inside_tol is not None else get_config('certificate.inside_tol', 1e-6))
        self.check_grid = int(check_grid if check_grid is not None else get_config('certificate.check_grid', 64))
        self.candidates = int(candidates if candidates is not None else get_config('certificate.candidates', 8))
        self.log_box = float(log_box if log_box is not None else get_config('certificate.log_box', 3.0))

    # ------------------------------------------------------------------
    # Guards and shared search
    # ------------------------------------------------------------------

    def _check_inputs(self, generators: Sequence[LaurentPolynomial], n: int, grid: int) -> None:
        if not generators:
            raise InvalidSpec("at least one generator is required")
        if any(g.n != n for g in generators):
            raise DimensionMismatch(f"generators must live in a torus of dimension {n}")
        if n > self.max_dim:
            raise DimensionTooLarge(f"grid search supports n <= {self.max_dim}, got n = {n}")
        if grid < 8:
            raise InvalidSpec(f"grid must have at least 8 points per dimension, got {grid}")

    @staticmethod
    def _sum_of_squares(generators: Sequence[LaurentPolynomial], z: np.ndarray) -> np.ndarray:
        return sum(np.abs(f(z)) ** 2 for f in generators)

    def _search(self, generators: Sequence[LaurentPolynomial], to_points: Callable[[np.ndarray], np.ndarray],
                axis: np.ndarray, n: int, refine: int,
                bounds: Tuple[float, float] = (-np.inf, np.inf)) -> _SearchResult:
        """Grid sweep of sum |f_j|^2 over axis^n, then least-squares refinement of the best points"""
        grid = axis.size
        shape = (grid,) * n
        keep = self.candidates

        def sweep(lo: int, hi: int) -> Tuple[np.ndarray, np.ndarray]:
            coords = axis[np.stack(np.unravel_index(np.arange(lo, hi), shape), axis=-1)]
            values = self._sum_of_squares(generators, to_points(coords))
            if values.size > keep:
                best = np.argpartition(values, keep)[:keep]
                return coords[best], values[best]
            return coords, values

        start = time.time()
        chunks = map_chunks(sweep, grid ** n)
        coords = np.concatenate([c[0] for c in chunks])
        values = np.concatenate([c[1] for c in chunks])
        order = np.argsort(values, kind='stable')[:keep]
        grid_min = float(values[order[0]])
        best_point, refined_min = coords[order[0]], grid_min

        def residuals(q: np.ndarray) -> np.ndarray:
            z = to_points(q[None, :])
            parts = [f(z) for f in generators]
            return np.concatenate([np.concatenate([p.real, p.imag]) for p in parts])

        if refine > 0:
            for q0 in coords[order]:
                fit = least_squares(residuals, q0, max_nfev=refine, bounds=bounds,
                                    xtol=1e-15, ftol=1e-15, gtol=1e-15)
                value = float(np.sum(fit.fun ** 2))
                if value < refined_min:
                    best_point, refined_min = fit.x, value

        logger.info(f"Searched {grid ** n} grid points in {len(chunks)} chunks "
                    f"(grid_min {grid_min:.3e}, refined {refined_min:.3e}, {time.time() - start:.2f}s)")
        return _SearchResult(grid_min=grid_min, refined_min=refined_min, argmin=np.asarray(best_point, dtype=float))

    def _identity_residual(self, generators: Sequence[LaurentPolynomial], G: LaurentPolynomial,
                           to_points: Callable[[np.ndarray], np.ndarray], axis: np.ndarray, n: int,
                           scale: float) -> float:
        mesh = np.meshgrid(*([axis] * n), indexing='ij')
        z = to_points(np.stack([m.ravel() for m in mesh], axis=-1))
        gap = np.max(np.abs(G(z) - self._sum_of_squares(generators, z)))
        return float(gap / max(1.0, scale))

    # ------------------------------------------------------------------
    # Amoeba side
    # ------------------------------------------------------------------

    def lipschitz_bound(self, generators: Sequence[LaurentPolynomial], fiber: TorusFiber) -> float:
        """
        sum_i sup |d(sum_j |f_j|^2) / d theta_i| on T_r, bounded by 2 sum_j |f_j|max |df_j/dtheta_i|max
        """
        total = 0.0
        for f in generators:
            total += 2.0 * f.abs_bound(fiber.moduli) * float(np.sum(f.angle_derivative_bounds(fiber.moduli)))
        return total

    def fiber_min(self, f: LaurentPolynomial, fiber: TorusFiber, grid_per_dim: Optional[int] = None,
                  refine_steps: Optional[int] = None) -> float:
        """
        Approximate min |f| over the fiber T_r

        Log(r) lies in the amoeba of V(f) exactly when this minimum is zero.

        Args:
            f: Laurent polynomial in n <= 3 variables
            fiber: Torus fiber
            grid_per_dim: Angles per dimension (>= 8)
            refine_steps: Function evaluations per local refinement

        Returns:
            Approximate minimum of |f| on T_r
        """
        grid = int(grid_per_dim if grid_per_dim is not None else get_config('certificate.grid', 256))
        refine = int(refine_steps if refine_steps is not None else get_config('certificate.refine', 200))
        if fiber.n != f.n:
            raise DimensionMismatch(f"fiber has {fiber.n} coordinates, polynomial has {f.n}")
        self._check_inputs([f], f.n, grid)

        axis = np.arange(grid) * (TWO_PI / grid)
        result = self._search([f], fiber.points, axis, f.n, refine)
        return float(np.sqrt(result.refined_min))

    def certificate(self, generators: Sequence[LaurentPolynomial], fiber: TorusFiber,
                    grid: Optional[int] = None, refine: Optional[int] = None) -> CertificateReport:
        """
        Build G = sum f_j g_j for the fiber T_r and decide membership of Log(r)

        G equals sum |f_j|^2 on T_r. A grid minimum above the Lipschitz
        variation over half a grid cell certifies that G has no zero on T_r,
        so Log(r) is outside the amoeba of the variety; a refined minimum
        below inside_tol reports a zero.

        Args:
            generators: Generators f_j of the ideal
            fiber: Torus fiber T_r
            grid: Angles per dimension (>= 8)
            refine: Function evaluations per local refinement

        Returns:
            CertificateReport
        """
        grid = int(grid if grid is not None else get_config('certificate.grid', 256))
        refine = int(refine if refine is not None else get_config('certificate.refine', 200))
        n = fiber.n
        self._check_inputs(generators, n, grid)

        G = certificate_polynomial(generators, [conjugate_reflection(f, fiber) for f in generators])
        axis = np.arange(grid) * (TWO_PI / grid)
        result = self._search(generators, fiber.points, axis, n, refine)

        check = min(grid, self.check_grid)
        scale = sum(f.abs_bound(fiber.moduli) ** 2 for f in generators)
        residual = self._identity_residual(generators, G, fiber.points,
                                           np.arange(check) * (TWO_PI / check), n, scale)

        lipschitz = self.lipschitz_bound(generators, fiber)
        spacing = TWO_PI / grid
        if np.sqrt(result.refined_min) <= self.inside_tol:
            verdict = INSIDE
        elif result.grid_min > lipschitz * spacing / 2.0:
            verdict = OUTSIDE
        else:
            verdict = INDETERMINATE
        if residual > 1e-8:
            logger.warning(f"certificate identity residual {residual:.3e} exceeds 1e-8")

        return CertificateReport(G=G, grid_min=result.grid_min, grid_size=grid, identity_residual=residual,
                                 refined_min=result.refined_min, lipschitz_bound=lipschitz,
                                 verdict=verdict, argmin=result.argmin)

    # ------------------------------------------------------------------
    # Coamoeba side
    # ------------------------------------------------------------------

    def coamoeba_certificate(self, generators: Sequence[LaurentPolynomial], theta: TorusPoint,
                             grid: Optional[int] = None, refine: Optional[int] = None) -> CertificateReport:
        """
        Certificate G = sum f_j g_j on the argument fiber Arg^-1(theta)

        Log-moduli are searched on a grid over [-log_box, log_box]^n. The
        fiber is unbounded, so only INSIDE can be certified; everything else
        is INDETERMINATE and the Lipschitz bound refers to the box.

        Args:
            generators: Generators f_j of the ideal
            theta: Point of the real torus
            grid: Log-moduli per dimension (>= 8)
            refine: Function evaluations per local refinement

        Returns:
            CertificateReport with argmin in log-modulus coordinates
        """
        grid = int(grid if grid is not None else get_config('certificate.grid', 256))
        refine = int(refine if refine is not None else get_config('certificate.refine', 200))
        n = len(theta)
        self._check_inputs(generators, n, grid)

        G = certificate_polynomial(generators, [coamoeba_reflection(f, theta) for f in generators])
        phases = np.exp(1j * theta.angles)
        box = self.log_box

        def to_points(u: np.ndarray) -> np.ndarray:
            return np.exp(u) * phases

        axis = np.linspace(-box, box, grid)
        result = self._search(generators, to_points, axis, n, refine, bounds=(-2.0 * box, 2.0 * box))

        box_bounds = [self._box_bounds(f, box) for f in generators]
        scale = sum(b[0] ** 2 for b in box_bounds)
        check = min(grid, self.check_grid)
        residual = self._identity_residual(generators, G, to_points, np.linspace(-box, box, check), n, scale)
        lipschitz = sum(2.0 * bound * derivative for bound, derivative in box_bounds)

        verdict = INSIDE if np.sqrt(result.refined_min) <= self.inside_tol else INDETERMINATE
        return CertificateReport(G=G, grid_min=result.grid_min, grid_size=grid, identity_residual=residual,
                                 refined_min=result.refined_min, lipschitz_bound=lipschitz,
                                 verdict=verdict, argmin=result.argmin)

    @staticmethod
    def _box_bounds(f: LaurentPolynomial, box: float) -> Tuple[float, float]:
        """Bounds for |f| and sum_i |df/du_i| over log-moduli in [-box, box]^n"""
        weights = np.abs(f.coefficients) * np.exp(box * np.abs(f.exponents).sum(axis=1))
        return float(np.sum(weights)), float(np.sum(np.abs(f.exponents).sum(axis=1) * weights))

