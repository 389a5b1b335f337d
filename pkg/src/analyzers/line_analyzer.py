"""Line Analyzer Module - exact geometry of amoebas of lines (k = 1)"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from config.config import get_config
from ..errors import DimensionMismatch, InvalidSpec, NotALine, NotReal, ZeroConstant
from ..models.affine_space import (
    PIVOT_THRESHOLD,
    AffineSpaceSpec,
    LogPoint,
    ParameterPoint,
    is_real,
    line_spec,
    normalize,
)
from ..utils.validators import angle_distance, reduce_angle, validate_length

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadricCoeffs:
    """
    c_yj2 * y_j^2 + c_y12 * y_1^2 + c_r2 * r^2 + c_const = 0

    Moduli are those of the canonical line (r = |t|, y_1 = |1 + t|), j is the
    1-based canonical row and input_row the 0-based row of the input spec.
    """

    j: int
    input_row: int
    c_yj2: float
    c_y12: float
    c_r2: float
    c_const: float

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return (self.c_yj2, self.c_y12, self.c_r2, self.c_const)

    def evaluate(self, r, y1, yj):
        return self.c_yj2 * yj ** 2 + self.c_y12 * y1 ** 2 + self.c_r2 * r ** 2 + self.c_const

    def equation(self) -> str:
        """Human-readable form with a unit y_j^2 coefficient, e.g. 'y2^2 + 10 y1^2 - 14 r^2 - 35 = 0'"""
        sign = -1.0 if self.c_yj2 < 0 else 1.0
        terms = [
            (sign * self.c_y12, 'y1^2'),
            (sign * self.c_r2, 'r^2'),
            (sign * self.c_const, ''),
        ]
        text = f"y{self.j}^2"
        for coeff, name in terms:
            if abs(coeff) < 1e-12:
                continue
            magnitude = abs(coeff)
            if name and math.isclose(magnitude, 1.0):
                body = name
            else:
                body = f"{magnitude:g} {name}".strip()
            text += f" {'-' if coeff < 0 else '+'} {body}"
        return f"{text} = 0"

    def to_dict(self) -> dict:
        return {
            'j': self.j,
            'input_row': self.input_row,
            'c_yj2': self.c_yj2,
            'c_y12': self.c_y12,
            'c_r2': self.c_r2,
            'c_const': self.c_const,
            'equation': self.equation(),
        }


@dataclass(frozen=True)
class LineMembership:
    """Inside (with witness angles of the input parameter) or Outside"""

    inside: bool
    r: float
    witnesses: Tuple[float, ...] = ()

    @property
    def status(self) -> str:
        return 'Inside' if self.inside else 'Outside'

    def to_dict(self) -> dict:
        return {'status': self.status, 'r': self.r, 'witnesses': list(self.witnesses)}


@dataclass(frozen=True)
class FiberSolutions:
    """Parameters t with Log(rho(t)) = x, as an array of shape (count, k)"""

    points: np.ndarray

    @property
    def count(self) -> int:
        return int(self.points.shape[0])

    def to_dict(self) -> dict:
        return {
            'count': self.count,
            'points': [[{'re': float(v.real), 'im': float(v.imag)} for v in row] for row in self.points],
        }


def _require_line(spec: AffineSpaceSpec) -> None:
    if spec.k != 1:
        raise NotALine(spec.k)


def _dedup(points: List[complex], radius: float) -> List[complex]:
    kept: List[complex] = []
    for p in points:
        if all(abs(p - q) > radius for q in kept):
            kept.append(p)
    return kept


class LineAnalyzer:
    """Quadrics, exact membership and exact Log fibers for lines in (C*)^(1+m)"""

    def __init__(self, membership_tol: Optional[float] = None, dedup_radius: Optional[float] = None):
        """
        Initialize line analyzer

        Args:
            membership_tol: Tolerance on cos(theta) and on the modulus equations
            dedup_radius: Fiber points closer than this are merged
        """
        self.membership_tol = float(membership_tol if membership_tol is not None
                                    else get_config('line.membership_tol', 1e-7))
        self.dedup_radius = float(dedup_radius if dedup_radius is not None
                                  else get_config('line.dedup_radius', 1e-7))

    def real_line_quadrics(self, spec: AffineSpaceSpec) -> List[QuadricCoeffs]:
        """
        Quadrics W_j + T_j = 0 satisfied by the amoeba of a real line, one per row j = 2..m

        With 2 r cos(theta) = y_1^2 - r^2 - 1 and cos(theta_aj - theta_bj) = +-1:

            W_j = -y_j^2 + |a_j|^2 r^2 + |b_j|^2
            T_j = |a_j||b_j| (y_1^2 - r^2 - 1) cos(theta_aj - theta_bj)

        Args:
            spec: Real line with m >= 2 and nonzero constants

        Returns:
            List of QuadricCoeffs with c_yj2 = -1
        """
        _require_line(spec)
        if spec.m < 2:
            raise InvalidSpec("quadrics need at least two affine forms (m >= 2)")
        if not is_real(spec):
            raise NotReal()

        canonical = normalize(spec)
        line, order = canonical.spec, canonical.record.row_order
        quadrics = []
        for q in range(1, spec.m):
            a, b = line.a[q, 0], line.b[q]
            if abs(b) <= PIVOT_THRESHOLD:
                raise ZeroConstant(int(order[q]))
            ab = abs(a) * abs(b)
            cos_delta = float(np.sign((a * np.conj(b)).real))
            quadrics.append(QuadricCoeffs(
                j=q + 1,
                input_row=int(order[q]),
                c_yj2=-1.0,
                c_y12=ab * cos_delta,
                c_r2=abs(a) ** 2 - ab * cos_delta,
                c_const=abs(b) ** 2 - ab * cos_delta,
            ))
        logger.debug(f"Computed {len(quadrics)} line quadrics")
        return quadrics

    def complex_line_residual(self, spec: AffineSpaceSpec, p: ParameterPoint, j: int) -> float:
        """
        (W_j + T_j)^2 - |b_j|^2 |a_j|^2 (4 r^2 - (y_1^2 - r^2 - 1)^2) sin^2(theta_aj - theta_bj)

        evaluated on the canonical line at the point corresponding to p; this
        vanishes identically for any line, real or not.

        Args:
            spec: Line
            p: Input parameter point
            j: 1-based canonical row, 2 <= j <= m

        Returns:
            The identity residual
        """
        _require_line(spec)
        validate_length(p.r, 1, "parameter point")
        if not 2 <= j <= spec.m:
            raise DimensionMismatch(f"row j={j} out of range 2..{spec.m}")

        canonical = normalize(spec)
        line = canonical.spec
        a, b = line.a[j - 1, 0], line.b[j - 1]
        if abs(b) <= PIVOT_THRESHOLD:
            raise ZeroConstant(int(canonical.record.row_order[j - 1]))

        s = complex(canonical.record.shift_parameter(p.t)[0])
        r = abs(s)
        y1 = abs(1 + s)
        yj = abs(a * s + b)
        delta = np.angle(a) - np.angle(b)
        u = y1 ** 2 - r ** 2 - 1

        w = -yj ** 2 + abs(a) ** 2 * r ** 2 + abs(b) ** 2
        t_term = abs(a) * abs(b) * u * math.cos(delta)
        rhs = abs(b) ** 2 * abs(a) ** 2 * (4 * r ** 2 - u ** 2) * math.sin(delta) ** 2
        return float((w + t_term) ** 2 - rhs)

    def line_amoeba_membership(self, spec: AffineSpaceSpec, x: LogPoint,
                               tol: Optional[float] = None) -> LineMembership:
        """
        Decide whether x lies in the amoeba of a line

        The canonical f_1 equation fixes cos(theta) = (y_1^2 - r^2 - 1) / (2r);
        each of the (at most two) angle candidates is then checked against every
        other modulus equation.

        Args:
            spec: Line
            x: Point of R^(1+m)
            tol: Tolerance (line.membership_tol)

        Returns:
            LineMembership with witnesses as input-parameter angles in [0, 2*pi)
        """
        _require_line(spec)
        validate_length(x.x, spec.n, "log point")
        tol = self.membership_tol if tol is None else float(tol)

        canonical = normalize(spec)
        line, record = canonical.spec, canonical.record
        xc = record.to_canonical_log(x.x)
        r, y = math.exp(xc[0]), np.exp(xc[1:])
        r_input = math.exp(x.x[0])

        cos_theta = (y[0] ** 2 - r ** 2 - 1) / (2 * r)
        if cos_theta > 1 + tol or cos_theta < -1 - tol:
            return LineMembership(inside=False, r=r_input)

        angle = math.acos(min(1.0, max(-1.0, cos_theta)))
        candidates = [angle, 2 * math.pi - angle]

        shift_angle = float(np.angle(record.param_shift[0]))
        witnesses: List[float] = []
        for theta in candidates:
            s = r * np.exp(1j * theta)
            moduli = np.abs(line.a[1:, 0] * s + line.b[1:])
            if not np.all(np.abs(moduli - y[1:]) <= tol * np.maximum(1.0, y[1:])):
                continue
            witness = float(reduce_angle(theta - shift_angle))
            # theta = 0 or pi gives the same candidate twice
            if all(r * angle_distance(witness, w) > self.dedup_radius for w in witnesses):
                witnesses.append(witness)

        return LineMembership(inside=bool(witnesses), r=r_input, witnesses=tuple(witnesses))

    def line_fiber_solutions(self, spec: AffineSpaceSpec, x: LogPoint,
                             tol: Optional[float] = None) -> FiberSolutions:
        """
        All parameters t with Log(rho(t)) = x (0, 1 or 2 of them)

        Args:
            spec: Line
            x: Point of R^(1+m)
            tol: Membership tolerance

        Returns:
            FiberSolutions of shape (count, 1)
        """
        membership = self.line_amoeba_membership(spec, x, tol)
        points = [membership.r * complex(np.exp(1j * theta)) for theta in membership.witnesses]
        points = _dedup(points, self.dedup_radius)
        return FiberSolutions(points=np.array(points, dtype=complex).reshape(-1, 1))

    def product_fiber_solutions(self, spec: AffineSpaceSpec, x: LogPoint,
                                tol: Optional[float] = None) -> FiberSolutions:
        """
        Exact Log fiber of a product space

        Each affine form must depend on exactly one parameter and each parameter
        must appear in exactly one form (m = k, a is a scaled permutation with
        nonzero constants). The fiber is the product of the circle
        intersections of the k independent lines.

        Args:
            spec: Product space
            x: Point of R^(2k)
            tol: Membership tolerance

        Returns:
            FiberSolutions of shape (count, k)
        """
        k = spec.k
        validate_length(x.x, spec.n, "log point")
        support = spec.a != 0
        if (spec.m != k or not np.all(support.sum(axis=0) == 1)
                or not np.all(support.sum(axis=1) == 1)):
            raise InvalidSpec("not a product space: each form must involve exactly one parameter")
        if np.any(np.abs(spec.b) <= PIVOT_THRESHOLD):
            raise InvalidSpec("product space rows need nonzero constants")

        per_coordinate: List[List[complex]] = [[] for _ in range(k)]
        for j in range(spec.m):
            i = int(np.flatnonzero(support[j])[0])
            factor = line_spec((spec.a[j, i], spec.b[j]))
            sub = self.line_fiber_solutions(factor, LogPoint([x.x[i], x.x[k + j]]), tol)
            per_coordinate[i] = list(sub.points[:, 0])

        points = list(itertools.product(*per_coordinate))
        return FiberSolutions(points=np.array(points, dtype=complex).reshape(-1, k))
