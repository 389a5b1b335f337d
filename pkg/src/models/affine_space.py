"""Affine linear spaces in the complex torus: parametrization, canonical form, Log and Arg"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Union

import numpy as np

from config.config import get_config
from ..errors import (
    AllConstantsZero,
    DimensionMismatch,
    InvalidSpec,
    IoError,
    NotReal,
    OffTorus,
    ZeroConstant,
    ZeroRowCoefficient,
)
from ..utils.validators import reduce_angle, validate_finite, validate_length

logger = logging.getLogger(__name__)

PIVOT_THRESHOLD = 1e-12


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class AffineSpaceSpec:
    """
    k-dimensional affine space in (C*)^(k+m) parametrized by

        t -> (t_1, ..., t_k, f_1(t), ..., f_m(t)),  f_j(t) = b_j + sum_i a_ji t_i

    Attributes:
        a: m x k complex coefficient matrix
        b: length-m complex constants
    """

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = validate_finite(np.asarray(self.a, dtype=complex), "a")
        b = validate_finite(np.asarray(self.b, dtype=complex).ravel(), "b")
        if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
            raise InvalidSpec(f"a must be a non-empty m x k matrix, got shape {a.shape}")
        if b.shape[0] != a.shape[0]:
            raise InvalidSpec(f"b has length {b.shape[0]}, expected m = {a.shape[0]}")
        for j in range(a.shape[0]):
            if b[j] == 0 and not np.any(a[j]):
                raise InvalidSpec(f"f_{j + 1} is identically zero")
        object.__setattr__(self, 'a', _frozen(a))
        object.__setattr__(self, 'b', _frozen(b))

    @property
    def k(self) -> int:
        return self.a.shape[1]

    @property
    def m(self) -> int:
        return self.a.shape[0]

    @property
    def n(self) -> int:
        """Dimension of the ambient torus"""
        return self.k + self.m

    def forms(self, t: np.ndarray) -> np.ndarray:
        """Vectorized f(t): t of shape (..., k) -> (..., m)"""
        return self.b + np.asarray(t, dtype=complex) @ self.a.T

    def form_scale(self, t: np.ndarray) -> np.ndarray:
        """|b_j| + sum_i |a_ji| |t_i|, the natural size of f_j(t)"""
        return np.abs(self.b) + np.abs(np.asarray(t, dtype=complex)) @ np.abs(self.a).T

    def image(self, t: np.ndarray) -> np.ndarray:
        """Vectorized rho(t) = (t, f(t)) without torus checks"""
        t = np.asarray(t, dtype=complex)
        return np.concatenate([t, self.forms(t)], axis=-1)

    def is_canonical(self) -> bool:
        return self.b[0] == 1 and bool(np.all(self.a[0] == 1))

    def same_as(self, other: "AffineSpaceSpec") -> bool:
        """Exact coefficient equality"""
        return np.array_equal(self.a, other.a) and np.array_equal(self.b, other.b)

    def __repr__(self) -> str:
        return f"AffineSpaceSpec(k={self.k}, m={self.m}, a={self.a.tolist()}, b={self.b.tolist()})"


@dataclass(frozen=True, eq=False)
class ParameterPoint:
    """Polar parameter coordinates: t_i = r_i e^{i theta_i}"""

    r: np.ndarray
    theta: np.ndarray

    def __post_init__(self):
        r = validate_finite(np.asarray(self.r, dtype=float).ravel(), "r")
        theta = validate_finite(np.asarray(self.theta, dtype=float).ravel(), "theta")
        if r.shape != theta.shape:
            raise DimensionMismatch(f"r has length {r.size}, theta has length {theta.size}")
        if np.any(r <= 0):
            raise InvalidSpec("moduli r_i must be strictly positive")
        object.__setattr__(self, 'r', _frozen(r))
        object.__setattr__(self, 'theta', _frozen(reduce_angle(theta)))

    @property
    def t(self) -> np.ndarray:
        return self.r * np.exp(1j * self.theta)

    @classmethod
    def from_t(cls, t: Sequence[complex]) -> "ParameterPoint":
        t = np.asarray(t, dtype=complex).ravel()
        return cls(r=np.abs(t), theta=np.angle(t))


@dataclass(frozen=True, eq=False)
class LogPoint:
    """Point of R^n, the image of the logarithmic map"""

    x: np.ndarray

    def __post_init__(self):
        x = validate_finite(np.asarray(self.x, dtype=float).ravel(), "log point")
        object.__setattr__(self, 'x', _frozen(x))

    def __len__(self) -> int:
        return self.x.size


@dataclass(frozen=True, eq=False)
class TorusPoint:
    """Point of the real torus as angles in [0, 2*pi)"""

    angles: np.ndarray

    def __post_init__(self):
        angles = validate_finite(np.asarray(self.angles, dtype=float).ravel(), "torus point")
        object.__setattr__(self, 'angles', _frozen(reduce_angle(angles)))

    def __len__(self) -> int:
        return self.angles.size


@dataclass(frozen=True, eq=False)
class TranslationRecord:
    """
    Torus translation relating an input space to its canonical form

    For every parameter t of the input space:
        Log(rho(t)) = to_input_order(Log(psi(c * t))) + log_shift
        Arg(rho(t)) = to_input_order(Arg(psi(c * t))) + arg_shift  (mod 2*pi)

    Attributes:
        log_shift: length k+m real vector
        arg_shift: length k+m angles in [0, 2*pi)
        param_shift: the vector c (length k)
        row_order: row_order[q] is the input row moved to canonical row q
    """

    log_shift: np.ndarray
    arg_shift: np.ndarray
    param_shift: np.ndarray
    row_order: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'log_shift', _frozen(np.asarray(self.log_shift, dtype=float)))
        object.__setattr__(self, 'arg_shift', _frozen(reduce_angle(np.asarray(self.arg_shift, dtype=float))))
        object.__setattr__(self, 'param_shift', _frozen(np.asarray(self.param_shift, dtype=complex)))
        object.__setattr__(self, 'row_order', _frozen(np.asarray(self.row_order, dtype=int)))

    @property
    def k(self) -> int:
        return self.param_shift.size

    def is_identity(self) -> bool:
        return (
            bool(np.all(self.log_shift == 0))
            and bool(np.all(self.arg_shift == 0))
            and bool(np.all(self.param_shift == 1))
            and bool(np.all(self.row_order == np.arange(self.row_order.size)))
        )

    def _to_input_order(self, values: np.ndarray) -> np.ndarray:
        values = np.asarray(values, dtype=float)
        out = np.array(values, copy=True)
        out[..., self.k + self.row_order] = values[..., self.k:]
        return out

    def _to_canonical_order(self, values: np.ndarray) -> np.ndarray:
        values = np.asarray(values, dtype=float)
        out = np.array(values, copy=True)
        out[..., self.k:] = values[..., self.k + self.row_order]
        return out

    def to_input_log(self, x_canonical: np.ndarray) -> np.ndarray:
        return self._to_input_order(x_canonical) + self.log_shift

    def to_canonical_log(self, x_input: np.ndarray) -> np.ndarray:
        return self._to_canonical_order(np.asarray(x_input, dtype=float) - self.log_shift)

    def to_input_arg(self, theta_canonical: np.ndarray) -> np.ndarray:
        return reduce_angle(self._to_input_order(theta_canonical) + self.arg_shift)

    def to_canonical_arg(self, theta_input: np.ndarray) -> np.ndarray:
        return reduce_angle(self._to_canonical_order(np.asarray(theta_input, dtype=float) - self.arg_shift))

    def shift_parameter(self, t: np.ndarray) -> np.ndarray:
        """Input parameter t -> canonical parameter c * t"""
        return self.param_shift * np.asarray(t, dtype=complex)

    def unshift_parameter(self, s: np.ndarray) -> np.ndarray:
        """Canonical parameter s -> input parameter s / c"""
        return np.asarray(s, dtype=complex) / self.param_shift


@dataclass(frozen=True, eq=False)
class CanonicalSpec:
    """Canonical space (f_1 = 1 + sum t_i) together with its translation record"""

    spec: AffineSpaceSpec
    record: TranslationRecord = field(repr=False)


def normalize(spec: AffineSpaceSpec, pivot: Optional[int] = None) -> CanonicalSpec:
    """
    Translate a space to canonical form f_1(t) = 1 + sum_i t_i

    The pivot row (first row with |b_j| > 1e-12 unless overridden) is moved
    first; coordinates are divided by b_pivot and the parameters scaled by
    c_i = a_{pivot,i} / b_pivot.

    Args:
        spec: Input space
        pivot: Optional row index to use as the pivot

    Returns:
        CanonicalSpec with the translation record
    """
    k, m = spec.k, spec.m
    if pivot is None:
        candidates = np.flatnonzero(np.abs(spec.b) > PIVOT_THRESHOLD)
        if candidates.size == 0:
            raise AllConstantsZero()
        pivot = int(candidates[0])
    elif not 0 <= pivot < m:
        raise DimensionMismatch(f"pivot row {pivot} out of range for m={m}")
    elif abs(spec.b[pivot]) <= PIVOT_THRESHOLD:
        raise ZeroConstant(pivot)

    pivot_row = spec.a[pivot]
    zero_idx = np.flatnonzero(pivot_row == 0)
    if zero_idx.size:
        raise ZeroRowCoefficient(pivot, int(zero_idx[0]))

    b_p = spec.b[pivot]
    row_order = np.array([pivot] + [j for j in range(m) if j != pivot])
    c = pivot_row / b_p

    new_a = spec.a[row_order] / pivot_row
    new_b = spec.b[row_order] / b_p
    # complex x / x is not always exactly 1
    new_a[0] = 1
    new_b[0] = 1

    record = TranslationRecord(
        log_shift=np.concatenate([-np.log(np.abs(c)), np.full(m, np.log(abs(b_p)))]),
        arg_shift=np.concatenate([-np.angle(c), np.full(m, np.angle(b_p))]),
        param_shift=c,
        row_order=row_order,
    )
    logger.debug(f"Normalized space with pivot row {pivot}")
    return CanonicalSpec(spec=AffineSpaceSpec(a=new_a, b=new_b), record=record)


def evaluate(spec: AffineSpaceSpec, t: Sequence[complex]) -> np.ndarray:
    """
    Evaluate rho(t) = (t_1, ..., t_k, f_1(t), ..., f_m(t))

    Args:
        spec: Affine space
        t: length-k parameter with nonzero entries

    Returns:
        Complex vector of length k+m
    """
    t = np.asarray(t, dtype=complex).ravel()
    validate_length(t, spec.k, "parameter t")
    zero_tol = float(get_config('tolerances.zero', 1e-12))

    for i, ti in enumerate(t):
        if ti == 0:
            raise OffTorus(i)

    values = spec.forms(t)
    scale = spec.form_scale(t)
    for j in range(spec.m):
        if abs(values[j]) <= zero_tol * scale[j]:
            raise OffTorus(spec.k + j)

    return np.concatenate([t, values])


def log_map(z: Sequence[complex]) -> LogPoint:
    """Componentwise log|z_i|"""
    z = np.asarray(z, dtype=complex).ravel()
    zero = np.flatnonzero(z == 0)
    if zero.size:
        raise OffTorus(int(zero[0]))
    return LogPoint(np.log(np.abs(z)))


def arg_map(z: Sequence[complex]) -> TorusPoint:
    """Componentwise arg(z_i) in [0, 2*pi)"""
    z = np.asarray(z, dtype=complex).ravel()
    zero = np.flatnonzero(z == 0)
    if zero.size:
        raise OffTorus(int(zero[0]))
    return TorusPoint(np.angle(z))


def _projectively_real(values: np.ndarray, tol: float) -> bool:
    """True if all values are real multiples of the largest-modulus one"""
    if values.size == 0:
        return True
    moduli = np.abs(values)
    ref = values[np.argmax(moduli)]
    if ref == 0:
        return True
    return bool(np.max(np.abs(np.imag(values / ref))) <= tol)


def is_real(spec: AffineSpaceSpec, tol: Optional[float] = None) -> bool:
    """
    Projective realness of the coefficient ratios a_ji / b_j

    For every i the vector (a_1i/b_1 : ... : a_mi/b_m) must be a real point of
    projective space. Rows with b_j = 0 are checked among themselves on the
    a_ji alone.

    Args:
        spec: Affine space
        tol: Tolerance on normalized imaginary parts (tolerances.realness)

    Returns:
        True if the space is real
    """
    if tol is None:
        tol = float(get_config('tolerances.realness', 1e-9))

    with_constant = np.abs(spec.b) > PIVOT_THRESHOLD * max(1.0, float(np.max(np.abs(spec.b))))
    for i in range(spec.k):
        ratios = spec.a[with_constant, i] / spec.b[with_constant]
        if not _projectively_real(ratios, tol):
            return False
        if not _projectively_real(spec.a[~with_constant, i], tol):
            return False
    return True


def realify(spec: AffineSpaceSpec, tol: Optional[float] = None) -> CanonicalSpec:
    """
    Translate a real space so that all of its coefficients are real

    Normalizes first, then rotates every canonical row by the phase that makes
    its constant (or, when b_j = 0, its first nonzero coefficient) positive.

    Args:
        spec: A real affine space
        tol: Realness tolerance

    Returns:
        CanonicalSpec with real coefficients and the composed record
    """
    if tol is None:
        tol = float(get_config('tolerances.realness', 1e-9))
    if not is_real(spec, tol):
        raise NotReal()

    canonical = normalize(spec)
    a, b = canonical.spec.a, canonical.spec.b
    phases = np.ones(spec.m, dtype=complex)
    for q in range(spec.m):
        anchor = b[q] if b[q] != 0 else a[q][np.flatnonzero(a[q])[0]]
        phases[q] = np.conj(anchor) / abs(anchor)

    rotated_a = a * phases[:, None]
    rotated_b = b * phases
    scale = max(1.0, float(np.max(np.abs(rotated_a))), float(np.max(np.abs(rotated_b))))
    if max(np.max(np.abs(rotated_a.imag)), np.max(np.abs(rotated_b.imag))) > tol * scale:
        raise NotReal()

    record = canonical.record
    arg_shift = np.array(record.arg_shift, copy=True)
    arg_shift[spec.k + record.row_order] -= np.angle(phases)
    real_record = TranslationRecord(
        log_shift=record.log_shift,
        arg_shift=arg_shift,
        param_shift=record.param_shift,
        row_order=record.row_order,
    )
    real_spec = AffineSpaceSpec(a=rotated_a.real.astype(complex), b=rotated_b.real.astype(complex))
    return CanonicalSpec(spec=real_spec, record=real_record)


def _complex_from_json(entry: Any) -> complex:
    if isinstance(entry, dict):
        return complex(float(entry.get('re', 0.0)), float(entry.get('im', 0.0)))
    if isinstance(entry, (int, float)):
        return complex(entry)
    raise InvalidSpec(f"cannot read complex number from {entry!r}")


def _complex_to_json(value: complex) -> Dict[str, float]:
    return {'re': float(value.real), 'im': float(value.imag)}


def spec_from_dict(data: Dict[str, Any]) -> AffineSpaceSpec:
    """
    Build a spec from the JSON object {"k", "m", "a": [[{re, im}, ...], ...], "b": [...]}
    """
    try:
        a = np.array([[_complex_from_json(e) for e in row] for row in data['a']], dtype=complex)
        b = np.array([_complex_from_json(e) for e in data['b']], dtype=complex)
    except (KeyError, TypeError) as e:
        raise InvalidSpec(f"malformed spec object: {e}")

    spec = AffineSpaceSpec(a=a, b=b)
    if 'k' in data and int(data['k']) != spec.k:
        raise InvalidSpec(f"declared k={data['k']} but a has {spec.k} columns")
    if 'm' in data and int(data['m']) != spec.m:
        raise InvalidSpec(f"declared m={data['m']} but a has {spec.m} rows")
    return spec


def spec_to_dict(spec: AffineSpaceSpec) -> Dict[str, Any]:
    return {
        'k': spec.k,
        'm': spec.m,
        'a': [[_complex_to_json(v) for v in row] for row in spec.a],
        'b': [_complex_to_json(v) for v in spec.b],
    }


def load_spec(path: Union[str, Path]) -> AffineSpaceSpec:
    """Load a spec JSON file"""
    try:
        with open(path, 'r') as f:
            data = json.load(f)
    except OSError as e:
        raise IoError(f"cannot read spec file {path}: {e}")
    except json.JSONDecodeError as e:
        raise InvalidSpec(f"spec file {path} is not valid JSON: {e}")
    return spec_from_dict(data)


def line_spec(*forms: Sequence[complex]) -> AffineSpaceSpec:
    """
    Convenience constructor for lines: line_spec((a_1, b_1), (a_2, b_2), ...)
    gives t -> (t, a_1 t + b_1, a_2 t + b_2, ...)
    """
    a = np.array([[complex(f[0])] for f in forms], dtype=complex)
    b = np.array([complex(f[1]) for f in forms], dtype=complex)
    return AffineSpaceSpec(a=a, b=b)
