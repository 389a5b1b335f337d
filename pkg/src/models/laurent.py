"""Laurent polynomials on the complex torus"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np

from ..errors import DimensionMismatch, InvalidSpec, IoError

Exponent = Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class LaurentPolynomial:
    """
    f(z) = sum_alpha a_alpha z^alpha with integer (possibly negative) exponents

    Terms are stored sorted by exponent with like terms combined; terms whose
    coefficient is exactly zero are dropped.
    """

    terms: Tuple[Tuple[Exponent, complex], ...]

    def __post_init__(self):
        combined: Dict[Exponent, complex] = {}
        n = None
        for alpha, coeff in self.terms:
            alpha = tuple(int(e) for e in alpha)
            if n is None:
                n = len(alpha)
            elif len(alpha) != n:
                raise DimensionMismatch("all exponents must have the same length")
            coeff = complex(coeff)
            if not np.isfinite(coeff):
                raise InvalidSpec("non-finite Laurent coefficient")
            combined[alpha] = combined.get(alpha, 0j) + coeff
        terms = tuple(sorted((a, c) for a, c in combined.items() if c != 0))
        if not terms:
            raise InvalidSpec("a Laurent polynomial needs at least one nonzero term")
        object.__setattr__(self, 'terms', terms)

    @classmethod
    def from_dict(cls, mapping: Dict[Sequence[int], complex]) -> "LaurentPolynomial":
        return cls(tuple((tuple(alpha), c) for alpha, c in mapping.items()))

    @property
    def n(self) -> int:
        return len(self.terms[0][0])

    @property
    def exponents(self) -> np.ndarray:
        return np.array([alpha for alpha, _ in self.terms], dtype=int)

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([c for _, c in self.terms], dtype=complex)

    def as_dict(self) -> Dict[Exponent, complex]:
        return dict(self.terms)

    def __call__(self, z: np.ndarray) -> np.ndarray:
        """
        Evaluate at points z of shape (..., n) (nonzero entries)

        Returns:
            Complex array of shape (...)
        """
        z = np.asarray(z, dtype=complex)
        if z.shape[-1] != self.n:
            raise DimensionMismatch(f"point has {z.shape[-1]} coordinates, polynomial has {self.n}")
        # one row of monomials z^alpha per term
        monomials = np.prod(z[..., None, :] ** self.exponents, axis=-1)
        return monomials @ self.coefficients

    def __add__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        return LaurentPolynomial(self.terms + other.terms)

    def __mul__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        products = []
        for alpha, c in self.terms:
            for beta, d in other.terms:
                products.append((tuple(x + y for x, y in zip(alpha, beta)), c * d))
        return LaurentPolynomial(tuple(products))

    def scale_monomial(self, coeff: complex, beta: Sequence[int]) -> "LaurentPolynomial":
        """Multiply by the monomial coeff * z^beta"""
        return self * LaurentPolynomial(((tuple(beta), coeff),))

    def abs_bound(self, moduli: np.ndarray) -> float:
        """sum |a_alpha| R^alpha, an upper bound for |f| on the fiber of moduli R"""
        moduli = np.asarray(moduli, dtype=float)
        return float(np.sum(np.abs(self.coefficients) * np.prod(moduli ** self.exponents, axis=-1)))

    def angle_derivative_bounds(self, moduli: np.ndarray) -> np.ndarray:
        """Per-angle bounds sum |alpha_i| |a_alpha| R^alpha for |d f / d theta_i| on the fiber"""
        moduli = np.asarray(moduli, dtype=float)
        weights = np.abs(self.coefficients) * np.prod(moduli ** self.exponents, axis=-1)
        return np.abs(self.exponents).T @ weights

    def to_dict(self) -> Dict:
        return {
            'terms': [
                {'alpha': list(alpha), 're': float(c.real), 'im': float(c.imag)}
                for alpha, c in self.terms
            ]
        }

    def __repr__(self) -> str:
        parts = []
        for alpha, c in self.terms:
            mono = '*'.join(f"z{i + 1}^{e}" for i, e in enumerate(alpha) if e != 0)
            parts.append(f"({c.real:g}{c.imag:+g}j){'*' + mono if mono else ''}")
        return ' + '.join(parts)


def polynomial_from_dict(data: Dict) -> LaurentPolynomial:
    """Read {"terms": [{"alpha": [...], "re": .., "im": ..}, ...]}"""
    try:
        return LaurentPolynomial(tuple(
            (tuple(term['alpha']), complex(float(term.get('re', 0.0)), float(term.get('im', 0.0))))
            for term in data['terms']
        ))
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidSpec(f"malformed polynomial object: {e}")


def load_ideal(path: Union[str, Path]) -> List[LaurentPolynomial]:
    """Load a list of generators from an ideal JSON file"""
    try:
        with open(path, 'r') as f:
            data = json.load(f)
    except OSError as e:
        raise IoError(f"cannot read ideal file {path}: {e}")
    except json.JSONDecodeError as e:
        raise InvalidSpec(f"ideal file {path} is not valid JSON: {e}")

    if not isinstance(data, list) or not data:
        raise InvalidSpec("ideal file must hold a non-empty list of polynomials")
    generators = [polynomial_from_dict(item) for item in data]
    n = generators[0].n
    if any(g.n != n for g in generators):
        raise DimensionMismatch("generators live in tori of different dimensions")
    return generators


def monomial(coeff: complex, alpha: Iterable[int]) -> LaurentPolynomial:
    return LaurentPolynomial(((tuple(alpha), coeff),))
