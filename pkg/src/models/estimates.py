"""Monte Carlo estimate containers"""

from dataclasses import dataclass
from typing import Dict


@dataclass(frozen=True)
class VolumeEstimate:
    """Monte Carlo volume estimate with its standard error"""

    value: float
    stderr: float
    n_samples: int
    seed: int

    def __post_init__(self):
        if self.stderr < 0:
            raise ValueError("stderr must be non-negative")

    def within(self, target: float, n_sigma: float = 3.0) -> bool:
        """True if target lies within n_sigma standard errors of the estimate"""
        return abs(self.value - target) <= n_sigma * self.stderr

    def to_dict(self) -> Dict:
        return {
            'value': float(self.value),
            'stderr': float(self.stderr),
            'n_samples': int(self.n_samples),
            'seed': int(self.seed),
        }
