"""Per-column z-score standardization (population standard deviation)."""

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError


@dataclass
class ScaledMatrix:
    """Standardized feature matrix plus the per-column mean/std needed to
    invert the mapping. Zero-variance columns scale to all zeros and record
    std 0."""

    values: np.ndarray
    means: np.ndarray
    stds: np.ndarray

    @property
    def n_rows(self) -> int:
        return int(self.values.shape[0])

    @property
    def n_dims(self) -> int:
        return int(self.values.shape[1])

    def inverse(self) -> np.ndarray:
        """Map scaled values back to the raw feature space."""
        safe = np.where(self.stds == 0.0, 1.0, self.stds)
        return self.values * safe + self.means


def standard_scale(matrix) -> ScaledMatrix:
    """Z-score each column using the population (1/n) standard deviation."""
    X = np.asarray(matrix, dtype=float)
    if X.ndim != 2:
        raise DomainError(f"expected a 2-D feature matrix, got shape {X.shape}")
    if X.shape[0] < 1:
        raise DomainError("standard_scale requires at least one row")
    means = X.mean(axis=0)
    stds = X.std(axis=0)  # ddof=0
    safe = np.where(stds == 0.0, 1.0, stds)
    return ScaledMatrix(values=(X - means) / safe, means=means, stds=stds)
