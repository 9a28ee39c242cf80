"""The deviation statistic: l1 distance between two probability vectors and
its equivalent formulation as a maximum over the box [0, D]^S."""

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .sampling import SimplexVector, as_simplex


def _aligned(phat, p):
    a = phat.entries if isinstance(phat, SimplexVector) else np.asarray(phat, dtype=float)
    b = p.entries if isinstance(p, SimplexVector) else np.asarray(p, dtype=float)
    if a.shape != b.shape:
        raise ValidationError(f"length mismatch: {a.shape} vs {b.shape}")
    return a, b


def l1_deviation(phat, p) -> float:
    """Sum of absolute entrywise differences; lies in [0, 2] on the simplex."""
    a, b = _aligned(phat, p)
    return float(np.abs(a - b).sum())


def z_n_value(phat, p, D: float) -> float:
    """The box maximum max_{v in [0,D]^S} (phat - p)^T v, equal to (D/2)·l1."""
    if D <= 0:
        raise ValidationError("D must be > 0")
    return 0.5 * D * l1_deviation(phat, p)


def maximizer(phat, p, D: float) -> np.ndarray:
    """The maximizing box vertex: D where phat exceeds p, 0 elsewhere (ties to 0)."""
    if D <= 0:
        raise ValidationError("D must be > 0")
    a, b = _aligned(phat, p)
    return np.where(a - b > 0, float(D), 0.0)


@dataclass(frozen=True)
class DeviationResult:
    """l1 distance, the scaled box maximum, and the vertex attaining it."""

    l1: float
    z_n: float
    maximizer: np.ndarray


def deviation_result(phat, p, D: float = 1.0) -> DeviationResult:
    phat = as_simplex(phat)
    p = as_simplex(p)
    return DeviationResult(
        l1=l1_deviation(phat, p),
        z_n=z_n_value(phat, p, D),
        maximizer=maximizer(phat, p, D),
    )
