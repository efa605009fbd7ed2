"""Grid description and residual summaries shared by the verification routines."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class GridSpec:
    """Rectangular tensor grid; ``nx == 0`` or ``nt == 0`` denotes an empty grid."""

    x0: float
    x1: float
    t0: float
    t1: float
    nx: int
    nt: int

    def __post_init__(self):
        if self.is_empty:
            return
        if not (self.x0 < self.x1 and self.t0 < self.t1):
            raise DomainError(f"grid requires x0 < x1 and t0 < t1, got {self}")
        if self.nx < 2 or self.nt < 2:
            raise DomainError(f"grid requires nx >= 2 and nt >= 2, got nx={self.nx}, nt={self.nt}")

    @property
    def is_empty(self) -> bool:
        return self.nx == 0 or self.nt == 0

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        if self.is_empty:
            return np.empty(0), np.empty(0)
        return np.linspace(self.x0, self.x1, self.nx), np.linspace(self.t0, self.t1, self.nt)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """(X, T) arrays of shape (nt, nx)."""
        x, t = self.axes()
        return np.meshgrid(x, t)


@dataclass(frozen=True)
class ResidualReport:
    identity_name: str
    n_points: int
    max_abs: float
    mean_abs: float
    method: str
    notes: str = ""
    max_rel: float = 0.0

    @classmethod
    def from_values(cls, name: str, method: str, residual, scale=None, notes: str = "") -> "ResidualReport":
        """Summarise pointwise residuals; ``scale`` gives the term magnitudes for max_rel."""
        r = np.abs(np.asarray(residual, dtype=float)).ravel()
        if r.size == 0:
            return cls(name, 0, 0.0, 0.0, method, notes or "empty", 0.0)
        max_rel = 0.0
        if scale is not None:
            s = np.abs(np.asarray(scale, dtype=float)).ravel()
            max_rel = float(np.max(r / np.maximum(s, np.finfo(float).tiny)))
        return cls(name, int(r.size), float(r.max()), float(r.mean()), method, notes, max_rel)

    def passed(self, tol: float) -> bool:
        return math.isfinite(self.max_abs) and self.max_abs < tol

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)
