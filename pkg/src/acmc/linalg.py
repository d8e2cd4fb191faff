"""Dense linear algebra on a fixed coordinate basis.

Vectors and covectors are 1-d numpy arrays, (0,2)-tensors are square
matrices with ``L[i, j] = L(e_i, e_j)`` and (0,3)-tensors are cubic arrays.
Contractions with the metric use the cached inverse as the Gram matrix of
the dual basis.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotPositiveDefinite, NotSymmetric

SYMMETRY_TOL = 1e-12
MAX_CONDITION = 1e12


def frozen(a) -> np.ndarray:
    """Return a read-only float copy of ``a``."""
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Metric:
    """A positive definite metric together with its inverse."""

    g: np.ndarray
    g_inv: np.ndarray

    @property
    def dim(self) -> int:
        return self.g.shape[0]

    def __call__(self, x, y) -> float:
        return float(np.asarray(x) @ self.g @ np.asarray(y))


def invert_metric(g) -> Metric:
    """Validate ``g`` as a metric and cache its inverse.

    Raises NotSymmetric, NotPositiveDefinite (also for condition numbers
    above 1e12; the smallest eigenvalue is attached to the exception).
    """
    g = np.asarray(g, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise DimensionMismatch(f"metric must be square, got shape {g.shape}")
    if not np.all(np.isfinite(g)):
        raise NotPositiveDefinite("metric has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(g))))
    asym = float(np.max(np.abs(g - g.T)))
    if asym > SYMMETRY_TOL * scale:
        raise NotSymmetric(f"metric asymmetry {asym:.3e} exceeds tolerance")
    eig = np.linalg.eigvalsh(0.5 * (g + g.T))
    if eig[0] <= 0.0:
        raise NotPositiveDefinite(
            f"metric is not positive definite (smallest eigenvalue {eig[0]:.3e})", eig[0]
        )
    if eig[-1] / eig[0] > MAX_CONDITION:
        raise NotPositiveDefinite(
            f"metric condition number {eig[-1] / eig[0]:.3e} exceeds {MAX_CONDITION:.0e}", eig[0]
        )
    inv = np.linalg.solve(g, np.eye(g.shape[0]))
    return Metric(frozen(g), frozen(0.5 * (inv + inv.T)))


def _check_same_dim(*arrays):
    dims = {a.shape[0] for a in arrays}
    if len(dims) != 1 or any(s != a.shape[0] for a in arrays for s in a.shape):
        raise DimensionMismatch("operands have inconsistent dimensions: "
                                + ", ".join(str(a.shape) for a in arrays))


def tensor2_inner(L, M, g: Metric) -> float:
    """Metric inner product g^{ik} g^{jl} L_ij M_kl of two (0,2)-tensors."""
    L = np.asarray(L, dtype=float)
    M = np.asarray(M, dtype=float)
    _check_same_dim(L, M, g.g)
    return float(np.sum((g.g_inv @ L @ g.g_inv) * M))


def tensor2_norm(L, g: Metric) -> float:
    return float(np.sqrt(max(tensor2_inner(L, L, g), 0.0)))


def tensor3_inner(F, G, g: Metric) -> float:
    F = np.asarray(F, dtype=float)
    G = np.asarray(G, dtype=float)
    _check_same_dim(F, G, g.g)
    gi = g.g_inv
    return float(np.einsum("ia,jb,kc,ijk,abc->", gi, gi, gi, F, G, optimize=True))


def tensor3_norm(F, g: Metric) -> float:
    return float(np.sqrt(max(tensor3_inner(F, F, g), 0.0)))


def covector_norm(a, g: Metric) -> float:
    a = np.asarray(a, dtype=float)
    _check_same_dim(a, g.g)
    return float(np.sqrt(max(a @ g.g_inv @ a, 0.0)))


def wedge(a, b) -> np.ndarray:
    """(a ^ b)(x, y) = a(x) b(y) - a(y) b(x), without a 1/2 factor."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    _check_same_dim(a, b)
    return np.outer(a, b) - np.outer(b, a)


def raise_index(a, g: Metric) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    _check_same_dim(a, g.g)
    return g.g_inv @ a


def lower_index(x, g: Metric) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    _check_same_dim(x, g.g)
    return g.g @ x


def sym_part(L) -> np.ndarray:
    L = np.asarray(L, dtype=float)
    return 0.5 * (L + L.T)


def antisym_part(L) -> np.ndarray:
    L = np.asarray(L, dtype=float)
    return 0.5 * (L - L.T)


def rel_scale(*norms: float) -> float:
    """max(1, norms...): the denominator of every "within eps relative" check."""
    return max(1.0, *norms)
