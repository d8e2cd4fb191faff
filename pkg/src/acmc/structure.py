"""Almost contact metric structures (phi, xi, eta, g) on R^{2n+1}.

phi acts on column coordinate vectors; covectors are contracted as rows.
Random structures come from conjugating the canonical one, so the axioms
hold up to roundoff.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import (
    DegenerateStructure,
    DimensionMismatch,
    InvalidDimension,
    ShapeMismatch,
    SingularMatrix,
)
from .linalg import Metric, frozen, invert_metric

AXIOM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class AcmStructure:
    n: int
    phi: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    metric: Metric

    def __post_init__(self):
        d = 2 * self.n + 1
        if self.n < 1:
            raise InvalidDimension(f"n must be >= 1, got {self.n}")
        shapes = {
            "phi": (np.shape(self.phi), (d, d)),
            "xi": (np.shape(self.xi), (d,)),
            "eta": (np.shape(self.eta), (d,)),
            "g": (np.shape(self.metric.g), (d, d)),
        }
        for name, (got, want) in shapes.items():
            if got != want:
                raise ShapeMismatch(f"{name} has shape {got}, expected {want} for n={self.n}")
        object.__setattr__(self, "phi", frozen(self.phi))
        object.__setattr__(self, "xi", frozen(self.xi))
        object.__setattr__(self, "eta", frozen(self.eta))

    @property
    def dim(self) -> int:
        return 2 * self.n + 1

    @property
    def g(self) -> np.ndarray:
        return self.metric.g

    @property
    def g_inv(self) -> np.ndarray:
        return self.metric.g_inv

    @property
    def h(self) -> np.ndarray:
        """Matrix of the horizontal projector h = -phi^2 = I - xi (x) eta."""
        return np.eye(self.dim) - np.outer(self.xi, self.eta)

    @property
    def v(self) -> np.ndarray:
        """Matrix of the vertical projector v = eta (x) xi."""
        return np.outer(self.xi, self.eta)


def make_structure(n, phi, xi, eta, g) -> AcmStructure:
    metric = g if isinstance(g, Metric) else invert_metric(g)
    return AcmStructure(int(n), np.asarray(phi, float), np.asarray(xi, float),
                        np.asarray(eta, float), metric)


@dataclass(frozen=True)
class ValidationReport:
    residuals: dict
    tol: float = AXIOM_TOL

    @property
    def ok(self) -> bool:
        return all(r <= self.tol for r in self.residuals.values())

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())


def validate(S: AcmStructure, tol: float = AXIOM_TOL) -> ValidationReport:
    """Max residual of each structure axiom."""
    d = S.dim
    phi, xi, eta, g = S.phi, S.xi, S.eta, S.g
    eye = np.eye(d)
    res = {
        "phi_squared": np.max(np.abs(phi @ phi - (-eye + np.outer(xi, eta)))),
        "phi_xi": np.max(np.abs(phi @ xi)),
        "eta_phi": np.max(np.abs(eta @ phi)),
        "eta_xi": abs(eta @ xi - 1.0),
        "unit_xi": abs(xi @ g @ xi - 1.0),
        "compatibility": np.max(np.abs(phi.T @ g @ phi - (g - np.outer(eta, eta)))),
        "eta_dual": np.max(np.abs(g @ xi - eta)),
    }
    return ValidationReport({k: float(v) for k, v in res.items()}, tol)


def canonical_structure(n: int) -> AcmStructure:
    """Coordinates (x_1..x_n, y_1..y_n, z): phi x_i = y_i, phi y_i = -x_i, xi = d/dz."""
    if int(n) != n or n < 1:
        raise InvalidDimension(f"n must be a positive integer, got {n}")
    n = int(n)
    d = 2 * n + 1
    phi = np.zeros((d, d))
    for i in range(n):
        phi[n + i, i] = 1.0
        phi[i, n + i] = -1.0
    e = np.zeros(d)
    e[-1] = 1.0
    return AcmStructure(n, phi, e, e.copy(), invert_metric(np.eye(d)))


def conjugate_structure(S: AcmStructure, P) -> AcmStructure:
    """Push S forward by the linear map P."""
    P = np.asarray(P, dtype=float)
    if P.shape != (S.dim, S.dim):
        raise DimensionMismatch(f"P has shape {P.shape}, expected {(S.dim, S.dim)}")
    cond = np.linalg.cond(P)
    if not np.isfinite(cond) or cond >= 1e8:
        raise SingularMatrix(f"conjugating matrix is singular or ill-conditioned (cond={cond:.3e})")
    Pinv = np.linalg.inv(P)
    g = Pinv.T @ S.g @ Pinv
    g = 0.5 * (g + g.T)
    return AcmStructure(S.n, P @ S.phi @ Pinv, P @ S.xi, S.eta @ Pinv, invert_metric(g))


def random_structure(n: int, seed, spread: float = 0.3, max_cond: float = 10.0) -> AcmStructure:
    """Conjugate the canonical structure by I + spread * (random Gaussian matrix).

    Draws are rejected until cond(P) < max_cond.
    """
    rng = np.random.default_rng(seed)
    d = 2 * n + 1
    while True:
        P = np.eye(d) + spread * rng.standard_normal((d, d))
        if np.linalg.cond(P) < max_cond:
            return conjugate_structure(canonical_structure(n), P)


def h_vec(S: AcmStructure, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return x - (S.eta @ x) * S.xi


def v_vec(S: AcmStructure, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return (S.eta @ x) * S.xi


def adapted_basis(S: AcmStructure, tol: float = 1e-8) -> np.ndarray:
    """g-orthonormal basis (a_1..a_n, phi a_1..phi a_n, xi) as matrix columns.

    Gram-Schmidt over the coordinate axes, skipping candidates already in
    the span; for the canonical structure this returns the identity.
    """
    g = S.g
    chosen: list[np.ndarray] = []
    span: list[np.ndarray] = [S.xi]
    for k in range(S.dim):
        if len(chosen) == S.n:
            break
        c = np.zeros(S.dim)
        c[k] = 1.0
        for _ in range(2):
            for b in span:
                c = c - (b @ g @ c) * b
        norm = np.sqrt(max(c @ g @ c, 0.0))
        if norm < tol:
            continue
        a = c / norm
        chosen.append(a)
        span.extend([a, S.phi @ a])
    if len(chosen) != S.n:
        raise DegenerateStructure("Gram-Schmidt could not find n horizontal directions")
    A = np.column_stack(chosen)
    return np.column_stack([A, S.phi @ A, S.xi])


@dataclass(frozen=True, eq=False)
class StructureGroupElement:
    U: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "U", frozen(self.U))

    @property
    def inverse(self) -> np.ndarray:
        return np.linalg.inv(self.U)

    def __matmul__(self, other: "StructureGroupElement") -> "StructureGroupElement":
        return StructureGroupElement(self.U @ other.U)


def group_residuals(S: AcmStructure, U) -> dict:
    U = U.U if isinstance(U, StructureGroupElement) else np.asarray(U, float)
    return {
        "fixes_xi": float(np.max(np.abs(U @ S.xi - S.xi))),
        "isometry": float(np.max(np.abs(U.T @ S.g @ U - S.g))),
        "commutes_phi": float(np.max(np.abs(U @ S.phi - S.phi @ U))),
    }


def random_group_element(S: AcmStructure, seed, scale: float = 1.0) -> StructureGroupElement:
    """Sample the identity component of U(n) x 1 preserving S.

    In the adapted basis phi is [[0, -I], [I, 0]] (+ 0), and the generator
    [[X, -Y], [Y, X]] with X antisymmetric and Y symmetric commutes with it.
    """
    rng = np.random.default_rng(seed)
    n = S.n
    X = rng.standard_normal((n, n))
    X = scale * (X - X.T) / 2
    Y = rng.standard_normal((n, n))
    Y = scale * (Y + Y.T) / 2
    M = np.eye(S.dim)
    M[: 2 * n, : 2 * n] = expm(np.block([[X, -Y], [Y, X]]))
    B = adapted_basis(S)
    return StructureGroupElement(B @ M @ np.linalg.inv(B))


def act_on_bilinear(U, L) -> np.ndarray:
    """(U.L)(x, y) = L(U^-1 x, U^-1 y)."""
    U = U.U if isinstance(U, StructureGroupElement) else np.asarray(U, float)
    L = np.asarray(L, dtype=float)
    if U.shape != L.shape:
        raise DimensionMismatch(f"group element {U.shape} vs tensor {L.shape}")
    Uinv = np.linalg.inv(U)
    return Uinv.T @ L @ Uinv
