"""Orthogonal U(n) x 1 invariant splitting of (0,2)-tensors into nine parts.

Components, for L a (0,2)-tensor and hL(x, y) = L(hx, hy):

    1  (alpha / 2n) hg                   symmetric, horizontal, trace part
    2  hybrid symmetric traceless        1/2 (ShL + ShL o phi) - L1
    3  pure symmetric                    1/2 (ShL - ShL o phi)
    4  (-beta / 2n) hg(., phi .)         antisymmetric, horizontal, trace part
    5  hybrid antisymmetric traceless    1/2 (AhL + AhL o phi) - L4
    6  pure antisymmetric                1/2 (AhL - AhL o phi)
    7  S(vL), 8  A(vL), 9  wL            mixed and vertical parts

with (L o phi)(x, y) = L(phi x, phi y).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadIndex, DimensionMismatch, InvalidDimension
from .linalg import antisym_part, rel_scale, sym_part, tensor2_norm
from .structure import AcmStructure, canonical_structure

DEFAULT_TOL = 1e-9
RANK_THRESHOLD = 1e-8

CLOSED_CLASSES = frozenset({1, 2, 3, 7, 9})
KILLING_CLASSES = frozenset({4, 5, 6, 8})


def _bilinear(S: AcmStructure, L) -> np.ndarray:
    L = np.asarray(L, dtype=float)
    if L.shape != (S.dim, S.dim):
        raise DimensionMismatch(f"tensor has shape {L.shape}, structure dimension is {S.dim}")
    return L


def op_h(S: AcmStructure, L) -> np.ndarray:
    L = _bilinear(S, L)
    h = S.h
    return h.T @ L @ h


def op_v(S: AcmStructure, L) -> np.ndarray:
    L = _bilinear(S, L)
    eta, xi = S.eta, S.xi
    return (np.outer(eta, xi @ L) + np.outer(L @ xi, eta)
            - 2.0 * (xi @ L @ xi) * np.outer(eta, eta))


def op_w(S: AcmStructure, L) -> np.ndarray:
    L = _bilinear(S, L)
    return (S.xi @ L @ S.xi) * np.outer(S.eta, S.eta)


def phi_compose(S: AcmStructure, L) -> np.ndarray:
    L = _bilinear(S, L)
    return S.phi.T @ L @ S.phi


def horizontal_metric(S: AcmStructure) -> np.ndarray:
    """hg(x, y) = g(hx, hy)."""
    return op_h(S, S.g)


def horizontal_fundamental(S: AcmStructure) -> np.ndarray:
    """hg(x, phi y) = g(hx, phi y)."""
    return horizontal_metric(S) @ S.phi


@dataclass(frozen=True)
class TraceData:
    alpha: float
    beta: float


def traces(S: AcmStructure, L) -> TraceData:
    hL = op_h(S, L)
    return TraceData(float(np.sum(S.g_inv * hL)), float(np.sum(S.g_inv * (hL @ S.phi))))


def projections(S: AcmStructure, L) -> list[np.ndarray]:
    """All nine components L_1(L) .. L_9(L), in order."""
    L = _bilinear(S, L)
    n = S.n
    hL = op_h(S, L)
    tr = traces(S, L)
    Sh, Ah = sym_part(hL), antisym_part(hL)
    Sh_phi, Ah_phi = phi_compose(S, Sh), phi_compose(S, Ah)
    vL = op_v(S, L)
    L1 = tr.alpha / (2 * n) * horizontal_metric(S)
    L4 = -tr.beta / (2 * n) * horizontal_fundamental(S)
    return [
        L1,
        0.5 * (Sh + Sh_phi) - L1,
        0.5 * (Sh - Sh_phi),
        L4,
        0.5 * (Ah + Ah_phi) - L4,
        0.5 * (Ah - Ah_phi),
        sym_part(vL),
        antisym_part(vL),
        op_w(S, L),
    ]


def project(S: AcmStructure, L, i: int) -> np.ndarray:
    if i not in range(1, 10):
        raise BadIndex(f"component index must be in 1..9, got {i}")
    return projections(S, L)[i - 1]


@dataclass(frozen=True, eq=False)
class DecompositionReport:
    components: tuple
    norms: tuple
    norm: float
    reconstruction_residual: float
    signature: frozenset
    tol: float

    def component(self, i: int) -> np.ndarray:
        return self.components[i - 1]


def decompose(S: AcmStructure, L, tol: float = DEFAULT_TOL) -> DecompositionReport:
    L = _bilinear(S, L)
    comps = projections(S, L)
    norms = tuple(tensor2_norm(c, S.metric) for c in comps)
    total = tensor2_norm(L, S.metric)
    resid = tensor2_norm(sum(comps) - L, S.metric)
    cut = tol * rel_scale(total)
    sig = frozenset(i + 1 for i, nrm in enumerate(norms) if nrm > cut)
    return DecompositionReport(tuple(comps), norms, total, resid, sig, tol)


def projector_matrix(S: AcmStructure, i: int) -> np.ndarray:
    """Matrix of L -> L_i(L) acting on flattened tensors."""
    d = S.dim
    cols = []
    for k in range(d * d):
        E = np.zeros(d * d)
        E[k] = 1.0
        cols.append(project(S, E.reshape(d, d), i).ravel())
    return np.column_stack(cols)


def subspace_dims(n: int, S: AcmStructure | None = None) -> tuple[int, ...]:
    """Numerical ranks of the nine projectors (eigenvalue count above 1e-8)."""
    if int(n) != n or n < 1:
        raise InvalidDimension(f"n must be a positive integer, got {n}")
    S = canonical_structure(int(n)) if S is None else S
    dims = []
    for i in range(1, 10):
        eig = np.linalg.eigvals(projector_matrix(S, i))
        dims.append(int(np.sum(np.abs(eig) > RANK_THRESHOLD)))
    return tuple(dims)


def expected_dims(n: int) -> tuple[int, ...]:
    return (1, n * n - 1, n * n + n, 1, n * n - 1, n * n - n, 2 * n, 2 * n, 1)


def classify_covector_derivative(S: AcmStructure, Ltheta, tol: float = DEFAULT_TOL) -> frozenset:
    """Signature of nabla(theta) at a point: theta lies in Omega_i iff signature <= {i}."""
    return decompose(S, Ltheta, tol).signature


def omega_membership(signature) -> list[int]:
    """Indices i with signature contained in {i}."""
    return [i for i in range(1, 10) if set(signature) <= {i}]
