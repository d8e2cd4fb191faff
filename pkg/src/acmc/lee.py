"""Pointwise algebra of the tensor F = -nabla(Phi), the Lee form and contact
conformal transformations.

Conventions: Phi(x, y) = g(x, phi y); F[a, b, c] = F(e_a, e_b, e_c) is
antisymmetric in its last two slots; connection coefficients are stored as
``gamma[k, i, j]``, the k-component of nabla_{d_i} d_j.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AcmError,
    DimensionMismatch,
    DimensionTooSmall,
    NotInG1,
    OmegaNotHorizontal,
    SingularTransformedMetric,
)
from .linalg import covector_norm, invert_metric, rel_scale, tensor3_norm, wedge
from .split import DEFAULT_TOL, decompose, horizontal_metric, projections
from .structure import AcmStructure, adapted_basis

F_SYMMETRY_TOL = 1e-10


def fundamental_form(S: AcmStructure) -> np.ndarray:
    return S.g @ S.phi


def check_ftensor(S: AcmStructure, F, tol: float = F_SYMMETRY_TOL) -> np.ndarray:
    F = np.asarray(F, dtype=float)
    if F.shape != (S.dim,) * 3:
        raise DimensionMismatch(f"F has shape {F.shape}, expected {(S.dim,) * 3}")
    asym = float(np.max(np.abs(F + F.transpose(0, 2, 1)), initial=0.0))
    if asym > tol * rel_scale(float(np.max(np.abs(F), initial=0.0))):
        raise AcmError(f"F is not antisymmetric in its last two slots (residual {asym:.3e})")
    return F


@dataclass(frozen=True, eq=False)
class LeeData:
    n: int
    f: np.ndarray
    fstar: np.ndarray
    omega: np.ndarray
    fstar_xi: float
    _theta: np.ndarray | None = field(default=None, repr=False)

    @property
    def theta(self) -> np.ndarray:
        if self._theta is None:
            raise DimensionTooSmall("the Lee form needs n >= 2")
        return self._theta


def lee_forms(S: AcmStructure, F, frame=None) -> LeeData:
    """f, f*, omega and the Lee form theta.

    ``frame`` is a matrix whose columns are a g-orthonormal basis; the
    adapted basis is used when omitted.
    """
    F = check_ftensor(S, F)
    E = adapted_basis(S) if frame is None else np.asarray(frame, dtype=float)
    f = np.einsum("ai,bi,abz->z", E, E, F)
    fstar = np.einsum("ai,bi,abz->z", E, S.phi @ E, F)
    omega = np.einsum("a,b,abz->z", S.xi, S.xi, F)
    fstar_xi = float(fstar @ S.xi)
    n = S.n
    theta = None
    if n >= 2:
        theta = fstar_xi / (2 * n) * S.eta + (f @ S.phi) / (2 * (n - 1))
    return LeeData(n, f, fstar, omega, fstar_xi, theta)


def lee_form(S: AcmStructure, F) -> np.ndarray:
    return lee_forms(S, F).theta


def w1_model(S: AcmStructure, omega) -> np.ndarray:
    """eta (x) (eta ^ omega)."""
    return np.einsum("a,bc->abc", S.eta, wedge(S.eta, omega))


def w1_residual(S: AcmStructure, F) -> float:
    F = check_ftensor(S, F)
    omega = np.einsum("a,b,abz->z", S.xi, S.xi, F)
    return tensor3_norm(F - w1_model(S, omega), S.metric)


def synth_w1_F(S: AcmStructure, omega0) -> np.ndarray:
    omega0 = np.asarray(omega0, dtype=float)
    if abs(omega0 @ S.xi) > 1e-10 * rel_scale(covector_norm(omega0, S.metric)):
        raise OmegaNotHorizontal(f"omega(xi) = {omega0 @ S.xi:.3e}, must vanish")
    return w1_model(S, omega0)


@dataclass(frozen=True, eq=False)
class ConformalParams:
    """Pointwise data (u, v, du, dv) of the transformation c(u, v)."""

    u_val: float
    v_val: float
    du: np.ndarray
    dv: np.ndarray

    @classmethod
    def constant(cls, dim: int, u: float = 0.0, v: float = 0.0) -> "ConformalParams":
        return cls(u, v, np.zeros(dim), np.zeros(dim))

    def __post_init__(self):
        vals = [self.u_val, self.v_val, *np.ravel(self.du), *np.ravel(self.dv)]
        if not np.all(np.isfinite(vals)):
            raise AcmError("conformal parameters must be finite")
        object.__setattr__(self, "du", np.asarray(self.du, dtype=float))
        object.__setattr__(self, "dv", np.asarray(self.dv, dtype=float))


def transformed_metric(S: AcmStructure, u: float, v: float) -> np.ndarray:
    g = np.exp(2 * u) * horizontal_metric(S) + np.exp(2 * v) * np.outer(S.eta, S.eta)
    return 0.5 * (g + g.T)


def transform_structure(S: AcmStructure, p: ConformalParams) -> AcmStructure:
    """phi -> phi, xi -> e^-v xi, eta -> e^v eta, g -> e^2u hg + e^2v eta (x) eta."""
    g = transformed_metric(S, p.u_val, p.v_val)
    return AcmStructure(S.n, S.phi, np.exp(-p.v_val) * S.xi, np.exp(p.v_val) * S.eta,
                        invert_metric(g))


def _check_conn(S: AcmStructure, gamma) -> np.ndarray:
    gamma = np.asarray(gamma, dtype=float)
    if gamma.shape != (S.dim,) * 3:
        raise DimensionMismatch(f"connection has shape {gamma.shape}, expected {(S.dim,) * 3}")
    return gamma


def eq6_rhs(S: AcmStructure, gamma, p: ConformalParams, F) -> np.ndarray:
    """2 gbar(nablabar_{d_i} d_j, d_k) as the array ``rhs[i, j, k]``."""
    gamma = _check_conn(S, gamma)
    F = check_ftensor(S, F)
    g, eta, xi, phi = S.g, S.eta, S.xi, S.phi
    e2u, e2v = np.exp(2 * p.u_val), np.exp(2 * p.v_val)
    du, dv = p.du, p.dv

    lowered = np.einsum("mij,mk->ijk", gamma, g)
    rhs = 2 * e2u * lowered
    rhs += 2 * e2u * (np.einsum("i,jk->ijk", du, g) + np.einsum("j,ik->ijk", du, g)
                      - np.einsum("k,ij->ijk", du, g))
    a = e2v * dv - e2u * du
    rhs += 2 * (np.einsum("i,j,k->ijk", a, eta, eta) + np.einsum("j,i,k->ijk", a, eta, eta)
                - np.einsum("k,i,j->ijk", a, eta, eta))

    # Fx[a, b] = F(e_a, xi, phi e_b)
    Fx = np.einsum("apc,p,cb->ab", F, xi, phi)
    eta_nabla = np.einsum("mij,m->ij", gamma, eta)
    bracket = (2 * np.einsum("ij,k->ijk", eta_nabla, eta)
               - np.einsum("k,ij->ijk", eta, Fx)
               - np.einsum("j,ik->ijk", eta, Fx)
               - np.einsum("i,jk->ijk", eta, Fx)
               - np.einsum("k,ji->ijk", eta, Fx)
               + np.einsum("j,ki->ijk", eta, Fx)
               + np.einsum("i,kj->ijk", eta, Fx))
    rhs += (e2v - e2u) * bracket
    return rhs


def transform_connection_eq6(S: AcmStructure, gamma, p: ConformalParams, F) -> np.ndarray:
    """Levi-Civita coefficients of the transformed metric from the general connection law."""
    rhs = eq6_rhs(S, gamma, p, F)
    try:
        gbar = invert_metric(transformed_metric(S, p.u_val, p.v_val))
    except AcmError as exc:
        raise SingularTransformedMetric(str(exc)) from exc
    return 0.5 * np.einsum("mk,ijk->mij", gbar.g_inv, rhs)


def _require_g1(S: AcmStructure, p: ConformalParams, tol: float):
    if covector_norm(p.du, S.metric) > tol:
        raise NotInG1(f"|du| = {covector_norm(p.du, S.metric):.3e} exceeds {tol:.1e}")


def horizontal_gradient(S: AcmStructure, a) -> np.ndarray:
    """h(grad a): index raised with the original metric, then h-projected."""
    return S.h @ (S.g_inv @ np.asarray(a, dtype=float))


def lemma_connection_eq7(S: AcmStructure, gamma, p: ConformalParams,
                         tol: float = DEFAULT_TOL) -> np.ndarray:
    """Connection of c(u, v) S for du = 0 by the W1 lemma formula:

        nablabar_x y = nabla_x y - e^{2v-2u} eta(x) eta(y) h(grad v)
                       + [dv(x) eta(y) + dv(y) eta(x) - dv(xi) eta(x) eta(y)] xi
    """
    gamma = _check_conn(S, gamma)
    _require_g1(S, p, tol)
    eta, xi, dv = S.eta, S.xi, p.dv
    hgrad = horizontal_gradient(S, dv)
    scale = np.exp(2 * p.v_val - 2 * p.u_val)
    ee = np.outer(eta, eta)
    coeff = np.outer(dv, eta) + np.outer(eta, dv) - (dv @ xi) * ee
    return gamma - scale * np.einsum("m,ij->mij", hgrad, ee) + np.einsum("m,ij->mij", xi, coeff)


def lemma_L_transform_eq8(S: AcmStructure, Ltheta, L_dvphi, p: ConformalParams, theta,
                          tol: float = DEFAULT_TOL) -> np.ndarray:
    """L(theta) - L(dv o phi) + e^{2v-2u} theta(grad v) eta (x) eta."""
    _require_g1(S, p, tol)
    theta = np.asarray(theta, dtype=float)
    grad_v = S.g_inv @ p.dv
    scale = np.exp(2 * p.v_val - 2 * p.u_val)
    return (np.asarray(Ltheta, float) - np.asarray(L_dvphi, float)
            + scale * (theta @ grad_v) * np.outer(S.eta, S.eta))


def lemma_L_components(S: AcmStructure, Ltheta, L_dvphi, p: ConformalParams, theta,
                       tol: float = DEFAULT_TOL) -> list[np.ndarray]:
    """Nine components of the transformed tensor, by projecting the full law."""
    return projections(S, lemma_L_transform_eq8(S, Ltheta, L_dvphi, p, theta, tol))


@dataclass(frozen=True)
class SubgroupMembership:
    in_G1: bool
    in_G1_0: bool
    G1i_indices: frozenset
    du_norm: float
    dv_xi: float
    signature: frozenset


SUBCLASS_INDICES = (1, 2, 3, 7, 9)


def subgroup_membership(S: AcmStructure, p: ConformalParams, L_dvphi,
                        tol: float = DEFAULT_TOL) -> SubgroupMembership:
    du_norm = covector_norm(p.du, S.metric)
    dv_xi = float(p.dv @ S.xi)
    sig = decompose(S, L_dvphi, tol).signature
    in_g1 = du_norm <= tol
    in_g10 = in_g1 and abs(dv_xi) <= tol
    idx = frozenset(i for i in SUBCLASS_INDICES if in_g10 and sig <= {i})
    return SubgroupMembership(in_g1, in_g10, idx, du_norm, dv_xi, sig)
