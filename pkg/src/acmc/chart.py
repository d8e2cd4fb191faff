"""Finite-difference geometry of structure fields on a single chart of R^{2n+1}.

All derivatives are second-order central differences. Public entry points
run a step-halving self-check (``check=True``) that raises StepTooSmall when
roundoff, not truncation, dominates the result.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DimensionTooSmall, InvalidDimension, StepTooSmall
from .lee import ConformalParams, fundamental_form, lee_forms, transform_structure, w1_residual
from .linalg import antisym_part, rel_scale, tensor2_norm, tensor3_norm
from .split import decompose, op_h
from .structure import AcmStructure, canonical_structure

DEFAULT_STEP = 1e-3
CHART_TOL = 1e-4
_ROUNDOFF_FLOOR = 1e-8


@dataclass(frozen=True)
class StructureField:
    eval: Callable[[np.ndarray], AcmStructure]
    n: int
    fd_step: float = DEFAULT_STEP

    @property
    def dim(self) -> int:
        return 2 * self.n + 1

    def __call__(self, p) -> AcmStructure:
        return self.eval(np.asarray(p, dtype=float))

    def metric_field(self) -> Callable[[np.ndarray], np.ndarray]:
        return lambda q: self(q).g


def central_partials(fn, p, step: float) -> np.ndarray:
    """out[i, ...] = d_i fn(p)."""
    p = np.asarray(p, dtype=float)
    if not step > 0:
        raise StepTooSmall(f"finite-difference step must be positive, got {step}")
    rows = []
    for i in range(p.size):
        e = np.zeros_like(p)
        e[i] = step
        rows.append((np.asarray(fn(p + e), float) - np.asarray(fn(p - e), float)) / (2 * step))
    return np.stack(rows)


def check_step(fn, p, step: float) -> None:
    """Raise StepTooSmall when halving the step stops improving the derivative.

    In the truncation regime successive differences shrink by ~4; in the
    roundoff regime they stall or grow like 1/step, so a shrink factor
    below 2 is flagged. Disagreements below 1e-8 (relative) never are,
    unless the expected roundoff eps |f| / (step / 4) is itself above that.
    """
    d1 = central_partials(fn, p, step)
    d2 = central_partials(fn, p, step / 2)
    d4 = central_partials(fn, p, step / 4)
    e1 = float(np.max(np.abs(d1 - d2)))
    e2 = float(np.max(np.abs(d2 - d4)))
    floor = _ROUNDOFF_FLOOR * rel_scale(float(np.max(np.abs(d1))))
    noise = 4 * np.finfo(float).eps * rel_scale(float(np.max(np.abs(fn(p))))) / step
    if noise > floor:
        raise StepTooSmall(f"step {step:.1e}: expected roundoff {noise:.2e} exceeds {floor:.1e}")
    if e2 > floor and 2 * e2 > e1:
        raise StepTooSmall(
            f"step {step:.1e}: halving disagreement went from {e1:.2e} to {e2:.2e} (roundoff-dominated)"
        )


def _partials(fn, p, step, check):
    if check:
        check_step(fn, p, step)
    return central_partials(fn, p, step)


def christoffel(gf, p, step: float = DEFAULT_STEP, check: bool = True) -> np.ndarray:
    """Gamma[k, i, j] = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)."""
    p = np.asarray(p, dtype=float)
    dg = _partials(gf, p, step, check)
    ginv = np.linalg.inv(np.asarray(gf(p), float))
    lowered = dg + dg.transpose(1, 0, 2) - dg.transpose(1, 2, 0)
    gamma = 0.5 * np.einsum("kl,ijl->kij", ginv, lowered)
    return 0.5 * (gamma + gamma.transpose(0, 2, 1))


def nabla_covector(thetaf, gamma, p, step: float = DEFAULT_STEP, check: bool = True) -> np.ndarray:
    """(nabla theta)_ij = d_i theta_j - Gamma^k_ij theta_k."""
    p = np.asarray(p, dtype=float)
    dtheta = _partials(thetaf, p, step, check)
    return dtheta - np.einsum("kij,k->ij", gamma, np.asarray(thetaf(p), float))


def exterior_derivative(thetaf, p, step: float = DEFAULT_STEP, check: bool = True) -> np.ndarray:
    """(d theta)_ij = d_i theta_j - d_j theta_i."""
    dtheta = _partials(thetaf, np.asarray(p, float), step, check)
    return dtheta - dtheta.T


def horizontal_norm(S: AcmStructure, B) -> float:
    """Norm of hB(x, y) = B(hx, hy)."""
    return tensor2_norm(op_h(S, B), S.metric)


def compute_F(Sf: StructureField, p, step: float | None = None, check: bool = True) -> np.ndarray:
    """F(x, y, z) = -(nabla_x Phi)(y, z)."""
    step = Sf.fd_step if step is None else step
    p = np.asarray(p, dtype=float)
    phi_field = lambda q: fundamental_form(Sf(q))
    dPhi = _partials(phi_field, p, step, check)
    gamma = christoffel(Sf.metric_field(), p, step, check)
    Phi = phi_field(p)
    nabla_phi = (dPhi - np.einsum("lij,lk->ijk", gamma, Phi)
                 - np.einsum("lik,jl->ijk", gamma, Phi))
    return -nabla_phi


def cosymplectic_chart(n: int, fd_step: float = DEFAULT_STEP) -> StructureField:
    """The canonical structure at every point (flat, F = 0)."""
    if int(n) != n or n < 1:
        raise InvalidDimension(f"n must be a positive integer, got {n}")
    S = canonical_structure(int(n))
    return StructureField(lambda q: S, int(n), fd_step)


def conjugated_chart(n: int, matrix_field, fd_step: float = DEFAULT_STEP) -> StructureField:
    """Canonical structure pushed forward by a point-dependent matrix P(q)."""
    from .structure import conjugate_structure

    S = canonical_structure(n)
    return StructureField(lambda q: conjugate_structure(S, matrix_field(q)), n, fd_step)


def conformal_params_at(uf, vf, p, step: float) -> ConformalParams:
    p = np.asarray(p, dtype=float)
    return ConformalParams(float(uf(p)), float(vf(p)),
                           central_partials(uf, p, step), central_partials(vf, p, step))


def conformal_deform_field(Sf: StructureField, uf, vf) -> StructureField:
    """Apply c(u, v) pointwise, with du, dv from central differences."""

    def deformed(q):
        return transform_structure(Sf(q), conformal_params_at(uf, vf, q, Sf.fd_step))

    return StructureField(deformed, Sf.n, Sf.fd_step)


def lee_form_field(Sf: StructureField, step: float | None = None) -> Callable[[np.ndarray], np.ndarray]:
    """q -> Lee form of Sf at q (F by finite differences, no self-check)."""
    if Sf.n < 2:
        raise DimensionTooSmall("the Lee form needs n >= 2")

    def theta(q):
        return lee_forms(Sf(q), compute_F(Sf, q, step, check=False)).theta

    return theta


LABELS = ("not-W1", "W1", "W1_0") + tuple(f"W1_{j}" for j in (1, 2, 3, 7, 8, 9))
_W1_SUBCLASSES = (1, 2, 3, 7, 8, 9)


@dataclass(frozen=True, eq=False)
class PointClassification:
    F_norm: float
    w1_residual: float
    theta: np.ndarray
    dtheta_norm: float
    hdtheta_norm: float
    Ltheta: np.ndarray
    signature: frozenset
    label: str
    component_norms: tuple
    contact_closed_consistent: bool


def classify_point(Sf: StructureField, p, step: float | None = None,
                   tol: float = CHART_TOL) -> PointClassification:
    """Place the structure at p in not-W1 / W1 / W1_0 / W1_j.

    W1_j requires the signature of nabla(theta) to be exactly {j}; an empty
    signature (nabla theta = 0) is reported as W1_0 when theta is closed.
    """
    if Sf.n < 2:
        raise DimensionTooSmall("point classification needs n >= 2")
    step = Sf.fd_step if step is None else step
    p = np.asarray(p, dtype=float)
    S = Sf(p)
    F = compute_F(Sf, p, step, check=False)
    F_norm = tensor3_norm(F, S.metric)
    w1_res = w1_residual(S, F)
    thetaf = lee_form_field(Sf, step)
    theta = thetaf(p)
    gamma = christoffel(Sf.metric_field(), p, step, check=False)
    dth = central_partials(thetaf, p, step)
    Ltheta = dth - np.einsum("kij,k->ij", gamma, theta)
    dtheta = dth - dth.T
    rep = decompose(S, Ltheta, tol)
    scale = rel_scale(rep.norm)
    dtheta_norm = tensor2_norm(dtheta, S.metric)
    hd_norm = horizontal_norm(S, dtheta)
    # hd(theta) = 0 forces the 4, 5, 6 components of nabla(theta) to vanish
    consistent = hd_norm > tol * scale or all(rep.norms[i - 1] <= tol * scale for i in (4, 5, 6))

    if w1_res > tol * rel_scale(F_norm):
        label = "not-W1"
    elif len(rep.signature) == 1 and next(iter(rep.signature)) in _W1_SUBCLASSES:
        label = f"W1_{next(iter(rep.signature))}"
    elif dtheta_norm <= tol * scale:
        label = "W1_0"
    else:
        label = "W1"
    return PointClassification(F_norm, w1_res, theta, dtheta_norm, hd_norm, Ltheta,
                               rep.signature, label, rep.norms, consistent)


def halving_ratio(approx, exact, step: float) -> float:
    """err(step) / err(step / 2) for a finite-difference approximation."""
    e1 = float(np.max(np.abs(approx(step) - exact)))
    e2 = float(np.max(np.abs(approx(step / 2) - exact)))
    return e1 / e2
