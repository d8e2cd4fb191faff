import numpy as np
import pytest

from acmc.errors import AcmError, DimensionTooSmall, NotInG1, OmegaNotHorizontal
from acmc.lee import (
    ConformalParams,
    check_ftensor,
    eq6_rhs,
    fundamental_form,
    lee_form,
    lee_forms,
    lemma_L_components,
    lemma_L_transform_eq8,
    lemma_connection_eq7,
    subgroup_membership,
    synth_w1_F,
    transform_connection_eq6,
    transform_structure,
    transformed_metric,
    w1_model,
    w1_residual,
)
from acmc.split import horizontal_metric
from acmc.structure import adapted_basis, canonical_structure, conjugate_structure, random_structure, validate
from acmc.suites import w1_dataset


def horizontal(S, a):
    return a - (a @ S.xi) * S.eta


def random_F(S, rng):
    F = rng.standard_normal((S.dim,) * 3)
    return F - F.transpose(0, 2, 1)


def test_fundamental_form_canonical():
    Phi = fundamental_form(canonical_structure(1))
    np.testing.assert_array_equal(Phi, [[0, -1, 0], [1, 0, 0], [0, 0, 0]])


def test_fundamental_form_properties(structure, rng):
    S = structure
    Phi = fundamental_form(S)
    np.testing.assert_allclose(Phi, -Phi.T, atol=1e-12)
    np.testing.assert_allclose(Phi @ S.xi, 0, atol=1e-12)
    for _ in range(5):
        x = rng.standard_normal(S.dim)
        hx = x - (S.eta @ x) * S.xi
        # Phi(x, phi x) = -|hx|^2
        assert x @ Phi @ (S.phi @ x) == pytest.approx(-(hx @ S.g @ hx), abs=1e-12)


def test_fundamental_form_natural_under_conjugation(rng):
    S = canonical_structure(2)
    P = np.eye(5) + 0.3 * rng.standard_normal((5, 5))
    Pinv = np.linalg.inv(P)
    np.testing.assert_allclose(fundamental_form(conjugate_structure(S, P)),
                               Pinv.T @ fundamental_form(S) @ Pinv, atol=1e-12)


def test_check_ftensor_rejects_symmetric_part():
    S = canonical_structure(1)
    with pytest.raises(AcmError):
        check_ftensor(S, np.ones((3, 3, 3)))
    with pytest.raises(AcmError):
        check_ftensor(S, np.zeros((5, 5, 5)))


def test_lee_forms_zero():
    S = random_structure(2, 3)
    data = lee_forms(S, np.zeros((5, 5, 5)))
    for arr in (data.f, data.fstar, data.omega, data.theta):
        np.testing.assert_array_equal(arr, 0)


@pytest.mark.parametrize("n", [2, 3])
def test_lee_form_of_w1_tensor(n, rng):
    S = random_structure(n, 30 + n)
    omega = horizontal(S, rng.standard_normal(S.dim))
    data = lee_forms(S, synth_w1_F(S, omega))
    np.testing.assert_allclose(data.f, omega, atol=1e-12)
    np.testing.assert_allclose(data.fstar, 0, atol=1e-12)
    np.testing.assert_allclose(data.omega, omega, atol=1e-12)
    # the general Lee formula carries a 1/(2(n-1)) factor on W1 tensors
    np.testing.assert_allclose(data.theta, omega @ S.phi / (2 * (n - 1)), atol=1e-12)


def test_lee_forms_frame_independent(rng):
    S = random_structure(3, 8)
    F = random_F(S, rng)
    ref = lee_forms(S, F)
    Q, _ = np.linalg.qr(rng.standard_normal((S.dim, S.dim)))
    other = lee_forms(S, F, frame=adapted_basis(S) @ Q)
    for a, b in [(ref.f, other.f), (ref.fstar, other.fstar), (ref.theta, other.theta)]:
        np.testing.assert_allclose(a, b, atol=1e-11)


def test_lee_form_needs_n2():
    S = canonical_structure(1)
    data = lee_forms(S, np.zeros((3, 3, 3)))
    np.testing.assert_array_equal(data.f, 0)
    with pytest.raises(DimensionTooSmall):
        data.theta
    with pytest.raises(DimensionTooSmall):
        lee_form(S, np.zeros((3, 3, 3)))


def test_w1_round_trip(structure, rng):
    S = structure
    omega = horizontal(S, rng.standard_normal(S.dim))
    F = synth_w1_F(S, omega)
    assert w1_residual(S, F) <= 1e-12
    np.testing.assert_allclose(np.einsum("a,b,abz->z", S.xi, S.xi, F), omega, atol=1e-12)
    np.testing.assert_array_equal(w1_model(S, omega), F)


def test_w1_explicit_entries():
    S = canonical_structure(1)
    F = synth_w1_F(S, np.array([1.0, 0.0, 0.0]))
    expected = np.zeros((3, 3, 3))
    expected[2, 2, 0], expected[2, 0, 2] = 1.0, -1.0
    np.testing.assert_array_equal(F, expected)


def test_synth_rejects_vertical_omega(structure):
    with pytest.raises(OmegaNotHorizontal):
        synth_w1_F(structure, structure.eta)


def test_generic_F_not_w1(structure, rng):
    assert w1_residual(structure, random_F(structure, rng)) > 1e-3


def test_transform_identity(structure):
    T = transform_structure(structure, ConformalParams.constant(structure.dim))
    np.testing.assert_allclose(T.g, structure.g, atol=1e-14)
    np.testing.assert_array_equal(T.xi, structure.xi)


def test_transform_is_acm(structure, rng):
    S = structure
    u, v = rng.uniform(-1, 1, 2)
    T = transform_structure(S, ConformalParams.constant(S.dim, u, v))
    assert T.xi @ T.g @ T.xi == pytest.approx(1.0, abs=1e-12)
    assert validate(T).ok
    # horizontal part scales by e^{2u}, vertical by e^{2v}
    np.testing.assert_allclose(horizontal_metric(T), np.exp(2 * u) * horizontal_metric(S), atol=1e-12)
    assert T.g @ S.xi @ S.xi == pytest.approx(np.exp(2 * v), rel=1e-12)


def test_transform_composition(structure):
    S = structure
    d = S.dim
    once = transform_structure(S, ConformalParams.constant(d, 0.7, -0.4))
    twice = transform_structure(transform_structure(S, ConformalParams.constant(d, 0.3, 0.2)),
                                ConformalParams.constant(d, 0.4, -0.6))
    np.testing.assert_allclose(twice.g, once.g, atol=1e-12)
    np.testing.assert_allclose(twice.xi, once.xi, atol=1e-12)
    np.testing.assert_allclose(twice.eta, once.eta, atol=1e-12)


def test_transformed_metric_formula():
    S = canonical_structure(1)
    np.testing.assert_allclose(transformed_metric(S, np.log(2), np.log(3)), np.diag([4.0, 4.0, 9.0]))


def test_general_law_identity_and_homothety(rng):
    S, gamma, F, _ = w1_dataset(2, rng)
    for c in (0.0, 0.8):
        p = ConformalParams.constant(S.dim, c, c)
        np.testing.assert_allclose(transform_connection_eq6(S, gamma, p, F), gamma, atol=1e-12)


def test_general_law_flat_constant_scaling():
    S = canonical_structure(2)
    gamma = np.zeros((5, 5, 5))
    out = transform_connection_eq6(S, gamma, ConformalParams.constant(5, 0.3, -0.9), np.zeros((5, 5, 5)))
    np.testing.assert_allclose(out, 0, atol=1e-15)


def test_general_law_torsion_free(rng):
    S, gamma, F, p = w1_dataset(2, rng)
    F = random_F(S, rng)
    out = transform_connection_eq6(S, gamma, p, F)
    np.testing.assert_allclose(out, out.transpose(0, 2, 1), atol=1e-12)
    rhs = eq6_rhs(S, gamma, p, F)
    np.testing.assert_allclose(rhs, rhs.transpose(1, 0, 2), atol=1e-12)


def test_general_law_F_irrelevant_when_u_equals_v(rng):
    S, gamma, F, p = w1_dataset(2, rng)
    same = ConformalParams(p.u_val, p.u_val, rng.standard_normal(S.dim), p.dv)
    a = transform_connection_eq6(S, gamma, same, F)
    b = transform_connection_eq6(S, gamma, same, random_F(S, rng))
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_lemma_law_requires_du_zero(rng):
    S, gamma, _, p = w1_dataset(2, rng)
    bad = ConformalParams(p.u_val, p.v_val, np.ones(S.dim), p.dv)
    with pytest.raises(NotInG1):
        lemma_connection_eq7(S, gamma, bad)
    with pytest.raises(NotInG1):
        lemma_L_transform_eq8(S, np.eye(5), np.eye(5), bad, np.zeros(5))


def test_lemma_law_constant_params_is_identity(rng):
    S, gamma, _, _ = w1_dataset(2, rng)
    out = lemma_connection_eq7(S, gamma, ConformalParams.constant(S.dim, 0.2, -0.5))
    np.testing.assert_array_equal(out, gamma)


def test_lemma_law_matches_eq6_for_cosymplectic_source(rng):
    for _ in range(5):
        S, gamma, _, p = w1_dataset(2, rng)
        zero = np.zeros((S.dim,) * 3)
        np.testing.assert_allclose(lemma_connection_eq7(S, gamma, p),
                                   transform_connection_eq6(S, gamma, p, zero), atol=1e-12)


def test_lemma_law_matches_eq6_at_u_equals_v(rng):
    S, gamma, F, p = w1_dataset(2, rng)
    p = ConformalParams(p.v_val, p.v_val, p.du, p.dv)
    np.testing.assert_allclose(lemma_connection_eq7(S, gamma, p),
                               transform_connection_eq6(S, gamma, p, F), atol=1e-12)


def test_lemma_law_missing_vertical_term(rng):
    """With omega != 0 the W1 connection law needs -(e^{2v-2u} - 1) eta(x) eta(y) (omega o phi)^#."""
    worst_plain = worst_fixed = 0.0
    for _ in range(10):
        S, gamma, F, p = w1_dataset(2, rng)
        omega = np.einsum("a,b,abz->z", S.xi, S.xi, F)
        full = transform_connection_eq6(S, gamma, p, F)
        lemma = lemma_connection_eq7(S, gamma, p)
        k = np.exp(2 * p.v_val - 2 * p.u_val) - 1
        fixed = lemma - k * np.einsum("m,ij->mij", S.g_inv @ (omega @ S.phi), np.outer(S.eta, S.eta))
        worst_plain = max(worst_plain, np.max(np.abs(lemma - full)))
        worst_fixed = max(worst_fixed, np.max(np.abs(fixed - full)))
    assert worst_fixed <= 1e-12
    assert worst_plain > 1e-2


def test_L_law_reductions(rng):
    S = random_structure(2, 40)
    Lt, Ld = rng.standard_normal((2, 5, 5))
    theta = rng.standard_normal(5)
    p0 = ConformalParams.constant(5, 0.1, 0.4)
    np.testing.assert_array_equal(lemma_L_transform_eq8(S, Lt, np.zeros((5, 5)), p0, theta), Lt)
    p = ConformalParams(0.1, 0.4, np.zeros(5), rng.standard_normal(5))
    np.testing.assert_allclose(lemma_L_transform_eq8(S, Lt, Ld, p, np.zeros(5)), Lt - Ld, atol=1e-15)
    out = lemma_L_transform_eq8(S, Lt, Ld, p, theta)
    extra = np.exp(0.6) * (theta @ S.g_inv @ p.dv)
    np.testing.assert_allclose(out - (Lt - Ld), extra * np.outer(S.eta, S.eta), atol=1e-12)


def test_L_law_linear(rng):
    S = random_structure(2, 41)
    p = ConformalParams(0.0, 0.3, np.zeros(5), rng.standard_normal(5))
    theta = rng.standard_normal(5)
    A, B, C, D = rng.standard_normal((4, 5, 5))
    zero = np.zeros((5, 5))
    lhs = lemma_L_transform_eq8(S, A + 2 * B, C - D, p, theta)
    rhs = (lemma_L_transform_eq8(S, A, C, p, theta) + 2 * lemma_L_transform_eq8(S, B, zero, p, zero)
           - lemma_L_transform_eq8(S, zero, D, p, zero))
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_L_law_components_reassemble(rng):
    S = random_structure(2, 42)
    p = ConformalParams(0.0, 0.3, np.zeros(5), rng.standard_normal(5))
    Lt, Ld = rng.standard_normal((2, 5, 5))
    theta = rng.standard_normal(5)
    comps = lemma_L_components(S, Lt, Ld, p, theta)
    assert len(comps) == 9
    np.testing.assert_allclose(sum(comps), lemma_L_transform_eq8(S, Lt, Ld, p, theta), atol=1e-12)


def test_subgroup_membership_examples():
    S = canonical_structure(2)
    hg = horizontal_metric(S)
    dv = np.array([0.5, 0, 0, 0, 0])
    m = subgroup_membership(S, ConformalParams(0, 0, np.zeros(5), dv), hg)
    assert m.in_G1 and m.in_G1_0 and m.G1i_indices == {1}
    m = subgroup_membership(S, ConformalParams(0, 0, np.zeros(5), np.zeros(5)), np.zeros((5, 5)))
    assert m.G1i_indices == {1, 2, 3, 7, 9}
    m = subgroup_membership(S, ConformalParams(0, 0, np.zeros(5), np.eye(5)[4]), hg)
    assert m.in_G1 and not m.in_G1_0 and not m.G1i_indices and m.dv_xi == 1.0
    m = subgroup_membership(S, ConformalParams(0, 0, np.eye(5)[0], dv), hg)
    assert not m.in_G1 and m.du_norm == 1.0
    m = subgroup_membership(S, ConformalParams(0, 0, np.zeros(5), dv), fundamental_form(S))
    assert m.signature == {4} and not m.G1i_indices
