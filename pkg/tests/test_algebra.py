"""Core data structure: derived maps, validation flags, basis changes."""
import numpy as np
import pytest

from spin_tqft import (
    algebra_from_json_dict, algebra_to_json_dict, build_algebra, direct_sum,
    frobenius_form, group_algebra_cyclic, matrix_algebra, multiply, nakayama,
    transform_basis, validate,
)
from spin_tqft.algebra import Grading, rel_residual
from spin_tqft.errors import DimensionMismatch, NonFinite, SingularPairing

TOL = 1e-9


def elementary(n, l, m):
    v = np.zeros(n * n)
    v[l * n + m] = 1.0
    return v


def test_one_dimensional_identity_algebra():
    alg = build_algebra(np.ones((1, 1, 1)), np.ones((1, 1)), 1.0)
    assert np.allclose(alg.unit, [1.0])
    assert np.allclose(alg.counit, [1.0])
    assert np.allclose(alg.nakayama_matrix, [[1.0]])
    rep = validate(alg)
    assert rep.all_core() and rep.symmetric and rep.spherical


def test_build_rejects_singular_pairing():
    C = np.zeros((2, 2, 2))
    C[0, 0, 0] = 1.0
    with pytest.raises(SingularPairing):
        build_algebra(C, np.zeros((2, 2)), 1.0)


def test_build_rejects_nan():
    C = np.zeros((2, 2, 2))
    C[0, 0, 0] = np.nan
    with pytest.raises(NonFinite):
        build_algebra(C, np.eye(2), 1.0)


def test_build_rejects_zero_R(fhk_m2):
    with pytest.raises(ValueError):
        build_algebra(fhk_m2.C, fhk_m2.B, 0.0)


def test_fhk_beta_is_inverse_R_times_unit(fhk_m2):
    # distinguished element of the symmetric matrix model
    one = elementary(2, 0, 0) + elementary(2, 1, 1)
    assert np.allclose(fhk_m2.beta, one / fhk_m2.R, atol=1e-12)
    assert np.allclose(fhk_m2.unit, one, atol=1e-12)


def test_trace_form_beta_scales_with_inverse_trace():
    x = np.diag([1.0, 2.0]).astype(complex)
    alg = matrix_algebra(2, "C", x=x)
    one = elementary(2, 0, 0) + elementary(2, 1, 1)
    assert np.allclose(alg.beta, np.trace(np.linalg.inv(x)) * one, atol=1e-12)


def test_multiply_elementary_matrices(fhk_m2):
    e11, e12 = elementary(2, 0, 0), elementary(2, 0, 1)
    assert np.allclose(multiply(fhk_m2, e11, e12), e12, atol=1e-12)
    assert np.allclose(multiply(fhk_m2, e12, e11), 0.0, atol=1e-12)


def test_multiply_cyclic_group(cc3):
    alg, _ = cc3
    h = np.array([0, 1, 0], dtype=complex)
    h2 = np.array([0, 0, 1], dtype=complex)
    e = np.array([1, 0, 0], dtype=complex)
    assert np.allclose(multiply(alg, h, h2), e, atol=1e-12)


def test_multiply_quaternion_units():
    alg = matrix_algebra(1, "H_R", R=1.0)
    i_hat = np.array([0, 1, 0, 0], dtype=complex)
    j_hat = np.array([0, 0, 1, 0], dtype=complex)
    k_hat = np.array([0, 0, 0, 1], dtype=complex)
    assert np.allclose(multiply(alg, i_hat, j_hat), k_hat, atol=1e-12)
    assert np.allclose(multiply(alg, j_hat, i_hat), -k_hat, atol=1e-12)


def test_multiply_shape_check(fhk_m2):
    with pytest.raises(DimensionMismatch):
        multiply(fhk_m2, np.ones(3), np.ones(4))


def test_frobenius_form_values(fhk_m2, cc3):
    n, R = 2, fhk_m2.R
    assert frobenius_form(fhk_m2, fhk_m2.unit) == pytest.approx(R * n * n)
    alg, _ = cc3
    e = np.array([1, 0, 0], dtype=complex)
    h = np.array([0, 1, 0], dtype=complex)
    assert frobenius_form(alg, e) == pytest.approx(3 * alg.R)
    assert frobenius_form(alg, h) == pytest.approx(0.0)
    assert frobenius_form(alg, np.zeros(3)) == 0.0


def test_frobenius_form_absorbs_unit(fhk_m2):
    rng = np.random.default_rng(0)
    a = rng.normal(size=4) + 1j * rng.normal(size=4)
    assert frobenius_form(fhk_m2, multiply(fhk_m2, fhk_m2.unit, a)) == pytest.approx(
        frobenius_form(fhk_m2, a))


def test_nakayama_identity_for_symmetric_form(fhk_m2):
    assert np.allclose(fhk_m2.nakayama_matrix, np.eye(4), atol=1e-12)


def test_nakayama_on_signature_graded_model(z2_matrix_21):
    # with form Tr(u .) and u = diag(1,1,-1), the automorphism is a -> u a u
    alg, _, _ = z2_matrix_21
    n = 3
    u = np.diag([1.0, 1.0, -1.0])
    for l in range(n):
        for m in range(n):
            v = np.zeros(n * n, dtype=complex)
            v[l * n + m] = 1.0
            expected = np.zeros(n * n, dtype=complex)
            img = u @ np.outer(np.eye(n)[l], np.eye(n)[m]) @ u
            expected = img.reshape(-1)
            assert np.allclose(nakayama(alg, v), expected, atol=1e-10)


def brute_force_nakayama(alg):
    """Independent oracle: solve eps(a.b) = eps(s(b).a) entrywise for s."""
    d = alg.dim
    # unknown S[c, b]: rows indexed by (a, b): eps(e_a e_b) = sum_c S[c,b] eps(e_c e_a)
    A = np.zeros((d * d, d * d), dtype=complex)
    rhs = np.zeros(d * d, dtype=complex)
    eps_prod = np.einsum("abc,c->ab", alg.mult, alg.counit)
    for a in range(d):
        for b in range(d):
            rhs[a * d + b] = eps_prod[a, b]
            for c in range(d):
                A[a * d + b, c * d + b] = eps_prod[c, a]
    sol, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    return sol.reshape(d, d)


def test_nakayama_matches_brute_force_oracle():
    # frozen from the oracle: with form Tr(x .), x = diag(1,2), the map sends
    # e12 -> 2 e12 and e21 -> e21 / 2
    x = np.diag([1.0, 2.0]).astype(complex)
    alg = matrix_algebra(2, "C", x=x)
    S = brute_force_nakayama(alg)
    assert np.allclose(S, alg.nakayama_matrix, atol=1e-9)
    assert np.allclose(nakayama(alg, elementary(2, 0, 1)), 2.0 * elementary(2, 0, 1))
    assert np.allclose(nakayama(alg, elementary(2, 1, 0)), 0.5 * elementary(2, 1, 0))


def test_nakayama_defining_relation_nonsymmetric(z2_matrix_21):
    alg, _, _ = z2_matrix_21
    d = alg.dim
    for a in range(d):
        for b in range(d):
            ea, eb = np.eye(d)[a], np.eye(d)[b]
            lhs = frobenius_form(alg, multiply(alg, ea, eb))
            rhs = frobenius_form(alg, multiply(alg, nakayama(alg, eb), ea))
            assert lhs == pytest.approx(rhs, abs=1e-10)


def test_nakayama_multiplicative(z2_matrix_21):
    alg, _, _ = z2_matrix_21
    d = alg.dim
    rng = np.random.default_rng(1)
    for _ in range(5):
        a = rng.normal(size=d)
        b = rng.normal(size=d)
        lhs = nakayama(alg, multiply(alg, a, b))
        rhs = multiply(alg, nakayama(alg, a), nakayama(alg, b))
        assert np.allclose(lhs, rhs, atol=1e-9)


def test_validate_fhk_all_flags(fhk_m2):
    rep = validate(fhk_m2)
    assert rep.all_core()
    assert rep.symmetric and rep.spherical and rep.separable_witness_ok
    assert rep.max_residual <= TOL


def test_validate_signature_model_flags(z2_matrix_21):
    alg, _, _ = z2_matrix_21
    rep = validate(alg)
    assert rep.all_core()
    assert not rep.symmetric
    assert rep.spherical
    assert rep.separable_witness_ok


def test_validate_unequal_weights_not_special():
    # two one-dimensional blocks with different form weights: m(B) is not
    # a multiple of the identity, computed directly
    R = 1.0
    Binv = np.diag([R, 2 * R]).astype(complex)
    B = np.linalg.inv(Binv)
    C = np.zeros((2, 2, 2), dtype=complex)
    C[0, 0, 0] = R
    C[1, 1, 1] = 2 * R
    alg = build_algebra(C, B, R)
    assert np.allclose(alg.beta, [1.0 / R, 0.5 / R])
    rep = validate(alg)
    assert not rep.special
    assert rep.nondegenerate_B and rep.associative


def test_snake_identity(model_pair):
    alg, _, _ = model_pair
    assert rel_residual(alg.Binv @ alg.B, np.eye(alg.dim)) <= TOL
    assert rel_residual(alg.B @ alg.Binv, np.eye(alg.dim)) <= TOL


def test_cyclic_compatibility_both_forms(fhk_m2, z2_matrix_21):
    for alg in (fhk_m2, z2_matrix_21[0]):
        C, B, Binv = alg.C, alg.B, alg.Binv
        lhs = np.einsum("eab,dc,de->abc", C, Binv, B)
        rhs = np.einsum("bce,ad,ed->abc", C, Binv, B)
        assert rel_residual(lhs, C) <= TOL
        assert rel_residual(rhs, C) <= TOL


def test_spherical_flag_matches_matrix_condition(z2_matrix_21):
    alg, _, _ = z2_matrix_21
    S = alg.nakayama_matrix
    M = alg.Binv @ alg.B.T
    assert rel_residual(S @ S, np.eye(alg.dim)) <= TOL
    assert rel_residual(M @ M, np.eye(alg.dim)) <= TOL


def test_separability_witness_tensor(fhk_m2):
    # t = R*B must intertwine the two module actions and multiply to the unit
    alg = fhk_m2
    t = alg.R * alg.B
    left = np.einsum("xac,ab->xcb", alg.mult, t)
    right = np.einsum("ab,bxc->xac", t, alg.mult)
    assert rel_residual(left, right) <= TOL
    assert rel_residual(np.einsum("ab,abc->c", t, alg.mult), alg.unit) <= TOL


def test_json_round_trip(z2_matrix_21):
    alg, grading, _ = z2_matrix_21
    data = algebra_to_json_dict(alg)
    back = algebra_from_json_dict(data)
    assert np.allclose(back.C, alg.C)
    assert np.allclose(back.B, alg.B)
    assert back.R == alg.R
    assert back.labels == alg.labels
    assert back.grading.group == alg.grading.group
    assert back.grading.block_of_basis == alg.grading.block_of_basis


def test_grading_arithmetic():
    g = Grading((2, 3), tuple(range(6)))
    assert g.order == 6
    assert g.decode(g.encode((1, 2))) == (1, 2)
    assert g.add(g.encode((1, 2)), g.encode((1, 1))) == g.encode((0, 0))
    assert g.neg(g.encode((1, 2))) == g.encode((1, 1))


def test_transform_basis_preserves_partition_values(fhk_m2):
    from spin_tqft import fhk_partition
    rng = np.random.default_rng(3)
    P = rng.normal(size=(4, 4)) + 0.1j * rng.normal(size=(4, 4))
    alg2 = transform_basis(fhk_m2, P)
    for g in range(3):
        assert fhk_partition(alg2, g) == pytest.approx(fhk_partition(fhk_m2, g), abs=1e-8)
