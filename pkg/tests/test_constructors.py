"""Concrete algebra builders, gradings and bicharacter tables."""
import itertools

import numpy as np
import pytest

from spin_tqft import (
    Quaternion, all_klein_bicharacters, basis_matrices, direct_sum,
    enumerate_bicharacters, gamma_bicharacter, gamma_model, grading_residual,
    group_algebra_cyclic, klein_quaternionic_model, matrix_algebra, multiply,
    frobenius_form, standard_gradings, validate, z2_complex_model,
    z2_matrix_model,
)
from spin_tqft.errors import InconsistentR, MismatchedR, ShapeMismatch, SingularX

TOL = 1e-9


def test_quaternion_arithmetic():
    i, j, k = Quaternion(0, 1), Quaternion(0, 0, 1), Quaternion(0, 0, 0, 1)
    assert i * j == k
    assert j * i == Quaternion(0, 0, 0, -1)
    assert i * i == Quaternion(-1)
    assert (i * j).conjugate() == Quaternion(0, 0, 0, -1)
    assert Quaternion(2, 3, 4, 5).real == 2
    # the complex embedding is an algebra map
    a, b = Quaternion(1, 2, -1, 0.5), Quaternion(0, -3, 2, 1)
    assert np.allclose((a * b).embed(), a.embed() @ b.embed(), atol=1e-12)


@pytest.mark.parametrize("ring,n", [(r, n) for r in ("C", "R", "C_R", "H_R")
                                    for n in (1, 2)])
def test_symmetric_matrix_models_validate(ring, n):
    alg = matrix_algebra(n, ring, R=1.0)
    rep = validate(alg)
    assert rep.all_core(), rep.residuals
    assert rep.symmetric and rep.spherical
    assert rep.max_residual <= TOL
    # the structure constants of a real-ring model are real
    if ring != "C":
        assert np.abs(alg.C.imag).max() <= 1e-12


def test_fhk_counit_value():
    for ring, dD in (("C", 1), ("C_R", 2), ("H_R", 4)):
        n, R = 2, 0.5
        alg = matrix_algebra(n, ring, R=R)
        # eps(1) = R |D| n * (real) trace of the identity = R |D| n^2
        assert frobenius_form(alg, alg.unit) == pytest.approx(R * dD * n * n)


def test_quaternionic_pairing_matches_unit_interleave():
    # B = (1/(4 R n)) sum over (l,m) and units w of  w e_lm (x) w* e_ml
    n, R = 2, 1.0
    alg = matrix_algebra(n, "H_R", R=R)
    d = alg.dim
    mats, _ = basis_matrices(n, "H_R")
    conj_sign = np.array([1.0, -1.0, -1.0, -1.0])
    expected = np.zeros((d, d))
    for l in range(n):
        for m in range(n):
            for w in range(4):
                a = (l * n + m) * 4 + w
                b = (m * n + l) * 4 + w
                expected[a, b] += conj_sign[w] / (4 * R * n)
    assert np.allclose(alg.B.real, expected, atol=1e-10)
    assert np.abs(alg.B.imag).max() <= 1e-12


def test_matrix_algebra_derives_R_from_x():
    x = np.diag([1.0, 3.0]).astype(complex)
    alg = matrix_algebra(2, "C", x=x)
    assert alg.R == pytest.approx(1.0 / np.trace(np.linalg.inv(x)))
    rep = validate(alg)
    assert rep.all_core()


def test_matrix_algebra_rejects_inconsistent_R():
    with pytest.raises(InconsistentR):
        matrix_algebra(2, "C", x=np.diag([1.0, 3.0]), R=5.0)


def test_matrix_algebra_rejects_singular_x():
    with pytest.raises(SingularX):
        matrix_algebra(2, "C", x=np.diag([1.0, 0.0]))


def test_ring_R_requires_real_x():
    with pytest.raises(ShapeMismatch):
        matrix_algebra(2, "R", x=np.diag([1j, 1.0]))


def test_direct_sum_single_summand_identity(fhk_m2):
    s = direct_sum([fhk_m2])
    assert np.allclose(s.C, fhk_m2.C)
    assert np.allclose(s.B, fhk_m2.B)


def test_direct_sum_mismatched_R():
    with pytest.raises(MismatchedR):
        direct_sum([matrix_algebra(1, "C", R=1.0), matrix_algebra(1, "C", R=0.5)])


def test_direct_sum_three_lines_genus_values():
    from spin_tqft import fhk_partition
    R = 1.0
    alg = direct_sum([matrix_algebra(1, "C", R=R)] * 3)
    for g in range(4):
        assert fhk_partition(alg, g) == pytest.approx(3 * R ** (2 - 2 * g))


def test_direct_sum_m1_m2_torus():
    from spin_tqft import fhk_partition
    alg = direct_sum([matrix_algebra(1, "C", R=1.0), matrix_algebra(2, "C", R=1.0)])
    assert fhk_partition(alg, 1) == pytest.approx(2.0)


def test_cyclic_group_structure_constants_oracle():
    # expand eps(h^a h^b h^c) = R m [a+b+c == 0 mod m] with a plain loop
    m, R = 3, 1.0
    alg, grading = group_algebra_cyclic(m, R)
    for a in range(m):
        for b in range(m):
            for c in range(m):
                expected = m * R if (a + b + c) % m == 0 else 0.0
                assert alg.C[a, b, c] == pytest.approx(expected)
    assert grading.group == (3,)
    assert grading_residual(alg, grading) <= TOL


def test_cyclic_group_trivial_case():
    alg, _ = group_algebra_cyclic(1)
    assert alg.dim == 1
    assert np.allclose(alg.unit, [1.0])


def test_cyclic_group_genus_formula():
    from spin_tqft import fhk_partition
    for m, R in ((2, 1.0), (3, 0.5), (5, 1.0)):
        alg, _ = group_algebra_cyclic(m, R=R)
        for g in range(4):
            assert fhk_partition(alg, g) == pytest.approx(m * R ** (2 - 2 * g))


def test_all_constructed_algebras_special(z2_matrix_21, z2_complex_2, klein_1):
    for alg in (z2_matrix_21[0], z2_complex_2[0], klein_1[0], gamma_model(2)[0],
                group_algebra_cyclic(4)[0]):
        rep = validate(alg)
        assert rep.all_core()
        assert rep.spherical


def test_gradings_are_multiplicative(z2_matrix_21, z2_complex_2, klein_1):
    for alg, grading, _ in (z2_matrix_21, z2_complex_2, klein_1, gamma_model(2)):
        assert grading_residual(alg, grading) <= TOL


def test_z2_matrix_blocks_split_diagonal_antidiagonal(z2_matrix_21):
    alg, grading, _ = z2_matrix_21
    p, n = 2, 3
    for l in range(n):
        for m in range(n):
            expected = 0 if (l < p) == (m < p) else 1
            assert grading.block_of_basis[l * n + m] == expected


def test_klein_tables_match_sign_triples(klein_1):
    _, _, bichars = klein_1
    assert len(bichars) == 8
    for b, (a, bb, g) in zip(bichars, itertools.product((1, -1), repeat=3)):
        expected = np.array(
            [[1, 1, 1, 1],
             [1, a * bb, a, bb],
             [1, a, a * g, g],
             [1, bb, g, bb * g]], dtype=complex)
        assert np.allclose(b.table, expected)
        assert b.residual() <= 1e-12


def test_bicharacter_tables_satisfy_identities(z2_complex_2):
    _, _, bichars = z2_complex_2
    for b in bichars + all_klein_bicharacters() + [gamma_bicharacter(3)]:
        assert b.residual() <= 1e-12


def test_gamma_model_basis_and_bicharacter():
    alg, grading, bichars = gamma_model(2)
    # clock matrix diag(-1, 1), shift e21 + e12; the four products span M_2
    mats, _ = basis_matrices(2, "C")
    X = np.diag([-1.0, 1.0])
    Y = np.array([[0, 1], [1, 0]], dtype=float)
    span = np.stack([np.eye(2), X, Y, X @ Y]).reshape(4, -1)
    assert np.linalg.matrix_rank(span) == 4
    b = bichars[0]
    xi = np.exp(2j * np.pi / 2)
    g = grading
    for h in range(4):
        for j in range(4):
            i1, j1 = g.decode(h)
            i2, j2 = g.decode(j)
            assert b.table[h, j] == pytest.approx(xi ** ((i1 * j2 - i2 * j1) % 2))
    # identity used for the one-sided orthogonality condition
    for h in range(4):
        for j in range(4):
            assert b.table[h, j] == pytest.approx(b.table[j, g.neg(h)])


def test_standard_gradings_dispatch():
    alg, grading, bichars = standard_gradings("z2_complex", n=1)
    assert alg.dim == 2 and grading.group == (2,) and len(bichars) == 2
    with pytest.raises(ValueError):
        standard_gradings("nope")
