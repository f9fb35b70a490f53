import numpy as np
import pytest

from spin_tqft import (
    canonical_crossing, crossing_from_bicharacter, group_algebra_cyclic,
    klein_quaternionic_model, matrix_algebra, z2_complex_model, z2_matrix_model,
)

TOL = 1e-9


@pytest.fixture(scope="session")
def fhk_m2():
    return matrix_algebra(2, "C", R=1.0)


@pytest.fixture(scope="session")
def cc2():
    return group_algebra_cyclic(2)


@pytest.fixture(scope="session")
def cc3():
    return group_algebra_cyclic(3)


@pytest.fixture(scope="session")
def cc4():
    return group_algebra_cyclic(4)


@pytest.fixture(scope="session")
def z2_matrix_21():
    return z2_matrix_model(2, 1)


@pytest.fixture(scope="session")
def z2_complex_2():
    return z2_complex_model(2)


@pytest.fixture(scope="session")
def klein_1():
    return klein_quaternionic_model(1)


def cc3_printed_crossing(alg):
    """The non-canonical cyclic-3 crossing from its published matrix entries.

    Only the blocks for inputs (h,h) and (h,h2) are pinned directly; the
    (h2,h2) block is derived from the multiplication-compatibility axiom,
    and the unit rows and transpose rule fill in the rest.
    """
    m = 3
    lam = np.zeros((m, m, m, m), dtype=complex)
    for j in range(m):
        lam[j, 0, 0, j] = 1.0
        if j > 0:
            lam[0, j, j, 0] = 1.0
    lam22 = 0.5 * np.array([[0, 0, 0], [0, 1, 1], [0, 1, -1]], dtype=complex)
    lam23 = 0.5 * np.array([[0, 0, 0], [0, 1, -1], [0, 1, 1]], dtype=complex)
    lam[:, :, 1, 1] = lam22
    lam[:, :, 1, 2] = lam23
    lam[:, :, 2, 1] = lam23.T
    rhs = np.einsum("oqr,opij,qspk->ijkrs", alg.mult, lam, lam, optimize=True)
    lam[:, :, 2, 2] = rhs[2, 1, 1]
    from spin_tqft import CrossingMap
    return CrossingMap(lam)


@pytest.fixture(scope="session")
def cc3_nontrivial(cc3):
    alg, _ = cc3
    return cc3_printed_crossing(alg)


def model_crossing_pairs():
    """(algebra, crossing, label) inventory used by the property suites."""
    pairs = []
    alg = matrix_algebra(2, "C", R=1.0)
    pairs.append((alg, canonical_crossing(alg.dim), "fhk_m2_canonical"))
    alg, grading, bichars = z2_matrix_model(2, 1)
    pairs.append((alg, crossing_from_bicharacter(grading, bichars[1]), "z2_matrix_sign"))
    pairs.append((alg, canonical_crossing(alg.dim), "z2_matrix_canonical"))
    alg, grading, bichars = z2_complex_model(2)
    pairs.append((alg, crossing_from_bicharacter(grading, bichars[1]), "z2_complex_sign"))
    alg, grading, bichars = klein_quaternionic_model(1)
    for b in bichars:
        pairs.append((alg, crossing_from_bicharacter(grading, b), f"klein_{b.name}"))
    alg, _ = group_algebra_cyclic(3)
    pairs.append((alg, cc3_printed_crossing(alg), "cc3_nontrivial"))
    return pairs


@pytest.fixture(scope="session", params=model_crossing_pairs(), ids=lambda p: p[2])
def model_pair(request):
    return request.param
