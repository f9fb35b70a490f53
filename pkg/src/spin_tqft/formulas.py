"""Closed-form partition function values for the standard model families.

These are the rational reference values the CLI and the test suite compare
against; every function returns the genus-g value directly from the known
formula rather than by contraction.
"""

from __future__ import annotations

RING_FACTORS = {"C": 1, "R": 1, "C_R": 2, "H_R": 4}


def fhk_block_factor(ring: str, g: int) -> float:
    """Per-block weight in the symmetric-model genus formula."""
    if ring in ("C", "R"):
        return 1.0
    if ring == "C_R":
        return 2.0
    if ring == "H_R":
        return 2.0 ** (2 - 2 * g)
    raise ValueError(f"unknown ring {ring!r}")


def fhk_genus_value(blocks, R, g: int) -> complex:
    """Genus-g value of a symmetric model: R^{2-2g} sum_i f_i n_i^{2-2g}.

    ``blocks`` is a list of (ring, n) pairs.
    """
    R = complex(R)
    total = 0.0 + 0j
    for ring, n in blocks:
        total += fhk_block_factor(ring, g) * n ** (2 - 2 * g)
    return R ** (2 - 2 * g) * total


def cyclic_group_genus_value(m: int, R, g: int) -> complex:
    """Cyclic group algebra: m one-dimensional blocks."""
    return fhk_genus_value([("C", 1)] * m, R, g)


def sign_graded_complex_value(n: int, R, g: int, parity: int) -> complex:
    """Sign-graded M_n(C_R): P(s) 2^{1-g} (Rn)^{2-2g}."""
    R = complex(R)
    return parity * 2.0 ** (1 - g) * (R * n) ** (2 - 2 * g)


def block_signature_value(p: int, q: int, R, g: int) -> complex:
    """Curl-free block-graded M_{p+q}(C): R^{2-2g} (p-q)^{2-2g}, spin blind."""
    R = complex(R)
    return R ** (2 - 2 * g) * (p - q) ** (2 - 2 * g)


def quaternionic_graded_value(n: int, R, g: int, parity: int,
                              alpha: int, beta: int, gamma: int) -> complex:
    """Klein-graded M_n(H_R), classified by Lambda = alpha + beta + gamma."""
    R = complex(R)
    lam = alpha + beta + gamma
    if lam == -3:
        return 4.0 * (R * n) ** (2 - 2 * g)
    if lam == -1:
        return parity * 2.0 ** (2 - g) * (R * n) ** (2 - 2 * g)
    return (2 * R * n) ** (2 - 2 * g)


def clock_shift_value(n: int, R, g: int) -> complex:
    """Clock-and-shift graded M_n(C): R^{2-2g} n^2 for every genus."""
    R = complex(R)
    return R ** (2 - 2 * g) * n ** 2


CYCLIC_FAMILY_TAGS = {
    2: ("2R^{2-2g}", "P(s)2^{1-g}R^{2-2g}"),
    3: ("3R^{2-2g}", "(1+P(s)2^{1-g})R^{2-2g}"),
    4: ("2^{2-2g}R^{2-2g}", "4R^{2-2g}", "P(s)2^{2-g}R^{2-2g}",
        "(2+P(s)2^{1-g})R^{2-2g}"),
}


def cyclic_family_value(tag: str, R, g: int, parity: int) -> complex:
    """Genus-g value of a named cyclic-model crossing family."""
    R = complex(R)
    P = parity
    values = {
        "2R^{2-2g}": 2 * R ** (2 - 2 * g),
        "3R^{2-2g}": 3 * R ** (2 - 2 * g),
        "4R^{2-2g}": 4 * R ** (2 - 2 * g),
        "2^{2-2g}R^{2-2g}": 2.0 ** (2 - 2 * g) * R ** (2 - 2 * g),
        "P(s)2^{1-g}R^{2-2g}": P * 2.0 ** (1 - g) * R ** (2 - 2 * g),
        "P(s)2^{2-g}R^{2-2g}": P * 2.0 ** (2 - g) * R ** (2 - 2 * g),
        "(1+P(s)2^{1-g})R^{2-2g}": (1 + P * 2.0 ** (1 - g)) * R ** (2 - 2 * g),
        "(2+P(s)2^{1-g})R^{2-2g}": (2 + P * 2.0 ** (1 - g)) * R ** (2 - 2 * g),
    }
    if tag not in values:
        raise KeyError(f"unknown family tag {tag!r}")
    return values[tag]
