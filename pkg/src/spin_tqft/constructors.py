"""Builders for the concrete model algebras.

Matrix algebras over C and over the real division rings R, C_R (complex
numbers as a real algebra) and H_R (quaternions as a real algebra), direct
sums, cyclic group algebras, and the standard graded families with their
bicharacter tables.

Basis orders are fixed so tensors and JSON round-trips are reproducible:
elementary matrices are row-major, and real rings interleave the division
ring units fastest, i.e. the basis is ``w * e_lm`` for (l, m) row-major and
w running through (1), (1, i) or (1, i, j, k).

Quaternionic matrices are handled through the standard embedding of H into
2x2 complex matrices; the real part of the quaternionic trace is half the
complex trace of the embedded matrix.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .algebra import (
    DEFAULT_TOL, AlgebraData, Bicharacter, Grading, as_complex, build_algebra,
    max_abs,
)
from .errors import InconsistentR, MismatchedR, ShapeMismatch, SingularX

RING_DIMS = {"C": 1, "R": 1, "C_R": 2, "H_R": 4}


@dataclass(frozen=True)
class Quaternion:
    """Quaternion t + x i + y j + z k with real coefficients."""

    t: float
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @property
    def real(self) -> float:
        return self.t

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.t, -self.x, -self.y, -self.z)

    def __mul__(self, other: "Quaternion") -> "Quaternion":
        a, b = self, other
        return Quaternion(
            a.t * b.t - a.x * b.x - a.y * b.y - a.z * b.z,
            a.t * b.x + a.x * b.t + a.y * b.z - a.z * b.y,
            a.t * b.y - a.x * b.z + a.y * b.t + a.z * b.x,
            a.t * b.z + a.x * b.y - a.y * b.x + a.z * b.t)

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.t + other.t, self.x + other.x,
                          self.y + other.y, self.z + other.z)

    def embed(self) -> np.ndarray:
        """Image in M_2(C): 1, i, j, k go to I, diag(i,-i), [[0,1],[-1,0]], [[0,i],[i,0]]."""
        return np.array(
            [[self.t + 1j * self.x, self.y + 1j * self.z],
             [-self.y + 1j * self.z, self.t - 1j * self.x]], dtype=np.complex128)


# Unit quaternions 1, i, j, k as embedded 2x2 complex matrices.
_QUNITS = [Quaternion(1), Quaternion(0, 1), Quaternion(0, 0, 1), Quaternion(0, 0, 0, 1)]
_QEMB = [q.embed() for q in _QUNITS]
_UNIT_LABELS = {"C": [""], "R": [""], "C_R": ["", "i*"], "H_R": ["", "i*", "j*", "k*"]}


def basis_matrices(n: int, ring: str):
    """Concrete matrices realising the fixed basis order, with labels.

    For C and R these are n x n; for C_R they are n x n complex (the unit i
    realised as the scalar 1j); for H_R they are the 2n x 2n complex images
    of w * e_lm under the quaternion embedding.
    """
    if ring not in RING_DIMS:
        raise ValueError(f"unknown ring {ring!r}")
    mats, labels = [], []
    if ring in ("C", "R"):
        units = [np.array([[1.0 + 0j]])]
    elif ring == "C_R":
        units = [np.array([[1.0 + 0j]]), np.array([[1j]])]
    else:
        units = _QEMB
    unit_labels = _UNIT_LABELS[ring]
    for l in range(n):
        for m in range(n):
            e = np.zeros((n, n), dtype=np.complex128)
            e[l, m] = 1.0
            for w, wl in zip(units, unit_labels):
                mats.append(np.kron(e, w))
                labels.append(f"{wl}e{l + 1}{m + 1}")
    return np.stack(mats), labels


def _embed_x(n: int, ring: str, x) -> np.ndarray:
    """Normalise the form element x to the embedded complex matrix."""
    if ring == "H_R":
        if np.isscalar(x):
            x = np.eye(n, dtype=np.complex128) * complex(x)
        x = np.asarray(x)
        if x.shape == (n, n):
            # complex entries a+bi sit inside H as a + b i
            out = np.zeros((2 * n, 2 * n), dtype=np.complex128)
            for l in range(n):
                for m in range(n):
                    q = Quaternion(float(x[l, m].real), float(np.imag(x[l, m])))
                    out[2 * l:2 * l + 2, 2 * m:2 * m + 2] = q.embed()
            return out
        if x.shape == (n, n, 4):
            out = np.zeros((2 * n, 2 * n), dtype=np.complex128)
            for l in range(n):
                for m in range(n):
                    q = Quaternion(*[float(v) for v in x[l, m]])
                    out[2 * l:2 * l + 2, 2 * m:2 * m + 2] = q.embed()
            return out
        raise ShapeMismatch("quaternionic x must be scalar, (n,n) or (n,n,4)")
    if np.isscalar(x):
        return np.eye(n, dtype=np.complex128) * complex(x)
    x = as_complex(x, (n, n))
    return x


def _trace_form(ring: str, mats: np.ndarray) -> np.ndarray:
    """eps applied to each stacked matrix: Tr for C/R, Re Tr for C_R,
    half the embedded trace (= Re Tr over H) for H_R."""
    tr = np.einsum("aii->a", mats)
    if ring in ("C",):
        return tr
    if ring in ("R", "C_R"):
        return tr.real.astype(np.complex128)
    return (tr / 2.0).real.astype(np.complex128)


def _r_consistency_value(ring: str, x_emb: np.ndarray) -> complex:
    """The quantity that must equal 1/R for the model to be special."""
    xinv = np.linalg.inv(x_emb)
    tr = np.trace(xinv)
    if ring in ("C", "R"):
        return tr
    if ring == "C_R":
        return 2.0 * tr
    return 2.0 * tr  # H_R: 4 * Re Tr_H = 2 * Tr of the embedding


def matrix_algebra(n: int, ring: str, x=None, R=None, tol: float = DEFAULT_TOL) -> AlgebraData:
    """Matrix algebra M_n(D) with Frobenius form a -> (Re) Tr(x a).

    If ``x`` is omitted the symmetric form with x = R * |D| * n is used.
    If ``R`` is omitted it is derived from x through the specialness
    relation; if both are given they must be consistent.
    """
    if ring not in RING_DIMS:
        raise ValueError(f"unknown ring {ring!r}")
    if n < 1:
        raise ValueError("n must be positive")
    dD = RING_DIMS[ring]
    if x is None:
        R = 1.0 + 0j if R is None else complex(R)
        x = complex(R) * dD * n
    x_emb = _embed_x(n, ring, x)
    if ring == "R" and max_abs(x_emb.imag) > tol:
        raise ShapeMismatch("ring R requires a real form element x")

    sv = np.linalg.svd(x_emb, compute_uv=False)
    if sv[-1] <= tol * max(1.0, sv[0]):
        raise SingularX("form element x is not invertible")
    inv_R = _r_consistency_value(ring, x_emb)
    if R is None:
        R = 1.0 / inv_R
    else:
        R = complex(R)
        if abs(R * inv_R - 1.0) > max(1e4 * tol, tol * abs(R * inv_R)):
            raise InconsistentR(
                f"R={R} conflicts with the form element (required 1/R={inv_R})")

    mats, labels = basis_matrices(n, ring)
    prod = np.einsum("ij,ajk->aik", x_emb, mats)
    triples = np.einsum("aij,bjk,cki->abc", prod, mats, mats)
    pairs = np.einsum("aij,bji->ab", prod, mats)
    if ring == "C":
        C, Binv = triples, pairs
    elif ring in ("R", "C_R"):
        C, Binv = triples.real.astype(np.complex128), pairs.real.astype(np.complex128)
    else:
        C = (triples / 2.0).real.astype(np.complex128)
        Binv = (pairs / 2.0).real.astype(np.complex128)
    B = np.linalg.inv(Binv)
    return build_algebra(C, B, R, labels=labels, tol=tol)


def direct_sum(parts) -> AlgebraData:
    """Block-diagonal sum of algebras sharing the same vertex amplitude."""
    parts = list(parts)
    if not parts:
        raise ValueError("direct_sum needs at least one summand")
    R = parts[0].R
    for p in parts[1:]:
        if abs(p.R - R) > 1e-12 * max(1.0, abs(R)):
            raise MismatchedR(f"summands disagree on R: {p.R} vs {R}")
    d = sum(p.dim for p in parts)
    C = np.zeros((d, d, d), dtype=np.complex128)
    B = np.zeros((d, d), dtype=np.complex128)
    labels = []
    off = 0
    for k, p in enumerate(parts):
        s = slice(off, off + p.dim)
        C[s, s, s] = p.C
        B[s, s] = p.B
        prefix = f"{k}:" if len(parts) > 1 else ""
        labels.extend(prefix + l for l in p.labels)
        off += p.dim
    return build_algebra(C, B, R, labels=labels)


def group_algebra_cyclic(m: int, R=1.0, tol: float = DEFAULT_TOL):
    """Group algebra of the cyclic group of order m with form eps(f) = R m f(1).

    Returns the algebra on the group-element basis e, h, .., h^{m-1}
    together with its grading by the group itself.
    """
    if m < 1:
        raise ValueError("m must be positive")
    R = complex(R)
    C = np.zeros((m, m, m), dtype=np.complex128)
    Binv = np.zeros((m, m), dtype=np.complex128)
    for a in range(m):
        for b in range(m):
            Binv[a, b] = m * R if (a + b) % m == 0 else 0.0
            for c in range(m):
                C[a, b, c] = m * R if (a + b + c) % m == 0 else 0.0
    B = np.linalg.inv(Binv)
    labels = ["e"] + [f"h^{k}" if k > 1 else "h" for k in range(1, m)]
    grading = Grading((m,), tuple(range(m)))
    alg = build_algebra(C, B, R, labels=labels, grading=grading, tol=tol)
    return alg, grading


def trivial_bicharacter(group) -> Bicharacter:
    n = int(np.prod(group)) if len(group) else 1
    return Bicharacter(tuple(group), np.ones((n, n), dtype=np.complex128), name="trivial")


def z2_sign_bicharacter() -> Bicharacter:
    table = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128)
    return Bicharacter((2,), table, name="sign")


def klein_bicharacter(alpha: int, beta: int, gamma: int) -> Bicharacter:
    """Bicharacter of Z2 x Z2 with blocks ordered 1, i, j, k.

    The group elements are (0,0), (1,0), (0,1), (1,1) in flat order; the
    three signs fix the values on the pairs (i,j), (i,k) and (j,k).
    """
    a, b, g = alpha, beta, gamma
    table = np.array(
        [[1, 1, 1, 1],
         [1, a * b, a, b],
         [1, a, a * g, g],
         [1, b, g, b * g]], dtype=np.complex128)
    return Bicharacter((2, 2), table, name=f"klein({alpha:+d},{beta:+d},{gamma:+d})")


def all_klein_bicharacters():
    return [klein_bicharacter(*abg) for abg in itertools.product((1, -1), repeat=3)]


def gamma_bicharacter(n: int) -> Bicharacter:
    """Bicharacter of Z_n x Z_n built from the primitive root exp(2 pi i / n)."""
    xi = np.exp(2j * np.pi / n)
    g = Grading((n, n), tuple(range(n * n)))
    table = np.zeros((n * n, n * n), dtype=np.complex128)
    for h in range(n * n):
        i, j = g.decode(h)
        for hp in range(n * n):
            ip, jp = g.decode(hp)
            table[h, hp] = xi ** ((i * jp - ip * j) % n)
    return Bicharacter((n, n), table, name="gamma")


def z2_matrix_model(p: int, q: int, R=1.0):
    """M_{p+q}(C) with the non-symmetric form eps(a) = R (p-q) Tr(u a),
    u = diag(+1 x p, -1 x q), graded by block-diagonal vs block-anti-diagonal.
    """
    if p < 1 or q < 1 or p == q:
        raise ShapeMismatch("need p, q >= 1 and p != q")
    n = p + q
    R = complex(R)
    u = np.diag([1.0] * p + [-1.0] * q).astype(np.complex128)
    alg = matrix_algebra(n, "C", x=R * (p - q) * u, R=R)
    blocks = []
    for l in range(n):
        for m in range(n):
            blocks.append(0 if (l < p) == (m < p) else 1)
    grading = Grading((2,), tuple(blocks))
    alg = alg.with_grading(grading)
    return alg, grading, [trivial_bicharacter((2,)), z2_sign_bicharacter()]


def z2_complex_model(n: int, R=1.0):
    """M_n(C_R) with the symmetric form, graded by the real/imaginary split."""
    alg = matrix_algebra(n, "C_R", R=R)
    blocks = tuple(w for _ in range(n * n) for w in (0, 1))
    grading = Grading((2,), blocks)
    alg = alg.with_grading(grading)
    return alg, grading, [trivial_bicharacter((2,)), z2_sign_bicharacter()]


def klein_quaternionic_model(n: int, R=1.0):
    """M_n(H_R) with the symmetric form, graded by the Klein four-group
    through the unit quaternions 1, i, j, k."""
    alg = matrix_algebra(n, "H_R", R=R)
    blocks = tuple(w for _ in range(n * n) for w in (0, 1, 2, 3))
    grading = Grading((2, 2), blocks)
    alg = alg.with_grading(grading)
    return alg, grading, all_klein_bicharacters()


def gamma_model(n: int, R=1.0):
    """M_n(C) on the clock-and-shift basis X^i Y^j, graded by Z_n x Z_n.

    X is the diagonal clock matrix diag(xi^{n-1}, .., xi, 1) and Y the cyclic
    shift; the basis element with grade (i, j) is X^i Y^j and the symmetric
    form eps(a) = R n Tr(a) is used.
    """
    if n < 1:
        raise ValueError("n must be positive")
    R = complex(R)
    xi = np.exp(2j * np.pi / n)
    X = np.diag([xi ** (n - 1 - k) for k in range(n)]).astype(np.complex128)
    Y = np.zeros((n, n), dtype=np.complex128)
    for m in range(1, n):
        Y[m - 1, m] = 1.0
    Y[n - 1, 0] = 1.0
    grading = Grading((n, n), tuple(range(n * n)))
    mats, labels = [], []
    for g in range(n * n):
        i, j = grading.decode(g)
        mats.append(np.linalg.matrix_power(X, i) @ np.linalg.matrix_power(Y, j))
        labels.append(f"X^{i}Y^{j}")
    mats = np.stack(mats)
    x_emb = R * n * np.eye(n, dtype=np.complex128)
    prod = np.einsum("ij,ajk->aik", x_emb, mats)
    C = np.einsum("aij,bjk,cki->abc", prod, mats, mats)
    Binv = np.einsum("aij,bji->ab", prod, mats)
    B = np.linalg.inv(Binv)
    alg = build_algebra(C, B, R, labels=labels, grading=grading)
    return alg, grading, [gamma_bicharacter(n)]


def standard_gradings(kind: str, R=1.0, **params):
    """Dispatch to the named graded family.

    kind is one of 'z2_matrix' (params p, q), 'z2_complex' (n),
    'klein_quaternionic' (n) or 'gamma_n' (n).
    """
    if kind == "z2_matrix":
        return z2_matrix_model(params["p"], params["q"], R=R)
    if kind == "z2_complex":
        return z2_complex_model(params["n"], R=R)
    if kind == "klein_quaternionic":
        return klein_quaternionic_model(params["n"], R=R)
    if kind == "gamma_n":
        return gamma_model(params["n"], R=R)
    raise ValueError(f"unknown grading kind {kind!r}")


def grading_residual(alg: AlgebraData, grading: Grading) -> float:
    """How far products stray from the block demanded by the grading."""
    grading.check(alg.dim)
    blocks = np.array(grading.block_of_basis)
    worst = 0.0
    scale = max(1.0, max_abs(alg.mult))
    for a in range(alg.dim):
        for b in range(alg.dim):
            target = grading.add(blocks[a], blocks[b])
            off = alg.mult[a, b, blocks != target]
            if off.size:
                worst = max(worst, max_abs(off) / scale)
    return worst
