"""Core state sum model data and the maps derived from it.

A model over a basis ``e_0 .. e_{d-1}`` is given by a rank-3 tensor of
triangle amplitudes ``C``, a rank-2 pairing tensor ``B`` and a nonzero
vertex amplitude ``R``.  Everything else is derived:

    Binv[a,b]       inverse pairing, ``Binv @ B = I``; equals the bilinear
                    form eps(e_a . e_b) once the axioms hold
    mult[a,b,c]     coefficient of e_c in the product e_a . e_b,
                    ``mult = einsum('abd,dc->abc', C, B)``
    beta[c]         distinguished element m(B) = B[a,b] e_a . e_b
    unit            R * beta, the candidate multiplicative identity
    counit[a]       eps(e_a) = Binv(e_a, unit)
    nakayama        coordinate matrix of the automorphism s with
                    eps(x . y) = eps(s(y) . x); equals ``B.T @ Binv``

``validate`` never raises on an axiom failure: it returns a report with one
boolean per axiom, each backed by an explicit tensor residual, so that
search code can grade candidate data.

Real algebras are encoded by real structure constants on a real basis and
contracted in complex double precision throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DimensionMismatch, NonFinite, SingularPairing, UngradedIndex

DEFAULT_TOL = 1e-9


def as_complex(arr, shape=None) -> np.ndarray:
    a = np.asarray(arr, dtype=np.complex128)
    if shape is not None and a.shape != shape:
        raise DimensionMismatch(f"expected shape {shape}, got {a.shape}")
    return a


def require_finite(*arrays):
    for a in arrays:
        a = np.asarray(a, dtype=np.complex128)
        if not (np.all(np.isfinite(a.real)) and np.all(np.isfinite(a.imag))):
            raise NonFinite("tensor contains NaN or infinite entries")


def max_abs(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def rel_residual(a, b) -> float:
    """Max-norm difference scaled by the larger of the two tensors (>= 1)."""
    scale = max(1.0, max_abs(a), max_abs(b))
    return max_abs(np.asarray(a) - np.asarray(b)) / scale


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Grading:
    """Grading of a basis by a finite abelian group.

    The group is a product of cyclic factors of the given orders; elements
    are stored as flat indices in mixed-radix order (first factor varies
    fastest).  ``block_of_basis[i]`` is the group element of basis vector i.
    """

    group: tuple[int, ...]
    block_of_basis: tuple[int, ...]

    @property
    def order(self) -> int:
        n = 1
        for m in self.group:
            n *= m
        return n

    def decode(self, g: int) -> tuple[int, ...]:
        out = []
        for m in self.group:
            out.append(g % m)
            g //= m
        return tuple(out)

    def encode(self, parts) -> int:
        g, radix = 0, 1
        for x, m in zip(parts, self.group):
            g += (x % m) * radix
            radix *= m
        return g

    def add(self, g: int, h: int) -> int:
        return self.encode(x + y for x, y in zip(self.decode(g), self.decode(h)))

    def neg(self, g: int) -> int:
        return self.encode(-x for x in self.decode(g))

    def check(self, dim: int):
        if len(self.block_of_basis) != dim:
            raise UngradedIndex(
                f"grading covers {len(self.block_of_basis)} indices, algebra has {dim}")
        n = self.order
        for i, g in enumerate(self.block_of_basis):
            if not 0 <= g < n:
                raise UngradedIndex(f"basis index {i} carries invalid block {g}")


@dataclass(frozen=True)
class Bicharacter:
    """Table of a bicharacter on a finite abelian group.

    ``table[g,h]`` is multiplicative in each slot and satisfies
    table[g,h]*table[h,g] == 1.  Indices are flat group elements in the
    same mixed-radix order as ``Grading``.
    """

    group: tuple[int, ...]
    table: np.ndarray
    name: str = ""

    def residual(self) -> float:
        """Largest violation of the two defining identities."""
        n = self.table.shape[0]
        grading = Grading(self.group, tuple([0] * n))
        r = 0.0
        for h in range(n):
            for j in range(n):
                r = max(r, abs(self.table[h, j] * self.table[j, h] - 1.0))
                for l in range(n):
                    jl = grading.add(j, l)
                    r = max(r, abs(self.table[h, jl] - self.table[h, j] * self.table[h, l]))
        return r


@dataclass(frozen=True)
class ValidationReport:
    nondegenerate_B: bool
    nondegenerate_C: bool
    compatible: bool
    associative: bool
    special: bool
    symmetric: bool
    spherical: bool
    separable_witness_ok: bool
    max_residual: float
    residuals: dict = field(default_factory=dict, repr=False)

    def all_core(self) -> bool:
        """Axioms needed for a well-defined model on closed surfaces."""
        return (self.nondegenerate_B and self.nondegenerate_C and self.compatible
                and self.associative and self.special)


@dataclass(frozen=True)
class AlgebraData:
    """Immutable state sum model data with cached derived maps."""

    dim: int
    C: np.ndarray
    B: np.ndarray
    R: complex
    labels: tuple[str, ...]
    Binv: np.ndarray
    mult: np.ndarray
    beta: np.ndarray
    unit: np.ndarray
    counit: np.ndarray
    nakayama_matrix: np.ndarray
    grading: Grading | None = None

    def with_grading(self, grading: Grading) -> "AlgebraData":
        grading.check(self.dim)
        return replace(self, grading=grading)


def build_algebra(C, B, R, labels=None, grading=None, tol=DEFAULT_TOL) -> AlgebraData:
    """Assemble an algebra from raw (C, B, R) data and cache derived maps.

    No axiom beyond invertibility of B is assumed here; use ``validate``
    to check the rest.  Raises ``SingularPairing`` if B cannot be inverted
    at the tolerance and ``NonFinite`` on NaN/infinite input.
    """
    C = as_complex(C)
    if C.ndim != 3 or len(set(C.shape)) != 1:
        raise DimensionMismatch(f"C must be cubical rank 3, got shape {C.shape}")
    d = C.shape[0]
    B = as_complex(B, (d, d))
    R = complex(R)
    require_finite(C, B, [R])
    if d < 1:
        raise DimensionMismatch("dimension must be at least 1")
    if R == 0:
        raise ValueError("vertex amplitude R must be nonzero")

    svals = np.linalg.svd(B, compute_uv=False)
    if svals[-1] <= tol * max(1.0, svals[0]):
        raise SingularPairing(
            f"pairing is singular: smallest singular value {svals[-1]:.3e}")
    Binv = np.linalg.inv(B)

    mult = np.einsum("abd,dc->abc", C, B)
    beta = np.einsum("ab,abc->c", B, mult)
    unit = R * beta
    counit = Binv @ unit
    nakayama_matrix = B.T @ Binv

    if labels is None:
        labels = tuple(f"e{i}" for i in range(d))
    else:
        labels = tuple(str(s) for s in labels)
        if len(labels) != d:
            raise DimensionMismatch("labels length must equal the dimension")

    alg = AlgebraData(
        dim=d, C=_frozen(C), B=_frozen(B), R=R, labels=labels,
        Binv=_frozen(Binv), mult=_frozen(mult), beta=_frozen(beta),
        unit=_frozen(unit), counit=_frozen(counit),
        nakayama_matrix=_frozen(nakayama_matrix))
    if grading is not None:
        alg = alg.with_grading(grading)
    return alg


def multiply(alg: AlgebraData, a, b) -> np.ndarray:
    """Coordinates of the product a . b."""
    a = as_complex(a, (alg.dim,))
    b = as_complex(b, (alg.dim,))
    return np.einsum("a,b,abc->c", a, b, alg.mult)


def frobenius_form(alg: AlgebraData, a) -> complex:
    """The linear form eps evaluated on an element (no conjugation)."""
    a = as_complex(a, (alg.dim,))
    return complex(np.dot(alg.counit, a))


def nakayama(alg: AlgebraData, a) -> np.ndarray:
    """Apply the automorphism determined by eps(x.y) = eps(s(y).x)."""
    a = as_complex(a, (alg.dim,))
    return alg.nakayama_matrix @ a


def element_power(alg: AlgebraData, a, k: int) -> np.ndarray:
    """k-th multiplicative power of an element (k >= 0; 0 gives the unit)."""
    if k < 0:
        raise ValueError("negative powers are not defined here")
    out = alg.unit.copy()
    for _ in range(k):
        out = multiply(alg, out, a)
    return out


def validate(alg: AlgebraData, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Check every axiom as a tensor residual; failures are reported, not raised."""
    d, C, B, Binv, mult = alg.dim, alg.C, alg.B, alg.Binv, alg.mult
    res = {}

    sb = np.linalg.svd(B, compute_uv=False)
    res["nondegenerate_B"] = 0.0 if sb[-1] > tol * max(1.0, sb[0]) else 1.0
    sc = np.linalg.svd(C.reshape(d, d * d), compute_uv=False)
    res["nondegenerate_C"] = 0.0 if sc[-1] > tol * max(1.0, sc[0]) else 1.0

    res["snake"] = rel_residual(Binv @ B, np.eye(d))
    res["compatible"] = rel_residual(
        np.einsum("abc,cd->abd", C, B),
        np.einsum("de,eab->abd", B, C))
    res["associative"] = rel_residual(
        np.einsum("abe,ecf->abcf", mult, mult),
        np.einsum("bce,aef->abcf", mult, mult))

    left_unit = np.einsum("a,abc->bc", alg.unit, mult)
    right_unit = np.einsum("b,abc->ac", alg.unit, mult)
    eye = np.eye(d)
    res["special"] = max(rel_residual(left_unit, eye), rel_residual(right_unit, eye))

    res["symmetric"] = rel_residual(Binv, Binv.T)
    S = alg.nakayama_matrix
    res["spherical"] = rel_residual(S @ S, eye)

    # Separability witness t = R*B: left and right module actions agree
    # and m(t) is the identity.
    t = alg.R * B
    left_act = np.einsum("xac,ab->xcb", mult, t)   # x acting on the first slot
    right_act = np.einsum("ab,bxc->xac", t, mult)  # x acting on the second slot
    res["separable_center"] = rel_residual(left_act, right_act)
    res["separable_witness_ok"] = max(res["separable_center"], res["special"])

    def ok(key):
        return res[key] <= tol

    return ValidationReport(
        nondegenerate_B=ok("nondegenerate_B"),
        nondegenerate_C=ok("nondegenerate_C"),
        compatible=ok("compatible") and ok("snake"),
        associative=ok("associative"),
        special=ok("special"),
        symmetric=ok("symmetric"),
        spherical=ok("spherical"),
        separable_witness_ok=ok("separable_witness_ok"),
        max_residual=max(v for v in res.values()),
        residuals=res)


def transform_basis(alg: AlgebraData, P, labels=None, tol=DEFAULT_TOL) -> AlgebraData:
    """Rewrite the data in the basis f_j = sum_i P[i,j] e_i."""
    P = as_complex(P, (alg.dim, alg.dim))
    Pinv = np.linalg.inv(P)
    C = np.einsum("ijk,ia,jb,kc->abc", alg.C, P, P, P)
    B = np.einsum("ai,ij,bj->ab", Pinv, alg.B, Pinv)
    return build_algebra(C, B, alg.R, labels=labels, tol=tol)


# ---------------------------------------------------------------------------
# JSON round trip.  Complex entries are 2-element [re, im] arrays; tensors
# are nested row-major lists.

def _c2j(a):
    a = np.asarray(a, dtype=np.complex128)
    out = np.stack([a.real, a.imag], axis=-1)
    return out.tolist()


def _j2c(data) -> np.ndarray:
    a = np.asarray(data, dtype=np.float64)
    if a.shape[-1] != 2:
        raise DimensionMismatch("complex JSON entries must be [re, im] pairs")
    return a[..., 0] + 1j * a[..., 1]


def algebra_to_json_dict(alg: AlgebraData) -> dict:
    out = {
        "dim": alg.dim,
        "C": _c2j(alg.C),
        "B": _c2j(alg.B),
        "R": [alg.R.real, alg.R.imag],
        "labels": list(alg.labels),
    }
    if alg.grading is not None:
        out["grading"] = {
            "group": list(alg.grading.group),
            "block_of_basis": list(alg.grading.block_of_basis),
        }
    return out


def algebra_from_json_dict(data: dict, tol=DEFAULT_TOL) -> AlgebraData:
    d = int(data["dim"])
    C = _j2c(data["C"])
    B = _j2c(data["B"])
    R = complex(data["R"][0], data["R"][1])
    labels = data.get("labels")
    grading = None
    if "grading" in data and data["grading"] is not None:
        g = data["grading"]
        grading = Grading(tuple(int(m) for m in g["group"]),
                          tuple(int(b) for b in g["block_of_basis"]))
    alg = build_algebra(C, B, R, labels=labels, grading=grading, tol=tol)
    if alg.dim != d:
        raise DimensionMismatch("declared dim does not match tensor shapes")
    return alg
