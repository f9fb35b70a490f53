"""Bicharacter enumeration and a crossing solver for small commutative algebras.

``enumerate_bicharacters`` lists every bicharacter of a finite abelian
group exactly (the values are roots of unity, so the identities hold to
rounding only).

``solve_crossings`` finds all crossing tensors on a commutative direct sum
of copies of C.  Strategy: move to the idempotent basis, where the pairing
is R times the identity and multiplication is diagonal.  There the
B-compatibility axiom (both orientations) says the tensor is constant on
the orbits of the index 4-cycle (w,x,y,z) -> (x,z,w,y), and the curl
axiom adds a few more linear rows; what remains is the quadratic system
from compatibility with multiplication plus the Reidemeister II move.
That system is solved by damped multi-start least squares, solutions are
clustered, transformed back to the original basis and re-verified against
every axiom before being reported.  Starts are drawn from a seeded RNG so
runs are reproducible; the merge over starts is deterministic by start
index.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .algebra import (
    DEFAULT_TOL, AlgebraData, Bicharacter, frobenius_form, max_abs, multiply,
    rel_residual, validate,
)
from .crossings import CrossingMap, canonical_crossing, check_axioms
from .errors import UngradedIndex
from .evaluator import chi, eta
from .formulas import CYCLIC_FAMILY_TAGS


def _group_elements(group):
    """Flat order consistent with Grading: first factor varies fastest."""
    ranges = [range(m) for m in group]
    elements = []
    for combo in itertools.product(*reversed(ranges)):
        elements.append(tuple(reversed(combo)))
    return elements


def enumerate_bicharacters(group) -> list[Bicharacter]:
    """All bicharacters of the product of cyclic groups of the given orders.

    A bicharacter is fixed by its values on generator pairs: the pair
    (g_i, g_j) with i < j is free among the gcd(m_i, m_j)-th roots of unity
    and determines (g_j, g_i) by inversion, while the diagonal values must
    square to one.  Extension to the whole group is bimultiplicative.
    """
    group = tuple(int(m) for m in group)
    n = 1
    for m in group:
        n *= m
    if n > 64:
        raise ValueError("group order above 64 is out of scope")
    k = len(group)
    coords = np.array(_group_elements(group), dtype=float).reshape(n, k)

    diag_choices = [[0, m // 2] if m % 2 == 0 else [0] for m in group]
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    pair_choices = [list(range(np.gcd(group[i], group[j]))) for i, j in pairs]

    out = []
    for diag in itertools.product(*diag_choices):
        for off in itertools.product(*pair_choices):
            phase = np.zeros((k, k))  # value on (g_i, g_j) is exp(2 pi i phase[i,j])
            for i in range(k):
                phase[i, i] = diag[i] / group[i]
            for (i, j), kij in zip(pairs, off):
                gij = int(np.gcd(group[i], group[j]))
                phase[i, j] = kij / gij
                phase[j, i] = ((-kij) % gij) / gij
            expo = np.einsum("ai,ij,bj->ab", coords, phase, coords)
            out.append(Bicharacter(group, np.exp(2j * np.pi * expo)))
    return out


@dataclass(frozen=True)
class SolveOptions:
    tol: float = DEFAULT_TOL
    max_solutions: int = 64
    starts: int = 200
    dedup_radius: float = 1e-6

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.dedup_radius <= self.tol:
            raise ValueError("dedup_radius must exceed tol")


@dataclass(frozen=True)
class SolveResult:
    solutions: list
    complete: bool
    seed: int
    starts_used: int
    converged: int
    first_seen: tuple = ()

    @property
    def count(self) -> int:
        return len(self.solutions)


def _is_commutative(alg: AlgebraData, tol: float) -> bool:
    return rel_residual(alg.mult, alg.mult.transpose(1, 0, 2)) <= tol


def idempotent_basis(alg: AlgebraData, seed: int = 0, tol: float = 1e-8) -> np.ndarray:
    """Columns are the primitive idempotents of a commutative split algebra."""
    d = alg.dim
    rng = np.random.default_rng(seed)
    coeff = rng.normal(size=d) + 1j * rng.normal(size=d)
    L = np.einsum("a,abc->cb", coeff, alg.mult)  # left multiplication operator
    _, vecs = np.linalg.eig(L)
    cols = []
    for kk in range(d):
        v = vecs[:, kk]
        sq = multiply(alg, v, v)
        j = int(np.argmax(np.abs(v)))
        ratio = sq[j] / v[j]
        if abs(ratio) < 1e-12:
            raise UngradedIndex("algebra is not split semisimple (nilpotent direction)")
        v = v / ratio
        for _ in range(40):  # idempotent polish: v <- 3v^2 - 2v^3
            v2 = multiply(alg, v, v)
            v = 3 * v2 - 2 * multiply(alg, v2, v)
            if max_abs(v2 - v) < 1e-15:
                break
        cols.append(v)
    P = np.array(cols).T
    # verify: pairwise products vanish, squares reproduce, total is the unit
    for a in range(d):
        for b in range(d):
            target = P[:, a] if a == b else np.zeros(d)
            if max_abs(multiply(alg, P[:, a], P[:, b]) - target) > tol:
                raise UngradedIndex("failed to split the algebra into idempotents")
    if max_abs(P.sum(axis=1) - alg.unit) > tol:
        raise UngradedIndex("idempotents do not sum to the unit")
    return P


def _orbit_structure(d: int):
    """Orbits of the index 4-cycle (w,x,y,z) -> (x,z,w,y)."""
    orbit_of = -np.ones((d, d, d, d), dtype=np.int64)
    reps = []
    for idx in itertools.product(range(d), repeat=4):
        if orbit_of[idx] >= 0:
            continue
        oid = len(reps)
        reps.append(idx)
        cur = idx
        for _ in range(4):
            orbit_of[cur] = oid
            w, x, y, z = cur
            cur = (x, z, w, y)
    return orbit_of, reps


def _project_to_orbits(lam: np.ndarray, orbit_of, n_orb: int) -> np.ndarray:
    """Average a tensor over the orbit structure (exact for true solutions)."""
    sums = np.zeros(n_orb, dtype=np.complex128)
    counts = np.zeros(n_orb)
    np.add.at(sums, orbit_of.ravel(), lam.ravel())
    np.add.at(counts, orbit_of.ravel(), 1.0)
    return sums / counts


def _residual_factory(d: int, orbit_of):
    eye = np.eye(d)
    eye2 = np.einsum("ri,sj->rsij", eye, eye)

    def unpack(x):
        u = x[: x.size // 2] + 1j * x[x.size // 2:]
        return u[orbit_of]

    def residual(x):
        lam = unpack(x)
        r2 = (np.einsum("rsij,jk->ijkrs", lam, eye)
              - np.einsum("rpij,rspk->ijkrs", lam, lam, optimize=True))
        r3 = np.einsum("rsop,opij->rsij", lam, lam) - eye2
        r5 = np.einsum("rmim->ri", lam) - np.einsum("mrmi->ri", lam)
        f = np.concatenate([r2.ravel(), r3.ravel(), r5.ravel()])
        return np.concatenate([f.real, f.imag])

    return unpack, residual


def _solve_one_start(residual, x0):
    sol = least_squares(residual, x0, method="lm", xtol=1e-15, ftol=1e-15,
                        gtol=1e-15, max_nfev=4000)
    return sol.x, float(np.max(np.abs(sol.fun)))


def solve_crossings(alg: AlgebraData, opts: SolveOptions = SolveOptions(),
                    seed: int = 20240, threads: int | None = None) -> SolveResult:
    """Enumerate the crossings of a commutative split algebra of dim <= 6.

    Returns the distinct solutions (group/original basis), each re-verified
    against all five axioms at ``opts.tol``.  ``complete`` is False when new
    solutions were still appearing in the second half of the start budget,
    i.e. the budget was probably exhausted before the set stabilised.
    """
    d = alg.dim
    if d > 6:
        raise ValueError("crossing solver is limited to dimension 6")
    if not _is_commutative(alg, opts.tol):
        raise ValueError("crossing solver requires a commutative algebra")
    rep = validate(alg, opts.tol)
    if not rep.all_core():
        raise ValueError("algebra must pass validation before solving")

    P = idempotent_basis(alg, seed=seed)
    Pinv = np.linalg.inv(P)
    eps_idem = np.array([frobenius_form(alg, P[:, k]) for k in range(d)])
    if max_abs(eps_idem - alg.R) > 1e-7 * max(1.0, abs(alg.R)):
        raise ValueError("idempotent weights are not all equal to R; not a valid target")

    orbit_of, reps = _orbit_structure(d)
    n_orb = len(reps)
    unpack, residual = _residual_factory(d, orbit_of)

    def pack_crossing(cr: CrossingMap) -> np.ndarray:
        lam_idem = np.einsum("ao,bp,opij,ix,jy->abxy", Pinv, Pinv, cr.lam, P, P,
                             optimize=True)
        u = _project_to_orbits(lam_idem, orbit_of, n_orb)
        return np.concatenate([u.real, u.imag])

    rng = np.random.default_rng(seed)
    starts = [pack_crossing(canonical_crossing(d))]
    while len(starts) < opts.starts:
        starts.append(rng.normal(scale=0.8, size=2 * n_orb))

    if threads is None:
        threads = int(os.environ.get("SPIN_TQFT_THREADS", "1") or "1")
    threads = max(1, threads)

    if threads == 1:
        raw = [_solve_one_start(residual, x0) for x0 in starts]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            raw = list(pool.map(lambda x0: _solve_one_start(residual, x0), starts))

    solutions, first_seen = [], []
    converged = 0
    for start_idx, (x, res) in enumerate(raw):
        if res > 1e-9:
            continue
        converged += 1
        lam_idem = unpack(x)
        lam = np.einsum("Oo,Pp,opij,iI,jJ->OPIJ", P, P, lam_idem, Pinv, Pinv,
                        optimize=True)
        cr = CrossingMap(lam)
        if not check_axioms(alg, cr, opts.tol).spin_axioms():
            continue
        dist = [max_abs(cr.lam - s.lam) for s in solutions]
        if dist and min(dist) <= opts.dedup_radius:
            continue
        solutions.append(cr)
        first_seen.append(start_idx)
        if len(solutions) >= opts.max_solutions:
            break

    hit_cap = len(solutions) >= opts.max_solutions
    late_discovery = any(s >= max(1, len(starts) // 2) for s in first_seen)
    order = np.argsort([_sort_key(s) for s in solutions])
    solutions = [solutions[i] for i in order]
    first_seen = tuple(first_seen[i] for i in order)
    return SolveResult(
        solutions=solutions,
        complete=not (hit_cap or late_discovery),
        seed=seed,
        starts_used=len(starts),
        converged=converged,
        first_seen=first_seen)


def _sort_key(cr: CrossingMap) -> str:
    return np.round(np.stack([cr.lam.real, cr.lam.imag]), 6).tobytes().hex()


@dataclass(frozen=True)
class ClassifiedCrossing:
    eta: np.ndarray
    chi: np.ndarray
    family: str
    ok: bool


def _cyclic_templates(alg: AlgebraData):
    """Known (eta, chi, tag) families of the cyclic models, in the group basis."""
    m, R = alg.dim, alg.R
    e = np.zeros(m, dtype=np.complex128)
    e[0] = 1.0
    out = []
    if m == 2:
        out.append((R ** -2 * e, R ** -2 * e, "2R^{2-2g}"))
        out.append((R ** -2 / 2 * e, -(R ** -2) / 2 * e, "P(s)2^{1-g}R^{2-2g}"))
    elif m == 3:
        h = np.zeros(m, dtype=np.complex128)
        h[1] = 1.0
        h2 = np.zeros(m, dtype=np.complex128)
        h2[2] = 1.0
        out.append((R ** -2 * e, R ** -2 * e, "3R^{2-2g}"))
        out.append((R ** -2 * (2 * e / 3 + (h + h2) / 6),
                    R ** -2 / 2 * (h + h2), "(1+P(s)2^{1-g})R^{2-2g}"))
    elif m == 4:
        h2 = np.zeros(m, dtype=np.complex128)
        h2[2] = 1.0
        out.append(((2 * R) ** -2 * e, (2 * R) ** -2 * e, "2^{2-2g}R^{2-2g}"))
        out.append((R ** -2 * e, R ** -2 * e, "4R^{2-2g}"))
        out.append((R ** -2 / 2 * e, -(R ** -2) / 2 * e, "P(s)2^{2-g}R^{2-2g}"))
        for sign in (+1, -1):
            out.append((R ** -2 / 4 * (3 * e + sign * h2),
                        R ** -2 / 4 * (e + sign * 3 * h2),
                        "(2+P(s)2^{1-g})R^{2-2g}"))
    return out


def classify_solution(alg: AlgebraData, cr: CrossingMap,
                      tol: float = 1e-7) -> ClassifiedCrossing:
    """Match the handle elements of a crossing against the known families."""
    e = eta(alg, cr)
    x = chi(alg, cr)
    scale = max(1.0, max_abs(e), max_abs(x))
    for te, tx, tag in _cyclic_templates(alg):
        if max_abs(e - te) <= tol * scale and max_abs(x - tx) <= tol * scale:
            return ClassifiedCrossing(eta=e, chi=x, family=tag, ok=True)
    return ClassifiedCrossing(eta=e, chi=x, family="unclassified", ok=False)


def family_tags(m: int):
    return CYCLIC_FAMILY_TAGS.get(m, ())
