"""Partition functions: naive sums over triangulations and diagram programs.

``naive_partition`` contracts one C tensor per triangle and one B tensor per
interior edge, weighting by R to the number of interior vertices.  Boundary
edges either stay open (the result is a tensor over them, in boundary-list
order) or are pinned to supplied states.

``eval_diagram`` runs a slice program bottom-to-top.  Each slice is a row of
generators acting side by side on the strands; positions not covered by a
generator pass through unchanged.  The result is the tensor of the composed
linear map.  Powers of R are deliberately not applied here; the named
partition functions below insert them.

The handle elements are built from two pairing cups with one crossing:

    handle(c1, c2)[r] = B1[a,b] B2[c,d] lam[o,p,b,c]
                        mult[a,o,x] mult[x,p,y] mult[y,d,r]

where Bk = phi^{c_k} applied to the first slot of B.  With no curls this is
the torus element eta; with one curl on each loop it is chi.  The partition
function of a closed genus-g surface with spin structure s is
R * eps(eta^{g-l} chi^l) where l counts odd handles of s, and only l mod 2
matters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    DEFAULT_TOL, AlgebraData, element_power, frobenius_form, multiply, rel_residual,
)
from .crossings import CrossingMap, canonical_crossing, curl_map
from .errors import ArityMismatch, NotSymmetric, StateOutOfRange
from .surfaces import SpinStructure, Triangulation, count_vertices

# generator name -> (inputs, outputs)
GENERATORS = {
    "Id": (1, 1),
    "CupB": (0, 2),
    "CapBinv": (2, 0),
    "Mult": (2, 1),
    "Unit": (0, 1),
    "Counit": (1, 0),
    "Cross": (2, 2),
    "CurlR": (1, 1),
}


@dataclass(frozen=True)
class Diagram:
    """Slice program: rows of (generator, position), read bottom to top."""

    slices: tuple
    n_in: int = 0

    @staticmethod
    def make(slices, n_in=0) -> "Diagram":
        norm = tuple(tuple((str(g), int(at)) for g, at in row) for row in slices)
        for row in norm:
            for g, _ in row:
                if g not in GENERATORS:
                    raise ArityMismatch(f"unknown generator {g!r}")
        return Diagram(slices=norm, n_in=int(n_in))


def diagram_to_json_dict(diag: Diagram) -> dict:
    return {"n_in": diag.n_in,
            "slices": [[{"gen": g, "at": at} for g, at in row] for row in diag.slices]}


def diagram_from_json_dict(data: dict) -> Diagram:
    return Diagram.make(
        [[(entry["gen"], entry["at"]) for entry in row] for row in data["slices"]],
        n_in=data.get("n_in", 0))


def _generator_tensor(name: str, alg: AlgebraData, cr: CrossingMap | None):
    if name == "CupB":
        return alg.B
    if name == "CapBinv":
        return alg.Binv
    if name == "Mult":
        return alg.mult.transpose(2, 0, 1)   # [out, in1, in2]
    if name == "Unit":
        return alg.unit
    if name == "Counit":
        return alg.counit
    if name == "Cross":
        if cr is None:
            raise ArityMismatch("diagram uses Cross but no crossing was supplied")
        return cr.lam
    if name == "CurlR":
        if cr is None:
            raise ArityMismatch("diagram uses CurlR but no crossing was supplied")
        return curl_map(alg, cr)
    raise ArityMismatch(f"unknown generator {name!r}")


def eval_diagram(alg: AlgebraData, cr: CrossingMap | None, diag: Diagram):
    """Tensor of the composed map; a 0 -> 0 diagram gives a scalar.

    The running tensor carries the current output strands first and the
    diagram's input strands last.
    """
    d = alg.dim
    n_in = diag.n_in
    if n_in == 0:
        state = np.ones((), dtype=np.complex128)
    else:
        state = np.eye(d ** n_in, dtype=np.complex128).reshape((d,) * (2 * n_in))
    count = n_in

    for row in diag.slices:
        row = sorted(row, key=lambda e: e[1])
        # validate coverage of this row
        cursor = -1
        for g, at in row:
            if at <= cursor:
                raise ArityMismatch("generators overlap in one slice")
            if at + GENERATORS[g][0] > count:
                raise ArityMismatch(
                    f"{g} at {at} does not fit on {count} strands")
            cursor = at + GENERATORS[g][0] - 1
        # apply right-to-left so positions stay valid
        for g, at in reversed(row):
            g_in, g_out = GENERATORS[g]
            if g == "Id":
                continue
            tensor = _generator_tensor(g, alg, cr)
            t_axes = tuple(range(at, at + g_in))
            g_axes = tuple(range(g_out, g_out + g_in))
            state = np.tensordot(tensor, state, axes=(g_axes, t_axes))
            # tensordot puts the generator outputs first; move them home
            state = np.moveaxis(state, tuple(range(g_out)),
                                tuple(range(at, at + g_out)))
            count += g_out - g_in

    if count == 0 and n_in == 0:
        return complex(state)
    return state


def naive_partition(alg: AlgebraData, tri: Triangulation, boundary_states=None):
    """R^V times the contraction of C per triangle and B per interior edge.

    Closed surfaces give a scalar.  With a boundary, supply one state per
    boundary edge (in ``tri.boundary`` order) or receive the full boundary
    tensor with axes in that order.
    """
    d = alg.dim
    label = {}
    for t in range(tri.n_triangles):
        for s in range(3):
            label[(t, s)] = 3 * t + s

    operands = []
    for t in range(tri.n_triangles):
        operands.append(alg.C)
        operands.append([label[(t, s)] for s in range(3)])
    for e in tri.interior_edges():
        (t1, s1), (t2, s2) = tri.gluings[e]
        operands.append(alg.B)
        operands.append([label[(t1, s1)], label[(t2, s2)]])

    out_labels = []
    if tri.boundary:
        if boundary_states is not None:
            states = list(boundary_states)
            if len(states) != len(tri.boundary):
                raise StateOutOfRange(
                    f"need {len(tri.boundary)} boundary states, got {len(states)}")
            for e, st in zip(tri.boundary, states):
                st = int(st)
                if not 0 <= st < d:
                    raise StateOutOfRange(f"state {st} outside 0..{d - 1}")
                (t, s), = tri.gluings[e]
                pin = np.zeros(d, dtype=np.complex128)
                pin[st] = 1.0
                operands.append(pin)
                operands.append([label[(t, s)]])
        else:
            for e in tri.boundary:
                (t, s), = tri.gluings[e]
                out_labels.append(label[(t, s)])

    result = np.einsum(*operands, out_labels, optimize="greedy")
    _, v_interior = count_vertices(tri)
    result = (alg.R ** v_interior) * result
    if not out_labels:
        return complex(result)
    return result


def handle_element(alg: AlgebraData, cr: CrossingMap, curls=(0, 0),
                   tol: float = DEFAULT_TOL) -> np.ndarray:
    """Central element contributed by one handle, with the given number of
    curls on its two loops."""
    c1, c2 = int(curls[0]) % 2, int(curls[1]) % 2
    if c1 or c2:
        phi = curl_map(alg, cr, tol)
        B1 = phi @ alg.B if c1 else alg.B
        B2 = phi @ alg.B if c2 else alg.B
    else:
        B1 = B2 = alg.B
    return np.einsum("ab,cd,opbc,aox,xpy,ydr->r",
                     B1, B2, cr.lam, alg.mult, alg.mult, alg.mult, optimize=True)


def eta(alg: AlgebraData, cr: CrossingMap, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Handle element of an even handle (no curls)."""
    curl_map(alg, cr, tol)  # enforce the axiom prerequisites
    return handle_element(alg, cr, (0, 0), tol)


def chi(alg: AlgebraData, cr: CrossingMap, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Handle element of an odd handle (one curl on each loop)."""
    return handle_element(alg, cr, (1, 1), tol)


def ring_maps(alg: AlgebraData, cr: CrossingMap, tol: float = DEFAULT_TOL):
    """The three cylinder maps (p, n1, n2) as d x d coordinate matrices.

    R*p and R*n1 are projectors; p is insensitive to curls on the through
    strand (p . phi = p) and n2 = phi . n1 = n1 . phi.
    """
    phi = curl_map(alg, cr, tol)
    p = np.einsum("yz,oqay,oqx,xzr->ra", alg.B, cr.lam, alg.mult, alg.mult,
                  optimize=True)
    Bc = phi @ alg.B
    n1 = np.einsum("yz,oqay,oqx,xzr->ra", Bc, cr.lam, alg.mult, alg.mult,
                   optimize=True)
    n2 = phi @ n1
    return p, n1, n2


def _parity_flag(parity) -> int:
    if parity in (1, +1, "even", "EVEN"):
        return 1
    if parity in (-1, "odd", "ODD"):
        return -1
    raise ValueError(f"parity must be +1/-1 or 'even'/'odd', got {parity!r}")


def spin_partition(alg: AlgebraData, cr: CrossingMap, g: int, parity,
                   tol: float = DEFAULT_TOL) -> complex:
    """Closed-surface value R * eps(eta^g) or R * eps(chi * eta^{g-1})."""
    if g < 0:
        raise ValueError("genus must be nonnegative")
    flag = _parity_flag(parity)
    if g == 0:
        if flag == -1:
            raise ValueError("the sphere has no odd spin structure")
        return alg.R * frobenius_form(alg, alg.unit)
    e = eta(alg, cr, tol)
    if flag == 1:
        return alg.R * frobenius_form(alg, element_power(alg, e, g))
    x = chi(alg, cr, tol)
    return alg.R * frobenius_form(alg, multiply(alg, x, element_power(alg, e, g - 1)))


def spin_partition_direct(alg: AlgebraData, cr: CrossingMap, spin: SpinStructure,
                          tol: float = DEFAULT_TOL) -> complex:
    """Same value computed handle by handle from the quadratic form bits."""
    out = alg.unit.copy()
    for i in range(spin.genus):
        h = handle_element(alg, cr, (spin.qbits[2 * i], spin.qbits[2 * i + 1]), tol)
        out = multiply(alg, out, h)
    return alg.R * frobenius_form(alg, out)


def fhk_partition(alg: AlgebraData, g: int, tol: float = DEFAULT_TOL) -> complex:
    """R * eps(z^g) for a symmetric model, z the canonical torus element."""
    if rel_residual(alg.Binv, alg.Binv.T) > tol:
        raise NotSymmetric("the pairing is not symmetric")
    z = handle_element(alg, canonical_crossing(alg.dim), (0, 0), tol)
    return alg.R * frobenius_form(alg, element_power(alg, z, g))


def sphere_partition(alg: AlgebraData) -> complex:
    """R * eps(1), the value of any triangulated sphere."""
    return alg.R * frobenius_form(alg, alg.unit)
