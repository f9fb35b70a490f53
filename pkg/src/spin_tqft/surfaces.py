"""Oriented triangulated surfaces and spin structures.

A triangulation is a list of triangles, each an ordered triple of darts
(edge id, sign): the edges in the order the oriented triangle traverses
them, with sign +1 when the traversal agrees with the edge's own
orientation.  Interior edges carry exactly two incidences with opposite
signs; boundary edges carry one.  The order of the two incidences of an
interior edge fixes which slot of the pairing tensor each side contracts
into, which matters for non-symmetric pairings, so builders record it
explicitly.

Spin structures on a closed genus-g surface are stored as the values of a
quadratic form on a symplectic basis a_1, b_1, .., a_g, b_g of the first
mod-2 homology.  The parity is the sign (-1)^Arf with
Arf = sum_i q(a_i) q(b_i) mod 2; a handle is odd exactly when both its
cycles carry q = 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import BoundaryEdge, InvalidMove, LengthMismatch


@dataclass(frozen=True)
class Triangulation:
    n_edges: int
    triangles: tuple  # tuple of ((edge, sign), (edge, sign), (edge, sign))
    gluings: dict = field(repr=False)  # edge -> tuple of (triangle, slot)
    boundary: tuple = ()

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    def interior_edges(self):
        return [e for e in range(self.n_edges) if len(self.gluings[e]) == 2]


def _collect_gluings(n_edges, triangles, explicit=None):
    gluings = {e: [] for e in range(n_edges)}
    for t, darts in enumerate(triangles):
        for s, (e, _) in enumerate(darts):
            gluings[e].append((t, s))
    gluings = {e: tuple(v) for e, v in gluings.items()}
    if explicit:
        for e, order in explicit.items():
            if sorted(order) != sorted(gluings[e]):
                raise InvalidMove(f"explicit gluing order for edge {e} is inconsistent")
            gluings[e] = tuple(order)
    return gluings


def make_triangulation(n_edges, triangles, boundary=(), gluing_order=None) -> Triangulation:
    triangles = tuple(tuple((int(e), int(s)) for e, s in tri) for tri in triangles)
    tri = Triangulation(
        n_edges=int(n_edges),
        triangles=triangles,
        gluings=_collect_gluings(n_edges, triangles, gluing_order),
        boundary=tuple(boundary))
    check_triangulation(tri)
    return tri


def check_triangulation(tri: Triangulation):
    """Interior edges carry two opposite-sign incidences, boundary edges one."""
    boundary = set(tri.boundary)
    for e in range(tri.n_edges):
        inc = tri.gluings[e]
        if e in boundary:
            if len(inc) != 1:
                raise InvalidMove(f"boundary edge {e} has {len(inc)} incidences")
            continue
        if len(inc) != 2:
            raise InvalidMove(f"interior edge {e} has {len(inc)} incidences")
        signs = [tri.triangles[t][s][1] for t, s in inc]
        if signs[0] * signs[1] != -1:
            raise InvalidMove(f"interior edge {e} is glued incoherently")


def count_vertices(tri: Triangulation):
    """(total, interior) vertex counts from corner identifications.

    Corner s of a triangle sits between dart s-1 and dart s.  Gluing an
    edge identifies the start of one incidence with the end of the other.
    """
    corners = {(t, s) for t in range(tri.n_triangles) for s in range(3)}
    parent = {c: c for c in corners}

    def find(c):
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    def union(c1, c2):
        r1, r2 = find(c1), find(c2)
        if r1 != r2:
            parent[r1] = r2

    for e in range(tri.n_edges):
        inc = tri.gluings[e]
        if len(inc) != 2:
            continue
        (t1, s1), (t2, s2) = inc
        # start corner of dart s is (t, s); its end corner is (t, s+1 mod 3)
        union((t1, s1), (t2, (s2 + 1) % 3))
        union((t1, (s1 + 1) % 3), (t2, s2))

    classes = {}
    for c in corners:
        classes.setdefault(find(c), []).append(c)
    boundary = set(tri.boundary)
    interior = 0
    for members in classes.values():
        on_boundary = False
        for t, s in members:
            for dart_slot in (s, (s - 1) % 3):
                if tri.triangles[t][dart_slot][0] in boundary:
                    on_boundary = True
        interior += 0 if on_boundary else 1
    return len(classes), interior


def euler_characteristic(tri: Triangulation) -> int:
    v, _ = count_vertices(tri)
    return v - tri.n_edges + tri.n_triangles


def triangle_single() -> Triangulation:
    """One free triangle; all three edges form the boundary."""
    return make_triangulation(
        3, [((0, 1), (1, 1), (2, 1))], boundary=(0, 1, 2))


def sphere_two_triangle() -> Triangulation:
    """Doubled triangle: two triangles glued along all three edges."""
    tris = [((0, 1), (1, 1), (2, 1)),
            ((2, -1), (1, -1), (0, -1))]
    return make_triangulation(3, tris)


def torus_two_triangle() -> Triangulation:
    """The 1-vertex torus: a square split along a diagonal.

    Edge 0 and 1 are the two identified boundary pairs, edge 2 the diagonal.
    """
    tris = [((0, 1), (1, 1), (2, -1)),
            ((2, 1), (0, -1), (1, -1))]
    return make_triangulation(3, tris)


def polygon_triangulation(g: int) -> Triangulation:
    """Genus-g surface from a 4g-gon, sides identified in the pattern
    a b a' b' per handle, fanned into 4g - 2 triangles from one corner.

    All polygon corners become a single vertex; there are 2g side edges and
    4g - 3 fan chords.
    """
    if g < 1:
        raise ValueError("genus must be at least 1")
    n_sides = 4 * g

    def side_edge(i):
        handle, r = divmod(i, 4)
        edge = 2 * handle + (0 if r in (0, 2) else 1)
        sign = 1 if r in (0, 1) else -1
        return edge, sign

    def chord_edge(j):  # chord from corner 0 to corner j, j = 2 .. 4g-2
        return 2 * g + (j - 2)

    n_edges = 2 * g + (n_sides - 3)
    tris = []
    for t in range(n_sides - 2):
        darts = []
        # corner 0 -> corner t+1
        darts.append(side_edge(0) if t == 0 else (chord_edge(t + 1), 1))
        # corner t+1 -> corner t+2
        darts.append(side_edge(t + 1))
        # corner t+2 -> corner 0
        if t == n_sides - 3:
            darts.append(side_edge(n_sides - 1))
        else:
            darts.append((chord_edge(t + 2), -1))
        tris.append(tuple(darts))
    return make_triangulation(n_edges, tris)


def pachner_22(tri: Triangulation, edge: int) -> Triangulation:
    """Flip the diagonal of the quadrilateral around an interior edge."""
    inc = tri.gluings[edge]
    if len(inc) != 2:
        raise BoundaryEdge(f"edge {edge} is not interior")
    (t1, s1), (t2, s2) = inc
    if t1 == t2:
        raise InvalidMove("the two sides of the edge lie in one triangle")

    def rotated(t, s):
        darts = tri.triangles[t]
        return darts[s:] + darts[:s]

    _, p, q = rotated(t1, s1)
    _, r, s = rotated(t2, s2)
    new_tris = list(tri.triangles)
    new_tris[t1] = (p, (edge, 1), s)
    new_tris[t2] = (q, r, (edge, -1))
    return make_triangulation(tri.n_edges, new_tris, boundary=tri.boundary)


def pachner_13(tri: Triangulation, t: int) -> Triangulation:
    """Subdivide triangle t into three around a new interior vertex."""
    if not 0 <= t < tri.n_triangles:
        raise InvalidMove(f"no triangle {t}")
    x, y, z = tri.triangles[t]
    e = tri.n_edges
    f1, f2, f3 = e, e + 1, e + 2  # centre to corners 0, 1, 2 of the old triangle
    new_tris = list(tri.triangles)
    new_tris[t] = (x, (f2, -1), (f1, 1))
    new_tris.append((y, (f3, -1), (f2, 1)))
    new_tris.append((z, (f1, -1), (f3, 1)))
    return make_triangulation(tri.n_edges + 3, new_tris, boundary=tri.boundary)


def random_pachner_moves(tri: Triangulation, n_moves: int, rng) -> Triangulation:
    """Apply a random eligible mix of 2-2 flips and 1-3 subdivisions."""
    for _ in range(n_moves):
        flippable = [e for e in tri.interior_edges()
                     if tri.gluings[e][0][0] != tri.gluings[e][1][0]]
        do_flip = flippable and rng.random() < 0.5
        if do_flip:
            tri = pachner_22(tri, flippable[rng.integers(len(flippable))])
        else:
            tri = pachner_13(tri, int(rng.integers(tri.n_triangles)))
    return tri


# ---------------------------------------------------------------------------
# Spin structures

@dataclass(frozen=True)
class SpinStructure:
    genus: int
    qbits: tuple  # (q(a_1), q(b_1), .., q(a_g), q(b_g))


def spin_structure(g: int, qbits) -> SpinStructure:
    qbits = tuple(int(b) % 2 for b in qbits)
    if len(qbits) != 2 * g:
        raise LengthMismatch(f"need 2g = {2 * g} bits, got {len(qbits)}")
    return SpinStructure(genus=g, qbits=qbits)


def arf_invariant(s: SpinStructure) -> int:
    return sum(s.qbits[2 * i] * s.qbits[2 * i + 1] for i in range(s.genus)) % 2


def parity(s: SpinStructure) -> int:
    """+1 for even spin structures, -1 for odd."""
    return -1 if arf_invariant(s) else 1


def handle_word(s: SpinStructure):
    """Per-handle labels: a handle is ODD when both its cycles carry q = 1."""
    return ["ODD" if s.qbits[2 * i] * s.qbits[2 * i + 1] else "EVEN"
            for i in range(s.genus)]


def enumerate_spin_structures(g: int):
    out = []
    for bits in range(4 ** g):
        q = [(bits >> k) & 1 for k in range(2 * g)]
        out.append(spin_structure(g, q))
    return out


# ---------------------------------------------------------------------------
# JSON round trip

def triangulation_to_json_dict(tri: Triangulation) -> dict:
    return {
        "n_edges": tri.n_edges,
        "triangles": [[e for e, _ in darts] for darts in tri.triangles],
        "orient": [[s for _, s in darts] for darts in tri.triangles],
        "gluings": {str(e): [list(x) for x in tri.gluings[e]] for e in range(tri.n_edges)},
        "boundary": list(tri.boundary),
    }


def triangulation_from_json_dict(data: dict) -> Triangulation:
    triangles = [
        tuple((e, s) for e, s in zip(edges, signs))
        for edges, signs in zip(data["triangles"], data["orient"])]
    gluing_order = None
    if "gluings" in data and data["gluings"]:
        gluing_order = {int(e): tuple(tuple(x) for x in v)
                        for e, v in data["gluings"].items()}
    return make_triangulation(
        data["n_edges"], triangles, boundary=tuple(data.get("boundary", ())),
        gluing_order=gluing_order)
