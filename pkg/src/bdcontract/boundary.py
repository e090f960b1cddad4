"""The boundary surface of a triangulated 3-manifold.

Unglued tetrahedron faces form the boundary triangles.  Two boundary
triangles sharing an edge are paired by pivoting around that edge through the
glued tetrahedra, which also yields the affine identification of the edge.
Points on boundary triangles are written in barycentric coordinates with
respect to the triangle's vertices in increasing tetrahedron-vertex order;
the planar chart drops the first coordinate.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .exactgeom import Point, TriangulatedFace, intersect_segments
from .triangulation import FACE_VERTICES, Triangulation, TriangulationError, validate_manifold
from .util import UnionFind

Bary = tuple[Fraction, Fraction, Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)

CORNERS: tuple[Point, Point, Point] = ((_ZERO, _ZERO), (_ONE, _ZERO), (_ZERO, _ONE))


def bary_to_chart(x: Bary) -> Point:
    return (x[1], x[2])


def chart_to_bary(p: Point) -> Bary:
    return (1 - p[0] - p[1], p[0], p[1])


# Side k of a boundary triangle is the edge opposite local vertex k.
SIDE_LOCALS = ((1, 2), (0, 2), (0, 1))


@dataclass(frozen=True)
class SidePairing:
    """Identification of side (btri, slot) with (btri2, slot2).

    ``local_map`` sends the two local vertex indices of the side to local
    indices on the other triangle.
    """

    btri: int
    slot: int
    btri2: int
    slot2: int
    local_map: tuple[tuple[int, int], tuple[int, int]]


class BoundarySurfaceError(ValueError):
    pass


class BoundarySurface:
    """Boundary triangles with induced edge identifications.

    faces[i] is the (tet, face) pair of boundary triangle i; verts[i] lists
    its three tetrahedron vertices in increasing order, fixing the local
    vertex numbering 0, 1, 2 used by all coordinates.
    """

    def __init__(self, tri: Triangulation):
        report = validate_manifold(tri)
        if not report.is_manifold:
            raise BoundarySurfaceError("triangulation is not a manifold")
        self.tri = tri
        self.faces: list[tuple[int, int]] = tri.boundary_faces()
        if not self.faces:
            raise BoundarySurfaceError("triangulation has empty boundary")
        self.face_index = {tf: i for i, tf in enumerate(self.faces)}
        self.verts: list[tuple[int, int, int]] = [FACE_VERTICES[f] for _, f in self.faces]
        self._sides = tri.face_sides()
        self.side_pairing: dict[tuple[int, int], SidePairing] = {}
        self._pair_all_sides()
        self._vclasses = self._vertex_classes()
        self.components: list[list[int]] = self._components()

    # -- construction ----------------------------------------------------------

    def _pivot(self, tet: int, face: int, a: int, b: int):
        """Rotate around tetrahedron edge {a, b} from boundary face (tet, face).

        Returns the other boundary germ (tet', face', a', b') with the vertex
        correspondence a -> a', b -> b'.
        """
        t, f, x, y = tet, face, a, b
        for _ in range(12 * self.tri.tets + 2):
            other = next(v for v in range(4) if v not in (x, y) and v != f)
            g = self._sides.get((t, other))
            if g is None:
                return t, other, x, y
            vm = g.vertex_map()
            t, f, x, y = g.tet2, g.face2, vm[x], vm[y]
        raise BoundarySurfaceError("edge pivot did not terminate; non-manifold gluing")

    def _pair_all_sides(self) -> None:
        for bi, (t, f) in enumerate(self.faces):
            for slot in range(3):
                if (bi, slot) in self.side_pairing:
                    continue
                li, lj = SIDE_LOCALS[slot]
                a, b = self.verts[bi][li], self.verts[bi][lj]
                t2, f2, a2, b2 = self._pivot(t, f, a, b)
                bj = self.face_index[(t2, f2)]
                la2 = self.verts[bj].index(a2)
                lb2 = self.verts[bj].index(b2)
                slot2 = next(k for k in range(3) if set(SIDE_LOCALS[k]) == {la2, lb2})
                if bj == bi and slot2 == slot:
                    raise BoundarySurfaceError("boundary edge pairs with itself")
                self.side_pairing[(bi, slot)] = SidePairing(bi, slot, bj, slot2, ((li, la2), (lj, lb2)))
                self.side_pairing[(bj, slot2)] = SidePairing(bj, slot2, bi, slot, ((la2, li), (lb2, lj)))

    def _vertex_classes(self) -> UnionFind:
        uf = UnionFind()
        for bi in range(len(self.faces)):
            for v in range(3):
                uf.add((bi, v))
        for (bi, slot), sp in self.side_pairing.items():
            for lv, lv2 in sp.local_map:
                uf.union((bi, lv), (sp.btri2, lv2))
        return uf

    def _components(self) -> list[list[int]]:
        uf = UnionFind()
        for bi in range(len(self.faces)):
            uf.add(bi)
        for (bi, _), sp in self.side_pairing.items():
            uf.union(bi, sp.btri2)
        comps = sorted(uf.classes().values())
        return comps

    # -- queries ----------------------------------------------------------------

    def num_triangles(self) -> int:
        return len(self.faces)

    def vertex_class(self, bi: int, lv: int):
        return self._vclasses.find((bi, lv))

    def vertex_class_count(self) -> int:
        return len(self._vclasses.classes())

    def edge_class_count(self) -> int:
        seen = set()
        for (bi, slot), sp in self.side_pairing.items():
            seen.add(frozenset(((bi, slot), (sp.btri2, sp.slot2))))
        return len(seen)

    def euler_characteristic(self, component: Sequence[int]) -> int:
        comp = set(component)
        vcs = {self.vertex_class(bi, v) for bi in comp for v in range(3)}
        ecs = set()
        for bi in comp:
            for slot in range(3):
                sp = self.side_pairing[(bi, slot)]
                ecs.add(frozenset(((bi, slot), (sp.btri2, sp.slot2))))
        return len(vcs) - len(ecs) + len(comp)

    def orientable(self, component: Sequence[int]) -> bool:
        comp = list(component)
        orient: dict[int, int] = {comp[0]: 1}
        queue = [comp[0]]
        while queue:
            bi = queue.pop()
            for slot in range(3):
                sp = self.side_pairing[(bi, slot)]
                bj = sp.btri2
                # The positively oriented triangle traverses side k in the
                # direction SIDE_LOCALS[k], except slot 1 which runs 2 -> 0.
                rel = self._side_relation(sp)
                want = orient[bi] * rel
                if bj not in orient:
                    orient[bj] = want
                    queue.append(bj)
                elif orient[bj] != want:
                    return False
        return True

    @staticmethod
    def _side_direction(slot: int) -> tuple[int, int]:
        """Directed edge (from, to) in local indices induced by +1 orientation."""
        if slot == 0:
            return (1, 2)
        if slot == 1:
            return (2, 0)
        return (0, 1)

    def _side_relation(self, sp: SidePairing) -> int:
        """-1 if equal orientations traverse the shared edge oppositely (consistent)."""
        u, v = self._side_direction(sp.slot)
        m = dict(sp.local_map)
        u2, v2 = m[u], m[v]
        du, dv = self._side_direction(sp.slot2)
        if (u2, v2) == (du, dv):
            return -1   # same direction: neighbor must take opposite orientation
        if (u2, v2) == (dv, du):
            return 1
        raise BoundarySurfaceError("side pairing does not map the edge to the edge")

    def component_of(self, bi: int) -> list[int]:
        for comp in self.components:
            if bi in comp:
                return comp
        raise BoundarySurfaceError("unknown boundary triangle")

    # -- coordinate transport ---------------------------------------------------

    def transport(self, bi: int, x: Bary, slot: int) -> tuple[int, Bary]:
        """Carry a point lying on side ``slot`` of ``bi`` across the pairing."""
        if x[slot] != 0:
            raise BoundarySurfaceError("point does not lie on the requested side")
        sp = self.side_pairing[(bi, slot)]
        out = [_ZERO, _ZERO, _ZERO]
        for lv, lv2 in sp.local_map:
            out[lv2] = x[lv]
        return sp.btri2, (out[0], out[1], out[2])

    def representations(self, bi: int, x: Bary) -> list[tuple[int, Bary]]:
        """All (triangle, coordinates) descriptions of a point.

        A point interior to a triangle has one; a point interior to an edge
        has two; a point at a surface vertex has one per incident corner.
        """
        zeros = [k for k in range(3) if x[k] == 0]
        if len(zeros) == 0:
            return [(bi, x)]
        if len(zeros) == 1:
            other = self.transport(bi, x, zeros[0])
            return [(bi, x), other]
        # Vertex: walk the corner fan.
        lv = next(k for k in range(3) if x[k] == 1)
        reps = [(bi, x)]
        seen = {(bi, lv)}
        frontier = [(bi, lv)]
        while frontier:
            cb, cv = frontier.pop()
            for slot in range(3):
                if slot == cv:
                    continue
                sp = self.side_pairing[(cb, slot)]
                m = dict(sp.local_map)
                nb, nv = sp.btri2, m[cv]
                if (nb, nv) not in seen:
                    seen.add((nb, nv))
                    frontier.append((nb, nv))
                    y = [_ZERO, _ZERO, _ZERO]
                    y[nv] = _ONE
                    reps.append((nb, (y[0], y[1], y[2])))
        return reps


def boundary_surface(tri: Triangulation) -> BoundarySurface:
    """Boundary triangles of a valid triangulation, with induced structure."""
    return BoundarySurface(tri)


# ---------------------------------------------------------------------------
# Cutting the surface along a family of segments
# ---------------------------------------------------------------------------

def refine_faces(surface: BoundarySurface,
                 constraints: dict[int, list[tuple[Point, Point]]],
                 extra_points: Optional[dict[int, list[Point]]] = None) -> dict[int, TriangulatedFace]:
    """Refine every boundary triangle so the given chart segments become edges.

    Segment endpoints lying on a triangle side are transported across the
    side pairing so both incident triangles subdivide the shared edge
    identically.
    """
    pts: dict[int, set[Point]] = {bi: set() for bi in range(surface.num_triangles())}
    for bi, extra in (extra_points or {}).items():
        pts[bi].update(extra)
    for bi, segs in constraints.items():
        for seg in segs:
            pts[bi].update(seg)
    # Harmonize side points (a point on a shared edge subdivides both sides).
    for bi in range(surface.num_triangles()):
        for p in list(pts[bi]):
            b = chart_to_bary(p)
            zeros = [k for k in range(3) if b[k] == 0]
            if len(zeros) == 1:
                nb, nx = surface.transport(bi, b, zeros[0])
                pts[nb].add(bary_to_chart(nx))
    faces: dict[int, TriangulatedFace] = {}
    for bi in range(surface.num_triangles()):
        face = TriangulatedFace(CORNERS)
        for p in sorted(pts[bi] - set(CORNERS)):
            face.insert_point(p)
        for p, q in constraints.get(bi, []):
            face.insert_constraint(p, q)
        face.check()
        faces[bi] = face
    return faces


def constraint_subedges(face: TriangulatedFace, p: Point, q: Point) -> list[frozenset]:
    """The refinement edges that together realize the segment from p to q."""
    from .exactgeom import between, segment_param
    i, j = face.vertex_id(p), face.vertex_id(q)
    mids = []
    for vid, v in enumerate(face.vertices):
        if vid in (i, j):
            continue
        if between(p, q, v):
            mids.append((segment_param(p, q, v), vid))
    chain = [i] + [v for _, v in sorted(mids)] + [j]
    return [frozenset((a, b)) for a, b in zip(chain, chain[1:])]


def _border_slot(pa: Point, pb: Point) -> Optional[int]:
    ba, bb = chart_to_bary(pa), chart_to_bary(pb)
    for slot in range(3):
        if ba[slot] == 0 and bb[slot] == 0:
            return slot
    return None


def cut_components_euler(surface: BoundarySurface,
                         constraints: dict[int, list[tuple[Point, Point]]]) -> list[int]:
    """Euler characteristics of the surface cut along the given segments.

    ``constraints`` maps boundary triangles to pairwise non-crossing chart
    segments.  The surface is refined so the segments become edges and reglued
    except across them; the characteristic of every component of the result
    is returned, sorted descending.  Vertices and edges along the cut are
    counted once per side, as in the abstract cut-open surface.
    """
    faces = refine_faces(surface, constraints)
    cut_edges: set[tuple[int, frozenset]] = set()
    for bi, segs in constraints.items():
        for p, q in segs:
            cut_edges.update((bi, e) for e in constraint_subedges(faces[bi], p, q))

    # Cells and their three sides; a side is (cell, frozenset of vertex ids).
    cell_uf = UnionFind()
    side_uf = UnionFind()
    corner_uf = UnionFind()
    cells = []
    by_edge: dict[tuple[int, frozenset], list] = {}
    for bi, face in faces.items():
        for t in face.triangles:
            cell = (bi, t)
            cells.append(cell)
            cell_uf.add(cell)
            for a, b in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
                e = frozenset((a, b))
                side_uf.add((cell, e))
                by_edge.setdefault((bi, e), []).append(cell)
            for v in t:
                corner_uf.add((cell, v))

    def glue(cell1, e1, cell2, e2, vmap):
        cell_uf.union(cell1, cell2)
        side_uf.union((cell1, e1), (cell2, e2))
        for a, b in vmap:
            corner_uf.union((cell1, a), (cell2, b))

    handled_across: set = set()
    for (bi, e), owners in sorted(by_edge.items()):
        if (bi, e) in cut_edges:
            continue
        if len(owners) == 2:
            a, b = tuple(e)
            glue(owners[0], e, owners[1], e, ((a, a), (b, b)))
            continue
        if len(owners) != 1:
            raise BoundarySurfaceError("face refinement edge used more than twice")
        # Border sub-edge: glue across the side pairing unless cut there.
        a, b = tuple(e)
        face = faces[bi]
        pa, pb = face.vertices[a], face.vertices[b]
        slot = _border_slot(pa, pb)
        if slot is None:
            raise BoundarySurfaceError("refined border edge does not lie on a side")
        nb, na = surface.transport(bi, chart_to_bary(pa), slot)
        nb2, nbb = surface.transport(bi, chart_to_bary(pb), slot)
        if nb2 != nb:
            raise BoundarySurfaceError("side pairing transported endpoints inconsistently")
        na_id = faces[nb].vertex_id(bary_to_chart(na))
        nb_id = faces[nb].vertex_id(bary_to_chart(nbb))
        pe = frozenset((na_id, nb_id))
        if (nb, pe) in cut_edges:
            continue
        key = frozenset(((bi, e), (nb, pe)))
        if key in handled_across:
            continue
        handled_across.add(key)
        partners = by_edge.get((nb, pe), [])
        if len(partners) != 1:
            raise BoundarySurfaceError("partner sub-edge missing in neighbour refinement")
        glue(owners[0], e, partners[0], pe, ((a, na_id), (b, nb_id)))

    comps: dict = {}
    for cell in cells:
        comps.setdefault(cell_uf.find(cell), []).append(cell)
    out = []
    for root, cs in sorted(comps.items()):
        cset = set(cs)
        f_count = len(cs)
        e_count = len({side_uf.find((c, frozenset((x, y))))
                       for c in cs
                       for x, y in ((c[1][0], c[1][1]), (c[1][1], c[1][2]), (c[1][2], c[1][0]))})
        v_count = len({corner_uf.find((c, v)) for c in cs for v in c[1]})
        out.append(v_count - e_count + f_count)
    return sorted(out, reverse=True)
