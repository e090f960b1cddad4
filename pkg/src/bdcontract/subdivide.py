"""Refining a triangulation so a boundary curve lies in the 1-skeleton.

Every face of the input triangulation carrying curve points is refined in
two dimensions (curve segments become edges, shared edges subdivide
consistently on all incident faces), and every tetrahedron with at least one
refined face is replaced by the cone from its barycenter over its refined
boundary.  Untouched tetrahedra are copied.  The output size is linear in
the curve size for a fixed input triangulation; the constant is documented
on :func:`subdivide_along_curve`.

Coordinates: points inside a tetrahedron are barycentric 4-tuples over its
vertex numbers; points on a face use the planar chart of the face's vertices
in increasing order, matching the boundary-surface charts.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .boundary import CORNERS, BoundarySurface, Bary, bary_to_chart, boundary_surface
from .curve import CurveError, PLCurve, compute_crossings
from .exactgeom import Point, TriangulatedFace
from .triangulation import FACE_VERTICES, Gluing, Triangulation, validate_manifold

Bary4 = tuple[Fraction, Fraction, Fraction, Fraction]

_Z = Fraction(0)
_ONE = Fraction(1)


class SubdivisionError(ValueError):
    pass


def face_chart_to_tet(face: int, p: Point) -> Bary4:
    x = (1 - p[0] - p[1], p[0], p[1])
    out = [_Z, _Z, _Z, _Z]
    for k, v in enumerate(FACE_VERTICES[face]):
        out[v] = x[k]
    return tuple(out)


def tet_to_face_chart(face: int, x: Bary4) -> Point:
    if x[face] != 0:
        raise SubdivisionError("point does not lie on the requested face")
    vals = [x[v] for v in FACE_VERTICES[face]]
    return (vals[1], vals[2])


def transport_bary4(g: Gluing, x: Bary4) -> Bary4:
    """Carry a point on the glued face across the gluing."""
    if x[g.face1] != 0:
        raise SubdivisionError("point not on the glued face")
    out = [_Z, _Z, _Z, _Z]
    for v, w in g.vertex_map().items():
        out[w] = x[v]
    return tuple(out)


@dataclass
class SubdivisionMap:
    """Correspondence between the refined triangulation and its source."""

    source: Triangulation
    tet_parent: list[tuple[int, tuple[Bary4, Bary4, Bary4, Bary4]]]
    # (source tet, exact coords) -> (refined tet, local vertex); one entry
    # per refined germ, many germs per geometric vertex.
    curve_path: list[tuple[int, int, int]] = field(default_factory=list)
    vertex_lookup: dict = field(default_factory=dict)

    def locate_vertex(self, tet: int, coords: Bary4) -> tuple[int, int]:
        return self.vertex_lookup[(tet, coords)]


def subdivide_along_curve(tri: Triangulation, curve: PLCurve) -> tuple[Triangulation, SubdivisionMap]:
    """Refine ``tri`` so every segment of the simple curve is an edge.

    The curve must be simple, in general position, and disjoint from the
    vertices of the triangulation (the curve type already guarantees the
    latter for boundary curves).  The refined triangulation has at most
    ``9 * p + t`` tetrahedra, where p is the number of point insertions
    summed over faces; for the bundled fixtures this is below ``16 * (n + t)``.
    """
    surface = curve.surface
    if surface.tri is not tri:
        raise SubdivisionError("curve does not live on this triangulation's boundary")
    crossings = compute_crossings(surface, curve)
    if not crossings.general_position:
        raise SubdivisionError("curve is not in general position")
    if crossings.m != 0:
        raise SubdivisionError("curve is not simple")

    sides = tri.face_sides()
    euf = tri.directed_edge_classes()

    # ---- collect curve points per face class and per edge class ----------
    face_class_of: dict[tuple[int, int], tuple] = {}
    for t in range(tri.tets):
        for f in range(4):
            g = sides.get((t, f))
            key = ((t, f),) if g is None else tuple(sorted(((t, f), (g.tet2, g.face2))))
            face_class_of[(t, f)] = key

    edge_points: dict = {}           # canonical directed germ root -> set of params

    def add_edge_point(t: int, a: int, b: int, param: Fraction) -> None:
        root = euf.find((t, a, b))
        rev = euf.find((t, b, a))
        if min(root, rev) == rev:
            root, param = rev, 1 - param
        edge_points.setdefault(root, set()).add(param)

    face_interior: dict[tuple, set[Point]] = {}
    face_constraints: dict[tuple, list[tuple[Point, Point]]] = {}

    def face_key_of_btri(bi: int) -> tuple:
        return face_class_of[surface.faces[bi]]

    for i in range(curve.n):
        bi, x = curve.points[i]
        t, f = surface.faces[bi]
        zeros = [k for k in range(3) if x[k] == 0]
        if not zeros:
            face_interior.setdefault(face_key_of_btri(bi), set()).add(bary_to_chart(x))
        else:
            slot = zeros[0]
            li, lj = [k for k in range(3) if k != slot]
            va, vb = FACE_VERTICES[f][li], FACE_VERTICES[f][lj]
            add_edge_point(t, va, vb, x[lj])

    for i in range(curve.n):
        bi = curve.canonical_chart(i)
        a, b = curve.segment(i)
        face_constraints.setdefault(face_key_of_btri(bi), []).append((a, b))

    # ---- refine each face class in its canonical chart -------------------
    def edge_params(t: int, a: int, b: int) -> list[Fraction]:
        root = euf.find((t, a, b))
        rev = euf.find((t, b, a))
        if min(root, rev) == rev:
            return sorted(1 - p for p in edge_points.get(rev, ()))
        return sorted(edge_points.get(root, ()))

    face_subdiv: dict[tuple, TriangulatedFace] = {}
    for key in sorted(set(face_class_of.values())):
        t, f = key[0]
        pts: set[Point] = set(face_interior.get(key, set()))
        fv = FACE_VERTICES[f]
        for li in range(3):
            for lj in range(li + 1, 3):
                va, vb = fv[li], fv[lj]
                for param in edge_params(t, va, vb):
                    coords = [_Z, _Z, _Z]
                    coords[li], coords[lj] = 1 - param, param
                    pts.add((coords[1], coords[2]))
        face = TriangulatedFace(CORNERS)
        for p in sorted(pts):
            face.insert_point(p)
        for p, q in face_constraints.get(key, []):
            face.insert_constraint(p, q)
        face.check()
        face_subdiv[key] = face

    def subdiv_in_side(t: int, f: int) -> list[tuple[Bary4, Bary4, Bary4]]:
        """Triangles of the face's refinement, in (t, f)'s own coordinates."""
        key = face_class_of[(t, f)]
        face = face_subdiv[key]
        ct, cf = key[0]
        tris = []
        for (i, j, k) in face.triangles:
            tris.append(tuple(face_chart_to_tet(cf, face.vertices[v]) for v in (i, j, k)))
        if (ct, cf) == (t, f):
            return tris
        g = sides[(ct, cf)]
        return [tuple(transport_bary4(g, x) for x in tri_) for tri_ in tris]

    # ---- build the refined tetrahedra -------------------------------------
    UNIT = (( _ONE, _Z, _Z, _Z), (_Z, _ONE, _Z, _Z), (_Z, _Z, _ONE, _Z), (_Z, _Z, _Z, _ONE))
    BARY = (Fraction(1, 4),) * 4

    new_tets: list[tuple[int, tuple[Bary4, Bary4, Bary4, Bary4]]] = []
    for t in range(tri.tets):
        touched = any(len(face_subdiv[face_class_of[(t, f)]].triangles) > 1 for f in range(4))
        if not touched:
            new_tets.append((t, UNIT))
            continue
        for f in range(4):
            for tri_ in subdiv_in_side(t, f):
                new_tets.append((t, (BARY,) + tri_))

    # ---- match faces of the refined tetrahedra ----------------------------
    def face_key(parent: int, triple: tuple[Bary4, Bary4, Bary4]):
        zero_slots = [v for v in range(4) if all(x[v] == 0 for x in triple)]
        if not zero_slots:
            return ("inner", parent, tuple(sorted(triple)))
        f = zero_slots[0]
        key = face_class_of[(parent, f)]
        ct, cf = key[0]
        if (ct, cf) == (parent, f):
            canon = triple
        else:
            g = sides[(parent, f)]
            canon = tuple(transport_bary4(g, x) for x in triple)
        return ("class", key, tuple(sorted(canon)))

    by_key: dict = {}
    for idx, (parent, coords) in enumerate(new_tets):
        for lf in range(4):
            triple = tuple(coords[v] for v in range(4) if v != lf)
            by_key.setdefault(face_key(parent, triple), []).append((idx, lf))

    gluings: list[Gluing] = []
    for key, occs in sorted(by_key.items()):
        if len(occs) == 1:
            kind = key[0]
            if kind == "class" and len(key[1]) == 1:
                continue    # genuine boundary face
            raise SubdivisionError(f"unmatched internal face {key}")
        if len(occs) != 2:
            raise SubdivisionError(f"face matched {len(occs)} times")
        (t1, f1), (t2, f2) = occs
        # Vertex bijection by exact coordinates, both sides expressed in the
        # underlying face class's canonical chart.
        def canonical_coord(tet_idx: int, local_face: int, v: int) -> Bary4:
            parent, coords = new_tets[tet_idx]
            x = coords[v]
            if key[0] == "inner":
                return x
            slot = next(s for s in range(4)
                        if all(coords[w][s] == 0 for w in range(4) if w != local_face))
            ct, cf = key[1][0]
            if (parent, slot) == (ct, cf):
                return x
            return transport_bary4(sides[(parent, slot)], x)

        canon2 = {canonical_coord(t2, f2, v): v for v in FACE_VERTICES[f2]}
        perm = tuple(canon2[canonical_coord(t1, f1, v)] for v in FACE_VERTICES[f1])
        gluings.append(Gluing(t1, f1, t2, f2, perm))

    refined = Triangulation(len(new_tets), gluings)

    # ---- bookkeeping -------------------------------------------------------
    smap = SubdivisionMap(tri, new_tets)
    for idx, (parent, coords) in enumerate(new_tets):
        for v in range(4):
            smap.vertex_lookup.setdefault((parent, coords[v]), (idx, v))

    for i in range(curve.n):
        j = (i + 1) % curve.n
        bi = curve.canonical_chart(i)
        t, f = surface.faces[bi]
        a = face_chart_to_tet(f, curve.segment(i)[0])
        b = face_chart_to_tet(f, curve.segment(i)[1])
        germ = _find_edge_germ(smap, t, a, b)
        if germ is None:
            raise SubdivisionError(f"curve segment {i} is not an edge of the refinement")
        smap.curve_path.append(germ)

    report = validate_manifold(refined)
    if not report.is_manifold:
        raise SubdivisionError("refined triangulation failed manifold validation")
    return refined, smap


def _find_edge_germ(smap: SubdivisionMap, parent: int, a: Bary4, b: Bary4) -> Optional[tuple[int, int, int]]:
    for idx, (p, coords) in enumerate(smap.tet_parent):
        if p != parent:
            continue
        try:
            la = coords.index(a)
            lb = coords.index(b)
        except ValueError:
            continue
        return (idx, la, lb)
    return None
