"""Exact 2-dimensional geometric predicates and constrained triangulation.

Points are pairs of :class:`fractions.Fraction` living in the affine chart of
some reference triangle.  All predicates are exact; there is no tolerance
anywhere.  Degenerate configurations are classified, never silently resolved.
"""

from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence

Point = tuple[Fraction, Fraction]


class GeometryError(ValueError):
    """Raised when an operation is asked to work on unsupported geometry."""


def orient(a: Point, b: Point, c: Point) -> int:
    """Sign of the signed area of the triangle ``a b c``."""
    d = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    if d > 0:
        return 1
    if d < 0:
        return -1
    return 0


def between(a: Point, b: Point, p: Point) -> bool:
    """True if ``p`` lies on the closed segment ``a b`` (collinearity required)."""
    if orient(a, b, p) != 0:
        return False
    lo0, hi0 = min(a[0], b[0]), max(a[0], b[0])
    lo1, hi1 = min(a[1], b[1]), max(a[1], b[1])
    return lo0 <= p[0] <= hi0 and lo1 <= p[1] <= hi1


def interpolate(a: Point, b: Point, t: Fraction) -> Point:
    return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))


def segment_param(a: Point, b: Point, p: Point) -> Fraction:
    """Parameter of ``p`` on the segment from ``a`` to ``b``; p must be on the line."""
    dx, dy = b[0] - a[0], b[1] - a[1]
    if dx != 0:
        return (p[0] - a[0]) / dx
    if dy != 0:
        return (p[1] - a[1]) / dy
    raise GeometryError("degenerate segment has no parameter")


class SegInt(NamedTuple):
    """Classified intersection of two closed segments.

    kind is one of:
      'none'     disjoint
      'proper'   a single point interior to both segments, non-collinear
      'touch'    a single point involving at least one endpoint
      'overlap'  collinear segments sharing more than one point
    For 'proper' and 'touch', ``point`` and the parameters along both
    segments are filled in.
    """

    kind: str
    point: Optional[Point] = None
    t1: Optional[Fraction] = None
    t2: Optional[Fraction] = None


def intersect_segments(a: Point, b: Point, c: Point, d: Point) -> SegInt:
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)

    if o1 == 0 and o2 == 0:
        # Collinear configuration: intersection is empty, a point, or a segment.
        pts = [p for p in (c, d) if between(a, b, p)] + [p for p in (a, b) if between(c, d, p)]
        if not pts:
            return SegInt("none")
        uniq = []
        for p in pts:
            if p not in uniq:
                uniq.append(p)
        if len(uniq) > 1:
            return SegInt("overlap")
        p = uniq[0]
        return SegInt("touch", p, segment_param(a, b, p), segment_param(c, d, p))

    if o1 == o2 and o1 != 0:
        return SegInt("none")
    if o3 == o4 and o3 != 0:
        return SegInt("none")
    if (o1 != o2 or o1 == 0) and (o3 != o4 or o3 == 0):
        # The supporting lines cross inside both segments' spans; solve exactly.
        r = (b[0] - a[0], b[1] - a[1])
        s = (d[0] - c[0], d[1] - c[1])
        denom = r[0] * s[1] - r[1] * s[0]
        if denom == 0:
            return SegInt("none")
        qp = (c[0] - a[0], c[1] - a[1])
        t1 = Fraction(qp[0] * s[1] - qp[1] * s[0], denom)
        t2 = Fraction(qp[0] * r[1] - qp[1] * r[0], denom)
        if not (0 <= t1 <= 1 and 0 <= t2 <= 1):
            return SegInt("none")
        p = interpolate(a, b, t1)
        if 0 < t1 < 1 and 0 < t2 < 1:
            return SegInt("proper", p, t1, t2)
        return SegInt("touch", p, t1, t2)
    return SegInt("none")


def segments_cross_properly(a: Point, b: Point, c: Point, d: Point) -> bool:
    return intersect_segments(a, b, c, d).kind == "proper"


# ---------------------------------------------------------------------------
# Constrained triangulation of a triangle
# ---------------------------------------------------------------------------
#
# Used to refine a 2-simplex so that a prescribed set of points becomes
# vertices and a prescribed set of pairwise non-crossing segments becomes
# edges.  The algorithm is the classical incremental one: insert points by
# splitting the containing triangle, then insert each constraint by removing
# the channel of crossed triangles and re-triangulating the two resulting
# pseudo-polygons.  Exactness of the predicates makes this fully robust.


class TriangulatedFace:
    """A triangulation of a reference triangle.

    vertices: list of chart points; the first three are the corners.
    triangles: list of index triples, all positively oriented.
    """

    def __init__(self, corners: Sequence[Point]):
        if len(corners) != 3 or orient(*corners) <= 0:
            raise GeometryError("corners must be three positively oriented points")
        self.vertices: list[Point] = list(corners)
        self.triangles: list[tuple[int, int, int]] = [(0, 1, 2)]
        self._index: dict[Point, int] = {p: i for i, p in enumerate(corners)}

    # -- queries ------------------------------------------------------------

    def vertex_id(self, p: Point) -> int:
        return self._index[p]

    def has_edge(self, i: int, j: int) -> bool:
        e = frozenset((i, j))
        return any(e <= frozenset(t) for t in self.triangles)

    def edges(self) -> set[frozenset]:
        out: set[frozenset] = set()
        for t in self.triangles:
            out.update((frozenset((t[0], t[1])), frozenset((t[1], t[2])), frozenset((t[0], t[2]))))
        return out

    def _locate(self, p: Point):
        """Return ('vertex', i) | ('edge', tri_idx, (i, j)) | ('interior', tri_idx)."""
        if p in self._index:
            return ("vertex", self._index[p])
        for ti, (i, j, k) in enumerate(self.triangles):
            a, b, c = self.vertices[i], self.vertices[j], self.vertices[k]
            o1, o2, o3 = orient(a, b, p), orient(b, c, p), orient(c, a, p)
            if o1 < 0 or o2 < 0 or o3 < 0:
                continue
            zeros = [o1 == 0, o2 == 0, o3 == 0]
            if not any(zeros):
                return ("interior", ti)
            if zeros[0] and not zeros[1] and not zeros[2]:
                return ("edge", ti, (i, j))
            if zeros[1] and not zeros[0] and not zeros[2]:
                return ("edge", ti, (j, k))
            if zeros[2] and not zeros[0] and not zeros[1]:
                return ("edge", ti, (k, i))
        raise GeometryError("point lies outside the face")

    # -- construction -------------------------------------------------------

    def insert_point(self, p: Point) -> int:
        """Insert ``p`` as a vertex, refining the triangulation; returns its id."""
        loc = self._locate(p)
        if loc[0] == "vertex":
            return loc[1]
        idx = len(self.vertices)
        self.vertices.append(p)
        self._index[p] = idx
        if loc[0] == "interior":
            ti = loc[1]
            i, j, k = self.triangles[ti]
            del self.triangles[ti]
            self.triangles.extend([(i, j, idx), (j, k, idx), (k, i, idx)])
            return idx
        _, ti, (i, j) = loc
        hits = [(n, t) for n, t in enumerate(self.triangles) if {i, j} <= set(t)]
        for n, _ in sorted(hits, reverse=True):
            del self.triangles[n]
        for _, t in hits:
            k = next(v for v in t if v not in (i, j))
            # Preserve orientation: replace edge (i, j) within t by (i, idx) + (idx, j).
            ordered = self._oriented(t, i, j, k)
            a, b, c = ordered
            self.triangles.extend([(a, idx, c), (idx, b, c)])
        return idx

    def _oriented(self, t, i, j, k):
        """Rotate triangle t so it reads (i, j, k) respecting stored orientation."""
        seqs = [(t[0], t[1], t[2]), (t[1], t[2], t[0]), (t[2], t[0], t[1])]
        for s in seqs:
            if s[0] == i and s[1] == j and s[2] == k:
                return s
            if s[0] == j and s[1] == i and s[2] == k:
                return (j, i, k)
        raise GeometryError("triangle does not contain the requested edge")

    def insert_constraint(self, p: Point, q: Point) -> None:
        """Force the segment from p to q to appear as a union of edges.

        Both endpoints must already be vertices.  Any existing vertex lying in
        the interior of the segment splits the constraint.
        """
        i, j = self._index[p], self._index[q]
        if i == j:
            raise GeometryError("constraint endpoints coincide")
        onseg = []
        for vid, v in enumerate(self.vertices):
            if vid in (i, j):
                continue
            if between(p, q, v):
                onseg.append((segment_param(p, q, v), vid))
        chain = [i] + [vid for _, vid in sorted(onseg)] + [j]
        for a, b in zip(chain, chain[1:]):
            self._insert_constraint_edge(a, b)

    def _insert_constraint_edge(self, i: int, j: int) -> None:
        if self.has_edge(i, j):
            return
        p, q = self.vertices[i], self.vertices[j]
        # Collect the channel of triangles whose interiors the open segment crosses.
        channel = []
        crossed: list[frozenset] = []
        for n, t in enumerate(self.triangles):
            for u, v in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
                if i in (u, v) or j in (u, v):
                    continue
                r = intersect_segments(p, q, self.vertices[u], self.vertices[v])
                if r.kind == "proper":
                    if n not in channel:
                        channel.append(n)
                    e = frozenset((u, v))
                    if e not in crossed:
                        crossed.append(e)
        if not channel:
            raise GeometryError("constraint cannot be recovered by edge insertion")
        channel_set = set(channel)
        # The channel must form the full region between i and j; include the
        # end triangles that contain i or j and a crossed edge.
        for n, t in enumerate(self.triangles):
            if n in channel_set:
                continue
            if any(frozenset((t[a], t[b])) in crossed for a, b in ((0, 1), (1, 2), (2, 0))):
                channel_set.add(n)
        keep = [t for n, t in enumerate(self.triangles) if n not in channel_set]
        removed = [t for n, t in enumerate(self.triangles) if n in channel_set]
        # Split the boundary of the removed region into the chains left and
        # right of the directed segment i -> j.
        left, right = self._split_channel_boundary(removed, i, j, crossed)
        self.triangles = keep
        self._fill_pseudo_polygon(i, j, left, +1)
        self._fill_pseudo_polygon(j, i, list(reversed(right)), +1)

    def _split_channel_boundary(self, removed, i, j, crossed):
        # Boundary edges of the removed region = edges of removed triangles not
        # crossed by the constraint and not interior to the region.
        count: dict[frozenset, int] = {}
        for t in removed:
            for a, b in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
                e = frozenset((a, b))
                count[e] = count.get(e, 0) + 1
        border = [e for e, c in count.items() if c == 1 and e not in crossed]
        p, q = self.vertices[i], self.vertices[j]
        left_vs: set[int] = set()
        right_vs: set[int] = set()
        for e in border:
            for v in e:
                if v in (i, j):
                    continue
                s = orient(p, q, self.vertices[v])
                if s > 0:
                    left_vs.add(v)
                elif s < 0:
                    right_vs.add(v)
                else:
                    raise GeometryError("constraint passes through a vertex unexpectedly")
        left = self._chain_from(border, i, j, left_vs)
        right = self._chain_from(border, i, j, right_vs)
        return left, right

    def _chain_from(self, border, i, j, side_vs):
        """Order the side vertices into the i -> j boundary chain."""
        adj: dict[int, list[int]] = {}
        for e in border:
            a, b = tuple(e)
            if (a in side_vs or a in (i, j)) and (b in side_vs or b in (i, j)):
                adj.setdefault(a, []).append(b)
                adj.setdefault(b, []).append(a)
        chain = []
        prev, cur = None, i
        while cur != j:
            nxts = [v for v in adj.get(cur, []) if v != prev and (v in side_vs or v == j)]
            if not nxts:
                if not side_vs:
                    return []
                raise GeometryError("channel boundary is not a simple chain")
            nxt = nxts[0]
            if len(nxts) > 1:
                raise GeometryError("channel boundary is not a simple chain")
            if nxt != j:
                chain.append(nxt)
            prev, cur = cur, nxt
        return chain

    def _fill_pseudo_polygon(self, i: int, j: int, chain: list[int], _sign: int) -> None:
        """Triangulate the region bounded by edge (j, i) and the chain i -> j."""
        if not chain:
            return
        if len(chain) == 1:
            self._add_oriented(i, chain[0], j)
            return
        p, q = self.vertices[i], self.vertices[j]
        pick = None
        for n, v in enumerate(chain):
            a = self.vertices[v]
            if orient(p, q, a) == 0:
                continue
            ok = True
            for w in chain:
                if w == v:
                    continue
                b = self.vertices[w]
                o1 = orient(p, a, b)
                o2 = orient(a, q, b)
                o3 = orient(q, p, b)
                if (o1 >= 0 and o2 >= 0 and o3 >= 0) or (o1 <= 0 and o2 <= 0 and o3 <= 0):
                    ok = False
                    break
            if ok:
                pick = n
                break
        if pick is None:
            raise GeometryError("pseudo-polygon has no admissible apex")
        v = chain[pick]
        self._add_oriented(i, v, j)
        self._fill_pseudo_polygon(i, v, chain[:pick], _sign)
        self._fill_pseudo_polygon(v, j, chain[pick + 1:], _sign)

    def _add_oriented(self, a: int, b: int, c: int) -> None:
        if orient(self.vertices[a], self.vertices[b], self.vertices[c]) > 0:
            self.triangles.append((a, b, c))
        else:
            self.triangles.append((a, c, b))

    # -- verification ---------------------------------------------------------

    def check(self) -> None:
        """Assert structural sanity: orientation, area conservation, edge use."""
        area = Fraction(0)
        for i, j, k in self.triangles:
            a, b, c = self.vertices[i], self.vertices[j], self.vertices[k]
            tri2 = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
            if tri2 <= 0:
                raise GeometryError("non-positively oriented triangle in face refinement")
            area += tri2
        p0, p1, p2 = self.vertices[0], self.vertices[1], self.vertices[2]
        whole = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p1[1] - p0[1]) * (p2[0] - p0[0])
        if area != whole:
            raise GeometryError("face refinement does not cover the face exactly")
        use: dict[frozenset, int] = {}
        for t in self.triangles:
            for a, b in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
                e = frozenset((a, b))
                use[e] = use.get(e, 0) + 1
        for e, c in use.items():
            if c > 2:
                raise GeometryError("edge shared by more than two triangles")


def triangulate_face(corners: Sequence[Point], points: Iterable[Point],
                     constraints: Iterable[tuple[Point, Point]]) -> TriangulatedFace:
    """Refine a triangle so the given points are vertices and segments are edges.

    Constraint segments must be pairwise non-crossing (shared endpoints are
    fine) and lie inside the closed triangle.
    """
    face = TriangulatedFace(corners)
    constraints = list(constraints)
    todo = list(points)
    for p, q in constraints:
        todo.extend((p, q))
    for p in todo:
        face.insert_point(p)
    for p, q in constraints:
        face.insert_constraint(p, q)
    face.check()
    return face
