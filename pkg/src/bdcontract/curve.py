"""PL closed curves on the boundary surface, and their self-crossings.

A curve is a cyclic sequence of vertices, each given by a boundary triangle
and exact barycentric coordinates; every consecutive pair must lie in a
common triangle, so each segment has a well-defined chart.  Crossings of the
curve with triangulation edges are themselves curve vertices, so crossing
detection never has to look across a chart boundary: all self-intersections
are found by exact segment-pair tests inside shared triangles.

A transverse double point is an intersection interior to both segments of a
non-adjacent pair.  Everything else a pair of segments can do (touch at a
vertex, overlap along a line, pass through a point three times) makes the
curve fail general position; such curves are reported, not repaired.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .boundary import Bary, BoundarySurface, bary_to_chart, chart_to_bary
from .exactgeom import Point, intersect_segments, interpolate

Position = tuple[int, Fraction]     # (segment index, parameter in [0, 1))


class CurveError(ValueError):
    pass


class PLCurve:
    def __init__(self, surface: BoundarySurface, points: Sequence[tuple[int, Bary]]):
        if len(points) < 1:
            raise CurveError("a closed curve needs at least one vertex")
        self.surface = surface
        self.points: list[tuple[int, Bary]] = []
        for bi, x in points:
            if not (0 <= bi < surface.num_triangles()):
                raise CurveError(f"boundary triangle {bi} out of range")
            if sum(x) != 1 or any(c < 0 for c in x):
                raise CurveError(f"barycentric coordinates {x} invalid")
            self.points.append((bi, (Fraction(x[0]), Fraction(x[1]), Fraction(x[2]))))
        self.n = len(self.points)
        for bi, x in self.points:
            if sum(1 for c in x if c == 0) >= 2:
                raise CurveError("curve vertex lies on a vertex of the triangulation")
        self._reps = [self._representations(i) for i in range(self.n)]
        # Segment i is drawn inside the triangle stored with vertex i; the
        # next vertex must be representable there.  Segments along an edge of
        # the surface are refused: general position keeps the curve interior
        # to triangles except for transversal edge crossings at its vertices.
        self._seg: list[tuple[Point, Point]] = []
        for i in range(self.n):
            j = (i + 1) % self.n
            if self._point_key(i) == self._point_key(j):
                raise CurveError(f"consecutive curve vertices {i}, {j} coincide")
            bi = self.points[i][0]
            ri, rj = dict(self._reps[i]), dict(self._reps[j])
            if len(ri) != len(self._reps[i]) or len(rj) != len(self._reps[j]):
                raise CurveError("curve meets a self-identified triangle ambiguously")
            if bi not in rj:
                raise CurveError(
                    f"curve vertex {j} does not lie in the triangle of segment {i}")
            a, b = bary_to_chart(ri[bi]), bary_to_chart(rj[bi])
            za = [k for k in range(3) if ri[bi][k] == 0]
            zb = [k for k in range(3) if rj[bi][k] == 0]
            if za and zb and za[0] == zb[0]:
                raise CurveError(f"segment {i} runs along an edge of the surface")
            self._seg.append((a, b))

    def _representations(self, i: int) -> list[tuple[int, Bary]]:
        bi, x = self.points[i]
        return self.surface.representations(bi, x)

    def _point_key(self, i: int):
        return min(self._reps[i])

    def point_key(self, i: int):
        """Canonical identity of vertex i, independent of the stored chart."""
        return self._point_key(i)

    def canonical_chart(self, i: int) -> int:
        """The triangle segment i is drawn in: the one stored with vertex i."""
        return self.points[i][0]

    def segment(self, i: int) -> tuple[Point, Point]:
        return self._seg[i]

    def point_at(self, pos: Position) -> tuple[int, Point]:
        i, t = pos
        a, b = self._seg[i]
        return self.canonical_chart(i), interpolate(a, b, t)

    def reversed(self) -> "PLCurve":
        """The same curve with the opposite orientation.

        Vertices are re-stored with the triangle of their new outgoing
        segment, preserving the drawing.
        """
        pts = []
        for k in range(self.n):
            old = (self.n - k) % self.n
            seg = (self.n - k - 1) % self.n
            chart = self.canonical_chart(seg)
            rep = dict(self._reps[old])
            pts.append((chart, rep[chart]))
        return PLCurve(self.surface, pts)

    # -- file format ---------------------------------------------------------

    def serialize(self) -> str:
        lines = [f"curve {self.n}"]
        for bi, x in self.points:
            lines.append(
                f"tri {bi} {x[1].numerator}/{x[1].denominator} {x[2].numerator}/{x[2].denominator}")
        return "\n".join(lines) + "\n"


def parse_curve(surface: BoundarySurface, text: str) -> PLCurve:
    """Parse the ``curve <n>`` format: one ``tri <id> <x1> <x2>`` line per vertex.

    The two printed coordinates belong to local vertices 1 and 2 of the
    triangle; the coordinate of local vertex 0 is implied.
    """
    rows = [(n + 1, ln.strip()) for n, ln in enumerate(text.splitlines()) if ln.strip()]
    if not rows:
        raise CurveError("line 1: empty curve file")
    hn, header = rows[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != "curve":
        raise CurveError(f"line {hn}: expected header 'curve <n>'")
    try:
        n = int(parts[1])
    except ValueError:
        raise CurveError(f"line {hn}: vertex count is not an integer") from None
    if len(rows) - 1 != n:
        raise CurveError(f"line {hn}: expected {n} vertex lines, found {len(rows) - 1}")
    pts = []
    for ln, row in rows[1:]:
        fields = row.split()
        if len(fields) != 4 or fields[0] != "tri":
            raise CurveError(f"line {ln}: expected 'tri <id> <x1> <x2>'")
        try:
            bi = int(fields[1])
            x1, x2 = Fraction(fields[2]), Fraction(fields[3])
        except (ValueError, ZeroDivisionError):
            raise CurveError(f"line {ln}: bad coordinate") from None
        pts.append((bi, (1 - x1 - x2, x1, x2)))
    return PLCurve(surface, pts)


@dataclass(frozen=True)
class Crossing:
    index: int
    chart: int
    point: Point
    positions: tuple[Position, Position]    # strictly ordered along the curve


@dataclass
class CrossingSet:
    crossings: list[Crossing]
    general_position: bool
    degeneracies: list[str] = field(default_factory=list)

    @property
    def m(self) -> int:
        return len(self.crossings)

    def by_index(self, k: int) -> Crossing:
        return self.crossings[k]


def compute_crossings(surface: BoundarySurface, curve: PLCurve) -> CrossingSet:
    """All transverse double points of the curve, by exact segment tests.

    Open segments are interior to their triangles, so every intersection
    happens between two segments drawn in the same triangle; the production
    loop only compares those pairs.  A crossing is a proper interior-interior
    intersection of non-adjacent segments.  Tangential touches, overlaps,
    repeated curve vertices and coincident double points are recorded as
    degeneracies and switch off ``general_position``.
    """
    n = curve.n
    found: list[tuple] = []
    degeneracies: list[str] = []
    by_chart: dict[int, list[int]] = {}
    for i in range(n):
        by_chart.setdefault(curve.canonical_chart(i), []).append(i)
    for bi, segs in sorted(by_chart.items()):
        for ii in range(len(segs)):
            for jj in range(ii + 1, len(segs)):
                i, j = segs[ii], segs[jj]
                adjacent_next = j == i + 1
                adjacent_prev = i == 0 and j == n - 1
                a, b = curve.segment(i)
                c, d = curve.segment(j)
                res = intersect_segments(a, b, c, d)
                if res.kind == "none":
                    continue
                if res.kind == "overlap":
                    degeneracies.append(f"segments {i} and {j} overlap")
                    continue
                if adjacent_next or adjacent_prev:
                    shared_at = (res.t1 == 1 and res.t2 == 0) if adjacent_next else (res.t1 == 0 and res.t2 == 1)
                    if res.kind == "touch" and shared_at:
                        continue
                    degeneracies.append(f"adjacent segments {i} and {j} meet away from their joint")
                    continue
                if res.kind == "touch":
                    degeneracies.append(f"segments {i} and {j} touch at a segment endpoint")
                    continue
                found.append((i, j, bi, res))

    crossings: list[Crossing] = []
    order = sorted(found, key=lambda r: ((r[0], r[3].t1), (r[1], r[3].t2)))
    for i, j, bi, res in order:
        crossings.append(Crossing(len(crossings), bi, res.point,
                                  ((i, res.t1), (j, res.t2))))

    # Repeated vertices (the curve revisiting a point) and crossings landing
    # on top of each other are double points without the transverse structure.
    vkeys: dict = {}
    for i in range(n):
        key = curve.point_key(i)
        if key in vkeys:
            degeneracies.append(f"curve vertices {vkeys[key]} and {i} coincide")
        vkeys[key] = i
    seen: dict = {}
    for c in crossings:
        key = _canonical_point_key(surface, c.chart, c.point)
        if key in seen:
            degeneracies.append(f"crossings {seen[key]} and {c.index} coincide (triple point)")
        elif key in vkeys:
            degeneracies.append(f"crossing {c.index} passes through curve vertex {vkeys[key]}")
        else:
            seen[key] = c.index
    return CrossingSet(crossings, general_position=not degeneracies, degeneracies=degeneracies)


def _canonical_point_key(surface: BoundarySurface, bi: int, p: Point):
    return min(surface.representations(bi, chart_to_bary(p)))


# ---------------------------------------------------------------------------
# Construction helpers
# ---------------------------------------------------------------------------

def boundary_edge_classes(surface: BoundarySurface) -> list[frozenset]:
    """Canonical list of surface edge classes (each a frozenset of two sides)."""
    seen = set()
    for (bi, slot), sp in sorted(surface.side_pairing.items()):
        seen.add(frozenset(((bi, slot), (sp.btri2, sp.slot2))))
    return sorted(seen, key=lambda e: sorted(e))


def curves_from_edge_weights(surface: BoundarySurface,
                             weights: dict[frozenset, int],
                             offset: Fraction = Fraction(0)) -> list[PLCurve]:
    """Realize the normal multicurve with the given edge weights as PL curves.

    Weights are indexed by the classes of :func:`boundary_edge_classes`.  In
    every triangle the three side weights must have even sum and satisfy the
    triangle inequality; the corner arcs are then forced.  Returns one curve
    per traced circle.  A nonzero ``offset`` (between -1 and 1) slides every
    edge point off the uniform grid, keeping independently built multicurves
    transverse to each other.
    """
    if not (-1 < offset < 1):
        raise CurveError("offset must lie strictly between -1 and 1")
    classes = boundary_edge_classes(surface)
    for e in classes:
        weights.setdefault(e, 0)
    class_of: dict[tuple[int, int], frozenset] = {}
    for e in classes:
        for side in e:
            class_of[side] = e

    # Place w points on each edge class at parameters k/(w+1) along the
    # canonical side's direction; transport to the partner side.
    pts: dict[tuple[int, int], list[Bary]] = {}
    for e in classes:
        w = weights[e]
        canon = min(e)
        bi, slot = canon
        li, lj = (1, 2) if slot == 0 else ((0, 2) if slot == 1 else (0, 1))
        coords = []
        for k in range(1, w + 1):
            t = (Fraction(k) + offset) / (w + 1)
            x = [Fraction(0)] * 3
            x[li], x[lj] = 1 - t, t
            coords.append((x[0], x[1], x[2]))
        pts[canon] = coords
        other = next(s for s in e if s != canon) if len(e) == 2 else canon
        if other != canon:
            pts[other] = [surface.transport(bi, x, slot)[1] for x in coords]

    # Corner counts per triangle.
    corner_counts: dict[int, tuple[int, int, int]] = {}
    for bi in range(surface.num_triangles()):
        w = [weights[class_of[(bi, slot)]] for slot in range(3)]
        ns = []
        for v in range(3):
            a, b = [k for k in range(3) if k != v]
            num = w[a] + w[b] - w[v]
            if num < 0 or num % 2:
                raise CurveError(f"edge weights not realizable in triangle {bi}")
            ns.append(num // 2)
        corner_counts[bi] = tuple(ns)

    # Arc pairing inside a triangle: on side s the points ordered from local
    # vertex li to lj serve corner li first, then corner lj.
    def side_points(bi: int, slot: int) -> list[Bary]:
        return pts[(bi, slot)]

    def point_order_from(bi: int, slot: int, corner: int) -> list[int]:
        li, lj = (1, 2) if slot == 0 else ((0, 2) if slot == 1 else (0, 1))
        w = len(side_points(bi, slot))
        order = sorted(range(w), key=lambda k: side_points(bi, slot)[k][lj])
        if corner == li:
            return order
        return list(reversed(order))

    arcs: dict[tuple[int, int, int], tuple[int, int, int]] = {}
    for bi in range(surface.num_triangles()):
        ns = corner_counts[bi]
        for v in range(3):
            s1, s2 = [k for k in range(3) if k != v]
            o1 = point_order_from(bi, s1, v)
            o2 = point_order_from(bi, s2, v)
            for k in range(ns[v]):
                arcs[(bi, s1, o1[k])] = (bi, s2, o2[k])
                arcs[(bi, s2, o2[k])] = (bi, s1, o1[k])

    def across(bi: int, slot: int, k: int) -> tuple[int, int, int]:
        sp = surface.side_pairing[(bi, slot)]
        x = side_points(bi, slot)[k]
        _, y = surface.transport(bi, x, slot)
        target = side_points(sp.btri2, sp.slot2)
        return (sp.btri2, sp.slot2, target.index(y))

    unused = set(arcs)
    curves = []
    while unused:
        start = min(unused)
        walk = []
        cur = start
        while True:
            walk.append(cur)
            unused.discard(cur)
            nxt_in_tri = arcs[cur]
            unused.discard(nxt_in_tri)
            cur = across(*nxt_in_tri)
            if cur == start:
                break
        pts_seq = []
        for bi, slot, k in walk:
            pts_seq.append((bi, side_points(bi, slot)[k]))
        curves.append(PLCurve(surface, pts_seq))
    return curves
