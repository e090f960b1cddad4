"""The image graph of a self-crossing curve, and the smoothing calculus.

Cutting a curve with m double points at all 2m crossing passages yields its
image graph: a four-valent graph embedded in the boundary surface whose
vertices are the crossings and whose edges (the *arcs*) are the subpaths
between consecutive passages.  Closed curves derived from the original by
smoothings are closed walks in this graph, each arc used at most once, with a
per-crossing smoothing state:

  unsmoothed  the walk runs straight through a passage (both strands cross);
  type A      the orientation-preserving reconnection (in of one passage to
              out of the other);
  type B      the reversing reconnection (in to in, out to out).

At a transverse crossing the four strand germs alternate around the double
point, so same-type chords never intersect; this is what makes every fully
smoothed walk realizable as an embedded PL curve.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .boundary import Bary, BoundarySurface, bary_to_chart, chart_to_bary
from .curve import Crossing, CrossingSet, CurveError, PLCurve, Position, compute_crossings
from .exactgeom import Point, intersect_segments, interpolate
from .words import ConjugationFormula, Word, concat, inverse

SignedArc = tuple[int, int]
Walk = tuple[SignedArc, ...]


class SmoothingError(ValueError):
    pass


@dataclass(frozen=True)
class Passage:
    index: int              # 0 .. 2m-1, in curve order
    crossing: int
    position: Position


class ImageGraph:
    """Arcs and crossings of a curve in general position."""

    def __init__(self, curve: PLCurve, crossings: CrossingSet):
        if not crossings.general_position:
            raise SmoothingError("curve is not in general position: " +
                                 "; ".join(crossings.degeneracies))
        self.curve = curve
        self.crossings = crossings
        self.m = crossings.m
        events = []
        for c in crossings.crossings:
            events.append((c.positions[0], c.index))
            events.append((c.positions[1], c.index))
        events.sort()
        self.passages: list[Passage] = [Passage(k, cid, pos) for k, (pos, cid) in enumerate(events)]
        self.passage_pair: dict[int, tuple[int, int]] = {}
        for p in self.passages:
            a = self.passage_pair.get(p.crossing, ())
            self.passage_pair[p.crossing] = a + (p.index,)
        self.num_arcs = max(2 * self.m, 1)
        # Arc geometry: the points along the curve plus, per gap between
        # consecutive points, the triangle the gap is drawn in.
        self._paths: list[tuple[list[tuple[int, Bary]], list[int]]] = []
        if self.m == 0:
            pts = [(bi, x) for bi, x in curve.points] + [curve.points[0]]
            charts = [curve.canonical_chart(i) for i in range(curve.n)]
            self._paths.append((pts, charts))
        else:
            for k in range(self.num_arcs):
                p, q = self.passages[k], self.passages[(k + 1) % self.num_arcs]
                self._paths.append(self._extract(p.position, q.position, p.crossing, q.crossing))

    def _crossing_point(self, cid: int) -> tuple[int, Bary]:
        c = self.crossings.by_index(cid)
        return (c.chart, chart_to_bary(c.point))

    def _extract(self, a: Position, b: Position, ca: int, cb: int):
        """Points and gap triangles of the curve from position a to position b.

        The endpoints are the crossing points; between them come the curve
        vertices passed on the way (vertex k sits at position (k, 0)); gap k
        is drawn in the triangle of the original segment carrying it.
        """
        pts = [self._crossing_point(ca)]
        charts = []
        (i, t), (j, u) = a, b
        n = self.curve.n
        if not (i == j and t < u):
            k = (i + 1) % n
            charts.append(self.curve.canonical_chart(i))
            while True:
                pts.append(self.curve.points[k])
                if k == j:
                    break
                charts.append(self.curve.canonical_chart(k))
                k = (k + 1) % n
        charts.append(self.curve.canonical_chart(j))
        pts.append(self._crossing_point(cb))
        return pts, charts

    def arc_path(self, arc: int, sign: int = 1):
        pts, charts = self._paths[arc]
        if sign == 1:
            return list(pts), list(charts)
        return list(reversed(pts)), list(reversed(charts))

    def arc_endpoints(self, arc: int) -> tuple[int, int]:
        """(tail passage, head passage) of an arc."""
        return (arc, (arc + 1) % self.num_arcs)

    def port_crossing(self, port: tuple[str, int]) -> int:
        return self.passages[port[1]].crossing


def build_image_graph(surface: BoundarySurface, curve: PLCurve) -> ImageGraph:
    return ImageGraph(curve, compute_crossings(surface, curve))


@dataclass(frozen=True)
class Transition:
    """How a walk moves through a crossing between consecutive walk elements."""

    walk_index: int
    crossing: int
    kind: str               # 'straight' | 'chord'
    passage: Optional[int]  # for straight
    chord_type: Optional[str]  # 'A' | 'B' for chords
    ports: tuple


class CombinatorialCurve:
    """A closed walk in an image graph with a smoothing state.

    The walk is a cyclic sequence of signed arcs; every transition between
    consecutive arcs must be legal for the smoothing state: straight passages
    only at unsmoothed crossings, chords only at smoothed ones and matching
    their type.
    """

    def __init__(self, graph: ImageGraph, walk: Sequence[SignedArc],
                 smoothing: Optional[dict] = None):
        self.graph = graph
        self.walk: Walk = tuple((int(a), int(s)) for a, s in walk)
        self.smoothing: dict[int, str] = dict(smoothing or {})
        if not self.walk:
            raise SmoothingError("empty walk")
        seen = set()
        for a, s in self.walk:
            if s not in (1, -1) or not (0 <= a < graph.num_arcs):
                raise SmoothingError(f"bad walk element ({a}, {s})")
            if a in seen:
                raise SmoothingError(f"walk uses arc {a} twice")
            seen.add(a)
        for y, t in self.smoothing.items():
            if t not in ("A", "B"):
                raise SmoothingError(f"bad smoothing type {t!r}")
        self._transitions = self._classify_all()

    # -- ports ----------------------------------------------------------------

    def _end_port(self, a: int, s: int) -> tuple[str, int]:
        if s == 1:
            return ("in", (a + 1) % self.graph.num_arcs)
        return ("out", a)

    def _start_port(self, a: int, s: int) -> tuple[str, int]:
        if s == 1:
            return ("out", a)
        return ("in", (a + 1) % self.graph.num_arcs)

    def _classify_all(self) -> list[Transition]:
        if self.graph.m == 0:
            if self.walk != ((0, 1),) and self.walk != ((0, -1),):
                raise SmoothingError("embedded curve admits only the full-circle walk")
            return []
        out = []
        L = len(self.walk)
        for i in range(L):
            a, sa = self.walk[i]
            b, sb = self.walk[(i + 1) % L]
            pe = self._end_port(a, sa)
            ps = self._start_port(b, sb)
            ye = self.graph.port_crossing(pe)
            ys = self.graph.port_crossing(ps)
            if ye != ys:
                raise SmoothingError(f"walk jumps between crossings {ye} and {ys}")
            if pe[1] == ps[1]:
                if {pe[0], ps[0]} != {"in", "out"}:
                    raise SmoothingError("walk doubles back onto the same arc end")
                if ye in self.smoothing:
                    raise SmoothingError(f"straight passage at smoothed crossing {ye}")
                out.append(Transition(i, ye, "straight", pe[1], None, (pe, ps)))
            else:
                ctype = "A" if pe[0] != ps[0] else "B"
                if self.smoothing.get(ye) != ctype:
                    raise SmoothingError(
                        f"chord of type {ctype} at crossing {ye} with state "
                        f"{self.smoothing.get(ye)!r}")
                out.append(Transition(i, ye, "chord", None, ctype, (pe, ps)))
        return out

    # -- queries ----------------------------------------------------------------

    def transitions(self) -> list[Transition]:
        return list(self._transitions)

    def straight_passages(self) -> dict[int, list[Transition]]:
        out: dict[int, list[Transition]] = {}
        for t in self._transitions:
            if t.kind == "straight":
                out.setdefault(t.crossing, []).append(t)
        return out

    def crossing_set(self) -> list[int]:
        """Crossings of the curve this walk describes, in id order."""
        per = self.straight_passages()
        return sorted(y for y, ts in per.items() if len(ts) == 2)

    @property
    def m(self) -> int:
        return len(self.crossing_set())

    def word(self) -> Word:
        return tuple((a, s) for a, s in self.walk)

    def interlaced(self, u: int, v: int) -> bool:
        if u == v:
            raise SmoothingError("interlacement needs two distinct crossings")
        labels = []
        for t in self._transitions:
            if t.kind == "straight" and t.crossing in (u, v):
                labels.append(t.crossing)
        if labels.count(u) != 2 or labels.count(v) != 2:
            raise SmoothingError(f"crossings {u}, {v} are not double points of this curve")
        return labels[0] != labels[1] and labels[1] != labels[2]

    def reversed(self) -> "CombinatorialCurve":
        rev = tuple((a, -s) for a, s in reversed(self.walk))
        return CombinatorialCurve(self.graph, rev, self.smoothing)

    def rotated_to(self, k: int) -> "CombinatorialCurve":
        w = self.walk[k:] + self.walk[:k]
        return CombinatorialCurve(self.graph, w, self.smoothing)


def curve_from_walk(graph: ImageGraph, walk: Sequence[SignedArc],
                    base_smoothing: Optional[dict] = None) -> CombinatorialCurve:
    """Build a combinatorial curve, inferring chord marks from the walk's turns.

    Transitions that run straight need the crossing unsmoothed; turns imply a
    chord and mark the crossing with the implied type.  Conflicting demands
    (straight and chord at one crossing, or two chord types) are errors.
    """
    marks = dict(base_smoothing or {})
    walk = tuple((int(a), int(s)) for a, s in walk)
    L = len(walk)
    if graph.m == 0:
        return CombinatorialCurve(graph, walk, marks)
    probe = CombinatorialCurve.__new__(CombinatorialCurve)
    probe.graph = graph
    for i in range(L):
        a, sa = walk[i]
        b, sb = walk[(i + 1) % L]
        pe = probe._end_port(a, sa)
        ps = probe._start_port(b, sb)
        ye = graph.port_crossing(pe)
        ys = graph.port_crossing(ps)
        if ye != ys:
            raise SmoothingError(f"walk jumps between crossings {ye} and {ys}")
        if pe[1] == ps[1]:
            if ye in marks:
                raise SmoothingError(f"straight passage at smoothed crossing {ye}")
            continue
        ctype = "A" if pe[0] != ps[0] else "B"
        if marks.setdefault(ye, ctype) != ctype:
            raise SmoothingError(f"conflicting chord types at crossing {ye}")
    return CombinatorialCurve(graph, walk, marks)


def interlaced(crossings: CrossingSet, u: int, v: int) -> bool:
    """Interlacement of two crossings along the original curve.

    True when their four passages alternate u v u v along the curve; false
    for the pattern u u v v.  Cyclic rotations do not change the answer.
    """
    if u == v:
        raise SmoothingError("interlacement needs two distinct crossings")
    events = []
    for cid in (u, v):
        c = crossings.by_index(cid)
        events.append((c.positions[0], cid))
        events.append((c.positions[1], cid))
    events.sort()
    labels = [cid for _, cid in events]
    return labels[0] != labels[1] and labels[1] != labels[2]


# ---------------------------------------------------------------------------
# Decomposition and the two smoothings
# ---------------------------------------------------------------------------

def _cut_indices(curve: CombinatorialCurve, u: int, v: int) -> list[tuple[int, int]]:
    cuts = []
    for t in curve.transitions():
        if t.kind == "straight" and t.crossing in (u, v):
            cuts.append((t.walk_index, t.crossing))
    if len(cuts) != 4:
        raise SmoothingError(f"crossings {u}, {v} are not both double points of the curve")
    return cuts


def _segment(curve: CombinatorialCurve, i: int, j: int) -> Walk:
    """Walk elements strictly after transition i up to and including element j.

    Transition k sits between walk elements k and k+1, so the subpath between
    cut transitions i and j is the elements i+1 .. j, cyclically.
    """
    L = len(curve.walk)
    out = []
    k = (i + 1) % L
    while True:
        out.append(curve.walk[k])
        if k == j % L:
            break
        k = (k + 1) % L
    return tuple(out)


def decompose_at(curve: CombinatorialCurve, u: int, v: int):
    """Split the walk at the four passages of u and v into four subpaths.

    Returns ``(alpha, beta, gamma, delta, prefix, inter)`` where the walk,
    rotated to start just after the chosen starting passage of u, reads
    alpha beta gamma delta; ``prefix`` is the word conjugating the rotated
    basepoint back to the stored one, and ``inter`` tells whether u and v are
    interlaced.  Non-interlaced: alpha runs u to v, beta loops at v, gamma
    runs v to u, delta loops at u.  Interlaced: the four paths alternate
    between u and v, starting at u's first passage in the stored orientation.
    """
    if u == v:
        raise SmoothingError("decomposition needs two distinct crossings")
    cuts = _cut_indices(curve, u, v)
    labels = [c for _, c in cuts]
    inter = labels[0] != labels[1] and labels[1] != labels[2]
    if inter:
        start = next(k for k in range(4) if cuts[k][1] == u)
    else:
        # Choose the passage of u followed (cyclically) by a passage of v.
        start = next(k for k in range(4)
                     if cuts[k][1] == u and cuts[(k + 1) % 4][1] == v)
    order = [cuts[(start + k) % 4] for k in range(4)]
    pieces = []
    for k in range(4):
        i = order[k][0]
        j = order[(k + 1) % 4][0]
        pieces.append(_segment(curve, i, j))
    alpha, beta, gamma, delta = pieces
    prefix = tuple(curve.walk[: order[0][0] + 1])
    return alpha, beta, gamma, delta, prefix, inter


def _word(walk: Walk) -> Word:
    return tuple(walk)


def _rev(walk: Walk) -> Walk:
    return tuple((a, -s) for a, s in reversed(walk))


def smooth_noninterlaced(curve: CombinatorialCurve, u: int, v: int):
    """Both smoothings of a non-interlaced pair, with the identity relating them.

    With the curve written alpha beta gamma delta as in :func:`decompose_at`,
    the outputs are c1 = alpha gamma (type A at u and v) and
    c2 = alpha beta^-1 gamma delta^-1 (type B at both), and the identity

        [c] = [c1] [delta^-1] [c2^-1] [c1] [delta]

    holds in the free group on the arcs, conjugated to the stored basepoint.
    """
    alpha, beta, gamma, delta, prefix, inter = decompose_at(curve, u, v)
    if inter:
        raise SmoothingError(f"crossings {u}, {v} are interlaced")
    sm_a = {**curve.smoothing, u: "A", v: "A"}
    sm_b = {**curve.smoothing, u: "B", v: "B"}
    c1 = CombinatorialCurve(curve.graph, alpha + gamma, sm_a)
    c2 = CombinatorialCurve(curve.graph, alpha + _rev(beta) + gamma + _rev(delta), sm_b)
    dw = _word(delta)
    pw = _word(prefix)
    formula = ConjugationFormula(
        lhs=curve.word(),
        factors=[
            (pw, "c1", 1),
            (concat(pw, inverse(dw)), "c2", -1),
            (concat(pw, inverse(dw)), "c1", 1),
        ],
        bases={"c1": c1.word(), "c2": c2.word()},
    )
    return c1, c2, formula


def smooth_interlaced(curve: CombinatorialCurve, u: int, v: int):
    """The two smoothing pairs of an interlaced crossing pair.

    With the curve written alpha beta gamma delta, passages alternating
    u v u v, the pairs are

        c1' = alpha gamma^-1          c1'' = alpha delta gamma beta
        c2' = beta delta^-1           c2'' = beta alpha delta gamma

    (primed curves smooth both crossings with type B, double primed with type
    A), each pair coming with the identity expressing the curve's class as a
    product of conjugates of the pair's classes.  The two double-primed
    curves are the same cyclic word with different basepoints.
    """
    alpha, beta, gamma, delta, prefix, inter = decompose_at(curve, u, v)
    if not inter:
        raise SmoothingError(f"crossings {u}, {v} are not interlaced")
    sm_b = {**curve.smoothing, u: "B", v: "B"}
    sm_a = {**curve.smoothing, u: "A", v: "A"}
    c1p = CombinatorialCurve(curve.graph, alpha + _rev(gamma), sm_b)
    c1pp = CombinatorialCurve(curve.graph, alpha + delta + gamma + beta, sm_a)
    c2p = CombinatorialCurve(curve.graph, beta + _rev(delta), sm_b)
    c2pp = CombinatorialCurve(curve.graph, beta + alpha + delta + gamma, sm_a)
    pw = _word(prefix)
    gd = concat(_word(gamma), _word(delta))
    f1 = ConjugationFormula(
        lhs=curve.word(),
        factors=[
            (pw, "c1p", 1),
            (concat(pw, inverse(gd)), "c1p", -1),
            (concat(pw, inverse(gd)), "c1pp", 1),
        ],
        bases={"c1p": c1p.word(), "c1pp": c1pp.word()},
    )
    aw, dw = _word(alpha), _word(delta)
    f2 = ConjugationFormula(
        lhs=curve.word(),
        factors=[
            (concat(pw, aw), "c2p", 1),
            (concat(pw, inverse(dw)), "c2p", -1),
            (concat(pw, inverse(dw)), "c2pp", 1),
        ],
        bases={"c2p": c2p.word(), "c2pp": c2pp.word()},
    )
    return (c1p, c1pp, f1), (c2p, c2pp, f2)


# ---------------------------------------------------------------------------
# Geometric realization
# ---------------------------------------------------------------------------

def _convert(surface: BoundarySurface, bi: int, x: Bary, target: int) -> Point:
    for b, y in surface.representations(bi, x):
        if b == target:
            return bary_to_chart(y)
    raise SmoothingError("point not representable in target chart")


def realize_walk(curve: CombinatorialCurve) -> PLCurve:
    """Draw the walk as a PL curve on the surface.

    Straight passages pass through the double point (the two germs merge back
    into one segment, so the double point is not a curve vertex); chords at
    smoothed crossings are drawn between points trimmed off the incident
    strand germs, at a per-crossing offset shrunk until the local picture is
    disjoint from everything else.  The result crosses itself exactly at the
    walk's unsmoothed double points.
    """
    g = curve.graph
    if g.m == 0:
        base = g.curve
        return base if curve.walk[0][1] == 1 else base.reversed()

    transes = curve.transitions()
    chord_crossings: list[int] = []
    for t in transes:
        if t.kind == "chord" and t.crossing not in chord_crossings:
            chord_crossings.append(t.crossing)

    eps: dict[int, Fraction] = {y: Fraction(1, 4) for y in chord_crossings}
    for _ in range(64):
        out, shrink = _try_realize(curve, transes, eps)
        if out is not None:
            return out
        eps[shrink] /= 2
    raise SmoothingError("could not separate smoothed strands")


def _try_realize(curve: CombinatorialCurve, transes, eps):
    g = curve.graph
    surface = g.curve.surface
    L = len(curve.walk)
    paths = [g.arc_path(a, s) for a, s in curve.walk]

    trimmed = []
    for pts, charts in paths:
        trimmed.append((list(pts), list(charts)))
    chords = []      # (crossing, chart, q_end, q_start)
    for t in transes:
        if t.kind == "straight":
            continue
        i = t.walk_index
        j = (i + 1) % L
        y = t.crossing
        c = g.crossings.by_index(y)
        chart, ypt = c.chart, c.point
        e = eps[y]
        pin, cin = trimmed[i]
        if cin[-1] != chart:
            raise SmoothingError("crossing germ drawn in an unexpected triangle")
        prev = _convert(surface, pin[-2][0], pin[-2][1], chart)
        q_end = interpolate(ypt, prev, e)
        pin[-1] = (chart, chart_to_bary(q_end))
        pout, cout = trimmed[j]
        if cout[0] != chart:
            raise SmoothingError("crossing germ drawn in an unexpected triangle")
        nxt = _convert(surface, pout[1][0], pout[1][1], chart)
        q_start = interpolate(ypt, nxt, e)
        pout[0] = (chart, chart_to_bary(q_start))
        chords.append((y, chart, q_end, q_start))

    # Obstacle check: chords must avoid every drawn segment except where they
    # share an endpoint with their own trimmed germs, and avoid each other.
    segments = []
    for pts, charts in trimmed:
        for k in range(len(pts) - 1):
            ch = charts[k]
            segments.append((ch, _convert(surface, pts[k][0], pts[k][1], ch),
                             _convert(surface, pts[k + 1][0], pts[k + 1][1], ch)))
    for y, chart, qa, qb in chords:
        for ch, pp, qq in segments:
            if ch != chart:
                continue
            res = intersect_segments(qa, qb, pp, qq)
            if res.kind == "none":
                continue
            if res.kind == "touch" and res.point in (qa, qb) and res.point in (pp, qq):
                continue
            return None, y
        for y2, chart2, qa2, qb2 in chords:
            if (y2, qa2, qb2) == (y, qa, qb) or chart2 != chart:
                continue
            if intersect_segments(qa, qb, qa2, qb2).kind != "none":
                return None, max(y, y2)

    # Assemble the vertex list; each vertex is stored with the triangle of
    # its outgoing segment.  At a straight transition the double point is
    # dropped and its two collinear germs merge.
    events: list[tuple[tuple[int, Bary], int]] = []
    for i in range(L):
        pts, charts = trimmed[i]
        lo = 1 if transes[i - 1].kind == "straight" else 0
        for r in range(lo, len(pts) - 1):
            events.append((pts[r], charts[r]))
        if transes[i].kind == "chord":
            c = g.crossings.by_index(transes[i].crossing)
            events.append((pts[-1], c.chart))
    out_pts = []
    for (bi, x), chart in events:
        rep = dict(surface.representations(bi, x))
        out_pts.append((chart, rep[chart]))
    return PLCurve(surface, out_pts), None


def _same_point(surface: BoundarySurface, a: tuple[int, Bary], b: tuple[int, Bary]) -> bool:
    return min(surface.representations(*a)) == min(surface.representations(*b))


def realize_embedded(curve: CombinatorialCurve) -> PLCurve:
    """Realize a fully smoothed walk as a simple PL curve.

    Every crossing the walk passes twice must be smoothed.  The output is
    checked to be embedded by recomputing its crossings.
    """
    if curve.crossing_set():
        raise SmoothingError(
            f"unsmoothed crossings remain: {curve.crossing_set()}")
    out = realize_walk(curve)
    check = compute_crossings(out.surface, out)
    if check.m != 0 or not check.general_position:
        raise SmoothingError("realization failed to separate all strands")
    return out
