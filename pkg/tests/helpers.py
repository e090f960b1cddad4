"""Shared fixtures and generators for the test suite."""

import itertools
import random
from fractions import Fraction

from bdcontract.boundary import BoundarySurface, boundary_surface
from bdcontract.curve import PLCurve, compute_crossings
from bdcontract.triangulation import FACE_VERTICES, Gluing, Triangulation, parse_triangulation, validate_manifold

BALL_TEXT = "tets 1\nbdry bdry bdry bdry\n"


def ball() -> Triangulation:
    return parse_triangulation(BALL_TEXT)


def ball_surface() -> BoundarySurface:
    return boundary_surface(ball())


def solid_torus_gluings() -> list[Triangulation]:
    """All one-tetrahedron triangulations with two faces glued and torus boundary.

    Enumerates every gluing of two distinct faces of a single tetrahedron and
    keeps those that validate as manifolds whose boundary has Euler
    characteristic zero.
    """
    out = []
    for f1 in range(4):
        for f2 in range(f1 + 1, 4):
            for perm in itertools.permutations(FACE_VERTICES[f2]):
                tri = Triangulation(1, [Gluing(0, f1, 0, f2, tuple(perm))])
                if not validate_manifold(tri).is_manifold:
                    continue
                surf = boundary_surface(tri)
                chis = [surf.euler_characteristic(c) for c in surf.components]
                if chis == [0]:
                    out.append(tri)
    return out


def solid_torus() -> Triangulation:
    """The canonical fixture: first valid one-tetrahedron solid torus."""
    return solid_torus_gluings()[0]


def random_closed_curve(surface: BoundarySurface, rng: random.Random,
                        steps: int, denom: int = 32) -> PLCurve:
    """A random closed PL curve crossing triangle edges at random points.

    Each vertex is stored with the triangle of its outgoing segment, as the
    curve type requires.
    """
    points = []
    cur = rng.randrange(surface.num_triangles())
    entered = None
    first = None
    for k in range(steps * 6):
        slot = rng.choice([s for s in range(3) if s != entered])
        t = Fraction(rng.randrange(1, denom), denom)
        li, lj = [x for x in range(3) if x != slot]
        coords = [Fraction(0)] * 3
        coords[li], coords[lj] = 1 - t, t
        sp = surface.side_pairing[(cur, slot)]
        nxt = sp.btri2
        out = [Fraction(0)] * 3
        for lv, lv2 in sp.local_map:
            out[lv2] = coords[lv]
        points.append((nxt, tuple(out)))
        if first is None:
            first = (cur, nxt)
        entered = sp.slot2
        cur = nxt
        if k + 1 >= steps and cur == first[0]:
            break
    else:
        raise ValueError("random walk failed to close")
    return PLCurve(surface, points)


def random_curve_with_crossings(surface: BoundarySurface, rng: random.Random,
                                lo: int, hi: int, max_tries: int = 400):
    """Search for a general position curve with lo <= m <= hi crossings."""
    for _ in range(max_tries):
        steps = rng.randrange(4, 11)
        try:
            curve = random_closed_curve(surface, rng, steps)
        except ValueError:
            continue
        cs = compute_crossings(surface, curve)
        if cs.general_position and lo <= cs.m <= hi:
            return curve, cs
    raise ValueError(f"no curve with {lo}..{hi} crossings found")


def curve_intersections(a: PLCurve, b: PLCurve):
    """Proper crossings between two curves: (point, seg_a, t_a, seg_b, t_b, chart)."""
    from bdcontract.exactgeom import intersect_segments
    out = []
    for i in range(a.n):
        for j in range(b.n):
            if a.canonical_chart(i) != b.canonical_chart(j):
                continue
            p, q = a.segment(i)
            r, s = b.segment(j)
            res = intersect_segments(p, q, r, s)
            if res.kind == "proper":
                out.append((res.point, i, res.t1, j, res.t2, a.canonical_chart(i)))
    return out


def splice_at_crossing(a: PLCurve, b: PLCurve, eps=Fraction(1, 16)):
    """A figure-eight-like join of two curves crossing transversally once.

    The composite traverses a, swerves onto b near the crossing, and returns;
    it is freely homotopic to a*b.  A node where two lobes merely touch is
    not transverse, so the composite necessarily keeps a few genuine double
    points; the variant with fewest crossings in general position wins.
    """
    from bdcontract.boundary import bary_to_chart, chart_to_bary
    from bdcontract.exactgeom import interpolate
    candidates = []
    for flip in (False, True):
        bb = b.reversed() if flip else b
        hits = curve_intersections(a, bb)
        if len(hits) != 1:
            continue
        point, i, ta, j, tb, chart = hits[0]
        pa, qa = a.segment(i)
        pb, qb = bb.segment(j)
        for e in (eps, eps / 2, eps / 4, eps / 8):
            q_ain = interpolate(point, pa, e)
            q_aout = interpolate(point, qa, e)
            q_bin = interpolate(point, pb, e)
            q_bout = interpolate(point, qb, e)
            mid = ((q_ain[0] + q_bin[0]) / 2, (q_ain[1] + q_bin[1]) / 2)
            mid2 = ((q_bout[0] + q_aout[0]) / 2, (q_bout[1] + q_aout[1]) / 2)
            # a's vertices from i+1 all the way around to i, then the swerve
            # into b's strand, all of b, and the swerve back.
            pts = [(chart, chart_to_bary(q_aout))]
            pts += [a.points[(i + 1 + k) % a.n] for k in range(a.n)]
            pts += [(chart, chart_to_bary(mid)), (chart, chart_to_bary(q_bin)),
                    (chart, chart_to_bary(q_bout))]
            pts += [bb.points[(j + 1 + k) % bb.n] for k in range(bb.n)]
            pts += [(chart, chart_to_bary(mid2)), (chart, chart_to_bary(q_ain))]
            try:
                c = PLCurve(a.surface, pts)
                cs = compute_crossings(a.surface, c)
            except Exception:
                continue
            if cs.general_position:
                candidates.append((cs.m, flip, c, cs))
    if not candidates:
        raise ValueError("splice failed to produce a curve in general position")
    candidates.sort(key=lambda r: (r[0], r[1]))
    _, _, c, cs = candidates[0]
    return c, cs


def bridge_parallels(a: PLCurve, b: PLCurve):
    """Join two disjoint parallel circles into a one-node figure-eight."""
    surface = a.surface
    for i in range(a.n):
        for j in range(b.n):
            pts = [a.points[(i + k) % a.n] for k in range(a.n)]
            pts += [b.points[(j + k) % b.n] for k in range(b.n)]
            try:
                c = PLCurve(surface, pts)
                cs = compute_crossings(surface, c)
            except Exception:
                continue
            if cs.general_position and cs.m == 1:
                return c, cs
    raise ValueError("no bridging produced a one-node curve")


def torus_meridian(surface):
    from bdcontract.curve import boundary_edge_classes, curves_from_edge_weights
    stc = boundary_edge_classes(surface)
    w = {e: [2, 1, 3][i] for i, e in enumerate(stc)}
    return curves_from_edge_weights(surface, w)[0]


def torus_longitude(surface):
    from bdcontract.curve import boundary_edge_classes, curves_from_edge_weights
    stc = boundary_edge_classes(surface)
    w = {e: [1, 0, 1][i] for i, e in enumerate(stc)}
    return curves_from_edge_weights(surface, w, offset=Fraction(1, 5))[0]


def add_kink(curve: PLCurve, seg: int, scale=Fraction(1, 8)):
    """Insert a small self-crossing loop in the interior of one segment."""
    from bdcontract.boundary import bary_to_chart, chart_to_bary
    from bdcontract.exactgeom import interpolate
    surface = curve.surface
    chart = curve.canonical_chart(seg)
    a, b = curve.segment(seg)
    centroid = (Fraction(1, 3), Fraction(1, 3))
    for d in (scale, scale / 2, scale / 4, scale / 8):
        base = interpolate(a, b, Fraction(3, 10))
        k1 = interpolate(a, b, Fraction(7, 10))
        k2 = interpolate(base, centroid, d)
        k3 = interpolate(base, centroid, -d)
        pts = []
        for i in range(curve.n):
            pts.append(curve.points[i])
            if i == seg:
                pts.extend([(chart, chart_to_bary(k1)), (chart, chart_to_bary(k2)),
                            (chart, chart_to_bary(k3))])
        try:
            c = PLCurve(surface, pts)
            cs = compute_crossings(surface, c)
        except Exception:
            continue
        if cs.general_position and cs.m == compute_crossings(surface, curve).m + 1:
            return c, cs
    raise ValueError("kink insertion failed")
