"""Normal surfaces at desk scale, and the spanning-disk oracle for simple curves.

A normal surface assigns to every tetrahedron four triangle coordinates (one
per vertex cut off) and three quadrilateral coordinates (one per separating
pair), subject to the matching equations across glued faces and to at most
one nonzero quadrilateral type per tetrahedron.  Bounded admissible vectors
are enumerated by a depth-first search with interval propagation, in
lexicographic order; surfaces are reconstructed cell by cell to read off
connectivity, Euler characteristic and the boundary pattern.

A simple boundary curve is contractible in the manifold exactly when it
bounds an embedded disk.  After refining the triangulation so the curve is a
skeleton cycle, the oracle looks for an admissible vector that reconstructs
to a disk whose boundary is the curve pushed off itself to one side.  A
nonzero class in integer homology certifies non-contractibility outright;
otherwise a fruitless search is only conclusive up to the coordinate bound.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .boundary import BoundarySurface, boundary_surface, bary_to_chart
from .curve import PLCurve, compute_crossings
from .homology import ComplexChains
from .subdivide import SubdivisionMap, subdivide_along_curve
from .triangulation import FACE_VERTICES, Triangulation
from .util import UnionFind

# Quadrilateral type k separates QUAD_SEP[k] from the other two vertices.
QUAD_SEP = (frozenset((0, 1)), frozenset((0, 2)), frozenset((0, 3)))

KIND_TRI = tuple(range(4))      # variable kinds 0..3: triangle at vertex k
KIND_QUAD = tuple(range(4, 7))  # variable kinds 4..6: quad type k-4


class NormalError(ValueError):
    pass


def quad_type_separating(a: int, d: int) -> int:
    pair = frozenset((a, d))
    for k, sep in enumerate(QUAD_SEP):
        if sep == pair or sep == frozenset(range(4)) - pair:
            return k
    raise NormalError("bad vertex pair")


@dataclass
class MatchingSystem:
    """Matching equations and arc bookkeeping for a triangulation."""

    tri: Triangulation
    num_vars: int
    equations: list[dict]                 # var -> coefficient; sum must vanish
    boundary_arcs: list[tuple[int, int, int]]   # (tet, face, corner) of each boundary arc type

    def var(self, tet: int, kind: int) -> int:
        return 7 * tet + kind

    def arc_vars(self, tet: int, face: int, corner: int) -> tuple[int, int]:
        """(triangle var, quad var) counting arcs at a face corner."""
        d = face
        q = quad_type_separating(corner, d)
        return self.var(tet, corner), self.var(tet, 4 + q)


def matching_system(tri: Triangulation) -> MatchingSystem:
    """One equation per glued face class and corner; three per gluing."""
    sides = tri.face_sides()
    seen = set()
    equations: list[dict] = []
    sys = MatchingSystem(tri, 7 * tri.tets, equations, [])
    for (t, f), g in sorted(sides.items()):
        key = frozenset(((t, f), (g.tet2, g.face2)))
        if key in seen:
            continue
        seen.add(key)
        vm = g.vertex_map()
        for a in FACE_VERTICES[f]:
            eq: dict = {}
            for var in sys.arc_vars(t, f, a):
                eq[var] = eq.get(var, 0) + 1
            for var in sys.arc_vars(g.tet2, g.face2, vm[a]):
                eq[var] = eq.get(var, 0) - 1
            eq = {v: c for v, c in eq.items() if c}
            equations.append(eq)
    for (t, f) in tri.boundary_faces():
        for a in FACE_VERTICES[f]:
            sys.boundary_arcs.append((t, f, a))
    return sys


def is_admissible(sys: MatchingSystem, vec: Sequence[int]) -> bool:
    if len(vec) != sys.num_vars or any(x < 0 for x in vec):
        return False
    for eq in sys.equations:
        if sum(c * vec[v] for v, c in eq.items()) != 0:
            return False
    for t in range(sys.tri.tets):
        if sum(1 for k in KIND_QUAD if vec[7 * t + k] > 0) > 1:
            return False
    return True


def enumerate_admissible(tri: Triangulation, bound: int,
                         boundary_pattern: Optional[dict] = None,
                         sys: Optional[MatchingSystem] = None,
                         order: str = "lex") -> Iterator[tuple[int, ...]]:
    """All admissible vectors with coordinates at most ``bound``.

    The zero vector is excluded (it is no surface).  With a boundary pattern,
    the count of arcs at every boundary face corner is constrained to the
    given value (zero where absent), which prunes the search sharply.

    ``order`` fixes the decision variable order of the search: ``lex``
    (default) emits solutions in lexicographic order of the coordinate
    vector; ``boundary-first`` decides tetrahedra near the boundary first,
    which propagates a boundary pattern much faster.  Both orders are
    deterministic and enumerate the same set.
    """
    if bound < 0:
        raise NormalError("bound must be non-negative")
    if sys is None:
        sys = matching_system(tri)
    eqs = [dict(eq) for eq in sys.equations]
    consts = [0] * len(eqs)
    if boundary_pattern is not None:
        for (t, f, a) in sys.boundary_arcs:
            want = boundary_pattern.get((t, f, a), 0)
            eq: dict = {}
            for var in sys.arc_vars(t, f, a):
                eq[var] = eq.get(var, 0) + 1
            eq = {v: c for v, c in eq.items() if c}
            eqs.append(eq)
            consts.append(-want)

    nv = sys.num_vars
    ne = len(eqs)
    by_var: list[list[tuple[int, int]]] = [[] for _ in range(nv)]
    pos_rem = [0] * ne
    neg_rem = [0] * ne
    unassigned = [0] * ne
    cur = list(consts)
    for ei, eq in enumerate(eqs):
        for v, c in eq.items():
            by_var[v].append((ei, c))
            unassigned[ei] += 1
            if c > 0:
                pos_rem[ei] += c
            else:
                neg_rem[ei] -= c

    quad_tet = [-1] * nv
    quad_siblings: dict[int, tuple[int, ...]] = {}
    for t in range(tri.tets):
        qs = tuple(7 * t + k for k in KIND_QUAD)
        for v in qs:
            quad_tet[v] = t
            quad_siblings[v] = tuple(u for u in qs if u != v)
    quad_pos = [False] * tri.tets

    if order == "lex":
        decision_order = list(range(nv))
    elif order == "boundary-first":
        rank = _tet_ranks(tri)
        decision_order = sorted(range(nv), key=lambda v: (rank[v // 7], v))
    else:
        raise NormalError(f"unknown search order {order!r}")

    value = [-1] * nv          # -1 = unassigned
    trail: list[tuple] = []    # ('v', var) and ('q', tet) entries

    def assign(v: int, val: int) -> bool:
        """Assign and propagate; record on the trail; False on contradiction."""
        stack = [(v, val)]
        while stack:
            v, val = stack.pop()
            if value[v] >= 0:
                if value[v] != val:
                    return False
                continue
            if val < 0 or val > bound:
                return False
            t = quad_tet[v]
            if t >= 0 and val > 0:
                if quad_pos[t]:
                    return False
                quad_pos[t] = True
                trail.append(("q", t))
                for u in quad_siblings[v]:
                    stack.append((u, 0))
            value[v] = val
            trail.append(("v", v))
            for ei, c in by_var[v]:
                cur[ei] += c * val
                unassigned[ei] -= 1
                if c > 0:
                    pos_rem[ei] -= c
                else:
                    neg_rem[ei] += c
            for ei, c in by_var[v]:
                lo = cur[ei] - bound * neg_rem[ei]
                hi = cur[ei] + bound * pos_rem[ei]
                if lo > 0 or hi < 0:
                    return False
                if unassigned[ei] == 1:
                    u = next(u2 for u2 in eqs[ei] if value[u2] < 0)
                    c2 = eqs[ei][u]
                    if (-cur[ei]) % c2 != 0:
                        return False
                    stack.append((u, (-cur[ei]) // c2))
                elif unassigned[ei] == 0 and cur[ei] != 0:
                    return False
        return True

    def undo_to(mark: int) -> None:
        while len(trail) > mark:
            kind, x = trail.pop()
            if kind == "q":
                quad_pos[x] = False
                continue
            val = value[x]
            value[x] = -1
            for ei, c in by_var[x]:
                cur[ei] -= c * val
                unassigned[ei] += 1
                if c > 0:
                    pos_rem[ei] += c
                else:
                    neg_rem[ei] -= c

    # Depth-first over decision variables; propagation fills the rest.
    frames: list[tuple[int, int, int]] = []    # (decision position, value, trail mark)
    pos = 0
    val = 0
    while True:
        while pos < nv and value[decision_order[pos]] >= 0:
            pos += 1
        if pos == nv:
            if any(x > 0 for x in value):
                yield tuple(value)
            if not frames:
                return
            pos, val, mark = frames.pop()
            undo_to(mark)
            val += 1
            continue
        placed = False
        while val <= bound:
            mark = len(trail)
            if assign(decision_order[pos], val):
                frames.append((pos, val, mark))
                pos += 1
                val = 0
                placed = True
                break
            undo_to(mark)
            val += 1
        if placed:
            continue
        if not frames:
            return
        pos, val, mark = frames.pop()
        undo_to(mark)
        val += 1


def _tet_ranks(tri: Triangulation) -> list[int]:
    """Breadth-first distance of each tetrahedron from the boundary."""
    sides = tri.face_sides()
    rank = [None] * tri.tets
    queue = []
    for (t, f) in tri.boundary_faces():
        if rank[t] is None:
            rank[t] = 0
            queue.append(t)
    k = 0
    while k < len(queue):
        t = queue[k]
        k += 1
        for f in range(4):
            g = sides.get((t, f))
            if g is not None and rank[g.tet2] is None:
                rank[g.tet2] = rank[t] + 1
                queue.append(g.tet2)
    return [r if r is not None else tri.tets for r in rank]


# ---------------------------------------------------------------------------
# Surface reconstruction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Piece:
    tet: int
    kind: str            # 'tri' | 'quad'
    which: int           # vertex for tri, quad type for quad
    copy: int            # 1-based depth

    def crosses(self, a: int, b: int) -> bool:
        if self.kind == "tri":
            return self.which in (a, b)
        sep = QUAD_SEP[self.which]
        return (a in sep) != (b in sep)

    def position_on(self, counts, a: int, b: int) -> int:
        """1-based position among the crossings of tet edge (a, b), from a.

        Triangle copies sit nearest their vertex; quad copies fill the middle,
        indexed from the side of the separation containing vertex 0.
        """
        t = self.tet
        ta = counts[7 * t + a]
        if self.kind == "tri":
            if self.which == a:
                return self.copy
            total = ta + counts[7 * t + b] + self._quad_count(counts, a, b)
            return total + 1 - self.copy
        sep = QUAD_SEP[self.which]
        q = counts[7 * t + 4 + self.which]
        if (a in sep) == (0 in sep):
            return ta + self.copy
        return ta + (q + 1 - self.copy)

    def _quad_count(self, counts, a, b):
        t = self.tet
        total = 0
        for k in range(3):
            if (a in QUAD_SEP[k]) != (b in QUAD_SEP[k]):
                total += counts[7 * t + 4 + k]
        return total


@dataclass
class NormalSurfaceComplex:
    pieces: list[Piece]
    components: list[list[int]]              # piece indices per component
    euler: list[int]                          # characteristic per component
    boundary_circles: list[list[tuple[int, int, int, int]]]
    # each boundary arc: (tet, face, corner, depth); circles are cyclic lists
    piece_component: dict = field(default_factory=dict)

    def component_count(self) -> int:
        return len(self.components)

    def boundary_vector(self) -> dict:
        out: dict = {}
        for circle in self.boundary_circles:
            for (t, f, a, _) in circle:
                out[(t, f, a)] = out.get((t, f, a), 0) + 1
        return out


def build_surface(tri: Triangulation, vec: Sequence[int],
                  sys: Optional[MatchingSystem] = None) -> NormalSurfaceComplex:
    """Instantiate the cells of an admissible vector and glue them.

    Sides living in glued faces pair up by corner and depth; their endpoint
    crossing points are identified, which is all the combinatorics needed for
    components, Euler characteristics and the boundary pattern.
    """
    if sys is None:
        sys = matching_system(tri)
    if not is_admissible(sys, list(vec)):
        raise NormalError("vector is not admissible")
    pieces: list[Piece] = []
    for t in range(tri.tets):
        for v in range(4):
            for j in range(1, vec[7 * t + v] + 1):
                pieces.append(Piece(t, "tri", v, j))
        for k in range(3):
            for j in range(1, vec[7 * t + 4 + k] + 1):
                pieces.append(Piece(t, "quad", k, j))
    index = {p: i for i, p in enumerate(pieces)}

    # A side of a piece: its arc in one face, identified by (tet, face,
    # corner, rank) with rank the 1-based depth order at that corner.
    def sides_of(p: Piece):
        out = []
        t = p.tet
        if p.kind == "tri":
            faces = [f for f in range(4) if f != p.which]
        else:
            faces = list(range(4))
        for f in faces:
            corner = _arc_corner(p, f)
            if corner is None:
                continue
            ea, eb = [x for x in FACE_VERTICES[f] if x != corner]
            rank = p.position_on(vec, corner, ea)
            out.append((f, corner, rank, (corner, ea), (corner, eb)))
        return out

    def _arc_corner(p: Piece, f: int) -> Optional[int]:
        if p.kind == "tri":
            return p.which if p.which != f else None
        sep = QUAD_SEP[p.which]
        inside = [v for v in FACE_VERTICES[f] if v in sep]
        outside = [v for v in FACE_VERTICES[f] if v not in sep]
        if len(inside) == 1:
            return inside[0]
        if len(outside) == 1:
            return outside[0]
        return None

    arc_owner: dict = {}
    side_list = []
    for pi, p in enumerate(pieces):
        for (f, corner, rank, e1, e2) in sides_of(p):
            key = (p.tet, f, corner, rank)
            if key in arc_owner:
                raise NormalError("two pieces claim one arc slot")
            arc_owner[key] = pi
            side_list.append((key, pi, e1, e2))

    puf = UnionFind()
    suf = UnionFind()
    cuf = UnionFind()
    for pi in range(len(pieces)):
        puf.add(pi)
    for (key, pi, e1, e2) in side_list:
        suf.add(key)
        cuf.add(_corner_key(pieces[pi], vec, key[0], e1))
        cuf.add(_corner_key(pieces[pi], vec, key[0], e2))

    sides = tri.face_sides()
    boundary_sides = []
    for (key, pi, e1, e2) in side_list:
        t, f, corner, rank = key
        g = sides.get((t, f))
        if g is None:
            boundary_sides.append(key)
            continue
        vm = g.vertex_map()
        key2 = (g.tet2, g.face2, vm[corner], rank)
        if key2 not in arc_owner:
            raise NormalError("matching equations violated in reconstruction")
        pj = arc_owner[key2]
        puf.union(pi, pj)
        suf.union(key, key2)
        for (a, b) in (e1, e2):
            c1 = _corner_key(pieces[pi], vec, t, (a, b))
            p2 = pieces[pj]
            c2 = _corner_key(p2, vec, g.tet2, (vm[a], vm[b]))
            cuf.union(c1, c2)

    comps: dict = {}
    for pi in range(len(pieces)):
        comps.setdefault(puf.find(pi), []).append(pi)
    components = [sorted(v) for _, v in sorted(comps.items())]
    piece_component = {}
    for ci, comp in enumerate(components):
        for pi in comp:
            piece_component[pi] = ci

    # Euler characteristic per component: V - E + F over cells.
    eulers = []
    for comp in components:
        compset = set(comp)
        f_count = len(comp)
        side_ids = set()
        corner_ids = set()
        for (key, pi, e1, e2) in side_list:
            if pi not in compset:
                continue
            side_ids.add(suf.find(key))
            corner_ids.add(cuf.find(_corner_key(pieces[pi], vec, key[0], e1)))
            corner_ids.add(cuf.find(_corner_key(pieces[pi], vec, key[0], e2)))
        eulers.append(len(corner_ids) - len(side_ids) + f_count)

    # Boundary circles: boundary arcs chained through shared corner classes.
    arc_at_corner: dict = {}
    for key in boundary_sides:
        t, f, corner, rank = key
        pi = arc_owner[key]
        ea, eb = [x for x in FACE_VERTICES[f] if x != corner]
        for e in ((corner, ea), (corner, eb)):
            ck = cuf.find(_corner_key(pieces[pi], vec, t, e))
            arc_at_corner.setdefault(ck, []).append(key)
    for ck, arcs in arc_at_corner.items():
        if len(arcs) > 2:
            raise NormalError("boundary corner with more than two arcs")
    circles = []
    unused = set(boundary_sides)
    while unused:
        start = min(unused)
        circle = []
        prev_ck = None
        key = start
        while True:
            unused.discard(key)
            t, f, corner, rank = key
            circle.append((t, f, corner, rank))
            pi = arc_owner[key]
            ea, eb = [x for x in FACE_VERTICES[f] if x != corner]
            cks = [cuf.find(_corner_key(pieces[pi], vec, t, (corner, e))) for e in (ea, eb)]
            nxt_ck = cks[0] if cks[0] != prev_ck else cks[1]
            nbrs = [k for k in arc_at_corner.get(nxt_ck, []) if k != key]
            if not nbrs:
                raise NormalError("boundary arc chain broke")
            key = nbrs[0]
            prev_ck = nxt_ck
            if key == start:
                break
        circles.append(circle)

    return NormalSurfaceComplex(pieces, components, eulers, circles, piece_component)


def _corner_key(p: Piece, vec, tet: int, edge: tuple[int, int]):
    a, b = edge
    lo, hi = min(a, b), max(a, b)
    pos = p.position_on(vec, lo, hi)
    return (tet, (lo, hi), pos)


# ---------------------------------------------------------------------------
# Pushed copies of a skeleton curve
# ---------------------------------------------------------------------------

class OneSidedCurveError(NormalError):
    """The curve has no two-sided push-off; not supported by the disk search."""


def pushed_copies(tprime: Triangulation, smap: SubdivisionMap):
    """The two normal curves obtained by pushing the skeleton cycle off itself.

    Returns a list of (vector, trace): the arc counts per boundary face
    corner and the cyclic arc sequence, one entry per side that crosses at
    least one edge (a push-off staying inside a single triangle is not a
    normal curve and is skipped).
    """
    surf = boundary_surface(tprime)
    path = []
    for (tet, la, lb) in smap.curve_path:
        cands = [f for f in range(4) if f not in (la, lb) and (tet, f) in surf.face_index]
        if len(cands) != 1:
            raise NormalError("curve edge not on a unique boundary face")
        f = cands[0]
        bt = surf.face_index[(tet, f)]
        fa = surf.verts[bt].index(la)
        fb = surf.verts[bt].index(lb)
        path.append((bt, fa, fb))

    out = []
    for side in (0, 1):
        res = _pushed_copy_side(surf, path, side)
        if res is not None:
            out.append(res)
    if not out:
        raise NormalError("no valid push-off side")
    return surf, out


def _segment_side_reps(surf: BoundarySurface, seg) -> list[tuple[int, int, int]]:
    """Both (triangle, tail local, head local) descriptions of a curve edge."""
    bt, fa, fb = seg
    slot = next(k for k in range(3) if k not in (fa, fb))
    sp = surf.side_pairing[(bt, slot)]
    m = dict(sp.local_map)
    return sorted({(bt, fa, fb), (sp.btri2, m[fa], m[fb])})


def _pushed_copy_side(surf: BoundarySurface, path, side: int):
    """Trace the push-off starting in one of the two triangles at segment 0.

    The carrying triangle of each later segment is found by fanning around
    the shared vertex, so the copy stays on one side throughout; if the walk
    returns to segment 0 in the other triangle, the curve is one-sided.
    """
    n = len(path)
    reps0 = _segment_side_reps(surf, path[0])
    cur = reps0[min(side, len(reps0) - 1)]
    start = cur
    arcs: list[tuple[int, int]] = []     # (boundary triangle, cut corner)
    for i in range(n):
        bt, fa, fb = cur
        w = next(k for k in range(3) if k not in (fa, fb))
        arcs.append((bt, w))
        reps = _segment_side_reps(surf, path[(i + 1) % n])
        # Fan around the head vertex to the triangle carrying the next
        # segment on this side.
        t, lv = bt, fb
        blocked = w
        guard = 0

        def hit():
            return next((r for r in reps if r[0] == t and r[1] == lv), None)

        while hit() is None:
            step_slot = next(k for k in range(3) if k != lv and k != blocked)
            sp = surf.side_pairing[(t, step_slot)]
            m = dict(sp.local_map)
            t, lv, blocked = sp.btri2, m[lv], sp.slot2
            if hit() is not None:
                break
            arcs.append((t, lv))
            guard += 1
            if guard > 3 * surf.num_triangles() + 3:
                raise OneSidedCurveError("push-off walk did not close")
        cur = hit()
    if cur != start:
        raise OneSidedCurveError("push-off returns on the opposite side")
    if not arcs:
        return None
    vector: dict = {}
    trace = []
    for (bt, corner) in arcs:
        t, f = surf.faces[bt]
        vertex = surf.verts[bt][corner]
        vector[(t, f, vertex)] = vector.get((t, f, vertex), 0) + 1
        trace.append((t, f, vertex))
    return vector, trace


def _cyclic_equal_multiset(a: list, b: list) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    dbl = b + b
    rev = list(reversed(b)) + list(reversed(b))
    return any(dbl[k:k + len(a)] == a for k in range(len(b))) or \
        any(rev[k:k + len(a)] == a for k in range(len(b)))


def verify_disk(tri: Triangulation, vec: Sequence[int], pushed_vector: dict,
                pushed_trace: list, sys: Optional[MatchingSystem] = None) -> bool:
    """The polynomial-time check that a vector is a disk spanning the curve.

    Connected, Euler characteristic one, a single boundary circle whose arcs
    are exactly the pushed copy of the curve, traced in the same cyclic
    order up to rotation and reversal.
    """
    try:
        complex_ = build_surface(tri, vec, sys=sys)
    except NormalError:
        return False
    if complex_.component_count() != 1:
        return False
    if complex_.euler != [1]:
        return False
    if len(complex_.boundary_circles) != 1:
        return False
    if complex_.boundary_vector() != pushed_vector:
        return False
    got = [(t, f, a) for (t, f, a, _) in complex_.boundary_circles[0]]
    return _cyclic_equal_multiset(got, list(pushed_trace))


# ---------------------------------------------------------------------------
# Cutting the boundary along a curve, and the oracle
# ---------------------------------------------------------------------------

def bounds_disk_in_boundary(surface: BoundarySurface, curve: PLCurve) -> bool:
    """Does the simple curve bound a disk inside the boundary surface?

    Cuts the surface along the curve and looks for a component of Euler
    characteristic one.
    """
    cs = compute_crossings(surface, curve)
    if not cs.general_position or cs.m != 0:
        raise NormalError("curve must be simple and in general position")
    from .boundary import cut_components_euler
    constraints: dict[int, list] = {}
    for i in range(curve.n):
        bi = curve.canonical_chart(i)
        constraints.setdefault(bi, []).append(curve.segment(i))
    chis = cut_components_euler(surface, constraints)
    return any(chi == 1 for chi in chis)


@dataclass
class OracleAnswer:
    contractible_in_M: bool
    witness: Optional[tuple[int, ...]]
    boundary_status: bool                  # contractible in the boundary surface
    returned_curve: Optional[PLCurve]
    unconditional: bool                    # negative certified by homology
    bound_exhausted: bool
    bound: int

    def conclusive(self) -> bool:
        return self.contractible_in_M or self.unconditional


def simple_contractible(tri: Triangulation, curve: PLCurve, bound: int,
                        precomputed: Optional[tuple] = None,
                        homology_cache: Optional[dict] = None) -> OracleAnswer:
    """Decide contractibility of a simple boundary curve by disk search.

    A nonzero integer homology class settles the negative case outright and
    is read off the unrefined triangulation.  Otherwise the triangulation is
    refined along the curve, and admissible vectors up to the bound whose
    boundary matches a push-off of the curve are reconstructed and checked;
    the first spanning disk found is returned as witness.  Exhausting the
    search is reported as a bounded negative, not a certainty.
    """
    if bound < 1:
        raise NormalError("coordinate bound must be at least 1")
    surface = curve.surface

    from .homology import SurfaceChains, curve_cycle_in_manifold
    cache = homology_cache if homology_cache is not None else {}
    if "chains" not in cache:
        cache["chains"] = ComplexChains(tri)
        cache["schains"] = SurfaceChains(surface)
    chains, schains = cache["chains"], cache["schains"]
    cycle = curve_cycle_in_manifold(chains, schains, curve)
    if not chains.nullhomologous(cycle):
        return OracleAnswer(False, None, False, None,
                            unconditional=True, bound_exhausted=False, bound=bound)

    if precomputed is not None:
        tprime, smap = precomputed
    else:
        tprime, smap = subdivide_along_curve(tri, curve)
    surf_p, copies = pushed_copies(tprime, smap)
    sys = matching_system(tprime)
    for vector, trace in copies:
        for vec in enumerate_admissible(tprime, bound, boundary_pattern=vector,
                                        sys=sys, order="boundary-first"):
            if verify_disk(tprime, vec, vector, trace, sys=sys):
                boundary_status = bounds_disk_in_boundary(surface, curve)
                returned = None if boundary_status else curve
                return OracleAnswer(True, vec, boundary_status, returned,
                                    unconditional=True, bound_exhausted=False, bound=bound)
    boundary_status = bounds_disk_in_boundary(surface, curve)
    return OracleAnswer(False, None, boundary_status, None,
                        unconditional=False, bound_exhausted=True, bound=bound)
