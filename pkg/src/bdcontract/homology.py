"""Integer homology of triangulations and their boundary surfaces.

Provides Smith normal form over the integers, solvability of integer linear
systems, and first-homology data for the 3-complex of a triangulation and
the 2-complex of its boundary.  Used to certify that curves with nonzero
homology class cannot bound, and to check torus-boundary identities.
"""

from fractions import Fraction
from typing import Optional, Sequence

from .boundary import BoundarySurface
from .triangulation import Triangulation
from .util import UnionFind

Matrix = list[list[int]]


def _identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(A: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Return (D, U, V) with U*A*V = D diagonal, divisors dividing successively."""
    m = len(A)
    n = len(A[0]) if m else 0
    D = [row[:] for row in A]
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, c):
        for k in range(n):
            D[dst][k] += c * D[src][k]
        for k in range(m):
            U[dst][k] += c * U[src][k]

    def add_col(src, dst, c):
        for r in D:
            r[dst] += c * r[src]
        for r in V:
            r[dst] += c * r[src]

    def negate_row(i):
        D[i] = [-x for x in D[i]]
        U[i] = [-x for x in U[i]]

    t = 0
    while t < min(m, n):
        # Find the smallest nonzero entry in the remaining block.
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if D[i][j] != 0 and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        if D[t][t] < 0:
            negate_row(t)
        dirty = False
        for i in range(t + 1, m):
            if D[i][t] % D[t][t] != 0:
                dirty = True
            add_row(t, i, -(D[i][t] // D[t][t]))
        for j in range(t + 1, n):
            if D[t][j] % D[t][t] != 0:
                dirty = True
            add_col(t, j, -(D[t][j] // D[t][t]))
        if any(D[i][t] for i in range(t + 1, m)) or any(D[t][j] for j in range(t + 1, n)):
            continue
        if dirty:
            continue
        # Enforce divisibility of the rest of the block.
        offender = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if D[i][j] % D[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(offender, t, 1)
            continue
        t += 1
    return D, U, V


def snf_divisors(A: Matrix) -> list[int]:
    D, _, _ = smith_normal_form(A)
    out = []
    for k in range(min(len(D), len(D[0]) if D else 0)):
        if D[k][k]:
            out.append(D[k][k])
    return out


class SmithSolver:
    """Solve A x = b over the integers for many right-hand sides."""

    def __init__(self, A: Matrix):
        self.m = len(A)
        self.n = len(A[0]) if self.m else 0
        if self.m and self.n:
            self.D, self.U, self.V = smith_normal_form(A)
        else:
            self.D = self.U = self.V = None

    def solve(self, b: Sequence[int]) -> Optional[list[int]]:
        if self.m == 0:
            return [0] * self.n
        if self.n == 0:
            return [] if not any(b) else None
        m, n = self.m, self.n
        ub = [sum(self.U[i][k] * b[k] for k in range(m)) for i in range(m)]
        z = [0] * n
        for i in range(m):
            d = self.D[i][i] if i < min(m, n) else 0
            if d == 0:
                if ub[i] != 0:
                    return None
            elif ub[i] % d != 0:
                return None
            elif i < n:
                z[i] = ub[i] // d
        return [sum(self.V[i][k] * z[k] for k in range(n)) for i in range(n)]


def integer_solve(A: Matrix, b: Sequence[int]) -> Optional[list[int]]:
    """An integer solution of A x = b, or None."""
    return SmithSolver(A).solve(b)


def integer_solvable(A: Matrix, b: Sequence[int]) -> bool:
    """Does A x = b admit an integer solution?"""
    return integer_solve(A, b) is not None


def kernel_basis(A: Matrix) -> list[list[int]]:
    """Columns spanning the integer kernel of A."""
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0 or n == 0:
        return [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    D, _, V = smith_normal_form(A)
    out = []
    for j in range(n):
        d = D[j][j] if j < min(m, n) else 0
        if d == 0:
            out.append([V[i][j] for i in range(n)])
    return out


class QuotientClassifier:
    """Canonical coordinates in coker(A) = Z^m / col-space(A).

    Two vectors have equal image in the cokernel iff their canonical forms
    agree: the pivot components reduced modulo the divisors, the rest exact.
    """

    def __init__(self, A: Matrix, m: int):
        self.m = m
        if not A or not A[0]:
            self.D, self.U = None, None
        else:
            self.D, self.U, _ = smith_normal_form(A)

    def canonical(self, b: Sequence[int]) -> tuple:
        if self.U is None:
            return tuple(b)
        m = self.m
        ub = [sum(self.U[i][k] * b[k] for k in range(m)) for i in range(m)]
        out = []
        for i in range(m):
            d = self.D[i][i] if i < min(len(self.D), len(self.D[0])) else 0
            out.append(ub[i] % d if d else ub[i])
        return tuple(out)


# ---------------------------------------------------------------------------
# Chain complex of a triangulation
# ---------------------------------------------------------------------------

class ComplexChains:
    """Vertex, edge and triangle classes of a triangulation with boundary maps."""

    def __init__(self, tri: Triangulation):
        self.tri = tri
        vuf = tri.vertex_classes()
        self.vclass = {g: i for i, g in enumerate(sorted(vuf.classes()))}
        self._vuf = vuf

        euf = tri.directed_edge_classes()
        orbits = euf.classes()
        pair_of: dict = {}
        canon: dict = {}
        for root, members in sorted(orbits.items()):
            rev_root = euf.find((members[0][0], members[0][2], members[0][1]))
            key = min(root, rev_root)
            pair_of[root] = key
            canon.setdefault(key, root if root <= rev_root else rev_root)
        self.eclass = {key: i for i, key in enumerate(sorted(set(pair_of.values())))}
        self._euf = euf
        self._pair_of = pair_of
        self._canon = canon

        sides = tri.face_sides()
        fkeys = set()
        for t in range(tri.tets):
            for f in range(4):
                g = sides.get((t, f))
                if g is None:
                    fkeys.add(((t, f),))
                else:
                    fkeys.add(tuple(sorted(((t, f), (g.tet2, g.face2)))))
        self.fclass = {key: i for i, key in enumerate(sorted(fkeys))}

    def vertex_index(self, tet: int, v: int) -> int:
        return self.vclass[self._vuf.find((tet, v))]

    def edge_index_sign(self, tet: int, a: int, b: int) -> tuple[int, int]:
        root = self._euf.find((tet, a, b))
        key = self._pair_of[root]
        sign = 1 if self._canon[key] == root else -1
        return self.eclass[key], sign

    @property
    def num_vertices(self) -> int:
        return len(self.vclass)

    @property
    def num_edges(self) -> int:
        return len(self.eclass)

    @property
    def num_faces(self) -> int:
        return len(self.fclass)

    def boundary2(self) -> Matrix:
        """Edge-by-face matrix of the boundary of each triangle class."""
        A = [[0] * self.num_faces for _ in range(self.num_edges)]
        for key, j in self.fclass.items():
            t, f = key[0]
            a, b, c = sorted(v for v in range(4) if v != f)
            for (x, y), coeff in (((a, b), 1), ((b, c), 1), ((a, c), -1)):
                idx, sign = self.edge_index_sign(t, x, y)
                A[idx][j] += coeff * sign
        return A

    def boundary1(self) -> Matrix:
        A = [[0] * self.num_edges for _ in range(self.num_vertices)]
        orbits = self._euf.classes()
        for key, i in self.eclass.items():
            t, a, b = orbits[self._canon[key]][0]
            A[self.vertex_index(t, b)][i] += 1
            A[self.vertex_index(t, a)][i] -= 1
        return A

    def cycle_from_path(self, germs: Sequence[tuple[int, int, int]]) -> list[int]:
        """Chain vector of a closed path given by directed edge germs."""
        out = [0] * self.num_edges
        for t, a, b in germs:
            idx, sign = self.edge_index_sign(t, a, b)
            out[idx] += sign
        return out

    def h1_summary(self) -> tuple[int, list[int]]:
        """(betti number, torsion divisors) of first homology."""
        d1 = self.boundary1()
        d2 = self.boundary2()
        r1 = len([d for d in snf_divisors(d1) if d])
        div2 = [d for d in snf_divisors(d2) if d]
        betti = self.num_edges - r1 - len(div2)
        torsion = [d for d in div2 if abs(d) > 1]
        return betti, sorted(torsion)

    def nullhomologous(self, cycle: Sequence[int]) -> bool:
        if not hasattr(self, "_solver2"):
            self._solver2 = SmithSolver(self.boundary2())
        return self._solver2.solve(list(cycle)) is not None

    def h1_class(self, cycle: Sequence[int]) -> tuple[tuple, tuple]:
        """(free part, torsion part) of a cycle's class, in a fixed basis.

        The free tuple has one entry per rank of the free part; a class
        generates a Z summand exactly when its free tuple is a unit vector up
        to sign and its torsion part vanishes.
        """
        K = kernel_basis(self.boundary1())
        if not K:
            return ((), ())
        KT = [[K[j][i] for j in range(len(K))] for i in range(len(K[0]))]
        solver = SmithSolver(KT)
        y = solver.solve(list(cycle))
        if y is None:
            raise ValueError("vector is not a cycle")
        d2 = self.boundary2()
        P_cols = []
        for j in range(self.num_faces):
            col = [d2[i][j] for i in range(self.num_edges)]
            py = solver.solve(col)
            if py is None:
                raise ValueError("boundary is not a cycle")
            P_cols.append(py)
        P = [[P_cols[j][i] for j in range(len(P_cols))] for i in range(len(K))]
        D, U, _ = smith_normal_form(P)
        uy = [sum(U[i][k] * y[k] for k in range(len(y))) for i in range(len(y))]
        free, torsion = [], []
        for i in range(len(uy)):
            d = D[i][i] if i < min(len(D), len(D[0]) if D else 0) else 0
            if d == 0:
                free.append(uy[i])
            elif abs(d) > 1:
                torsion.append(uy[i] % abs(d))
        return (tuple(free), tuple(torsion))


# ---------------------------------------------------------------------------
# Chains on the boundary surface
# ---------------------------------------------------------------------------

class SurfaceChains:
    """Cellular 1-chains on the boundary surface, with curve classes.

    A PL curve is pushed to the 1-skeleton by replacing, inside every
    triangle it traverses, the subpath between consecutive anchor corners by
    the straight boundary edge; the result is a homologous cellular cycle.
    """

    def __init__(self, surface: BoundarySurface):
        self.surface = surface
        self.vindex: dict = {}
        for bi in range(surface.num_triangles()):
            for lv in range(3):
                root = surface.vertex_class(bi, lv)
                if root not in self.vindex:
                    self.vindex[root] = len(self.vindex)
        classes = []
        seen = set()
        for (bi, slot), sp in sorted(surface.side_pairing.items()):
            key = frozenset(((bi, slot), (sp.btri2, sp.slot2)))
            if key not in seen:
                seen.add(key)
                classes.append(key)
        self.eindex = {key: i for i, key in enumerate(classes)}
        # Canonical direction of an edge class: the canonical side traversed
        # in increasing local order.
        self.canon_side = {key: min(key) for key in classes}

    @property
    def num_edges(self) -> int:
        return len(self.eindex)

    def _side_class(self, bi: int, slot: int):
        sp = self.surface.side_pairing[(bi, slot)]
        return frozenset(((bi, slot), (sp.btri2, sp.slot2)))

    def edge_index_sign(self, bi: int, frm: int, to: int) -> tuple[int, int]:
        """Directed edge of a triangle from local vertex frm to local vertex to."""
        slot = next(k for k in range(3) if k not in (frm, to))
        key = self._side_class(bi, slot)
        cb, cslot = self.canon_side[key]
        # Express the direction on the canonical side.
        if (cb, cslot) == (bi, slot):
            f2, t2 = frm, to
        else:
            sp = self.surface.side_pairing[(bi, slot)]
            m = dict(sp.local_map)
            f2, t2 = m[frm], m[to]
        lo, hi = sorted((f2, t2))
        sign = 1 if (f2, t2) == (lo, hi) else -1
        return self.eindex[key], sign

    def boundary2(self) -> Matrix:
        A = [[0] * self.surface.num_triangles() for _ in range(self.num_edges)]
        for bi in range(self.surface.num_triangles()):
            for frm, to in ((0, 1), (1, 2), (2, 0)):
                idx, sign = self.edge_index_sign(bi, frm, to)
                A[idx][bi] += sign
        return A

    def boundary1(self) -> Matrix:
        A = [[0] * self.num_edges for _ in range(len(self.vindex))]
        for key, i in self.eindex.items():
            cb, cslot = self.canon_side[key]
            lo, hi = [v for v in range(3) if v != cslot]
            A[self.vindex[self.surface.vertex_class(cb, hi)]][i] += 1
            A[self.vindex[self.surface.vertex_class(cb, lo)]][i] -= 1
        return A

    def _anchor(self, bi: int, bary) -> int:
        """A corner of bi anchoring the point, constant on edge classes."""
        zeros = [k for k in range(3) if bary[k] == 0]
        if not zeros:
            return 0
        slot = zeros[0]
        key = self._side_class(bi, slot)
        cb, cslot = self.canon_side[key]
        lo = min(v for v in range(3) if v != cslot)
        if (cb, cslot) == (bi, slot):
            return lo
        sp = self.surface.side_pairing[(cb, cslot)]
        return dict(sp.local_map)[lo]

    def curve_class(self, curve) -> list[int]:
        out = [0] * self.num_edges
        n = curve.n
        for i in range(n):
            bi = curve.canonical_chart(i)
            reps_a = dict(curve._reps[i])
            reps_b = dict(curve._reps[(i + 1) % n])
            u = self._anchor(bi, reps_a[bi])
            w = self._anchor(bi, reps_b[bi])
            if u == w:
                continue
            idx, sign = self.edge_index_sign(bi, u, w)
            out[idx] += sign
        return out

    def h1_summary(self) -> tuple[int, list[int]]:
        d1 = self.boundary1()
        d2 = self.boundary2()
        r1 = len([d for d in snf_divisors(d1) if d])
        div2 = [d for d in snf_divisors(d2) if d]
        betti = self.num_edges - r1 - len(div2)
        torsion = [d for d in div2 if abs(d) > 1]
        return betti, sorted(torsion)

    def classifier(self) -> QuotientClassifier:
        return QuotientClassifier(self.boundary2(), self.num_edges)


def curve_cycle_in_manifold(chains3: ComplexChains, schains: "SurfaceChains",
                            curve) -> list[int]:
    """The curve's 1-cycle in the manifold's chain complex, via the boundary.

    The cellular approximation of the curve on the boundary surface is a
    cycle over boundary edge classes, each of which is an edge class of the
    triangulation; no refinement is needed to read off the homology class.
    """
    sc = schains.curve_class(curve)
    out = [0] * chains3.num_edges
    surface = schains.surface
    for key, i in schains.eindex.items():
        if sc[i] == 0:
            continue
        bi, slot = schains.canon_side[key]
        t, f = surface.faces[bi]
        lo, hi = [v for v in range(3) if v != slot]
        va, vb = surface.verts[bi][lo], surface.verts[bi][hi]
        idx, sign = chains3.edge_index_sign(t, va, vb)
        out[idx] += sign * sc[i]
    return out
