"""Generalized triangulations of 3-manifolds with boundary.

A triangulation is a number of abstract tetrahedra together with affine
gluings between pairs of their triangular faces.  The same tetrahedron may be
glued to itself across two distinct faces.  Faces of tetrahedron vertices are
numbered 0..3; face ``f`` is the face opposite vertex ``f`` and its vertices
are the remaining three numbers in increasing order.

Whether such a gluing actually yields a 3-manifold is decided by
:func:`validate_manifold`, which runs three checks: no face used on more than
two sides, no edge identified with itself reversed, and every vertex link a
sphere or a disk.
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .util import UnionFind

FACE_VERTICES = (
    (1, 2, 3),
    (0, 2, 3),
    (0, 1, 3),
    (0, 1, 2),
)


class TriangulationError(ValueError):
    """Structural problem: bad indices, bad permutation word, bad file."""


@dataclass(frozen=True)
class Gluing:
    """One face identification.

    ``perm`` lists the images of the vertices of ``(tet1, face1)`` (taken in
    increasing order) among the vertices of ``(tet2, face2)``.
    """

    tet1: int
    face1: int
    tet2: int
    face2: int
    perm: tuple[int, int, int]

    def vertex_map(self) -> dict[int, int]:
        return dict(zip(FACE_VERTICES[self.face1], self.perm))

    def reversed(self) -> "Gluing":
        inv = {w: v for v, w in self.vertex_map().items()}
        perm = tuple(inv[w] for w in FACE_VERTICES[self.face2])
        return Gluing(self.tet2, self.face2, self.tet1, self.face1, perm)


@dataclass(frozen=True)
class Violation:
    check: str            # 'face-overuse' | 'edge-reversal' | 'vertex-link'
    detail: str
    simplices: tuple


@dataclass
class ValidationReport:
    is_manifold: bool
    violations: list[Violation] = field(default_factory=list)


class Triangulation:
    """t tetrahedra plus a list of face gluings, in input order."""

    def __init__(self, tets: int, gluings: Sequence[Gluing], labels: Optional[Sequence[str]] = None):
        if tets < 1:
            raise TriangulationError("a triangulation needs at least one tetrahedron")
        self.tets = tets
        self.gluings: list[Gluing] = []
        self.labels = list(labels) if labels is not None else None
        for g in gluings:
            for t, f in ((g.tet1, g.face1), (g.tet2, g.face2)):
                if not (0 <= t < tets) or not (0 <= f < 4):
                    raise TriangulationError(f"gluing references tet {t} face {f} out of range")
            if sorted(g.perm) != list(FACE_VERTICES[g.face2]):
                raise TriangulationError(
                    f"vertex bijection {g.perm} is not a permutation of face {g.face2}")
            self.gluings.append(g)

    # -- pairing structure ---------------------------------------------------

    def face_sides(self) -> dict[tuple[int, int], Gluing]:
        """Map each glued face side to its gluing; raises on over-use."""
        sides: dict[tuple[int, int], Gluing] = {}
        for g in self.gluings:
            for side, rec in (((g.tet1, g.face1), g), ((g.tet2, g.face2), g.reversed())):
                if side in sides:
                    raise TriangulationError(f"face {side} glued twice")
                sides[side] = rec
        return sides

    def pairing_violations(self) -> list[Violation]:
        used: dict[tuple[int, int], int] = {}
        out: list[Violation] = []
        for g in self.gluings:
            if (g.tet1, g.face1) == (g.tet2, g.face2):
                out.append(Violation("face-overuse", "face glued to itself",
                                     ((g.tet1, g.face1),)))
                continue
            for side in ((g.tet1, g.face1), (g.tet2, g.face2)):
                used[side] = used.get(side, 0) + 1
        for side, n in sorted(used.items()):
            if n > 1:
                out.append(Violation("face-overuse",
                                     f"face used by {n} gluings", (side,)))
        return out

    def boundary_faces(self) -> list[tuple[int, int]]:
        glued = set()
        for g in self.gluings:
            glued.add((g.tet1, g.face1))
            glued.add((g.tet2, g.face2))
        return [(t, f) for t in range(self.tets) for f in range(4) if (t, f) not in glued]

    # -- simplex classes -----------------------------------------------------

    def directed_edge_classes(self) -> UnionFind:
        """Identify directed edge germs ``(tet, a, b)`` across all gluings."""
        uf = UnionFind()
        for t in range(self.tets):
            for a in range(4):
                for b in range(4):
                    if a != b:
                        uf.add((t, a, b))
        for g in self.gluings:
            vm = g.vertex_map()
            for a in FACE_VERTICES[g.face1]:
                for b in FACE_VERTICES[g.face1]:
                    if a != b:
                        uf.union((g.tet1, a, b), (g.tet2, vm[a], vm[b]))
        return uf

    def vertex_classes(self) -> UnionFind:
        uf = UnionFind()
        for t in range(self.tets):
            for v in range(4):
                uf.add((t, v))
        for g in self.gluings:
            for v, w in g.vertex_map().items():
                uf.union((g.tet1, v), (g.tet2, w))
        return uf

    # -- serialization ---------------------------------------------------------

    def serialize(self) -> str:
        sides = self.face_sides()
        lines = [f"tets {self.tets}"]
        for t in range(self.tets):
            entries = []
            for f in range(4):
                g = sides.get((t, f))
                if g is None:
                    entries.append("bdry")
                else:
                    word = "".join(str(g.vertex_map()[v]) for v in FACE_VERTICES[f])
                    entries.append(f"{g.tet2}:{g.face2}:{word}")
            lines.append(" ".join(entries))
        return "\n".join(lines) + "\n"


def parse_triangulation(text: str) -> Triangulation:
    """Parse the line-oriented triangulation format.

    Grammar: a header ``tets <t>`` followed by one line per tetrahedron with
    four whitespace-separated entries, each either ``bdry`` or
    ``<tet>:<face>:<perm>`` where ``perm`` is a three-letter word over 0..3
    listing the image vertices of the face's vertices in increasing order.
    Every gluing must be listed from both sides, with mutually inverse words.
    """
    lines = text.splitlines()
    rows = [(n + 1, ln.strip()) for n, ln in enumerate(lines) if ln.strip()]
    if not rows:
        raise TriangulationError("line 1: empty file")
    hn, header = rows[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != "tets":
        raise TriangulationError(f"line {hn}: expected header 'tets <t>'")
    try:
        t = int(parts[1])
    except ValueError:
        raise TriangulationError(f"line {hn}: tetrahedron count is not an integer") from None
    if t < 1:
        raise TriangulationError(f"line {hn}: tetrahedron count must be positive")
    if len(rows) - 1 != t:
        raise TriangulationError(f"line {hn}: expected {t} tetrahedron lines, found {len(rows) - 1}")

    entries: dict[tuple[int, int], Optional[tuple[int, int, tuple[int, int, int]]]] = {}
    for tet in range(t):
        ln, row = rows[tet + 1]
        fields = row.split()
        if len(fields) != 4:
            raise TriangulationError(f"line {ln}: expected 4 face entries, found {len(fields)}")
        for face, fld in enumerate(fields):
            if fld == "bdry":
                entries[(tet, face)] = None
                continue
            bits = fld.split(":")
            if len(bits) != 3:
                raise TriangulationError(f"line {ln}: entry {fld!r} is not '<tet>:<face>:<perm>'")
            try:
                t2, f2 = int(bits[0]), int(bits[1])
            except ValueError:
                raise TriangulationError(f"line {ln}: non-integer tet or face in {fld!r}") from None
            if not (0 <= t2 < t) or not (0 <= f2 < 4):
                raise TriangulationError(f"line {ln}: tet or face out of range in {fld!r}")
            if len(bits[2]) != 3 or any(ch not in "0123" for ch in bits[2]):
                raise TriangulationError(f"line {ln}: bad permutation word in {fld!r}")
            perm = tuple(int(ch) for ch in bits[2])
            if sorted(perm) != list(FACE_VERTICES[f2]):
                raise TriangulationError(
                    f"line {ln}: vertex bijection not a permutation of face {f2} in {fld!r}")
            if (t2, f2) == (tet, face):
                raise TriangulationError(f"line {ln}: face glued twice / self-gluing in {fld!r}")
            entries[(tet, face)] = (t2, f2, perm)

    gluings: list[Gluing] = []
    seen_targets: set[tuple[int, int]] = set()
    for tet in range(t):
        for face in range(4):
            rec = entries[(tet, face)]
            if rec is None:
                continue
            t2, f2, perm = rec
            g = Gluing(tet, face, t2, f2, perm)
            back = entries.get((t2, f2))
            if back is None:
                raise TriangulationError(
                    f"face {t2}:{f2} is 'bdry' but targeted by {tet}:{face}")
            rb = g.reversed()
            if back != (rb.tet2, rb.face2, rb.perm):
                raise TriangulationError(
                    f"gluing between {tet}:{face} and {t2}:{f2} is not symmetric with inverse words")
            if (tet, face) in seen_targets:
                continue  # second side of a recorded gluing
            if (t2, f2) in seen_targets or (t2, f2) == (tet, face):
                raise TriangulationError(f"face glued twice: {t2}:{f2}")
            gluings.append(g)
            seen_targets.add((t2, f2))
            seen_targets.add((tet, face))
    return Triangulation(t, gluings)


def _link_complex(tri: Triangulation):
    """Build all vertex links at once.

    Returns (triangles, side_glue, corner_uf) where triangles are the pairs
    ``(tet, v)``, sides are ``((tet, v), f)`` and corners ``(tet, v, w)``.
    """
    sides = tri.face_sides()
    side_glue: dict = {}
    corner_uf = UnionFind()
    for t in range(tri.tets):
        for v in range(4):
            for w in range(4):
                if w != v:
                    corner_uf.add((t, v, w))
    for (t, f), g in sides.items():
        vm = g.vertex_map()
        for v in FACE_VERTICES[f]:
            side_glue[((t, v), f)] = ((g.tet2, vm[v]), g.face2)
            for w in FACE_VERTICES[f]:
                if w != v:
                    corner_uf.union((t, v, w), (g.tet2, vm[v], vm[w]))
    triangles = [(t, v) for t in range(tri.tets) for v in range(4)]
    return triangles, side_glue, corner_uf


def _link_surface_violations(tri: Triangulation) -> list[Violation]:
    """Check that every vertex link is a sphere or a disk.

    With face pairing sound, each link side lies on at most two link
    triangles and every link triangle of a vertex class is reachable through
    side gluings, so the link is automatically a connected surface; only its
    Euler characteristic and closedness remain to be classified.
    """
    triangles, side_glue, corner_uf = _link_complex(tri)
    vclasses = tri.vertex_classes()
    out: list[Violation] = []
    per_class: dict = {}
    for (t, v) in triangles:
        per_class.setdefault(vclasses.find((t, v)), []).append((t, v))
    for root, tris in sorted(per_class.items()):
        f_count = len(tris)
        side_ids = set()
        open_sides = 0
        for (t, v) in tris:
            for f in range(4):
                if f == v:
                    continue
                tgt = side_glue.get(((t, v), f))
                if tgt is None:
                    open_sides += 1
                    side_ids.add(("open", (t, v), f))
                else:
                    side_ids.add(frozenset((((t, v), f), tgt)))
        corner_ids = {corner_uf.find((t, v, w)) for (t, v) in tris for w in range(4) if w != v}
        chi = len(corner_ids) - len(side_ids) + f_count
        closed = open_sides == 0
        if closed and chi == 2:
            continue
        if not closed and chi == 1:
            continue
        kind = "closed" if closed else "bounded"
        out.append(Violation("vertex-link",
                             f"link of vertex class is {kind} with euler characteristic {chi}",
                             tuple(sorted(tris))))
    return out


def validate_manifold(tri: Triangulation) -> ValidationReport:
    """Run the three manifold checks and report every violation found."""
    violations = tri.pairing_violations()
    if violations:
        return ValidationReport(False, violations)

    uf = tri.directed_edge_classes()
    reported: set = set()
    for t in range(tri.tets):
        for a in range(4):
            for b in range(a + 1, 4):
                if uf.same((t, a, b), (t, b, a)):
                    root = uf.find((t, a, b))
                    if root not in reported:
                        reported.add(root)
                        violations.append(Violation(
                            "edge-reversal",
                            "edge identified with itself in reverse",
                            ((t, a, b),)))
    violations.extend(_link_surface_violations(tri))
    return ValidationReport(not violations, violations)
