"""The four-valent graph spanned by a subset of a curve's crossings.

For a subset X of the double points, the curve decomposes into maximal
subpaths between consecutive X-passages; these are the edges of a graph on
vertex set X, traced in curve order.  Every vertex is four-valent (two
passages, in and out).  The empty subset is represented by a synthetic
degree-two basepoint vertex carrying the whole curve as one loop, so the
closed-curve case fits the same data model.

A fixed spanning tree turns closed walks into products of conjugates of
elementary cycles (cycles using exactly one non-tree edge); the rewriting is
constructive and the resulting identity is verified by free reduction.
"""

from dataclasses import dataclass
from typing import Hashable, Optional, Sequence

from .imagegraph import CombinatorialCurve, SmoothingError, Walk
from .words import ConjugationFormula, Word, concat, inverse, substitute

BASEPOINT = "base"


@dataclass(frozen=True)
class GraphEdge:
    index: int
    tail: Hashable
    head: Hashable
    walk: Walk                       # signed arcs of the underlying subpath
    residual: tuple[int, ...]        # non-X crossings passed straight inside


class CrossingGraph:
    def __init__(self, curve: CombinatorialCurve, subset: Sequence[int]):
        crossings = set(curve.crossing_set())
        self.curve = curve
        self.subset = sorted(set(subset))
        for y in self.subset:
            if y not in crossings:
                raise SmoothingError(f"{y} is not a crossing of the curve")
        self.vertices: list = list(self.subset) if self.subset else [BASEPOINT]
        self.edges: list[GraphEdge] = []
        if not self.subset:
            residual = tuple(sorted(crossings))
            self.edges.append(GraphEdge(0, BASEPOINT, BASEPOINT, curve.walk, residual))
        else:
            cuts = [t for t in curve.transitions()
                    if t.kind == "straight" and t.crossing in self.subset]
            L = len(curve.walk)
            for k, t in enumerate(cuts):
                t2 = cuts[(k + 1) % len(cuts)]
                walk = self._elements_between(t.walk_index, t2.walk_index, L)
                inside = [s.crossing for s in curve.transitions()
                          if s.kind == "straight" and s.crossing not in self.subset
                          and self._strictly_between(t.walk_index, s.walk_index, t2.walk_index, L)]
                self.edges.append(GraphEdge(k, t.crossing, t2.crossing, walk,
                                            tuple(sorted(set(inside)))))

    def _elements_between(self, i: int, j: int, L: int) -> Walk:
        out = []
        k = (i + 1) % L
        while True:
            out.append(self.curve.walk[k])
            if k == j % L:
                break
            k = (k + 1) % L
        return tuple(out)

    @staticmethod
    def _strictly_between(i: int, k: int, j: int, L: int) -> bool:
        if i == j:
            return k != i
        span = (j - i) % L
        return 0 < (k - i) % L < span

    def incident(self, v) -> list[tuple[int, int]]:
        """(edge index, end) pairs at v, in edge order; end 0 = tail, 1 = head."""
        out = []
        for e in self.edges:
            if e.tail == v:
                out.append((e.index, 0))
            if e.head == v:
                out.append((e.index, 1))
        return out

    def degree(self, v) -> int:
        return len(self.incident(v))

    def other_end(self, eidx: int, v):
        e = self.edges[eidx]
        return e.head if e.tail == v else e.tail

    def edge_word(self, eidx: int, direction: int = 1) -> Word:
        w = tuple(self.edges[eidx].walk)
        return w if direction == 1 else inverse(w)


def build_crossing_graph(curve: CombinatorialCurve, subset: Sequence[int]) -> CrossingGraph:
    return CrossingGraph(curve, subset)


class SpanningTree:
    def __init__(self, graph: CrossingGraph, root):
        self.graph = graph
        self.root = root
        # v -> (edge index, direction) moving from v toward the root.
        self.parent: dict = {}

    def tree_edges(self) -> set[int]:
        return {e for e, _ in self.parent.values()}

    def path_to_root(self, v) -> tuple[tuple[int, int], ...]:
        out = []
        while v in self.parent:
            e, d = self.parent[v]
            out.append((e, d))
            edge = self.graph.edges[e]
            v = edge.head if d == 1 else edge.tail
        return tuple(out)


def spanning_tree(graph: CrossingGraph) -> SpanningTree:
    """Breadth-first spanning tree from the earliest vertex, edges in curve order."""
    if not graph.subset:
        root = BASEPOINT
    else:
        first = {}
        for t in graph.curve.transitions():
            if t.kind == "straight" and t.crossing in graph.subset:
                first.setdefault(t.crossing, t.walk_index)
        root = min(graph.subset, key=lambda y: first[y])
    tree = SpanningTree(graph, root)
    seen = {root}
    queue = [root]
    while queue:
        v = queue.pop(0)
        for eidx, end in graph.incident(v):
            e = graph.edges[eidx]
            w = e.head if end == 0 else e.tail
            if w in seen:
                continue
            seen.add(w)
            # Edge direction that moves from w back to v.
            tree.parent[w] = (eidx, -1 if end == 0 else 1)
            queue.append(w)
    if set(seen) != set(graph.vertices):
        raise SmoothingError("crossing graph is not connected")
    return tree


@dataclass(frozen=True)
class ElementaryCycle:
    edge: int                              # the non-tree edge
    steps: tuple[tuple[int, int], ...]     # closed walk from tail(edge)


@dataclass
class ElementaryCycleSet:
    tree: SpanningTree
    cycles: list[ElementaryCycle]


def elementary_cycles(graph: CrossingGraph, tree: SpanningTree) -> ElementaryCycleSet:
    """One cycle per non-tree edge: the edge plus the tree path closing it."""
    cycles = []
    tedges = tree.tree_edges()
    for e in graph.edges:
        if e.index in tedges:
            continue
        up = tree.path_to_root(e.head)
        down = tree.path_to_root(e.tail)
        # Strip the common suffix (shared path near the root) to get the
        # direct tree path head -> tail, keeping the cycle free of repeats.
        i, j = len(up), len(down)
        while i > 0 and j > 0 and up[i - 1] == down[j - 1]:
            i -= 1
            j -= 1
        path = list(up[:i]) + [(eidx, -d) for eidx, d in reversed(down[:j])]
        cycles.append(ElementaryCycle(e.index, ((e.index, 1),) + tuple(path)))
    return ElementaryCycleSet(tree, cycles)


def cycle_arc_walk(graph: CrossingGraph, cycle: ElementaryCycle) -> Walk:
    out: list = []
    for eidx, d in cycle.steps:
        out.extend(graph.edge_word(eidx, d))
    return tuple(out)


def cycle_word(graph: CrossingGraph, cycle: ElementaryCycle) -> Word:
    """The cycle as a word over edge symbols, based at the non-tree edge's tail."""
    return tuple((eidx, d) for eidx, d in cycle.steps)


def walk_as_conjugate_product(graph: CrossingGraph, tree: SpanningTree,
                              walk: Sequence[tuple[int, int]]) -> ConjugationFormula:
    """Rewrite a closed edge walk as a product of conjugated elementary cycles.

    Tree edges contribute nothing (their based loops cancel); each non-tree edge
    traversal contributes the corresponding elementary cycle, conjugated by
    the tree path from the walk's starting vertex through the root to the
    cycle's basepoint.  The identity is verified by free reduction.
    """
    if not walk:
        raise SmoothingError("empty walk")
    steps = [(int(e), int(d)) for e, d in walk]
    v = graph.edges[steps[0][0]].tail if steps[0][1] == 1 else graph.edges[steps[0][0]].head
    start = v
    for e, d in steps:
        edge = graph.edges[e]
        a, b = (edge.tail, edge.head) if d == 1 else (edge.head, edge.tail)
        if a != v:
            raise SmoothingError("walk is not continuous")
        v = b
    if v != start:
        raise SmoothingError("walk is not closed")

    ecs = elementary_cycles(graph, tree)
    by_edge = {c.edge: c for c in ecs.cycles}
    tedges = tree.tree_edges()
    back = _path_word(tree, start)                   # tree path from start up to the root
    factors = []
    bases = {}
    for e, d in steps:
        if e in tedges:
            continue
        cyc = by_edge[e]
        key = ("cycle", e)
        bases[key] = cycle_word(graph, cyc)
        conj = concat(back, inverse(_path_word(tree, graph.edges[e].tail)))
        factors.append((conj, key, d))
    lhs = tuple(steps)
    return ConjugationFormula(lhs, factors, bases)


def _path_word(tree: SpanningTree, v) -> Word:
    return tuple(tree.path_to_root(v))
