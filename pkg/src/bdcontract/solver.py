"""The recursive smoothing solver and the subset-enumeration driver.

The recursion takes a closed curve with self-crossings and answers (i) or
(ii): (i) certifies contractibility, obtained either from the disk oracle on
an embedded leaf or by finding a crossing pair both of whose smoothed
offspring certify; a single leftover crossing forces (ii).  The driver runs
the recursion over the elementary cycles of every crossing subset's
four-valent graph, declaring the curve contractible as soon as one subset's
cycles all certify.

Traces retain only the successful subtree (one pair per node), so memory
stays proportional to the recursion depth; failed explorations leave nothing
but counters behind.
"""

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .crossgraph import (CrossingGraph, build_crossing_graph, cycle_arc_walk,
                         elementary_cycles, spanning_tree, walk_as_conjugate_product)
from .curve import PLCurve, compute_crossings
from .imagegraph import (CombinatorialCurve, ImageGraph, SmoothingError, curve_from_walk,
                         realize_embedded, smooth_interlaced, smooth_noninterlaced)
from .normal import OracleAnswer, simple_contractible
from .triangulation import Triangulation, validate_manifold
from .words import ConjugationFormula, Word, concat, reduce_word, substitute


class SolverError(ValueError):
    pass


@dataclass
class Counters:
    nodes: int = 0
    oracle_calls: int = 0
    max_depth: int = 0


@dataclass
class RecursionTrace:
    """One node of the retained (successful-subtree) recursion tree."""

    kind: str                               # 'oracle' | 'one-crossing' | 'smooth'
    result: str                             # 'i' | 'ii'
    m: int
    walk: tuple
    smoothing: dict
    pair: Optional[tuple[int, int]] = None
    interlaced_pair: Optional[bool] = None
    branch: Optional[int] = None            # 1 or 2 in the interlaced case
    formula: Optional[ConjugationFormula] = None
    children: Optional[tuple] = None
    oracle: Optional[OracleAnswer] = None
    realized: Optional[PLCurve] = None
    bounded_negative_seen: bool = False


def _default_oracle(tri: Triangulation, bound: int) -> Callable:
    cache: dict = {}

    def run(curve: CombinatorialCurve):
        realized = realize_embedded(curve)
        return realized, simple_contractible(tri, realized, bound, homology_cache=cache)
    return run


def special_recursion(tri: Triangulation, curve: CombinatorialCurve, bound: int,
                      oracle: Optional[Callable] = None,
                      counters: Optional[Counters] = None,
                      _depth: int = 0) -> RecursionTrace:
    """Answer (i) or (ii) for a closed curve with crossings, by smoothing pairs.

    (i) guarantees the curve is contractible in the manifold; (ii) only
    reports that this exploration found no certificate.  Zero crossings go to
    the disk oracle; one crossing forces (ii); otherwise every unordered
    crossing pair is tried, recursing on the smoothed pair (both interlaced
    branches in order), succeeding as soon as both members of a pair do.
    The returned trace keeps the successful subtree only.
    """
    if counters is None:
        counters = Counters()
    counters.nodes += 1
    counters.max_depth = max(counters.max_depth, _depth)
    crossings = curve.crossing_set()
    m = len(crossings)
    if m == 0:
        counters.oracle_calls += 1
        runner = oracle if oracle is not None else _default_oracle(tri, bound)
        realized, ans = runner(curve)
        return RecursionTrace(
            kind="oracle", result="i" if ans.contractible_in_M else "ii",
            m=0, walk=curve.walk, smoothing=dict(curve.smoothing),
            oracle=ans, realized=realized,
            bounded_negative_seen=ans.bound_exhausted)
    if m == 1:
        return RecursionTrace(kind="one-crossing", result="ii", m=1,
                              walk=curve.walk, smoothing=dict(curve.smoothing))

    bounded_seen = False
    for u, v in itertools.combinations(crossings, 2):
        if curve.interlaced(u, v):
            options = []
            (c1p, c1pp, f1), (c2p, c2pp, f2) = smooth_interlaced(curve, u, v)
            options.append((1, c1p, c1pp, f1))
            options.append((2, c2p, c2pp, f2))
            inter = True
        else:
            ca, cb, f = smooth_noninterlaced(curve, u, v)
            options = [(None, ca, cb, f)]
            inter = False
        for branch, ca, cb, formula in options:
            ta = special_recursion(tri, ca, bound, oracle, counters, _depth + 1)
            bounded_seen |= ta.bounded_negative_seen
            if ta.result != "i":
                continue
            tb = special_recursion(tri, cb, bound, oracle, counters, _depth + 1)
            bounded_seen |= tb.bounded_negative_seen
            if tb.result != "i":
                continue
            return RecursionTrace(
                kind="smooth", result="i", m=m,
                walk=curve.walk, smoothing=dict(curve.smoothing),
                pair=(u, v), interlaced_pair=inter, branch=branch,
                formula=formula, children=(ta, tb),
                bounded_negative_seen=bounded_seen)
    return RecursionTrace(kind="smooth", result="ii", m=m,
                          walk=curve.walk, smoothing=dict(curve.smoothing),
                          bounded_negative_seen=bounded_seen)


def _witness_from_trace(trace: RecursionTrace) -> Optional[PLCurve]:
    """First returned curve in deterministic (pair, branch, child) order."""
    if trace.kind == "oracle":
        return trace.oracle.returned_curve
    if trace.children:
        for child in trace.children:
            got = _witness_from_trace(child)
            if got is not None:
                return got
    return None


@dataclass
class Verdict:
    answer: str                                 # 'contractible' | 'not-contractible'
    witness_curve: Optional[PLCurve]
    chosen_x: Optional[tuple[int, ...]]
    traces: list[RecursionTrace] = field(default_factory=list)
    bound: int = 0
    bound_conditional: bool = False             # a failing branch exhausted the bound
    counters: Counters = field(default_factory=Counters)
    # Data needed to emit the homotopy formula for the chosen subset.
    graph: Optional[ImageGraph] = None
    fact_formula: Optional[ConjugationFormula] = None
    cycle_keys: list = field(default_factory=list)
    failures: list = field(default_factory=list)    # (subset, failing cycle index)


def _caching_oracle(tri: Triangulation, bound: int) -> Callable:
    base = _default_oracle(tri, bound)
    cache: dict = {}

    def run(curve: CombinatorialCurve):
        key = (curve.walk, tuple(sorted(curve.smoothing.items())))
        if key not in cache:
            cache[key] = base(curve)
        return cache[key]
    return run


def decide_contractible(tri: Triangulation, curve: PLCurve, bound: int,
                        oracle: Optional[Callable] = None) -> Verdict:
    """Decide contractibility of a general position closed boundary curve.

    Subsets of the crossing set are tried by size then lexicographically;
    for each, the elementary cycles of its four-valent graph are run through
    the recursion.  One subset with every cycle certified settles the
    positive case; the negative case needs every subset to fail.
    """
    report = validate_manifold(tri)
    if not report.is_manifold:
        raise SolverError("triangulation is not a manifold")
    crossings = compute_crossings(curve.surface, curve)
    if not crossings.general_position:
        raise SolverError("curve is not in general position: " +
                          "; ".join(crossings.degeneracies))
    graph = ImageGraph(curve, crossings)
    orig = CombinatorialCurve(graph, [(k, 1) for k in range(graph.num_arcs)])
    ids = [c.index for c in crossings.crossings]
    counters = Counters()
    runner = oracle if oracle is not None else _caching_oracle(tri, bound)

    bound_conditional = False
    failures = []
    for size in range(len(ids) + 1):
        for subset in itertools.combinations(ids, size):
            G = build_crossing_graph(orig, subset)
            tree = spanning_tree(G)
            ecs = elementary_cycles(G, tree)
            walk = [(e.index, 1) for e in G.edges]
            fact = walk_as_conjugate_product(G, tree, walk)
            traces = []
            failed = False
            for cyc in ecs.cycles:
                ccurve = curve_from_walk(graph, cycle_arc_walk(G, cyc))
                tr = special_recursion(tri, ccurve, bound, runner, counters)
                traces.append(tr)
                if tr.result != "i":
                    failed = True
                    failures.append((subset, cyc.edge))
                    bound_conditional |= tr.bounded_negative_seen
                    break
            if failed:
                continue
            witness = None
            for tr in traces:
                witness = _witness_from_trace(tr)
                if witness is not None:
                    break
            return Verdict("contractible", witness, subset, traces, bound,
                           False, counters, graph=graph, fact_formula=fact,
                           cycle_keys=[("cycle", c.edge) for c in ecs.cycles],
                           failures=failures)
    return Verdict("not-contractible", None, None, [], bound,
                   bound_conditional, counters, graph=graph, failures=failures)


# ---------------------------------------------------------------------------
# The homotopy formula
# ---------------------------------------------------------------------------

@dataclass
class Formula:
    """[curve] as a product of conjugates of embedded leaf curves' classes."""

    identity: ConjugationFormula            # over the arc alphabet
    leaves: dict                            # leaf id -> (walk, smoothing, oracle answer)

    def verify(self, graph: ImageGraph) -> bool:
        return verify_formula(self, graph)


class _LeafRegistry:
    """Content-addressed ids for oracle leaves, so repeats share one curve."""

    def __init__(self):
        self.by_content: dict = {}
        self.traces: dict = {}

    def id_for(self, trace: RecursionTrace) -> str:
        key = (tuple(trace.walk), tuple(sorted(trace.smoothing.items())))
        if key not in self.by_content:
            name = f"L{len(self.by_content)}"
            self.by_content[key] = name
            self.traces[name] = trace
        return self.by_content[key]


def _expand_trace(trace: RecursionTrace, reg: _LeafRegistry) -> ConjugationFormula:
    """The trace's identity with every base expanded down to oracle leaves."""
    if trace.result != "i":
        raise SolverError("formula requested for an unsuccessful trace")
    if trace.kind == "oracle":
        key = reg.id_for(trace)
        word = tuple(trace.walk)
        return ConjugationFormula(word, [((), key, 1)], {key: word})
    # The two children correspond to the two bases in construction order.
    expansions = {}
    for k, child in zip(list(trace.formula.bases), trace.children):
        expansions[k] = _expand_trace(child, reg)
    return trace.formula.compose(expansions)


def emit_formula(verdict: Verdict) -> Formula:
    """Compose the subset decomposition with the per-cycle recursion identities.

    The result writes the curve's class, in the free group on the arcs of its
    image graph, as a product of conjugates of the classes of embedded curves
    certified by the disk oracle.  The number of distinct leaf curves is at
    most 3 * 2^ceil(m/2) and the number of distinct conjugator words at most
    2^ceil(m/2) more than the subset decomposition contributes.
    """
    if verdict.answer != "contractible":
        raise SolverError("formula requires a contractible verdict")
    if verdict.fact_formula is None or verdict.graph is None:
        raise SolverError("verdict carries no decomposition data")
    graph = verdict.graph

    # Expand the edge-alphabet decomposition to arcs.
    orig = CombinatorialCurve(graph, [(k, 1) for k in range(graph.num_arcs)])
    G = build_crossing_graph(orig, list(verdict.chosen_x or ()))
    table = {e.index: tuple(e.walk) for e in G.edges}
    fact = verdict.fact_formula
    lhs_arcs = substitute(fact.lhs, table)
    # Conjugate back to the stored basepoint of the original curve.
    prefix = _rotation_prefix(orig, lhs_arcs)
    factors = [(concat(prefix, substitute(conj, table)), key, exp)
               for conj, key, exp in fact.factors]
    bases = {key: substitute(word, table) for key, word in fact.bases.items()}
    top = ConjugationFormula(orig.word(), factors, bases)

    reg = _LeafRegistry()
    expansions = {}
    for key, trace in zip(verdict.cycle_keys, verdict.traces):
        expansions[key] = _expand_trace(trace, reg)
    final = top.compose(expansions)

    # Distinct leaf curves obey the smoothing bound; each recursion level
    # removes at least two crossings and at most doubles the curve count.
    max_m = max((tr.m for tr in verdict.traces), default=0)
    cap = 3 * 2 ** ((max_m + 1) // 2) * max(1, len(verdict.traces))
    if len(reg.traces) > cap:
        raise SolverError("leaf count exceeds the smoothing bound")
    return Formula(final, reg.traces)


def _rotation_prefix(curve: CombinatorialCurve, rotated: Word) -> Word:
    """Prefix P with curve.word() = P * rotated * P^-1 (rotated is a rotation)."""
    w = curve.word()
    for k in range(len(w)):
        if w[k:] + w[:k] == tuple(rotated):
            return w[:k]
    raise SolverError("decomposition left side is not a rotation of the curve")


def verify_formula(formula: Formula, graph: ImageGraph) -> bool:
    """Free-reduce both sides over the arc alphabet; linear in formula size."""
    arcs = set(range(graph.num_arcs))
    if not formula.identity.symbols() <= arcs:
        raise SolverError("formula references unknown arcs")
    return formula.identity.holds()
