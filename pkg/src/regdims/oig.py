"""One-inclusion hypergraph, min-max scaled orientations, and the
orientation-based predictor with its leave-one-out evaluation.

The graph lives on the distinct rows of a projected class.  For direction
``i`` and off-``i`` restriction ``f`` the hyperedge collects every row that
agrees with ``f`` outside ``i``; each vertex belongs to exactly one edge per
direction.  An orientation picks one member per edge, and the scaled
out-degree of a vertex counts the directions whose oriented label is more
than gamma away from the vertex's own label.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .core import (ABSOLUTE_LOSS, ContractViolation, HypothesisClass,
                   LabeledSample, LossFn, ProjectedClass, consistent_hypotheses,
                   project)


@dataclass(frozen=True)
class OIGraph:
    rows: tuple                 # sorted distinct rows (vertices)
    n: int                      # number of directions
    edges: tuple                # ((direction, restriction), member index tuple), sorted
    edge_of: dict               # (vertex index, direction) -> edge position

    def edge_members(self, pos: int) -> tuple:
        return self.edges[pos][1]


def build_oig(P: ProjectedClass) -> OIGraph:
    """Complete one-inclusion hypergraph of a projected class.

    Size-1 edges are kept; they are auto-oriented to their sole member and
    contribute no out-degree.
    """
    rows = P.rows
    if not rows:
        raise ContractViolation("empty projected class")
    n = len(P.points)
    buckets: dict = {}
    for v, row in enumerate(rows):
        for i in range(n):
            key = (i, row[:i] + row[i + 1:])
            buckets.setdefault(key, []).append(v)
    edges = tuple((key, tuple(members)) for key, members in sorted(buckets.items()))
    edge_of = {}
    for pos, (key, members) in enumerate(edges):
        for v in members:
            edge_of[(v, key[0])] = pos
    return OIGraph(rows=rows, n=n, edges=edges, edge_of=edge_of)


def outdegree(G: OIGraph, orientation: dict, vertex: int, gamma: Fraction,
              loss: LossFn = ABSOLUTE_LOSS) -> int:
    """Scaled out-degree of a vertex under an orientation (edge pos -> vertex)."""
    row = G.rows[vertex]
    deg = 0
    for i in range(G.n):
        pos = G.edge_of[(vertex, i)]
        chosen = orientation[pos]
        if chosen != vertex and loss(G.rows[chosen][i], row[i]) > gamma:
            deg += 1
    return deg


def orient_minmax(G: OIGraph, gamma: Fraction,
                  loss: LossFn = ABSOLUTE_LOSS) -> tuple:
    """Orientation minimizing the maximum scaled out-degree, with that value.

    Branch-and-bound over non-singleton edges in (direction, restriction)
    lexicographic order, trying member vertices in row order; the bound is
    the maximum out-degree already forced, which only grows as more edges
    are oriented.  First-found optimum is kept, so the result is a
    deterministic function of the graph.
    """
    orientation = {}
    multi = []
    for pos, (key, members) in enumerate(G.edges):
        if len(members) == 1:
            orientation[pos] = members[0]
        else:
            multi.append(pos)

    # Penalty lists: orienting edge pos to member u adds +1 to every other
    # member whose label in the edge direction is gamma-far from u's.
    penalties = []
    for pos in multi:
        (i, _), members = G.edges[pos]
        per_choice = []
        for u in members:
            hit = tuple(w for w in members
                        if w != u and loss(G.rows[u][i], G.rows[w][i]) > gamma)
            per_choice.append((u, hit))
        penalties.append(per_choice)

    nverts = len(G.rows)
    out = [0] * nverts
    best_max = G.n + 1
    best_choice: Optional[list] = None
    choice = [0] * len(multi)

    def dfs(k: int, current_max: int) -> None:
        nonlocal best_max, best_choice
        if current_max >= best_max:
            return
        if k == len(multi):
            best_max = current_max
            best_choice = choice[:]
            return
        for ci, (u, hit) in enumerate(penalties[k]):
            new_max = current_max
            for w in hit:
                out[w] += 1
                if out[w] > new_max:
                    new_max = out[w]
            choice[k] = ci
            dfs(k + 1, new_max)
            for w in hit:
                out[w] -= 1

    dfs(0, 0)
    assert best_choice is not None
    for k, pos in enumerate(multi):
        orientation[pos] = penalties[k][best_choice[k]][0]
    return orientation, best_max


def minmax_outdegree(P: ProjectedClass, gamma: Fraction,
                     loss: LossFn = ABSOLUTE_LOSS) -> int:
    _, value = orient_minmax(build_oig(P), gamma, loss)
    return value


@lru_cache(maxsize=100_000)
def _oriented_graph(rows: tuple, gamma: Fraction) -> tuple:
    """Memoized graph + min-max orientation for a sorted row tuple.

    The memo is an optimization only: orientation is a pure function of the
    projected row set and gamma, so cached answers match fresh ones.
    """
    n = len(rows[0])
    G = build_oig(ProjectedClass(points=tuple(range(n)), rows=rows))
    orientation, max_out = orient_minmax(G, gamma)
    return G, orientation, max_out


def oig_predict(H: HypothesisClass, train: LabeledSample, x: int,
                gamma: Fraction) -> Fraction:
    """Orientation-based prediction at a test point.

    Builds the one-inclusion graph on (train points..., x), locates the
    last-direction edge consistent with the training labels, and returns
    the oriented vertex's label there.
    """
    if not consistent_hypotheses(H, train):
        raise ContractViolation("sample not realizable")
    points = train.points() + (x,)
    P = project(H, points)
    G, orientation, _ = _oriented_graph(P.rows, Fraction(gamma))
    n = G.n
    labels = train.labels()
    member = next(v for v, row in enumerate(G.rows)
                  if all(row[j] == labels[j] for j in range(n - 1)))
    pos = G.edge_of[(member, n - 1)]
    return G.rows[orientation[pos]][n - 1]


def loo_error(H: HypothesisClass, points: Sequence[int], h_star: int,
              gamma: Fraction, loss: LossFn = ABSOLUTE_LOSS) -> Fraction:
    """Fraction of positions where train-on-the-rest misses by more than gamma.

    One min-max orientation of the graph on the full sequence is shared by
    all leave-one-out positions: the query at position i reads the oriented
    vertex of the direction-i edge selected by the remaining labels, so the
    error count is exactly the scaled out-degree of the target's row.
    """
    points = tuple(points)
    P = project(H, points)
    G, orientation, _ = _oriented_graph(P.rows, Fraction(gamma))
    target = tuple(H.rows[h_star][p] for p in points)
    vertex = G.rows.index(target)
    mistakes = 0
    for i in range(G.n):
        pos = G.edge_of[(vertex, i)]
        pred = G.rows[orientation[pos]][i]
        if loss(pred, target[i]) > gamma:
            mistakes += 1
    return Fraction(mistakes, G.n)
