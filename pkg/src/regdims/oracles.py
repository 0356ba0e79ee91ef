"""Brute-force shattering enumerators.

Each dimension has a second, deliberately naive implementation that replays
the defining quantifiers with flat enumeration: value-pair products checked
by row scans, subset enumeration for pseudo-cubes, exhaustive orientation
enumeration for the one-inclusion criterion, and explicit game trees for the
online dimension.  They share only the domain types with the production
searches, and the test suite requires exact agreement between the two.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Sequence

from .core import ABSOLUTE_LOSS, HypothesisClass, LossFn, project
from .oig import OIGraph, build_oig


# ---------------------------------------------------------------------------
# Fat shattering
# ---------------------------------------------------------------------------


def _fat_shattered_bf(H: HypothesisClass, points: tuple, gamma: Fraction) -> bool:
    P = project(H, points)
    rows = P.rows
    n = len(points)
    per_coord = []
    for i in range(n):
        vals = sorted({row[i] for row in rows})
        pairs = [(lo, hi) for lo in vals for hi in vals if hi - lo >= 2 * gamma]
        if not pairs:
            return False
        per_coord.append(pairs)
    for assignment in product(*per_coord):
        ok = True
        for b in range(1 << n):
            hit = False
            for row in rows:
                good = True
                for i in range(n):
                    lo, hi = assignment[i]
                    if (b >> i) & 1:
                        if row[i] < hi:
                            good = False
                            break
                    else:
                        if row[i] > lo:
                            good = False
                            break
                if good:
                    hit = True
                    break
            if not hit:
                ok = False
                break
        if ok:
            return True
    return False


# ---------------------------------------------------------------------------
# Natarajan shattering
# ---------------------------------------------------------------------------


def _natarajan_shattered_bf(H: HypothesisClass, points: tuple, gamma: Fraction,
                            loss: LossFn) -> bool:
    P = project(H, points)
    row_set = set(P.rows)
    n = len(points)
    per_coord = []
    for i in range(n):
        vals = sorted({row[i] for row in P.rows})
        pairs = [(a, b) for ai, a in enumerate(vals) for b in vals[ai + 1:]
                 if loss(a, b) >= 2 * gamma]
        if not pairs:
            return False
        per_coord.append(pairs)
    for assignment in product(*per_coord):
        ok = True
        for b in range(1 << n):
            cube_row = tuple(assignment[i][(b >> i) & 1] for i in range(n))
            if cube_row not in row_set:
                ok = False
                break
        if ok:
            return True
    return False


# ---------------------------------------------------------------------------
# Graph shattering
# ---------------------------------------------------------------------------


def _graph_shattered_bf(H: HypothesisClass, points: tuple, gamma: Fraction,
                        loss: LossFn) -> bool:
    P = project(H, points)
    rows = P.rows
    n = len(points)
    per_coord = [sorted({row[i] for row in rows}) for i in range(n)]
    for f in product(*per_coord):
        ok = True
        for b in range(1 << n):
            hit = False
            for row in rows:
                good = True
                for i in range(n):
                    if (b >> i) & 1:
                        if not loss(row[i], f[i]) > gamma:
                            good = False
                            break
                    else:
                        if row[i] != f[i]:
                            good = False
                            break
                if good:
                    hit = True
                    break
            if not hit:
                ok = False
                break
        if ok:
            return True
    return False


# ---------------------------------------------------------------------------
# Pseudo-cubes by subset enumeration
# ---------------------------------------------------------------------------


def _is_pseudocube_bf(rows: Sequence[tuple], n: int, gamma: Fraction,
                      loss: LossFn) -> bool:
    if not rows:
        return False
    for f in rows:
        for i in range(n):
            edge = [g for g in rows if g[:i] + g[i + 1:] == f[:i] + f[i + 1:]]
            if len(edge) <= 1:
                return False
            for a in range(len(edge)):
                for b in range(a + 1, len(edge)):
                    if not loss(edge[a][i], edge[b][i]) > gamma:
                        return False
    return True


def _ds_shattered_bf(H: HypothesisClass, points: tuple, gamma: Fraction,
                     loss: LossFn) -> bool:
    P = project(H, points)
    rows = P.rows
    n = len(points)
    m = len(rows)
    for mask in range(1, 1 << m):
        subset = [rows[i] for i in range(m) if (mask >> i) & 1]
        if _is_pseudocube_bf(subset, n, gamma, loss):
            return True
    return False


# ---------------------------------------------------------------------------
# One-inclusion hardness by orientation enumeration
# ---------------------------------------------------------------------------


def every_orientation_deep(G: OIGraph, gamma: Fraction, n: int,
                           loss: LossFn = ABSOLUTE_LOSS) -> bool:
    """True when every orientation leaves some vertex with scaled
    out-degree > n/3.  Singleton edges are forced; all assignments of the
    remaining edges are enumerated and the first good orientation refutes.
    """
    multi = [pos for pos, (_, members) in enumerate(G.edges) if len(members) > 1]
    nverts = len(G.rows)

    def good_exists(k: int, out: list) -> bool:
        if max(out, default=0) * 3 > n:
            return False  # already too deep, no completion can recover
        if k == len(multi):
            return True
        (i, _), members = G.edges[multi[k]]
        for u in members:
            bumped = []
            for w in members:
                if w != u and loss(G.rows[u][i], G.rows[w][i]) > gamma:
                    out[w] += 1
                    bumped.append(w)
            if good_exists(k + 1, out):
                for w in bumped:
                    out[w] -= 1
                return True
            for w in bumped:
                out[w] -= 1
        return False

    return not good_exists(0, [0] * nverts)


def _oig_hard_bf(H: HypothesisClass, points: tuple, gamma: Fraction,
                 loss: LossFn) -> bool:
    P = project(H, points)
    return every_orientation_deep(build_oig(P), gamma, len(points), loss)


# ---------------------------------------------------------------------------
# Drivers
# ---------------------------------------------------------------------------

_CHECKS = {
    "fat": lambda H, S, g, loss: _fat_shattered_bf(H, S, g),
    "natarajan": _natarajan_shattered_bf,
    "graph": _graph_shattered_bf,
    "ds": _ds_shattered_bf,
    "oig": _oig_hard_bf,
}


def brute_force_dim(H: HypothesisClass, kind: str, gamma: Fraction,
                    loss: LossFn = ABSOLUTE_LOSS) -> int:
    """Dimension value by flat enumeration over point multisets.

    Shattering is invariant under permutations of the sequence, so one
    representative per multiset is enumerated; the per-sequence checks are
    the naive quantifier replays above.
    """
    check = _CHECKS[kind]
    cap = 3 * H.domain_size - 1 if kind == "oig" else H.domain_size
    for n in range(cap, 0, -1):
        for S in combinations_with_replacement(range(H.domain_size), n):
            if check(H, S, gamma, loss):
                return n
    return 0


# ---------------------------------------------------------------------------
# Online dimension by explicit tree enumeration
# ---------------------------------------------------------------------------


def brute_force_online_dim(H: HypothesisClass,
                           loss: LossFn = ABSOLUTE_LOSS) -> Fraction:
    """Sup over explicit game trees of the minimum path gap-sum.

    Trees are materialized as nested (point, label0, label1, left, right)
    tuples over shrinking version spaces, then scored by walking every
    root-to-leaf path; no memoization is involved.
    """
    rows = H.rows

    def trees(members: tuple):
        yield None  # the empty tree
        if len(members) <= 1:
            return
        for x in range(H.domain_size):
            by_label: dict = {}
            for i in members:
                by_label.setdefault(rows[i][x], []).append(i)
            labels = sorted(by_label)
            for ai in range(len(labels)):
                for bi in range(ai + 1, len(labels)):
                    la, lb = labels[ai], labels[bi]
                    for left in trees(tuple(by_label[la])):
                        for right in trees(tuple(by_label[lb])):
                            yield (x, la, lb, left, right)

    def min_path(tree) -> Fraction:
        if tree is None:
            return Fraction(0)
        x, la, lb, left, right = tree
        gap = loss(la, lb)
        return gap + min(min_path(left), min_path(right))

    best = Fraction(0)
    for tree in trees(tuple(range(len(rows)))):
        score = min_path(tree)
        if score > best:
            best = score
    return best
