"""Exact computation of the scaled combinatorial dimensions.

Five scale-parameterized dimensions (fat shattering, scaled Natarajan,
scaled graph, scaled DS via pseudo-cubes, scaled one-inclusion-graph) plus
the scale-free online dimension.  Every search returns a certificate that an
independent verifier can re-check straight from the defining quantifiers;
tests pair each search with a brute-force enumerator.

Point sequences follow tuple semantics: repeats are allowed and handled by
the generic shattering checks rather than being filtered out up front.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Optional, Sequence

from .core import (ABSOLUTE_LOSS, ConfigError, HypothesisClass, LossFn,
                   ensure_open_unit, format_rational, project)
from .oig import build_oig, orient_minmax


@dataclass(frozen=True)
class DimensionReport:
    kind: str                       # fat | natarajan | graph | ds | oig | online
    gamma: Optional[Fraction]       # absent for the online dimension
    value: object                   # int, or Fraction for the online dimension
    witness: Optional[dict] = None

    def to_json_dict(self) -> dict:
        def enc(v):
            if isinstance(v, Fraction):
                return format_rational(v)
            if isinstance(v, (list, tuple)):
                return [enc(x) for x in v]
            if isinstance(v, dict):
                return {k: enc(x) for k, x in v.items()}
            return v

        out = {"kind": self.kind, "value": enc(self.value)}
        if self.gamma is not None:
            out["gamma"] = format_rational(self.gamma)
        if self.witness is not None:
            out["witness"] = enc(self.witness)
        return out


# ---------------------------------------------------------------------------
# Pattern-coverage engine shared by fat and graph shattering
# ---------------------------------------------------------------------------


def _cover_dfs(per_coord: list, full_mask: int) -> Optional[list]:
    """Pick one candidate (payload, mask0, mask1) per coordinate so that for
    every sign pattern b the rows surviving ``mask[b_i]`` at every i
    intersect.  Maintains one row bitmask per pattern prefix and prunes on
    the first empty prefix; returns the chosen payloads or None.
    """
    n = len(per_coord)
    chosen: list = [None] * n

    def dfs(k: int, masks: list) -> bool:
        if k == n:
            return True
        for payload, m0, m1 in per_coord[k]:
            nxt = []
            ok = True
            for m in masks:
                a = m & m0
                if not a:
                    ok = False
                    break
                b = m & m1
                if not b:
                    ok = False
                    break
                nxt.append(a)
                nxt.append(b)
            if ok and dfs(k + 1, nxt):
                chosen[k] = payload
                return True
        return False

    return chosen if dfs(0, [full_mask]) else None


def _column(rows: tuple, i: int) -> list:
    return sorted({row[i] for row in rows})


# ---------------------------------------------------------------------------
# Fat shattering
# ---------------------------------------------------------------------------


def fat_shatter_witness(H: HypothesisClass, points: Sequence[int],
                        gamma: Fraction) -> Optional[list]:
    """Thresholds witnessing gamma-fat shattering of the sequence, if any.

    Candidate thresholds are midpoints of value pairs at distance >= 2*gamma
    in the projected coordinate; only the induced high/low row sets matter,
    and any feasible threshold induces sets covered by some midpoint.
    """
    P = project(H, points)
    rows = P.rows
    full = (1 << len(rows)) - 1
    per_coord = []
    for i in range(len(P.points)):
        vals = _column(rows, i)
        cands = []
        seen = set()
        for a in range(len(vals)):
            for b in range(a + 1, len(vals)):
                lo, hi = vals[a], vals[b]
                if hi - lo < 2 * gamma:
                    continue
                s = (lo + hi) / 2
                lo_mask = hi_mask = 0
                for v, row in enumerate(rows):
                    if row[i] <= s - gamma:
                        lo_mask |= 1 << v
                    if row[i] >= s + gamma:
                        hi_mask |= 1 << v
                key = (lo_mask, hi_mask)
                if key in seen:
                    continue
                seen.add(key)
                cands.append((s, lo_mask, hi_mask))
        if not cands:
            return None
        per_coord.append(cands)
    return _cover_dfs(per_coord, full)


def verify_fat_witness(H: HypothesisClass, gamma: Fraction,
                       points: Sequence[int], thresholds: Sequence[Fraction]) -> bool:
    """Re-check the fat-shattering quantifiers directly."""
    points = tuple(points)
    n = len(points)
    for b in range(1 << n):
        found = False
        for row in H.rows:
            ok = True
            for i, p in enumerate(points):
                if (b >> i) & 1:
                    if row[p] < thresholds[i] + gamma:
                        ok = False
                        break
                else:
                    if row[p] > thresholds[i] - gamma:
                        ok = False
                        break
            if ok:
                found = True
                break
        if not found:
            return False
    return True


# ---------------------------------------------------------------------------
# Graph shattering
# ---------------------------------------------------------------------------


def graph_shatter_witness(H: HypothesisClass, points: Sequence[int],
                          gamma: Fraction,
                          loss: LossFn = ABSOLUTE_LOSS) -> Optional[list]:
    """Witness function f for gamma-graph shattering, if any.

    The equality clause on the 0-side forces f(i) to be a realized value of
    the projected coordinate, so candidates range over those values only.
    """
    P = project(H, points)
    rows = P.rows
    full = (1 << len(rows)) - 1
    per_coord = []
    for i in range(len(P.points)):
        cands = []
        for f in _column(rows, i):
            eq_mask = far_mask = 0
            for v, row in enumerate(rows):
                if row[i] == f:
                    eq_mask |= 1 << v
                elif loss(row[i], f) > gamma:
                    far_mask |= 1 << v
            if eq_mask and far_mask:
                cands.append((f, eq_mask, far_mask))
        if not cands:
            return None
        per_coord.append(cands)
    return _cover_dfs(per_coord, full)


def verify_graph_witness(H: HypothesisClass, gamma: Fraction,
                         points: Sequence[int], f: Sequence[Fraction],
                         loss: LossFn = ABSOLUTE_LOSS) -> bool:
    points = tuple(points)
    n = len(points)
    for b in range(1 << n):
        found = False
        for row in H.rows:
            ok = True
            for i, p in enumerate(points):
                if (b >> i) & 1:
                    if not loss(row[p], f[i]) > gamma:
                        ok = False
                        break
                else:
                    if row[p] != f[i]:
                        ok = False
                        break
            if ok:
                found = True
                break
        if not found:
            return False
    return True


# ---------------------------------------------------------------------------
# Natarajan shattering
# ---------------------------------------------------------------------------


def natarajan_shatter_witness(H: HypothesisClass, points: Sequence[int],
                              gamma: Fraction,
                              loss: LossFn = ABSOLUTE_LOSS) -> Optional[tuple]:
    """Per-coordinate label pairs (f, g) whose full cube sits inside the
    projection, if any.  Cube containment forces both values to be realized,
    so candidates come from the projected coordinate values.
    """
    P = project(H, points)
    rows = P.rows
    n = len(P.points)
    prefixes = [set() for _ in range(n + 1)]
    for row in rows:
        for k in range(1, n + 1):
            prefixes[k].add(row[:k])
    per_coord = []
    for i in range(n):
        vals = _column(rows, i)
        pairs = [(a, b)
                 for ai, a in enumerate(vals)
                 for b in vals[ai + 1:]
                 if loss(a, b) >= 2 * gamma]
        if not pairs:
            return None
        per_coord.append(pairs)

    f: list = [None] * n
    g: list = [None] * n

    def dfs(k: int, live: list) -> bool:
        if k == n:
            return True
        for a, b in per_coord[k]:
            nxt = []
            ok = True
            for pref in live:
                pa = pref + (a,)
                pb = pref + (b,)
                if pa not in prefixes[k + 1] or pb not in prefixes[k + 1]:
                    ok = False
                    break
                nxt.append(pa)
                nxt.append(pb)
            if ok and dfs(k + 1, nxt):
                f[k], g[k] = a, b
                return True
        return False

    if dfs(0, [()]):
        return f, g
    return None


def verify_natarajan_witness(H: HypothesisClass, gamma: Fraction,
                             points: Sequence[int], f: Sequence[Fraction],
                             g: Sequence[Fraction],
                             loss: LossFn = ABSOLUTE_LOSS) -> bool:
    points = tuple(points)
    n = len(points)
    if any(loss(f[i], g[i]) < 2 * gamma for i in range(n)):
        return False
    proj_rows = set(project(H, points).rows)
    for b in range(1 << n):
        cube_row = tuple(g[i] if (b >> i) & 1 else f[i] for i in range(n))
        if cube_row not in proj_rows:
            return False
    return True


# ---------------------------------------------------------------------------
# DS shattering via pseudo-cubes
# ---------------------------------------------------------------------------


def _pseudocube_violation(rows: frozenset, n: int, gamma: Fraction,
                          loss: LossFn) -> Optional[tuple]:
    """First violation of the pseudo-cube property in a row set.

    Returns ("singleton", row) if some row's edge in some direction has a
    single member, ("gap", row_a, row_b) for a gamma-close pair sharing an
    edge, or None when the set is a gamma-pseudo-cube.
    """
    ordered = sorted(rows)
    for f in ordered:
        for i in range(n):
            rest = f[:i] + f[i + 1:]
            edge = [g for g in ordered if g[:i] + g[i + 1:] == rest]
            if len(edge) == 1:
                return ("singleton", f)
            for ai in range(len(edge)):
                for bi in range(ai + 1, len(edge)):
                    if loss(edge[ai][i], edge[bi][i]) <= gamma:
                        a, b = sorted((edge[ai], edge[bi]))
                        return ("gap", a, b)
    return None


def ds_pseudocube_witness(H: HypothesisClass, points: Sequence[int],
                          gamma: Fraction,
                          loss: LossFn = ABSOLUTE_LOSS) -> Optional[tuple]:
    """A gamma-pseudo-cube inside the projection, found by backtracking.

    Rows whose edge in some direction is a singleton cannot survive and are
    deleted outright; a gamma-close pair sharing an edge forces a branch
    that deletes the lexicographically smaller row first.  Any non-empty
    fixed point is accepted.
    """
    P = project(H, points)
    n = len(P.points)
    dead: set = set()

    def solve(rows: frozenset) -> Optional[frozenset]:
        while True:
            if not rows or rows in dead:
                return None
            bad = _pseudocube_violation(rows, n, gamma, loss)
            if bad is None:
                return rows
            if bad[0] == "singleton":
                rows = rows - {bad[1]}
                continue
            _, a, b = bad
            got = solve(rows - {a})
            if got is not None:
                return got
            got = solve(rows - {b})
            if got is None:
                dead.add(rows)
            return got

    found = solve(frozenset(P.rows))
    return tuple(sorted(found)) if found is not None else None


def verify_ds_witness(H: HypothesisClass, gamma: Fraction,
                      points: Sequence[int], cube_rows: Sequence[tuple],
                      loss: LossFn = ABSOLUTE_LOSS) -> bool:
    points = tuple(points)
    rows = frozenset(tuple(r) for r in cube_rows)
    if not rows:
        return False
    if not rows <= set(project(H, points).rows):
        return False
    return _pseudocube_violation(rows, len(points), gamma, loss) is None


# ---------------------------------------------------------------------------
# Scaled one-inclusion-graph dimension
# ---------------------------------------------------------------------------


def oig_sequence_is_hard(H: HypothesisClass, points: Sequence[int],
                         gamma: Fraction, loss: LossFn = ABSOLUTE_LOSS) -> bool:
    """True when the min-max scaled out-degree of the full one-inclusion
    graph on the sequence exceeds n/3."""
    P = project(H, points)
    _, max_out = orient_minmax(build_oig(P), gamma, loss)
    return 3 * max_out > len(P.points)


def verify_oig_witness(H: HypothesisClass, gamma: Fraction,
                       points: Sequence[int],
                       loss: LossFn = ABSOLUTE_LOSS) -> bool:
    """Re-check hardness by exhausting orientations rather than by search."""
    from .oracles import every_orientation_deep

    P = project(H, tuple(points))
    return every_orientation_deep(build_oig(P), gamma, len(P.points), loss)


# ---------------------------------------------------------------------------
# Dimension drivers
# ---------------------------------------------------------------------------


def _sequences(domain_size: int, n: int):
    """Candidate sequences of length n, one per multiset of points.

    All shattering notions here are invariant under permuting the sequence
    (relabel the sign patterns accordingly), so one representative per
    multiset suffices.
    """
    return combinations_with_replacement(range(domain_size), n)


def fat_dim(H: HypothesisClass, gamma: Fraction,
            want_witness: bool = False) -> DimensionReport:
    """Largest n admitting thresholds under which all sign patterns are
    realized with a gamma margin.  Repeated points never fat-shatter, so the
    search is capped at the domain size."""
    gamma = ensure_open_unit(Fraction(gamma))
    for n in range(H.domain_size, 0, -1):
        for S in _sequences(H.domain_size, n):
            w = fat_shatter_witness(H, S, gamma)
            if w is not None:
                witness = {"points": list(S), "thresholds": list(w)} if want_witness else None
                return DimensionReport("fat", gamma, n, witness)
    return DimensionReport("fat", gamma, 0, None)


def natarajan_dim(H: HypothesisClass, gamma: Fraction,
                  want_witness: bool = False,
                  loss: LossFn = ABSOLUTE_LOSS) -> DimensionReport:
    gamma = ensure_open_unit(Fraction(gamma))
    for n in range(H.domain_size, 0, -1):
        for S in _sequences(H.domain_size, n):
            w = natarajan_shatter_witness(H, S, gamma, loss)
            if w is not None:
                f, g = w
                witness = {"points": list(S), "f": list(f), "g": list(g)} if want_witness else None
                return DimensionReport("natarajan", gamma, n, witness)
    return DimensionReport("natarajan", gamma, 0, None)


def graph_dim(H: HypothesisClass, gamma: Fraction,
              want_witness: bool = False,
              loss: LossFn = ABSOLUTE_LOSS) -> DimensionReport:
    gamma = ensure_open_unit(Fraction(gamma))
    for n in range(H.domain_size, 0, -1):
        for S in _sequences(H.domain_size, n):
            w = graph_shatter_witness(H, S, gamma, loss)
            if w is not None:
                witness = {"points": list(S), "f": list(w)} if want_witness else None
                return DimensionReport("graph", gamma, n, witness)
    return DimensionReport("graph", gamma, 0, None)


def ds_dim(H: HypothesisClass, gamma: Fraction,
           want_witness: bool = False,
           loss: LossFn = ABSOLUTE_LOSS) -> DimensionReport:
    gamma = ensure_open_unit(Fraction(gamma))
    for n in range(H.domain_size, 0, -1):
        for S in _sequences(H.domain_size, n):
            cube = ds_pseudocube_witness(H, S, gamma, loss)
            if cube is not None:
                witness = {"points": list(S), "cube": [list(r) for r in cube]} if want_witness else None
                return DimensionReport("ds", gamma, n, witness)
    return DimensionReport("ds", gamma, 0, None)


def oig_dim(H: HypothesisClass, gamma: Fraction,
            want_witness: bool = False,
            loss: LossFn = ABSOLUTE_LOSS) -> DimensionReport:
    """Largest n at which some sequence defeats every orientation.

    Out-degrees never exceed the number of points appearing exactly once in
    the sequence, so min-max out-degree > n/3 is impossible once
    n >= 3 * domain_size; that caps the search.
    """
    gamma = ensure_open_unit(Fraction(gamma))
    for n in range(3 * H.domain_size - 1, 0, -1):
        for S in _sequences(H.domain_size, n):
            # Repeated directions have singleton edges, so out-degrees are
            # bounded by the number of points appearing exactly once.
            unique = sum(1 for p in set(S) if S.count(p) == 1)
            if 3 * unique <= n:
                continue
            if oig_sequence_is_hard(H, S, gamma, loss):
                witness = {"points": list(S)} if want_witness else None
                return DimensionReport("oig", gamma, n, witness)
    return DimensionReport("oig", gamma, 0, None)


def online_value(H: HypothesisClass, loss: LossFn = ABSOLUTE_LOSS,
                 memo: Optional[dict] = None) -> Fraction:
    """Online dimension by memoized recursion over version spaces.

    D(V) = 0 when |V| <= 1, else the max over points x and distinct
    realizable label pairs (y, y') of loss(y, y') + min of the two child
    values; the memo is keyed by the hypothesis-index bitset.
    """
    if memo is None:
        memo = {}
    domain = range(H.domain_size)
    rows = H.rows

    def rec(mask: int) -> Fraction:
        got = memo.get(mask)
        if got is not None:
            return got
        if mask & (mask - 1) == 0:
            memo[mask] = Fraction(0)
            return memo[mask]
        members = [i for i in range(len(rows)) if (mask >> i) & 1]
        best = Fraction(0)
        for x in domain:
            groups: dict = {}
            for i in members:
                groups.setdefault(rows[i][x], 0)
                groups[rows[i][x]] |= 1 << i
            labels = sorted(groups)
            for a in range(len(labels)):
                for b in range(a + 1, len(labels)):
                    gap = loss(labels[a], labels[b])
                    val = gap + min(rec(groups[labels[a]]), rec(groups[labels[b]]))
                    if val > best:
                        best = val
        memo[mask] = best
        return best

    return rec((1 << len(rows)) - 1)


def online_dim(H: HypothesisClass, want_witness: bool = False,
               loss: LossFn = ABSOLUTE_LOSS) -> DimensionReport:
    value = online_value(H, loss)
    witness = None
    if want_witness:
        from .online import build_adversary_tree, tree_to_json

        witness = {"tree": tree_to_json(build_adversary_tree(H, loss=loss))}
    return DimensionReport("online", None, value, witness)


_DIM_FUNCS = {
    "fat": fat_dim,
    "natarajan": natarajan_dim,
    "graph": graph_dim,
    "ds": ds_dim,
    "oig": oig_dim,
}


def compute_dimension(H: HypothesisClass, kind: str,
                      gamma: Optional[Fraction] = None,
                      want_witness: bool = False) -> DimensionReport:
    if kind == "online":
        return online_dim(H, want_witness)
    try:
        fn = _DIM_FUNCS[kind]
    except KeyError:
        raise ConfigError(f"unknown dimension kind {kind!r}")
    if gamma is None:
        raise ConfigError(f"dimension {kind!r} needs a gamma scale")
    return fn(H, gamma, want_witness)


def verify_witness(H: HypothesisClass, report: DimensionReport) -> bool:
    """Dispatch a witness certificate to its quantifier-level verifier."""
    w = report.witness
    if w is None:
        raise ConfigError("report carries no witness")
    if report.kind == "fat":
        return verify_fat_witness(H, report.gamma, w["points"], w["thresholds"])
    if report.kind == "natarajan":
        return verify_natarajan_witness(H, report.gamma, w["points"], w["f"], w["g"])
    if report.kind == "graph":
        return verify_graph_witness(H, report.gamma, w["points"], w["f"])
    if report.kind == "ds":
        return verify_ds_witness(H, report.gamma, w["points"],
                                 [tuple(r) for r in w["cube"]])
    if report.kind == "oig":
        return verify_oig_witness(H, report.gamma, w["points"])
    if report.kind == "online":
        from .online import tree_from_json, verify_adversary_tree

        return verify_adversary_tree(H, tree_from_json(w["tree"]), report.value)
    raise ConfigError(f"unknown dimension kind {report.kind!r}")
