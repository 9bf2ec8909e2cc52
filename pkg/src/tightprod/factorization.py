"""Decompositions of regular multigraphs.

Eulerian orientations, 2-factorizations (a 2d-regular graph as d
permutations), maximum matching with blossom shrinking, 1-factorization of
regular bipartite multigraphs, and exact edge-chromatic search for small
inputs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .graph import (
    InternalCheckError,
    MultiGraph,
    Permutation,
    PermutationGraph,
    from_permutations,
)

OUT, IN = True, False


@dataclass(frozen=True)
class EdgeColoring:
    """Proper edge coloring: edge id -> color in {0, ..., num_colors-1}."""

    color_of: dict[int, int]
    num_colors: int

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_colors)]
        for e in sorted(self.color_of):
            out[self.color_of[e]].append(e)
        return out


def edge_coloring_violations(g: MultiGraph, ec: EdgeColoring) -> list[tuple[int, int, int]]:
    """(vertex, edge, edge) triples of equal-colored distinct incident
    edges.  A loop conflicts with the other edges at its vertex, not with
    itself."""
    bad = []
    for e, c in ec.color_of.items():
        if not 0 <= c < ec.num_colors:
            raise ValueError(f"color {c} out of range")
        if not 0 <= e < g.num_edges:
            raise ValueError(f"edge id {e} out of range")
    for v in range(g.n):
        seen: dict[int, int] = {}
        for d in g.darts_at(v):
            e = g.edge_of_dart(d)
            if g.is_loop(e) and d % 2 == 1:
                continue  # count a loop once per vertex
            if e not in ec.color_of:
                continue
            c = ec.color_of[e]
            if c in seen and seen[c] != e:
                bad.append((v, seen[c], e))
            else:
                seen[c] = e
    return bad


def is_proper_edge_coloring(g: MultiGraph, ec: EdgeColoring) -> bool:
    return len(ec.color_of) == g.num_edges and not edge_coloring_violations(g, ec)


def eulerian_orientation(g: MultiGraph) -> list[bool]:
    """Per-dart orientation (True = out) with in-degree = out-degree at
    every vertex.  Requires all degrees even; a loop gets one dart each
    way."""
    for v in range(g.n):
        if g.degree(v) % 2:
            raise ValueError(f"vertex {v} has odd degree {g.degree(v)}")
    m = g.num_edges
    used = [False] * m
    orient = [False] * (2 * m)
    ptr = [0] * g.n
    for start in range(g.n):
        while True:
            darts = g.darts_at(start)
            while ptr[start] < len(darts) and used[g.edge_of_dart(darts[ptr[start]])]:
                ptr[start] += 1
            if ptr[start] >= len(darts):
                break
            v = start
            while True:
                darts_v = g.darts_at(v)
                while ptr[v] < len(darts_v) and used[g.edge_of_dart(darts_v[ptr[v]])]:
                    ptr[v] += 1
                if ptr[v] >= len(darts_v):
                    break  # trail closed back at its start
                d = darts_v[ptr[v]]
                used[g.edge_of_dart(d)] = True
                orient[d] = OUT
                orient[g.involution[d]] = IN
                v = g.head(d)
    return orient


@dataclass(frozen=True)
class TwoFactorization:
    """d permutations whose functional edges reproduce the graph.

    ``edge_info[i][v] = (edge id, dart id at v)`` records which original
    edge realizes factor i's step out of v; cycles are canonically oriented
    (each starts at its minimum vertex, leaving along its smaller dart).
    """

    n: int
    factors: tuple[Permutation, ...]
    edge_info: tuple[tuple[tuple[int, int], ...], ...]

    def permutation_graph(self) -> PermutationGraph:
        return PermutationGraph(self.n, self.factors)

    def factor_edge_sets(self) -> list[list[int]]:
        return [sorted({e for e, _ in info}) for info in self.edge_info]


def two_factorization(g: MultiGraph) -> TwoFactorization:
    """Split a 2d-regular multigraph into d oriented 2-factors.

    Orient Eulerian circuits, split the out/in bipartite graph into d
    perfect matchings, and read each matching as a permutation.
    """
    degs = set(g.degrees())
    if len(degs) > 1 or (degs and next(iter(degs)) % 2):
        raise ValueError("graph is not 2d-regular")
    d = (next(iter(degs)) // 2) if degs else 0
    if g.num_edges == 0:
        return TwoFactorization(g.n, (), ())

    orient = eulerian_orientation(g)
    out_dart_of_edge = [2 * e if orient[2 * e] == OUT else 2 * e + 1 for e in range(g.num_edges)]
    bip_edges = []
    payload = []
    for e, od in enumerate(out_dart_of_edge):
        tail = g.dart_vertex[od]
        head = g.head(od)
        bip_edges.append((tail, g.n + head))
        payload.append((e, od))
    bip = MultiGraph(2 * g.n, bip_edges)
    matchings = regular_bipartite_one_factorization(bip, range(g.n))

    factors = []
    infos = []
    for matching in matchings:
        factor_darts: list[list[int]] = [[] for _ in range(g.n)]
        for be in matching:
            e, _ = payload[be]
            for dd in (2 * e, 2 * e + 1):
                factor_darts[g.dart_vertex[dd]].append(dd)
        images, info = _orient_two_factor(g, factor_darts)
        factors.append(Permutation(images))
        infos.append(tuple(info))
    tf = TwoFactorization(g.n, tuple(factors), tuple(infos))
    if len(tf.factors) != d:
        raise InternalCheckError("factor count mismatch")
    return tf


def _orient_two_factor(
    g: MultiGraph, factor_darts: list[list[int]]
) -> tuple[list[int], list[tuple[int, int]]]:
    """Canonically orient a 2-regular spanning dart set into a permutation."""
    n = g.n
    images = [-1] * n
    info: list[tuple[int, int]] = [(-1, -1)] * n
    for v, ds in enumerate(factor_darts):
        ds.sort()
        if len(ds) != 2:
            raise InternalCheckError("factor is not 2-regular")
    for start in range(n):
        if images[start] >= 0:
            continue
        leave = factor_darts[start][0]
        v = start
        while True:
            images[v] = g.head(leave)
            info[v] = (g.edge_of_dart(leave), leave)
            entered = g.involution[leave]
            v = g.head(leave)
            if images[v] >= 0:
                break
            a, b = factor_darts[v]
            leave = b if a == entered else a
    return images, info


def regular_bipartite_one_factorization(
    g: MultiGraph, left: Iterable[int]
) -> list[list[int]]:
    """Split a k-regular bipartite multigraph into k perfect matchings
    (lists of edge ids)."""
    left_set = set(left)
    degs = set(g.degrees())
    if len(degs) != 1:
        raise ValueError("graph is not regular")
    k = next(iter(degs))
    for u, v in g.edges:
        if (u in left_set) == (v in left_set):
            raise ValueError("edge inside one side: graph not bipartite as given")
    live = set(range(g.num_edges))
    out = []
    for _ in range(k):
        matching = _bipartite_perfect_matching(g, sorted(left_set), live)
        if matching is None:
            raise InternalCheckError("regular bipartite graph refused a perfect matching")
        out.append(sorted(matching))
        live -= set(matching)
    if live:
        raise InternalCheckError("leftover edges after 1-factorization")
    return out


def _bipartite_perfect_matching(
    g: MultiGraph, left: Sequence[int], live: set[int]
) -> Optional[list[int]]:
    """Kuhn augmenting paths over live edge ids; deterministic order."""
    adj: dict[int, list[int]] = {v: [] for v in left}
    for e in sorted(live):
        u, w = g.edges[e]
        if u in adj:
            adj[u].append(e)
        else:
            adj[w].append(e)
    match_right: dict[int, int] = {}  # right vertex -> edge id
    match_left: dict[int, int] = {}

    def augment(v: int, seen: set[int]) -> bool:
        for e in adj[v]:
            u, w = g.edges[e]
            r = w if u == v else u
            if r in seen:
                continue
            seen.add(r)
            if r not in match_right or augment(g_other(match_right[r], r), seen):
                match_right[r] = e
                match_left[v] = e
                return True
        return False

    def g_other(e: int, r: int) -> int:
        u, w = g.edges[e]
        return w if u == r else u

    for v in left:
        if v not in match_left and not augment(v, set()):
            return None
    return list(match_left.values())


# -- maximum matching in general multigraphs --------------------------------


def max_matching(g: MultiGraph) -> list[int]:
    """Maximum-cardinality matching via augmenting paths with blossom
    shrinking.  Parallel edges collapse to one candidate; loops never
    match.  Returns a sorted list of edge ids."""
    rep: dict[tuple[int, int], int] = {}
    for e, (u, v) in enumerate(g.edges):
        if u == v:
            continue
        key = (min(u, v), max(u, v))
        if key not in rep:
            rep[key] = e
    adj: list[list[int]] = [[] for _ in range(g.n)]
    for (u, v) in sorted(rep):
        adj[u].append(v)
        adj[v].append(u)
    mate = _blossom(g.n, adj)
    out = []
    for u in range(g.n):
        v = mate[u]
        if v > u:
            out.append(rep[(u, v)])
    return sorted(out)


def _blossom(n: int, adj: list[list[int]]) -> list[int]:
    """Classic O(V^3) blossom algorithm; returns mate array (-1 single)."""
    mate = [-1] * n
    parent = [-1] * n
    base = list(range(n))
    in_queue = [False] * n
    in_blossom = [False] * n

    def lca(a: int, b: int) -> int:
        seen = [False] * n
        x = a
        while True:
            x = base[x]
            seen[x] = True
            if mate[x] == -1:
                break
            x = parent[mate[x]]
        y = b
        while True:
            y = base[y]
            if seen[y]:
                return y
            y = parent[mate[y]]

    def mark_path(v: int, b: int, child: int) -> None:
        while base[v] != b:
            in_blossom[base[v]] = True
            in_blossom[base[mate[v]]] = True
            parent[v] = child
            child = mate[v]
            v = parent[mate[v]]

    def find_augmenting(root: int) -> bool:
        for i in range(n):
            parent[i] = -1
            base[i] = i
            in_queue[i] = False
        queue = deque([root])
        in_queue[root] = True
        while queue:
            v = queue.popleft()
            for to in adj[v]:
                if base[v] == base[to] or mate[v] == to:
                    continue
                if to == root or (mate[to] != -1 and parent[mate[to]] != -1):
                    cur = lca(v, to)
                    for i in range(n):
                        in_blossom[i] = False
                    mark_path(v, cur, to)
                    mark_path(to, cur, v)
                    for i in range(n):
                        if in_blossom[base[i]]:
                            base[i] = cur
                            if not in_queue[i]:
                                in_queue[i] = True
                                queue.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    if mate[to] == -1:
                        while to != -1:
                            pv = parent[to]
                            ppv = mate[pv]
                            mate[to] = pv
                            mate[pv] = to
                            to = ppv
                        return True
                    else:
                        if not in_queue[mate[to]]:
                            in_queue[mate[to]] = True
                            queue.append(mate[to])
        return False

    for v in range(n):
        if mate[v] == -1:
            find_augmenting(v)
    return mate


def is_perfect_matching(g: MultiGraph, edge_ids: Iterable[int]) -> bool:
    seen = [0] * g.n
    for e in edge_ids:
        u, v = g.edges[e]
        if u == v:
            return False
        seen[u] += 1
        seen[v] += 1
    return all(c == 1 for c in seen)


def perfect_matching(g: MultiGraph) -> Optional[list[int]]:
    m = max_matching(g)
    return m if is_perfect_matching(g, m) else None


def matching_involution(g: MultiGraph, edge_ids: Sequence[int]) -> Permutation:
    """The fixed-point-free involution swapping matched endpoints."""
    if not is_perfect_matching(g, edge_ids):
        raise ValueError("edge set is not a perfect matching")
    images = list(range(g.n))
    for e in edge_ids:
        u, v = g.edges[e]
        images[u], images[v] = v, u
    return Permutation(images)


# -- exact edge-chromatic search --------------------------------------------


@dataclass(frozen=True)
class ChromaticSearch:
    """Outcome of the exhaustive coloring search.

    status is one of "found", "absent", "undecided"; the last means the
    node budget ran out before the search space was exhausted.
    """

    status: str
    coloring: Optional[EdgeColoring]
    nodes: int


def exact_edge_chromatic(
    g: MultiGraph, budget: int, node_cap: int = 2_000_000
) -> ChromaticSearch:
    """Proper edge coloring with at most ``budget`` colors, or a proof that
    none exists.  Backtracking with saturation-first ordering and canonical
    new-color introduction; intended for small graphs."""
    m = g.num_edges
    if budget < 0:
        raise ValueError("negative budget")
    if m == 0:
        return ChromaticSearch("found", EdgeColoring({}, 0), 0)

    conflicts: list[set[int]] = [set() for _ in range(m)]
    for v in range(g.n):
        es = sorted({g.edge_of_dart(d) for d in g.darts_at(v)})
        for i, e in enumerate(es):
            for f in es[i + 1 :]:
                conflicts[e].add(f)
                conflicts[f].add(e)

    color = [-1] * m
    nodes = 0

    def pick() -> int:
        best, best_key = -1, None
        for e in range(m):
            if color[e] >= 0:
                continue
            sat = len({color[f] for f in conflicts[e] if color[f] >= 0})
            key = (-sat, -len(conflicts[e]), e)
            if best_key is None or key < best_key:
                best, best_key = e, key
        return best

    def solve(colored: int, max_used: int) -> Optional[bool]:
        nonlocal nodes
        if colored == m:
            return True
        e = pick()
        banned = {color[f] for f in conflicts[e] if color[f] >= 0}
        limit = min(budget - 1, max_used + 1)
        for c in range(limit + 1):
            if c in banned:
                continue
            nodes += 1
            if nodes > node_cap:
                return None
            color[e] = c
            r = solve(colored + 1, max(max_used, c))
            if r is not False:
                return r
            color[e] = -1
        return False

    result = solve(0, -1)
    if result is True:
        ec = EdgeColoring({e: color[e] for e in range(m)}, max(color) + 1)
        if not is_proper_edge_coloring(g, ec):
            raise InternalCheckError("search produced an improper coloring")
        return ChromaticSearch("found", ec, nodes)
    if result is False:
        return ChromaticSearch("absent", None, nodes)
    return ChromaticSearch("undecided", None, nodes)


def reassembled_graph(tf: TwoFactorization) -> MultiGraph:
    return from_permutations(tf.permutation_graph())
