"""Semi-colorings: definition, validation, and constructions.

A semi-coloring of a graph with maximum degree D labels every edge either
with a solid color i in [D] or with an unordered pair {i,j} ("bright").
At every vertex the total weight of each color is at most 1 (bright edges
weigh 1/2 per member, loops count both darts), and each bright pair appears
0 or 2 times.  The edges of a fixed bright pair therefore decompose into
vertex-disjoint cycles.

Includes the constructive subcubic algorithm, the standard regular-family
constructions, a 4-edge-coloring of cubic graphs derived from a
semi-coloring, and the class-1 classifier gadget.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .factorization import (
    EdgeColoring,
    is_perfect_matching,
    is_proper_edge_coloring,
    perfect_matching,
    two_factorization,
)
from .graph import (
    InternalCheckError,
    MultiGraph,
    cycle_cover_darts,
    delete_edges,
    induced_subgraph,
    structural_predicates,
)


@dataclass(frozen=True)
class SemiColor:
    """Either solid(i) or bright({i,j}); members is (i,) or (i,j) sorted."""

    members: tuple[int, ...]

    def __post_init__(self):
        m = self.members
        if len(m) == 1:
            if m[0] < 1:
                raise ValueError("solid color must be positive")
        elif len(m) == 2:
            if m[0] == m[1]:
                raise ValueError("bright pair members must be distinct")
            if m != tuple(sorted(m)) or m[0] < 1:
                raise ValueError("bright pair must be sorted and positive")
        else:
            raise ValueError("a semi-color has one or two members")

    @classmethod
    def solid(cls, i: int) -> "SemiColor":
        return cls((i,))

    @classmethod
    def bright(cls, i: int, j: int) -> "SemiColor":
        return cls(tuple(sorted((i, j))))

    @property
    def is_bright(self) -> bool:
        return len(self.members) == 2

    def renamed(self, perm: dict[int, int]) -> "SemiColor":
        return SemiColor(tuple(sorted(perm.get(i, i) for i in self.members)))

    def __repr__(self) -> str:
        if self.is_bright:
            return f"bright{self.members}"
        return f"solid({self.members[0]})"


@dataclass(frozen=True)
class SemiColoring:
    graph: MultiGraph
    delta: int
    color_of: dict[int, SemiColor]


@dataclass(frozen=True)
class SemiColoringReport:
    ok: bool
    uncolored: tuple[int, ...]
    weight_violations: tuple[tuple[int, int, int], ...]  # (vertex, color, 2*weight)
    parity_violations: tuple[tuple[int, tuple[int, int], int], ...]
    bright_cycles: Optional[dict[tuple[int, int], list[list[int]]]]


def validate_semi_coloring(sc: SemiColoring) -> SemiColoringReport:
    """Check both defining conditions vertex by vertex and decompose each
    bright pair into cycles."""
    g = sc.graph
    for e, col in sc.color_of.items():
        if not 0 <= e < g.num_edges:
            raise ValueError(f"edge id {e} out of range")
        if any(i > sc.delta for i in col.members):
            raise ValueError(f"color index above delta={sc.delta} on edge {e}")
    uncolored = tuple(e for e in range(g.num_edges) if e not in sc.color_of)

    weight_bad = []
    parity_bad = []
    for v in range(g.n):
        twice_weight: dict[int, int] = {}
        pair_count: dict[tuple[int, int], int] = {}
        for d in g.darts_at(v):
            col = sc.color_of.get(g.edge_of_dart(d))
            if col is None:
                continue
            if col.is_bright:
                for i in col.members:
                    twice_weight[i] = twice_weight.get(i, 0) + 1
                pair_count[col.members] = pair_count.get(col.members, 0) + 1
            else:
                i = col.members[0]
                twice_weight[i] = twice_weight.get(i, 0) + 2
        for i, w2 in sorted(twice_weight.items()):
            if w2 > 2:
                weight_bad.append((v, i, w2))
        for pair, c in sorted(pair_count.items()):
            if c not in (0, 2):
                parity_bad.append((v, pair, c))

    cycles = None
    if not parity_bad and not uncolored:
        cycles = {}
        by_pair: dict[tuple[int, int], list[int]] = {}
        for e, col in sc.color_of.items():
            if col.is_bright:
                by_pair.setdefault(col.members, []).append(e)
        for pair, es in sorted(by_pair.items()):
            cycles[pair] = _edge_set_cycles(g, es)
    ok = not uncolored and not weight_bad and not parity_bad
    return SemiColoringReport(ok, uncolored, tuple(weight_bad), tuple(parity_bad), cycles)


def _edge_set_cycles(g: MultiGraph, edge_ids: Sequence[int]) -> list[list[int]]:
    """Cycle decomposition of a bright pair's edge set (ordered edge ids)."""
    return [[g.edge_of_dart(d) for d in cyc] for cyc in cycle_cover_darts(g, edge_ids)]


# -- subcubic construction ---------------------------------------------------


def semi_color_subcubic(g: MultiGraph) -> SemiColoring:
    """Semi-color any multigraph with maximum degree at most 3.

    Bridges are split off and recolored at the junction; bridgeless pieces
    get a perfect-matching coloring, with a doubling trick and bright-path
    repairs when several degree-2 vertices are present.
    """
    if g.max_degree() > 3:
        raise ValueError(f"maximum degree {g.max_degree()} exceeds 3")
    colors = _semi_color_connected_or_split(g)
    sc = SemiColoring(g, 3, colors)
    report = validate_semi_coloring(sc)
    if not report.ok:
        raise InternalCheckError(f"subcubic construction produced invalid coloring: {report}")
    return sc


def _semi_color_connected_or_split(g: MultiGraph) -> dict[int, SemiColor]:
    facts = structural_predicates(g)
    if len(facts.components) > 1:
        colors: dict[int, SemiColor] = {}
        for comp in facts.components:
            sub, _, edge_map = induced_subgraph(g, comp)
            for e_sub, col in _semi_color_connected_or_split(sub).items():
                colors[edge_map[e_sub]] = col
        return colors
    if facts.bridges:
        return _semi_color_with_bridge(g, facts.bridges[0])
    return _semi_color_bridgeless(g)


def _free_color(colors: dict[int, SemiColor], g: MultiGraph, v: int, skip: int) -> int:
    blocked: set[int] = set()
    for d in g.darts_at(v):
        e = g.edge_of_dart(d)
        if e == skip:
            continue
        col = colors.get(e)
        if col is not None:
            blocked.update(col.members)
    for i in (1, 2, 3):
        if i not in blocked:
            return i
    raise InternalCheckError(f"no free color at vertex {v}")


def _semi_color_with_bridge(g: MultiGraph, bridge: int) -> dict[int, SemiColor]:
    u, v = g.edges[bridge]
    rest, edge_map = delete_edges(g, [bridge])
    inner = _semi_color_connected_or_split(rest)
    colors = {edge_map[e]: col for e, col in inner.items()}

    # Rename colors on v's side so one color is free at both endpoints.
    fu = _free_color(colors, g, u, bridge)
    fv = _free_color(colors, g, v, bridge)
    if fu != fv:
        swap = {fu: fv, fv: fu}
        side = _component_vertices(rest, v)
        for e in range(rest.num_edges):
            a, b = rest.edges[e]
            if a in side:
                ge = edge_map[e]
                colors[ge] = colors[ge].renamed(swap)
    colors[bridge] = SemiColor.solid(fu)
    return colors


def _component_vertices(g: MultiGraph, v: int) -> set[int]:
    seen = {v}
    queue = [v]
    while queue:
        x = queue.pop()
        for d in g.darts_at(x):
            w = g.head(d)
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def _semi_color_bridgeless(g: MultiGraph) -> dict[int, SemiColor]:
    """Connected bridgeless graph with degrees in {2, 3} (or a single
    vertex)."""
    if g.num_edges == 0:
        return {}
    deg2 = [v for v in range(g.n) if g.degree(v) == 2]
    if not deg2:
        return _matching_coloring(g, perfect_matching(g))
    if len(deg2) == 1:
        sub, _, edge_map = induced_subgraph(g, [v for v in range(g.n) if v != deg2[0]])
        sub_matching = perfect_matching(sub)
        if sub_matching is None:
            raise InternalCheckError("matching guarantee failed with one degree-2 vertex")
        return _matching_coloring(g, [edge_map[e] for e in sub_matching])

    # Two copies of g with corresponding degree-2 vertices joined give a
    # bridgeless cubic supergraph; color it and restrict.
    n, m = g.n, g.num_edges
    edges = list(g.edges)
    edges += [(u + n, v + n) for u, v in g.edges]
    edges += [(v, v + n) for v in deg2]
    doubled = MultiGraph(2 * n, edges)
    facts = structural_predicates(doubled)
    if facts.is_regular_of != 3 or facts.bridges:
        # The doubling argument should always apply here; surface it loudly
        # rather than patching silently.
        raise InternalCheckError(
            f"doubled supergraph unexpectedly unusable (regular={facts.is_regular_of}, "
            f"bridges={facts.bridges})"
        )
    doubled_colors = _matching_coloring(doubled, perfect_matching(doubled))
    colors = {e: col for e, col in doubled_colors.items() if e < m}
    _repair_bright_paths(g, colors)
    return colors


def _matching_coloring(g: MultiGraph, matching: Optional[list[int]]) -> dict[int, SemiColor]:
    """Perfect matching solid blue, complement bright {2,3}."""
    if matching is None:
        raise InternalCheckError("bridgeless cubic graph without a perfect matching")
    colors: dict[int, SemiColor] = {}
    matched = set(matching)
    for e in range(g.num_edges):
        colors[e] = SemiColor.solid(1) if e in matched else SemiColor.bright(2, 3)
    return colors


def _repair_bright_paths(g: MultiGraph, colors: dict[int, SemiColor]) -> None:
    """Recolor each maximal bright path alternately solid red/green.

    After restricting the doubled coloring, a degree-2 vertex may see a
    single bright edge; such vertices are exactly the endpoints of maximal
    bright paths.  Each recoloring removes two of them and touches nothing
    else, which is asserted.
    """
    bright_darts: dict[int, list[int]] = {}
    for e, col in colors.items():
        if col.is_bright:
            for d in (2 * e, 2 * e + 1):
                bright_darts.setdefault(g.dart_vertex[d], []).append(d)
    for ds in bright_darts.values():
        ds.sort()

    def endpoints() -> list[int]:
        return sorted(v for v, ds in bright_darts.items() if len(ds) == 1)

    cap = g.num_edges + 1
    ends = endpoints()
    for _ in range(cap):
        if not ends:
            return
        v = ends[0]
        path = []
        while bright_darts.get(v):
            d = bright_darts[v][0]
            e = g.edge_of_dart(d)
            path.append(e)
            w = g.head(d)
            bright_darts[v].remove(d)
            bright_darts[w].remove(g.involution[d])
            if not bright_darts[v]:
                del bright_darts[v]
            if not bright_darts.get(w):
                bright_darts.pop(w, None)
            v = w
        for idx, e in enumerate(path):
            colors[e] = SemiColor.solid(2 if idx % 2 == 0 else 3)
        remaining = endpoints()
        if len(remaining) != len(ends) - 2:
            raise InternalCheckError("bright-path repair failed to reduce violations")
        ends = remaining
    raise InternalCheckError("bright-path repair exceeded the iteration cap")


# -- regular families ---------------------------------------------------------


def semi_color_family(
    g: MultiGraph,
    edge_coloring: Optional[EdgeColoring] = None,
    matching: Optional[Sequence[int]] = None,
) -> SemiColoring:
    """Semi-color a graph in one of the standard families: class-1 with a
    supplied proper coloring, 2k-regular, or (2k+1)-regular with a perfect
    matching (supplied or found)."""
    delta = g.max_degree()
    if edge_coloring is not None:
        if edge_coloring.num_colors > delta or not is_proper_edge_coloring(g, edge_coloring):
            raise ValueError("supplied coloring is not a proper maximum-degree coloring")
        colors = {e: SemiColor.solid(c + 1) for e, c in edge_coloring.color_of.items()}
        return SemiColoring(g, delta, colors)

    facts = structural_predicates(g)
    if facts.is_regular_of is None:
        raise ValueError("input in no supported family (not regular, no coloring supplied)")
    r = facts.is_regular_of
    if r % 2 == 0:
        return SemiColoring(g, delta, _even_regular_bright(g, r // 2, 0))

    k = r // 2
    if matching is None:
        matching = perfect_matching(g)
    if matching is None:
        raise ValueError("input in no supported family (odd-regular without a perfect matching)")
    if not is_perfect_matching(g, matching):
        raise ValueError("supplied matching is not perfect")
    colors = {e: SemiColor.solid(2 * k + 1) for e in matching}
    rest, edge_map = delete_edges(g, matching)
    for e, col in _even_regular_bright(rest, k, 0).items():
        colors[edge_map[e]] = col
    return SemiColoring(g, delta, colors)


def _even_regular_bright(g: MultiGraph, k: int, offset: int) -> dict[int, SemiColor]:
    """Color factor i of a 2k-regular graph bright {i, k+i} (1-indexed,
    shifted by offset)."""
    colors: dict[int, SemiColor] = {}
    if k == 0:
        return colors
    tf = two_factorization(g)
    for i, edge_set in enumerate(tf.factor_edge_sets()):
        pair = SemiColor.bright(offset + i + 1, offset + k + i + 1)
        for e in edge_set:
            colors[e] = pair
    return colors


# -- 4-edge-coloring of cubic graphs ------------------------------------------


def vizing4_cubic(g: MultiGraph) -> EdgeColoring:
    """Proper edge coloring of a cubic multigraph with at most 4 colors.

    Semi-color first; then every bright cycle is recolored with its two
    member colors alternately, odd cycles spending the fourth color on
    their last edge.
    """
    facts = structural_predicates(g)
    if facts.is_regular_of != 3:
        raise ValueError("input is not cubic")
    sc = semi_color_subcubic(g)
    report = validate_semi_coloring(sc)
    color_of: dict[int, int] = {}
    for e, col in sc.color_of.items():
        if not col.is_bright:
            color_of[e] = col.members[0] - 1
    assert report.bright_cycles is not None
    for pair, cycles in sorted(report.bright_cycles.items()):
        i, j = pair
        for cyc in cycles:
            for idx, e in enumerate(cyc):
                if idx == len(cyc) - 1 and len(cyc) % 2 == 1:
                    color_of[e] = 3
                else:
                    color_of[e] = (i - 1) if idx % 2 == 0 else (j - 1)
    ec = EdgeColoring(color_of, max(color_of.values(), default=-1) + 1)
    if ec.num_colors > 4 or not is_proper_edge_coloring(g, ec):
        raise InternalCheckError("cubic 4-coloring construction failed")
    return ec


# -- the class-1 classifier gadget --------------------------------------------


@dataclass(frozen=True)
class Gadget:
    """(2k+1)-regular graph whose main pivot lies on no cycle.

    Built from 2k+1 clusters (k copies of K_{2k+2} minus an edge, wired to
    a secondary pivot) around a main pivot; ships with a semi-coloring.
    """

    graph: MultiGraph
    k: int
    main_pivot: int
    secondary_pivots: tuple[int, ...]
    coloring: SemiColoring


def gadget_order(k: int) -> int:
    return (2 * k + 1) * (k * (2 * k + 2) + 1) + 1


def build_gadget(k: int) -> Gadget:
    """Assemble the classifier gadget for odd regularity 2k+1 along with
    its semi-coloring."""
    if k < 1:
        raise ValueError("k must be positive")
    r = 2 * k + 1
    copy_size = 2 * k + 2
    block = k * copy_size + 1  # one cluster: k complete copies + pivot
    n = r * block + 1
    main = r * block

    def copy_vertex(cluster: int, copy: int, local: int) -> int:
        return cluster * block + copy * copy_size + local

    def pivot(cluster: int) -> int:
        return cluster * block + k * copy_size

    edges: list[tuple[int, int]] = []
    cluster_edges: list[list[int]] = [[] for _ in range(r)]
    matching_edges: list[list[int]] = [[] for _ in range(r)]
    for c in range(r):
        for t in range(k):
            for a in range(copy_size):
                for b in range(a + 1, copy_size):
                    if (a, b) == (0, 1):
                        continue  # the removed edge
                    eid = len(edges)
                    edges.append((copy_vertex(c, t, a), copy_vertex(c, t, b)))
                    cluster_edges[c].append(eid)
                    if (a, b) in _copy_matching_pairs(copy_size):
                        matching_edges[c].append(eid)
            for local in (0, 1):
                eid = len(edges)
                edges.append((pivot(c), copy_vertex(c, t, local)))
                cluster_edges[c].append(eid)
    main_edges = []
    for c in range(r):
        eid = len(edges)
        edges.append((main, pivot(c)))
        main_edges.append(eid)

    graph = MultiGraph(n, edges)
    if graph.n != gadget_order(k):
        raise InternalCheckError("gadget order mismatch")
    if structural_predicates(graph).is_regular_of != r:
        raise InternalCheckError("gadget is not (2k+1)-regular")

    colors: dict[int, SemiColor] = {}
    for c in range(r):
        i = c + 1
        colors[main_edges[c]] = SemiColor.solid(i)
        for e in matching_edges[c]:
            colors[e] = SemiColor.solid(i)
        residual_ids = [e for e in cluster_edges[c] if e not in set(matching_edges[c])]
        cluster_vertices = sorted({v for e in residual_ids for v in graph.edges[e]})
        sub, _, edge_map = induced_subgraph(graph, cluster_vertices)
        keep = set(residual_ids)
        sub2, sub_map = delete_edges(sub, [e for e in range(sub.num_edges) if edge_map[e] not in keep])
        remaining = [x for x in range(1, r + 1) if x != i]
        pair_of_factor = [(remaining[2 * j], remaining[2 * j + 1]) for j in range(k)]
        tf = two_factorization(sub2)
        for j, edge_set in enumerate(tf.factor_edge_sets()):
            pi, pj = pair_of_factor[j]
            for e in edge_set:
                colors[edge_map[sub_map[e]]] = SemiColor.bright(pi, pj)

    sc = SemiColoring(graph, r, colors)
    report = validate_semi_coloring(sc)
    if not report.ok:
        raise InternalCheckError("gadget semi-coloring invalid")
    facts = structural_predicates(graph)
    if not set(main_edges) <= set(facts.bridges):
        raise InternalCheckError("main-pivot edges are not all bridges")
    return Gadget(graph, k, main, tuple(pivot(c) for c in range(r)), sc)


def _copy_matching_pairs(copy_size: int) -> set[tuple[int, int]]:
    """Deterministic perfect matching of a complete copy avoiding the
    removed edge (0,1): {0,2}, {1,3}, then consecutive pairs."""
    pairs = {(0, 2), (1, 3)}
    for a in range(4, copy_size, 2):
        pairs.add((a, a + 1))
    return pairs
