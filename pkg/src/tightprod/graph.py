"""Dart-based undirected multigraphs and permutation machinery.

Every edge is a pair of darts (half-edges).  Edge ``e`` owns darts ``2e``
and ``2e+1``; the involution swaps them.  Loops keep both darts at the same
vertex, which makes the "a loop counts twice toward the degree" convention
exact, and makes local bijectivity of graph maps checkable dart by dart.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np


class InternalCheckError(RuntimeError):
    """A guarded internal invariant failed (a bug, not bad user input)."""


class Permutation:
    """A permutation of {0, ..., n-1}, stored by its image array."""

    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        images = tuple(int(x) for x in images)
        n = len(images)
        seen = [False] * n
        for x in images:
            if not 0 <= x < n or seen[x]:
                raise ValueError("images do not define a bijection")
            seen[x] = True
        self.images = images

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(n))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Permutation({list(self.images)})"

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for x, y in enumerate(self.images):
            inv[y] = x
        return Permutation(inv)

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: x -> self(other(x))."""
        if self.n != other.n:
            raise ValueError("size mismatch")
        return Permutation(tuple(self.images[y] for y in other.images))

    def is_identity(self) -> bool:
        return all(y == x for x, y in enumerate(self.images))

    def is_involution(self) -> bool:
        return all(self.images[y] == x for x, y in enumerate(self.images))

    def fixed_points(self) -> list[int]:
        return [x for x, y in enumerate(self.images) if x == y]

    def cycles(self) -> list[list[int]]:
        """Disjoint cycles, each starting at its minimum element."""
        seen = [False] * self.n
        out = []
        for start in range(self.n):
            if seen[start]:
                continue
            cyc = []
            x = start
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = self.images[x]
            out.append(cyc)
        return out


class MultiGraph:
    """Undirected multigraph with loops, represented by darts.

    ``dart_vertex[d]`` is the vertex dart ``d`` sits at; ``involution``
    pairs darts into edges.  Construction always pairs darts ``(2e, 2e+1)``
    for edge ``e``, so edge identity is the dart-pair index.  Immutable.
    """

    __slots__ = ("n", "edges", "dart_vertex", "involution", "_darts_at")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        n = int(n)
        if n < 0:
            raise ValueError("negative vertex count")
        edges = tuple((int(u), int(v)) for u, v in edges)
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
        self.n = n
        self.edges = edges
        dart_vertex = []
        for u, v in edges:
            dart_vertex.append(u)
            dart_vertex.append(v)
        self.dart_vertex = tuple(dart_vertex)
        self.involution = tuple(d ^ 1 for d in range(2 * len(edges)))
        darts_at: list[list[int]] = [[] for _ in range(n)]
        for d, v in enumerate(self.dart_vertex):
            darts_at[v].append(d)
        self._darts_at = tuple(tuple(ds) for ds in darts_at)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def num_darts(self) -> int:
        return 2 * len(self.edges)

    def darts_at(self, v: int) -> tuple[int, ...]:
        return self._darts_at[v]

    def degree(self, v: int) -> int:
        return len(self._darts_at[v])

    def degrees(self) -> list[int]:
        return [len(ds) for ds in self._darts_at]

    def edge_of_dart(self, d: int) -> int:
        return d // 2

    def head(self, d: int) -> int:
        """Other endpoint of dart d's edge."""
        return self.dart_vertex[self.involution[d]]

    def is_loop(self, e: int) -> bool:
        u, v = self.edges[e]
        return u == v

    def neighbors(self, v: int) -> list[int]:
        """Neighbor multiset of v (sorted); a loop contributes v twice."""
        if not 0 <= v < self.n:
            raise ValueError(f"vertex {v} out of range")
        return sorted(self.head(d) for d in self._darts_at[v])

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def __repr__(self) -> str:
        return f"MultiGraph(n={self.n}, m={self.num_edges})"


def adjacency_matrix(g: MultiGraph) -> np.ndarray:
    """Symmetric integer adjacency; a loop adds 2 on the diagonal, so row
    sums equal degrees."""
    a = np.zeros((g.n, g.n), dtype=np.int64)
    for d in range(g.num_darts):
        a[g.dart_vertex[d], g.head(d)] += 1
    return a


@dataclass(frozen=True)
class PermutationGraph:
    """Generators (sigma_1..sigma_d) plus an optional fixed-point-free
    pairing; presents a 2d-regular (or 2d+1-regular) multigraph."""

    n: int
    generators: tuple[Permutation, ...]
    pairing: Optional[Permutation] = None

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        for p in self.generators:
            if p.n != self.n:
                raise ValueError("generator size mismatch")
        if self.pairing is not None:
            _check_pairing(self.pairing, self.n)

    @property
    def d(self) -> int:
        return len(self.generators)

    @property
    def regularity(self) -> int:
        return 2 * self.d + (1 if self.pairing is not None else 0)


def _check_pairing(p: Permutation, n: int) -> None:
    if p.n != n:
        raise ValueError("pairing size mismatch")
    if not p.is_involution():
        raise ValueError("pairing is not an involution")
    if p.fixed_points():
        raise ValueError("pairing has a fixed point")


def from_permutations(pg: PermutationGraph) -> MultiGraph:
    """Build the multigraph of a permutation presentation.

    Generator i contributes one edge {v, sigma_i(v)} per vertex v (a loop
    when sigma_i fixes v, a parallel pair when it swaps two vertices); the
    pairing contributes each matched pair once.  Degrees come out as
    2*len(generators), plus one if a pairing is present.
    """
    edges = []
    for sigma in pg.generators:
        for v in range(pg.n):
            edges.append((v, sigma(v)))
    if pg.pairing is not None:
        for v in range(pg.n):
            if v < pg.pairing(v):
                edges.append((v, pg.pairing(v)))
    return MultiGraph(pg.n, edges)


def presentation_edge_index(pg: PermutationGraph, i: int, v: int) -> int:
    """Edge id in from_permutations(pg) of generator i's edge at v."""
    return i * pg.n + v


def presentation_pairing_edge_index(pg: PermutationGraph, v: int) -> int:
    """Edge id of the pairing edge covering v (pairing required)."""
    if pg.pairing is None:
        raise ValueError("presentation has no pairing")
    a = min(v, pg.pairing(v))
    count = sum(1 for w in range(a) if w < pg.pairing(w))
    return pg.d * pg.n + count


@dataclass(frozen=True)
class StructuralReport:
    is_regular_of: Optional[int]
    connected: bool
    bipartite: bool
    bridges: tuple[int, ...]
    components: tuple[tuple[int, ...], ...]
    bipartition: Optional[tuple[int, ...]]  # side per vertex when bipartite


def structural_predicates(g: MultiGraph) -> StructuralReport:
    """BFS/DFS facts: regularity, connectivity, bipartiteness, bridges,
    components.  Loops and parallel pairs are never bridges."""
    degs = g.degrees()
    regular = degs[0] if g.n > 0 and len(set(degs)) == 1 else None

    comp = [-1] * g.n
    comps: list[list[int]] = []
    side = [0] * g.n
    bipartite = True
    for start in range(g.n):
        if comp[start] >= 0:
            continue
        idx = len(comps)
        comps.append([start])
        comp[start] = idx
        queue = [start]
        while queue:
            v = queue.pop()
            for d in g.darts_at(v):
                w = g.head(d)
                if w == v:
                    bipartite = False
                    continue
                if comp[w] < 0:
                    comp[w] = idx
                    side[w] = side[v] ^ 1
                    comps[idx].append(w)
                    queue.append(w)
                elif side[w] == side[v]:
                    bipartite = False
    return StructuralReport(
        is_regular_of=regular,
        connected=len(comps) <= 1,
        bipartite=bipartite,
        bridges=tuple(_bridges(g)),
        components=tuple(tuple(sorted(c)) for c in comps),
        bipartition=tuple(side) if bipartite else None,
    )


def _bridges(g: MultiGraph) -> list[int]:
    """Iterative lowlink bridge search on darts; skipping only the entering
    dart means a parallel edge provides the back path, so parallel pairs
    are never reported."""
    disc = [-1] * g.n
    low = [0] * g.n
    bridges = []
    timer = 0
    for root in range(g.n):
        if disc[root] >= 0:
            continue
        # stack entries: (vertex, entering dart, iterator index into darts)
        disc[root] = low[root] = timer
        timer += 1
        stack = [(root, -1, 0)]
        while stack:
            v, enter, i = stack.pop()
            darts = g.darts_at(v)
            advanced = False
            while i < len(darts):
                d = darts[i]
                i += 1
                if d == enter:
                    continue  # only the entering dart; parallels stay live
                w = g.head(d)
                if w == v:
                    continue  # loop: never a bridge, no lowlink effect
                if disc[w] < 0:
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((v, enter, i))
                    stack.append((w, g.involution[d], 0))
                    advanced = True
                    break
                low[v] = min(low[v], disc[w])
            if not advanced and stack:
                pv, penter, _ = stack[-1]
                low[pv] = min(low[pv], low[v])
                if low[v] > disc[pv]:
                    bridges.append(g.edge_of_dart(enter))
    return sorted(bridges)


def standard_two_lift(g: MultiGraph) -> MultiGraph:
    """Bipartite double cover: vertices {0,1} x V; each edge uv lifts to
    (0,u)(1,v) and (1,u)(0,v).  A loop lifts to a parallel pair."""
    lift, _, _ = standard_two_lift_maps(g)
    return lift


def standard_two_lift_maps(
    g: MultiGraph,
) -> tuple[MultiGraph, tuple[int, ...], tuple[int, ...]]:
    """The double cover plus its projection (vertex map, dart map)."""
    n = g.n
    edges = []
    dart_map = []
    for e, (u, v) in enumerate(g.edges):
        edges.append((u, n + v))
        dart_map.extend((2 * e, 2 * e + 1))
        edges.append((n + u, v))
        dart_map.extend((2 * e, 2 * e + 1))
    lift = MultiGraph(2 * n, edges)
    vertex_map = tuple(x % n for x in range(2 * n))
    return lift, vertex_map, tuple(dart_map)


def delete_edges(
    g: MultiGraph, removed: Iterable[int]
) -> tuple[MultiGraph, list[int]]:
    """Graph without the given edge ids, plus the map new edge -> old edge.
    Endpoint order per edge is preserved, so new dart 2e' corresponds to
    old dart 2e."""
    removed = set(removed)
    keep = [e for e in range(g.num_edges) if e not in removed]
    sub = MultiGraph(g.n, [g.edges[e] for e in keep])
    return sub, keep


def induced_subgraph(
    g: MultiGraph, vertices: Sequence[int]
) -> tuple[MultiGraph, list[int], list[int]]:
    """Induced subgraph on the given vertices.

    Returns (subgraph, vertex list, edge map new->old).
    """
    vertices = sorted(set(vertices))
    index = {v: i for i, v in enumerate(vertices)}
    edges = []
    edge_map = []
    for e, (u, v) in enumerate(g.edges):
        if u in index and v in index:
            edges.append((index[u], index[v]))
            edge_map.append(e)
    return MultiGraph(len(vertices), edges), vertices, edge_map


def relabel_vertices(g: MultiGraph, new_of_old: Sequence[int]) -> MultiGraph:
    """Relabel vertices; edge and dart ids are preserved."""
    return MultiGraph(g.n, [(new_of_old[u], new_of_old[v]) for u, v in g.edges])


def cycle_cover_darts(g: MultiGraph, edge_ids: Iterable[int]) -> list[list[int]]:
    """Orient an edge set in which every vertex meets 0 or 2 darts.

    Returns one dart sequence per cycle; each cycle starts at its minimum
    vertex and leaves along its smaller dart, so the output is canonical.
    A loop is a 1-cycle, a parallel pair a 2-cycle.
    """
    darts: dict[int, list[int]] = {}
    for e in edge_ids:
        for d in (2 * e, 2 * e + 1):
            darts.setdefault(g.dart_vertex[d], []).append(d)
    for v, ds in darts.items():
        ds.sort()
        if len(ds) != 2:
            raise InternalCheckError(f"vertex {v} meets {len(ds)} darts, not 0 or 2")
    cycles = []
    visited: set[int] = set()
    for start in sorted(darts):
        if start in visited:
            continue
        cyc = []
        v = start
        leave = darts[v][0]
        while True:
            visited.add(v)
            cyc.append(leave)
            entered = g.involution[leave]
            v = g.head(leave)
            if v == start:
                break
            a, b = darts[v]
            leave = b if a == entered else a
        cycles.append(cyc)
    return cycles


# -- small named graphs used all over the tests and the CLI ----------------


def cycle_graph(n: int) -> MultiGraph:
    if n < 1:
        raise ValueError("cycle needs at least one vertex")
    if n == 1:
        return MultiGraph(1, [(0, 0)])
    if n == 2:
        return MultiGraph(2, [(0, 1), (1, 0)])
    return MultiGraph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> MultiGraph:
    return MultiGraph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def complete_bipartite_graph(a: int, b: int) -> MultiGraph:
    return MultiGraph(a + b, [(u, a + v) for u in range(a) for v in range(b)])


def petersen_graph() -> MultiGraph:
    edges = [(i, (i + 1) % 5) for i in range(5)]
    edges += [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    edges += [(i, 5 + i) for i in range(5)]
    return MultiGraph(10, edges)


def prism_graph() -> MultiGraph:
    """The 3-prism (circular ladder on two triangles)."""
    edges = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)]
    return MultiGraph(6, edges)
