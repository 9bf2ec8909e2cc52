"""Tight products of regular multigraphs.

A tight product of g1 and g2 lives on V(g1) x V(g2) and projects onto both
factors by covering maps.  Products are encoded by neighborly-permutation
families: one permutation of V(g2) per oriented edge (dart) of g1, with
inverse symmetry across the two darts of an edge and a local bijection
condition at every (vertex, vertex) pair.

Everything constructed here carries explicit dart-level covering maps and is
re-verified on the way out.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .factorization import (
    ChromaticSearch,
    EdgeColoring,
    exact_edge_chromatic,
    is_perfect_matching,
    is_proper_edge_coloring,
    matching_involution,
    perfect_matching,
    regular_bipartite_one_factorization,
    two_factorization,
    TwoFactorization,
)
from .graph import (
    InternalCheckError,
    MultiGraph,
    Permutation,
    PermutationGraph,
    adjacency_matrix,
    cycle_cover_darts,
    from_permutations,
    relabel_vertices,
    standard_two_lift_maps,
    structural_predicates,
)
from .semicoloring import Gadget, SemiColoring, build_gadget, validate_semi_coloring


# -- covering maps ------------------------------------------------------------


@dataclass(frozen=True)
class CoveringMap:
    """A graph map source -> target given on vertices and darts.

    Valid when the dart map commutes with the involutions, respects
    incidence, and restricts to a bijection between the darts at v and the
    darts at vertex_map[v] for every source vertex v.
    """

    source: MultiGraph
    target: MultiGraph
    vertex_map: tuple[int, ...]
    dart_map: tuple[int, ...]


@dataclass(frozen=True)
class CoverReport:
    ok: bool
    violations: tuple[tuple[str, int], ...]  # (kind, dart or vertex)
    fiber_sizes: tuple[int, ...]
    covering_number: Optional[int]


def verify_covering(cm: CoveringMap) -> CoverReport:
    """Check the covering conditions dart by dart; report the first
    violations, fiber sizes, and the covering number over a connected
    target."""
    src, dst = cm.source, cm.target
    if len(cm.vertex_map) != src.n or len(cm.dart_map) != src.num_darts:
        raise ValueError("vertex/dart map size mismatch")
    for v in cm.vertex_map:
        if not 0 <= v < dst.n:
            raise ValueError("vertex map image out of range")
    for d in cm.dart_map:
        if not 0 <= d < dst.num_darts:
            raise ValueError("dart map image out of range")

    violations: list[tuple[str, int]] = []
    for d in range(src.num_darts):
        if dst.dart_vertex[cm.dart_map[d]] != cm.vertex_map[src.dart_vertex[d]]:
            violations.append(("incidence", d))
            break
    for d in range(src.num_darts):
        if cm.dart_map[src.involution[d]] != dst.involution[cm.dart_map[d]]:
            violations.append(("involution", d))
            break
    for v in range(src.n):
        images = sorted(cm.dart_map[d] for d in src.darts_at(v))
        expected = sorted(dst.darts_at(cm.vertex_map[v]))
        if images != expected:
            violations.append(("local-bijection", v))
            break

    fibers = [0] * dst.n
    for v in cm.vertex_map:
        fibers[v] += 1
    covering_number = None
    if dst.n > 0 and structural_predicates(dst).connected:
        if len(set(fibers)) == 1:
            covering_number = fibers[0]
        else:
            violations.append(("unequal-fibers", 0))
    return CoverReport(not violations, tuple(violations), tuple(fibers), covering_number)


@dataclass(frozen=True)
class TightProduct:
    h: MultiGraph
    proj1: CoveringMap
    proj2: CoveringMap

    @property
    def g1(self) -> MultiGraph:
        return self.proj1.target

    @property
    def g2(self) -> MultiGraph:
        return self.proj2.target

    def vertex(self, v: int, u: int) -> int:
        return v * self.g2.n + u


def standard_two_lift_cover(g: MultiGraph) -> CoveringMap:
    lift, vmap, dmap = standard_two_lift_maps(g)
    return CoveringMap(lift, g, vmap, dmap)


def _check_product(tp: TightProduct) -> TightProduct:
    for name, cm in (("first", tp.proj1), ("second", tp.proj2)):
        report = verify_covering(cm)
        if not report.ok:
            raise InternalCheckError(f"{name} projection failed verification: {report.violations}")
    return tp


# -- neighborly families -------------------------------------------------------


@dataclass(frozen=True)
class NeighborlyFamily:
    """sigma[d] is the permutation of V(g2) attached to the oriented edge
    (dart) d of g1; sigma[d^1] must be its inverse."""

    g1: MultiGraph
    g2: MultiGraph
    sigma: tuple[Permutation, ...]


def family_violations(nf: NeighborlyFamily) -> list[str]:
    """Empty list when all three defining conditions hold."""
    g1, g2 = nf.g1, nf.g2
    if len(nf.sigma) != g1.num_darts:
        return ["size: one permutation per dart of g1 required"]
    if any(p.n != g2.n for p in nf.sigma):
        return ["size: permutations must act on V(g2)"]
    out = []
    adj2 = adjacency_matrix(g2)
    for d, p in enumerate(nf.sigma):
        if any(adj2[u, p(u)] == 0 for u in range(g2.n)):
            out.append(f"neighborly: dart {d} moves a vertex to a non-neighbor")
            break
    for d in range(0, g1.num_darts, 2):
        if nf.sigma[d + 1] != nf.sigma[d].inverse():
            out.append(f"inverse-symmetry: darts {d},{d+1}")
            break
    nbr = [g2.neighbors(u) for u in range(g2.n)]
    for v1 in range(g1.n):
        darts = g1.darts_at(v1)
        for u1 in range(g2.n):
            if sorted(nf.sigma[d](u1) for d in darts) != nbr[u1]:
                out.append(f"local-bijection: vertex {v1} of g1, vertex {u1} of g2")
                return out
    return out


def assemble_product(nf: NeighborlyFamily) -> TightProduct:
    """The unique tight product with the given family; rejects invalid
    families naming the failed condition.

    The projection to g2 resolves parallel edges and loops by splitting
    each multiplicity class: parallel classes through a regular bipartite
    1-factorization, loop classes through a 2-factorization.
    """
    problems = family_violations(nf)
    if problems:
        raise ValueError("invalid neighborly family: " + "; ".join(problems))
    g1, g2 = nf.g1, nf.g2
    n1, n2 = g1.n, g2.n

    edges = []
    for e1 in range(g1.num_edges):
        t, h = g1.edges[e1]
        sig = nf.sigma[2 * e1]
        for u in range(n2):
            edges.append((t * n2 + u, h * n2 + sig(u)))
    hgraph = MultiGraph(n1 * n2, edges)

    dart_map1 = []
    for e1 in range(g1.num_edges):
        for _ in range(n2):
            dart_map1.append(2 * e1)
            dart_map1.append(2 * e1 + 1)
    proj1 = CoveringMap(
        hgraph, g1, tuple(x // n2 for x in range(n1 * n2)), tuple(dart_map1)
    )

    dart_map2 = _synthesize_second_dart_map(nf, hgraph)
    proj2 = CoveringMap(
        hgraph, g2, tuple(x % n2 for x in range(n1 * n2)), tuple(dart_map2)
    )
    return _check_product(TightProduct(hgraph, proj1, proj2))


def _synthesize_second_dart_map(nf: NeighborlyFamily, hgraph: MultiGraph) -> list[int]:
    g1, g2 = nf.g1, nf.g2
    n2 = g2.n

    pair_edges: dict[tuple[int, int], list[int]] = {}
    loop_edges: dict[int, list[int]] = {}
    for e2, (a, b) in enumerate(g2.edges):
        if a == b:
            loop_edges.setdefault(a, []).append(e2)
        else:
            pair_edges.setdefault((min(a, b), max(a, b)), []).append(e2)

    # H-edge ids grouped by the g2 vertex pair they must map to.
    groups_pair: dict[tuple[int, int], list[int]] = {}
    groups_loop: dict[int, list[int]] = {}
    for e1 in range(g1.num_edges):
        sig = nf.sigma[2 * e1]
        for u in range(n2):
            he = e1 * n2 + u
            w = sig(u)
            if w == u:
                groups_loop.setdefault(u, []).append(he)
            else:
                groups_pair.setdefault((min(u, w), max(u, w)), []).append(he)

    dart_map2 = [-1] * hgraph.num_darts

    def fiber(x: int) -> int:
        return x % n2

    def dart_of_edge_at(e2: int, vertex: int) -> int:
        a, _ = g2.edges[e2]
        return 2 * e2 if a == vertex else 2 * e2 + 1

    for (a, b), h_edges in sorted(groups_pair.items()):
        candidates = pair_edges.get((a, b), [])
        if len(candidates) == 1:
            e2 = candidates[0]
            for he in h_edges:
                x, y = hgraph.edges[he]
                da = 2 * he if fiber(x) == a else 2 * he + 1
                dart_map2[da] = dart_of_edge_at(e2, a)
                dart_map2[da ^ 1] = dart_of_edge_at(e2, b)
            continue
        if not candidates:
            raise InternalCheckError("family image misses the target edge set")
        # Regular bipartite split: left copy of V(g1) for fiber a, right for b.
        aux_edges = []
        for he in h_edges:
            x, y = hgraph.edges[he]
            va = x // n2 if fiber(x) == a else y // n2
            vb = y // n2 if fiber(y) == b else x // n2
            aux_edges.append((va, g1.n + vb))
        aux = MultiGraph(2 * g1.n, aux_edges)
        for j, matching in enumerate(regular_bipartite_one_factorization(aux, range(g1.n))):
            e2 = candidates[j]
            for idx in matching:
                he = h_edges[idx]
                x, y = hgraph.edges[he]
                da = 2 * he if fiber(x) == a else 2 * he + 1
                dart_map2[da] = dart_of_edge_at(e2, a)
                dart_map2[da ^ 1] = dart_of_edge_at(e2, b)

    for a, h_edges in sorted(groups_loop.items()):
        candidates = loop_edges.get(a, [])
        if not candidates:
            raise InternalCheckError("family fixes a vertex with no loop on it")
        # 2m-regular auxiliary graph on V(g1); factor j feeds loop j.
        aux = MultiGraph(g1.n, [(hgraph.edges[he][0] // n2, hgraph.edges[he][1] // n2) for he in h_edges])
        tf = two_factorization(aux)
        if len(tf.factors) != len(candidates):
            raise InternalCheckError("loop multiplicity mismatch in synthesis")
        for j, info in enumerate(tf.edge_info):
            e2 = candidates[j]
            for v in range(aux.n):
                aux_edge, aux_out = info[v]
                he = h_edges[aux_edge]
                h_out = 2 * he + (aux_out % 2)
                dart_map2[h_out] = 2 * e2
                dart_map2[h_out ^ 1] = 2 * e2 + 1

    if any(d < 0 for d in dart_map2):
        raise InternalCheckError("dart synthesis left unassigned darts")
    return dart_map2


def family_from_product(tp: TightProduct) -> NeighborlyFamily:
    """Extract the permutation attached to every oriented edge of g1."""
    g1, g2 = tp.g1, tp.g2
    h = tp.h
    position: dict[tuple[int, int], int] = {}
    for x in range(h.n):
        key = (tp.proj1.vertex_map[x], tp.proj2.vertex_map[x])
        if key in position:
            raise ValueError("product vertex set is not V(g1) x V(g2)")
        position[key] = x
    # (H-vertex, g1 dart) -> H dart
    lookup: dict[tuple[int, int], int] = {}
    for delta in range(h.num_darts):
        lookup[(h.dart_vertex[delta], tp.proj1.dart_map[delta])] = delta
    sigma = []
    for d in range(g1.num_darts):
        v = g1.dart_vertex[d]
        images = []
        for u in range(g2.n):
            x = position[(v, u)]
            delta = lookup.get((x, d))
            if delta is None:
                raise ValueError("product lacks a dart over an edge of g1")
            y = h.dart_vertex[h.involution[delta]]
            images.append(tp.proj2.vertex_map[y])
        sigma.append(Permutation(images))
    nf = NeighborlyFamily(g1, g2, tuple(sigma))
    problems = family_violations(nf)
    if problems:
        raise InternalCheckError("extracted family invalid: " + "; ".join(problems))
    return nf


def swap_product(tp: TightProduct) -> TightProduct:
    """The same product with the two factors exchanged."""
    n1, n2 = tp.g1.n, tp.g2.n
    tau = [0] * (n1 * n2)
    for v in range(n1):
        for u in range(n2):
            tau[v * n2 + u] = u * n1 + v
    h2 = relabel_vertices(tp.h, tau)

    def remap(cm: CoveringMap) -> CoveringMap:
        vmap = [0] * len(cm.vertex_map)
        for old, new in enumerate(tau):
            vmap[new] = cm.vertex_map[old]
        return CoveringMap(h2, cm.target, tuple(vmap), cm.dart_map)

    return _check_product(TightProduct(h2, remap(tp.proj2), remap(tp.proj1)))


# -- constructive existence routes --------------------------------------------


@dataclass(frozen=True)
class _Presentation:
    """A graph together with generator permutations and, per (generator,
    vertex), the edge and dart realizing that step in the original graph."""

    graph: MultiGraph
    perms: tuple[Permutation, ...]
    edge_info: tuple[tuple[tuple[int, int], ...], ...]
    pairing: Optional[Permutation] = None
    pairing_info: Optional[tuple[tuple[int, int], ...]] = None


def _presentation_of_factorization(g: MultiGraph, tf: TwoFactorization) -> _Presentation:
    return _Presentation(g, tf.factors, tf.edge_info)


def _presentation_of_permutation_graph(pg: PermutationGraph) -> _Presentation:
    g = from_permutations(pg)
    edge_info = []
    for i in range(pg.d):
        row = []
        for v in range(pg.n):
            e = i * pg.n + v
            row.append((e, 2 * e))
        edge_info.append(tuple(row))
    pairing_info = None
    if pg.pairing is not None:
        pairing_info_list = [(-1, -1)] * pg.n
        count = 0
        for v in range(pg.n):
            w = pg.pairing(v)
            if v < w:
                e = pg.d * pg.n + count
                count += 1
                pairing_info_list[v] = (e, 2 * e)
                pairing_info_list[w] = (e, 2 * e + 1)
        pairing_info = tuple(pairing_info_list)
    return _Presentation(g, pg.generators, tuple(edge_info), pg.pairing, pairing_info)


def _presentation_product(p1: _Presentation, p2: _Presentation) -> TightProduct:
    """Tight product of two graphs presented by matching generator lists:
    generator i acts as (sigma_i, pi_i) on the vertex pairs; pairings, when
    present on both sides, combine the same way but each matched pair
    contributes one edge."""
    if len(p1.perms) != len(p2.perms):
        raise ValueError("presentations have different generator counts")
    if (p1.pairing is None) != (p2.pairing is None):
        raise ValueError("presentations disagree about the pairing")
    n1, n2 = p1.graph.n, p2.graph.n
    big = n1 * n2
    combined = []
    for s, p in zip(p1.perms, p2.perms):
        combined.append(
            Permutation(tuple(s(v) * n2 + p(u) for v in range(n1) for u in range(n2)))
        )
    pairing = None
    if p1.pairing is not None:
        assert p2.pairing is not None
        pairing = Permutation(
            tuple(p1.pairing(v) * n2 + p2.pairing(u) for v in range(n1) for u in range(n2))
        )
    pg = PermutationGraph(big, tuple(combined), pairing)
    h = from_permutations(pg)

    dmap1 = [-1] * h.num_darts
    dmap2 = [-1] * h.num_darts
    d = pg.d
    for i in range(d):
        for v in range(n1):
            for u in range(n2):
                he = i * big + v * n2 + u
                e1, d1 = p1.edge_info[i][v]
                e2, d2 = p2.edge_info[i][u]
                dmap1[2 * he] = d1
                dmap1[2 * he + 1] = d1 ^ 1
                dmap2[2 * he] = d2
                dmap2[2 * he + 1] = d2 ^ 1
    if pairing is not None:
        count = 0
        for x in range(big):
            y = pairing(x)
            if x < y:
                he = d * big + count
                count += 1
                v, u = divmod(x, n2)
                e1, d1 = p1.pairing_info[v]
                e2, d2 = p2.pairing_info[u]
                dmap1[2 * he] = d1
                dmap1[2 * he + 1] = d1 ^ 1
                dmap2[2 * he] = d2
                dmap2[2 * he + 1] = d2 ^ 1

    proj1 = CoveringMap(h, p1.graph, tuple(x // n2 for x in range(big)), tuple(dmap1))
    proj2 = CoveringMap(h, p2.graph, tuple(x % n2 for x in range(big)), tuple(dmap2))
    return _check_product(TightProduct(h, proj1, proj2))


def product_even_regular(g1: MultiGraph, g2: MultiGraph) -> TightProduct:
    """Tight product of two 2d-regular graphs of equal d, via
    2-factorizations of both."""
    r1 = structural_predicates(g1).is_regular_of
    r2 = structural_predicates(g2).is_regular_of
    if r1 is None or r2 is None or r1 != r2:
        raise ValueError("factors must be regular with equal degree")
    if r1 % 2:
        raise ValueError("degree must be even; use the matching route for odd degree")
    return _presentation_product(
        _presentation_of_factorization(g1, two_factorization(g1)),
        _presentation_of_factorization(g2, two_factorization(g2)),
    )


def product_odd_matching(
    g1: MultiGraph, g2: MultiGraph, m1: Sequence[int], m2: Sequence[int]
) -> TightProduct:
    """Tight product of two (2d+1)-regular graphs from perfect matchings:
    the matchings pair up as the involution generator, the 2d-regular
    remainders are 2-factorized."""
    r1 = structural_predicates(g1).is_regular_of
    r2 = structural_predicates(g2).is_regular_of
    if r1 is None or r2 is None or r1 != r2 or r1 % 2 == 0:
        raise ValueError("factors must be odd-regular with equal degree")
    if not is_perfect_matching(g1, m1) or not is_perfect_matching(g2, m2):
        raise ValueError("matchings are not perfect")
    return _presentation_product(
        _matching_presentation(g1, m1), _matching_presentation(g2, m2)
    )


def _matching_presentation(g: MultiGraph, matching: Sequence[int]) -> _Presentation:
    pairing = matching_involution(g, matching)
    pairing_info_list: list[tuple[int, int]] = [(-1, -1)] * g.n
    for e in matching:
        u, v = g.edges[e]
        pairing_info_list[u] = (e, 2 * e)
        pairing_info_list[v] = (e, 2 * e + 1)
    rest_ids = [e for e in range(g.num_edges) if e not in set(matching)]
    sub_edges = [g.edges[e] for e in rest_ids]
    sub = MultiGraph(g.n, sub_edges)
    tf = two_factorization(sub)
    # Map factor info back to the original edge/dart ids.
    edge_info = []
    for info in tf.edge_info:
        row = []
        for v in range(g.n):
            e_sub, d_sub = info[v]
            e_orig = rest_ids[e_sub]
            row.append((e_orig, 2 * e_orig + (d_sub % 2)))
        edge_info.append(tuple(row))
    return _Presentation(g, tf.factors, tuple(edge_info), pairing, tuple(pairing_info_list))


def product_via_semicoloring(
    g1: MultiGraph,
    coloring: SemiColoring,
    g2: MultiGraph,
    one_factorization: Sequence[Sequence[int]],
) -> TightProduct:
    """Tight product of a semi-colored odd-regular graph with a class-1
    graph given by a 1-factorization.

    Solid color i rides the involution of factor i; a bright pair {i,j}
    rides the oriented cycles of factor i union factor j, forward along
    the bright cycles of g1 and backward against them.
    """
    r = structural_predicates(g1).is_regular_of
    r2 = structural_predicates(g2).is_regular_of
    if r is None or r % 2 == 0:
        raise ValueError("first factor must be odd-regular")
    if r2 != r:
        raise ValueError("factors must share the same regularity")
    if coloring.graph is not g1 and coloring.graph.edges != g1.edges:
        raise ValueError("coloring does not belong to the first factor")
    if coloring.delta != r:
        raise ValueError("coloring palette does not match the regularity")
    report = validate_semi_coloring(coloring)
    if not report.ok:
        raise ValueError("invalid semi-coloring")
    if len(one_factorization) != r:
        raise ValueError(f"need exactly {r} factors in the 1-factorization")
    seen: set[int] = set()
    for f in one_factorization:
        if not is_perfect_matching(g2, f):
            raise ValueError("a factor is not a perfect matching")
        if seen & set(f):
            raise ValueError("factors overlap")
        seen |= set(f)
    if len(seen) != g2.num_edges:
        raise ValueError("factors do not cover the second graph")

    involutions = {i + 1: matching_involution(g2, f) for i, f in enumerate(one_factorization)}
    pair_perm: dict[tuple[int, int], Permutation] = {}
    for i in range(1, r + 1):
        for j in range(i + 1, r + 1):
            union = list(one_factorization[i - 1]) + list(one_factorization[j - 1])
            images = [-1] * g2.n
            for cyc in cycle_cover_darts(g2, union):
                for drt in cyc:
                    images[g2.dart_vertex[drt]] = g2.head(drt)
            pair_perm[(i, j)] = Permutation(images)

    sigma: list[Optional[Permutation]] = [None] * g1.num_darts
    for e, col in coloring.color_of.items():
        if not col.is_bright:
            inv = involutions[col.members[0]]
            sigma[2 * e] = inv
            sigma[2 * e + 1] = inv
    assert report.bright_cycles is not None
    for pair, _cycles in report.bright_cycles.items():
        perm = pair_perm[pair]
        edge_ids = [e for e, col in coloring.color_of.items() if col.members == pair]
        for cyc in cycle_cover_darts(g1, edge_ids):
            for drt in cyc:
                sigma[drt] = perm
                sigma[g1.involution[drt]] = perm.inverse()
    if any(s is None for s in sigma):
        raise InternalCheckError("uncolored darts after family construction")
    return assemble_product(NeighborlyFamily(g1, g2, tuple(sigma)))  # type: ignore[arg-type]


def neighborly_permutation(g: MultiGraph) -> Permutation:
    """A permutation moving every vertex to one of its neighbors, from a
    perfect matching of the standard 2-lift."""
    facts = structural_predicates(g)
    if facts.is_regular_of is None:
        raise ValueError("graph must be regular")
    if facts.is_regular_of == 0 and g.n > 0:
        raise ValueError("an edgeless graph has no neighborly permutation")
    lift, vmap, _ = standard_two_lift_maps(g)
    matching = perfect_matching(lift)
    if matching is None:
        raise InternalCheckError("regular bipartite 2-lift lacks a perfect matching")
    images = [-1] * g.n
    for e in matching:
        x, y = lift.edges[e]
        if x >= g.n:
            x, y = y, x
        images[vmap[x]] = vmap[y]
    perm = Permutation(images)
    adj = adjacency_matrix(g)
    if any(adj[v, perm(v)] == 0 for v in range(g.n)):
        raise InternalCheckError("two-lift matching produced a non-neighborly permutation")
    return perm


# -- the classifier and its consequences ---------------------------------------


@dataclass(frozen=True)
class ClassifierResult:
    status: str  # "class-1" | "class-2" | "undecided"
    coloring: Optional[EdgeColoring]
    product: Optional[TightProduct]  # product of (g, gadget) when class-1
    search: Optional[ChromaticSearch]


def extract_coloring_from_gadget_product(tp: TightProduct, gadget: Gadget) -> EdgeColoring:
    """Read a proper (2k+1)-edge-coloring of g1 off a tight product with
    the gadget: the color of an edge is where its permutation sends the
    main pivot."""
    g = tp.g1
    if tp.g2.edges != gadget.graph.edges or tp.g2.n != gadget.graph.n:
        raise ValueError("second factor is not the classifier gadget")
    nf = family_from_product(tp)
    pivot_of_color = {p: c for c, p in enumerate(gadget.secondary_pivots)}
    color_of = {}
    for e in range(g.num_edges):
        w_fwd = nf.sigma[2 * e](gadget.main_pivot)
        w_bwd = nf.sigma[2 * e + 1](gadget.main_pivot)
        if w_fwd != w_bwd:
            raise InternalCheckError("pivot image differs across the two darts")
        if w_fwd not in pivot_of_color:
            raise InternalCheckError("pivot image is not a secondary pivot")
        color_of[e] = pivot_of_color[w_fwd]
    ec = EdgeColoring(color_of, 2 * gadget.k + 1)
    if not is_proper_edge_coloring(g, ec):
        raise InternalCheckError("extracted coloring is not proper")
    return ec


def classify_class1_via_gadget(
    g: MultiGraph,
    k: int,
    coloring: Optional[EdgeColoring] = None,
    product: Optional[TightProduct] = None,
    node_cap: int = 2_000_000,
) -> ClassifierResult:
    """Class-1 test for (2k+1)-regular graphs through the gadget.

    Forward: a proper (2k+1)-coloring (supplied or found exhaustively)
    yields a verified tight product with the gadget, and the coloring is
    re-extracted from that product.  Reverse: a supplied product yields the
    coloring directly.  A proven coloring absence reports class-2; an
    exhausted search budget reports undecided.
    """
    r = 2 * k + 1
    if structural_predicates(g).is_regular_of != r:
        raise ValueError(f"graph is not {r}-regular")
    gadget = build_gadget(k)
    if product is not None:
        ec = extract_coloring_from_gadget_product(product, gadget)
        return ClassifierResult("class-1", ec, product, None)

    search = None
    if coloring is None:
        search = exact_edge_chromatic(g, r, node_cap)
        if search.status == "absent":
            return ClassifierResult("class-2", None, None, search)
        if search.status == "undecided":
            return ClassifierResult("undecided", None, None, search)
        coloring = search.coloring
    assert coloring is not None
    if coloring.num_colors > r or not is_proper_edge_coloring(g, coloring):
        raise ValueError("supplied coloring is not a proper r-edge-coloring")
    classes = coloring.classes()
    tp_gadget_first = product_via_semicoloring(gadget.graph, gadget.coloring, g, classes)
    tp = swap_product(tp_gadget_first)
    extracted = extract_coloring_from_gadget_product(tp, gadget)
    return ClassifierResult("class-1", extracted, tp, search)


def bridge_matching_witness(tp: TightProduct, bridge_edge: int) -> list[int]:
    """Perfect matching of g1 read off a bridge of g2: the edges whose
    permutation carries one end of the bridge to the other."""
    g1, g2 = tp.g1, tp.g2
    if bridge_edge not in structural_predicates(g2).bridges:
        raise ValueError(f"edge {bridge_edge} is not a bridge of the second factor")
    u1, u2 = g2.edges[bridge_edge]
    nf = family_from_product(tp)
    matching = []
    for e in range(g1.num_edges):
        fwd = nf.sigma[2 * e](u1) == u2
        bwd = nf.sigma[2 * e + 1](u1) == u2
        if fwd != bwd:
            raise InternalCheckError("bridge membership differs across darts")
        if fwd:
            matching.append(e)
    if not is_perfect_matching(g1, matching):
        raise InternalCheckError("extracted edge set is not a perfect matching")
    return matching


# -- exact decision at toy scale ------------------------------------------------


@dataclass(frozen=True)
class BruteForceResult:
    status: str  # "found" | "absent" | "undecided"
    product: Optional[TightProduct]
    reason: str


def brute_force_tight_product(
    g1: MultiGraph,
    g2: MultiGraph,
    max_g2_vertices: int = 6,
    max_g1_edges: int = 10,
) -> BruteForceResult:
    """Exhaustive search over neighborly-permutation families.

    Backtracks edge by edge over g1, pruning with the running multiset
    constraints of the local bijection condition.  Outside the size caps
    the answer is an explicit "undecided".
    """
    f1 = structural_predicates(g1)
    f2 = structural_predicates(g2)
    if f1.is_regular_of is None or f2.is_regular_of is None or f1.is_regular_of != f2.is_regular_of:
        return BruteForceResult("absent", None, "factors are not regular of equal degree")
    if g1.n == 0 or g2.n == 0:
        return BruteForceResult("absent", None, "empty factor")
    if g2.n > max_g2_vertices or g1.num_edges > max_g1_edges:
        return BruteForceResult("undecided", None, "size caps exceeded")

    adj2 = adjacency_matrix(g2)
    candidates = []
    for images in itertools.permutations(range(g2.n)):
        if all(adj2[u, images[u]] > 0 for u in range(g2.n)):
            candidates.append(Permutation(images))
    if not candidates and g1.num_edges > 0:
        return BruteForceResult("absent", None, "second factor has no neighborly permutation")

    # used[v1][u][w] counts darts at v1 sending u to w; bounded by adj2.
    used = [[[0] * g2.n for _ in range(g2.n)] for _ in range(g1.n)]
    chosen: list[Optional[Permutation]] = [None] * g1.num_edges

    def place(e: int, perm: Permutation, sign: int) -> bool:
        t, h = g1.edges[e]
        inv = perm.inverse()
        touched = []
        ok = True
        for u in range(g2.n):
            for (vv, w) in ((t, perm(u)), (h, inv(u))):
                used[vv][u][w] += sign
                touched.append((vv, u, w))
                if sign > 0 and used[vv][u][w] > adj2[u, w]:
                    ok = False
            if not ok:
                break
        if sign > 0 and not ok:
            for (vv, u, w) in touched:
                used[vv][u][w] -= 1
            return False
        return True

    def search(e: int) -> Optional[TightProduct]:
        if e == g1.num_edges:
            nf = NeighborlyFamily(
                g1, g2, tuple(_family_from_choice(g1, chosen))
            )
            return assemble_product(nf)
        for perm in candidates:
            if place(e, perm, +1):
                chosen[e] = perm
                result = search(e + 1)
                if result is not None:
                    return result
                chosen[e] = None
                place(e, perm, -1)
        return None

    product = search(0)
    if product is not None:
        return BruteForceResult("found", product, "search succeeded")
    return BruteForceResult("absent", None, "search space exhausted")


def _family_from_choice(
    g1: MultiGraph, chosen: Sequence[Optional[Permutation]]
) -> list[Permutation]:
    sigma = []
    for e in range(g1.num_edges):
        perm = chosen[e]
        assert perm is not None
        sigma.append(perm)
        sigma.append(perm.inverse())
    return sigma
