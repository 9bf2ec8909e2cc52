import pytest

from tightprod.graph import (
    MultiGraph,
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    petersen_graph,
    prism_graph,
    structural_predicates,
)
from tightprod.factorization import (
    exact_edge_chromatic,
    is_proper_edge_coloring,
    perfect_matching,
)
from tightprod.semicoloring import (
    SemiColor,
    SemiColoring,
    build_gadget,
    gadget_order,
    semi_color_family,
    semi_color_subcubic,
    validate_semi_coloring,
    vizing4_cubic,
)
from tightprod.experiments import rng_from
from corpus import bridged_doubled_triangles, random_cubic, random_subcubic


def test_semicolor_members():
    assert SemiColor.solid(2).members == (2,)
    assert SemiColor.bright(3, 1).members == (1, 3)
    assert not SemiColor.solid(1).is_bright
    with pytest.raises(ValueError):
        SemiColor.bright(2, 2)


def test_validator_k4_matching_plus_bright():
    k4 = complete_graph(4)
    m = perfect_matching(k4)
    colors = {e: (SemiColor.solid(1) if e in m else SemiColor.bright(2, 3)) for e in range(6)}
    report = validate_semi_coloring(SemiColoring(k4, 3, colors))
    assert report.ok
    assert all(len(c) % 2 == 0 or len(c) >= 3 for cs in report.bright_cycles.values() for c in cs)


def test_validator_rejects_overweight():
    tri = cycle_graph(3)
    colors = {e: SemiColor.solid(1) for e in range(3)}
    report = validate_semi_coloring(SemiColoring(tri, 3, colors))
    assert not report.ok and report.weight_violations


def test_validator_c4_all_one_bright_pair():
    c4 = cycle_graph(4)
    colors = {e: SemiColor.bright(1, 2) for e in range(4)}
    report = validate_semi_coloring(SemiColoring(c4, 2, colors))
    assert report.ok
    assert report.bright_cycles[(1, 2)] == [[0, 1, 2, 3]]


def test_validator_parity_failure():
    path = MultiGraph(3, [(0, 1), (1, 2)])
    colors = {0: SemiColor.bright(1, 2), 1: SemiColor.solid(3)}
    report = validate_semi_coloring(SemiColoring(path, 3, colors))
    assert not report.ok and report.parity_violations


def test_validator_color_range():
    tri = cycle_graph(3)
    with pytest.raises(ValueError):
        validate_semi_coloring(SemiColoring(tri, 2, {0: SemiColor.solid(3)}))


def test_subcubic_petersen_matching_plus_two_bright_cycles():
    sc = semi_color_subcubic(petersen_graph())
    report = validate_semi_coloring(sc)
    assert report.ok
    cycles = [c for cs in report.bright_cycles.values() for c in cs]
    assert sorted(len(c) for c in cycles) == [5, 5]


def test_subcubic_c5():
    assert validate_semi_coloring(semi_color_subcubic(cycle_graph(5))).ok


def test_subcubic_bridged_triangles():
    g = MultiGraph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3)])
    sc = semi_color_subcubic(g)
    report = validate_semi_coloring(sc)
    assert report.ok
    # bridges can only carry solid colors
    for e in structural_predicates(g).bridges:
        assert not sc.color_of[e].is_bright


def test_subcubic_small_degenerate_cases():
    for g in [
        MultiGraph(0, []),
        MultiGraph(3, []),
        MultiGraph(1, [(0, 0)]),
        MultiGraph(2, [(0, 1)]),
        MultiGraph(2, [(0, 1), (0, 1)]),
        MultiGraph(3, [(0, 1), (1, 2)]),
        MultiGraph(2, [(0, 0), (0, 1), (1, 1)]),
    ]:
        assert validate_semi_coloring(semi_color_subcubic(g)).ok


def test_subcubic_rejects_high_degree():
    with pytest.raises(ValueError):
        semi_color_subcubic(complete_graph(5))


def test_subcubic_randomized_suite():
    rng = rng_from(20)
    saw_loop = saw_parallel = saw_bridge = 0
    for _ in range(300):
        n = int(rng.integers(1, 25))
        g = random_subcubic(n, rng)
        sc = semi_color_subcubic(g)
        assert validate_semi_coloring(sc).ok
        saw_loop += any(g.is_loop(e) for e in range(g.num_edges))
        saw_parallel += len({tuple(sorted(p)) for p in g.edges}) < g.num_edges
        saw_bridge += bool(structural_predicates(g).bridges)
    assert saw_loop > 10 and saw_parallel > 10 and saw_bridge > 10


def test_family_class1_rule():
    k33 = complete_bipartite_graph(3, 3)
    ec = exact_edge_chromatic(k33, 3).coloring
    sc = semi_color_family(k33, edge_coloring=ec)
    assert validate_semi_coloring(sc).ok
    assert all(not c.is_bright for c in sc.color_of.values())


def test_family_even_regular_rule():
    k5 = complete_graph(5)
    sc = semi_color_family(k5)
    report = validate_semi_coloring(sc)
    assert report.ok
    assert sorted(report.bright_cycles) == [(1, 3), (2, 4)]


def test_family_odd_regular_rule():
    k4 = complete_graph(4)
    sc = semi_color_family(k4)
    report = validate_semi_coloring(sc)
    assert report.ok
    solids = [e for e, c in sc.color_of.items() if not c.is_bright]
    assert len(solids) == 2  # the perfect matching got color 3
    assert all(sc.color_of[e].members == (3,) for e in solids)
    brights = {c.members for c in sc.color_of.values() if c.is_bright}
    assert brights == {(1, 2)}


def test_family_rejects_unsupported():
    star = MultiGraph(4, [(0, 1), (0, 2), (0, 3)])
    with pytest.raises(ValueError):
        semi_color_family(star)
    from corpus import no_perfect_matching_cubic

    with pytest.raises(ValueError):
        semi_color_family(no_perfect_matching_cubic())


def test_family_randomized_suite():
    from corpus import random_even_regular, random_odd_regular

    rng = rng_from(23)
    for _ in range(30):
        g = random_even_regular(int(rng.integers(1, 11)), int(rng.integers(1, 4)), rng)
        assert validate_semi_coloring(semi_color_family(g)).ok
    for _ in range(30):
        g = random_odd_regular(2 * int(rng.integers(1, 6)), int(rng.integers(1, 3)), rng)
        assert validate_semi_coloring(semi_color_family(g)).ok


def test_bright_pairs_decompose_into_cycles_randomized():
    rng = rng_from(21)
    for _ in range(40):
        n = 2 * int(rng.integers(2, 9))
        g = random_cubic(n, rng)
        report = validate_semi_coloring(semi_color_subcubic(g))
        assert report.ok
        for pair, cycles in report.bright_cycles.items():
            for cyc in cycles:
                # consecutive edges share vertices and the walk closes
                assert len(cyc) >= 1


def test_vizing4_examples():
    assert vizing4_cubic(complete_graph(4)).num_colors <= 4
    pet = vizing4_cubic(petersen_graph())
    assert pet.num_colors == 4
    assert is_proper_edge_coloring(petersen_graph(), pet)
    assert vizing4_cubic(complete_bipartite_graph(3, 3)).num_colors <= 4
    assert vizing4_cubic(prism_graph()).num_colors <= 4


def test_vizing4_rejects_noncubic():
    with pytest.raises(ValueError):
        vizing4_cubic(cycle_graph(4))


def test_vizing4_on_cubic_corpus():
    rng = rng_from(22)
    for _ in range(200):
        n = 2 * int(rng.integers(2, 13))
        g = random_cubic(n, rng)
        ec = vizing4_cubic(g)
        assert ec.num_colors <= 4
        assert is_proper_edge_coloring(g, ec)


def test_vizing4_class2_with_bridge():
    g = bridged_doubled_triangles()
    assert structural_predicates(g).is_regular_of == 3
    assert exact_edge_chromatic(g, 3).status == "absent"
    ec = vizing4_cubic(g)
    assert ec.num_colors == 4 and is_proper_edge_coloring(g, ec)


def test_gadget_sizes_and_structure():
    for k, n in [(1, 16), (2, 66)]:
        gd = build_gadget(k)
        assert gd.graph.n == n == gadget_order(k)
        facts = structural_predicates(gd.graph)
        assert facts.is_regular_of == 2 * k + 1
        main_edges = [
            e for e, (u, v) in enumerate(gd.graph.edges) if gd.main_pivot in (u, v)
        ]
        assert len(main_edges) == 2 * k + 1
        assert set(main_edges) <= set(facts.bridges)
        assert validate_semi_coloring(gd.coloring).ok


def test_gadget_k3():
    gd = build_gadget(3)
    assert gd.graph.n == gadget_order(3)
    facts = structural_predicates(gd.graph)
    main_edges = [e for e, (u, v) in enumerate(gd.graph.edges) if gd.main_pivot in (u, v)]
    assert set(main_edges) <= set(facts.bridges)
    assert validate_semi_coloring(gd.coloring).ok


def test_gadget_rejects_bad_k():
    with pytest.raises(ValueError):
        build_gadget(0)
