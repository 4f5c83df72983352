import numpy as np
import pytest

from laminate.coverings import (
    CoveringTower,
    Graph,
    GraphCovering,
    GraphMap,
    compose_coverings,
    cyclic_tower,
)


def rose2() -> Graph:
    return Graph.from_edges(["w"], {"a": ("w", "w"), "b": ("w", "w")})


def cyclic_cover(m: int, n: int) -> GraphCovering:
    idx = np.arange(m)
    return GraphCovering(GraphMap(Graph.cycle(m), Graph.cycle(n), idx % n, idx % n))


def parity_cover_of_rose2() -> GraphCovering:
    """Degree-2 cover classified by the parity of the total a-exponent."""
    verts = [0, 1]
    edges = {("a", i): (i, 1 - i) for i in verts}
    edges.update({("b", i): (i, i) for i in verts})
    total = Graph.from_edges(verts, edges)
    return GraphCovering(
        GraphMap.from_dicts(
            total, rose2(), {i: "w" for i in verts}, {e: e[0] for e in edges}
        )
    )


def klein_four_cover() -> GraphCovering:
    verts = [(i, j) for i in range(2) for j in range(2)]
    edges = {}
    for i, j in verts:
        edges[("a", i, j)] = ((i, j), ((i + 1) % 2, j))
        edges[("b", i, j)] = ((i, j), (i, (j + 1) % 2))
    total = Graph.from_edges(verts, edges)
    return GraphCovering(
        GraphMap.from_dicts(
            total, rose2(), {v: "w" for v in verts}, {e: e[0] for e in edges}
        )
    )


def non_normal_degree3_cover() -> GraphCovering:
    # monodromy a -> (0 1), b -> (1 2): index-3 subgroup, not normal
    sigma_a = {0: 1, 1: 0, 2: 2}
    sigma_b = {0: 0, 1: 2, 2: 1}
    edges = {}
    for i in range(3):
        edges[("a", i)] = (i, sigma_a[i])
        edges[("b", i)] = (i, sigma_b[i])
    total = Graph.from_edges(range(3), edges)
    return GraphCovering(
        GraphMap.from_dicts(
            total, rose2(), {i: "w" for i in range(3)}, {e: e[0] for e in edges}
        )
    )


# -- validation and regularity ----------------------------------------------------


def test_cycle_halving_cover_is_valid_regular_degree_two():
    cov = cyclic_cover(4, 2)
    assert cov.validate() == []
    report = cov.is_regular()
    assert report.regular and report.degree == 2 and report.deck_order == 2


def test_parity_cover_is_regular():
    cov = parity_cover_of_rose2()
    assert cov.validate() == []
    report = cov.is_regular()
    assert report.regular and report.deck_order == 2


def test_non_normal_cover_detected():
    cov = non_normal_degree3_cover()
    assert cov.validate() == []
    report = cov.is_regular()
    assert not report.regular
    assert report.deck_order < report.degree == 3


def test_broken_star_reported():
    # two a-edges out of one vertex cannot cover the rose
    edges = {("a", 0): (0, 0), ("a", 1): (0, 1), ("b", 0): (1, 0)}
    total = Graph.from_edges([0, 1], edges)
    base = rose2()
    gmap = GraphMap.from_dicts(
        total, base, {0: "w", 1: "w"}, {e: e[0] for e in edges}
    )
    assert GraphCovering(gmap).validate()


def test_degree_one_flagged_unless_allowed():
    g = Graph.cycle(3)
    ident = GraphCovering(GraphMap(g, g, np.arange(3), np.arange(3)))
    assert any("degree 1" in p for p in ident.validate())
    assert ident.validate(allow_degree_one=True) == []


# -- deck groups ---------------------------------------------------------------------


def test_cyclic_deck_group_matches_rotation_oracle():
    for d in (2, 3, 6):
        cov = cyclic_cover(d, 1)
        group = cov.deck_group()
        assert group.order() == d
        rotations = {
            tuple((np.arange(d) + r) % d) for r in range(d)
        }
        assert {tuple(e.vperm) for e in group.elements} == rotations


def test_identity_covering_trivial_deck_group():
    g = Graph.cycle(3)
    ident = GraphCovering(GraphMap(g, g, np.arange(3), np.arange(3)))
    assert ident.deck_group().order() == 1


def test_klein_four_deck_group():
    group = klein_four_cover().deck_group()
    assert group.order() == 4
    for e in group.elements:
        assert e.compose(e).is_identity()
    assert group.is_free_and_transitive()


def test_deck_elements_commute_with_projection():
    cov = klein_four_cover()
    for deck in cov.deck_group().elements:
        assert np.array_equal(cov.map.vmap[deck.vperm], cov.map.vmap)
        assert np.array_equal(cov.map.emap[deck.eperm], cov.map.emap)


# -- composition ------------------------------------------------------------------------


def test_compose_coverings_degree_multiplies():
    tower = [cyclic_cover(2, 1), cyclic_cover(6, 2)]
    composite = compose_coverings(tower, 3, 1)
    assert composite.degree() == 6
    report = composite.is_regular()
    assert report.regular and report.deck_order == 6


def test_compose_with_identity_range():
    tower = [cyclic_cover(2, 1), cyclic_cover(6, 2)]
    same = compose_coverings(tower, 2, 2)
    assert same.degree() == 1
    assert same.total == Graph.cycle(2)


def test_dyadic_tower_composite_degrees():
    tower = cyclic_tower([2] * 6)
    for k in range(1, 7):
        assert tower.composite_covering(k, 1).degree() == 2 ** (k - 1)


# -- monodromy ----------------------------------------------------------------------------


def test_trivial_loop_monodromy():
    cov = cyclic_cover(4, 1)
    assert np.array_equal(cov.monodromy(()), np.arange(4))


def test_cyclic_generator_monodromy_is_a_cycle():
    cov = cyclic_cover(5, 1)
    perm = cov.monodromy(((0, 1),))
    assert np.array_equal(perm, (np.arange(5) + 1) % 5)


def test_homotopic_words_share_monodromy():
    cov = parity_cover_of_rose2()
    direct = cov.monodromy((("a", 1),))
    detour = cov.monodromy((("b", 1), ("b", -1), ("a", 1)))
    assert np.array_equal(direct, detour)


def test_non_closed_loop_rejected():
    # on C_2 the single edge 0 is not a loop at the base point
    cov = cyclic_cover(4, 2)
    with pytest.raises(ValueError):
        cov.monodromy(((0, 1),))


# -- towers --------------------------------------------------------------------------------


def test_tower_base_thread_is_coherent():
    tower = cyclic_tower([2, 3, 2])
    for k in range(2, tower.depth + 1):
        x_here = tower.base_point(k)
        pushed = int(tower.covering(k).map.vmap[x_here])
        assert pushed == tower.base_point(k - 1)


def test_tower_rotation_witness_and_enumeration_agree():
    tower = cyclic_tower([2, 2, 3])
    for k in range(2, 5):
        assert tower.verify_rotation_witness(k)
        assert tower.verify_regular(k).regular


def test_tower_stacking_validated():
    with pytest.raises(ValueError):
        CoveringTower([cyclic_cover(2, 1), cyclic_cover(4, 3)])


def test_generator_monodromies_rotate():
    tower = cyclic_tower([3, 2])
    perms = tower.generator_monodromies(3)
    assert np.array_equal(perms[0], (np.arange(6) + 1) % 6)
