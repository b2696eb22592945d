"""Family generators and the closed-form counts."""

import pytest

from parkgraph import (
    MappingFn,
    RootedTree,
    all_mappings,
    all_rooted_trees,
    classical_count,
    cycle_mapping,
    falling_factorial,
    identity_mapping,
    path_tree,
    sink_star_lower,
    source_star_count,
    star_tree,
)

from oracle import all_parent_array_trees, naive_count_pf


# -- tree enumeration ------------------------------------------------------------


@pytest.mark.parametrize("n,expected", [(1, 1), (2, 2), (3, 9), (4, 64), (5, 625)])
def test_tree_family_size(n, expected):
    assert sum(1 for _ in all_rooted_trees(n)) == expected


def test_trees_unique_and_match_parent_array_enumeration():
    for n in range(1, 5):
        seen = {(t.root, t.parent) for t in all_rooted_trees(n)}
        assert len(seen) == n ** (n - 1)
        assert seen == all_parent_array_trees(n)


def test_tree_orientation_digraphs():
    tree = RootedTree(3, 3, (3, 3, 0), "sink")
    assert tree.as_digraph().edges == {(1, 3), (2, 3)}
    assert tree.flipped().as_digraph().edges == {(3, 1), (3, 2)}


def test_tree_structure_helpers(fig4_tree):
    assert fig4_tree.leaves() == (1, 4)
    assert fig4_tree.subtree(3) == {1, 2, 3}
    assert fig4_tree.root_path(1) == (6, 5, 3, 2, 1)
    assert fig4_tree.subtree_sizes[5] == 5
    assert not fig4_tree.is_directed_path()
    assert path_tree(4).is_directed_path()


def test_tree_validation():
    with pytest.raises(ValueError):
        RootedTree(2, 1, (0, 1), "up")  # bad orientation
    with pytest.raises(ValueError):
        RootedTree(2, 1, (2, 1))  # root slot must be 0
    with pytest.raises(ValueError):
        RootedTree(3, 1, (0, 3, 2))  # 2 and 3 form a cycle
    with pytest.raises(ValueError):
        all_rooted_trees(0)


def test_tree_line_round_trip(fig2_tree):
    again = RootedTree.from_line(fig2_tree.to_line(), "source")
    assert again == fig2_tree


# -- mapping enumeration ------------------------------------------------------------


@pytest.mark.parametrize("n,expected", [(1, 1), (2, 4), (3, 27), (4, 256), (5, 3125)])
def test_mapping_family_size(n, expected):
    assert sum(1 for _ in all_mappings(n)) == expected


def test_every_mapping_component_has_one_cycle():
    for f in all_mappings(3):
        D = f.inverse_digraph()
        cycles = f.cycles
        # cycle vertices of distinct cycles never overlap
        flat = [v for c in cycles for v in c]
        assert len(flat) == len(set(flat))
        # each component of the inverse digraph contains exactly one cycle
        assigned: set[int] = set()
        for start in range(1, 4):
            if start in assigned:
                continue
            block = {start}
            frontier = [start]
            while frontier:
                u = frontier.pop()
                for a, b in D.edges:
                    if a == u and b not in block:
                        block.add(b)
                        frontier.append(b)
                    if b == u and a not in block:
                        block.add(a)
                        frontier.append(a)
            assigned |= block
            assert sum(1 for c in cycles if c[0] in block) == 1


def test_mapping_digraphs(fig5_mapping):
    f = MappingFn.from_inverse_digraph(fig5_mapping)
    assert f.images == (2, 3, 4, 1, 4, 3, 2)
    assert f.inverse_digraph() == fig5_mapping
    assert {tuple(sorted(c)) for c in f.cycles} == {(1, 2, 3, 4)}


def test_from_inverse_digraph_rejects_non_mappings():
    with pytest.raises(ValueError):
        MappingFn.from_inverse_digraph(path_tree(3).as_digraph())


def test_mapping_line_round_trip():
    f = MappingFn(4, (2, 2, 4, 1))
    assert MappingFn.from_line(f.to_line()) == f


# -- canonical instances ------------------------------------------------------------


def test_path_tree_is_classical_lot():
    D = path_tree(3).as_digraph()
    assert D.edges == {(1, 2), (2, 3)}
    # the source-rooted variant carries the same edges
    assert path_tree(3, "source").as_digraph().edges == {(1, 2), (2, 3)}


def test_star_tree_shape():
    t = star_tree(4)
    assert t.root == 1
    assert t.as_digraph().edges == {(2, 1), (3, 1), (4, 1)}
    assert star_tree(4, "source").as_digraph().edges == {(1, 2), (1, 3), (1, 4)}


def test_cycle_and_identity_mappings():
    assert cycle_mapping(3).images == (2, 3, 1)
    assert identity_mapping(3).images == (1, 2, 3)
    assert cycle_mapping(1).images == (1,)


# -- closed forms ---------------------------------------------------------------------


@pytest.mark.parametrize("a,k,expected", [(3, 2, 6), (2, 3, 0), (5, 0, 1), (0, 0, 1)])
def test_falling_factorial(a, k, expected):
    assert falling_factorial(a, k) == expected


@pytest.mark.parametrize(
    "n,m,expected",
    [(3, 3, 16), (3, 1, 3), (4, 2, 15), (3, 0, 1), (5, 5, 1296)],
)
def test_classical_count(n, m, expected):
    assert classical_count(n, m) == expected


@pytest.mark.parametrize("n,m,expected", [(3, 3, 13), (4, 0, 1), (4, 1, 4)])
def test_source_star_count(n, m, expected):
    assert source_star_count(n, m) == expected


@pytest.mark.parametrize("n,m,expected", [(3, 3, 12), (4, 1, 4), (4, 0, 1)])
def test_sink_star_lower(n, m, expected):
    assert sink_star_lower(n, m) == expected


def test_star_formulas_match_brute_force():
    for n in range(1, 5):
        for m in range(n + 1):
            assert source_star_count(n, m) == naive_count_pf(
                star_tree(n, "source").as_digraph(), m
            )
            assert sink_star_lower(n, m) == naive_count_pf(
                star_tree(n, "sink").as_digraph(), m
            )


def test_classical_formula_matches_brute_force():
    for n in range(1, 5):
        for m in range(n + 1):
            assert classical_count(n, m) == naive_count_pf(path_tree(n).as_digraph(), m)
