"""The relabeling involution and the tree/mapping rewiring correspondence."""

import itertools
import random

import pytest

from parkgraph import (
    MappingFn,
    NotInImageError,
    RootedTree,
    all_rooted_trees,
    cycle_mapping,
    deletable_cycle_edges,
    extend_sequence,
    first_occurrence,
    identity_mapping,
    is_parking_function,
    path_tree,
    psi,
    psi_inverse,
    psi_nm,
    psi_nm_inverse,
    simulate_deterministic,
    star_tree,
    tau,
    tau_inverse,
)


# -- tau ---------------------------------------------------------------------------


def test_tau_fig4(fig4_tree, fig4_seq):
    res = tau(fig4_tree, fig4_seq)
    assert res.permutation == (5, 3, 2, 6, 1, 4)
    assert res.cycle_notation() == "(1 5)(2 3)(4 6)"
    assert res.sequence == (5, 6, 6, 3, 5, 2)
    assert [set(p) for p in res.paths] == [{1, 2, 3, 5}, {4, 6}]
    assert res.tree.orientation == "source"


def test_tau_without_overflow_is_identity():
    tree = path_tree(2)
    res = tau(tree, (2, 1))
    assert res.permutation == (1, 2)
    assert res.sequence == (2, 1)


def test_tau_single_vertex():
    tree = path_tree(1)
    res = tau(tree, (1,))
    assert res.permutation == (1,)
    back = tau_inverse(res.tree, res.sequence)
    assert back.sequence == (1,)


def test_tau_rejects_non_parking(fig4_tree):
    with pytest.raises(ValueError):
        tau(fig4_tree, (6, 6, 6, 6, 6, 6))
    with pytest.raises(ValueError):
        tau(fig4_tree, (1, 1))  # needs one driver per vertex


def test_tau_inverse_fig4(fig4_tree, fig4_seq):
    source = fig4_tree.flipped()
    back = tau_inverse(source, (5, 6, 6, 3, 5, 2))
    assert back.sequence == fig4_seq
    assert back.tree == fig4_tree


def test_tau_inverse_rejects_all_root_on_non_path(fig3_source):
    with pytest.raises(NotInImageError):
        tau_inverse(fig3_source, (4, 4, 4, 4))


def test_tau_image_always_parks_and_round_trips():
    for n in range(1, 5):
        for tree in all_rooted_trees(n, "sink"):
            D = tree.as_digraph()
            for s in itertools.product(range(1, n + 1), repeat=n):
                if simulate_deterministic(D, s) is None:
                    continue
                res = tau(tree, s)
                assert is_parking_function(res.tree.as_digraph(), res.sequence)
                # involution on labels
                perm = res.permutation
                assert all(perm[perm[v - 1] - 1] == v for v in range(1, n + 1))
                # vertices outside the reversal paths stay fixed
                moved = {v for p in res.paths for v in p}
                assert all(perm[v - 1] == v for v in range(1, n + 1) if v not in moved)
                back = tau_inverse(res.tree, res.sequence)
                assert back.sequence == tuple(s) and back.tree == tree


def test_tau_injective_gives_tree_inequality():
    # distinct full parking functions get distinct images on the flipped tree
    for n in range(1, 5):
        for tree in all_rooted_trees(n, "sink"):
            D = tree.as_digraph()
            images = set()
            total = 0
            for s in itertools.product(range(1, n + 1), repeat=n):
                if simulate_deterministic(D, s) is None:
                    continue
                total += 1
                images.add(tau(tree, s).sequence)
            assert len(images) == total


# -- deletable cycle edges ------------------------------------------------------------


def test_fig5_deletable_edge(fig5_mapping, fig5_seq):
    # only the edge entering vertex 3 can go; the others starve a subtree
    out = deletable_cycle_edges(fig5_mapping, fig5_seq)
    assert out == {1: frozenset({(4, 3)})}


def test_loops_are_always_deletable():
    D = identity_mapping(3).inverse_digraph()
    out = deletable_cycle_edges(D, (1, 2, 3))
    assert out == {1: frozenset({(1, 1)}), 2: frozenset({(2, 2)}), 3: frozenset({(3, 3)})}


def test_full_cycle_every_edge_deletable():
    for n in (2, 3, 4):
        D = cycle_mapping(n).inverse_digraph()
        s = tuple(range(1, n + 1))
        out = deletable_cycle_edges(D, s)
        (edges,) = out.values()
        assert len(edges) == n


def test_deletable_requires_parking_function(fig5_mapping):
    # vertex 5 has no out-edges, so two drivers preferring it never park
    with pytest.raises(ValueError):
        deletable_cycle_edges(fig5_mapping, (5, 5))


def test_deletable_requires_inverse_mapping(fig1):
    with pytest.raises(ValueError):
        deletable_cycle_edges(fig1, (1,))


# -- psi ----------------------------------------------------------------------------


def test_psi_fig6(fig2_tree, fig2_seq, fig2_mapping):
    res = psi(fig2_tree, fig2_seq, 5)
    assert res.balanced == {1, 3, 4, 5}
    assert res.rewired == (3, 1, 5)
    assert res.digraph == fig2_mapping
    assert res.sequence == fig2_seq


def test_psi_mark_at_root_adds_loop():
    tree = RootedTree(3, 2, (2, 0, 2), "source")
    s = (2, 1, 3)
    res = psi(tree, s, 2)
    assert (2, 2) in res.digraph.edges
    assert res.rewired == (2,)


def test_psi_single_vertex():
    tree = path_tree(1, "source")
    res = psi(tree, (1,), 1)
    assert res.digraph.edges == {(1, 1)}
    inv = psi_inverse(res.digraph, (1,))
    assert inv.tree == tree and inv.mark == 1


def test_psi_inverse_fig6(fig2_mapping, fig2_tree, fig2_seq):
    inv = psi_inverse(fig2_mapping, fig2_seq)
    assert inv.tree == fig2_tree
    assert inv.mark == 5


def test_psi_rejects_bad_inputs(fig2_tree, fig2_seq):
    with pytest.raises(ValueError):
        psi(fig2_tree, fig2_seq, 9)
    with pytest.raises(ValueError):
        psi(fig2_tree, (1, 1, 1, 1, 1, 1, 1), 1)  # not a parking function
    with pytest.raises(ValueError):
        psi(fig2_tree.flipped(), fig2_seq, 1)  # wrong orientation


def test_psi_round_trip_and_bijectivity_small():
    for n in range(1, 4):
        outputs = set()
        total = 0
        for tree in all_rooted_trees(n, "source"):
            D = tree.as_digraph()
            for s in itertools.product(range(1, n + 1), repeat=n):
                if not is_parking_function(D, s):
                    continue
                for mark in range(1, n + 1):
                    total += 1
                    res = psi(tree, s, mark)
                    assert is_parking_function(res.digraph, s)
                    outputs.add((tuple(sorted(res.digraph.edges)), s))
                    inv = psi_inverse(res.digraph, s)
                    assert inv.tree == tree and inv.mark == mark
        # injective, and onto the whole mapping side
        assert len(outputs) == total
        target = 0
        for images in itertools.product(range(1, n + 1), repeat=n):
            D = MappingFn(n, images).inverse_digraph()
            target += sum(
                1
                for s in itertools.product(range(1, n + 1), repeat=n)
                if is_parking_function(D, s)
            )
        assert total == target


def test_psi_inverse_on_identity_loops():
    # all-loops digraph: each loop is its own cycle; unhooking chains the
    # loop vertices by first-appearance order and marks the last one
    D = identity_mapping(2).inverse_digraph()
    inv = psi_inverse(D, (1, 2))
    assert inv.rewired == (1, 2)
    assert inv.mark == 2
    assert inv.tree.as_digraph().edges == {(1, 2)}
    fwd = psi(inv.tree, (1, 2), inv.mark)
    assert fwd.digraph == D


def test_psi_rank_remark():
    # every output cycle holds exactly one spliced vertex, and among the
    # vertices eligible for the inverse (heads of deletable cycle edges) it
    # is the one of highest first-appearance rank
    for tree in all_rooted_trees(3, "source"):
        D = tree.as_digraph()
        for s in itertools.product(range(1, 4), repeat=3):
            if not is_parking_function(D, s):
                continue
            rank = first_occurrence(s)
            for mark in range(1, 4):
                res = psi(tree, s, mark)
                loose = deletable_cycle_edges(res.digraph, s)
                for cyc in res.mapping.cycles:
                    inside = [v for v in cyc if v in res.rewired]
                    assert len(inside) == 1
                    heads = [w for (_, w) in loose[min(cyc)]]
                    assert inside[0] in heads
                    assert rank[inside[0]] == max(rank[w] for w in heads)


def _assert_necessary_edges_survive(tree, s, mark):
    D = tree.as_digraph()
    res = psi(tree, s, mark)
    for e in D.edges & res.digraph.edges:
        tree_ok = is_parking_function(D.without_edge(*e), s)
        map_ok = is_parking_function(res.digraph.without_edge(*e), s)
        if not tree_ok:
            assert not map_ok


def test_psi_preserves_necessary_edges():
    # an edge whose deletion breaks parking on the tree still breaks it on
    # the rewired digraph whenever the edge survives the rewiring
    for tree in all_rooted_trees(3, "source"):
        D = tree.as_digraph()
        for s in itertools.product(range(1, 4), repeat=3):
            if not is_parking_function(D, s):
                continue
            for mark in range(1, 4):
                _assert_necessary_edges_survive(tree, s, mark)


def test_psi_preserves_necessary_edges_sampled_n4():
    rng = random.Random(73)
    trees = list(all_rooted_trees(4, "source"))
    done = 0
    while done < 300:
        tree = rng.choice(trees)
        s = tuple(rng.randint(1, 4) for _ in range(4))
        if not is_parking_function(tree.as_digraph(), s):
            continue
        _assert_necessary_edges_survive(tree, s, rng.randint(1, 4))
        done += 1


# -- extension and the short-sequence correspondence ---------------------------------


def test_extend_full_length_is_identity(fig2_tree, fig2_seq):
    assert extend_sequence(fig2_tree, fig2_seq, 4) == fig2_seq


def test_extend_empty_sequence():
    tree = star_tree(4, "source")
    assert extend_sequence(tree, (), 3) == (1, 2, 3, 4)


def test_extend_chain_example():
    tree = path_tree(3, "source")
    assert extend_sequence(tree, (2,), 1) == (2, 1, 3)


def test_extend_output_parks():
    rng = random.Random(61)
    for tree in all_rooted_trees(4, "source"):
        D = tree.as_digraph()
        for _ in range(3):
            m = rng.randint(0, 3)
            s = tuple(rng.randint(1, 4) for _ in range(m))
            if not is_parking_function(D, s):
                continue
            mark = rng.randint(1, 4)
            full = extend_sequence(tree, s, mark)
            assert full[: len(s)] == s
            assert sorted(full) == [1, 2, 3, 4] or is_parking_function(D, full)
            assert is_parking_function(D, full)


def test_psi_nm_n2_table():
    tree = path_tree(2, "source")
    seen = set()
    for mark in (1, 2):
        res = psi_nm(tree, (1,), mark)
        seen.add((tuple(sorted(res.digraph.edges)), res.sequence))
        back = psi_nm_inverse(res.digraph, (1,))
        assert back.tree == tree and back.mark == mark and back.sequence == (1,)
    assert len(seen) == 2


def test_psi_nm_reduces_to_psi_at_full_length(fig2_tree, fig2_seq):
    a = psi_nm(fig2_tree, fig2_seq, 5)
    b = psi(fig2_tree, fig2_seq, 5)
    assert a.digraph == b.digraph and a.extended == fig2_seq


def test_psi_nm_round_trip_exhaustive_n3():
    n = 3
    for tree in all_rooted_trees(n, "source"):
        D = tree.as_digraph()
        for m in range(n + 1):
            for s in itertools.product(range(1, n + 1), repeat=m):
                if not is_parking_function(D, s):
                    continue
                for mark in range(1, n + 1):
                    res = psi_nm(tree, s, mark)
                    assert is_parking_function(res.digraph, s)
                    back = psi_nm_inverse(res.digraph, s)
                    assert (
                        back.tree == tree
                        and back.mark == mark
                        and back.sequence == tuple(s)
                    )
