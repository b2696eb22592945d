"""Label bijections between parking functions on the tree and mapping families.

Two constructions live here.  The first is an involution on vertex labels
that turns a full parking function on a sink tree into one on the reversed
(source) tree by reversing driver preferences along leaf-anchored paths.
The second rewires the path from the root of a source tree to a marked
vertex into the cycles of an inverse mapping digraph, leaving the sequence
untouched; together with a canonical way of extending short sequences it
matches marked source-tree parking functions with mapping-digraph ones.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .check import is_parking_function, simulate_deterministic
from .digraph import Digraph
from .families import SINK, SOURCE, MappingFn, RootedTree
from .matching import max_bipartite_matching


class NotInImageError(ValueError):
    """Raised when an inverse is applied to something the forward map never produces."""


@dataclass(frozen=True)
class TauResult:
    permutation: tuple[int, ...]  # image form, permutation[v-1] is the image of v
    sequence: tuple[int, ...]
    tree: RootedTree
    paths: tuple[tuple[int, ...], ...]

    def cycle_notation(self) -> str:
        seen = set()
        parts = []
        for v in range(1, len(self.permutation) + 1):
            if v in seen:
                continue
            cyc = [v]
            seen.add(v)
            w = self.permutation[v - 1]
            while w != v:
                cyc.append(w)
                seen.add(w)
                w = self.permutation[w - 1]
            if len(cyc) > 1:
                parts.append("(" + " ".join(str(x) for x in cyc) + ")")
        return "".join(parts) if parts else "()"


@dataclass(frozen=True)
class PsiResult:
    mapping: MappingFn
    digraph: Digraph
    sequence: tuple[int, ...]
    balanced: frozenset[int]  # path vertices whose subtree is exactly full
    rewired: tuple[int, ...]  # the subset whose incoming edge was manipulated, path order
    extended: tuple[int, ...]  # full-length sequence actually fed to the rewiring


@dataclass(frozen=True)
class PsiInverseResult:
    tree: RootedTree
    sequence: tuple[int, ...]
    mark: int
    loose: frozenset[int]  # cycle vertices whose incoming cycle edge is deletable
    rewired: tuple[int, ...]  # chosen per-cycle vertices, in rank order
    extended: tuple[int, ...]


def first_occurrence(s: Sequence[int]) -> dict[int, int]:
    """Vertex -> 1-based index of its first appearance in s."""
    d: dict[int, int] = {}
    for i, x in enumerate(s, start=1):
        d.setdefault(x, i)
    return d


def _pref_counts(n: int, s: Sequence[int]) -> list[int]:
    counts = [0] * (n + 1)
    for x in s:
        counts[x] += 1
    return counts


# -- the sink/source involution -------------------------------------------------


def _leaf_path_partition(
    tree: RootedTree, counts: list[int], flagged: set[int]
) -> list[tuple[int, ...]]:
    """Split the vertices touched by flagged parent-edges into leaf paths.

    flagged holds the non-root vertices whose edge toward the parent carries
    overflow traffic.  Within each connected block of flagged edges, walk up
    from each leaf (ascending label order), skipping vertices already taken,
    and cut the path as soon as it holds exactly as many preferred drivers
    as vertices.  Raises ValueError when the balance point never arrives or
    some flagged vertex stays uncovered.
    """
    parent = tree.parent
    members: set[int] = set()
    for u in flagged:
        members.add(u)
        members.add(parent[u - 1])
    # connected blocks under the flagged edges
    comp: dict[int, int] = {}
    blocks: list[list[int]] = []
    for v in sorted(members):
        if v in comp:
            continue
        idx = len(blocks)
        block = [v]
        comp[v] = idx
        queue = deque([v])
        while queue:
            u = queue.popleft()
            nbrs = [parent[u - 1]] if u in flagged else []
            nbrs.extend(c for c in tree.children[u] if c in flagged)
            for w in nbrs:
                if w not in comp:
                    comp[w] = idx
                    block.append(w)
                    queue.append(w)
        blocks.append(block)

    paths: list[tuple[int, ...]] = []
    used: set[int] = set()
    for block in blocks:
        block_set = set(block)
        leaves = sorted(
            v for v in block if not any(c in flagged for c in tree.children[v])
        )
        for leaf in leaves:
            path: list[int] = []
            drivers = 0
            cur = leaf
            while True:
                if cur not in used:
                    path.append(cur)
                    drivers += counts[cur]
                    if drivers == len(path):
                        break
                if cur not in flagged:  # reached the top of the block
                    raise ValueError("leaf path never balances")
                cur = parent[cur - 1]
            used.update(path)
            paths.append(tuple(path))
        if any(v not in used for v in block_set):
            raise ValueError("flagged block not fully covered by leaf paths")
    return paths


def _paths_to_permutation(n: int, paths: list[tuple[int, ...]]) -> list[int]:
    perm = list(range(n + 1))
    for path in paths:
        for k, w in enumerate(path):
            perm[w] = path[len(path) - 1 - k]
    assert all(perm[perm[v]] == v for v in range(1, n + 1)), "reversal must be an involution"
    return perm


def tau(tree: RootedTree, s: Sequence[int]) -> TauResult:
    """Relabel a full sink-tree parking function into a source-tree one.

    Runs the deterministic process on the sink tree, takes the edges used by
    drivers after missing their preferred spot, partitions each overflow
    block into leaf paths, and reverses labels along every path.  Vertices
    away from the overflow stay fixed.
    """
    if tree.orientation != SINK:
        raise ValueError("tau expects a sink tree")
    n = tree.n
    if len(s) != n:
        raise ValueError("tau needs exactly one driver per vertex")
    run = simulate_deterministic(tree.as_digraph(), s)
    if run is None:
        raise ValueError("sequence is not a parking function on the sink tree")
    flagged = {u for (u, _) in run.highlighted}
    paths = _leaf_path_partition(tree, _pref_counts(n, s), flagged)
    perm = _paths_to_permutation(n, paths)
    return TauResult(
        permutation=tuple(perm[1:]),
        sequence=tuple(perm[x] for x in s),
        tree=tree.flipped(),
        paths=tuple(paths),
    )


def tau_inverse(tree: RootedTree, s: Sequence[int]) -> TauResult:
    """Undo tau: recover the sink tree and original preferences.

    The overflow blocks are recovered by counting: a parent edge carried
    overflow exactly when the subtree below it is preferred by strictly
    fewer drivers than it has room for.  The same leaf-path recursion then
    rebuilds the paths, and reversing them again undoes the relabeling.
    Raises NotInImageError for source-tree parking functions that tau can
    never produce.
    """
    if tree.orientation != SOURCE:
        raise ValueError("tau_inverse expects a source tree")
    n = tree.n
    if len(s) != n:
        raise ValueError("tau_inverse needs exactly one driver per vertex")
    if not is_parking_function(tree.as_digraph(), s):
        raise NotInImageError("not a parking function on the source tree")
    counts = _pref_counts(n, s)
    subtree_demand = counts[:]
    sizes = tree.subtree_sizes
    for v in tree.depth_order_bottom_up:
        p = tree.parent[v - 1]
        if p:
            subtree_demand[p] += subtree_demand[v]
    flagged = {
        v
        for v in range(1, n + 1)
        if v != tree.root and subtree_demand[v] < sizes[v]
    }
    try:
        paths = _leaf_path_partition(tree, counts, flagged)
    except ValueError as exc:
        raise NotInImageError(str(exc)) from None
    perm = _paths_to_permutation(n, paths)
    sink_tree = tree.flipped()
    original = tuple(perm[x] for x in s)
    try:
        forward = tau(sink_tree, original)
    except ValueError as exc:
        raise NotInImageError(str(exc)) from None
    if forward.sequence != tuple(s):
        raise NotInImageError("recovered pair does not map back to the input")
    return TauResult(
        permutation=tuple(perm[1:]),
        sequence=original,
        tree=sink_tree,
        paths=tuple(paths),
    )


# -- deletable cycle edges ---------------------------------------------------------


def deletable_cycle_edges(
    D: Digraph, s: Sequence[int]
) -> dict[int, frozenset[tuple[int, int]]]:
    """Per cycle, the cycle edges whose removal keeps s parkable.

    D must be an inverse mapping digraph and s a parking function on it.
    Each cycle is keyed by its smallest vertex.  Detection is by direct
    deletion and recheck, one matching run per cycle edge.  Every cycle is
    guaranteed at least one deletable edge; an empty set would mean the
    graph or sequence violated the preconditions.
    """
    mapping = MappingFn.from_inverse_digraph(D)
    if not is_parking_function(D, s):
        raise ValueError("sequence is not a parking function on the digraph")
    out: dict[int, frozenset[tuple[int, int]]] = {}
    for cyc in mapping.cycles:
        edges = [(mapping(w), w) for w in cyc]
        good = frozenset(e for e in edges if is_parking_function(D.without_edge(*e), s))
        if not good:
            raise RuntimeError(f"cycle {sorted(cyc)} has no deletable edge")
        out[min(cyc)] = good
    return out


# -- the source-tree / inverse-mapping correspondence ------------------------------


def psi(tree: RootedTree, s: Sequence[int], mark: int) -> PsiResult:
    """Rewire a marked source-tree parking function into an inverse mapping.

    Along the path from the root to the marked vertex, collect the vertices
    whose subtree is preferred by exactly as many drivers as it has spots
    (their incoming edge carries no traffic), keep those that first appear
    in s later than every such vertex above them, and redirect each kept
    vertex's incoming edge to the previous kept vertex, closing the chain
    with an edge from the mark.  The sequence still parks on the result.
    """
    if tree.orientation != SOURCE:
        raise ValueError("psi expects a source tree")
    n = tree.n
    if len(s) != n:
        raise ValueError("psi needs exactly one driver per vertex")
    if not (1 <= mark <= n):
        raise ValueError(f"mark {mark} out of range 1..{n}")
    D = tree.as_digraph()
    if not is_parking_function(D, s):
        raise ValueError("sequence is not a parking function on the source tree")

    counts = _pref_counts(n, s)
    demand = counts[:]
    for v in tree.depth_order_bottom_up:
        p = tree.parent[v - 1]
        if p:
            demand[p] += demand[v]
    sizes = tree.subtree_sizes

    path = tree.root_path(mark)
    balanced = [v for v in path if demand[v] == sizes[v]]
    assert balanced and balanced[0] == tree.root

    rank = first_occurrence(s)
    for v in balanced:
        # a full subtree must be entered at its top by a preferring driver
        assert v in rank, "balanced path vertices always appear in the sequence"
    chosen: list[int] = []
    best = -1
    for v in balanced:
        if rank[v] > best:
            chosen.append(v)
            best = rank[v]

    edges = set(D.edges)
    for j in range(1, len(chosen)):
        v = chosen[j]
        p = tree.parent[v - 1]
        edges.remove((p, v))
        edges.add((p, chosen[j - 1]))
    edges.add((mark, chosen[-1]))

    result = Digraph(n, edges)
    mapping = MappingFn.from_inverse_digraph(result)
    assert is_parking_function(result, s), "rewiring must preserve parkability"
    return PsiResult(
        mapping=mapping,
        digraph=result,
        sequence=tuple(s),
        balanced=frozenset(balanced),
        rewired=tuple(chosen),
        extended=tuple(s),
    )


def psi_inverse(D: Digraph, s: Sequence[int]) -> PsiInverseResult:
    """Undo psi: unhook the cycles of an inverse mapping back into a tree.

    In each cycle, the deletable edges mark where the original tree path was
    spliced; the splice vertex is the one of highest first-appearance rank
    among their endpoints.  Chaining those vertices in rank order and
    removing the last incoming edge restores the source tree and the mark.
    """
    mapping = MappingFn.from_inverse_digraph(D)
    n = D.n
    if len(s) != n:
        raise ValueError("psi_inverse needs exactly one driver per vertex")
    loose = deletable_cycle_edges(D, s)  # validates the parking function too
    rank = first_occurrence(s)
    chosen: list[int] = []
    for cyc in mapping.cycles:
        heads = [w for (_, w) in loose[min(cyc)]]
        for w in heads:
            assert w in rank, "a vertex losing its only incoming edge must be preferred"
        chosen.append(max(heads, key=lambda w: rank[w]))
    chosen.sort(key=lambda w: rank[w])

    edges = set(D.edges)
    for i in range(len(chosen) - 1):
        b = chosen[i]
        edges.remove((mapping(b), b))
        edges.add((mapping(b), chosen[i + 1]))
    last = chosen[-1]
    edges.remove((mapping(last), last))
    mark = mapping(last)

    parent = [0] * n
    for u, v in edges:
        assert parent[v - 1] == 0
        parent[v - 1] = u
    roots = [v for v in range(1, n + 1) if parent[v - 1] == 0]
    if len(roots) != 1:
        raise RuntimeError("unhooked graph is not a tree")
    tree = RootedTree(n, roots[0], tuple(parent), SOURCE)
    assert is_parking_function(tree.as_digraph(), s)
    return PsiInverseResult(
        tree=tree,
        sequence=tuple(s),
        mark=mark,
        loose=frozenset(w for (_, w) in (e for es in loose.values() for e in es)),
        rewired=tuple(chosen),
        extended=tuple(s),
    )


# -- canonical extension of short sequences -----------------------------------------


def _walk_costs(D: Digraph, start: int, occupied_mask: int, special: frozenset) -> dict[int, int]:
    """Free spots reachable from start through occupied vertices, mapped to
    the minimal number of special edges on such a walk (0-1 BFS)."""
    start_bit = 1 << (start - 1)
    if not occupied_mask & start_bit:
        return {start: 0}
    best: dict[int, int] = {start: 0}
    spots: dict[int, int] = {}
    queue: deque[int] = deque([start])
    while queue:
        u = queue.popleft()
        du = best[u]
        for w in D.successors(u):
            cost = du + (1 if (u, w) in special else 0)
            if best.get(w, 1 << 30) <= cost:
                continue
            best[w] = cost
            if occupied_mask >> (w - 1) & 1:
                if cost == du:
                    queue.appendleft(w)
                else:
                    queue.append(w)
            else:
                spots[w] = cost
    return spots


def _completion_possible(closure: tuple[int, ...], rest: Sequence[int], occupied_mask: int, n: int) -> bool:
    if not rest:
        return True
    free = ~occupied_mask
    adj = [closure[p] & free for p in rest]
    size, _, _ = max_bipartite_matching(adj, n)
    return size == len(rest)


def canonical_parking(D: Digraph, s: Sequence[int], special: frozenset) -> list[int]:
    """Park the drivers one canonical spot at a time.

    Each driver may stop on any free spot that still lets everyone after
    park; among those, it stops where the walk crosses the fewest special
    edges, and on the smallest label among ties.  Returns the spot chosen
    per driver.  s must park on D.
    """
    closure = D.closure()
    n = D.n
    occupied = 0
    taken: list[int] = []
    for i, pref in enumerate(s):
        options = _walk_costs(D, pref, occupied, special)
        rest = s[i + 1:]
        feasible = {
            x: c
            for x, c in options.items()
            if _completion_possible(closure, rest, occupied | 1 << (x - 1), n)
        }
        assert feasible, "a parking function always leaves a workable spot"
        low = min(feasible.values())
        spot = min(x for x, c in feasible.items() if c == low)
        occupied |= 1 << (spot - 1)
        taken.append(spot)
    return taken


def extend_sequence(tree: RootedTree, s: Sequence[int], mark: int) -> tuple[int, ...]:
    """Extend a short parking function to a full one, reversibly.

    The drivers of s are parked canonically, avoiding the edges of the
    root-to-mark path whenever possible; the vertices left empty are then
    appended in increasing order.  The result parks every spot.
    """
    if tree.orientation != SOURCE:
        raise ValueError("extend_sequence expects a source tree")
    n = tree.n
    if not (1 <= mark <= n):
        raise ValueError(f"mark {mark} out of range 1..{n}")
    D = tree.as_digraph()
    if not is_parking_function(D, s):
        raise ValueError("sequence is not a parking function on the source tree")
    path = tree.root_path(mark)
    special = frozenset(zip(path, path[1:]))
    taken = canonical_parking(D, s, special)
    free = sorted(set(range(1, n + 1)) - set(taken))
    return tuple(s) + tuple(free)


def psi_nm(tree: RootedTree, s: Sequence[int], mark: int) -> PsiResult:
    """psi for sequences of any length up to n.

    The sequence is first extended canonically to full length, then rewired;
    the reported sequence stays the original one, which still parks on the
    resulting digraph.
    """
    full = extend_sequence(tree, s, mark)
    res = psi(tree, full, mark)
    return PsiResult(
        mapping=res.mapping,
        digraph=res.digraph,
        sequence=tuple(s),
        balanced=res.balanced,
        rewired=res.rewired,
        extended=full,
    )


def psi_nm_inverse(D: Digraph, s: Sequence[int]) -> PsiInverseResult:
    """Undo psi_nm: re-extend on the mapping side, unhook, drop the padding.

    The canonical extension is replayed on the inverse mapping digraph with
    the cycle edges playing the role of the root path, which reproduces the
    padding appended on the tree side.
    """
    mapping = MappingFn.from_inverse_digraph(D)
    if not is_parking_function(D, s):
        raise ValueError("sequence is not a parking function on the digraph")
    special = frozenset(
        (mapping(w), w) for cyc in mapping.cycles for w in cyc
    )
    taken = canonical_parking(D, s, special)
    free = sorted(set(range(1, D.n + 1)) - set(taken))
    full = tuple(s) + tuple(free)
    res = psi_inverse(D, full)
    return PsiInverseResult(
        tree=res.tree,
        sequence=tuple(s),
        mark=res.mark,
        loose=res.loose,
        rewired=res.rewired,
        extended=full,
    )
