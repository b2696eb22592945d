"""Parking-function checkers, certificates, and the deterministic simulator.

A sequence s of preferred vertices parks on a digraph D exactly when the
bipartite graph joining driver i to every vertex reachable from s_i admits a
matching that saturates the drivers.  The checkers here run that matching and
turn its outcome into certificates: a replayable parking schedule on success,
a counting violation on failure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .digraph import Digraph, vertices_of
from .families import RootedTree, SOURCE
from .matching import deficiency_set, max_bipartite_matching


@dataclass(frozen=True)
class ParkingOutcome:
    """A successful parking: spot per driver plus the walk that reached it.

    assignment[i] is the vertex where driver i parked (drivers are 0-indexed
    here; labels stay 1-based).  walks[i] starts at the driver's preferred
    vertex, travels only through spots occupied at that moment, and ends on
    the assigned vertex.
    """

    assignment: tuple[int, ...]
    walks: tuple[tuple[int, ...], ...]

    def uses_edge(self, u: int, v: int) -> bool:
        return any(
            walk[k] == u and walk[k + 1] == v
            for walk in self.walks
            for k in range(len(walk) - 1)
        )

    def to_dict(self) -> dict:
        return {"assignment": list(self.assignment), "walks": [list(w) for w in self.walks]}


@dataclass(frozen=True)
class HallViolator:
    """A vertex set whose reachable region is preferred by too many drivers."""

    vertices: frozenset[int]
    reach: frozenset[int]
    demand: int

    def to_dict(self) -> dict:
        return {
            "B": sorted(self.vertices),
            "reach": sorted(self.reach),
            "demand": self.demand,
        }


@dataclass(frozen=True)
class SimulationRun:
    """Deterministic process result plus the edges used after a failed first try."""

    outcome: ParkingOutcome
    highlighted: frozenset[tuple[int, int]]


def _validate_sequence(D: Digraph, s: Sequence[int]) -> None:
    for x in s:
        if not (1 <= x <= D.n):
            raise ValueError(f"preference {x} out of range 1..{D.n}")


def driver_adjacency(D: Digraph, s: Sequence[int]) -> list[int]:
    closure = D.closure()
    return [closure[x] for x in s]


def is_parking_function(D: Digraph, s: Sequence[int]) -> bool:
    """Decide whether s parks on D.

    Empty sequences park trivially; more drivers than vertices never park.
    """
    _validate_sequence(D, s)
    m = len(s)
    if m == 0:
        return True
    if m > D.n:
        return False
    size, _, _ = max_bipartite_matching(driver_adjacency(D, s), D.n)
    return size == m


def hall_witness(D: Digraph, s: Sequence[int]) -> HallViolator | None:
    """A counting violation when s does not park, None when it does."""
    _validate_sequence(D, s)
    m = len(s)
    if m == 0:
        return None
    adj = driver_adjacency(D, s)
    size, pair_driver, pair_vertex = max_bipartite_matching(adj, D.n)
    if size == m:
        return None
    drivers, reach_mask = deficiency_set(adj, pair_driver, pair_vertex)
    demand = sum(1 for x in s if reach_mask >> (x - 1) & 1)
    witness = HallViolator(
        vertices=frozenset(s[i] for i in drivers),
        reach=vertices_of(reach_mask),
        demand=demand,
    )
    assert witness.demand > len(witness.reach)
    return witness


def _frontier(D: Digraph, start: int, occupied: set[int]) -> dict[int, tuple[int, ...]]:
    """Unoccupied spots reachable from start through occupied vertices only.

    Maps each such spot to a walk from start ending there.  When the start is
    free the driver must stop immediately, so the frontier is just {start}.
    """
    if start not in occupied:
        return {start: (start,)}
    parents: dict[int, int] = {start: 0}
    spots: dict[int, tuple[int, ...]] = {}
    queue = [start]
    while queue:
        u = queue.pop(0)
        for w in D.successors(u):
            if w in parents:
                continue
            parents[w] = u
            if w in occupied:
                queue.append(w)
            else:
                walk = [w]
                back = u
                while back:
                    walk.append(back)
                    back = parents[back]
                spots[w] = tuple(reversed(walk))
    return spots


def parking_schedule(D: Digraph, s: Sequence[int]) -> ParkingOutcome | None:
    """A replay-valid parking of s on D, or None when s does not park.

    Mirrors how a saturating matching is converted into an actual run of the
    process: each driver parks on the first free spot of a walk toward the
    vertex it is matched with, rematching any later driver that held that
    spot.  Ties are broken toward the smallest vertex label, so the schedule
    is deterministic.
    """
    _validate_sequence(D, s)
    m = len(s)
    if m > D.n:
        return None
    adj = driver_adjacency(D, s)
    size, pair_driver, _ = max_bipartite_matching(adj, D.n)
    if size < m:
        return None
    closure = D.closure()
    matched = list(pair_driver)
    occupied: set[int] = set()
    assignment: list[int] = []
    walks: list[tuple[int, ...]] = []
    for i in range(m):
        target_bit = 1 << (matched[i] - 1)
        options = _frontier(D, s[i], occupied)
        # keep spots that can still reach the matched vertex
        candidates = [x for x in options if closure[x] & target_bit]
        assert candidates, "a saturating matching always leaves a reachable free spot"
        x = min(candidates)
        if x != matched[i]:
            for j in range(i + 1, m):
                if matched[j] == x:
                    matched[j] = matched[i]
                    break
        occupied.add(x)
        assignment.append(x)
        walks.append(options[x])
    return ParkingOutcome(tuple(assignment), tuple(walks))


def replay_validate(D: Digraph, s: Sequence[int], outcome: ParkingOutcome) -> bool:
    """Replay an outcome against the process rules; False on any malformation.

    Every walk must start at the driver's preference, follow edges of D
    through spots occupied at that moment, and end by parking on a free spot
    equal to the assigned one.
    """
    if len(outcome.assignment) != len(s) or len(outcome.walks) != len(s):
        return False
    occupied: set[int] = set()
    for i, pref in enumerate(s):
        walk = outcome.walks[i]
        if len(walk) == 0 or walk[0] != pref:
            return False
        for k in range(len(walk) - 1):
            if (walk[k], walk[k + 1]) not in D.edges:
                return False
            if walk[k] not in occupied:
                return False
        last = walk[-1]
        if last in occupied or last != outcome.assignment[i]:
            return False
        if not (1 <= last <= D.n):
            return False
        occupied.add(last)
    return True


def is_deterministic(D: Digraph) -> bool:
    """True when every vertex has at most one out-edge."""
    return D.max_out_degree() <= 1


def simulate_deterministic(D: Digraph, s: Sequence[int]) -> SimulationRun | None:
    """Run the parking process on a graph where drivers never have a choice.

    Returns None when some driver loops through occupied spots or strands on
    an occupied dead end.  Edges traversed by a driver after finding the
    preferred spot taken are reported as highlighted.
    """
    if not is_deterministic(D):
        raise ValueError("simulation requires out-degree at most 1 everywhere")
    _validate_sequence(D, s)
    occupied: set[int] = set()
    assignment: list[int] = []
    walks: list[tuple[int, ...]] = []
    highlighted: set[tuple[int, int]] = set()
    for pref in s:
        cur = pref
        walk = [cur]
        seen = {cur}
        while cur in occupied:
            nxt = D.successors(cur)
            if not nxt:
                return None
            cur = nxt[0]
            if cur in seen:
                return None
            seen.add(cur)
            walk.append(cur)
        occupied.add(cur)
        assignment.append(cur)
        walks.append(tuple(walk))
        highlighted.update((walk[k], walk[k + 1]) for k in range(len(walk) - 1))
    return SimulationRun(
        outcome=ParkingOutcome(tuple(assignment), tuple(walks)),
        highlighted=frozenset(highlighted),
    )


def is_source_tree_pf(tree: RootedTree, s: Sequence[int]) -> bool:
    """Linear-time check on a source tree: no subtree may be oversubscribed."""
    if tree.orientation != SOURCE:
        raise ValueError("expected a source-oriented tree")
    n = tree.n
    for x in s:
        if not (1 <= x <= n):
            raise ValueError(f"preference {x} out of range 1..{n}")
    demand = [0] * (n + 1)
    for x in s:
        demand[x] += 1
    sizes = tree.subtree_sizes
    # accumulate demand from the deepest vertices upward
    for v in tree.depth_order_bottom_up:
        p = tree.parent[v - 1]
        if demand[v] > sizes[v]:
            return False
        if p:
            demand[p] += demand[v]
    return True


def is_prime(D: Digraph, s: Sequence[int]) -> bool:
    """Strict counting slack on every proper nonempty filter, plus parking."""
    _validate_sequence(D, s)
    if not is_parking_function(D, s):
        return False
    full = D.full_mask
    for mask in D.filter_masks():
        if mask == 0 or mask == full:
            continue
        demand = sum(1 for x in s if mask >> (x - 1) & 1)
        if demand >= mask.bit_count():
            return False
    return True


def is_parking_distribution(D: Digraph, f: Mapping[int, int]) -> bool:
    """Order-free variant: f gives the number of drivers preferring each vertex."""
    counts = [0] * (D.n + 1)
    for v, c in f.items():
        if not (1 <= v <= D.n):
            raise ValueError(f"vertex {v} out of range 1..{D.n}")
        if c < 0:
            raise ValueError(f"negative driver count for vertex {v}")
        counts[v] = c
    if sum(counts) > D.n:
        return False
    for mask in D.filter_masks():
        total = 0
        rest = mask
        while rest:
            b = rest & -rest
            rest ^= b
            total += counts[b.bit_length()]
        if total > mask.bit_count():
            return False
    return True


def is_classical_parking_function(n: int, s: Sequence[int]) -> bool:
    """Textbook criterion on the one-way street with n spots.

    Checks |{j : s_j >= i}| <= n-i+1 for every i.  Kept independent of the
    matching checker so the two can be played against each other on paths.
    """
    for x in s:
        if not (1 <= x <= n):
            raise ValueError(f"preference {x} out of range 1..{n}")
    return all(sum(1 for x in s if x >= i) <= n - i + 1 for i in range(1, n + 1))
