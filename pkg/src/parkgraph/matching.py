"""Maximum bipartite matching (Hopcroft-Karp) over bitmask adjacency.

The left side is a list of drivers, the right side the vertices 1..n.
Adjacency is given as one bitmask per driver (bit v-1 = vertex v allowed),
which keeps the inner loops allocation-free for the enumeration sweeps.
"""

from __future__ import annotations

from collections import deque
from typing import Sequence

INF = 1 << 30


def max_bipartite_matching(adj: Sequence[int], n: int) -> tuple[int, list[int], list[int]]:
    """Compute a maximum matching.

    Returns (size, pair_driver, pair_vertex) where pair_driver[i] is the
    vertex matched to driver i (0 when unmatched) and pair_vertex[v] the
    driver index matched to vertex v (-1 when unmatched).  Deterministic:
    drivers are scanned in index order and vertices in ascending label order.
    """
    m = len(adj)
    pair_driver = [0] * m
    pair_vertex = [-1] * (n + 1)
    if m == 0:
        return 0, pair_driver, pair_vertex
    dist = [0] * m
    dist_nil = INF

    def bfs() -> bool:
        nonlocal dist_nil
        dist_nil = INF
        queue: deque[int] = deque()
        for u in range(m):
            if pair_driver[u] == 0:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = INF
        while queue:
            u = queue.popleft()
            if dist[u] >= dist_nil:
                continue
            mask = adj[u]
            while mask:
                b = mask & -mask
                mask ^= b
                w = pair_vertex[b.bit_length()]
                if w == -1:
                    if dist_nil == INF:
                        dist_nil = dist[u] + 1
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist_nil != INF

    def dfs(u: int) -> bool:
        next_layer = dist[u] + 1
        mask = adj[u]
        while mask:
            b = mask & -mask
            mask ^= b
            v = b.bit_length()
            w = pair_vertex[v]
            if w == -1:
                if next_layer == dist_nil:
                    pair_driver[u] = v
                    pair_vertex[v] = u
                    return True
            elif dist[w] == next_layer and dfs(w):
                pair_driver[u] = v
                pair_vertex[v] = u
                return True
        dist[u] = INF
        return False

    size = 0
    while bfs():
        for u in range(m):
            if pair_driver[u] == 0 and dfs(u):
                size += 1
    return size, pair_driver, pair_vertex


def deficiency_set(
    adj: Sequence[int], pair_driver: list[int], pair_vertex: list[int]
) -> tuple[list[int], int]:
    """Drivers reachable from the unmatched ones along alternating paths.

    Given a maximum matching, returns (driver_indices, vertex_mask) where
    vertex_mask covers every vertex adjacent to those drivers.  By Koenig's
    argument the driver set strictly outnumbers the vertex set, which turns
    a failed matching into an explicit counting violation.
    """
    m = len(adj)
    in_set = [False] * m
    queue = [u for u in range(m) if pair_driver[u] == 0]
    for u in queue:
        in_set[u] = True
    seen_mask = 0
    while queue:
        u = queue.pop()
        mask = adj[u] & ~seen_mask
        seen_mask |= adj[u]
        while mask:
            b = mask & -mask
            mask ^= b
            w = pair_vertex[b.bit_length()]
            # every vertex adjacent to the set is matched, else the matching
            # would admit an augmenting path
            assert w != -1
            if not in_set[w]:
                in_set[w] = True
                queue.append(w)
    return [u for u in range(m) if in_set[u]], seen_mask
