"""Rooted tree and mapping-digraph families, plus closed-form count helpers."""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

from .digraph import Digraph

SINK = "sink"
SOURCE = "source"
ORIENTATIONS = (SINK, SOURCE)


@dataclass(frozen=True)
class RootedTree:
    """Labeled rooted tree on vertices 1..n with a fixed edge orientation.

    parent[v-1] is the parent of v, with 0 in the root's slot.  A sink tree
    orients every edge child -> parent, a source tree the other way round.
    """

    n: int
    root: int
    parent: tuple[int, ...]
    orientation: str = SINK

    def __post_init__(self) -> None:
        if self.orientation not in ORIENTATIONS:
            raise ValueError(f"orientation must be one of {ORIENTATIONS}")
        n = self.n
        if n < 1:
            raise ValueError("tree needs at least one vertex")
        if not (1 <= self.root <= n):
            raise ValueError(f"root {self.root} out of range 1..{n}")
        if len(self.parent) != n:
            raise ValueError("parent array length must equal the vertex count")
        if self.parent[self.root - 1] != 0:
            raise ValueError("the root's parent slot must be 0")
        for v in range(1, n + 1):
            p = self.parent[v - 1]
            if v != self.root and not (1 <= p <= n):
                raise ValueError(f"vertex {v} has invalid parent {p}")
        # each vertex must reach the root in at most n steps
        for v in range(1, n + 1):
            cur, steps = v, 0
            while cur != self.root:
                cur = self.parent[cur - 1]
                steps += 1
                if steps > n:
                    raise ValueError("parent array contains a cycle")

    # -- structure ------------------------------------------------------------

    @cached_property
    def children(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.n + 1)]
        for v in range(1, self.n + 1):
            p = self.parent[v - 1]
            if p:
                out[p].append(v)
        return tuple(tuple(sorted(c)) for c in out)

    @cached_property
    def depths(self) -> tuple[int, ...]:
        d = [0] * (self.n + 1)
        stack = [self.root]
        while stack:
            u = stack.pop()
            for c in self.children[u]:
                d[c] = d[u] + 1
                stack.append(c)
        return tuple(d)

    @cached_property
    def depth_order_bottom_up(self) -> tuple[int, ...]:
        return tuple(sorted(range(1, self.n + 1), key=lambda v: -self.depths[v]))

    @cached_property
    def subtree_sizes(self) -> tuple[int, ...]:
        sizes = [1] * (self.n + 1)
        sizes[0] = 0
        for v in self.depth_order_bottom_up:
            p = self.parent[v - 1]
            if p:
                sizes[p] += sizes[v]
        return tuple(sizes)

    def subtree(self, u: int) -> frozenset[int]:
        """Vertices of the subtree hanging below u, u included."""
        if not (1 <= u <= self.n):
            raise ValueError(f"vertex {u} out of range 1..{self.n}")
        out = []
        stack = [u]
        while stack:
            v = stack.pop()
            out.append(v)
            stack.extend(self.children[v])
        return frozenset(out)

    def leaves(self) -> tuple[int, ...]:
        return tuple(v for v in range(1, self.n + 1) if not self.children[v])

    def root_path(self, v: int) -> tuple[int, ...]:
        """Vertices from the root down to v along tree edges."""
        if not (1 <= v <= self.n):
            raise ValueError(f"vertex {v} out of range 1..{self.n}")
        path = [v]
        while v != self.root:
            v = self.parent[v - 1]
            path.append(v)
        return tuple(reversed(path))

    def degree(self, v: int) -> int:
        return len(self.children[v]) + (0 if v == self.root else 1)

    def is_directed_path(self) -> bool:
        """True when the tree is a path rooted at one of its ends."""
        return all(len(self.children[v]) <= 1 for v in range(1, self.n + 1))

    @cached_property
    def _digraph(self) -> Digraph:
        if self.orientation == SINK:
            edges = ((v, self.parent[v - 1]) for v in range(1, self.n + 1) if v != self.root)
        else:
            edges = ((self.parent[v - 1], v) for v in range(1, self.n + 1) if v != self.root)
        return Digraph(self.n, edges)

    def as_digraph(self) -> Digraph:
        return self._digraph

    def flipped(self) -> "RootedTree":
        other = SOURCE if self.orientation == SINK else SINK
        return RootedTree(self.n, self.root, self.parent, other)

    # -- construction and text format -----------------------------------------

    @classmethod
    def from_undirected_edges(
        cls, n: int, root: int, edges: list[tuple[int, int]], orientation: str = SINK
    ) -> "RootedTree":
        adj: list[list[int]] = [[] for _ in range(n + 1)]
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)
        parent = [0] * n
        seen = {root}
        stack = [root]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    parent[w - 1] = u
                    stack.append(w)
        if len(seen) != n:
            raise ValueError("edge list does not span all vertices")
        return cls(n, root, tuple(parent), orientation)

    def to_line(self) -> str:
        """One-line form "root; p1 p2 ... pn" (0 marks the root slot)."""
        return f"{self.root}; {' '.join(str(p) for p in self.parent)}"

    @classmethod
    def from_line(cls, line: str, orientation: str = SINK) -> "RootedTree":
        try:
            root_part, parent_part = line.split(";")
            root = int(root_part)
            parent = tuple(int(p) for p in parent_part.split())
        except ValueError:
            raise ValueError(f"bad tree line {line!r}; expected 'root; p1 p2 ... pn'") from None
        return cls(len(parent), root, parent, orientation)


@dataclass(frozen=True)
class MappingFn:
    """A total function f on 1..n, with its two induced digraphs.

    The forward digraph has edges i -> f(i); the inverse digraph reverses
    them, giving every vertex exactly one incoming edge.  Each weakly
    connected component of either digraph carries exactly one cycle.
    """

    n: int
    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("mapping needs at least one vertex")
        if len(self.images) != self.n:
            raise ValueError("image list length must equal the vertex count")
        for v in self.images:
            if not (1 <= v <= self.n):
                raise ValueError(f"image {v} out of range 1..{self.n}")

    def __call__(self, v: int) -> int:
        return self.images[v - 1]

    @cached_property
    def _digraph(self) -> Digraph:
        return Digraph(self.n, ((i, self.images[i - 1]) for i in range(1, self.n + 1)))

    @cached_property
    def _inverse_digraph(self) -> Digraph:
        return Digraph(self.n, ((self.images[i - 1], i) for i in range(1, self.n + 1)))

    def digraph(self) -> Digraph:
        return self._digraph

    def inverse_digraph(self) -> Digraph:
        return self._inverse_digraph

    @cached_property
    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """The unique cycle of each component, as tuples of vertices."""
        color = [0] * (self.n + 1)  # 0 new, 1 on current path, 2 settled
        found: list[tuple[int, ...]] = []
        for start in range(1, self.n + 1):
            if color[start]:
                continue
            path: list[int] = []
            v = start
            while color[v] == 0:
                color[v] = 1
                path.append(v)
                v = self.images[v - 1]
            if color[v] == 1:
                found.append(tuple(path[path.index(v):]))
            for u in path:
                color[u] = 2
        return tuple(found)

    def cycle_vertices(self) -> frozenset[int]:
        return frozenset(v for cyc in self.cycles for v in cyc)

    @classmethod
    def from_inverse_digraph(cls, D: Digraph) -> "MappingFn":
        """Recover f from a digraph whose every vertex has in-degree one."""
        preds = [0] * (D.n + 1)
        for u, v in D.edges:
            if preds[v]:
                raise ValueError(f"vertex {v} has more than one incoming edge")
            preds[v] = u
        if len(D.edges) != D.n or any(p == 0 for p in preds[1:]):
            raise ValueError("not an inverse mapping digraph: in-degrees must all be 1")
        return cls(D.n, tuple(preds[1:]))

    def to_line(self) -> str:
        return " ".join(str(v) for v in self.images)

    @classmethod
    def from_line(cls, line: str) -> "MappingFn":
        try:
            images = tuple(int(v) for v in line.split())
        except ValueError:
            raise ValueError(f"bad mapping line {line!r}; expected 'f(1) f(2) ... f(n)'") from None
        return cls(len(images), images)


# -- exhaustive family generators ----------------------------------------------


def prufer_decode(seq: tuple[int, ...], n: int) -> list[tuple[int, int]]:
    """Edges of the labeled tree on 1..n encoded by a Prufer sequence."""
    if n == 1:
        return []
    degree = [1] * (n + 1)
    for a in seq:
        degree[a] += 1
    leaves = [v for v in range(1, n + 1) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for a in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, a))
        degree[a] -= 1
        if degree[a] == 1:
            heapq.heappush(leaves, a)
    u = heapq.heappop(leaves)
    v = heapq.heappop(leaves)
    edges.append((u, v))
    return edges


def all_rooted_trees(n: int, orientation: str = SINK) -> Iterator[RootedTree]:
    """All n^(n-1) labeled rooted trees, streamed one at a time.

    Unrooted trees come from Prufer sequences (each exactly once), crossed
    with the n choices of root.
    """
    if n < 1:
        raise ValueError("tree family needs n >= 1")

    def generate() -> Iterator[RootedTree]:
        for seq in itertools.product(range(1, n + 1), repeat=max(0, n - 2)):
            edges = prufer_decode(seq, n)
            for root in range(1, n + 1):
                yield RootedTree.from_undirected_edges(n, root, edges, orientation)

    return generate()


def all_mappings(n: int) -> Iterator[MappingFn]:
    """All n^n functions on 1..n, streamed."""
    if n < 1:
        raise ValueError("mapping family needs n >= 1")
    return (
        MappingFn(n, images)
        for images in itertools.product(range(1, n + 1), repeat=n)
    )


# -- canonical extremal instances ------------------------------------------------


def path_tree(n: int, orientation: str = SINK) -> RootedTree:
    """The path 1-2-...-n rooted at an end; as a sink tree this is the
    classical one-way street (edges i -> i+1, root n)."""
    if orientation == SINK:
        parent = tuple(v + 1 for v in range(1, n)) + (0,)
        return RootedTree(n, n, parent, SINK)
    parent = (0,) + tuple(range(1, n))
    return RootedTree(n, 1, parent, SOURCE)


def star_tree(n: int, orientation: str = SINK) -> RootedTree:
    """The star with center 1 (the root) and leaves 2..n."""
    parent = (0,) + (1,) * (n - 1)
    return RootedTree(n, 1, parent, orientation)


def cycle_mapping(n: int) -> MappingFn:
    """f(i) = i+1 cyclically; both induced digraphs are a single n-cycle."""
    return MappingFn(n, tuple(i % n + 1 for i in range(1, n + 1)))


def identity_mapping(n: int) -> MappingFn:
    """f = id; both induced digraphs are n disjoint self-loops."""
    return MappingFn(n, tuple(range(1, n + 1)))


# -- closed-form counts ------------------------------------------------------------


def falling_factorial(a: int, k: int) -> int:
    """a (a-1) ... (a-k+1); empty product for k = 0, zero once a factor hits 0."""
    if k < 0:
        raise ValueError("falling factorial needs k >= 0")
    out = 1
    for i in range(k):
        out *= a - i
    return out


def classical_count(n: int, m: int) -> int:
    """Number of sequences of m preferences that park on the n-spot street:
    (n - m + 1) (n + 1)^(m-1), read as 1 when m = 0."""
    if m == 0:
        return 1
    return (n - m + 1) * (n + 1) ** (m - 1)


def source_star_count(n: int, m: int) -> int:
    """Parking count on the source-oriented star: sum over how many drivers
    aim at the center, the rest taking distinct leaves."""
    return sum(math.comb(m, i) * falling_factorial(n - 1, m - i) for i in range(m + 1))


def sink_star_lower(n: int, m: int) -> int:
    """Lower bound for sink trees, attained by the star:
    n^(m falling) + C(m,2) (n-1)^((m-1) falling)."""
    if m == 0:
        return 1
    return falling_factorial(n, m) + math.comb(m, 2) * falling_factorial(n - 1, m - 1)
