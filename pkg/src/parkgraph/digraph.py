"""Directed graphs on the vertex set {1..n} with cached reachability closures."""

from __future__ import annotations

from typing import Iterable


def vertex_bit(v: int) -> int:
    """Bitmask with only vertex v set (bit v-1)."""
    return 1 << (v - 1)


def mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << (v - 1)
    return mask


def vertices_of(mask: int) -> frozenset[int]:
    out = []
    while mask:
        b = mask & -mask
        out.append(b.bit_length())
        mask ^= b
    return frozenset(out)


class Digraph:
    """Immutable digraph on vertices 1..n.

    Edges are ordered pairs; self-loops are allowed, duplicate edges are not.
    The reachability closure is computed lazily (one DFS per vertex, cheap on
    the sparse graphs this library sweeps) and cached as per-vertex bitmasks,
    bit v-1 standing for vertex v.  Once the closure is built the instance is
    effectively frozen and safe to share across worker processes.
    """

    __slots__ = ("n", "edges", "_succ", "_closure", "_filter_masks")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()) -> None:
        if n < 1:
            raise ValueError("vertex count must be at least 1")
        edge_set = frozenset((int(u), int(v)) for u, v in edges)
        for u, v in edge_set:
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"edge ({u}, {v}) leaves the vertex range 1..{n}")
        self.n = n
        self.edges = edge_set
        succ: list[list[int]] = [[] for _ in range(n + 1)]
        for u, v in edge_set:
            succ[u].append(v)
        self._succ: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(s)) for s in succ)
        self._closure: tuple[int, ...] | None = None
        self._filter_masks: tuple[int, ...] | None = None

    # -- basic structure ----------------------------------------------------

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def successors(self, v: int) -> tuple[int, ...]:
        self._check_vertex(v)
        return self._succ[v]

    def out_degree(self, v: int) -> int:
        return len(self.successors(v))

    def max_out_degree(self) -> int:
        return max(len(s) for s in self._succ[1:])

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edges

    def without_edge(self, u: int, v: int) -> "Digraph":
        if (u, v) not in self.edges:
            raise ValueError(f"edge ({u}, {v}) is not present")
        return Digraph(self.n, self.edges - {(u, v)})

    def reversed(self) -> "Digraph":
        return Digraph(self.n, ((v, u) for u, v in self.edges))

    def _check_vertex(self, v: int) -> None:
        if not (1 <= v <= self.n):
            raise ValueError(f"vertex {v} out of range 1..{self.n}")

    # -- reachability -------------------------------------------------------

    def closure(self) -> tuple[int, ...]:
        """Per-vertex reachability bitmasks, index by vertex (slot 0 unused)."""
        if self._closure is None:
            succ = self._succ
            masks = [0] * (self.n + 1)
            for v in range(1, self.n + 1):
                seen = 1 << (v - 1)
                stack = [v]
                while stack:
                    u = stack.pop()
                    for w in succ[u]:
                        b = 1 << (w - 1)
                        if not seen & b:
                            seen |= b
                            stack.append(w)
                masks[v] = seen
            self._closure = tuple(masks)
        return self._closure

    def reach_mask(self, v: int) -> int:
        self._check_vertex(v)
        return self.closure()[v]

    def reachable_from(self, v: int) -> frozenset[int]:
        """All vertices reachable from v by a directed path, v included."""
        return vertices_of(self.reach_mask(v))

    def reachable_from_set(self, vertices: Iterable[int]) -> frozenset[int]:
        """Union of the reachable sets of the given vertices; empty for empty input."""
        mask = 0
        closure = self.closure()
        for v in vertices:
            self._check_vertex(v)
            mask |= closure[v]
        return vertices_of(mask)

    def quasiorder_leq(self, i: int, j: int) -> bool:
        """True when there is a directed path from i to j (reflexive)."""
        self._check_vertex(j)
        return bool(self.reach_mask(i) & (1 << (j - 1)))

    # -- filters of the reachability quasiorder ------------------------------

    def filter_masks(self) -> tuple[int, ...]:
        """Every distinct reachable-set mask, i.e. all unions of per-vertex
        closures, computed without touching the 2^n vertex subsets."""
        if self._filter_masks is None:
            closure = self.closure()
            sets = {0}
            for v in range(1, self.n + 1):
                g = closure[v]
                sets |= {s | g for s in sets}
            self._filter_masks = tuple(sorted(sets))
        return self._filter_masks

    def filters(self) -> list[frozenset[int]]:
        """Distinct reachable sets R(B) over all B, as vertex sets.

        Always contains the empty set and the full vertex set, and is closed
        under union.  Sorted by size then contents for reproducible output.
        """
        out = [vertices_of(m) for m in self.filter_masks()]
        out.sort(key=lambda f: (len(f), sorted(f)))
        return out

    # -- text edge-list format ----------------------------------------------

    @classmethod
    def from_edge_list(cls, text: str) -> "Digraph":
        """Parse the edge-list format: first line n, then one "u v" per line.

        "#" starts a comment; blank lines are skipped.
        """
        n: int | None = None
        edges: list[tuple[int, int]] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                values = [int(p) for p in parts]
            except ValueError:
                raise ValueError(f"line {lineno}: expected integers, got {raw!r}") from None
            if n is None:
                if len(values) != 1:
                    raise ValueError(f"line {lineno}: first line must hold the vertex count")
                n = values[0]
            else:
                if len(values) != 2:
                    raise ValueError(f"line {lineno}: expected 'u v', got {raw!r}")
                edges.append((values[0], values[1]))
        if n is None:
            raise ValueError("empty edge-list input")
        return cls(n, edges)

    def to_edge_list(self) -> str:
        lines = [str(self.n)]
        lines.extend(f"{u} {v}" for u, v in sorted(self.edges))
        return "\n".join(lines) + "\n"

    # -- value semantics ------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, edges={sorted(self.edges)})"
