"""Exhaustive counting sweeps over digraph families, with sharded parallelism.

Counts are exact.  A single digraph is counted by iterating weakly
increasing sequences only and multiplying by the number of orderings, which
is sound because parkability never depends on driver order.  Family sweeps
shard the Prufer/function index space across worker processes; results are
merged by summation, so worker count never changes a value.
"""

from __future__ import annotations

import itertools
import math
import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .bijections import (
    deletable_cycle_edges,
    psi,
    psi_inverse,
    psi_nm,
    psi_nm_inverse,
    tau,
    tau_inverse,
)
from .check import is_parking_distribution, is_parking_function, simulate_deterministic
from .digraph import Digraph
from .families import (
    SINK,
    SOURCE,
    MappingFn,
    RootedTree,
    classical_count,
    cycle_mapping,
    falling_factorial,
    identity_mapping,
    path_tree,
    prufer_decode,
    sink_star_lower,
    source_star_count,
    star_tree,
)
from .matching import max_bipartite_matching

FAMILIES = ("sink-trees", "source-trees", "mappings", "inverse-mappings")
DEFAULT_FAMILY_CAP = 6
DEFAULT_SINGLE_CAP = 10
IDENTITIES = (
    "tilde-nm",
    "sink-nm",
    "tree-inequality",
    "extremal-bounds",
    "mapping-bounds",
    "catalan-distributions",
)


class CapExceededError(RuntimeError):
    """A sweep was asked to exceed its configured safety cap."""


@dataclass(frozen=True)
class CountResult:
    value: int
    instances: int
    millis: float
    shards: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "count": self.value,
            "instances": self.instances,
            "millis": round(self.millis, 3),
            "shards": list(self.shards),
        }


@dataclass(frozen=True)
class VerifyRow:
    identity: str
    n: int
    m: int
    lhs: int
    rhs: int
    passed: bool
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "n": self.n,
            "m": self.m,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "passed": self.passed,
            "note": self.note,
        }


@dataclass(frozen=True)
class VerifyReport:
    identity: str
    rows: tuple[VerifyRow, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "passed": self.passed,
            "rows": [r.to_dict() for r in self.rows],
        }


@dataclass(frozen=True)
class ScanRow:
    n: int
    m: int
    tree: str
    sink_count: int
    source_count: int
    sign: int

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "tree": self.tree,
            "sink_count": self.sink_count,
            "source_count": self.source_count,
            "sign": self.sign,
        }


@dataclass(frozen=True)
class SweepResult:
    checked: int
    failures: int
    duplicates: int = 0
    outputs: int = 0
    per_length: tuple[tuple[int, int], ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "checked": self.checked,
            "failures": self.failures,
            "duplicates": self.duplicates,
            "outputs": self.outputs,
        }


# -- family index space -----------------------------------------------------------


def family_size(family: str, n: int) -> int:
    if family in ("sink-trees", "source-trees"):
        return n ** (n - 1)
    if family in ("mappings", "inverse-mappings"):
        return n**n
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def tree_from_index(n: int, idx: int, orientation: str) -> RootedTree:
    """Decode index < n^(n-1) into (Prufer sequence, root)."""
    root = idx % n + 1
    code = idx // n
    seq = []
    for _ in range(max(0, n - 2)):
        seq.append(code % n + 1)
        code //= n
    edges = prufer_decode(tuple(seq), n)
    return RootedTree.from_undirected_edges(n, root, edges, orientation)


def mapping_from_index(n: int, idx: int) -> MappingFn:
    images = []
    for _ in range(n):
        images.append(idx % n + 1)
        idx //= n
    return MappingFn(n, tuple(images))


def instance_from_index(family: str, n: int, idx: int) -> Digraph:
    if family == "sink-trees":
        return tree_from_index(n, idx, SINK).as_digraph()
    if family == "source-trees":
        return tree_from_index(n, idx, SOURCE).as_digraph()
    if family == "mappings":
        return mapping_from_index(n, idx).digraph()
    if family == "inverse-mappings":
        return mapping_from_index(n, idx).inverse_digraph()
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


# -- counting a single digraph ------------------------------------------------------


def _orderings(combo: tuple[int, ...]) -> int:
    out = math.factorial(len(combo))
    for c in Counter(combo).values():
        out //= math.factorial(c)
    return out


def count_pf(D: Digraph, m: int, cap: int | None = DEFAULT_SINGLE_CAP) -> int:
    """Exact number of length-m sequences that park on D.

    Only weakly increasing sequences are checked; each contributes the
    number of its orderings, since parkability is order-independent.
    """
    if m < 0:
        raise ValueError("length must be nonnegative")
    if cap is not None and D.n > cap:
        raise CapExceededError(f"n={D.n} exceeds the single-digraph cap {cap}")
    if m == 0:
        return 1
    if m > D.n:
        return 0
    closure = D.closure()
    n = D.n
    total = 0
    for combo in itertools.combinations_with_replacement(range(1, n + 1), m):
        adj = [closure[p] for p in combo]
        size, _, _ = max_bipartite_matching(adj, n)
        if size == m:
            total += _orderings(combo)
    return total


def count_distributions(D: Digraph, m: int, cap: int | None = DEFAULT_SINGLE_CAP) -> int:
    """Number of driver-count distributions of total m that park on D."""
    if cap is not None and D.n > cap:
        raise CapExceededError(f"n={D.n} exceeds the single-digraph cap {cap}")
    if m == 0:
        return 1
    total = 0
    for combo in itertools.combinations_with_replacement(range(1, D.n + 1), m):
        if is_parking_distribution(D, Counter(combo)):
            total += 1
    return total


# -- parallel plumbing ---------------------------------------------------------------


def default_workers() -> int:
    env = os.environ.get("PARKGRAPH_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def _chunk_ranges(total: int, pieces: int) -> list[tuple[int, int]]:
    pieces = max(1, min(pieces, total)) if total else 1
    step = -(-total // pieces) if total else 1
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)] or [(0, 0)]


def _run_chunks(fn, jobs: list, workers: int) -> list:
    if workers <= 1 or len(jobs) <= 1:
        return [fn(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


def _check_family_cap(family: str, n: int, cap: int | None) -> None:
    if cap is not None and n > cap:
        raise CapExceededError(
            f"family sweep at n={n} exceeds the cap {cap}; pass a higher cap to override"
        )


def _sum_chunk(job: tuple) -> int:
    family, n, m, lo, hi = job
    total = 0
    for idx in range(lo, hi):
        total += count_pf(instance_from_index(family, n, idx), m, cap=None)
    return total


def _counts_chunk(job: tuple) -> list[int]:
    family, n, m, lo, hi = job
    return [count_pf(instance_from_index(family, n, idx), m, cap=None) for idx in range(lo, hi)]


def family_sum(
    family: str,
    n: int,
    m: int,
    workers: int = 1,
    cap: int | None = DEFAULT_FAMILY_CAP,
) -> CountResult:
    """Sum of count_pf over a whole family, sharded across workers."""
    _check_family_cap(family, n, cap)
    total = family_size(family, n)
    start = time.perf_counter()
    jobs = [(family, n, m, lo, hi) for lo, hi in _chunk_ranges(total, max(workers, 1) * 4)]
    shards = _run_chunks(_sum_chunk, jobs, workers)
    millis = (time.perf_counter() - start) * 1000.0
    return CountResult(value=sum(shards), instances=total, millis=millis, shards=tuple(shards))


def family_counts(
    family: str,
    n: int,
    m: int,
    workers: int = 1,
    cap: int | None = DEFAULT_FAMILY_CAP,
) -> list[int]:
    """count_pf per family member, in index order."""
    _check_family_cap(family, n, cap)
    total = family_size(family, n)
    jobs = [(family, n, m, lo, hi) for lo, hi in _chunk_ranges(total, max(workers, 1) * 4)]
    out: list[int] = []
    for chunk in _run_chunks(_counts_chunk, jobs, workers):
        out.extend(chunk)
    return out


# -- identity verification -------------------------------------------------------------


def _range_list(spec, default):
    if spec is None:
        return list(default)
    return list(spec)


def verify_identity(
    name: str,
    ns,
    ms=None,
    workers: int = 1,
    cap: int | None = DEFAULT_FAMILY_CAP,
) -> VerifyReport:
    """Check one named identity or bound over ranges of n and m.

    ms defaults to 0..n for the two sum identities and the bounds, and to
    m = n where only full sequences make sense.
    """
    if name not in IDENTITIES:
        raise ValueError(f"unknown identity {name!r}; expected one of {IDENTITIES}")
    rows: list[VerifyRow] = []
    for n in ns:
        m_values = _range_list(ms, range(n + 1))
        if name == "tilde-nm":
            for m in m_values:
                lhs = n * family_sum("source-trees", n, m, workers, cap).value
                rhs = family_sum("inverse-mappings", n, m, workers, cap).value
                rows.append(VerifyRow(name, n, m, lhs, rhs, lhs == rhs))
        elif name == "sink-nm":
            for m in m_values:
                lhs = n * family_sum("sink-trees", n, m, workers, cap).value
                rhs = family_sum("mappings", n, m, workers, cap).value
                rows.append(VerifyRow(name, n, m, lhs, rhs, lhs == rhs))
        elif name == "tree-inequality":
            rows.append(_verify_tree_inequality(n, workers, cap))
        elif name == "extremal-bounds":
            for m in m_values:
                rows.extend(_verify_extremal_bounds(n, m, workers, cap))
        elif name == "mapping-bounds":
            for m in m_values:
                rows.extend(_verify_mapping_bounds(n, m, workers, cap))
        elif name == "catalan-distributions":
            catalan = math.comb(2 * n, n) // (n + 1)
            got = count_distributions(path_tree(n).as_digraph(), n)
            rows.append(VerifyRow(name, n, n, got, catalan, got == catalan))
    return VerifyReport(identity=name, rows=tuple(rows))


def _verify_tree_inequality(n: int, workers: int, cap: int | None) -> VerifyRow:
    sink = family_counts("sink-trees", n, n, workers, cap)
    source = family_counts("source-trees", n, n, workers, cap)
    bad = 0
    for idx, (p_sink, p_source) in enumerate(zip(sink, source)):
        tree = tree_from_index(n, idx, SINK)
        if p_sink > p_source:
            bad += 1
        elif (p_sink == p_source) != tree.is_directed_path():
            bad += 1
    lhs, rhs = sum(sink), sum(source)
    equal_expected = n in (1, 2)
    ok = bad == 0 and lhs <= rhs and (lhs == rhs) == equal_expected
    return VerifyRow(
        "tree-inequality", n, n, lhs, rhs, ok, note=f"{bad} per-tree violations"
    )


def _verify_extremal_bounds(n: int, m: int, workers: int, cap: int | None) -> list[VerifyRow]:
    rows = []
    upper = classical_count(n, m)

    source = family_counts("source-trees", n, m, workers, cap)
    lower = source_star_count(n, m)
    bad = sum(1 for p in source if not lower <= p <= upper)
    path_count = count_pf(path_tree(n, SOURCE).as_digraph(), m, cap=None)
    star_count = count_pf(star_tree(n, SOURCE).as_digraph(), m, cap=None)
    ok = bad == 0 and path_count == upper and star_count == lower
    rows.append(
        VerifyRow(
            "extremal-bounds", n, m, lower, upper, ok,
            note=f"source trees, {bad} out of bounds; path={path_count} star={star_count}",
        )
    )

    sink = family_counts("sink-trees", n, m, workers, cap)
    lower_sink = sink_star_lower(n, m)
    bad = sum(1 for p in sink if not lower_sink <= p <= upper)
    path_count = count_pf(path_tree(n, SINK).as_digraph(), m, cap=None)
    star_count = count_pf(star_tree(n, SINK).as_digraph(), m, cap=None)
    ok = bad == 0 and path_count == upper and star_count == lower_sink
    rows.append(
        VerifyRow(
            "extremal-bounds", n, m, lower_sink, upper, ok,
            note=f"sink trees, {bad} out of bounds; path={path_count} star={star_count}",
        )
    )
    return rows


def _verify_mapping_bounds(n: int, m: int, workers: int, cap: int | None) -> list[VerifyRow]:
    rows = []
    lower, upper = math.factorial(m), n**m
    for family, digraph_of in (
        ("inverse-mappings", lambda f: f.inverse_digraph()),
        ("mappings", lambda f: f.digraph()),
    ):
        counts = family_counts(family, n, m, workers, cap)
        bad = sum(1 for p in counts if not lower <= p <= upper)
        cyc = count_pf(digraph_of(cycle_mapping(n)), m, cap=None)
        ident = count_pf(digraph_of(identity_mapping(n)), m, cap=None)
        # the identity map realizes the family minimum: falling factorial,
        # which collapses to m! exactly when m = n
        ident_expected = falling_factorial(n, m)
        ok = (
            bad == 0
            and cyc == upper
            and ident == ident_expected
            and ident == min(counts)
            and (m != n or ident == lower)
        )
        rows.append(
            VerifyRow(
                "mapping-bounds", n, m, lower, upper, ok,
                note=f"{family}, {bad} out of bounds; cycle={cyc} identity={ident}",
            )
        )
    return rows


# -- open-question data table ------------------------------------------------------------


SCAN_CAP = 5


def _scan_chunk(job: tuple) -> list[ScanRow]:
    n, m_values, lo, hi = job
    rows = []
    for idx in range(lo, hi):
        sink = tree_from_index(n, idx, SINK)
        source = sink.flipped()
        line = sink.to_line()
        for m in m_values:
            a = count_pf(sink.as_digraph(), m, cap=None)
            b = count_pf(source.as_digraph(), m, cap=None)
            rows.append(ScanRow(n, m, line, a, b, (a > b) - (a < b)))
    return rows


def open_question_scan(ns, ms=None, workers: int = 1) -> list[ScanRow]:
    """P(T,m) against P(reversed T, m) for every rooted tree; data only.

    No side is asserted to dominate; this emits the comparison table for
    the regime where neither bound argument applies.
    """
    rows: list[ScanRow] = []
    for n in ns:
        if n > SCAN_CAP:
            raise CapExceededError(f"scan capped at n <= {SCAN_CAP}")
        m_values = _range_list(ms, range(n + 1))
        total = family_size("sink-trees", n)
        jobs = [(n, m_values, lo, hi) for lo, hi in _chunk_ranges(total, max(workers, 1) * 4)]
        for chunk in _run_chunks(_scan_chunk, jobs, workers):
            rows.extend(chunk)
    return rows


# -- bijection round-trip sweeps -----------------------------------------------------------


def _tau_chunk(job: tuple) -> tuple[int, int, Counter]:
    n, lo, hi = job
    checked = failures = 0
    images: Counter = Counter()
    for idx in range(lo, hi):
        tree = tree_from_index(n, idx, SINK)
        D = tree.as_digraph()
        for s in itertools.product(range(1, n + 1), repeat=n):
            if simulate_deterministic(D, s) is None:
                continue
            checked += 1
            fwd = tau(tree, s)
            if not is_parking_function(fwd.tree.as_digraph(), fwd.sequence):
                failures += 1
                continue
            images[(idx, fwd.sequence)] += 1
            try:
                back = tau_inverse(fwd.tree, fwd.sequence)
            except ValueError:
                failures += 1
                continue
            if back.sequence != tuple(s) or back.tree != tree:
                failures += 1
    return checked, failures, images


def tau_roundtrip_sweep(n: int, workers: int = 1) -> SweepResult:
    """Apply tau then tau_inverse to every full sink-tree parking function."""
    total = family_size("sink-trees", n)
    jobs = [(n, lo, hi) for lo, hi in _chunk_ranges(total, max(workers, 1) * 4)]
    checked = failures = 0
    images: Counter = Counter()
    for c, f, imgs in _run_chunks(_tau_chunk, jobs, workers):
        checked += c
        failures += f
        images.update(imgs)
    duplicates = sum(c - 1 for c in images.values() if c > 1)
    return SweepResult(checked, failures, duplicates, len(images))


def _psi_nm_chunk(job: tuple) -> tuple[int, int, dict[int, Counter]]:
    n, lengths, lo, hi = job
    checked = failures = 0
    outputs: dict[int, Counter] = {m: Counter() for m in lengths}
    for idx in range(lo, hi):
        tree = tree_from_index(n, idx, SOURCE)
        D = tree.as_digraph()
        for m in lengths:
            for s in itertools.product(range(1, n + 1), repeat=m):
                if not is_parking_function(D, s):
                    continue
                for mark in range(1, n + 1):
                    checked += 1
                    try:
                        fwd = psi_nm(tree, s, mark) if m < n else psi(tree, s, mark)
                        key = (tuple(sorted(fwd.digraph.edges)), tuple(s))
                        outputs[m][key] += 1
                        if not is_parking_function(fwd.digraph, s):
                            failures += 1
                            continue
                        if m < n:
                            back = psi_nm_inverse(fwd.digraph, s)
                        else:
                            back = psi_inverse(fwd.digraph, s)
                        if (
                            back.tree != tree
                            or back.mark != mark
                            or back.sequence != tuple(s)
                        ):
                            failures += 1
                    except (ValueError, RuntimeError, AssertionError):
                        failures += 1
    return checked, failures, outputs


def psi_roundtrip_sweep(n: int, workers: int = 1, lengths=None) -> SweepResult:
    """Round-trip every marked source-tree parking function through psi.

    lengths defaults to all of 0..n; pass [n] for the full-length map only.
    Reports injectivity of the forward map per length as well.
    """
    lengths = tuple(_range_list(lengths, range(n + 1)))
    total = family_size("source-trees", n)
    jobs = [(n, lengths, lo, hi) for lo, hi in _chunk_ranges(total, max(workers, 1) * 4)]
    checked = failures = duplicates = outputs = 0
    merged: dict[int, Counter] = {m: Counter() for m in lengths}
    for c, f, outs in _run_chunks(_psi_nm_chunk, jobs, workers):
        checked += c
        failures += f
        for m, counter in outs.items():
            merged[m].update(counter)
    per_length = []
    for m in lengths:
        dup = sum(c - 1 for c in merged[m].values() if c > 1)
        duplicates += dup
        outputs += len(merged[m])
        per_length.append((m, len(merged[m])))
    return SweepResult(checked, failures, duplicates, outputs, tuple(per_length))


def _lemma_chunk(job: tuple) -> tuple[int, int]:
    n, lo, hi = job
    checked = violations = 0
    for idx in range(lo, hi):
        mapping = mapping_from_index(n, idx)
        D = mapping.inverse_digraph()
        # parkability and deletability are order-free, so multisets suffice
        for combo in itertools.combinations_with_replacement(range(1, n + 1), n):
            if not is_parking_function(D, combo):
                continue
            checked += 1
            try:
                deletable = deletable_cycle_edges(D, combo)
            except RuntimeError:
                violations += 1
                continue
            if any(not edges for edges in deletable.values()):
                violations += 1
    return checked, violations


def lemma_deletable_sweep(n: int, workers: int = 1) -> SweepResult:
    """Every cycle of every inverse-mapping parking function must own a
    deletable edge; counts the violations (expected: zero)."""
    total = family_size("inverse-mappings", n)
    jobs = [(n, lo, hi) for lo, hi in _chunk_ranges(total, max(workers, 1) * 4)]
    checked = violations = 0
    for c, v in _run_chunks(_lemma_chunk, jobs, workers):
        checked += c
        violations += v
    return SweepResult(checked, violations)
