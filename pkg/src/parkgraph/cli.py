"""Command-line front end.

Subcommands: check, simulate, count, sum, verify, bijection (tau, tau-inv,
psi, psi-inv), scan.  JSON goes to stdout (canonical key order, so identical
inputs give byte-identical output); diagnostics go to stderr.  Exit codes:
0 for success/true, 1 for false or a failed verification, 2 for usage and
input errors.
"""

from __future__ import annotations

import json
import time
from pathlib import Path

import click

from .bijections import (
    NotInImageError,
    psi,
    psi_inverse,
    psi_nm,
    psi_nm_inverse,
    tau,
    tau_inverse,
)
from .check import (
    hall_witness,
    is_deterministic,
    is_parking_distribution,
    is_parking_function,
    is_prime,
    parking_schedule,
    simulate_deterministic,
)
from .counting import (
    CapExceededError,
    DEFAULT_FAMILY_CAP,
    DEFAULT_SINGLE_CAP,
    FAMILIES,
    IDENTITIES,
    count_pf,
    default_workers,
    family_sum,
    open_question_scan,
    verify_identity,
)
from .digraph import Digraph
from .families import SINK, SOURCE, MappingFn, RootedTree
from . import report as report_mod


def _fail(message: str) -> "click.UsageError":
    return click.UsageError(message)


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise _fail(f"cannot read {path}: {exc}") from None


def _load_digraph(path: str) -> Digraph:
    try:
        return Digraph.from_edge_list(_read_text(path))
    except ValueError as exc:
        raise _fail(f"{path}: {exc}") from None


def _load_tree(path: str, orientation: str) -> RootedTree:
    text = _read_text(path)
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if len(lines) != 1:
        raise _fail(f"{path}: expected a single 'root; parents' line")
    try:
        return RootedTree.from_line(lines[0], orientation)
    except ValueError as exc:
        raise _fail(f"{path}: {exc}") from None


def _load_mapping(path: str) -> MappingFn:
    text = _read_text(path)
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if len(lines) != 1:
        raise _fail(f"{path}: expected a single image-list line")
    try:
        return MappingFn.from_line(lines[0])
    except ValueError as exc:
        raise _fail(f"{path}: {exc}") from None


def _parse_sequence(text: str | None) -> tuple[int, ...]:
    if not text:
        return ()
    try:
        return tuple(int(p) for p in text.split(",") if p.strip() != "")
    except ValueError:
        raise _fail(f"bad sequence {text!r}; expected comma-separated integers") from None


def _parse_distribution(text: str) -> dict[int, int]:
    out: dict[int, int] = {}
    try:
        for part in text.split(","):
            if not part.strip():
                continue
            v, c = part.split(":")
            out[int(v)] = out.get(int(v), 0) + int(c)
    except ValueError:
        raise _fail(f"bad distribution {text!r}; expected 'vertex:count,...'") from None
    return out


def _parse_range(text: str, name: str) -> list[int]:
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(text)]
    except ValueError:
        raise _fail(f"bad {name} range {text!r}; expected 'a' or 'a..b'") from None


def _emit(ctx: click.Context, payload: dict) -> None:
    if ctx.obj.get("pretty"):
        click.echo(json.dumps(payload, indent=2, sort_keys=True))
    else:
        click.echo(json.dumps(payload, sort_keys=True, separators=(",", ":")))


def _guard(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except CapExceededError as exc:
        raise _fail(str(exc)) from None
    except NotInImageError as exc:
        raise _fail(f"not in the image of the forward map: {exc}") from None
    except ValueError as exc:
        raise _fail(str(exc)) from None


@click.group()
@click.option("--pretty", is_flag=True, help="Indent JSON output for humans.")
@click.option(
    "--deterministic",
    is_flag=True,
    help="Accepted for scripting compatibility; output is always canonical.",
)
@click.pass_context
def main(ctx: click.Context, pretty: bool, deterministic: bool) -> None:
    """Parking functions on directed graphs."""
    ctx.obj = {"pretty": pretty}


@main.command()
@click.option("--graph", "graph_path", required=True, type=str, help="Edge-list file.")
@click.option("--seq", "seq_text", default=None, help="Preferences, e.g. 1,1,3,2,1.")
@click.option("--dist", "dist_text", default=None, help="Distribution, e.g. 1:2,3:1.")
@click.option("--prime", "prime_flag", is_flag=True, help="Also test primality.")
@click.pass_context
def check(ctx, graph_path, seq_text, dist_text, prime_flag):
    """Decide parkability; emit a schedule or a counting violation."""
    D = _load_digraph(graph_path)
    if (seq_text is None) == (dist_text is None):
        raise _fail("exactly one of --seq and --dist is required")
    if dist_text is not None:
        dist = _parse_distribution(dist_text)
        ok = _guard(is_parking_distribution, D, dist)
        _emit(ctx, {"n": D.n, "m": sum(dist.values()), "parking_distribution": ok})
        ctx.exit(0 if ok else 1)
    s = _parse_sequence(seq_text)
    ok = _guard(is_parking_function, D, s)
    payload = {"n": D.n, "m": len(s), "sequence": list(s), "parking_function": ok}
    if ok:
        schedule = _guard(parking_schedule, D, s)
        payload["schedule"] = schedule.to_dict()
    else:
        witness = _guard(hall_witness, D, s)
        payload["violator"] = witness.to_dict() if witness else None
    if prime_flag:
        payload["prime"] = _guard(is_prime, D, s)
    _emit(ctx, payload)
    ctx.exit(0 if ok else 1)


@main.command()
@click.option("--graph", "graph_path", required=True, type=str)
@click.option("--seq", "seq_text", default=None)
@click.pass_context
def simulate(ctx, graph_path, seq_text):
    """Run the deterministic process (out-degree at most 1 everywhere)."""
    D = _load_digraph(graph_path)
    if not is_deterministic(D):
        raise _fail("graph is not deterministic: some vertex has out-degree > 1")
    s = _parse_sequence(seq_text)
    run = _guard(simulate_deterministic, D, s)
    if run is None:
        _emit(ctx, {"n": D.n, "m": len(s), "parked": False})
        ctx.exit(1)
    payload = {
        "n": D.n,
        "m": len(s),
        "parked": True,
        "assignment": list(run.outcome.assignment),
        "walks": [list(w) for w in run.outcome.walks],
        "highlighted": sorted([list(e) for e in run.highlighted]),
    }
    _emit(ctx, payload)
    ctx.exit(0)


@main.command()
@click.option("--graph", "graph_path", required=True, type=str)
@click.option("-m", "--m", "m_value", required=True, type=int)
@click.option("--cap", default=DEFAULT_SINGLE_CAP, show_default=True, type=int)
@click.pass_context
def count(ctx, graph_path, m_value, cap):
    """Exact number of length-m parking sequences on one digraph."""
    D = _load_digraph(graph_path)
    start = time.perf_counter()
    value = _guard(count_pf, D, m_value, cap)
    millis = (time.perf_counter() - start) * 1000.0
    _emit(ctx, {"n": D.n, "m": m_value, "count": value, "millis": round(millis, 3)})


@main.command(name="sum")
@click.option("--family", required=True, type=click.Choice(FAMILIES))
@click.option("-n", "--n", "n_value", required=True, type=int)
@click.option("-m", "--m", "m_text", required=True, type=str, help="Single value or a..b.")
@click.option("--workers", default=None, type=int, help="Defaults to PARKGRAPH_WORKERS or 1.")
@click.option("--cap", default=DEFAULT_FAMILY_CAP, show_default=True, type=int)
@click.option("--out-dir", default=None, type=str, help="Also write CSV (and PNG) here.")
@click.option("--plot/--no-plot", default=True, show_default=True)
@click.pass_context
def family_total(ctx, family, n_value, m_text, workers, cap, out_dir, plot):
    """Sum parking-function counts over a whole family."""
    workers = workers if workers is not None else default_workers()
    rows = []
    for m in _parse_range(m_text, "m"):
        result = _guard(family_sum, family, n_value, m, workers, cap)
        rows.append(
            {
                "family": family,
                "n": n_value,
                "m": m,
                "count": result.value,
                "instances": result.instances,
                "millis": round(result.millis, 3),
            }
        )
    if out_dir:
        base = Path(out_dir)
        report_mod.write_csv(base / "sum.csv", report_mod.SUM_COLUMNS, rows)
        if plot:
            report_mod.render_sum_figure(rows, base / "sum.png")
    _emit(ctx, {"rows": rows})


@main.command()
@click.option("--identity", required=True, type=click.Choice(IDENTITIES))
@click.option("-n", "--n", "n_text", required=True, type=str, help="Single value or a..b.")
@click.option("-m", "--m", "m_text", default=None, type=str, help="Optional, defaults to 0..n.")
@click.option("--workers", default=None, type=int)
@click.option("--cap", default=DEFAULT_FAMILY_CAP, show_default=True, type=int)
@click.option("--out-dir", default=None, type=str)
@click.option("--plot/--no-plot", default=True, show_default=True)
@click.pass_context
def verify(ctx, identity, n_text, m_text, workers, cap, out_dir, plot):
    """Check one named identity or bound; exit 1 on any failing row."""
    workers = workers if workers is not None else default_workers()
    ns = _parse_range(n_text, "n")
    ms = _parse_range(m_text, "m") if m_text else None
    reportobj = _guard(verify_identity, identity, ns, ms, workers, cap)
    if out_dir:
        base = Path(out_dir)
        report_mod.write_csv(
            base / "verify.csv",
            report_mod.VERIFY_COLUMNS,
            [r.to_dict() for r in reportobj.rows],
        )
        if plot:
            report_mod.render_verify_figure(reportobj, base / "verify.png")
    _emit(ctx, reportobj.to_dict())
    ctx.exit(0 if reportobj.passed else 1)


@main.command()
@click.option("-n", "--n", "n_text", required=True, type=str)
@click.option("-m", "--m", "m_text", default=None, type=str)
@click.option("--workers", default=None, type=int)
@click.option("--out-dir", default=None, type=str)
@click.option("--plot/--no-plot", default=True, show_default=True)
@click.pass_context
def scan(ctx, n_text, m_text, workers, out_dir, plot):
    """Tabulate P(T,m) against P(reversed T,m) for every rooted tree."""
    workers = workers if workers is not None else default_workers()
    ns = _parse_range(n_text, "n")
    ms = _parse_range(m_text, "m") if m_text else None
    rows = _guard(open_question_scan, ns, ms, workers)
    dicts = [r.to_dict() for r in rows]
    if out_dir:
        base = Path(out_dir)
        report_mod.write_csv(base / "scan.csv", report_mod.SCAN_COLUMNS, dicts)
        if plot:
            report_mod.render_scan_figure(rows, base / "scan.png")
    _emit(ctx, {"rows": dicts})


@main.group()
def bijection():
    """Apply one of the structural bijections."""


@bijection.command(name="tau")
@click.option("--tree", "tree_path", required=True, type=str, help="Sink tree file.")
@click.option("--seq", "seq_text", required=True, type=str)
@click.pass_context
def bijection_tau(ctx, tree_path, seq_text):
    """Relabel a full sink-tree parking function onto the reversed tree."""
    tree = _load_tree(tree_path, SINK)
    s = _parse_sequence(seq_text)
    res = _guard(tau, tree, s)
    _emit(
        ctx,
        {
            "permutation": list(res.permutation),
            "cycles": res.cycle_notation(),
            "sequence": list(res.sequence),
            "tree": res.tree.to_line(),
            "paths": [list(p) for p in res.paths],
        },
    )


@bijection.command(name="tau-inv")
@click.option("--tree", "tree_path", required=True, type=str, help="Source tree file.")
@click.option("--seq", "seq_text", required=True, type=str)
@click.pass_context
def bijection_tau_inv(ctx, tree_path, seq_text):
    """Recover the sink-tree parking function behind a relabeled one."""
    tree = _load_tree(tree_path, SOURCE)
    s = _parse_sequence(seq_text)
    res = _guard(tau_inverse, tree, s)
    _emit(
        ctx,
        {
            "permutation": list(res.permutation),
            "cycles": res.cycle_notation(),
            "sequence": list(res.sequence),
            "tree": res.tree.to_line(),
            "paths": [list(p) for p in res.paths],
        },
    )


@bijection.command(name="psi")
@click.option("--tree", "tree_path", required=True, type=str, help="Source tree file.")
@click.option("--seq", "seq_text", required=True, type=str)
@click.option("--mark", required=True, type=int)
@click.pass_context
def bijection_psi(ctx, tree_path, seq_text, mark):
    """Rewire a marked source-tree parking function into an inverse mapping.

    Sequences shorter than n are extended canonically first.
    """
    tree = _load_tree(tree_path, SOURCE)
    s = _parse_sequence(seq_text)
    res = _guard(psi_nm if len(s) < tree.n else psi, tree, s, mark)
    _emit(
        ctx,
        {
            "mapping": res.mapping.to_line(),
            "edges": sorted([list(e) for e in res.digraph.edges]),
            "sequence": list(res.sequence),
            "extended": list(res.extended),
            "balanced": sorted(res.balanced),
            "rewired": list(res.rewired),
        },
    )


@bijection.command(name="psi-inv")
@click.option("--mapping", "mapping_path", default=None, type=str, help="Image-list file.")
@click.option("--graph", "graph_path", default=None, type=str, help="Edge-list file.")
@click.option("--seq", "seq_text", required=True, type=str)
@click.pass_context
def bijection_psi_inv(ctx, mapping_path, graph_path, seq_text):
    """Recover the marked source tree behind an inverse-mapping parking function."""
    if (mapping_path is None) == (graph_path is None):
        raise _fail("exactly one of --mapping and --graph is required")
    if mapping_path:
        D = _load_mapping(mapping_path).inverse_digraph()
    else:
        D = _load_digraph(graph_path)
    s = _parse_sequence(seq_text)
    res = _guard(psi_nm_inverse if len(s) < D.n else psi_inverse, D, s)
    _emit(
        ctx,
        {
            "tree": res.tree.to_line(),
            "mark": res.mark,
            "sequence": list(res.sequence),
            "extended": list(res.extended),
            "rewired": list(res.rewired),
        },
    )


if __name__ == "__main__":
    main()
