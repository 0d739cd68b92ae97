"""Command-line surface: certification, attack analysis and protocol simulation.

Exit codes: 0 success, 1 invariant/acceptance failure, 2 input validation,
3 correlation-form derivation failure.  CSV outputs carry a leading
``# manifest: {...}`` comment followed by a header row; JSON outputs embed
the manifest as a field.  Files are written atomically (temp + rename).
"""

from __future__ import annotations

import datetime
import io
import json
import os
import sys
import tempfile

import click
import numpy as np

from . import __version__
from .cloner import dirichlet_gamma, no_sharing_sum
from .graphs import Bipartition, NotTwoColorable, make_star, parse_graph
from .graphstate import build_graph_state
from .protocol import ProtocolConfig, estimate_rates, run_protocol
from .schmidt import NoCorrelationForm
from .steering import (
    critical_disturbance,
    disturbance_entropy,
    key_rate_scan,
    noise_threshold,
    steering_statistic,
    white_noise,
)
from .steering import derive_both_settings
from . import verify as verify_mod

EXIT_INVARIANT = 1
EXIT_VALIDATION = 2
EXIT_DERIVATION = 3


def _manifest(command: str, params: dict, seed=None) -> dict:
    return {
        "command": command,
        "params": params,
        "seed": seed,
        "version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, out: str | None) -> None:
    if out:
        _atomic_write(out, text)
    else:
        click.echo(text, nl=False)


def _csv_document(manifest: dict, header: list, rows: list) -> str:
    buf = io.StringIO()
    buf.write("# manifest: " + json.dumps(manifest, sort_keys=True) + "\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_csv_cell(x) for x in row) + "\n")
    return buf.getvalue()


def _csv_cell(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _load_graph(path: str):
    try:
        with open(path, encoding="utf-8") as handle:
            return parse_graph(handle.read())
    except OSError as exc:
        click.echo(f"error: cannot read graph file: {exc}", err=True)
        raise SystemExit(EXIT_VALIDATION)
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        raise SystemExit(EXIT_VALIDATION)


def _parse_partition(g, text: str | None) -> Bipartition:
    if text is None:
        side_a = {1}  # matches the worked three-qubit star example
    else:
        try:
            side_a = {int(tok) for tok in text.split(",") if tok.strip()}
        except ValueError:
            click.echo(f"error: bad partition list {text!r}", err=True)
            raise SystemExit(EXIT_VALIDATION)
    try:
        return Bipartition.from_side_a(g, side_a)
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        raise SystemExit(EXIT_VALIDATION)


def _parse_d_list(text: str) -> list:
    try:
        values = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        values = []
    if not values or any(d < 2 for d in values):
        click.echo(f"error: bad dimension list {text!r}", err=True)
        raise SystemExit(EXIT_VALIDATION)
    return values


@click.group()
@click.version_option(__version__)
def main():
    """Steering certification and key-rate analysis for qudit graph states."""


@main.command()
@click.argument("graph_file", type=click.Path())
@click.option("--partition", default=None, help="Comma-separated A-side vertex list (default: 1).")
@click.option("--p", default=0.0, show_default=True, help="White-noise intensity.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@click.option("--out", default=None, type=click.Path(), help="Output file (default: stdout).")
def certify(graph_file, partition, p, fmt, out):
    """Certify steering of a (noisy) graph state from a graph file."""
    g, d = _load_graph(graph_file)
    part = _parse_partition(g, partition)
    if not 0.0 <= p <= 1.0:
        click.echo("error: --p must be in [0, 1]", err=True)
        raise SystemExit(EXIT_VALIDATION)
    try:
        settings = derive_both_settings(g, d, part)
        rho = white_noise(build_graph_state(g, d), p)
        report = steering_statistic(rho, settings, part)
    except NotTwoColorable as exc:
        click.echo(f"error: NotTwoColorable: {exc}", err=True)
        raise SystemExit(EXIT_VALIDATION)
    except NoCorrelationForm as exc:
        click.echo(f"error: NoCorrelationForm: {exc}", err=True)
        raise SystemExit(EXIT_DERIVATION)
    manifest = _manifest(
        "certify", {"graph_file": graph_file, "partition": sorted(part.side_a), "p": p}
    )
    payload = {
        "i_per_setting": list(report.i_per_setting),
        "i_total": report.i_total,
        "threshold": report.threshold,
        "steerable": report.steerable,
        "margin": report.margin,
        "manifest": manifest,
    }
    if fmt == "json":
        _emit(json.dumps(payload, indent=2) + "\n", out)
    else:
        _emit(
            _csv_document(
                manifest,
                ["i_setting_1", "i_setting_2", "i_total", "threshold", "steerable", "margin"],
                [
                    (
                        report.i_per_setting[0],
                        report.i_per_setting[1],
                        report.i_total,
                        report.threshold,
                        report.steerable,
                        report.margin,
                    )
                ],
            ),
            out,
        )


@main.command()
@click.option("--d", "d_list", default="2,3,5", show_default=True, help="Comma-separated dimensions.")
@click.option("--n", default=3, show_default=True, help="Number of qudits (star graph).")
@click.option("--p-max", default=1.0, show_default=True, help="Upper end of the noise grid.")
@click.option("--steps", default=21, show_default=True, help="Grid points per dimension.")
@click.option("--out", default=None, type=click.Path())
def fig4(d_list, n, p_max, steps, out):
    """Key-rate lower bound versus white noise (CSV: d,N,p,i_total,r_lower)."""
    dims = _parse_d_list(d_list)
    if n < 2 or steps < 1 or not 0.0 <= p_max <= 1.0:
        click.echo("error: bad ranges", err=True)
        raise SystemExit(EXIT_VALIDATION)
    grid = np.linspace(0.0, p_max, steps)
    rows = []
    deviation = 0.0
    for d in dims:
        g = make_star(n)
        part = Bipartition.from_side_a(g, {1})
        for p, i_total, r_lower in key_rate_scan(g, d, part, grid):
            rows.append((d, n, p, i_total, r_lower))
            closed = 2 * (np.log2(d) - disturbance_entropy(p * (d - 1) / d, d))
            deviation = max(deviation, abs(i_total - closed))
    manifest = _manifest("fig4", {"d": dims, "n": n, "p_max": p_max, "steps": steps})
    _emit(_csv_document(manifest, ["d", "N", "p", "i_total", "r_lower"], rows), out)
    if deviation > 1e-9:
        click.echo(f"error: closed-form deviation {deviation} exceeds 1e-9", err=True)
        raise SystemExit(EXIT_INVARIANT)


@main.command()
@click.option("--d", "d_list", default="2,3,5", show_default=True)
@click.option("--out", default=None, type=click.Path())
def fig5(d_list, out):
    """White-noise tolerance of the steering criterion (CSV: d,p_noise)."""
    dims = _parse_d_list(d_list)
    g = make_star(3)
    part = Bipartition.from_side_a(g, {1})
    rows = [(d, noise_threshold(g, d, part)) for d in dims]
    manifest = _manifest("fig5", {"d": dims})
    _emit(_csv_document(manifest, ["d", "p_noise"], rows), out)


@main.command()
@click.option("--d", "d_list", default="2,3", show_default=True)
@click.option("--out", default=None, type=click.Path())
def dc(d_list, out):
    """Critical disturbance of the cloning attack (CSV: d,D_c)."""
    dims = _parse_d_list(d_list)
    rows = [(d, critical_disturbance(d)) for d in dims]
    manifest = _manifest("dc", {"d": dims})
    _emit(_csv_document(manifest, ["d", "D_c"], rows), out)


@main.command()
@click.option("--d", default=2, show_default=True)
@click.option("--samples", default=1000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", default=None, type=click.Path())
def nosharing(d, samples, seed, out):
    """Monte-Carlo check of the no-sharing inequality over random attacks."""
    if d < 2 or samples < 1:
        click.echo("error: bad ranges", err=True)
        raise SystemExit(EXIT_VALIDATION)
    rng = np.random.default_rng(seed)
    bound = 2 * float(np.log2(d))
    max_total = 0.0
    violations = 0
    for _ in range(samples):
        _, _, total = no_sharing_sum(dirichlet_gamma(d, rng))
        max_total = max(max_total, total)
        if total > bound + 1e-9:
            violations += 1
    payload = {
        "samples": samples,
        "max_total": max_total,
        "bound": bound,
        "violations": violations,
        "manifest": _manifest("nosharing", {"d": d, "samples": samples}, seed=seed),
    }
    _emit(json.dumps(payload, indent=2) + "\n", out)
    if violations:
        raise SystemExit(EXIT_INVARIANT)


@main.command()
@click.option("--graph-file", default=None, type=click.Path(), help="Graph JSON (default: star(3), d=2).")
@click.option("--partition", default=None, help="Comma-separated A-side vertex list (default: 1).")
@click.option("--p", default=0.0, show_default=True, help="White-noise intensity.")
@click.option("--disturbance", default=None, type=float, help="Cloner disturbance D (omit for no attack).")
@click.option("--rounds", default=100_000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", default=None, type=click.Path(), help="Transcript JSONL file.")
def qss(graph_file, partition, p, disturbance, rounds, seed, out):
    """Run the secret-sharing protocol simulation and report rate estimates."""
    if graph_file is not None:
        g, d = _load_graph(graph_file)
    else:
        g, d = make_star(3), 2
    part = _parse_partition(g, partition)
    try:
        cfg = ProtocolConfig(
            graph=g,
            d=d,
            part=part,
            noise_p=p,
            cloner_disturbance=disturbance,
            rounds=rounds,
            seed=seed,
        )
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        raise SystemExit(EXIT_VALIDATION)
    try:
        transcript = run_protocol(cfg)
    except NoCorrelationForm as exc:
        click.echo(f"error: NoCorrelationForm: {exc}", err=True)
        raise SystemExit(EXIT_DERIVATION)
    est = estimate_rates(transcript, d)
    if out:
        buf = io.StringIO()
        transcript.to_jsonl(buf)
        _atomic_write(out, buf.getvalue())
    payload = {
        "i_hat_total": est.i_hat_total,
        "r_hat_lower": est.r_hat_lower,
        "sifted_rounds": list(est.sifted_rounds),
        "steerable_hat": est.steerable_hat,
        "manifest": _manifest(
            "qss",
            {
                "graph_file": graph_file,
                "partition": sorted(part.side_a),
                "p": p,
                "disturbance": disturbance,
                "rounds": rounds,
            },
            seed=seed,
        ),
    }
    click.echo(json.dumps(payload, indent=2))


@main.command()
def verify():
    """Run the module invariant suites; nonzero exit on any failure."""
    results = verify_mod.run_all()
    failed = 0
    for name, passed, detail in results:
        status = "PASS" if passed else "FAIL"
        line = f"[{status}] {name}"
        if detail:
            line += f": {detail}"
        click.echo(line)
        failed += not passed
    if failed:
        click.echo(f"{failed} invariant check(s) failed", err=True)
        raise SystemExit(EXIT_INVARIANT)
    click.echo(f"all {len(results)} invariant checks passed")


if __name__ == "__main__":
    main()
