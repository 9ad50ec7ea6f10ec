"""Command-line front end.

Exit codes: 0 success, 2 unreadable input, 3 non-generic motion or singular
configuration, 4 failed numerical identity gate.
"""

from __future__ import annotations

import json
import logging
import sys

import click
import numpy as np

from . import braidfile
from .braid_operator import (
    braid_invariant,
    euclidean_lengths,
    labelings_match,
    ptolemy_propagate,
)
from .errors import (
    BraidFormatError,
    DegenerateConfiguration,
    InvalidStrandSystem,
    NonGenericBraid,
    PtolemyZeroDivision,
)
from .fixtures import EXAMPLES
from .identities import check_orthogonality, check_pentagon
from .kinetic import extract_flip_sequence, position_at, triangulation_at
from .recoupling import PerturbedTuple, ptolemy_tuple, recoupling_tuple
from .report import event_dict, header, identity_suite, invariant_report, tolerances

EXIT_PARSE = 2
EXIT_GEOMETRY = 3
EXIT_NUMERIC = 4

log = logging.getLogger("braidflip")


def _load(path: str | None, example: str | None) -> braidfile.BraidDescription:
    if (path is None) == (example is None):
        raise click.UsageError("give exactly one of FILE or --example")
    if example is not None:
        return braidfile.BraidDescription(example, EXAMPLES[example]())
    try:
        return braidfile.load(path)
    except BraidFormatError as exc:
        click.echo(f"error: {path}: {exc}", err=True)
        sys.exit(EXIT_PARSE)


def _geometry_failure(exc: Exception) -> None:
    click.echo(f"error: {exc}", err=True)
    click.echo("hint: perturb the trajectories slightly or change --samples", err=True)
    sys.exit(EXIT_GEOMETRY)


def _write_json(path: str | None, report: dict) -> None:
    if path:
        with open(path, "w") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")


_input_args = [
    click.argument("file", required=False, type=click.Path(dir_okay=False)),
    click.option("--example", type=click.Choice(sorted(EXAMPLES)), help="Use a built-in braid."),
    click.option("--samples", default=512, show_default=True, help="Initial uniform time samples."),
    click.option("--time-tol", default=1e-9, show_default=True, help="Event bracket width."),
    click.option("--json", "json_path", type=click.Path(dir_okay=False), help="Write the full report here."),
]


def input_options(f):
    for opt in reversed(_input_args):
        f = opt(f)
    return f


@click.group()
@click.option("-v", "--verbose", is_flag=True)
def main(verbose):
    """Pure-braid invariants from Delaunay flips of moving points."""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING,
                        format="%(levelname)s | %(name)s | %(message)s")


@main.command()
@input_options
@click.option("--r", "-r", "r", default=4, show_default=True, help="Level r >= 3 (q = exp(i*pi/r)).")
@click.option("--tuple", "tuple_name", type=click.Choice(["recoupling", "ptolemy"]),
              default="recoupling", show_default=True)
@click.option("--seed-lengths", type=click.Choice(["euclidean"]), default="euclidean",
              show_default=True, help="Initial labels for the Ptolemy tuple.")
@click.option("--dump-matrix", is_flag=True, help="Include the operator and its basis in the report.")
@click.option("--random-pentagon", default=0, show_default=True,
              help="Extra random pentagon checks through the scalar 6j formula.")
def invariant(file, example, samples, time_tol, json_path, r, tuple_name, seed_lengths,
              dump_matrix, random_pentagon):
    """Compute A(beta): events, coloring spaces, flip operators, spectrum."""
    desc = _load(file, example)
    name = desc.name or file
    try:
        events = extract_flip_sequence(desc.system, samples, time_tol)
    except (NonGenericBraid, DegenerateConfiguration, InvalidStrandSystem) as exc:
        _geometry_failure(exc)

    if tuple_name == "ptolemy":
        tup = ptolemy_tuple()
        start = triangulation_at(desc.system, 0.0)
        seed = euclidean_lengths(position_at(desc.system, 0.0), start)
        try:
            final = ptolemy_propagate(seed, events, tup)
            back = ptolemy_propagate(final, [ev.reversed() for ev in reversed(events)], tup)
        except PtolemyZeroDivision as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_NUMERIC)
        restored = labelings_match(back, seed, rel_tol=1e-9)
        report = header("invariant")
        report.update({
            "input": name,
            "tuple": tup.name,
            "seed_lengths": seed_lengths,
            "tolerances": tolerances(samples, time_tol),
            "events": [event_dict(ev) for ev in events],
            "event_count": len(events),
            "edge_order": [list(e) for e in start.edge_order],
            "initial_labels": [seed[e] for e in start.edge_order],
            "final_labels": [final[e] for e in start.edge_order],
            "returns_to_initial": labelings_match(final, seed, rel_tol=1e-9),
            "reverse_restores_initial": restored,
            "gates_passed": restored,
        })
        _write_json(json_path, report)
        click.echo(f"{name}: {len(events)} events, Ptolemy transport of Euclidean lengths")
        for e, x0, x1 in zip(start.edge_order, report["initial_labels"], report["final_labels"]):
            click.echo(f"  edge {e}: {x0:.12g} -> {x1:.12g}")
        click.echo(f"returns to initial labels: {report['returns_to_initial']}")
        sys.exit(0 if restored else EXIT_NUMERIC)

    if r < 3:
        raise click.BadParameter("r must be at least 3", param_hint="--r")
    tup = recoupling_tuple(r)
    identities = identity_suite(tup, random_samples=random_pentagon)
    result = braid_invariant(desc.system, tup, samples, time_tol, events=events)
    report = invariant_report(name, result, tup, samples, time_tol, dump_matrix, identities)
    _write_json(json_path, report)

    op = report["operator"]
    click.echo(f"{name}: {report['event_count']} events, r={r}")
    click.echo(f"coloring dimensions: {sorted(set(report['dimensions']))}")
    click.echo(f"A(beta): dim {op['dim']}, max |A - I| = {op['distance_from_identity']:.6g}")
    for cl in report["spectrum"]:
        z = complex(cl["real"], cl["imag"])
        extra = f", kernel dim {cl['kernel_dim']}" if "kernel_dim" in cl else ""
        click.echo(f"  eigenvalue {z:.6g}: {cl['count']}{extra}")
    for s in identities:
        click.echo(f"  {s['identity']} ({s['mode']}): max error {s['max_error']:.2e} "
                   f"{'ok' if s['passed'] else 'FAILED'}")
    if not report["gates_passed"]:
        click.echo("error: numerical identity gate failed", err=True)
        sys.exit(EXIT_NUMERIC)


@main.command()
@input_options
@click.option("--refine", default=0, show_default=True,
              help="Re-run with 2x, 4x, ... samples this many times and require identical events.")
def events(file, example, samples, time_tol, json_path, refine):
    """List the flip events of a braid."""
    desc = _load(file, example)
    name = desc.name or file
    try:
        evs = extract_flip_sequence(desc.system, samples, time_tol)
        for k in range(1, refine + 1):
            finer = extract_flip_sequence(desc.system, samples * 2 ** k, time_tol)
            if finer != evs:
                raise NonGenericBraid(f"event list changed at {samples * 2 ** k} samples "
                                      f"({len(evs)} -> {len(finer)} events)")
    except (NonGenericBraid, DegenerateConfiguration, InvalidStrandSystem) as exc:
        _geometry_failure(exc)
    report = header("events")
    report.update({"input": name, "tolerances": tolerances(samples, time_tol), "refine": refine,
                   "events": [event_dict(ev) for ev in evs], "event_count": len(evs)})
    _write_json(json_path, report)
    click.echo(f"{name}: {len(evs)} events")
    for k, ev in enumerate(evs):
        click.echo(f"  {k}: t in [{ev.t_lo:.12f}, {ev.t_hi:.12f}]  {ev.removed} -> {ev.inserted}  "
                   f"quad {list(ev.quad)}")


@main.command()
@click.option("--r-min", default=3, show_default=True)
@click.option("--r-max", default=6, show_default=True)
@click.option("--inject-perturbation", is_flag=True,
              help="Shift one 6j value by 1e-3; the suite must then fail.")
@click.option("--json", "json_path", type=click.Path(dir_okay=False))
def verify(r_min, r_max, inject_perturbation, json_path):
    """Check the orthogonality and pentagon identities for each r in range."""
    if r_min < 3 or r_max < r_min:
        raise click.BadParameter("need 3 <= r-min <= r-max")
    results = []
    for r in range(r_min, r_max + 1):
        tup = recoupling_tuple(r)
        if inject_perturbation:
            tup = PerturbedTuple(tup, (1, 1, 0, 1, 1, 0), 1e-3)
        for rep in (check_orthogonality(tup), check_pentagon(tup)):
            results.append({"r": r, **rep.as_dict()})
            status = "pass" if rep.passed else "FAIL"
            click.echo(f"r={r} {rep.identity:<13} {status}  max error {rep.max_error:.2e}  "
                       f"({rep.nontrivial} nontrivial of {rep.checked})")
            if not rep.passed:
                click.echo(f"    counterexample: {rep.worst}")
    report = header("verify")
    report.update({"r_min": r_min, "r_max": r_max, "perturbed": inject_perturbation,
                   "results": results, "passed": all(x["passed"] for x in results)})
    _write_json(json_path, report)
    if not report["passed"]:
        sys.exit(EXIT_NUMERIC)


@main.command("sixj")
@click.option("--r", "-r", "r", default=4, show_default=True)
@click.option("--json", "json_path", type=click.Path(dir_okay=False))
def sixj_cmd(r, json_path):
    """Print every nonzero q-6j symbol at level r."""
    tup = recoupling_tuple(r)
    table = tup.table()
    rows = [{"args": [int(x) for x in idx], "value": float(table[idx])}
            for idx in zip(*np.nonzero(table))]
    report = header("sixj")
    report.update({"r": r, "argument_order": ["a", "b", "i", "c", "d", "j"], "entries": rows})
    _write_json(json_path, report)
    for row in rows:
        a, b, i, c, d, j = row["args"]
        click.echo(f"{{{a} {b} {i}; {c} {d} {j}}} = {row['value']:.15g}")


if __name__ == "__main__":
    main()
