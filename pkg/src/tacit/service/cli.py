"""Command-line entry points: compile, check, serve, bench."""

from __future__ import annotations

import os
import sys

import click

from ..errors import TacitError
from ..search import SearchBudget
from .bench import bench_file, report_csv, report_json


@click.group()
def main():
    """tacit: a tactic-learning proof engine."""


@main.command("compile")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "out_path", type=click.Path(dir_okay=False),
              help="Output .tco path (defaults to the source next to it).")
@click.option("--learner", default="knn", show_default=True)
@click.option("--nodes", default=50000, show_default=True, type=int,
              help="Node cap for search tactics during compilation.")
def cli_compile(path, out_path, learner, nodes):
    """Compile a .tac file into a .tco unit with its tactic database."""
    from ..document import compile_file

    _maybe_register(learner)
    if out_path is None:
        out_path = os.path.splitext(path)[0] + ".tco"
    try:
        unit, data = compile_file(path, out_path, learner=learner,
                                  budget=SearchBudget(nodes=nodes, seconds=None))
    except TacitError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    click.echo(f"{out_path}: {len(unit.records)} records, "
               f"{len(unit.lemmas)} lemmas, {len(data)} bytes")


@main.command("check")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--learner", default="knn", show_default=True)
def cli_check(path, learner):
    """Execute a .tac file start to finish without writing a unit."""
    from ..document import compile_source

    _maybe_register(learner)
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    name = os.path.splitext(os.path.basename(path))[0]
    root = os.path.dirname(os.path.abspath(path))
    try:
        unit = compile_source(text, name, root, learner,
                              SearchBudget(seconds=None))
    except TacitError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    click.echo(f"{path}: ok ({len(unit.records)} records, "
               f"{len(unit.lemmas)} lemmas)")


@main.command("serve")
@click.argument("corpus_root", type=click.Path(exists=True, file_okay=False),
                default=".")
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--learner", default="knn", show_default=True)
@click.option("--seconds", default=10.0, show_default=True, type=float,
              help="Interactive search wall-clock limit.")
def cli_serve(corpus_root, port, learner, seconds):
    """Serve the HTTP/JSON session API (and the web UI if built)."""
    import uvicorn

    from .server import create_app

    _maybe_register(learner)
    app = create_app(corpus_root, learner,
                     SearchBudget(seconds=seconds))
    ui_dist = os.path.join(os.path.dirname(os.path.dirname(os.path.dirname(
        os.path.dirname(os.path.abspath(__file__))))), "frontend", "dist")
    if os.path.isdir(ui_dist):
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=ui_dist, html=True), name="ui")
    uvicorn.run(app, host="127.0.0.1", port=port)


@main.command("bench")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--nodes", default=50000, show_default=True, type=int)
@click.option("--seconds", default=0.0, show_default=True, type=float,
              help="Wall-clock limit per lemma; 0 disables it.")
@click.option("--breadth", default=10, show_default=True, type=int)
@click.option("--learner", default="knn", show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False),
              help="Report path (.json); a .csv mirror is written next to it.")
@click.option("--whole-file", is_flag=True,
              help="Learn from the whole file minus each lemma's own proof "
                   "instead of the preceding prefix.")
def cli_bench(path, nodes, seconds, breadth, learner, out_path, whole_file):
    """Leave-one-out benchmark: search every lemma from its prefix."""
    _maybe_register(learner)
    budget = SearchBudget(nodes=nodes, seconds=seconds or None, breadth=breadth)
    try:
        report = bench_file(path, budget=budget, learner=learner,
                            whole_file=whole_file)
    except TacitError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    for row in report.rows:
        mark = "ok " if row.found else "   "
        click.echo(f"{mark} {row.lemma:24} expansions={row.expansions:<7}"
                   f" elapsed={row.elapsed:.2f}s trace={row.trace}")
    click.echo(f"proved {report.proved}/{report.lemmas} "
               f"({report.fraction:.1%})")
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(report_json(report))
        csv_path = os.path.splitext(out_path)[0] + ".csv"
        with open(csv_path, "w", encoding="utf-8") as fh:
            fh.write(report_csv(report))
        click.echo(f"wrote {out_path} and {csv_path}")


def _maybe_register(learner: str):
    """The toy recency learner is registered on demand."""
    if learner == "recency":
        from ..learner import recency, registered_learners
        if "recency" not in registered_learners():
            recency.register()


if __name__ == "__main__":
    main()
