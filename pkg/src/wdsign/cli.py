"""Batch CLI: a thin client over the same query runner the HTTP service uses.

Exit codes: 0 success, 2 validation failure, 3 incomplete-table error.
Output is byte-stable for identical inputs.
"""

from __future__ import annotations

import json
import sys

import click

from .documents import SUPPORTED_QUERIES, parse_document
from .errors import DocumentError, EngineError, IncompleteTableError
from .service.runner import EXIT_INCOMPLETE, EXIT_VALIDATION, render_text, run_query


@click.command()
@click.option(
    "--input",
    "input_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False),
    help="Path to a version-1 JSON document.",
)
@click.option(
    "--query",
    required=True,
    type=click.Choice(SUPPORTED_QUERIES),
    help="Which computation to run.",
)
@click.option(
    "--format",
    "output_format",
    default="text",
    type=click.Choice(("text", "json")),
    show_default=True,
    help="Report format; JSON reports embed the input digest.",
)
@click.option(
    "--mode",
    default=None,
    type=click.Choice(("linear", "metaplectic")),
    help="Multiplicity mode for the global queries.",
)
def main(input_path: str, query: str, output_format: str, mode: str | None) -> None:
    """Run one query from a document of field models, atoms, epsilon tables,
    parameters and cases."""
    try:
        with open(input_path, "rb") as handle:
            raw = handle.read()
        doc = parse_document(raw)
        report = run_query(doc, query, mode)
    except IncompleteTableError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INCOMPLETE)
    except (DocumentError, EngineError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    if output_format == "json":
        click.echo(json.dumps(report, indent=2, sort_keys=True))
    else:
        click.echo(render_text(report))


if __name__ == "__main__":
    main()
