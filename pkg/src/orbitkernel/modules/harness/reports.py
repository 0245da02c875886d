"""
Report emission.

Every document embeds the resolved configuration, the package version
and the forward operator, and contains nothing that varies between runs
with the same configuration and seed.
"""

import csv
import io
import json
import math

import orbitkernel
from orbitkernel.const import SCHEMA_VERSION, SWEEP_CSV_COLUMNS
from orbitkernel.modules.geometry.bundle import forward_operator_symbolic
from orbitkernel.modules.harness.runs import sweep_row


def _clean(value):
    """Replace non-finite floats so the document stays strict JSON."""
    if isinstance(value, dict):
        return {key: _clean(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(item) for item in value]
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


def build_document(cfg, summary, report=None, reports=None, stats=None):
    """
    Assemble the JSON report of one command.

    Args:
        cfg: RunConfig
        summary: CheckSummary
        report: KernelReport of verify-relation
        reports: KernelReports of a sweep
        stats: Sweep statistics

    Returns:
        Dict
    """
    document = {
        "orbitkernel_version": orbitkernel.__version__,
        "schema_version": SCHEMA_VERSION,
        "command": cfg.command,
        "config": cfg.to_dict(),
        "operators": forward_operator_symbolic(),
        "summary": summary.to_dict(),
    }
    if report is not None:
        document["report"] = report.to_dict()
    if reports is not None:
        document["rows"] = [dict(zip(SWEEP_CSV_COLUMNS, sweep_row(item))) for item in reports]
    if stats is not None:
        document["statistics"] = stats
    return _clean(document)


def render_json(document):
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def render_csv(cfg, summary, report=None, reports=None, stats=None):
    """
    Plot-ready CSV.

    Kernel commands write one SWEEP_CSV_COLUMNS row per report followed by
    '#'-prefixed summary lines; check commands write name, passed,
    residual, residual_kind, tolerance.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    rows = reports if reports is not None else ([report] if report is not None else None)
    if rows is not None:
        writer.writerow(SWEEP_CSV_COLUMNS)
        for item in rows:
            writer.writerow(_format_row(sweep_row(item)))
        for key, value in (stats or {}).items():
            buffer.write(f"# {key}={_format(value)}\n")
    else:
        writer.writerow(("name", "passed", "residual", "residual_kind", "tolerance"))
        for result in summary.results:
            writer.writerow(
                (result.name, int(result.passed), _format(result.residual), result.kind, _format(result.tolerance))
            )
    buffer.write(f"# orbitkernel {orbitkernel.__version__} {cfg.command} passed={int(summary.passed)}\n")
    return buffer.getvalue()


def _format(value):
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _format_row(values):
    return [_format(value) for value in values]


def write_output(text, path=None, stream=None):
    """
    Write text to path, or to stream when no path is given.
    """
    if path is None:
        stream.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)
