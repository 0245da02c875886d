"""
Tests for JSON and CSV report rendering.
"""

import io
import json

import pytest

import orbitkernel
from orbitkernel.config import get_config
from orbitkernel.const import SCHEMA_VERSION, SWEEP_CSV_COLUMNS
from orbitkernel.modules.harness import (
    CheckResult,
    CheckSummary,
    build_document,
    render_csv,
    render_json,
    run_geometry_check,
    run_verify_relation,
    sweep_statistics,
    write_output,
)
from orbitkernel.modules.kernels import KernelReport

SUMMARY = CheckSummary("sweep", (CheckResult("row_0", True, 0.25, 3.0, 0.1, kind="z"),))


def _report(t):
    return KernelReport(
        lhs=1.01,
        lhs_stderr=0.01,
        rhs=1.0,
        residual=0.01,
        z=1.0,
        n_paths=1000,
        discards=0,
        hits=300,
        params={"t": t, "mu2kappa": 1.0, "start": [1.0, 0.5, 0.0]},
    )


class TestDocument:
    def test_keys(self):
        cfg = get_config({"command": "geometry-check"})
        document = build_document(cfg, SUMMARY)
        assert document["orbitkernel_version"] == orbitkernel.__version__
        assert document["schema_version"] == SCHEMA_VERSION
        assert document["command"] == "geometry-check"
        assert document["config"] == cfg.to_dict()
        assert set(document["operators"]) == {"forward_operator", "hamiltonian"}
        assert document["summary"]["checks"][0] == {
            "name": "row_0",
            "passed": True,
            "residual": 0.25,
            "residual_kind": "z",
            "tolerance": 3.0,
        }
        assert "report" not in document

    def test_sweep_rows(self):
        reports = [_report(0.25), _report(0.5)]
        document = build_document(get_config(), SUMMARY, reports=reports, stats=sweep_statistics(reports))
        assert [row["t"] for row in document["rows"]] == [0.25, 0.5]
        assert document["statistics"]["rows"] == 2

    def test_non_finite_values_are_strings(self):
        report = KernelReport(
            lhs=1.0,
            lhs_stderr=0.0,
            rhs=float("nan"),
            residual=float("nan"),
            z=float("inf"),
            n_paths=10,
            discards=0,
            hits=100,
        )
        document = build_document(get_config(), SUMMARY, report=report)
        assert document["report"]["rhs"] == "nan"
        assert document["report"]["z"] == "inf"
        json.loads(render_json(document))

    def test_json_is_sorted_and_terminated(self):
        text = render_json({"b": 1, "a": [1.5]})
        assert text.endswith("}\n")
        assert text.index('"a"') < text.index('"b"')


class TestDeterminism:
    def test_geometry_report_repeats(self, quick_document):
        quick_document["command"] = "geometry-check"
        cfg = get_config(quick_document)
        first = render_json(build_document(cfg, run_geometry_check(cfg)))
        second = render_json(build_document(cfg, run_geometry_check(cfg)))
        assert first == second

    def test_relation_report_repeats(self, quick_config):
        texts = []
        for _ in range(2):
            report, summary = run_verify_relation(quick_config)
            texts.append(render_json(build_document(quick_config, summary, report=report)))
        assert texts[0] == texts[1]
        assert "wall_time" not in texts[0]


class TestCsv:
    def test_check_table(self):
        cfg = get_config({"command": "geometry-check"})
        lines = render_csv(cfg, SUMMARY).splitlines()
        assert lines[0] == "name,passed,residual,residual_kind,tolerance"
        assert lines[1] == "row_0,1,0.25,z,3"
        assert lines[-1] == f"# orbitkernel {orbitkernel.__version__} geometry-check passed=1"

    def test_kernel_rows(self):
        cfg = get_config({"command": "sweep"})
        reports = [_report(0.25), _report(1.0)]
        stats = sweep_statistics(reports)
        lines = render_csv(cfg, SUMMARY, reports=reports, stats=stats).splitlines()
        assert lines[0] == ",".join(SWEEP_CSV_COLUMNS)
        assert lines[1].startswith("0.25,1,1,0.5,0,")
        assert "# rows=2" in lines
        assert lines[-1].endswith("sweep passed=1")

    def test_single_report(self):
        cfg = get_config()
        lines = render_csv(cfg, SUMMARY, report=_report(0.5)).splitlines()
        assert len([line for line in lines if not line.startswith("#")]) == 2

    def test_full_precision(self):
        cfg = get_config({"command": "geometry-check"})
        summary = CheckSummary("geometry-check", (CheckResult("x", True, 0.1 + 0.2, 1.0, 0.0),))
        assert "0.30000000000000004" in render_csv(cfg, summary)


class TestWriteOutput:
    def test_stream(self):
        stream = io.StringIO()
        write_output("text\n", stream=stream)
        assert stream.getvalue() == "text\n"

    def test_path(self, tmp_path):
        path = tmp_path / "report.json"
        write_output("{}\n", str(path))
        assert path.read_text(encoding="utf-8") == "{}\n"

    @pytest.mark.parametrize("command", ["geometry-check", "sweep"])
    def test_csv_written_to_path(self, tmp_path, command):
        path = tmp_path / "report.csv"
        write_output(render_csv(get_config({"command": command}), SUMMARY), str(path))
        assert path.read_text(encoding="utf-8").startswith("name,passed")
