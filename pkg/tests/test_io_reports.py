#!/usr/bin/env python3
"""
Tests for problem files, gallery registry and report writers
"""
import csv
import json
import logging
import sys
from pathlib import Path

import pytest

# Add project directory to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from analysis.uniqueness import UniquenessReport, uniqueness_report
from core.errors import ProblemFormatError, SurjectivityError, UnknownGalleryError
from core.kernels import canonical_kernel
from core.spaces import build_gallery_map
from gallery_registry import GalleryRegistry, get_gallery_registry
from kernel_lab.io import export_problem, gallery_problem, load_problem
from kernel_lab.reports import (
    canonical_weight_rows,
    emit_report,
    number,
    render_report,
    report_to_dict,
    write_kernel,
    write_table,
)
from kernel_lab.utils import instance_footprint, setup_logging


def interval_problem(assignment, **extra):
    """Five-point interval mapped to itself by the given Y -> X table"""
    points = [{"id": i, "coords": [i * 0.25]} for i in range(5)]
    data = {
        "X": {"metric": "euclidean", "points": points},
        "Y": {"metric": "euclidean", "points": points},
        "j": {"assignment": {str(y): x for y, x in assignment.items()}},
    }
    data.update(extra)
    return data


def write_json(path, data):
    path.write_text(json.dumps(data, indent=2))
    return path


class TestGalleryRegistry:
    def test_entries(self):
        registry = get_gallery_registry()
        for name in ("canonical", "identity", "square", "circle", "cantor", "discrete"):
            assert registry.is_gallery_name(name)
        assert registry.require("cantor").uses_depth

    def test_unknown(self):
        registry = get_gallery_registry()
        assert registry.get_gallery("torus") is None
        with pytest.raises(UnknownGalleryError):
            registry.require("torus")

    def test_spacing_placeholder_is_resolved(self):
        cantor = get_gallery_registry().require("cantor")
        j = cantor.build_map()
        assert cantor.resolved_parameters(j)["surjectivity_tol"] == pytest.approx(j.codomain.spacing)

    def test_custom_file(self, tmp_path):
        config = write_json(tmp_path / "gallery.json", {
            "tiny": {"map": "identity", "resolution": 0.5, "description": "three points"}})
        registry = GalleryRegistry(config)
        assert registry.list_galleries() == ["tiny"]
        assert len(registry.require("tiny").build_map().domain) == 3
        assert registry.require("tiny").refined_map() is not None


class TestProblemFiles:
    def test_round_trip(self, tmp_path):
        config = get_gallery_registry().require("canonical")
        original = gallery_problem(config)
        path = export_problem(original, tmp_path / "canonical.json")
        loaded = load_problem(path)
        assert [p.coords for p in loaded.y_space.points] == [p.coords for p in original.y_space.points]
        assert loaded.j.assignment.tolist() == original.j.assignment.tolist()
        assert loaded.x_space.spacing == original.x_space.spacing
        assert loaded.parameters == original.parameters
        assert loaded.refined is not None
        assert len(loaded.refined.domain) == len(original.refined.domain)

    def test_cantor_round_trip_keeps_binary_coordinates(self, tmp_path):
        original = gallery_problem(get_gallery_registry().require("cantor"))
        loaded = load_problem(export_problem(original, tmp_path / "cantor.json"))
        assert loaded.y_space.metric == "cantor"
        assert loaded.y_space.point(5).coords == original.y_space.point(5).coords

    def test_gallery_names_cannot_be_shadowed(self, tmp_path):
        path = write_json(tmp_path / "p.json", interval_problem({y: y for y in range(5)}, name="canonical"))
        assert load_problem(path, gallery_names=["canonical"]).name == "file-canonical"

    def test_imported_fiber_tolerance_defaults_to_covering_radius(self, tmp_path):
        path = write_json(tmp_path / "p.json", interval_problem({y: y for y in range(5)}))
        instance = load_problem(path)
        assert instance.parameters["fiber_tol"] == pytest.approx(0.125)
        assert instance.name == "p"

    def test_unassigned_point(self, tmp_path):
        assignment = {y: y for y in range(5) if y != 3}
        path = write_json(tmp_path / "p.json", interval_problem(assignment))
        with pytest.raises(ProblemFormatError, match="Y point 3"):
            load_problem(path)

    def test_missed_point_is_cited(self, tmp_path):
        path = write_json(tmp_path / "p.json", interval_problem({0: 0, 1: 1, 2: 2, 3: 2, 4: 4}))
        with pytest.raises(SurjectivityError, match="0.75") as info:
            load_problem(path)
        assert info.value.witness.coords == (0.75,)

    def test_bad_json_reports_line(self, tmp_path):
        path = tmp_path / "p.json"
        path.write_text('{\n  "X": {\n    "metric": "euclidean",\n  }\n}\n')
        with pytest.raises(ProblemFormatError) as info:
            load_problem(path)
        assert info.value.line is not None

    def test_unknown_metric(self, tmp_path):
        data = interval_problem({y: y for y in range(5)})
        data["X"]["metric"] = "taxicab"
        with pytest.raises(ProblemFormatError) as info:
            load_problem(write_json(tmp_path / "p.json", data))
        assert info.value.field == "X.metric"

    def test_missing_section(self, tmp_path):
        data = interval_problem({y: y for y in range(5)})
        del data["j"]
        with pytest.raises(ProblemFormatError, match="'j'"):
            load_problem(write_json(tmp_path / "p.json", data))


class TestReports:
    @pytest.fixture(scope="class")
    def report(self):
        return uniqueness_report(build_gallery_map("canonical-projection", 0.25))

    def test_number_format(self):
        assert number(1 / 3) == 0.333333333333
        assert number(float("inf")) is None
        assert number(None) is None

    def test_emit_twice_is_byte_identical(self, report, tmp_path):
        first = emit_report(report, "structured", tmp_path / "a.json").read_bytes()
        second = emit_report(report, "structured", tmp_path / "b.json").read_bytes()
        assert first == second
        assert emit_report(report, "csv", tmp_path / "a.csv").read_bytes() == \
            emit_report(report, "csv", tmp_path / "b.csv").read_bytes()

    def test_structured_fields(self, report):
        data = report_to_dict(report)
        assert data["verdict"] == "non-unique"
        assert data["sections_found"] == 1
        assert list(data)[:3] == ["map", "verdict", "sections_found"]
        assert data["parameters"]["delta"] == 0.5

    def test_empty_sections_row_present(self):
        text = render_report(UniquenessReport(map_name="empty", verdict="none-found"), "csv")
        assert "sections_found,0" in text.splitlines()

    def test_unknown_format(self, report):
        with pytest.raises(ValueError):
            render_report(report, "xml")

    def test_canonical_weights_table(self, tmp_path):
        rows = canonical_weight_rows(canonical_kernel(0.25))
        for x, lower, upper in rows:
            if x <= 1.0:
                assert lower == pytest.approx(x)
                assert upper == pytest.approx(1.0 - x)
            else:
                assert (lower, upper) == (1.0, 0)
        path = write_table(tmp_path / "w.csv", ("x", "weight_lower", "weight_upper"), rows)
        with open(path) as f:
            parsed = list(csv.reader(f))
        assert parsed[0] == ["x", "weight_lower", "weight_upper"]
        assert parsed[2] == ["0.25", "0.25", "0.75"]

    def test_kernel_file(self, tmp_path):
        path = write_kernel(canonical_kernel(0.25), tmp_path / "nu.json")
        data = json.loads(path.read_text())
        assert data["label"] == "canonical"
        assert len(data["measures"]) == 9
        assert data["measures"][0]["atoms"] == [{"point_id": 9, "weight": 1.0}]


class TestLogging:
    def test_log_file_named_after_command(self, tmp_path):
        log_file = setup_logging(False, tmp_path, "gallery")
        assert log_file.parent == tmp_path / "logs"
        assert log_file.name.startswith("gallery_") and log_file.suffix == ".log"
        for handler in logging.getLogger().handlers:
            handler.flush()
        assert "scipy" in log_file.read_text()

    def test_footprint_counts_both_distance_tables(self):
        j = build_gallery_map("canonical-projection", 0.25)
        footprint = instance_footprint(j)
        assert footprint["tables_mb"] == pytest.approx(8 * (len(j.domain) ** 2 + len(j.codomain) ** 2) / 2 ** 20)
        assert footprint["rss_mb"] is None or footprint["rss_mb"] > 0
