"""Tests for result tables, plots and result stores."""

import json
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

from cogcap.enums import OutputFormat
from cogcap.errors import PlotError
from cogcap.output import (
    COLUMNS,
    FileResultStore,
    Series,
    create_result_store,
    emit_plot,
    emit_results,
    log_log_slope,
    provenance_path,
    read_results,
)


@pytest.fixture
def row(preset):
    data = preset.effective_row()
    data.update(
        lambda_star_analytic=0.1234567890123456,
        binding_constraint="secondary_outage",
        capacity=0.005338,
    )
    return data


class TestEmitResults:
    """Tests for CSV and JSON result tables."""

    def test_empty_rows_give_header(self, tmp_path):
        path = emit_results([], OutputFormat.CSV, tmp_path / "empty.csv")
        assert path.read_text().strip() == ",".join(COLUMNS)

    def test_column_order(self, tmp_path, row):
        path = emit_results([row], "csv", tmp_path / "one.csv")
        frame = read_results(path)
        assert list(frame.columns) == COLUMNS
        assert frame.loc[0, "binding_constraint"] == "secondary_outage"

    def test_significant_digits(self, tmp_path, row):
        path = emit_results([row], OutputFormat.CSV, tmp_path / "digits.csv")
        assert "0.123456789012," in path.read_text()

    def test_missing_values_are_empty(self, tmp_path, row):
        path = emit_results([row], OutputFormat.CSV, tmp_path / "missing.csv")
        frame = read_results(path)
        assert frame["lambda_star_mc"].isna().all()

    def test_repeat_writes_are_identical(self, tmp_path, row):
        first = emit_results([row, row], OutputFormat.CSV, tmp_path / "a.csv")
        second = emit_results([row, row], OutputFormat.CSV, tmp_path / "b.csv")
        assert first.read_bytes() == second.read_bytes()

    def test_json_document(self, tmp_path, row):
        path = emit_results(
            [row], OutputFormat.JSON, tmp_path / "rows.json", provenance={"master_seed": 3}
        )
        document = json.loads(path.read_text())
        assert document["columns"] == COLUMNS
        assert document["provenance"] == {"master_seed": 3}
        loaded = document["rows"][0]
        assert loaded["lambda_star_analytic"] == 0.123456789012
        assert loaded["lambda_star_mc"] is None
        assert loaded["alpha"] == 3.0

    def test_creates_parent_directories(self, tmp_path, row):
        path = emit_results([row], OutputFormat.CSV, tmp_path / "deep" / "dir" / "t.csv")
        assert path.exists()

    def test_csv_provenance_sidecar(self, tmp_path, row):
        path = emit_results(
            [row], OutputFormat.CSV, tmp_path / "table.csv", provenance={"master_seed": 3}
        )
        sidecar = provenance_path(path)
        assert sidecar == tmp_path / "table.provenance.json"
        assert json.loads(sidecar.read_text()) == {"master_seed": 3}
        assert read_results(path).loc[0, "binding_constraint"] == "secondary_outage"

    def test_csv_without_provenance_has_no_sidecar(self, tmp_path, row):
        path = emit_results([row], OutputFormat.CSV, tmp_path / "bare.csv")
        assert not provenance_path(path).exists()


class TestResultStore:
    """Tests for URI-addressed result stores."""

    def test_relative_file_uri(self, tmp_path):
        store = create_result_store("file://./results")
        assert isinstance(store, FileResultStore)
        assert store.base_path.resolve() == (tmp_path / "results").resolve()

    def test_absolute_file_uri(self, tmp_path):
        store = create_result_store(f"file://{tmp_path}/abs")
        assert store.base_path == tmp_path / "abs"
        assert store.get_uri() == f"file://{tmp_path}/abs"

    def test_bare_path(self, tmp_path):
        store = create_result_store(str(tmp_path / "bare"))
        assert store.base_path == tmp_path / "bare"
        assert store.base_path.is_dir()

    def test_unsupported_scheme(self):
        with pytest.raises(ValueError, match="Unsupported storage scheme"):
            create_result_store("s3://bucket/results")

    def test_manifest_sorted_keys(self, tmp_path):
        store = FileResultStore(tmp_path)
        path = store.write_manifest({"b": 1, "a": 2})
        assert path.name == "manifest.json"
        assert path.read_text().index('"a"') < path.read_text().index('"b"')

    def test_nested_artifacts(self, tmp_path):
        store = FileResultStore(tmp_path)
        path = store.write_text("sub/file.txt", "x")
        assert path == tmp_path / "sub" / "file.txt"
        assert path.read_text() == "x"


class TestEmitPlot:
    """Tests for SVG rendering."""

    def test_flat_series_is_valid_svg(self, tmp_path):
        path = emit_plot(
            [Series("flat", [1.0, 2.0, 3.0], [0.5, 0.5, 0.5])],
            tmp_path / "flat.svg",
            xlabel="x",
            ylabel="y",
        )
        root = ET.parse(path).getroot()
        assert root.tag.endswith("svg")

    def test_repeat_renders_are_identical(self, tmp_path):
        series = [Series("line", [1.0, 2.0, 4.0], [1.0, 3.0, 2.0])]
        first = emit_plot(series, tmp_path / "a.svg", xlabel="x", ylabel="y", provenance={"s": 1})
        second = emit_plot(series, tmp_path / "b.svg", xlabel="x", ylabel="y", provenance={"s": 1})
        assert first.read_bytes() == second.read_bytes()

    def test_slope_annotation(self, tmp_path):
        sizes = [2.0, 4.0, 8.0, 16.0]
        series = Series("sqrt", sizes, [n**0.5 for n in sizes])
        assert log_log_slope(series) == pytest.approx(0.5)
        path = emit_plot(
            [series],
            tmp_path / "slope.svg",
            xlabel="N",
            ylabel="lambda",
            loglog=True,
            annotate_slope=True,
        )
        assert "slope 0.50" in path.read_text()

    @pytest.mark.parametrize(
        "series, loglog",
        [
            ([], False),
            ([Series("one", [1.0], [1.0])], False),
            ([Series("flat-x", [2.0, 2.0], [1.0, 3.0])], False),
            ([Series("zero", [1.0, 2.0], [0.0, 1.0])], True),
            ([Series("nan", [1.0, 2.0], [float("nan"), 1.0])], False),
        ],
    )
    def test_unplottable(self, tmp_path, series, loglog):
        with pytest.raises(PlotError):
            emit_plot(series, tmp_path / "bad.svg", xlabel="x", ylabel="y", loglog=loglog)
        assert not Path(tmp_path / "bad.svg").exists()
