"""Plot pipeline: CSV parsing, transforms, rendering, regression table."""

from pathlib import Path

import numpy as np
import pytest
import yaml

from rszero_plots import cli
from rszero_plots.core import (
    AGGREGATE_HEADER,
    PlotDataError,
    PlotSpec,
    SeriesTable,
    apply_transform,
    extract_table,
    load_spec,
    read_aggregate_csv,
    render,
)

GOLDEN = Path(__file__).parent / "golden" / "five_curve_table.txt"


def write_aggregate(path, rows):
    lines = [AGGREGATE_HEADER]
    for row in rows:
        lines.append(",".join("" if v is None else "%.12g" % v for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def synthetic_aggregate(path, rate, offset):
    """Deterministic decaying curve standing in for one algorithm's output."""
    x = np.linspace(0.0, 10_000.0, 200)
    mean = (1.0 + offset) * np.exp(-rate * x / 10_000.0) + 1e-6
    std = 0.1 * mean
    rows = [(x[i], mean[i], std[i], None, None) for i in range(len(x))]
    write_aggregate(path, rows)


class TestParsing:
    def test_roundtrip_preserves_contract_strings(self, tmp_path):
        path = tmp_path / "agg.csv"
        rows = [(0.0, 0.123456789012, 0.01, 0.5, 0.05), (50.0, 0.1, 0.0, None, None)]
        write_aggregate(path, rows)
        cols = read_aggregate_csv(path)
        # re-serializing the parsed values reproduces the file byte for byte
        write_aggregate(
            tmp_path / "again.csv",
            [
                tuple(
                    None if np.isnan(cols[name][i]) else cols[name][i]
                    for name in AGGREGATE_HEADER.split(",")
                )
                for i in range(2)
            ],
        )
        assert (tmp_path / "again.csv").read_bytes() == path.read_bytes()

    def test_bad_header(self, tmp_path):
        p = tmp_path / "agg.csv"
        p.write_text("a,b\n1,2\n")
        with pytest.raises(PlotDataError, match="header"):
            read_aggregate_csv(p)

    def test_bad_value_names_column_and_row(self, tmp_path):
        p = tmp_path / "agg.csv"
        p.write_text(AGGREGATE_HEADER + "\n0,oops,0,0,0\n")
        with pytest.raises(PlotDataError, match=r"agg.csv:2: column f_mean"):
            read_aggregate_csv(p)

    def test_wrong_field_count(self, tmp_path):
        p = tmp_path / "agg.csv"
        p.write_text(AGGREGATE_HEADER + "\n0,1,2\n")
        with pytest.raises(PlotDataError, match="expected 5 fields"):
            read_aggregate_csv(p)


class TestTransforms:
    def test_log_values(self):
        out = apply_transform(np.array([1.0, np.e]), "log")
        assert out == pytest.approx([0.0, 1.0])

    def test_log_guards_nonpositive(self):
        out = apply_transform(np.array([0.0, -1.0]), "log")
        assert np.all(np.isfinite(out))

    def test_loglog_inner_guards_below_one(self):
        out = apply_transform(np.array([0.5, 1.0]), "loglog-inner")
        assert np.all(np.isfinite(out))
        assert out[0] == out[1]

    @pytest.mark.parametrize("transform", ["log", "loglog-inner"])
    def test_monotone(self, transform):
        v = np.linspace(1.1, 50.0, 100)
        out = apply_transform(v, transform)
        assert np.all(np.diff(out) > 0)


class TestSpec:
    def test_duplicate_labels_rejected(self, tmp_path):
        with pytest.raises(PlotDataError, match="unique"):
            PlotSpec(inputs=(("a.csv", "x"), ("b.csv", "x")), output="o.png")

    def test_empty_inputs_rejected(self):
        with pytest.raises(PlotDataError, match="at least one"):
            PlotSpec(inputs=(), output="o.png")

    def test_unknown_transform_rejected(self):
        with pytest.raises(PlotDataError, match="transform"):
            PlotSpec(inputs=(("a.csv", "x"),), output="o.png", transform="sqrt")

    def test_load_spec_roundtrip(self, tmp_path):
        doc = {
            "inputs": [{"csv": "a.csv", "label": "A"}],
            "output": "fig.png",
            "transform": "loglog-inner",
            "title": "demo",
        }
        p = tmp_path / "spec.yaml"
        p.write_text(yaml.safe_dump(doc))
        spec = load_spec(p)
        assert spec.inputs == (("a.csv", "A"),)
        assert spec.transform == "loglog-inner"

    def test_load_spec_unknown_key(self, tmp_path):
        p = tmp_path / "spec.yaml"
        p.write_text(yaml.safe_dump({"inputs": [], "output": "x.png", "bogus": 1}))
        with pytest.raises(PlotDataError, match="unknown key"):
            load_spec(p)


class TestRender:
    def test_flat_constant_is_zero_under_log(self, tmp_path):
        p = tmp_path / "agg.csv"
        write_aggregate(p, [(0.0, 1.0, 0.0, None, None), (100.0, 1.0, 0.0, None, None)])
        spec = PlotSpec(inputs=((str(p), "const"),), output=str(tmp_path / "f.png"))
        table = extract_table(spec)
        _, x, y, lo, hi = table.series[0]
        assert np.all(y == 0.0)

    def test_two_curves_two_bands(self, tmp_path):
        for i in range(2):
            synthetic_aggregate(tmp_path / f"a{i}.csv", rate=2.0 + i, offset=0.1 * i)
        spec = PlotSpec(
            inputs=tuple((str(tmp_path / f"a{i}.csv"), f"alg{i}") for i in range(2)),
            output=str(tmp_path / "fig.png"),
        )
        out = render(spec)
        assert Path(out).exists() and Path(out).stat().st_size > 0
        table = extract_table(spec)
        assert len(table.series) == 2
        assert [s[0] for s in table.series] == ["alg0", "alg1"]

    @pytest.mark.parametrize("ext", ["png", "svg", "pdf"])
    def test_output_formats(self, tmp_path, ext):
        synthetic_aggregate(tmp_path / "a.csv", rate=2.0, offset=0.0)
        spec = PlotSpec(
            inputs=((str(tmp_path / "a.csv"), "a"),),
            output=str(tmp_path / f"fig.{ext}"),
        )
        assert Path(render(spec)).exists()


class TestFiveCurvePipeline:
    RATES = [(1.0, 0.0), (2.0, 0.05), (3.0, 0.1), (2.5, 0.15), (4.0, 0.2)]
    LABELS = ["gf", "rs-gf", "rs-ngf", "vrgf", "rs-nvrgf"]

    def _build(self, tmp_path):
        for (rate, offset), label in zip(self.RATES, self.LABELS):
            synthetic_aggregate(tmp_path / f"{label}.csv", rate=rate, offset=offset)
        return PlotSpec(
            inputs=tuple((str(tmp_path / f"{l}.csv"), l) for l in self.LABELS),
            output=str(tmp_path / "five.png"),
            transform="log",
            title="benchmark",
        )

    def test_five_curve_figure(self, tmp_path):
        spec = self._build(tmp_path)
        table = extract_table(spec)
        assert len(table.series) == 5
        out = render(spec, table)
        assert Path(out).stat().st_size > 0

    def test_golden_table_byte_exact(self, tmp_path):
        spec = self._build(tmp_path)
        serialized = extract_table(spec).serialize()
        assert serialized.encode() == GOLDEN.read_bytes()


class TestCli:
    def test_spec_file(self, tmp_path):
        synthetic_aggregate(tmp_path / "a.csv", rate=1.0, offset=0.0)
        doc = {
            "inputs": [{"csv": str(tmp_path / "a.csv"), "label": "A"}],
            "output": str(tmp_path / "fig.png"),
        }
        p = tmp_path / "spec.yaml"
        p.write_text(yaml.safe_dump(doc))
        assert cli.main(["--spec", str(p)]) == 0
        assert (tmp_path / "fig.png").exists()

    def test_flag_mirror(self, tmp_path):
        synthetic_aggregate(tmp_path / "a.csv", rate=1.0, offset=0.0)
        code = cli.main(
            [
                "--input",
                f"{tmp_path / 'a.csv'}:A",
                "--output",
                str(tmp_path / "fig.png"),
                "--transform",
                "loglog-inner",
            ]
        )
        assert code == 0

    def test_missing_output_is_usage_error(self, tmp_path):
        assert cli.main(["--input", "a.csv:A"]) == 1

    def test_malformed_csv_is_usage_error(self, tmp_path):
        p = tmp_path / "a.csv"
        p.write_text("bad\n")
        assert cli.main(["--input", f"{p}:A", "--output", str(tmp_path / "f.png")]) == 1
