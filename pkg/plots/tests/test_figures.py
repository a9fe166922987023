"""Figure rendering against handcrafted schema files and a real sweep."""

import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from monobandit_plot import FigureSpec, SchemaError, render
from monobandit_plot.cli import main as plot_main


def write_summary(path: Path, **over) -> dict:
    blob = {
        "version": 1,
        "name": "demo",
        "variant": "static_lgd",
        "label": "static_lgd",
        "slope": 0.5,
        "intercept": 0.0,
        "r2": 1.0,
        "points": [[100, 10.0, 1.0], [10000, 100.0, 5.0], [1000000, 1000.0, 20.0]],
        "excluded": [],
        "kappa": 0.01,
    }
    blob.update(over)
    path.write_text(json.dumps(blob))
    return blob


def write_trace(path: Path, rows) -> None:
    lines = ["t,x,y,inst_regret,phase,lag,event"]
    for t, (x, y, r, phase, lag, event) in enumerate(rows, start=1):
        lines.append(f"{t},{x},{y},{r},{phase},{lag},{event}")
    path.write_text("\n".join(lines) + "\n")


class TestLoglogSlope:
    def test_sidecar_matches_summary_exactly(self, tmp_path):
        summary = write_summary(tmp_path / "summary.json")
        out = tmp_path / "fig.png"
        sidecar_path = render(FigureSpec(
            kind="loglog_slope", inputs=[tmp_path / "summary.json"], out_path=out,
        ))
        assert out.exists()
        sidecar = json.loads(Path(sidecar_path).read_text())
        series = sidecar["series"][0]
        assert series["points"] == summary["points"]
        assert series["slope"] == summary["slope"]
        assert "0.50" in series["annotation"]

    def test_empty_points_errors_without_output(self, tmp_path):
        write_summary(tmp_path / "summary.json", points=[])
        out = tmp_path / "fig.png"
        with pytest.raises(SchemaError, match="empty points"):
            render(FigureSpec(kind="loglog_slope", inputs=[tmp_path / "summary.json"],
                              out_path=out))
        assert not out.exists()
        assert not Path(str(out) + ".json").exists()

    def test_version_mismatch_rejected(self, tmp_path):
        write_summary(tmp_path / "summary.json", version=99)
        with pytest.raises(SchemaError, match="version"):
            render(FigureSpec(kind="loglog_slope", inputs=[tmp_path / "summary.json"],
                              out_path=tmp_path / "fig.png"))

    def test_missing_key_rejected(self, tmp_path):
        blob = write_summary(tmp_path / "summary.json")
        del blob["slope"]
        (tmp_path / "summary.json").write_text(json.dumps(blob))
        with pytest.raises(SchemaError, match="slope"):
            render(FigureSpec(kind="loglog_slope", inputs=[tmp_path / "summary.json"],
                              out_path=tmp_path / "fig.png"))

    def test_sidecar_byte_deterministic(self, tmp_path):
        write_summary(tmp_path / "summary.json")
        blobs = []
        for name in ("a.png", "b.png"):
            sidecar = render(FigureSpec(
                kind="loglog_slope", inputs=[tmp_path / "summary.json"],
                out_path=tmp_path / name,
            ))
            blobs.append(Path(sidecar).read_bytes())
        assert blobs[0] == blobs[1]


class TestLagTimeline:
    def test_segments_and_boundaries(self, tmp_path):
        rows = (
            [(0.0, 1.0, 1.0, 1, 0.2, "sample")] * 3
            + [(0.1, 0.8, 0.8, 2, 0.1, "lag_shrink")] * 2
            + [(0.2, 0.6, 0.6, 3, 0.05, "lag_shrink")] * 4
        )
        write_trace(tmp_path / "trace.csv", rows)
        out = tmp_path / "lag.png"
        sidecar_path = render(FigureSpec(kind="lag_timeline",
                                         inputs=[tmp_path / "trace.csv"], out_path=out))
        sidecar = json.loads(Path(sidecar_path).read_text())
        assert sidecar["segments"] == [[1, 3, 0.2], [4, 5, 0.1], [6, 9, 0.05]]
        assert sidecar["phase_boundaries"] == [4, 6]
        lags = [seg[2] for seg in sidecar["segments"]]
        assert lags == sorted(lags, reverse=True)
        assert out.exists()

    def test_no_lag_entries_rejected(self, tmp_path):
        write_trace(tmp_path / "trace.csv", [(0.5, 1.0, 1.0, 0, 0.0, "sample")] * 3)
        with pytest.raises(SchemaError, match="no positive lag"):
            render(FigureSpec(kind="lag_timeline", inputs=[tmp_path / "trace.csv"],
                              out_path=tmp_path / "x.png"))

    def test_foreign_header_rejected(self, tmp_path):
        (tmp_path / "trace.csv").write_text("a,b\n1,2\n")
        with pytest.raises(SchemaError, match="header"):
            render(FigureSpec(kind="lag_timeline", inputs=[tmp_path / "trace.csv"],
                              out_path=tmp_path / "x.png"))


class TestRegretCurve:
    def test_cumulative_series(self, tmp_path):
        rows = [(0.1 * k, 1.0, 0.5, 0, 0.0, "sample") for k in range(5)]
        write_trace(tmp_path / "trace.csv", rows)
        sidecar_path = render(FigureSpec(kind="regret_curve",
                                         inputs=[tmp_path / "trace.csv"],
                                         out_path=tmp_path / "r.png"))
        sidecar = json.loads(Path(sidecar_path).read_text())
        series = sidecar["series"][0]
        assert series["t"] == [1, 2, 3, 4, 5]
        assert series["cum_regret"] == pytest.approx([0.5, 1.0, 1.5, 2.0, 2.5])

    def test_downsampling_is_deterministic_and_bounded(self, tmp_path):
        rows = [(0.0, 0.0, 0.001, 0, 0.0, "sample")] * 25_000
        write_trace(tmp_path / "big.csv", rows)
        sidecars = []
        for name in ("a.png", "b.png"):
            sidecar = render(FigureSpec(kind="regret_curve",
                                        inputs=[tmp_path / "big.csv"],
                                        out_path=tmp_path / name))
            sidecars.append(Path(sidecar).read_bytes())
        assert sidecars[0] == sidecars[1]
        series = json.loads(sidecars[0])["series"][0]
        assert len(series["t"]) <= 10_000
        assert series["t"][-1] == 25_000


class TestCli:
    def test_cli_roundtrip(self, tmp_path, capsys):
        write_summary(tmp_path / "summary.json")
        out = tmp_path / "fig.png"
        code = plot_main(["--kind", "loglog_slope", "--in", str(tmp_path / "summary.json"),
                          "--out", str(out)])
        assert code == 0
        assert out.exists()
        assert "wrote" in capsys.readouterr().out

    def test_cli_schema_error_exit_code(self, tmp_path, capsys):
        write_summary(tmp_path / "summary.json", points=[])
        code = plot_main(["--kind", "loglog_slope", "--in", str(tmp_path / "summary.json"),
                          "--out", str(tmp_path / "fig.png")])
        assert code == 2
        assert "error" in capsys.readouterr().err


@pytest.mark.skipif(shutil.which("monobandit") is None,
                    reason="monobandit CLI not installed")
class TestAgainstRealSweep:
    """Criterion 9: figures from actual sweep outputs, data matched exactly."""

    @pytest.fixture(scope="class")
    @staticmethod
    def sweep_dir(tmp_path_factory):
        root = tmp_path_factory.mktemp("sweep")
        config = {
            "name": "ordering",
            "objective": {"family": "quartic", "center": 1.25, "a": 5.0,
                          "b": 0.10666666666666667, "lo": 0.0, "hi": 2.0},
            "noise": {"kind": "uniform", "diameter": 1.0},
            "algos": [
                {"variant": "static_lgd"},
                {"variant": "adaptive_lgd", "delta1": 0.3, "q": 0.3},
            ],
            "horizons": [3000, 30000, 300000],
            "replicates": 3,
            "kappa": 0.005,
            "seed": 0,
            "write_traces": "first",
        }
        cfg = root / "sweep.json"
        cfg.write_text(json.dumps(config))
        subprocess.run(
            ["monobandit", "sweep", "--config", str(cfg), "--out", str(root / "out")],
            check=True, capture_output=True, text=True,
        )
        return root / "out" / "ordering"

    def test_loglog_sidecar_matches_sweep_summary(self, sweep_dir, tmp_path):
        out = tmp_path / "loglog.png"
        code = plot_main([
            "--kind", "loglog_slope",
            "--in", str(sweep_dir / "static_lgd" / "summary.json"),
            "--in", str(sweep_dir / "adaptive_lgd" / "summary.json"),
            "--out", str(out),
        ])
        assert code == 0
        sidecar = json.loads((Path(str(out) + ".json")).read_text())
        for series in sidecar["series"]:
            summary = json.loads(Path(series["source"]).read_text())
            assert series["points"] == summary["points"]
            assert series["slope"] == summary["slope"]
            assert series["excluded"] == summary["excluded"]

    def test_lag_timeline_from_adaptive_trace(self, sweep_dir, tmp_path):
        trace = sweep_dir / "adaptive_lgd" / "30000" / "0" / "trace.csv"
        out = tmp_path / "lag.png"
        code = plot_main(["--kind", "lag_timeline", "--in", str(trace), "--out", str(out)])
        assert code == 0
        sidecar = json.loads(Path(str(out) + ".json").read_text())
        lags = [seg[2] for seg in sidecar["segments"]]
        assert len(lags) >= 2
        assert all(a >= b for a, b in zip(lags, lags[1:]))

    def test_regret_curve_from_matched_traces(self, sweep_dir, tmp_path):
        out = tmp_path / "curves.png"
        code = plot_main([
            "--kind", "regret_curve",
            "--in", str(sweep_dir / "static_lgd" / "30000" / "0" / "trace.csv"),
            "--in", str(sweep_dir / "adaptive_lgd" / "30000" / "0" / "trace.csv"),
            "--out", str(out),
        ])
        assert code == 0
        sidecar = json.loads(Path(str(out) + ".json").read_text())
        assert len(sidecar["series"]) == 2
