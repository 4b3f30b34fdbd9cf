"""Figure rendering from fixture CSV/JSON files, without the simulation stack."""

import json
import math
import re

import numpy as np
import pytest

from adwave_report.cli import main
from adwave_report.figures import FIGURES, ReportJob, render
from adwave_report.io import ReportError, read_csv_columns, read_json


def _write_fixture_dir(d):
    """Artifact files shaped like a constant-damping run (rate 0.2)."""
    t = [float(v) for v in np.linspace(0, 20, 101)]
    lines = ["t,E"] + [f"{ti!r},{3.0 * math.exp(-0.2 * ti)!r}" for ti in t]
    (d / "energies.csv").write_text("\n".join(lines) + "\n")
    (d / "fit.json").write_text(json.dumps(
        {"rate": 0.2, "intercept": math.log(3.0), "window": [5.0, 20.0],
         "residual": 0.0}))

    eigs = ["re,im"]
    for n2 in (0, 1, 1, 2, 4):
        om = 2 * math.pi * math.sqrt(n2)
        eigs += [f"-0.1,{om!r}", f"-0.1,{-om!r}"]
    (d / "spectrum.csv").write_text("\n".join(eigs) + "\n")
    (d / "rate.json").write_text(json.dumps(
        {"D0": -0.1, "L_inf": 0.1, "alpha": 0.2}))

    ts = [float(v) for v in np.linspace(0.25, 16, 64)]
    lt = ["t,L"] + [f"{ti!r},{0.1 * (1 - math.exp(-ti))!r}" for ti in ts]
    (d / "Lt.csv").write_text("\n".join(lt) + "\n")

    ks = (32, 64, 128, 256)
    sc = ["k,norm"] + [f"{float(k)!r},{k ** -0.5!r}" for k in ks]
    (d / "scaling.csv").write_text("\n".join(sc) + "\n")

    th = [k * 2 * math.pi / 256 for k in range(256)]
    sym = ["theta,w"] + [f"{x!r},{(math.cos(2 * x) ** 2)!r}" for x in th]
    (d / "symbol.csv").write_text("\n".join(sym) + "\n")


@pytest.fixture()
def fixture_dir(tmp_path):
    indir = tmp_path / "run"
    indir.mkdir()
    _write_fixture_dir(indir)
    return indir


class TestIO:
    def test_missing_file(self, tmp_path):
        with pytest.raises(ReportError, match="missing"):
            read_csv_columns(tmp_path / "nope.csv", "t,E")

    def test_wrong_header(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("a,b\n1,2\n")
        with pytest.raises(ReportError, match="header"):
            read_csv_columns(p, "t,E")

    def test_non_numeric(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("t,E\n1,banana\n")
        with pytest.raises(ReportError, match="non-numeric"):
            read_csv_columns(p, "t,E")

    def test_json_required_keys(self, tmp_path):
        p = tmp_path / "fit.json"
        p.write_text(json.dumps({"rate": 0.2}))
        with pytest.raises(ReportError, match="missing keys"):
            read_json(p, ("rate", "intercept"))


class TestRender:
    def test_all_five_figures(self, fixture_dir, tmp_path):
        out = tmp_path / "figs"
        rendered = render(ReportJob(fixture_dir), out)
        assert set(rendered) == set(FIGURES)
        for files in rendered.values():
            for f in files:
                assert (out / f).stat().st_size > 0
        assert (out / "report.html").is_file()
        idx = (out / "report.html").read_text()
        for name in FIGURES:
            assert f"{name}.svg" in idx

    def test_spectrum_reference_lines_match_json(self, fixture_dir, tmp_path):
        out = tmp_path / "figs"
        render(ReportJob(fixture_dir, ("spectrum",)), out)
        svg = (out / "spectrum.svg").read_text()
        rate = json.loads((fixture_dir / "rate.json").read_text())
        # the legend carries the exact values drawn as vertical lines
        assert f"D0 = {rate['D0']:.4g}" in svg
        assert f"-L_inf = {-rate['L_inf']:.4g}" in svg

    def test_energy_slope_annotation(self, fixture_dir, tmp_path):
        out = tmp_path / "figs"
        render(ReportJob(fixture_dir, ("energy",)), out)
        svg = (out / "energy.svg").read_text()
        assert "slope = -0.2" in svg

    def test_empty_figure_list_writes_only_index(self, fixture_dir, tmp_path):
        out = tmp_path / "figs"
        rendered = render(ReportJob(fixture_dir, ()), out)
        assert rendered == {}
        assert sorted(p.name for p in out.iterdir()) == ["report.html"]

    def test_missing_inputs_listed(self, tmp_path):
        indir = tmp_path / "empty"
        indir.mkdir()
        with pytest.raises(ReportError) as err:
            render(ReportJob(indir), tmp_path / "figs")
        msg = str(err.value)
        for name in ("energies.csv", "spectrum.csv", "Lt.csv", "scaling.csv",
                     "symbol.csv"):
            assert name in msg

    def test_unknown_figure_rejected(self, fixture_dir):
        with pytest.raises(ReportError, match="unknown figures"):
            ReportJob(fixture_dir, ("waterfall",))

    def test_deterministic_svg(self, fixture_dir, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        render(ReportJob(fixture_dir, ("spectrum",), ("svg",)), a)
        render(ReportJob(fixture_dir, ("spectrum",), ("svg",)), b)
        assert (a / "spectrum.svg").read_bytes() == (b / "spectrum.svg").read_bytes()


class TestCLI:
    def test_main_renders(self, fixture_dir, tmp_path, capsys):
        out = tmp_path / "figs"
        assert main(["--in", str(fixture_dir), "--out", str(out)]) == 0
        assert (out / "report.html").is_file()
        assert "index:" in capsys.readouterr().out

    def test_main_missing_inputs_exit_1(self, tmp_path, capsys):
        indir = tmp_path / "empty"
        indir.mkdir()
        code = main(["--in", str(indir), "--out", str(tmp_path / "figs")])
        assert code == 1
        assert "energies.csv" in capsys.readouterr().err

    def test_figure_subset(self, fixture_dir, tmp_path):
        out = tmp_path / "figs"
        assert main(["--in", str(fixture_dir), "--out", str(out),
                     "--figures", "symbol", "--formats", "svg"]) == 0
        names = sorted(p.name for p in out.iterdir())
        assert names == ["report.html", "symbol.svg"]
