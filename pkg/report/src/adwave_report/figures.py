"""The five figure types and the report renderer.

Figures: energy-decay semilog with the fitted rate overlaid, eigenvalue
scatter with vertical reference lines at Re = D0 and Re = -L_inf, the L(t)
convergence curve, the coherent-state scaling fit on log-log axes, and a
polar plot of the damping symbol at the probe point.  Rendering is
deterministic: fixed fonts, a fixed SVG hash salt, and no timestamps in the
output files.
"""

from __future__ import annotations

import html
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .io import ReportError, read_csv_columns, read_json  # noqa: E402

__all__ = ["ReportJob", "FIGURES", "render"]

matplotlib.rcParams.update({
    "svg.hashsalt": "adwave-report",
    "font.family": "DejaVu Sans",
    "figure.figsize": (6.0, 4.0),
    "figure.dpi": 100,
})


@dataclass
class ReportJob:
    """What to render: input directory, figure names, and output formats.

    ``figures=None`` (the default) renders every figure type; an explicitly
    empty tuple renders nothing but still writes the report.html index.
    """

    indir: Path
    figures: tuple[str, ...] | None = None
    formats: tuple[str, ...] = ("svg", "png")

    def __post_init__(self):
        self.indir = Path(self.indir)
        unknown = [f for f in (self.figures or ()) if f not in FIGURES]
        if unknown:
            raise ReportError(
                f"unknown figures {unknown}; available: {sorted(FIGURES)}")


def _save(fig, outdir: Path, name: str, formats) -> list[str]:
    files = []
    for ext in formats:
        path = outdir / f"{name}.{ext}"
        fig.savefig(path, metadata={"Date": None} if ext == "svg" else None)
        files.append(path.name)
    plt.close(fig)
    return files


def fig_energy(indir: Path, outdir: Path, formats) -> list[str]:
    """Semilog energy trace with the fitted exponential overlaid."""
    data = read_csv_columns(indir / "energies.csv", "t,E")
    fit = read_json(indir / "fit.json", ("rate", "intercept", "window"))
    fig, ax = plt.subplots()
    ax.semilogy(data["t"], data["E"], lw=1.0, label="E(t)")
    ta, tb = fit["window"]
    tw = np.linspace(ta, tb, 50)
    ax.semilogy(tw, np.exp(fit["intercept"] - fit["rate"] * tw), "--",
                lw=1.5, label=f"fit: slope = {-fit['rate']:.4g}")
    ax.set_xlabel("t")
    ax.set_ylabel("energy")
    ax.set_title("Energy decay")
    ax.legend()
    return _save(fig, outdir, "energy", formats)


def fig_spectrum(indir: Path, outdir: Path, formats) -> list[str]:
    """Eigenvalue scatter with reference lines at Re = D0 and Re = -L_inf."""
    data = read_csv_columns(indir / "spectrum.csv", "re,im")
    rate = read_json(indir / "rate.json", ("D0", "L_inf"))
    fig, ax = plt.subplots()
    ax.scatter(data["re"], data["im"], s=8, alpha=0.7)
    ax.axvline(rate["D0"], color="tab:red", lw=1.2,
               label=f"D0 = {rate['D0']:.4g}")
    ax.axvline(-rate["L_inf"], color="tab:green", lw=1.2, ls="--",
               label=f"-L_inf = {-rate['L_inf']:.4g}")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title("Generator spectrum")
    ax.legend()
    return _save(fig, outdir, "spectrum", formats)


def fig_averages(indir: Path, outdir: Path, formats) -> list[str]:
    """L(t) convergence curve with the running sup marked."""
    data = read_csv_columns(indir / "Lt.csv", "t,L")
    fig, ax = plt.subplots()
    ax.plot(data["t"], data["L"], lw=1.2)
    sup = float(data["L"].max())
    ax.axhline(sup, color="tab:gray", lw=0.8, ls=":",
               label=f"sup = {sup:.4g}")
    ax.set_xlabel("t")
    ax.set_ylabel("L(t)")
    ax.set_title("Geodesic-average infimum")
    ax.legend()
    return _save(fig, outdir, "averages", formats)


def fig_scaling(indir: Path, outdir: Path, formats) -> list[str]:
    """Log-log norm-vs-k points with a least-squares trend line."""
    data = read_csv_columns(indir / "scaling.csv", "k,norm")
    fig, ax = plt.subplots()
    ax.loglog(data["k"], data["norm"], "o", label="measured")
    slope, icept = np.polyfit(np.log(data["k"]), np.log(data["norm"]), 1)
    ax.loglog(data["k"], np.exp(icept) * data["k"] ** slope, "--",
              label=f"trend: slope = {slope:.3f}")
    ax.set_xlabel("k")
    ax.set_ylabel("norm")
    ax.set_title("Coherent-state scaling")
    ax.legend()
    return _save(fig, outdir, "scaling", formats)


def fig_symbol(indir: Path, outdir: Path, formats) -> list[str]:
    """Polar plot of the damping symbol over directions at the probe point."""
    data = read_csv_columns(indir / "symbol.csv", "theta,w")
    fig, ax = plt.subplots(subplot_kw={"projection": "polar"})
    theta = np.append(data["theta"], data["theta"][0])
    w = np.append(data["w"], data["w"][0])
    ax.plot(theta, w, lw=1.2)
    ax.fill(theta, w, alpha=0.2)
    ax.set_title("w(x0, theta)")
    return _save(fig, outdir, "symbol", formats)


FIGURES = {
    "energy": fig_energy,
    "spectrum": fig_spectrum,
    "averages": fig_averages,
    "scaling": fig_scaling,
    "symbol": fig_symbol,
}

_DEFAULT_ORDER = ("energy", "spectrum", "averages", "scaling", "symbol")


def _write_index(outdir: Path, rendered: dict[str, list[str]]) -> None:
    lines = ["<!DOCTYPE html>", "<html><head><meta charset='utf-8'>",
             "<title>adwave report</title></head><body>",
             "<h1>adwave report</h1>"]
    for name, files in rendered.items():
        lines.append(f"<h2>{html.escape(name)}</h2>")
        svg = [f for f in files if f.endswith(".svg")]
        shown = svg[0] if svg else files[0]
        lines.append(f"<img src='{html.escape(shown)}' alt='{html.escape(name)}'>")
        links = " ".join(f"<a href='{html.escape(f)}'>{html.escape(f)}</a>"
                         for f in files)
        lines.append(f"<p>{links}</p>")
    lines.append("</body></html>")
    (outdir / "report.html").write_text("\n".join(lines) + "\n")


def render(job: ReportJob, outdir: Path) -> dict[str, list[str]]:
    """Render the requested figures plus report.html; fail on missing inputs.

    All missing/corrupt inputs are collected and reported together so a user
    sees the full shopping list in one pass.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    names = _DEFAULT_ORDER if job.figures is None else job.figures
    rendered: dict[str, list[str]] = {}
    errors = []
    for name in names:
        try:
            rendered[name] = FIGURES[name](job.indir, outdir, job.formats)
        except ReportError as exc:
            errors.append(str(exc))
    if errors:
        raise ReportError("; ".join(errors))
    _write_index(outdir, rendered)
    return rendered
