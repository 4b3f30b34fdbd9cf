"""Command-line driver: every experiment as a batch command with CSV/JSON output.

Commands share one JSON config (--config, overridable with --set key=value)
and write their results plus a manifest into the output directory.  Exit
codes: 0 success, 1 invalid configuration, 2 numerical failure, 3 acceptance
failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .averages import L_infinity_estimate, agcc_check
from .beams import BeamError, BeamSpec, ScalingTestSpec, beam_decay_experiment, \
    scaling_experiment
from .config import ConfigError, a0_from_config, apply_override, \
    descriptor_from_config, load_config
from .evolution import EvolutionError, evolve, fit_decay, random_state
from .geometry import TWO_PI, TorusPoint
from .quantization import Grid, QuantizationError
from .spectrum import SpectrumError, assumption2_check, spectrum
from .symbols import SymbolError

__all__ = ["main"]


def _fmt(x) -> str:
    """Shortest round-trip decimal representation of a float."""
    return repr(float(x))


def write_csv(path: Path, header: str, rows) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_json(path: Path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_manifest(outdir: Path, command: str, cfg: dict, wall: float) -> None:
    blob = json.dumps(cfg, sort_keys=True).encode()
    write_json(outdir / "manifest.json", {
        "command": command,
        "config": cfg,
        "config_sha256": hashlib.sha256(blob).hexdigest(),
        "versions": {
            "adwave": __version__,
            "numpy": np.__version__,
            "python": sys.version.split()[0],
        },
        "wall_seconds": wall,
    })


def _outdir(cfg: dict, args) -> Path:
    d = Path(args.out) if args.out else Path(cfg["output"]["directory"])
    d.mkdir(parents=True, exist_ok=True)
    return d


def cmd_rate(cfg: dict, outdir: Path) -> int:
    desc = descriptor_from_config(cfg)
    av_cfg = cfg["averages"]
    av = L_infinity_estimate(desc, av_cfg["t_max"], n_x=av_cfg["n_x"],
                             n_theta=av_cfg["n_theta"], h=av_cfg["quad_step"])
    sp = spectrum(desc, cfg["spectrum"]["n_max"],
                  zero_tol=cfg["spectrum"]["zero_tol"])
    alpha = 2.0 * min(-sp.D0, av.L_inf_estimate)
    write_csv(outdir / "Lt.csv", "t,L", zip(av.t_samples, av.L_values))
    write_csv(outdir / "spectrum.csv", "re,im",
              zip(sp.eigenvalues.real, sp.eigenvalues.imag))
    x0 = TorusPoint(*cfg["beams"]["x0"])
    thetas = np.arange(256) * (TWO_PI / 256)
    write_csv(outdir / "symbol.csv", "theta,w",
              zip(thetas, desc.eval_w(x0.x1, x0.x2, thetas)))
    write_json(outdir / "rate.json", {
        "L_inf": av.L_inf_estimate,
        "D0": sp.D0,
        "alpha": alpha,
    })
    print(f"L_inf = {av.L_inf_estimate:.6g}  D0 = {sp.D0:.6g}  "
          f"alpha = {alpha:.6g}")
    return 0


def cmd_agcc(cfg: dict, outdir: Path) -> int:
    desc = descriptor_from_config(cfg)
    av = cfg["averages"]
    verdict = agcc_check(desc, av["c_floor"], av["t_max"], n_x=av["n_x"],
                         n_theta=av["n_theta"], h=av["quad_step"])
    payload = verdict.to_dict()
    if not verdict.satisfied:
        payload["T0"] = None  # no finite hitting time
    write_json(outdir / "agcc.json", payload)
    print(f"agcc satisfied = {verdict.satisfied}  T0 = {verdict.T0}")
    return 0


def cmd_spectrum(cfg: dict, outdir: Path) -> int:
    desc = descriptor_from_config(cfg)
    sp = spectrum(desc, cfg["spectrum"]["n_max"],
                  zero_tol=cfg["spectrum"]["zero_tol"])
    a2 = assumption2_check(desc, min(cfg["spectrum"]["n_max"], 5))
    write_csv(outdir / "spectrum.csv", "re,im",
              zip(sp.eigenvalues.real, sp.eigenvalues.imag))
    summary = sp.summary()
    summary["assumption2_min_sigma"] = a2.min_sigma
    write_json(outdir / "spectrum.json", summary)
    print(f"D0 = {sp.D0:.6g}  D_inf = {sp.D_inf_estimate:.6g}  "
          f"min sigma = {a2.min_sigma:.6g}")
    return 0


def cmd_evolve(cfg: dict, outdir: Path) -> int:
    desc = descriptor_from_config(cfg)
    ev = cfg["evolution"]
    grid = Grid(cfg["grid"]["n"])
    initial = random_state(grid, band=ev["band"], seed=ev["seed"])
    trace = evolve(desc, initial, ev["t_max"], ev["dt"],
                   record_every=ev["record_every"])
    write_csv(outdir / "energies.csv", "t,E", zip(trace.times, trace.energies))
    window = (ev["t_max"] / 4.0, ev["t_max"])
    fit = fit_decay(trace, window)
    write_json(outdir / "fit.json", {
        "rate": fit.rate,
        "window": list(fit.window),
        "residual": fit.residual,
        "intercept": fit.intercept,
    })
    print(f"fitted rate = {fit.rate:.6g} on window [{window[0]:g}, {window[1]:g}]")
    return 0


def cmd_beam(cfg: dict, outdir: Path) -> int:
    desc = descriptor_from_config(cfg)
    bm = cfg["beams"]
    grid = Grid(cfg["grid"]["n"])
    a0 = a0_from_config(cfg)
    rows = []
    for k in bm["k_list"]:
        spec = BeamSpec(TorusPoint(*bm["x0"]), bm["theta0"], float(k), A0=a0)
        res = beam_decay_experiment(desc, grid, spec, bm["T"],
                                    dt=cfg["evolution"]["dt"])
        rows.append((res["k"], res["T"], res["measured"], res["predicted"]))
        print(f"k = {k:g}: measured {res['measured']:.6g}  "
              f"predicted {res['predicted']:.6g}")
    write_csv(outdir / "beam_decay.csv", "k,T,measured,predicted", rows)
    return 0


def cmd_scaling(cfg: dict, outdir: Path) -> int:
    bm = cfg["beams"]
    grid = Grid(cfg["grid"]["n"])
    x0 = TorusPoint(*bm["x0"])
    ks = tuple(bm["k_list"])
    tests = [
        ("identity", ScalingTestSpec("identity", 0, 0, ks, x0=x0,
                                     theta0=bm["theta0"])),
        ("angular", ScalingTestSpec("angular", 0, 1, ks, x0=x0,
                                    theta0=bm["theta0"])),
        ("spatial", ScalingTestSpec("spatial", 0, 2, ks, x0=x0,
                                    theta0=bm["theta0"], gamma=(2, 0))),
    ]
    slopes = {}
    for name, test in tests:
        res = scaling_experiment(test, grid)
        slopes[name] = {"slope": res["slope"], "bound": res["bound"]}
        if name == "angular":
            write_csv(outdir / "scaling.csv", "k,norm",
                      zip(res["k_list"], res["norms"]))
        print(f"{name}: slope {res['slope']:.4f}  bound {res['bound']:g}")
    write_json(outdir / "scaling.json", slopes)
    return 0


def cmd_verify(cfg: dict, outdir: Path) -> int:
    from .acceptance import run_all

    results = run_all()
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{r.name:<{width}}  {status}  {r.detail}")
    write_json(outdir / "verify.json", [
        {"name": r.name, "passed": r.passed, "detail": r.detail}
        for r in results
    ])
    return 0 if all(r.passed for r in results) else 3


_COMMANDS = {
    "rate": cmd_rate,
    "agcc": cmd_agcc,
    "spectrum": cmd_spectrum,
    "evolve": cmd_evolve,
    "beam": cmd_beam,
    "coherent-scaling": cmd_scaling,
    "verify": cmd_verify,
}


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="adwave",
        description="Decay-rate laboratory for anisotropically damped waves "
                    "on the flat 2-torus.",
    )
    p.add_argument("command", choices=sorted(_COMMANDS))
    p.add_argument("--config", help="path to a JSON config file")
    p.add_argument("--out", help="output directory (overrides config)")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   dest="overrides", help="override a config entry (dotted path)")
    p.add_argument("--jobs", type=int, default=1,
                   help="worker count for independent jobs (accepted; "
                        "commands here run a single job)")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    start = time.monotonic()
    try:
        user = {}
        if args.config:
            with open(args.config) as fh:
                user = json.load(fh)
            if not isinstance(user, dict):
                raise ConfigError("config root must be a JSON object")
        for assignment in args.overrides:
            apply_override(user, assignment)
        from .config import merge_config
        cfg = merge_config(user)
    except (ConfigError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        outdir = _outdir(cfg, args)
        code = _COMMANDS[args.command](cfg, outdir)
        _write_manifest(outdir, args.command, cfg, time.monotonic() - start)
        return code
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (EvolutionError, SpectrumError, QuantizationError, BeamError,
            SymbolError, ValueError, FloatingPointError,
            np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
