"""Experiment drivers: simulate, survey, vn, regions, predict, compare.

Configuration is a flat key=value text file; repeated sweep axes take
comma-separated lists.  Command-line `key=value` arguments override file
keys.  Exit codes: 0 success, 2 configuration error, 1 runtime error; on
failure a machine-readable `error: category=<config|runtime> ...` line is
printed to stderr.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__, csvio, multiscale, regions, vn
from .diagnostics import error_series
from .kdv import SimulationConfig, SolitonParams, run
from .schemes import by_name
from .spectral import Grid


class ConfigError(ValueError):
    pass


def parse_config(path) -> dict:
    """Flat key = value file; '#' starts a comment; later keys win."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value, got {raw!r}")
        k, v = line.split("=", 1)
        k = k.strip()
        if not k:
            raise ConfigError(f"{path}:{lineno}: empty key")
        out[k] = v.strip()
    return out


def _apply_overrides(cfg: dict, pairs) -> dict:
    for pair in pairs:
        if "=" not in pair:
            raise ConfigError(f"override {pair!r} is not key=value")
        k, v = pair.split("=", 1)
        cfg[k.strip()] = v.strip()
    return cfg


def _get(cfg, key, conv, default=None, required=False):
    if key not in cfg:
        if required:
            raise ConfigError(f"missing required key {key!r}")
        return default
    try:
        return conv(cfg[key])
    except (ValueError, KeyError) as e:
        raise ConfigError(f"key {key!r}: {e}") from e


def _floats(text):
    vals = [float(t) for t in text.split(",") if t.strip()]
    if not vals:
        raise ValueError("empty list")
    return vals


def _ints(text):
    vals = [int(t) for t in text.split(",") if t.strip()]
    if not vals:
        raise ValueError("empty list")
    return vals


def _names(text):
    vals = [t.strip() for t in text.split(",") if t.strip()]
    if not vals:
        raise ValueError("empty list")
    for nm in vals:
        by_name(nm)  # validates
    return vals


def _bool(text):
    if text.lower() in ("1", "true", "yes", "on"):
        return True
    if text.lower() in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _sim_config(cfg: dict) -> SimulationConfig:
    scheme = by_name(_get(cfg, "scheme", str, required=True))
    grid = Grid(_get(cfg, "L", float, 10.0), _get(cfg, "N", int, 256))
    soliton = SolitonParams(
        c=_get(cfg, "c0", float, 0.5),
        alpha=_get(cfg, "alpha", float, required=True),
        x0=_get(cfg, "x0", float, 0.0),
    )
    try:
        return SimulationConfig(
            grid=grid,
            soliton=soliton,
            scheme=scheme,
            dt=_get(cfg, "dt", float, required=True),
            t_max=_get(cfg, "t_max", float, required=True),
            blowup_factor=_get(cfg, "blowup_factor", float, 1e6),
            sample_every=_get(cfg, "sample_every", int, 20),
            snapshot_times=tuple(_get(cfg, "snapshot_times", _floats, ())),
            decay_fraction=_get(cfg, "decay_fraction", float, None),
            bootstrap=_get(cfg, "bootstrap", str, "sbdf"),
            track_error=_get(cfg, "track_error", _bool, False),
        )
    except ValueError as e:
        raise ConfigError(str(e)) from e


def cmd_simulate(cfg: dict) -> int:
    sim = _sim_config(cfg)
    out = Path(_get(cfg, "out", str, "."))
    trace = run(sim)
    rows = zip(trace.times, trace.l2_norms, trace.amplitudes, trace.peak_positions)
    comments = [f"termination={trace.termination.kind} t={trace.termination.time:.17g}"]
    csvio.write_csv(out / "trace.csv", "trace", rows, cfg, comments)
    for t, snap in sorted(trace.snapshots.items()):
        csvio.write_csv(
            out / f"snapshot_t{t:g}.csv", "snapshot", zip(snap.grid.x, snap.values), cfg
        )
    if sim.track_error:
        es = error_series(trace)
        csvio.write_csv(
            out / "errors.csv",
            "errors",
            zip(es.times, es.l2_errors, es.phase_offsets, es.amplitude_ratios),
            cfg,
        )
    print(f"simulate: {trace.termination.kind} at t={trace.termination.time:.6g}")
    return 0


def _survey_point(args):
    scheme_name, alpha, dt, n, base = args
    cfg = dict(base)
    cfg.update(scheme=scheme_name, alpha=str(alpha), dt=str(dt), N=str(n))
    try:
        trace = run(_sim_config(cfg))
        return (scheme_name, alpha, dt, n, trace.termination.kind, trace.termination.time)
    except Exception as e:  # per-row failure; survey continues
        return (scheme_name, alpha, dt, n, f"error:{type(e).__name__}", math.nan)


def cmd_survey(cfg: dict) -> int:
    schemes = _get(cfg, "schemes", _names, required=True)
    alphas = _get(cfg, "alphas", _floats, required=True)
    dts = _get(cfg, "dts", _floats, required=True)
    ns = _get(cfg, "Ns", _ints, required=True)
    jobs = _get(cfg, "jobs", int, 1)
    out = Path(_get(cfg, "out", str, "."))
    base = {
        k: v
        for k, v in cfg.items()
        if k not in ("schemes", "alphas", "dts", "Ns", "jobs", "out")
    }
    grid = [(s, a, d, n, base) for s in schemes for a in alphas for d in dts for n in ns]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_survey_point, grid))  # map preserves grid order
    else:
        rows = [_survey_point(g) for g in grid]
    csvio.write_csv(out / "survey.csv", "survey", rows, cfg)
    print(f"survey: {len(rows)} rows")
    return 0


def cmd_vn(cfg: dict) -> int:
    scheme = by_name(_get(cfg, "scheme", str, required=True))
    alpha = _get(cfg, "alpha", float, required=True)
    dt = _get(cfg, "dt", float, required=True)
    n1 = _get(cfg, "N", int, 512)
    n2 = _get(cfg, "N2", int, 0)
    cutoff = _get(cfg, "cutoff", float, vn.DEFAULT_CUTOFF)
    p = SolitonParams(c=_get(cfg, "c0", float, 0.5), alpha=alpha)
    L = _get(cfg, "L", float, 10.0)
    out = Path(_get(cfg, "out", str, "."))

    def spectrum(n):
        g = Grid(L, n)
        if hasattr(scheme, "s"):
            prob = vn.assemble_sbdf_evp(scheme, alpha, dt, p, g, cutoff=cutoff)
        else:
            prob = vn.assemble_rk_evp(scheme, alpha, dt, p, g, cutoff=cutoff)
        return vn.solve_spectrum(prob)

    rep = spectrum(n1)
    if n2:
        rep = vn.drift_filter(rep, spectrum(n2))
    drift = rep.drift_ratios if rep.drift_ratios is not None else np.full(rep.sigmas.size, math.nan)
    resolved = rep.resolved if rep.resolved is not None else np.ones(rep.sigmas.size, bool)
    rows = [
        (s.real, s.imag, l.real, l.imag, d, bool(r))
        for s, l, d, r in zip(rep.sigmas, rep.lambdas, drift, resolved)
    ]
    lam = rep.lambda_max
    csvio.write_csv(
        out / "eigenreport.csv",
        "eigenreport",
        rows,
        cfg,
        [f"lambda_max={lam.real:.17g}{lam.imag:+.17g}j"],
    )
    print(f"vn: {rep.sigmas.size} modes, Re(lambda_max)={lam.real:.6g}")
    return 0


def cmd_regions(cfg: dict) -> int:
    scheme = by_name(_get(cfg, "scheme", str, required=True))
    zi = np.linspace(
        _get(cfg, "zim_min", float, -4.0),
        _get(cfg, "zim_max", float, 4.0),
        _get(cfg, "zim_n", int, 400),
    )
    ze = np.linspace(
        _get(cfg, "zex_min", float, -4.0),
        _get(cfg, "zex_max", float, 4.0),
        _get(cfg, "zex_n", int, 400),
    )
    out = Path(_get(cfg, "out", str, "."))
    raster = regions.region_scan(scheme, zi, ze)
    rows = (
        (zi[i], ze[j], raster[i, j])
        for i in range(zi.size)
        for j in range(ze.size)
    )
    csvio.write_csv(out / "raster.csv", "raster", rows, cfg)
    print(f"regions: {zi.size * ze.size} points")
    return 0


def cmd_predict(cfg: dict) -> int:
    scheme_id = _get(cfg, "scheme", str, required=True)
    alpha = _get(cfg, "alpha", float, required=True)
    dt = _get(cfg, "dt", float, required=True)
    c0 = _get(cfg, "c0", float, 0.5)
    L = _get(cfg, "L", float, 10.0)
    mode = _get(cfg, "mode", str, "finite")
    out = Path(_get(cfg, "out", str, "."))
    try:
        pred = multiscale.integrate_slow_ode(scheme_id, alpha, dt, c0, L=L, mode=mode)
    except multiscale.FiniteDomainUnavailableError as e:
        raise ConfigError(str(e)) from e
    rows = [
        (t, c, multiscale.predicted_l2(pred, t, alpha, L, c0))
        for t, c in zip(pred.t_samples, pred.c_samples)
    ]
    comments = [
        f"endpoint={pred.endpoint_kind} t={pred.endpoint_time:.17g}",
        f"epsilon={pred.epsilon:.17g} m={pred.m} mode={pred.mode}",
    ]
    csvio.write_csv(out / "prediction.csv", "prediction", rows, cfg, comments)
    print(f"predict: {pred.endpoint_kind} at t={pred.endpoint_time:.6g}")
    return 0


def cmd_compare(cfg: dict) -> int:
    survey_path = _get(cfg, "survey", str, required=True)
    c0 = _get(cfg, "c0", float, 0.5)
    L = _get(cfg, "L", float, 10.0)
    out = Path(_get(cfg, "out", str, "."))
    _, rows_in = csvio.read_csv(survey_path, expect_schema="survey")
    if not rows_in:
        raise ConfigError(f"{survey_path}: empty survey")
    rows = []
    per_scheme: dict = {}
    for r in rows_in:
        if not str(r["termination"]).startswith(("blew_up", "decayed_below")):
            continue
        sid = str(r["scheme"])
        alpha, dt = float(r["alpha"]), float(r["dt"])
        eps = multiscale.epsilon(dt, alpha, c0)
        if sid in multiscale.FINITE_DOMAIN_SCHEMES:
            pred = multiscale.integrate_slow_ode(sid, alpha, dt, c0, L=L, mode="finite")
        else:
            pred = multiscale.integrate_slow_ode(sid, alpha, dt, c0, mode="infinite")
        t_meas = float(r["t_end"])
        rel = abs(t_meas - pred.endpoint_time) / t_meas
        rows.append((eps, alpha, dt, sid, t_meas, pred.endpoint_time, rel))
        per_scheme.setdefault(sid, []).append((eps, rel))
    comments = []
    for sid, pts in sorted(per_scheme.items()):
        if len(pts) >= 2 and all(rel > 0 for _, rel in pts):
            es, rels = zip(*sorted(pts))
            slope = float(np.polyfit(np.log(es), np.log(rels), 1)[0])
            comments.append(f"slope scheme={sid} value={slope:.17g}")
    csvio.write_csv(out / "comparison.csv", "comparison", rows, cfg, comments)
    print(f"compare: {len(rows)} rows")
    return 0


_COMMANDS = {
    "simulate": cmd_simulate,
    "survey": cmd_survey,
    "vn": cmd_vn,
    "regions": cmd_regions,
    "predict": cmd_predict,
    "compare": cmd_compare,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="kdvlab", description=__doc__)
    parser.add_argument("--version", action="version", version=f"kdvlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="key = value configuration file")
        sp.add_argument("overrides", nargs="*", help="key=value overrides")
    args = parser.parse_args(argv)
    try:
        cfg = parse_config(args.config) if args.config else {}
        _apply_overrides(cfg, args.overrides)
        return _COMMANDS[args.command](cfg)
    except ConfigError as e:
        print(f"error: category=config {e}", file=sys.stderr)
        return 2
    except Exception as e:
        print(f"error: category=runtime {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
