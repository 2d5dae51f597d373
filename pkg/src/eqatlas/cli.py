"""Command-line front end: ``eq-atlas <command> ...``.

Exit codes: 0 ok, 1 validation failure or unreliable estimate, 2 usage,
3 domain error, 4 branch point, 5 infrastructure failure.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import analytic as an
from . import numerics as nm
from .analytic import ModelParams
from .errors import BranchPointError, DecompositionError, DomainError, TrialFailedError
from .experiments import curves as cv
from .experiments.catalog import scenario_catalog
from .experiments.figures import NU_ALPHAS, emit_figures
from .experiments.model import Curve
from .experiments.runner import atomic_write, run_scenario, versions

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN, EXIT_BRANCH, EXIT_INFRA = range(6)

GLOBAL_DEFAULTS = {"seed": 0, "workers": 1, "out_dir": "runs", "format": "csv", "svg": False}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# formula registry for ``eval``


def _p(m=None, tau=None, n=None):
    return ModelParams(m, tau, n if n is not None else 1)


FORMULAS = {
    "rho_eq": (("x", "y", "tau"), lambda a: an.rho_eq(a["x"], a["y"], a["tau"])),
    "phi_eq": (("x", "tau"), lambda a: an.phi_eq(a["x"], a["tau"])),
    "phi_eq_prime": (("x", "tau"), lambda a: an.phi_eq_prime(a["x"], a["tau"])),
    "psi_r": (("x", "tau"), lambda a: an.psi_r(a["x"], a["tau"])),
    "psi_r_prime": (("x", "tau"), lambda a: an.psi_r_prime(a["x"], a["tau"])),
    "q_r": (("x", "tau", "n"), lambda a: an.q_r(a["x"], a["tau"], a["n"])),
    "p_real_tail": (("x", "n", "tau"), lambda a: an.p_real_tail(a["x"], a["n"], a["tau"])),
    "xmax_tail_log_prob": (("x", "n", "tau"), lambda a: an.xmax_tail_log_prob(a["x"], a["n"], a["tau"])),
    "p_real_bulk": (("n", "tau"), lambda a: an.p_real_bulk(a["n"], a["tau"])),
    "p_real_edge": (("delta", "n", "tau"), lambda a: an.p_real_edge(a["delta"], a["n"], a["tau"])),
    "p_complex_bulk": (("x", "n", "tau"), lambda a: an.p_complex_bulk(a["x"], a["n"], a["tau"])),
    "q_c": (("x", "tau", "n"), lambda a: an.q_c(a["x"], a["tau"], a["n"])),
    "p_complex_tail": (("x", "n", "tau"), lambda a: an.p_complex_tail(a["x"], a["n"], a["tau"])),
    "p_complex_edge": (("delta", "n", "tau"), lambda a: an.p_complex_edge(a["delta"], a["n"], a["tau"])),
    "sigma_eq": (("m",), lambda a: an.sigma_eq(a["m"])),
    "sigma_eq_profile": (("x", "m", "tau"), lambda a: an.sigma_eq_profile(a["x"], _p(a["m"], a["tau"]))),
    "sigma_st": (("m", "tau"), lambda a: an.sigma_st(a["m"], a["tau"], a.get("form") or "bracket")),
    "tau0": (("m",), lambda a: an.tau0(a["m"])),
    "alpha_m": (("m",), lambda a: an.alpha_m(a["m"])),
    "m_alpha": (("alpha",), lambda a: an.m_alpha(a["alpha"])),
    "x_of_alpha": (("alpha", "tau"), lambda a: an.x_of_alpha(a["alpha"], a["tau"])),
    "mu_eq_right": (("x", "tau"), lambda a: an.mu_eq_right(a["x"], a["tau"])),
    "sigma_st_alpha": (("m", "tau", "alpha"), lambda a: an.sigma_st_alpha(a["m"], a["tau"], a["alpha"])),
    "tau0_alpha": (("m", "alpha"), lambda a: an.tau0_alpha(a["m"], a["alpha"])),
    "nu_density": (("alpha", "m", "tau", "n"), lambda a: an.nu_density(a["alpha"], _p(a["m"], a["tau"], a["n"]))),
    "ln_p_st_annealed": (("m", "tau", "n"), lambda a: an.ln_p_st_annealed(_p(a["m"], a["tau"], a["n"]))),
    "ln_n_eq": (("m", "tau", "n"), lambda a: an.ln_n_eq(_p(a["m"], a["tau"], a["n"]))),
    "sigma_gamma": (("gamma", "delta", "tau", "n"),
                    lambda a: an.sigma_gamma(a["gamma"], a["delta"], a["tau"], a["n"])),
    "alpha_of_params": (("m", "tau"), lambda a: an.alpha_of_params(a["m"], a["tau"])),
    "classify_phase": (("m", "tau"), lambda a: str(an.classify_phase(_p(a["m"], a["tau"])))),
    "erf": (("x",), lambda a: nm.erf(a["x"])),
    "erfc": (("x",), lambda a: nm.erfc(a["x"])),
    "erfc_scaled_tail": (("y", "n", "tau"), lambda a: nm.erfc_scaled_tail(a["y"], a["n"], a["tau"])),
    "igamma_ratio": (("n", "a"), lambda a: nm.igamma_ratio(a["n"], a["a"])),
}

EVAL_PARAMS = ("x", "y", "m", "tau", "n", "alpha", "delta", "gamma", "a")


def fmt(v) -> str:
    return v if isinstance(v, str) else f"{float(v):.15g}"


# ---------------------------------------------------------------------------
# argument handling


def parse_grid(text: str) -> np.ndarray:
    """``lo:hi:count`` (inclusive linspace) or a comma-separated list."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"grid {text!r} must look like lo:hi:count")
        lo, hi, k = float(parts[0]), float(parts[1]), int(parts[2])
        if k < 1:
            raise UsageError("grid count must be >= 1")
        return np.linspace(lo, hi, k)
    return np.array([float(v) for v in text.split(",") if v.strip()])


def parse_floats(text: str) -> list[float]:
    return [float(v) for v in str(text).split(",") if v.strip()]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--seed", type=int, default=d, help="base seed (default 0)")
    p.add_argument("--workers", type=int, default=d, help="worker processes (default 1)")
    p.add_argument("--out-dir", dest="out_dir", default=d, help="results directory (default runs)")
    p.add_argument("--format", choices=("csv", "json"), default=d, help="output encoding (default csv)")
    p.add_argument("--config", default=d, help="INI file with [global] and per-command sections")
    p.add_argument("--svg", action="store_const", const=True, default=d, help="also render SVG figures")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="eq-atlas", description=__doc__.splitlines()[0])
    _add_globals(p, suppress=False)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def cmd(name, help):
        s = sub.add_parser(name, help=help)
        _add_globals(s, suppress=True)
        return s

    e = cmd("eval", "evaluate one closed-form quantity")
    e.add_argument("formula")
    for k in EVAL_PARAMS:
        e.add_argument(f"--{k}", type=float if k != "n" else int)
    e.add_argument("--form", choices=("bracket", "difference"))

    ph = cmd("phase-diagram", "phase labels and complexity exponents on an (m, tau) grid")
    ph.add_argument("--m-grid", dest="m_grid")
    ph.add_argument("--tau-grid", dest="tau_grid")
    ph.add_argument("--alpha", help="comma-separated alpha values")

    d = cmd("density", "analytic density curves")
    d.add_argument("kind", choices=cv.DENSITY_KINDS)
    d.add_argument("--m", help="comma-separated m values (index kind)")
    d.add_argument("--tau", type=float)
    d.add_argument("--n", type=int)
    d.add_argument("--grid")
    d.add_argument("--variable", choices=("delta", "x"))
    d.add_argument("--stitch", action="store_const", const=True)

    mc = cmd("mc", "Monte Carlo estimators")
    mc.add_argument("sub", choices=("densities", "counts", "xmax", "mu_h"))
    mc.add_argument("--n", type=int)
    mc.add_argument("--tau", type=float)
    mc.add_argument("--m", type=float)
    mc.add_argument("--alpha", type=float)
    mc.add_argument("--mode", choices=("unconstrained", "stable", "alpha_stable"))
    mc.add_argument("--trials", type=int)
    mc.add_argument("--x-grid", dest="x_grid")
    mc.add_argument("--frames", action="store_const", const=True)

    v = cmd("validate", "run validation scenarios")
    v.add_argument("ids", nargs="+", help='scenario ids or "all"')

    cmd("figures", "write figure data (and SVG with --svg)")
    return p


COMMAND_DEFAULTS = {
    "phase-diagram": {"m_grid": "0.005:1.5:200", "tau_grid": "0.005:0.995:200", "alpha": "0,0.1,0.01,0.001,0.0001"},
    "density": {"tau": 0.5, "n": 100, "variable": "delta", "stitch": False, "m": "0.6,0.7,0.8,0.9"},
    "mc": {"n": 64, "tau": 0.5, "m": 0.5, "alpha": 0.25, "mode": "unconstrained", "trials": 1000, "frames": False},
    "eval": {},
    "validate": {},
    "figures": {},
}

_TYPES = {"seed": int, "workers": int, "n": int, "trials": int, "tau": float, "alpha": float,
          "svg": lambda s: str(s).lower() in ("1", "true", "yes", "on"),
          "stitch": lambda s: str(s).lower() in ("1", "true", "yes", "on"),
          "frames": lambda s: str(s).lower() in ("1", "true", "yes", "on")}


def resolve_config(args: argparse.Namespace) -> dict:
    """Builtin defaults, then the config file, then explicit flags, then EQ_ATLAS_OUT."""
    conf = dict(GLOBAL_DEFAULTS)
    conf.update(COMMAND_DEFAULTS.get(args.command, {}))
    path = getattr(args, "config", None)
    if path:
        cp = configparser.ConfigParser()
        if not cp.read(path, encoding="utf-8"):
            raise UsageError(f"cannot read config file {path!r}")
        for section in ("global", args.command):
            if cp.has_section(section):
                for k, v in cp.items(section):
                    k = k.replace("-", "_")
                    if args.command == "mc" and k == "m":
                        conf[k] = float(v)
                    else:
                        conf[k] = _TYPES.get(k, lambda s: s)(v)
    for k, v in vars(args).items():
        if v is not None and k not in ("config",):
            conf[k] = v
    env = os.environ.get("EQ_ATLAS_OUT")
    if env:
        conf["out_dir"] = env
    conf.pop("config", None)
    return conf


# ---------------------------------------------------------------------------
# commands


def cmd_eval(conf: dict) -> int:
    name = conf["formula"]
    if name not in FORMULAS:
        print(f"unknown formula {name!r}; available:", file=sys.stderr)
        for k in sorted(FORMULAS):
            print(f"  {k} ({', '.join(FORMULAS[k][0])})", file=sys.stderr)
        return EXIT_USAGE
    needed, fn = FORMULAS[name]
    missing = [k for k in needed if conf.get(k) is None]
    if missing:
        raise UsageError(f"{name} needs --{' --'.join(missing)}")
    params = {k: conf[k] for k in needed}
    if conf.get("form"):
        params["form"] = conf["form"]
    value = fn(params)
    if conf["format"] == "json":
        out = value if isinstance(value, str) else float(fmt(value))
        print(json.dumps({"formula": name, "params": params, "value": out}, sort_keys=True))
    else:
        print(fmt(value))
    return EXIT_OK


def _write_table(path: Path, header: list, rows: list, fmt_name: str) -> Path:
    if fmt_name == "json":
        path = path.with_suffix(".json")
        recs = [dict(zip(header, r)) for r in rows]
        atomic_write(path, json.dumps(recs, indent=1, sort_keys=True) + "\n")
    else:
        text = ",".join(header) + "\n" + "".join(",".join(_cell(v) for v in r) + "\n" for r in rows)
        atomic_write(path, text)
    return path


def _cell(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    return fmt(v)


def _echo_config(root: Path, conf: dict) -> None:
    atomic_write(root / "config.json", json.dumps(_jsonable(conf), indent=2, sort_keys=True) + "\n")


def _jsonable(conf: dict) -> dict:
    return {k: (v if isinstance(v, (str, int, float, bool, type(None))) else str(v)) for k, v in conf.items()}


def cmd_phase_diagram(conf: dict) -> int:
    ms = parse_grid(conf["m_grid"])
    taus = parse_grid(conf["tau_grid"])
    alphas = parse_floats(conf["alpha"])
    if not ms.size or not taus.size:
        raise UsageError("empty grid")
    header = ["m", "tau", "phase", "boundary", "sigma_st", "tau0"]
    for a in alphas:
        header += [f"sigma_st_alpha_{a:g}", f"tau0_alpha_{a:g}"]
    header.append("notes")

    def safe(fn, *args):
        try:
            return fn(*args), ""
        except DomainError as exc:
            return math.nan, str(exc)

    labels = np.empty((taus.size, ms.size), dtype=object)
    rows = []
    for i, t in enumerate(taus):
        for j, m in enumerate(ms):
            notes = []
            try:
                labels[i, j] = str(an.classify_phase(ModelParams(m, t)))
            except DomainError as exc:
                labels[i, j] = "invalid"
                notes.append(str(exc))
            row = [m, t, labels[i, j], False]
            for fn, args in ((an.sigma_st, (m, t)), (an.tau0, (m,))):
                v, note = safe(fn, *args)
                row.append(v)
                if note and m < 1:
                    notes.append(note)
            for a in alphas:
                v, note = safe(an.sigma_st_alpha, m, t, a)
                row.append(v)
                v, _ = safe(an.tau0_alpha, m, a)
                row.append(v)
                if note and m < 1:
                    notes.append(note)
            row.append("; ".join(dict.fromkeys(notes)))
            rows.append(row)
    # a cell is on a boundary when a neighbour carries a different label
    k = 0
    for i in range(taus.size):
        for j in range(ms.size):
            here = labels[i, j]
            nb = [labels[a, b] for a, b in ((i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1))
                  if 0 <= a < taus.size and 0 <= b < ms.size]
            rows[k][3] = any(x != here for x in nb)
            k += 1
    root = Path(conf["out_dir"]) / "phase-diagram"
    path = _write_table(root / "phase_grid.csv", header, rows, conf["format"])
    _echo_config(root, conf)
    print(path)
    return EXIT_OK


def _write_curve(root: Path, c: Curve, fmt_name: str) -> Path:
    if fmt_name == "json":
        p = root / f"{c.name}.json"
        d = {"name": c.name, "x_label": c.x_label, "y_label": c.y_label, "provenance": c.provenance,
             "x": list(c.x), "y": list(c.y), "formula": list(c.formula) if c.formula else None}
        atomic_write(p, json.dumps(d, sort_keys=True) + "\n")
    else:
        p = root / f"{c.name}.csv"
        atomic_write(p, c.to_csv())
    return p


def cmd_density(conf: dict) -> int:
    kind, tau, n = conf["kind"], float(conf["tau"]), int(conf["n"])
    curves = []
    if kind == "index":
        grid = parse_grid(conf["grid"]) if conf.get("grid") else NU_ALPHAS
        for m in parse_floats(conf["m"]):
            curves.append(cv.index_density_curve(m, tau, n, grid))
    else:
        if not conf.get("grid"):
            raise UsageError(f"density {kind} needs --grid")
        grid = parse_grid(conf["grid"])
        if kind == "real_eig":
            curves.append(cv.real_eig_curve(tau, n, grid, conf["variable"], bool(conf["stitch"])))
        elif kind == "complex_proj":
            curves.append(cv.complex_proj_curve(tau, n, grid, conf["variable"], bool(conf["stitch"])))
        else:
            curves.append(cv.xmax_tail_curve(tau, n, grid))
    root = Path(conf["out_dir"]) / "density"
    for c in curves:
        print(_write_curve(root, c, conf["format"]))
    _echo_config(root, conf)
    return EXIT_OK


def _mc_manifest(root: Path, conf: dict, summary: dict) -> None:
    doc = {"command": "mc", "config": _jsonable(conf), "summary": summary, "versions": versions()}
    atomic_write(root / "manifest.json", json.dumps(doc, indent=2, sort_keys=True) + "\n")


def cmd_mc(conf: dict) -> int:
    from .ensemble import estimators as est
    from .ensemble.frames import write_frame
    from .ensemble.sampling import EllipticSamplerConfig, sample_elliptic
    from .ensemble.spectra import spectrum

    sub, n, tau, trials = conf["sub"], int(conf["n"]), float(conf["tau"]), int(conf["trials"])
    seed, workers = int(conf["seed"]), int(conf["workers"])
    if trials < 1:
        raise DomainError("trials must be >= 1")
    root = Path(conf["out_dir"]) / "mc" / sub / str(seed)
    status = EXIT_OK
    if sub in ("densities", "mu_h"):
        d = est.empirical_densities(ModelParams(1.0, tau, n), trials, seed, workers, alpha=float(conf["alpha"]))
        c = d.centers
        if sub == "densities":
            for name, y in (("real", d.real), ("projection", d.projection),
                            ("complex_projection", d.complex_projection)):
                _write_curve(root, Curve(f"{name}_density", "x", c, "density", y, "monte_carlo"), conf["format"])
            _write_curve(root, Curve("semicircle", "x", c, "density", an.p_complex_bulk(c, n, tau), "analytic"),
                         conf["format"])
        rows = [[i, float(xm), float(mh)] for i, (xm, mh) in enumerate(zip(d.x_max, d.mu_H))]
        _write_table(root / "samples.csv", ["trial", "x_max", "mu_H"], rows, conf["format"])
        summary = {"mean_n_real": d.mean_n_real, "bulk_real_density": d.bulk_real_density,
                   "mean_mu_H": float(np.mean(d.mu_H)), "x_alpha": d.x_alpha,
                   "median_x_max": float(np.median(d.x_max))}
        if conf.get("frames"):
            with open(_mkparent(root / "frames" / "eigenvalues.bin"), "wb") as fh:
                cfg = EllipticSamplerConfig(n, tau, seed)
                for t in range(trials):
                    write_frame(fh, t, spectrum(sample_elliptic(cfg, t)).eigenvalues)
    elif sub == "xmax":
        xs = est.sample_xmax(n, tau, trials, seed, workers)
        _write_table(root / "xmax_samples.csv", ["trial", "x_max"], [[i, float(v)] for i, v in enumerate(xs)],
                     conf["format"])
        grid = parse_grid(conf["x_grid"]) if conf.get("x_grid") else np.linspace(1.0 + tau, 1.0 + tau + 0.5, 26)
        tail = [[float(x), est.xmax_exceedance(xs, x)[0]] for x in grid]
        _write_table(root / "xmax_tail.csv", ["x", "P(x_max>x)"], tail, conf["format"])
        summary = {"median_x_max": float(np.median(xs)), "trials": trials}
    else:
        e = est.estimate_N_counts(ModelParams(float(conf["m"]), tau, n), conf["mode"], trials, seed, workers,
                                  alpha=conf.get("alpha") if conf["mode"] == "alpha_stable" else None)
        summary = {"ln_estimate": e.log_value, "std_error": e.std_error, "reliable": e.reliable,
                   "accepted_min": int(e.accepted.min())}
        print(fmt(e.log_value))
        if not e.reliable:
            print(f"warning: unreliable estimate (min accepted {int(e.accepted.min())})", file=sys.stderr)
            status = EXIT_FAIL
    _mc_manifest(root, conf, summary)
    print(root)
    return status


def _mkparent(p: Path) -> Path:
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def cmd_validate(conf: dict) -> int:
    catalog = {s.id: s for s in scenario_catalog()}
    ids = conf["ids"]
    if ids == ["all"]:
        ids = list(catalog)
    unknown = [i for i in ids if i not in catalog]
    if unknown:
        print(f"unknown scenario(s): {', '.join(unknown)}; available: {', '.join(catalog)}", file=sys.stderr)
        return EXIT_USAGE
    cache: dict = {}
    ok = True
    print(f"{'scenario':38s} {'check':34s} {'verdict':7s} {'predicted':>14s} {'measured':>14s}")
    for sid in ids:
        t0 = time.perf_counter()
        m = run_scenario(catalog[sid], conf["seed"], conf["out_dir"], conf["workers"], cache,
                         extra={"config": _jsonable(conf)})
        for c in m.checks:
            print(f"{sid:38s} {c.id:34s} {'pass' if c.passed else 'FAIL':7s} "
                  f"{c.predicted:14.6g} {c.measured:14.6g}" + ("" if c.passed else f"  [{c.reason}]"))
        print(f"{sid:38s} {'=> ' + ('pass' if m.verdict else 'FAIL'):34s} ({time.perf_counter() - t0:.1f} s)")
        ok &= m.verdict
    return EXIT_OK if ok else EXIT_FAIL


def cmd_figures(conf: dict) -> int:
    for p in emit_figures(None, conf["out_dir"], bool(conf["svg"])):
        print(p)
    return EXIT_OK


COMMANDS = {
    "eval": cmd_eval,
    "phase-diagram": cmd_phase_diagram,
    "density": cmd_density,
    "mc": cmd_mc,
    "validate": cmd_validate,
    "figures": cmd_figures,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        conf = resolve_config(args)
        return COMMANDS[args.command](conf)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BranchPointError as exc:
        print(f"branch point at {exc.branch_point}: {exc}", file=sys.stderr)
        return EXIT_BRANCH
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (TrialFailedError, DecompositionError, OSError) as exc:
        print(f"infrastructure failure: {exc}", file=sys.stderr)
        return EXIT_INFRA


if __name__ == "__main__":
    sys.exit(main())
