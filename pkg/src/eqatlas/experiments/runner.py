"""Execute scenarios and persist their manifests and curves."""

from __future__ import annotations

import datetime as _dt
import hashlib
import json
import math
import os
import platform
import tempfile
from pathlib import Path

import numpy as np
import scipy

from .. import __version__
from ..ensemble.frames import write_frame
from ..ensemble.sampling import EllipticSamplerConfig, sample_elliptic
from ..ensemble.spectra import spectrum
from .model import CheckResult, RunManifest, Scenario
from .sources import RunContext, SourceFailure, evaluate


def versions() -> dict:
    return {
        "eqatlas": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "python": platform.python_version(),
    }


def atomic_write(path: Path, data: str | bytes) -> None:
    """Write to a temporary sibling and rename it over ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, mode, **({} if mode == "wb" else {"newline": "", "encoding": "utf-8"})) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _run_check(check, ctx: RunContext) -> CheckResult:
    def result(pred, meas, ok, reason):
        return CheckResult(check.id, check.paper_anchor, pred, meas, check.tolerance, check.comparator, ok, reason)

    if not check.tolerance_ok:
        return result(math.nan, math.nan, False, "tolerance unsatisfiable")
    pred = evaluate(check.predicted.name, ctx, check.predicted.args)
    try:
        meas = evaluate(check.measured.name, ctx, check.measured.args)
    except SourceFailure as exc:
        return result(pred, float(exc.value), False, exc.reason)
    ok = check.compare(pred, meas)
    if not math.isfinite(meas):
        return result(pred, meas, False, "non-finite-measurement")
    return result(pred, meas, ok, "ok" if ok else "out-of-tolerance")


def run_scenario(
    s: Scenario,
    base_seed: int = 0,
    out_dir: str | Path | None = "runs",
    workers: int = 1,
    cache: dict | None = None,
    extra: dict | None = None,
) -> RunManifest:
    """Evaluate every check of ``s`` and persist the result.

    Output goes to ``<out_dir>/<scenario id>/<seed>/`` as ``manifest.json``
    plus ``curves/*.csv`` (and ``frames/*.bin`` when the scenario opts in).
    Pass the same ``cache`` dict to several calls to share Monte Carlo runs
    between scenarios; with ``out_dir=None`` nothing is written.
    """
    ctx = RunContext(int(base_seed), int(workers), {} if cache is None else cache)
    results = [_run_check(c, ctx) for c in s.checks]
    manifest = RunManifest(
        scenario=s.id,
        seed=int(base_seed),
        params=dict(sorted(s.params.items())),
        checks=results,
        verdict=all(r.passed for r in results),
        versions=versions(),
        timestamp=_dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        definition=s.to_dict(),
        execution={"workers": int(workers), **(extra or {})},
    )
    if out_dir is not None:
        root = Path(out_dir) / s.id / str(int(base_seed))
        digests = {}
        for name in sorted(ctx.curves):
            text = ctx.curves[name].to_csv()
            atomic_write(root / "curves" / f"{name}.csv", text)
            digests[f"curves/{name}.csv"] = hashlib.sha256(text.encode()).hexdigest()
        if s.persist_frames:
            for n, tau, trials, seed in sorted(set(ctx.frame_requests)):
                rel = f"frames/n{n}_tau{tau}_seed{seed}.bin"
                data = _frames_bytes(n, tau, trials, seed)
                atomic_write(root / rel, data)
                digests[rel] = hashlib.sha256(data).hexdigest()
        manifest.digests = digests
        atomic_write(root / "manifest.json", manifest_json(manifest))
    return manifest


def _frames_bytes(n: int, tau: float, trials: int, seed: int) -> bytes:
    import io

    buf = io.BytesIO()
    cfg = EllipticSamplerConfig(n, tau, seed)
    for t in range(trials):
        write_frame(buf, t, spectrum(sample_elliptic(cfg, t)).eigenvalues)
    return buf.getvalue()


def manifest_json(m: RunManifest) -> str:
    return json.dumps(m.to_dict(), indent=2, sort_keys=True) + "\n"


def load_manifest(path: str | Path) -> RunManifest:
    return RunManifest.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def rerun_manifest(path: str | Path, out_dir: str | Path | None = None, workers: int | None = None) -> RunManifest:
    """Re-run a scenario from nothing but its manifest."""
    m = load_manifest(path)
    s = Scenario.from_dict(m.definition)
    w = int(m.execution.get("workers", 1)) if workers is None else workers
    return run_scenario(s, m.seed, out_dir, w)


__all__ = ["run_scenario", "rerun_manifest", "load_manifest", "manifest_json", "atomic_write", "versions"]
