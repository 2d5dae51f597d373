"""Figure data as CSV, with optional static SVG renderings of those CSVs."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .catalog import FIG_NU_PARAMS
from .curves import (
    alpha_heat_map,
    grid_csv,
    index_density_curve,
    m_alpha_curve,
    sigma_eq_profile_curve,
    tau0_alpha_curve,
)
from .model import Curve, RunManifest
from .runner import atomic_write

NU_N = 625
NU_ALPHAS = np.linspace(0.0, 1.0, 2001)
TAU0_ALPHAS = (0.0, 0.1, 0.01, 0.001, 0.0001)
HEAT_POINTS = 101


def figure_curves() -> list[Curve]:
    curves = [sigma_eq_profile_curve(0.3, 0.5), m_alpha_curve()]
    curves += [index_density_curve(m, tau, NU_N, NU_ALPHAS) for m, tau in FIG_NU_PARAMS]
    curves += [tau0_alpha_curve(a) for a in TAU0_ALPHAS]
    return curves


def heat_map_rows(points: int = HEAT_POINTS):
    # open grid: m = 1 and tau = 0 are excluded where the formulas degenerate
    ms = np.linspace(0.0, 1.0, points + 1)[1:]
    taus = np.linspace(0.0, 1.0, points + 1)[1:-1]
    return alpha_heat_map(ms, taus)


def emit_figures(manifest: RunManifest | None, out_dir: str | Path = "runs", svg: bool = False) -> list[Path]:
    """Write the figure data next to ``manifest`` (or under ``out_dir/figures``).

    CSVs go to ``curves/`` and, with ``svg=True``, renderings of exactly
    those CSVs to ``figures/``. Curves recorded by the manifest's own run
    are rendered too. Returns the written paths.
    """
    root = Path(out_dir)
    root = root / manifest.scenario / str(manifest.seed) if manifest is not None else root / "figures"
    written: list[Path] = []
    for c in figure_curves():
        p = root / "curves" / f"{c.name}.csv"
        atomic_write(p, c.to_csv())
        written.append(p)
    rows = heat_map_rows()
    atomic_write(root / "curves" / "alpha_heat_map.csv", grid_csv(rows, ["m", "tau", "alpha"]))
    log_rows = [(m, t, math.log(a) if a > 0 else -math.inf) for m, t, a in rows]
    atomic_write(root / "curves" / "log_alpha_heat_map.csv", grid_csv(log_rows, ["m", "tau", "ln_alpha"]))
    written += [root / "curves" / "alpha_heat_map.csv", root / "curves" / "log_alpha_heat_map.csv"]
    if svg:
        written += render_svgs(root)
    return written


def render_svgs(root: Path) -> list[Path]:
    """Render every CSV under ``root/curves`` to ``root/figures``."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    # fixed metadata keeps repeated renderings byte-identical
    matplotlib.rcParams["svg.hashsalt"] = "eqatlas"
    out = []
    for csv_path in sorted((root / "curves").glob("*.csv")):
        text = csv_path.read_text(encoding="utf-8")
        head = text.splitlines()[0].split(",")
        fig, ax = plt.subplots(figsize=(5, 3.5))
        if head[:2] in (["m", "tau"],):
            data = np.array([[float(v) for v in ln.split(",")] for ln in text.splitlines()[1:]])
            ms, taus = np.unique(data[:, 0]), np.unique(data[:, 1])
            z = data[:, 2].reshape(taus.size, ms.size)
            im = ax.pcolormesh(ms, taus, np.where(np.isfinite(z), z, np.nan), shading="auto")
            fig.colorbar(im, ax=ax, label=head[2])
        else:
            c = Curve.from_csv(csv_path.stem, text)
            ax.plot(c.x, c.y, lw=1.2)
            ax.set_ylabel(c.y_label)
        ax.set_xlabel(head[0])
        ax.set_title(csv_path.stem, fontsize=9)
        fig.tight_layout()
        p = root / "figures" / f"{csv_path.stem}.svg"
        p.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(p, format="svg", metadata={"Date": None})
        plt.close(fig)
        out.append(p)
    return out


__all__ = ["emit_figures", "figure_curves", "heat_map_rows", "render_svgs"]
