# %% [markdown]
# # Validation scenarios and figure data
#
# Scenarios are plain data: each check names a prediction source and a
# measurement source. Running one writes a manifest that can be replayed.

# %%
import tempfile
from pathlib import Path

from eqatlas.experiments import emit_figures, get_scenario, rerun_manifest, run_scenario, scenario_catalog

print([s.id for s in scenario_catalog()])
out = Path(tempfile.mkdtemp())
m = run_scenario(get_scenario("analytic-invariants"), base_seed=42, out_dir=out)
for c in m.checks:
    print(c.id, c.passed, c.measured)

# %%
again = rerun_manifest(out / "analytic-invariants" / "42" / "manifest.json")
print(all(a.measured == b.measured for a, b in zip(m.checks, again.checks)))

# %% [markdown]
# Figure data as CSV (add svg=True for static renderings).

# %%
for p in emit_figures(None, out)[:5]:
    print(p.relative_to(out))
