"""Desk-scale benchmark: three methods on the planar localization objective.

Generates an instance, tunes a constant stepsize per method on a small
budget, runs 5 seeds each and writes per-seed and aggregate CSVs under
demo_results/.

Run with: python3 demos/localization_benchmark.py
"""

import tempfile
from pathlib import Path

from rszero import problems
from rszero.harness import config_from_dict, run, tune

OUT = Path("demo_results")
BUDGET = 10_000

inst = problems.generate_instance(r_kind="pow5", seed=0)
inst_path = Path(tempfile.mkdtemp()) / "instance.json"
problems.save_instance(inst, inst_path)
print(f"instance: {inst.n} points, {inst.n_pairs} distance measurements")

base = {
    "problem": {"instance": str(inst_path)},
    "smoothing": {"delta": 1e-4},
    "seeds": [0, 1, 2, 3, 4],
    "oracle_budget": BUDGET,
    "measure_points": 0,
    "x0": "random",
}

# A reduced stepsize grid keeps this demo quick; the full 13-point dyadic
# grid lives in rszero.harness.stepsize_grid().
grid = [2.0 ** k for k in range(-9, 2, 2)]

for name, algorithm in [
    ("gf", {"name": "gf", "T": 1_000_000, "stepsize": 1.0}),
    ("rs_ngf", {"name": "rs_ngf", "Delta": 1.0, "T": 1_000_000, "stepsize": 1.0, "batch": 4}),
    (
        "rs_nvrgf",
        {
            "name": "rs_nvrgf",
            "Delta": 1.0,
            "T": 1_000_000,
            "stepsize": 1.0,
            "q": 10,
            "b": 4,
            "big_batch": 40,
        },
    ),
]:
    config = config_from_dict(dict(base, algorithm=algorithm))
    best, report = tune(config, grid=grid)
    print(
        f"{name}: tuned stepsize {best.stepsize:g}, "
        f"median final objective {report['best']['median_final']:.3e}"
    )
    manifest = run(best, output_dir=OUT / name)
    print(f"  wrote {manifest['output_dir']} ({len(manifest['files'])} files)")

print("done; aggregate curves are in demo_results/*/aggregate.csv")
