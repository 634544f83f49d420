"""Turn the benchmark CSVs into a convergence figure.

Requires the rszero-plots package and the CSVs produced by
demos/localization_benchmark.py.

Run with: python3 demos/make_figure.py
"""

import subprocess
import sys
from pathlib import Path

OUT = Path("demo_results")
curves = [(OUT / name / "aggregate.csv", name) for name in ("gf", "rs_ngf", "rs_nvrgf")]
missing = [str(p) for p, _ in curves if not p.exists()]
if missing:
    sys.exit(f"run demos/localization_benchmark.py first; missing: {missing}")

cmd = ["rszero-plot", "--output", str(OUT / "benchmark.png"), "--title", "localization benchmark"]
for path, label in curves:
    cmd += ["--input", f"{path}:{label}"]
subprocess.run(cmd, check=True)
print(f"figure written to {OUT / 'benchmark.png'}")
