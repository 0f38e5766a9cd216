"""
Reproducible experiment runs
============================

Every trial seed is derived from the master seed and the trial index, so a
rerun gives the same JSON lines whatever the thread count.
"""

import tempfile
from pathlib import Path

from vmlab.harness import ExperimentConfig, run_experiment, theorem13_parameters

cfg = ExperimentConfig("claim-m-verify", trials=20, n=18, p=0.3, master_seed=42)
with tempfile.TemporaryDirectory() as tmp:
    a = run_experiment(cfg, out=Path(tmp) / "a")
    cfg.threads = 2
    b = run_experiment(cfg, out=Path(tmp) / "b")
    same = (Path(tmp) / "a/claim-m-verify.jsonl").read_bytes() == (Path(tmp) / "b/claim-m-verify.jsonl").read_bytes()
print(a.summary)
print("identical reruns:", same)

for n in (10**6, 10**8, 10**10):
    t = theorem13_parameters(n, 0.5)
    print(f"n={n:.0e}: k={t.k} s={t.s} log2 failure={t.log2_failure_bound:.0f} hypothesis ok={not t.violation}")
