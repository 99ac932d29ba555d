"""Write a few instances to disk and benchmark several methods into a CSV."""

import tempfile
from pathlib import Path

import mfpc
from mfpc.bench import read_csv
from mfpc.generator import build_random
from mfpc.instance import write_instance

workdir = Path(tempfile.mkdtemp(prefix="mfpc-bench-"))
files = []
write_instance(mfpc.figure1(), workdir / "figure1.txt")
files.append(workdir / "figure1.txt")
for seed in range(3):
    inst, _ = build_random(n=9, m=24, w=8, capacity_range=(1, 9), seed=seed)
    path = workdir / f"small_{seed}.txt"
    write_instance(inst, path)
    files.append(path)

out = workdir / "results.csv"
mfpc.run_bench(files, ["bnb", "brute", "greedy", "maxflow-relax"], time_limit=10, out=out,
               solutions_dir=workdir / "solutions")
print(out.read_text())

rows = read_csv(out)
exact = {r["instance_id"]: int(r["lower"]) for r in rows if r["method"] == "brute"}
for r in rows:
    if r["method"] == "greedy":
        print(f"{r['instance_id']}: greedy {r['lower']} vs optimum {exact[r['instance_id']]}, "
              f"gap {mfpc.gap_lb(max(exact[r['instance_id']], 1), int(r['lower'])):.1f}%")
print("\nsolutions in", workdir / "solutions")
