"""The seven-node example, end to end.

Run with ``python demos/01_figure1_walkthrough.py``.
"""

import mfpc
from mfpc.maxflow import cut_capacity

inst = mfpc.figure1()
names = "sabcdet"
print(inst)
for k, (u, v, cap) in enumerate(inst.arcs):
    print(f"  arc {k:2d}: {names[u]}->{names[v]}  cap {cap}")

# Ignoring conflicts, the two source arcs (3 + 6) are the bottleneck.
relaxed = mfpc.max_flow(inst)
cut = mfpc.min_cut(inst)
print("\nmax flow without conflicts:", relaxed.total)
print("min cut:", [f"{names[inst.arcs[a].tail]}->{names[inst.arcs[a].head]}" for a in sorted(cut)],
      "capacity", cut_capacity(inst, cut))

# That flow breaks several conflict pairs.
verdict = mfpc.check_feasible(inst, relaxed)
print("\nrelaxed flow feasible?", verdict.ok)
for v in verdict.violations:
    print("  ", v.detail)

# Three ways to the conflict-feasible optimum.
brute = mfpc.solve_bruteforce(inst)
bnb = mfpc.solve_bnb(inst, time_limit=5)
greedy = mfpc.solve_greedy(inst, seed=0, restarts=1)
print("\nbrute force:", brute.lower, f"({brute.nodes_explored} conflict-free subsets)")
print("branch-and-bound:", bnb.lower, "upper", bnb.upper, bnb.status, f"{bnb.nodes_explored} nodes")
print("greedy, one restart:", greedy.total)

# The solution shipped with the package.
sol = mfpc.figure1_solution()
print("\nshipped solution total", sol.total, "feasible:", mfpc.check_feasible(inst, sol).ok)
for a in sol.support:
    u, v, cap = inst.arcs[a]
    print(f"  {names[u]}->{names[v]}: {sol.flow[a]}/{cap}")
