"""Build the MILP, export it as LP text, and check it against an external solver.

Needs only numpy and scipy (``scipy.optimize.milp`` uses HiGHS).
"""

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

import mfpc
from mfpc.model import LE, solve_model_bruteforce

inst = mfpc.figure1()
model = mfpc.build_model(inst)
print(f"{model.variable_count} variables, {model.constraint_count} rows")
for prefix in ("cons", "link", "conf"):
    print(f"  {prefix}: {len(model.rows(prefix))} rows")

text = mfpc.export_lp(model)
print("\nfirst lines of the LP document:")
print("\n".join(text.splitlines()[:12]))

# Hand the same rows to HiGHS.
c = np.zeros(model.variable_count)
c[model.index("z")] = -1
senses = np.array(model.senses)
res = milp(
    c,
    constraints=LinearConstraint(model.matrix.toarray(), np.where(senses == LE, -np.inf, model.rhs), model.rhs),
    integrality=np.ones(model.variable_count),
    bounds=Bounds([v.lower for v in model.variables], [v.upper for v in model.variables]),
)
print("\nHiGHS optimum:", round(-res.fun))
print("enumeration + LP optimum:", solve_model_bruteforce(model)[0])

# A flow is model-feasible with x = (flow > 0) exactly when the checker accepts it.
sol = mfpc.figure1_solution()
print("model accepts shipped solution:", mfpc.validate_against_model(model, sol, sol.activation(), sol.total).ok)
zero_x = mfpc.ActivationPattern((False,) * inst.arc_count)
bad = mfpc.validate_against_model(model, sol, zero_x, sol.total)
print("with x forced to zero:", [v.where[0] for v in bad.violations])
