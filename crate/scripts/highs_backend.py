#!/usr/bin/env python3
"""External LP backend for `h2match --solver external` built on HiGHS.

Usage: highs_backend.py <model.mps> <solution.txt>

Writes the plain-text solution format read by the h2match external backend.
HiGHS reports row duals for minimization with the same sign convention as the
embedded solver (d objective / d rhs), so they are written unchanged.
"""
import sys

import highspy


def main() -> int:
    if len(sys.argv) != 3:
        print(__doc__, file=sys.stderr)
        return 2
    model, out = sys.argv[1], sys.argv[2]
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("solver", "simplex")
    if h.readModel(model) != highspy.HighsStatus.kOk:
        print(f"cannot read {model}", file=sys.stderr)
        return 1
    h.run()
    status = h.getModelStatus()
    names = {
        highspy.HighsModelStatus.kOptimal: "optimal",
        highspy.HighsModelStatus.kInfeasible: "infeasible",
        highspy.HighsModelStatus.kUnbounded: "unbounded",
        highspy.HighsModelStatus.kUnboundedOrInfeasible: "infeasible",
        highspy.HighsModelStatus.kIterationLimit: "iteration_limit",
    }
    with open(out, "w") as f:
        f.write(f"status {names.get(status, 'infeasible')}\n")
        if status != highspy.HighsModelStatus.kOptimal:
            return 0
        lp = h.getLp()
        sol = h.getSolution()
        f.write(f"objective {h.getInfo().objective_function_value!r}\n")
        for name, v in zip(lp.col_names_, sol.col_value):
            f.write(f"primal {name} {v!r}\n")
        for name, y in zip(lp.row_names_, sol.row_dual):
            f.write(f"dual {name} {y!r}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
