"""Verify a weighted Hardy inequality on a test function, then estimate its best constant."""

from heisenberg_hardy import QuadratureSpec, corpus_function, sharpness_schedule
from heisenberg_hardy.inequalities import evaluate_case, hardy_interpolation_case

case = hardy_interpolation_case(0.0, 1.0, 2.0)
print(f"{case.id}: constant {case.constant}")

# the inequality holds on a smooth bump, with room to spare
rep = evaluate_case(case, corpus_function("radial-bump"), QuadratureSpec(target_rel_tol=1e-6))
print(f"lhs {rep.lhs:.6g}  rhs {rep.rhs:.6g}  margin {rep.margin:.4g}  passed {rep.passed}")

# truncated extremal profiles push the Rayleigh ratio down towards the constant
for step in sharpness_schedule(case, widths=(20.0, 40.0, 80.0)):
    print(f"log-width {step.log_width:5.1f}  ratio {step.fun:.6f}  excess {step.excess:.3%}")
