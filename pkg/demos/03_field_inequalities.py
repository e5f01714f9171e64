"""Hardy inequalities built from vector fields: optimal scaling, half-space, ball, logarithmic."""

from heisenberg_hardy import QuadratureSpec, example1_optimize_alpha, verify_halfspace_hardy
from heisenberg_hardy.corpus import ball_corpus, halfspace_corpus
from heisenberg_hardy.vector_fields import HalfSpaceSpec, verify_ball_hardy, verify_log_hardy

# the best multiple of grad d / d reproduces the Hardy constant ((Q-p)/p)^p
for p in (1.5, 2.0, 3.0):
    res = example1_optimize_alpha(p, 4)
    print(f"p={p}: alpha* = {res.alpha:.8f}  F(alpha*) = {res.value:.10f}")

spec = QuadratureSpec(target_rel_tol=1e-6)
half = HalfSpaceSpec((1.0, 0.0, 0.0))
for f in halfspace_corpus()[:2]:
    rep = verify_halfspace_hardy(half, 2.0, f, spec)
    print(f"half-space {f.label}: margin {rep.margin:.4g}")
for f in ball_corpus()[:2]:
    print(f"ball {f.label}: margin {verify_ball_hardy(3.0, 2.0, f, spec).margin:.4g}")
    print(f"log  {f.label}: margin {verify_log_hardy(4.0, f, spec).margin:.4g}")
