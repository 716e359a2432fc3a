# Appending a scalar factor: which norms stay put, and which may move?
#
# For the injective, projective, and sigma_p norms, the norm of
# z (x) 1 on E_1 (x) ... (x) E_n (x) K equals the norm of z -- the
# package reproduces this exactly because decompositions and dual
# certificates transfer across the extra slot.  The grouped-family norm
# beta_p is the open case: its value on the enlarged product may differ,
# so the evaluators never silently collapse the slot, and a dedicated
# witness search hunts for tensors with a visible gap.

import numpy as np

from tnl import (
    NormedSpace,
    TensorSpace,
    evaluator_for,
    random_tensor,
    unflatten_scalar,
    witness_search_nonsmooth,
)

space = TensorSpace((NormedSpace(2, 2.0), NormedSpace(2, 1.0)))
z = random_tensor(space, seed=42)
lifted = unflatten_scalar(z)  # the same coefficients, one more (scalar) factor

print("norm of z vs norm of z (x) 1:")
for kind in ("eps", "pi", "sigma_p", "beta_p"):
    beta = evaluator_for(kind, p=2.0)
    a = beta.value(beta(z))
    b = beta.value(beta(lifted))
    rel = abs(b - a) / max(abs(a), 1e-12)
    print(f"  {kind:<8} base={a:.12f} lifted={b:.12f} rel_gap={rel:.3e}")

# ---------------------------------------------------------------------
# The witness search formalizes the hunt.  For eps/pi/sigma_p it is a
# negative control: the best gap it can find must sit below the declared
# smoothness tolerance.  For beta_p it is an experiment: the best
# candidate tensor is recorded in the report whether or not a gap was
# found -- a null result is a valid outcome.
# ---------------------------------------------------------------------
print("\nwitness search (budget 30):")
for kind in ("pi", "eps", "sigma_p", "beta_p"):
    report = witness_search_nonsmooth(evaluator_for(kind, p=2.0), (2, 2),
                                      budget=30, seed=0)
    verdict = "pass" if report.passed else "fail"
    print(f"  {kind:<8} best_gap={report.max_deviation:.3e} ({verdict})")
    if report.notes:
        print(f"           note: {report.notes[0]}")
    if kind == "beta_p" and report.cases:
        case = report.cases[0]
        shape = tuple(case["shape"])
        print(f"           best candidate recorded: shape={shape}, "
              f"base={case['base_value']:.6f}, lifted={case['lifted_value']:.6f}")
