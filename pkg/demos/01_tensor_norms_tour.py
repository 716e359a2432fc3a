# A tour of the four tensor norms on small products of normed spaces.
#
# Every norm in the package reports a bracket [lower, upper] in which each
# finite end is certified: lower ends come from explicit feasible dual
# objects, upper ends from explicit decompositions.  This script computes
# all four norms on three tensors whose values are known in closed form.

import numpy as np

from tnl import (
    INF,
    NormedSpace,
    Tensor,
    TensorSpace,
    evaluator_for,
)


def show(label, est):
    upper = "inf" if est.upper == INF else f"{est.upper:.12f}"
    print(f"  {label:<10} [{est.lower:.12f}, {upper}]")


# ---------------------------------------------------------------------
# 1. The identity matrix on ell_2(2) (x) ell_2(2).
#
# Injective norm = largest singular value = 1; projective norm = nuclear
# norm = 2; sigma_2 sits in between; beta_2 reaches sqrt(2).
# ---------------------------------------------------------------------
l2 = NormedSpace(2, 2.0)
identity = Tensor(TensorSpace((l2, l2)), np.eye(2))

print("identity on ell_2(2) (x) ell_2(2):")
for kind in ("eps", "pi", "sigma_p", "beta_p"):
    show(kind, evaluator_for(kind, p=2.0)(identity))

# ---------------------------------------------------------------------
# 2. The same matrix on ell_1(2) (x) ell_1(2).
#
# Both dual balls are polyhedral, so the injective norm is an exact
# enumeration: sup over sign vectors of |y^T I x| = 2, and the bracket
# collapses to a point.  The projective norm is the entrywise ell_1
# norm, also 2 here.
# ---------------------------------------------------------------------
l1 = NormedSpace(2, 1.0)
identity_l1 = Tensor(TensorSpace((l1, l1)), np.eye(2))

print("\nidentity on ell_1(2) (x) ell_1(2):")
for kind in ("eps", "pi"):
    show(kind, evaluator_for(kind)(identity_l1))

# ---------------------------------------------------------------------
# 3. An elementary tensor x (x) y (x) w on mixed factors.
#
# Every crossnorm agrees on elementary tensors: the value is the product
# of the factor norms, whatever the exponents are.
# ---------------------------------------------------------------------
factors = (NormedSpace(3, 1.5), NormedSpace(2, INF), NormedSpace(2, 1.0))
rng = np.random.default_rng(7)
vecs = [rng.standard_normal(f.dim) for f in factors]
coeffs = np.multiply.outer(np.multiply.outer(vecs[0], vecs[1]), vecs[2])
z = Tensor(TensorSpace(factors), coeffs)
product = float(np.prod([f.norm(np.asarray(v)) for f, v in zip(factors, vecs)]))

print(f"\nelementary tensor, product of factor norms = {product:.12f}:")
for kind in ("eps", "pi", "sigma_p", "beta_p"):
    show(kind, evaluator_for(kind, p=1.5)(z))
