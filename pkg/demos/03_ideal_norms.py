# Multilinear maps and their ideal norms.
#
# A multilinear map A : E_1 x ... x E_n -> F carries several norms:
#
#   * sup norm            -- sup of ||A(x_1, ..., x_n)|| over the unit balls,
#   * linearization norm  -- operator norm of the induced linear map on the
#                            beta-normed tensor product,
#   * sm(p, q) constant   -- strongly multiple (p, q)-summing constant,
#   * si_p constant       -- semi-integral constant (scalar maps).
#
# This script shows the identities connecting them on small examples.

import numpy as np

from tnl import (
    INF,
    LinConfig,
    MultilinearMap,
    NormedSpace,
    SigmaDualConfig,
    SmConfig,
    evaluator_for,
    linearization_norm,
    one_adjunction,
    property_B_check,
    random_map,
    scalar_space,
    si_p_norm,
    sm_pq_norm,
    sup_norm,
    vector_scalar_bridge,
)

# ---------------------------------------------------------------------
# 1. The sup norm of a map equals the projective linearization norm of
#    its associated scalar form.  For a map into a dual space the form
#    gains one slot (the predual ball); the coefficients are reused
#    bit-for-bit.
# ---------------------------------------------------------------------
domain = (NormedSpace(2, 1.0), NormedSpace(3, INF))
codomain = NormedSpace(2, 1.0)  # read as the dual of ell_inf(2)
A = random_map(domain, codomain, seed=11)

sup = sup_norm(A)
form = vector_scalar_bridge(A)
lin = linearization_norm(form, evaluator_for("pi"), LinConfig(seed=0))
print("sup norm vs projective linearization norm of the bridged form:")
print(f"  sup = {sup.lower:.12f}")
print(f"  lin = {lin.lower:.12f}")

# ---------------------------------------------------------------------
# 2. Trailing scalar slots cost nothing: dropping one (plugging in 1)
#    preserves the sup norm exactly, and property_B_check verifies the
#    same statement for the linearization norm on sampled maps.
# ---------------------------------------------------------------------
B = random_map(domain + (scalar_space(),), scalar_space(), seed=12)
print("\ntrailing-slot adjunction:")
print(f"  sup with slot    = {sup_norm(B).lower:.12f}")
print(f"  sup after drop   = {sup_norm(one_adjunction(B)).lower:.12f}")

report = property_B_check(evaluator_for("pi"), (2, 2), samples=4,
                          cfg=LinConfig(seed=0))
print(f"  linearization-norm check on {report['samples']} sampled maps: "
      f"max rel deviation = {report['max_rel_deviation']:.3e}")

# ---------------------------------------------------------------------
# 3. The strongly multiple (p, q)-summing constant dominates the sup
#    norm (single-member families already witness it).  The Euclidean
#    identity map is the classical example where the constant is
#    strictly larger: sm(2, 2) of id on ell_2(2) is sqrt(2).
# ---------------------------------------------------------------------
l2 = NormedSpace(2, 2.0)
ident = MultilinearMap((l2,), l2, np.eye(2))
est = sm_pq_norm(ident, 2.0, 2.0, cfg=SmConfig(seed=0))
print("\nstrongly multiple constant of the Euclidean identity:")
print(f"  sup norm       = {sup_norm(ident).lower:.12f}")
print(f"  sm(2,2) lower  = {est.lower:.12f}   (sqrt(2) = {np.sqrt(2):.12f})")

# ---------------------------------------------------------------------
# 4. The semi-integral constant of a scalar map is the best C in
#
#    || (A(x_{1j}, ..., x_{nj}))_j ||_p <= C * sup_phi || (prod_l phi_l(x_{lj}))_j ||_p
#
# over all finite families.  For a product of unit dual functionals the
# constant is exactly 1.
# ---------------------------------------------------------------------
sp1, sp2 = NormedSpace(2, 1.0), NormedSpace(2, INF)
coeffs = np.outer([1.0, 0.0], [0.5, 0.5])[..., None]
unit_form = MultilinearMap((sp1, sp2), scalar_space(), coeffs)
est = si_p_norm(unit_form, 2.0, SigmaDualConfig(seed=0))
print("\nsemi-integral constant of a unit product form:")
print(f"  si_2 = {est.lower:.12f}")
