# The verification suites: numerical axiom checks as reusable reports.
#
# Each suite samples configurations, measures the worst deviation from
# the property it checks, and wraps the outcome in a Report that
# serializes identically across reruns with the same seed.
#
#   crossnorm  -- elementary tensors get the product of factor norms,
#                 and product functionals never exceed the norm;
#   metric     -- operators contract the norm by at most the product of
#                 their operator norms;
#   smoothness -- appending a scalar factor does not move the norm;
#   bidual     -- the norm agrees with the supremum over certified-unit
#                 dual forms.

from tnl import (
    LinConfig,
    NormedSpace,
    TensorSpace,
    check_bidual_consistency,
    check_crossnorm,
    check_metric_mapping,
    check_smoothness,
    evaluator_for,
    report_csv,
    report_json,
)

space = TensorSpace((NormedSpace(2, 2.0), NormedSpace(2, 1.0)))

print(f"{'suite':<12} {'norm':<8} {'max deviation':<15} verdict")
for kind in ("eps", "pi", "sigma_p"):
    beta = evaluator_for(kind, p=1.5)
    reports = [
        check_crossnorm(beta, space, samples=6, seed=0),
        check_metric_mapping(beta, space, operator_samples=6, seed=0),
        check_smoothness(beta, space, samples=6, seed=0),
        check_bidual_consistency(beta, samples=4, cfg=LinConfig(seed=0)),
    ]
    for report in reports:
        verdict = "pass" if report.passed else "FAIL"
        print(f"{report.suite:<12} {kind:<8} {report.max_deviation:<15.3e} {verdict}")

# ---------------------------------------------------------------------
# Reports serialize to canonical JSON (sorted keys, infinities encoded
# as strings, no timestamps), so a rerun with the same seed produces the
# same bytes -- usable as a regression artifact.
# ---------------------------------------------------------------------
a = report_json(check_crossnorm(evaluator_for("eps"), space, samples=3, seed=7))
b = report_json(check_crossnorm(evaluator_for("eps"), space, samples=3, seed=7))
print(f"\nrerun produces identical report bytes: {a == b}")

print("\nCSV summary line of the same report:")
print(report_csv(check_crossnorm(evaluator_for("eps"), space, samples=3, seed=7)), end="")
