# The file formats and the `tnl` command line.
#
# Tensors and multilinear maps travel as JSON: a list of factor blocks
# plus a row-major coefficient list; maps add a "codomain" block and one
# trailing coefficient axis.  The same files drive the CLI:
#
#   tnl norm    --kind {eps,pi,sigma_p,beta_p,sup,lin,sm_pq,si_p} --in FILE
#   tnl verify  --suite {crossnorm,metric,smoothness,property_b,representation,bidual}
#   tnl witness [--norm beta_p] [--budget N]
#
# Exit codes: 0 ok, 2 usage/malformed input, 3 unsupported combination,
# 4 suite failed (report still written).  This script calls the CLI
# in-process; from a shell, replace cli([...]) with `tnl ...`.

import json
import os
import tempfile

from tnl import load_input
from tnl.cli import main as cli

DATA = os.path.join(os.path.dirname(__file__), "data")
identity = os.path.join(DATA, "identity_l2.json")
mul_map = os.path.join(DATA, "multiplication_map.json")
product_form = os.path.join(DATA, "product_form.json")

# ---------------------------------------------------------------------
# 1. Loading dispatches on the "codomain" key: tensors come back as
#    Tensor, maps as MultilinearMap.
# ---------------------------------------------------------------------
print("loaded objects:")
for path in (identity, mul_map):
    obj = type(load_input(path)).__name__
    print(f"  {os.path.basename(path):<28} -> {obj}")

# ---------------------------------------------------------------------
# 2. Norms straight from files.  The identity on ell_2 (x) ell_2 has
#    injective norm 1 and projective norm 2; the coordinatewise
#    multiplication map has sup norm exactly 1.
# ---------------------------------------------------------------------
print("\nnorm commands:")
cli(["norm", "--kind", "eps", "--in", identity])
cli(["norm", "--kind", "pi", "--in", identity])
cli(["norm", "--kind", "sup", "--in", mul_map])
cli(["norm", "--kind", "si_p", "--in", product_form, "--p", "2"])

# ---------------------------------------------------------------------
# 3. A verification suite writes a canonical JSON report; rerunning
#    with the same seed reproduces it byte for byte.
# ---------------------------------------------------------------------
print("\nverify command:")
with tempfile.TemporaryDirectory() as tmp:
    out = os.path.join(tmp, "crossnorm.json")
    cli(["verify", "--suite", "crossnorm", "--samples", "3", "--seed", "7",
         "--out", out])
    first = open(out, "rb").read()
    cli(["verify", "--suite", "crossnorm", "--samples", "3", "--seed", "7",
         "--out", out])
    print(f"  rerun byte-identical: {open(out, 'rb').read() == first}")
    report = json.loads(first)
    print(f"  suite={report['suite']} passed={report['passed']} "
          f"max_deviation={report['max_deviation']:.3e}")

# ---------------------------------------------------------------------
# 4. Structured output for the norm command too: --out writes a single
#    canonical JSON object (or CSV with --format csv).
# ---------------------------------------------------------------------
print("\nnorm with --out:")
with tempfile.TemporaryDirectory() as tmp:
    out = os.path.join(tmp, "eps.json")
    cli(["norm", "--kind", "eps", "--in", identity, "--out", out])
    print("  " + open(out).read().strip())
