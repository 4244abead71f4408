"""Two ways a k-fold circuit can fail to be balanced.

The linear double circuit on v1..v6 has three parts but the closures of
D - A_i meet only in the empty flat, even though the spans of those column
sets share a line in Q^4.  The cyclic example for s = 2, 3 shows the
gap l - k - r(F) growing with s; the modular pair sweep names the first
pair of flats that is not modular.

    python3 demos/unbalanced.py
"""
from mkit import (LinearMatroidSpec, balance_report, linear, principal_partition,
                  subspace_intersection, verify_kfold_property)
from mkit.document import load_document
from pathlib import Path

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"

spec = LinearMatroidSpec([[1, 0, 0, 0, 1, 1],
                          [0, 1, 0, 0, -1, 0],
                          [0, 0, 1, 0, 0, -1],
                          [0, 0, 0, 1, 1, 1]])
m = linear(spec)
kf = principal_partition(m, None)
rep = balance_report(m, kf, check_pairs=True)
print("linear example over Q")
print("  parts:", [m.elements(p) for p in kf.parts])
print(f"  r(F) = {rep.intersection_rank} < l - k = {rep.bound}")
fams = [m.elements(kf.support & ~p) for p in kf.parts]
print(f"  but the spans of D - A_i meet in dimension {subspace_intersection(spec, fams)}")
parts, j = rep.violating_modular_pair
print(f"  first non-modular pair: I = {[i + 1 for i in parts]}, j = {j + 1}")
print()

for s in (2, 3):
    doc = load_document(FIXTURES / f"cyclic_gap_s{s}.json")
    m = doc.build()
    kf = principal_partition(m, None)
    rep = balance_report(m, kf)
    v = verify_kfold_property(m, 2)
    print(f"s = {s}: l = {kf.ell}, r(F) = {rep.intersection_rank}, bound {rep.bound}; "
          f"{len(v.counterexamples)} unbalanced double circuit(s) found by verify")
