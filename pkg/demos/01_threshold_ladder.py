"""Walk a few structural triples down the classification ladder.

Each rung is an exact comparison of A against a threshold that depends
only on (d1, d2): the discriminant, Psi, chi_tilde, A1 and finally the
sign of Theta(A, k) on (0, 1). Nothing here touches floating point until
the values are printed.
"""

from fractions import Fraction as F

from eincoh import StructuralTriple, classify, threshold_report

TRIPLES = [
    (2, 4, F(1)),        # inside the chi_tilde window
    (3, 3, F(1, 8)),     # needs the Theta check
    (7, 8, F(1, 2)),     # above Psi
    (3, 6, F(25, 16)),   # discriminant exactly zero
    (5, 20, F(361, 50)), # falls between A1 and Psi
]

for d1, d2, A in TRIPLES:
    t = StructuralTriple(d1, d2, A)
    v = classify(t)
    print(f"{str(t):16s} -> {v.tag.value}")
    for e in v.evidence:
        mark = "yes" if e.holds else "no "
        print(f"    {mark} {e.predicate:28s} {e.lhs or '':>14s}  vs  {e.rhs or ''}")

# the full report keeps every threshold exact; surds print as a + b*sqrt(m)
rep = threshold_report(StructuralTriple(3, 3, F(1, 8)))
print()
for name, exact, approx in rep.rows():
    print(f"{name:18s} {exact:36s} {approx}")
