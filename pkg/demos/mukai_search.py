"""Why the twisted K3 category is not the derived category of a surface.

A surface would need classes v1, v2 with chi(v1, v2) = 1 and chi(v2, v2) = 0
in the twisted Mukai lattice. This script searches a box and shows the parity
obstruction that makes every such search come up empty.

Run: python3 demos/mukai_search.py
"""

from fractions import Fraction

from cubicsod.mukai import (
    BData,
    CycleClass,
    chi_B0,
    delta_parity,
    gram_twisted,
    gram_untwisted,
    hecke_parity,
    iter_pairs,
    null_vectors,
    pair_search,
    parity_certificate,
)

lat = gram_twisted(BData(Fraction(1, 2), Fraction(1, 2)))
print("Euler form on (2+2B, h, p):")
for row in lat.gram:
    print("   ", list(row))
print("odd entries:", lat.odd_entries())

for n in (5, 15, 25):
    print(f"box {n}: pair found = {pair_search(lat, n) is not None}, null vectors = {len(null_vectors(lat, n))}")

# null vectors have even x and y, which forces chi(v1, v2) to be even
print(parity_certificate(lat, 25).to_json())

# without the twist the search succeeds immediately
untwisted = gram_untwisted()
first = next(iter_pairs(untwisted, 1))
print("untwisted lattice, first pair in the unit box:", first)
print("chi((1,0,1), (0,0,1)) =", untwisted.chi((1, 0, 1), (0, 0, 1)))

# numerical facts that feed the same obstruction
print("chi(B_0) on the plane:", chi_B0())
print("deg det parity after three Hecke flips from even:", hecke_parity(0, 3))
print("delta(P) =", delta_parity(CycleClass(1, 0)), " delta(H^2) =", delta_parity(CycleClass(0, 1)))
