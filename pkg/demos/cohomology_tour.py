"""Sheaf cohomology on the spaces behind the two decompositions.

Run: python3 demos/cohomology_tour.py
"""

from cubicsod.cohomology import (
    ProjectiveSpace,
    coh_Pn,
    coh_divisor_restriction,
    coh_resolution,
    complete_intersection_ideal,
    cubic_fourfold,
    plane_ambient,
    pushforward_projbundle,
)
from cubicsod.sodengine import get_geometry

# Bott's formula on P^5: O(-6) is the canonical bundle, so H^5 is one-dimensional.
print("H(P^5, O(-6)) =", coh_Pn(5, -6).dims)

# A cubic fourfold Y in P^5 has no cohomology in O(-1) and O(-2).
Y = cubic_fourfold()
for t in range(3):
    print(f"H(Y, O({-t})) =", coh_divisor_restriction(Y.ambient, Y.divisor, (-t,)).dims)

# Pushing O(1) forward from P(E) to the plane recovers E itself.
E = plane_ambient().E
print("pushforward of O(1) from P(E): degree and summands", pushforward_projbundle(1, E))

# Ext groups between line bundles on the blown-up cubic containing a plane.
plane = get_geometry("plane")
print("Ext(O(h-H), O) =", plane.ext(plane.line("h-H"), plane.line("0")).dims)
print("Ext(O(2h+H), O(2H)) =", plane.ext(plane.line("2h+H"), plane.line("2H")).dims)

# The ideal of a (2, 3) complete intersection surface in P^4 through its Koszul resolution.
ideal = complete_intersection_ideal(ProjectiveSpace(4), 2, 3)
for t in (1, 2, 5):
    print(f"H(P^4, J_S({t})) =", coh_resolution(ideal, t).dims)

# Ext from the exceptional quadric of the singular cubic's blowup.
sing = get_geometry("singular")
print("Ext(alpha_*O_Q, O(h)) =", sing.ext(sing.push("Q", "0"), sing.line("h")).dims)

# When a long exact sequence is not forced, the table says so instead of guessing.
table = coh_divisor_restriction(plane_ambient(), (2, 1), (2, -5))
print("restriction with an unforced connecting map:", table.determined, "euler =", table.chi)
