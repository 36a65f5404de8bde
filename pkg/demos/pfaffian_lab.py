"""Pfaffian cubics and point counts over small finite fields.

Run: python3 demos/pfaffian_lab.py           (a few seconds)
     python3 demos/pfaffian_lab.py --f49     (adds X_V over F_49, about two minutes)
"""

import sys

import numpy as np

from cubicsod.pflab import (
    determinant,
    generate_instance,
    grassmannian_count,
    load_instance,
    make_field,
    pfaffian_cubic,
    projective_count,
    random_skew,
    s_count_report,
    s_points,
    singular_cubic_model,
    singular_points,
    xv_count_report,
)

F7 = make_field(7)
rng = np.random.default_rng(0)

m = random_skew(F7, rng)
pf = m.pfaffian()
print(f"Pf = {pf}, Pf^2 = {F7.mul(pf, pf)}, det = {determinant(F7, m.entries)}")

# six skew forms span a P^5 inside P^14 of all skew forms; the Pfaffian restricts to a cubic there
inst = load_instance(generate_instance(7, seed=1))
cubic = pfaffian_cubic(inst["basis"])
print("Pfaffian cubic: degree", cubic.degree, "with", len(cubic.coeffs), "monomials")

print("|P^5(F_7)| =", projective_count(5, 7), " |Gr(2,6)(F_7)| =", grassmannian_count(2, 6, 7))

# z0 F2 + F3 is a cubic singular at (1:0:...:0)
F = singular_cubic_model(inst["F2"], inst["F3"])
print("singular points of z0 F2 + F3 over F_7:", singular_points(F))

# the surface S = {F2 = F3 = 0} in P^4
pts, smooth = s_points(inst["F2"], inst["F3"], report=True)
print("S(F_7):", len(pts), "points,", len(smooth.singular), "singular")
print(s_count_report(inst["F2"], inst["F3"], ext=2).to_json())

# X_V: 2-dimensional subspaces of F^6 on which every form of the basis vanishes
ext = 2 if "--f49" in sys.argv else 1
print(xv_count_report(inst["basis"], ext=ext).to_json())
