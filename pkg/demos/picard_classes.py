"""Divisor-class bookkeeping on the blowups used by the two decompositions.

Run: python3 demos/picard_classes.py
"""

from cubicsod.piclattice import builtin_models, express, get_model, verify_relation

for model in builtin_models():
    print(f"{model.name:<18} basis {model.labels}  K = {model.K}")

plane = get_model("plane-case")
# the exceptional divisor of the blowup along the plane is D = H - h
print("D =", express(plane, "D"), "| D = H - h:", verify_relation(plane, "D", "H - h"))
print("-K - (H + h) =", express(plane, "-K - H - h"))

sing = get_model("singular-case")
print("K on the singular case:", sing.K, "| K = -5h + D:", verify_relation(sing, "K", "-5h + D"))
print("3h - D =", express(sing, "3h - D"))
