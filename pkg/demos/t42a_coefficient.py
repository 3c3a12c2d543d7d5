"""Two candidate coefficients for h in T42A; only one of them works.

h = P * coeff - Q * rho + eta * k, with D = lam^2 - 2 mu and coeff either
lam/D or lam/(2D).  The constructor tries both and keeps the zero-residual one.

    python3 demos/t42a_coefficient.py
"""

from collections import Counter

from cosine_sine import (FamilyId, Unrealizable, catalog, construct, enumerate_involutive_automorphisms,
                         make_field)
from cosine_sine.equations import residual_main
from cosine_sine.families import _t42a_h, sample_params

S = catalog("z4")
for spec in ("gf:3^2", "gf:5^2", "gf:7^2", "complex:1e-9"):
    F = make_field(spec)
    seen = Counter()
    for sigma in enumerate_involutive_automorphisms(S):
        for fam in (FamilyId.T42A_i, FamilyId.T42A_ii):
            for seed in range(20):
                try:
                    p = sample_params(fam, S, sigma, F, seed=seed)
                except Unrealizable:
                    break
                t = construct(fam, p, S, sigma)
                wrong = residual_main(S, sigma, t.f, t.g, _t42a_h(p, sigma, "lam/D"))
                seen[(t.notes["t42a_variant"], wrong.zero)] += 1
    print(f"{spec:<13}", {f"{v} (lam/D also zero: {z})": n for (v, z), n in sorted(seen.items())})
