"""A first look: solve the equation on a small group and sort the solutions.

    python3 demos/tour.py
"""

from collections import Counter

from cosine_sine import (FamilyId, catalog, classify, construct, enumerate_involutive_automorphisms,
                         make_field, sample_params)
from cosine_sine.oracle import brute_force_solutions

F = make_field("gf:5")
S = catalog("z4")
print(f"{S.name}: order {S.n}, group={S.is_group()}")

for sigma in enumerate_involutive_automorphisms(S):
    sols = brute_force_solutions(S, sigma, F)
    hist = Counter(classify(S, sigma, t).family.value for t in sols)
    print(f"  sigma={sigma.perm.tolist()}: {len(sols)} solutions over {F.spec}")
    for fam, n in sorted(hist.items()):
        print(f"    {fam:<8} {n}")

# going the other way: draw parameters for a family, build the triple, check it
G = make_field("gf:7^2")
sigma = enumerate_involutive_automorphisms(S)[0]
p = sample_params(FamilyId.T43D, S, sigma, G, seed=1)
t = construct(FamilyId.T43D, p, S, sigma)
print(f"\nT43D over {G.spec}: f={t.f.render()}  residual zero: {t.residual.zero}")
c = classify(S, sigma, t)
print(f"classified back as {c.family.value} (lifted: {c.lifted})")
