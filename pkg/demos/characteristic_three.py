"""Twelve solutions on z3 over GF(3) that no family accounts for.

They satisfy the equation only because 3xy vanishes in characteristic 3;
the same vectors read over GF(7) are not solutions.

    python3 demos/characteristic_three.py
"""

from cosine_sine import catalog, classify, make_field
from cosine_sine.equations import SolutionTriple, residual_main
from cosine_sine.functions import Func
from cosine_sine.oracle import completeness_report
from cosine_sine.semigroup import Involution

S = catalog("z3")
ident = Involution.identity(3)

run = completeness_report(S, ident, make_field("gf:3"), conditional_lemmas=False)
print(f"z3 over GF(3), sigma = id: {run.solution_count} solutions, "
      f"{len(run.certificates)} unclassified")

cert = run.certificates[0]
f, g, h = (cert["triple"][k] for k in "fgh")
print(f"example: f={f} g={g} h={h}")

for spec in ("gf:3", "gf:3^2", "gf:7"):
    F = make_field(spec)
    vals = [Func(F, [int(v) for v in u]) for u in (f, g, h)]
    r = residual_main(S, ident, *vals)
    line = f"  {spec:<7} residual zero: {r.zero}"
    if r.zero:
        c = classify(S, ident, SolutionTriple(*vals, ident), lift=False)
        line += f", classified: {c.classified}"
    print(line)
