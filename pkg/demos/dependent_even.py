"""An even solution with {f, g, h} dependent that still reaches case 1.

When fe and he are independent the conditional check expects one of three
shapes.  This z2 triple over the complex numbers fits the first shape's
equation without {f, g, h} being independent; the checker reports it under
``dependent_even`` rather than as a failure.

    python3 demos/dependent_even.py
"""

from cosine_sine import catalog, make_field
from cosine_sine.equations import SolutionTriple, check_lemma34_37
from cosine_sine.functions import Func, linear_rank
from cosine_sine.semigroup import Involution

F = make_field("complex:1e-9")
S = catalog("z2")
ident = Involution.identity(2)
f, g, h = Func(F, [1, 0]), Func(F, [0, 1]), Func(F, [1, -1])
t = SolutionTriple(f, g, h, ident).with_residual(S)
print(f"residual zero: {t.residual.zero}")
print(f"rank {{f, h}} = {linear_rank([f, h])[0]}, rank {{f, g, h}} = {linear_rank([f, g, h])[0]}")
for e in check_lemma34_37(S, ident, t).entries:
    if e.hypotheses_held:
        print(f"  check {e.lemma}: conclusion held={e.conclusion_held} {e.witnesses}")
