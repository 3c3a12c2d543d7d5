import json
from collections import Counter
from pathlib import Path

import pytest

from cosine_sine import (CATALOG_NAMES, FamilyId, Unrealizable, catalog, classify, construct,
                         enumerate_involutive_automorphisms, make_field, sample_params)
from cosine_sine.equations import SolutionTriple
from cosine_sine.functions import Func, PreconditionError
from cosine_sine.oracle import brute_force_solutions, completeness_report
from cosine_sine.semigroup import Involution, validate_involution

from tables import EXTRA

DATA = Path(__file__).parent / "data"


def _round_trip(S, sigma, F, seeds):
    for fam in FamilyId:
        for seed in seeds:
            try:
                p = sample_params(fam, S, sigma, F, seed=seed)
            except Unrealizable:
                break
            t = construct(fam, p, S, sigma)
            c = classify(S, sigma, t, all_matches=True)
            assert c.classified, (S.name, fam, c.failed_fits)
            rebuilt = construct(c.family, c.params, S, sigma)
            lifted = t.lift(c.field) if c.lifted else t
            assert (rebuilt.f, rebuilt.g, rebuilt.h) == (lifted.f, lifted.g, lifted.h)
            yield fam, c


@pytest.mark.parametrize("spec", ["gf:5^2", "gf:3^2", "complex:1e-9"])
def test_round_trip_catalog(spec):
    F = make_field(spec)
    for name in CATALOG_NAMES:
        S = catalog(name)
        for sigma in enumerate_involutive_automorphisms(S):
            for _ in _round_trip(S, sigma, F, range(3)):
                pass


def test_round_trip_off_catalog():
    F = make_field("gf:5^2")
    for make in EXTRA:
        S, sigmas = make()
        for sigma in sigmas:
            for _ in _round_trip(S, sigma, F, range(3)):
                pass


def test_source_family_among_matches():
    # overlaps are allowed, but the source family must always fit its own output
    F = make_field("gf:7^2")
    S = catalog("z4")
    for sigma in enumerate_involutive_automorphisms(S):
        for fam, c in _round_trip(S, sigma, F, range(3)):
            if fam == FamilyId.T43E:
                continue   # conjugation may land back in T43A-T43D
            assert fam in [m for m, _ in c.matches]


def test_zero_f_and_h_is_t41a():
    F = make_field("gf:5")
    S = catalog("klein4")
    z = Func.zero(F, 4)
    c = classify(S, Involution.identity(4), SolutionTriple(z, Func(F, [1, 2, 3, 4]), z,
                                                            Involution.identity(4)))
    assert c.family == FamilyId.T41A and c.branch == "dependent-null" and not c.lifted


def test_non_solution_rejected():
    F = make_field("gf:5")
    S = catalog("z2")
    one = Func.const(F, 2, 1)
    with pytest.raises(PreconditionError):
        classify(S, Involution.identity(2), SolutionTriple(one, one, one, Involution.identity(2)))


def test_z2_gf3_histogram():
    F = make_field("gf:3")
    S = catalog("z2")
    sigma = Involution.identity(2)
    hist = Counter()
    for t in brute_force_solutions(S, sigma, F):
        c = classify(S, sigma, t)
        assert c.classified
        hist[c.family.value] += 1
    assert dict(hist) == {"T41A": 9, "T42B": 18, "T43D": 6}


def test_z4_gf5_histogram():
    run = completeness_report(catalog("z4"), Involution.identity(4), make_field("gf:5"),
                              conditional_lemmas=False)
    assert run.solution_count == 1425
    assert run.histogram == {"T41A": 625, "T42B": 200, "T43D": 360, "T43E": 240}
    assert run.certificates == []


def test_z3_gf3_certificate_baseline():
    base = json.loads((DATA / "certificates_z3_gf3.json").read_text())
    S = catalog("z3")
    F = make_field("gf:3")
    sigma = validate_involution(S, base["sigma"])
    run = completeness_report(S, sigma, F, conditional_lemmas=False)
    assert run.certificates == base["certificates"]
    assert len(run.certificates) == 12
    # every certificate really solves the equation and stays unclassified over GF(9)
    G = make_field("gf:3^2")
    for cert in run.certificates:
        f, g, h = (Func(F, [F.parse(v) for v in cert["triple"][k]]) for k in "fgh")
        t = SolutionTriple(f, g, h, sigma).with_residual(S)
        assert t.residual.zero
        assert not classify(S, sigma, t.lift(G), lift=False).classified


def test_z3_other_sigma_fully_classified():
    S = catalog("z3")
    sigma = enumerate_involutive_automorphisms(S)[1]
    run = completeness_report(S, sigma, make_field("gf:3"), conditional_lemmas=False)
    assert run.solution_count == 39 and run.certificates == []
