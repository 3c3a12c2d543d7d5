import itertools

import numpy as np
import pytest

from cosine_sine import CATALOG_NAMES, catalog, enumerate_involutive_automorphisms, make_field
from cosine_sine.oracle import (BudgetExceeded, all_vectors, brute_force_solutions,
                                completeness_report, full_scan_solutions)
from cosine_sine.semigroup import Involution, validate_table


def _small_semigroups(n):
    # every associative table of order n, not only the catalog ones
    for flat in itertools.product(range(n), repeat=n * n):
        T = np.array(flat).reshape(n, n)
        if all(T[T[x, y], z] == T[x, T[y, z]] for x in range(n) for y in range(n) for z in range(n)):
            yield validate_table(T.tolist())


def _naive_solutions(S, sigma, p):
    # pure-python reference, independent of the field layer
    n = S.n
    out = set()
    vecs = list(itertools.product(range(p), repeat=n))
    T, s = S.table, sigma.perm
    for f in vecs:
        for g in vecs:
            for h in vecs:
                if all((f[T[x, s[y]]] - f[x] * g[y] - g[x] * f[y] - h[x] * h[y]) % p == 0
                       for x in range(n) for y in range(n)):
                    out.add((f, g, h))
    return out


@pytest.mark.parametrize("n,p", [(1, 3), (1, 5), (1, 7), (2, 3)])
def test_two_oracles_agree(n, p):
    F = make_field(f"gf:{p}")
    for S in _small_semigroups(n):
        for sigma in enumerate_involutive_automorphisms(S):
            a = brute_force_solutions(S, sigma, F)
            b = full_scan_solutions(S, sigma, F)
            assert a.same_as(b)


def test_oracle_matches_pure_python():
    F = make_field("gf:3")
    for name in ("z2", "null2", "leftzero2"):
        S = catalog(name)
        for sigma in enumerate_involutive_automorphisms(S):
            sols = brute_force_solutions(S, sigma, F)
            keys = {tuple(map(tuple, t)) for t in zip(sols.f.tolist(), sols.g.tolist(),
                                                       sols.h.tolist())}
            assert keys == _naive_solutions(S, sigma, 3)


@pytest.mark.parametrize("name,spec,count", [
    ("trivial", "gf:3", 9),
    ("z2", "gf:3", 33),
    ("null2", "gf:3", 33),
    ("z4", "gf:5", 1425),
])
def test_frozen_counts(name, spec, count):
    S = catalog(name)
    assert len(brute_force_solutions(S, Involution.identity(S.n), make_field(spec))) == count


def test_extension_field_oracle():
    # GF(9) is small enough for the oracle on order 2
    F = make_field("gf:3^2")
    S = catalog("z2")
    sols = brute_force_solutions(S, Involution.identity(2), F)
    assert len(sols) > 0
    run = completeness_report(S, Involution.identity(2), F)
    assert run.certificates == [] and run.lemma33_ok and run.conditional_ok


def test_shards_match_sequential():
    F = make_field("gf:5")
    S = catalog("klein4")
    sigma = enumerate_involutive_automorphisms(S)[1]
    seq = brute_force_solutions(S, sigma, F)
    par = brute_force_solutions(S, sigma, F, shards=3, workers=2)
    assert seq.same_as(par)
    for attr in "fgh":
        assert np.array_equal(getattr(seq, attr), getattr(par, attr))


def test_manual_g_range_slices_cover_everything():
    F = make_field("gf:3")
    S = catalog("null3")
    sigma = Involution.identity(3)
    full = brute_force_solutions(S, sigma, F)
    parts = [brute_force_solutions(S, sigma, F, g_range=(a, b)) for a, b in ((0, 10), (10, 27))]
    assert sum(len(p) for p in parts) == len(full)
    assert set().union(*(p.keys() for p in parts)) == full.keys()


def test_budget_error():
    S = catalog("z4")
    with pytest.raises(BudgetExceeded, match="budget"):
        brute_force_solutions(S, Involution.identity(4), make_field("gf:5"), budget=1000)
    with pytest.raises(BudgetExceeded):
        full_scan_solutions(S, Involution.identity(4), make_field("gf:5"))


def test_complex_field_rejected():
    with pytest.raises(ValueError):
        brute_force_solutions(catalog("z2"), Involution.identity(2), make_field("complex:1e-9"))


def test_all_vectors_enumerates_space():
    F = make_field("gf:3^2")
    V = all_vectors(F, 2)
    assert V.shape == (81, 2)
    assert len({tuple(r) for r in V.tolist()}) == 81


def test_lemma33_holds_on_catalog_gf3():
    F = make_field("gf:3")
    for name in CATALOG_NAMES:
        S = catalog(name)
        for sigma in enumerate_involutive_automorphisms(S):
            run = completeness_report(S, sigma, F, conditional_lemmas=False)
            assert run.lemma33_ok, (name, run.lemma33)
