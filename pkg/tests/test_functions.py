import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cosine_sine import catalog, enumerate_involutive_automorphisms, make_field
from cosine_sine.equations import residual_cs_type, residual_sine
from cosine_sine.functions import (Func, PreconditionError, is_central, is_multiplicative,
                                   linear_rank, multiplicative_functions, solve_chi_additive,
                                   solve_cosine_sine_type, vanishing_on_squares)


def _mult_by_scan(S, p):
    """Every m: S -> GF(p) with m(xy) = m(x)m(y), by exhaustive scan."""
    T = S.table.tolist()
    n = S.n
    return sorted(v for v in itertools.product(range(p), repeat=n)
                  if all(v[T[x][y]] == v[x] * v[y] % p for x in range(n) for y in range(n)))


def _keys(fs):
    return sorted(f.key() for f in fs)


def test_z2_gf5_has_three_multiplicative_functions():
    ms = _keys(multiplicative_functions(catalog("z2"), make_field("gf:5")))
    assert ms == [(0, 0), (1, 1), (1, 4)]


def test_leftzero2_gf3():
    assert _keys(multiplicative_functions(catalog("leftzero2"), make_field("gf:3"))) == [(0, 0), (1, 1)]


def test_trivial_gf7():
    assert _keys(multiplicative_functions(catalog("trivial"), make_field("gf:7"))) == [(0,), (1,)]


@pytest.mark.parametrize("name", ["z2", "z3", "z4", "klein4", "null3", "leftzero3", "rightzero3"])
@pytest.mark.parametrize("p", [3, 5, 7])
def test_multiplicative_matches_scan(name, p):
    S = catalog(name)
    assert _keys(multiplicative_functions(S, make_field(f"gf:{p}"))) == _mult_by_scan(S, p)


def test_z4_over_complex_has_five():
    F = make_field("complex:1e-9")
    ms = multiplicative_functions(catalog("z4"), F)
    assert len(ms) == 5
    assert all(is_multiplicative(m, catalog("z4")) for m in ms)


def test_gf_p2_multiplicative_are_multiplicative():
    F = make_field("gf:5^2")
    S = catalog("z3")
    ms = multiplicative_functions(S, F)
    assert len(ms) == 4          # zero plus the three cube-root characters over GF(25)
    assert all(is_multiplicative(m, S) for m in ms)


def test_chi_additive_z3_gf3():
    F = make_field("gf:3")
    S = catalog("z3")
    one = Func.const(F, 3, 1)
    basis = solve_chi_additive(S, one)
    assert len(basis) == 1
    phi = Func(F, [0, 1, 2])
    assert residual_sine(S, phi, one).zero
    assert linear_rank([basis[0], phi])[0] == 1


def test_chi_additive_z2_gf5_is_trivial():
    F = make_field("gf:5")
    assert solve_chi_additive(catalog("z2"), Func.const(F, 2, 1)) == []


def test_zero_phi_is_chi_additive_for_any_chi():
    F = make_field("gf:5")
    S = catalog("z4")
    for chi in multiplicative_functions(S, F):
        assert residual_sine(S, Func.zero(F, 4), chi).zero


@pytest.mark.parametrize("name", ["z3", "null3", "leftzero3", "klein4"])
def test_chi_additive_basis_vectors_satisfy_law(name):
    S = catalog(name)
    for spec in ("gf:3", "gf:5^2"):
        F = make_field(spec)
        for chi in multiplicative_functions(S, F):
            for phi in solve_chi_additive(S, chi):
                assert residual_sine(S, phi, chi).zero


def test_cosine_sine_type_null2():
    F = make_field("gf:3")
    S = catalog("null2")
    zero = Func.zero(F, 2)
    phi = Func(F, [0, 1])
    space = solve_cosine_sine_type(S, None, zero, phi)
    scan = [v for v in itertools.product(range(3), repeat=2)
            if residual_cs_type(S, None, Func(F, v), zero, phi).zero]
    # psi(0) would have to equal phi(1)^2 = 1 and phi(0)^2 = 0
    assert scan == [] and space.is_empty
    # with phi = 0 every psi vanishing at 0 works
    space = solve_cosine_sine_type(S, None, zero, zero)
    assert sorted(p.key() for p in space.points()) == [(0, 0), (0, 1), (0, 2)]


def test_cosine_sine_type_needs_additive_phi():
    F = make_field("gf:5")
    S = catalog("z2")
    with pytest.raises(PreconditionError):
        solve_cosine_sine_type(S, None, Func.const(F, 2, 1), Func(F, [1, 2]))


def test_linear_rank():
    F = make_field("gf:5")
    f = Func(F, [1, 2, 3])
    r, c = linear_rank([f, f * 2])
    assert r == 1
    assert c.tolist() == [2, 4]       # 2 f - (2f) = 0, last entry -1
    assert linear_rank([Func(F, [1, 0]), Func(F, [0, 1])])[0] == 2


def test_centrality():
    F = make_field("gf:5")
    assert is_central(Func(F, [1, 2, 3]), catalog("z3"))[0]
    ok, w = is_central(Func(F, [0, 1]), catalog("leftzero2"))
    assert not ok and w in {(0, 1), (1, 0)}


def test_vanishing_on_squares():
    F = make_field("gf:3")
    assert [f.key() for f in vanishing_on_squares(catalog("null3"), F)] == [(0, 1, 0), (0, 0, 1)]
    assert vanishing_on_squares(catalog("z3"), F) == []


@given(st.lists(st.integers(0, 24), min_size=4, max_size=4), st.integers(0, 3))
def test_even_odd_decomposition(vals, idx):
    F = make_field("gf:5^2")
    S = catalog("klein4")
    sigma = enumerate_involutive_automorphisms(S)[idx]
    f = Func(F, vals)
    fe, fo = f.even(sigma), f.odd(sigma)
    assert fe + fo == f
    assert fe.is_even(sigma) and fo.is_odd(sigma)


def test_func_is_immutable():
    f = Func(make_field("gf:3"), [0, 1])
    with pytest.raises(AttributeError):
        f.values = np.zeros(2)
    with pytest.raises(ValueError):
        f.values[0] = 2
