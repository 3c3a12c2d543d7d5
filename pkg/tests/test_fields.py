import numpy as np
import pytest
from hypothesis import given, strategies as st

from cosine_sine.fields import (ComplexField, FieldError, PrimeField, QuadraticField, Scalar,
                                make_field, sqrt)


def test_parse_prime_field():
    F = make_field("gf:5")
    assert isinstance(F, PrimeField) and F.order == 5 and F.spec == "gf:5"


def test_gf9_uses_non_residue_two():
    F = make_field("gf:3^2")
    assert isinstance(F, QuadraticField)
    assert F.order == 9 and F.d == 2
    w = Scalar(F, F.parse("w"))
    assert w * w == F(2)
    assert w.value == 3


@pytest.mark.parametrize("spec", ["gf:2", "gf:2^2"])
def test_characteristic_two_rejected(spec):
    with pytest.raises(FieldError):
        make_field(spec)


@pytest.mark.parametrize("spec", ["gf:9", "gf:4", "gf", "real:1", "complex:abc", "gf:5^3"])
def test_bad_specs(spec):
    with pytest.raises(FieldError):
        make_field(spec)


def test_square_roots_gf5():
    F = make_field("gf:5")
    assert [r.value for r in sqrt(F(4))] == [2, 3]
    assert sqrt(F(2)) == ()
    for spec in ("gf:5", "gf:3^2", "complex:1e-9"):
        G = make_field(spec)
        assert [r == G(0) for r in sqrt(G(0))] == [True]


def test_every_gf_p_element_has_a_root_in_gf_p2():
    for p in (3, 5, 7):
        E = make_field(f"gf:{p}^2")
        assert all(sqrt(E(int(a))) for a in range(p))


def test_inverse_and_negation():
    F = make_field("gf:7")
    assert F(3).inv() == F(5)
    assert -F(0) == F(0)
    with pytest.raises(ZeroDivisionError):
        F(0).inv()


def test_add_neg_random(rng):
    for spec in ("gf:7", "gf:5^2"):
        F = make_field(spec)
        x = F.random(rng, 100)
        assert np.all(F.add(x, F.neg(x)) == 0)


def _axioms(F, a, b, c):
    a, b, c = Scalar(F, a), Scalar(F, b), Scalar(F, c)
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if not a.is_zero():
        assert a * a.inv() == F(1)


codes25 = st.integers(0, 24)


@given(codes25, codes25, codes25)
def test_gf25_axioms(a, b, c):
    _axioms(make_field("gf:5^2"), a, b, c)


@given(st.integers(0, 48), st.integers(0, 48), st.integers(0, 48))
def test_gf49_axioms(a, b, c):
    _axioms(make_field("gf:7^2"), a, b, c)


@given(st.integers(0, 24))
def test_render_parse_round_trip(code):
    F = make_field("gf:5^2")
    assert F.parse(F.render(code)) == code


def test_vectorised_dot_matches_scalar_loop(rng):
    F = make_field("gf:7^2")
    A, B = F.random(rng, (3, 4)), F.random(rng, (4, 2))
    C = F.dot(A, B)
    for i in range(3):
        for j in range(2):
            acc = F(0)
            for k in range(4):
                acc = acc + Scalar(F, int(A[i, k])) * Scalar(F, int(B[k, j]))
            assert acc == Scalar(F, int(C[i, j]))


def test_complex_hybrid_tolerance():
    F = ComplexField(1e-9)
    assert F(1e6) == F(1e6 + 1e-4)          # relative regime
    assert F(1e-12).is_zero()
    assert not (F(1.0) == F(1.0 + 1e-6))
    with pytest.raises(TypeError):
        hash(F(1.0))


def test_mixed_fields_rejected():
    with pytest.raises(FieldError):
        make_field("gf:5")(1) + make_field("gf:7")(1)
