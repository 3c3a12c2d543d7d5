import json

import numpy as np
import pytest

from cosine_sine import (FamilyId, ParamSet, Unrealizable, catalog, construct,
                         enumerate_involutive_automorphisms, make_field, sample_params,
                         validate_params)
from cosine_sine.equations import residual_main
from cosine_sine.families import ConstraintError, conjugate, imaginary_unit
from cosine_sine.functions import Func
from cosine_sine.semigroup import Involution

from tables import EXTRA, nil3


def _names(violations):
    return [v.name for v in violations]


def test_t42b_needs_distinct_characters():
    F = make_field("gf:5")
    S = catalog("z2")
    one = Func.const(F, 2, 1)
    p = ParamSet(chi1=one, chi2=one, c=F(1), lam=F(0))
    assert "chi1 != chi2 required" in _names(validate_params(FamilyId.T42B, p, S, Involution.identity(2)))


def test_t42a_degenerate_discriminant():
    F = make_field("gf:5")
    S = catalog("z2")
    p = ParamSet(m=Func.const(F, 2, 1), lam=F(2), mu=F(2), eta=F(0), rho=F(1))
    names = _names(validate_params(FamilyId.T42A_i, p, S, Involution.identity(2)))
    assert "lambda^2 - 2 mu != 0 required" in names


def test_t43d_scalar_constraint_met():
    F = make_field("gf:7")
    S = catalog("z2")
    p = ParamSet(chi1=Func(F, [1, 1]), chi2=Func(F, [1, 6]), chi3=Func.zero(F, 2),
                 alpha=F(4), lam=F(1), rho=F(1))
    sigma = Involution.identity(2)
    assert validate_params(FamilyId.T43D, p, S, sigma) == []
    assert construct(FamilyId.T43D, p, S, sigma).residual.zero


def test_t43d_scalar_constraint_broken():
    F = make_field("gf:7")
    S = catalog("z2")
    p = ParamSet(chi1=Func(F, [1, 1]), chi2=Func(F, [1, 6]), chi3=Func.zero(F, 2),
                 alpha=F(3), lam=F(1), rho=F(1))
    names = _names(validate_params(FamilyId.T43D, p, S, Involution.identity(2)))
    assert names == ["2 alpha lambda^2 rho (2 - rho) = 1 required"]


def test_missing_and_mixed_parameters():
    F, G = make_field("gf:5"), make_field("gf:7")
    S = catalog("z2")
    sigma = Involution.identity(2)
    assert _names(validate_params(FamilyId.T41B, ParamSet(lam=F(1)), S, sigma)) == ["missing parameter f"]
    mixed = ParamSet(f=Func(F, [0, 0]), lam=G(1))
    assert _names(validate_params(FamilyId.T41B, mixed, S, sigma)) == ["parameters live in different fields"]
    with pytest.raises(ConstraintError):
        construct(FamilyId.T41B, ParamSet(lam=F(1), f=Func(F, [1, 0])), S, sigma)


def test_t41a_any_g():
    F = make_field("gf:5")
    S = catalog("klein4")
    g = Func(F, [1, 4, 2, 3])
    t = construct(FamilyId.T41A, ParamSet(g=g), S, Involution.identity(4))
    assert t.f.is_zero() and t.h.is_zero() and t.g == g and t.residual.zero


def test_t41b_on_null2():
    F = make_field("gf:5")
    S = catalog("null2")
    t = construct(FamilyId.T41B, ParamSet(f=Func(F, [0, 1]), lam=F(2)), S, Involution.identity(2))
    assert t.f == Func(F, [0, 1])
    assert t.g == Func(F, [0, 3])
    assert t.h == Func(F, [0, 2])
    assert t.residual.zero


def test_t42c_on_z3_gf3():
    F = make_field("gf:3")
    S = catalog("z3")
    p = ParamSet(chi=Func.const(F, 3, 1), phi=Func(F, [0, 1, 2]), lam=F(0))
    sigma = Involution.identity(3)
    assert validate_params(FamilyId.T42C, p, S, sigma) == []
    t = construct(FamilyId.T42C, p, S, sigma)
    assert t.residual.zero and t.h.is_zero() and t.f == p.phi


def test_sampling_is_reproducible():
    F = make_field("gf:5^2")
    S = catalog("z4")
    sigma = enumerate_involutive_automorphisms(S)[0]
    for fam in (FamilyId.T42B, FamilyId.T43D, FamilyId.T42A_i):
        a = sample_params(fam, S, sigma, F, seed=11)
        b = sample_params(fam, S, sigma, F, seed=11)
        assert a.to_json() == b.to_json()


def test_t41b_unrealizable_on_groups():
    F = make_field("gf:5")
    for name in ("trivial", "z2", "z3", "z4", "klein4"):
        S = catalog(name)
        with pytest.raises(Unrealizable):
            sample_params(FamilyId.T41B, S, Involution.identity(S.n), F, seed=0)


def test_t42b_realizable_on_z2():
    F = make_field("gf:5")
    S = catalog("z2")
    p = sample_params(FamilyId.T42B, S, Involution.identity(2), F, seed=3)
    assert construct(FamilyId.T42B, p, S, Involution.identity(2)).residual.zero


def test_conjugation_preserves_solutions(rng):
    F = make_field("gf:7^2")
    S = catalog("z4")
    sigma = enumerate_involutive_automorphisms(S)[0]
    base = construct(FamilyId.T43D, sample_params(FamilyId.T43D, S, sigma, F, seed=2), S, sigma)
    for _ in range(100):
        d = F.element(F.random(rng))
        f, g, h = conjugate(base.f, base.g, base.h, d)
        assert residual_main(S, sigma, f, g, h).zero


def test_conjugation_by_zero_is_identity():
    F = make_field("gf:5")
    f, g, h = Func(F, [1, 2]), Func(F, [3, 4]), Func(F, [0, 1])
    assert conjugate(f, g, h, F(0)) == (f, g, h)


def test_imaginary_unit():
    assert imaginary_unit(make_field("gf:3")) is None
    i = imaginary_unit(make_field("gf:5"))
    assert i * i == make_field("gf:5")(-1)
    F = make_field("gf:3^2")
    j = imaginary_unit(F)
    assert j * j == F(-1)


@pytest.mark.parametrize("fam", [FamilyId.T42C, FamilyId.T43A, FamilyId.T43E])
def test_families_realizable_on_z3_gf9(fam):
    # these have no catalog instance over GF(p^2) with p > 3; z3 in characteristic 3 has them
    F = make_field("gf:3^2")
    S = catalog("z3")
    sigma = Involution.identity(3)
    for seed in range(5):
        p = sample_params(fam, S, sigma, F, seed=seed)
        assert validate_params(fam, p, S, sigma) == []
        assert construct(fam, p, S, sigma).residual.zero


@pytest.mark.parametrize("spec", ["gf:5^2", "gf:7^2"])
def test_t43f_on_nil3(spec):
    F = make_field(spec)
    S, (sigma,) = nil3()
    for seed in range(10):
        p = sample_params(FamilyId.T43F, S, sigma, F, seed=seed)
        assert validate_params(FamilyId.T43F, p, S, sigma) == []
        assert construct(FamilyId.T43F, p, S, sigma).residual.zero


def test_t42a_variant_is_recorded():
    S = catalog("z2")
    sigma = Involution.identity(2)
    for spec in ("gf:5^2", "gf:7^2", "complex:1e-9"):
        F = make_field(spec)
        for seed in range(10):
            t = construct(FamilyId.T42A_i, sample_params(FamilyId.T42A_i, S, sigma, F, seed=seed),
                          S, sigma)
            assert t.notes["t42a_variant"] == "lam/(2D)"


def test_paramset_json_round_trip():
    F = make_field("gf:5^2")
    S = catalog("z4")
    sigma = enumerate_involutive_automorphisms(S)[-1]
    for fam in FamilyId:
        try:
            p = sample_params(fam, S, sigma, F, seed=4)
        except Unrealizable:
            continue
        data = json.loads(json.dumps(p.to_json()))
        q = ParamSet.from_json(F, data)
        assert q.to_json() == p.to_json()
        a, b = construct(fam, p, S, sigma), construct(fam, q, S, sigma)
        assert (a.f, a.g, a.h) == (b.f, b.g, b.h)


def test_complex_constructor_residuals():
    F = make_field("complex:1e-9")
    S = catalog("z4")
    for sigma in enumerate_involutive_automorphisms(S):
        for fam in (FamilyId.T42A_i, FamilyId.T42A_ii, FamilyId.T42B, FamilyId.T43D):
            try:
                p = sample_params(fam, S, sigma, F, seed=np.random.default_rng(5))
            except Unrealizable:
                continue
            r = construct(fam, p, S, sigma).residual
            assert r.zero and r.max_abs < 1e-9


@pytest.mark.parametrize("spec", ["gf:5^2", "gf:7^2", "complex:1e-9"])
def test_every_family_realized_off_catalog(spec):
    F = make_field(spec)
    seen = set()
    for make in EXTRA:
        S, sigmas = make()
        for sigma in sigmas:
            for fam in FamilyId:
                try:
                    p = sample_params(fam, S, sigma, F, seed=1)
                except Unrealizable:
                    continue
                assert construct(fam, p, S, sigma).residual.zero
                seen.add(fam)
    assert seen >= set(FamilyId) - {FamilyId.T42A_ii, FamilyId.T42E}
