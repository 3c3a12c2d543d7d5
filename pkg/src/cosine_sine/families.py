"""Parametrised solution families, parameter validation and random sampling.

Most families are a simple triple pushed through the conjugation

    C_d(f, g, h) = (f, g - d^2/2 f + d h, h - d f),

which leaves ``f(x)g(y) + g(x)f(y) + h(x)h(y)`` unchanged.  Writing them that
way keeps each constructor short and makes the classifier's job (undo the
conjugation, then look at the simple triple) mechanical.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field, fields as dc_fields

import numpy as np

from .equations import (
    SolutionTriple,
    residual_cs_type,
    residual_main,
    residual_sine,
)
from .fields import Field, Scalar, sqrt
from .functions import (
    AffineSpace,
    Func,
    is_multiplicative,
    linear_rank,
    multiplicative_functions,
    solve_chi_additive,
    solve_cosine_sine_type,
)
from .semigroup import Involution, Semigroup, square_set

__all__ = [
    "FamilyId",
    "ParamSet",
    "Violation",
    "ConstraintError",
    "Unrealizable",
    "SCALAR_SLOTS",
    "FUNCTION_SLOTS",
    "INNER_FAMILIES",
    "FAMILY_BRANCH",
    "conjugate",
    "branch_of",
    "imaginary_unit",
    "validate_params",
    "construct",
    "sample_params",
]


class FamilyId(str, enum.Enum):
    T41A = "T41A"
    T41B = "T41B"
    T42A_i = "T42A_i"
    T42A_ii = "T42A_ii"
    T42B = "T42B"
    T42C = "T42C"
    T42D = "T42D"
    T42E = "T42E"
    T42F = "T42F"
    T43A = "T43A"
    T43B = "T43B"
    T43C = "T43C"
    T43D = "T43D"
    T43E = "T43E"
    T43F = "T43F"
    T43G = "T43G"
    T43H_reconstructed = "T43H_reconstructed"

    def __str__(self):
        return self.value


INNER_FAMILIES = (FamilyId.T43A, FamilyId.T43B, FamilyId.T43C, FamilyId.T43D)

# dependent-null: rank{fe, he} <= 1 and fe = 0 on S^2
# dependent: rank{fe, he} <= 1 and fe != 0 on S^2
# independent: rank{fe, he} = 2
FAMILY_BRANCH = {
    **{f: "dependent-null" for f in (FamilyId.T41A, FamilyId.T41B)},
    **{f: "dependent" for f in (FamilyId.T42A_i, FamilyId.T42A_ii, FamilyId.T42B,
                                FamilyId.T42C, FamilyId.T42D, FamilyId.T42E, FamilyId.T42F)},
    **{f: "independent" for f in (*INNER_FAMILIES, FamilyId.T43E, FamilyId.T43F,
                                  FamilyId.T43G, FamilyId.T43H_reconstructed)},
}

SCALAR_SLOTS = ("lam", "mu", "eta", "rho", "c", "alpha", "beta", "delta", "a", "b")
# ``m`` doubles as the second even multiplicative function of the
# independent branch; ``f``/``g`` hold the free functions of T41A/T41B.
FUNCTION_SLOTS = ("m", "chi", "chi1", "chi2", "chi3", "phi", "psi", "k", "Phi0", "Psi0", "f", "g")


@dataclass
class ParamSet:
    lam: Scalar | None = None
    mu: Scalar | None = None
    eta: Scalar | None = None
    rho: Scalar | None = None
    c: Scalar | None = None
    alpha: Scalar | None = None
    beta: Scalar | None = None
    delta: Scalar | None = None
    a: Scalar | None = None
    b: Scalar | None = None
    m: Func | None = None
    chi: Func | None = None
    chi1: Func | None = None
    chi2: Func | None = None
    chi3: Func | None = None
    phi: Func | None = None
    psi: Func | None = None
    k: Func | None = None
    Phi0: Func | None = None
    Psi0: Func | None = None
    f: Func | None = None
    g: Func | None = None
    inner: tuple[FamilyId, "ParamSet"] | None = None
    notes: dict = dc_field(default_factory=dict)

    def set_slots(self) -> dict:
        return {f.name: getattr(self, f.name) for f in dc_fields(self)
                if f.name in SCALAR_SLOTS + FUNCTION_SLOTS and getattr(self, f.name) is not None}

    def to_json(self) -> dict:
        out = {"scalars": {}, "functions": {}}
        for name, v in self.set_slots().items():
            if name in SCALAR_SLOTS:
                out["scalars"][name] = str(v)
            else:
                out["functions"][name] = v.render()
        if self.inner is not None:
            out["inner"] = {"family": self.inner[0].value, "params": self.inner[1].to_json()}
        if self.notes:
            out["notes"] = dict(self.notes)
        return out

    @classmethod
    def from_json(cls, field: Field, data: dict) -> "ParamSet":
        kw = {}
        for name, text in data.get("scalars", {}).items():
            kw[name] = Scalar(field, field.parse(text))
        for name, vals in data.get("functions", {}).items():
            kw[name] = Func(field, [field.parse(v) for v in vals])
        if "inner" in data:
            kw["inner"] = (FamilyId(data["inner"]["family"]),
                           cls.from_json(field, data["inner"]["params"]))
        kw["notes"] = dict(data.get("notes", {}))
        return cls(**kw)


@dataclass(frozen=True)
class Violation:
    name: str
    witness: object = None

    def __str__(self):
        return self.name if self.witness is None else f"{self.name} (witness {self.witness})"


class ConstraintError(ValueError):
    def __init__(self, family, violations):
        self.violations = list(violations)
        super().__init__(f"{family}: " + "; ".join(map(str, self.violations)))


class Unrealizable(Exception):
    """No admissible parameters exist (or were found) on this (S, sigma, field)."""


# -- building blocks --------------------------------------------------------


def conjugate(f: Func, g: Func, h: Func, d: Scalar):
    half = d.field(2).inv()
    return f, g - f * (d * d * half) + h * d, h - f * d


def imaginary_unit(field: Field) -> Scalar | None:
    """A fixed square root of -1 (the smaller code over finite fields)."""
    roots = sqrt(field(-1))
    return roots[0] if roots else None


def branch_of(S: Semigroup, sigma: Involution, f: Func, h: Func) -> str:
    fe, he = f.even(sigma), h.even(sigma)
    if linear_rank([fe, he])[0] == 2:
        return "independent"
    return "dependent-null" if fe.zero_on(square_set(S)) else "dependent"


def _t42a_h(p: ParamSet, sigma: Involution, variant: str) -> Func:
    F = p.lam.field
    D = p.lam * p.lam - p.mu * 2
    P, Q = p.m + p.m.star(sigma), p.m - p.m.star(sigma)
    coeff = p.lam / D if variant == "lam/D" else p.lam / (D * 2)
    k = p.k if p.k is not None else Func.zero(F, p.m.n)
    return P * coeff - Q * p.rho + k * p.eta


def _build(family: FamilyId, p: ParamSet, S: Semigroup, sigma: Involution):
    """(f, g, h) for the family.  T42A uses h with coefficient lam/(2D)."""
    Fam = FamilyId
    if family == Fam.T41A:
        z = Func.zero(p.g.field, p.g.n)
        return z, p.g, z
    if family == Fam.T41B:
        half = p.lam.field(2).inv()
        return p.f, p.f * (-(p.lam * p.lam) * half), p.f * p.lam
    if family in (Fam.T42A_i, Fam.T42A_ii):
        F = p.lam.field
        D = p.lam * p.lam - p.mu * 2
        P, Q = p.m + p.m.star(sigma), p.m - p.m.star(sigma)
        k = p.k if p.k is not None else Func.zero(F, p.m.n)
        eta = p.eta if p.eta is not None else F(0)
        two_d = (D * 2).inv()
        f = P * two_d + k
        g = -(P * (p.mu * two_d)) + Q * (p.lam * p.rho) - k * (eta * eta / 2)
        return f, g, _t42a_h(p, sigma, "lam/(2D)")
    if family == Fam.T42B:
        half = p.c.field(2).inv()
        u = (p.chi1 - p.chi2) / (p.c * 2)
        return conjugate(u, (p.chi1 + p.chi2) * half, Func.zero(p.c.field, u.n), -p.lam)
    if family == Fam.T42C:
        return conjugate(p.phi, p.chi, Func.zero(p.lam.field, p.phi.n), -p.lam)
    if family == Fam.T42D:
        i = imaginary_unit(p.lam.field)
        return conjugate(p.psi, p.chi, -(p.phi * i), -p.lam)
    if family == Fam.T42E:
        F = p.c.field
        c2 = p.c * p.c
        P, Q = p.chi1 + p.chi1.star(sigma), p.chi1 - p.chi1.star(sigma)
        f0 = P * (-(c2 * 2)) + p.chi * (c2 * 4)
        g0 = P / 4 + p.chi / 2
        return conjugate(f0, g0, Q * p.c, -p.lam)
    if family == Fam.T42F:
        i = imaginary_unit(p.lam.field)
        z = Func.zero(p.lam.field, p.psi.n)
        return conjugate(p.psi + p.k, z, p.phi * i, -p.lam)
    if family == Fam.T43A:
        return p.psi, p.chi, p.phi
    if family == Fam.T43B:
        c = p.c
        return (p.m - p.chi) * (c * c) - p.phi * c, p.chi, (p.m - p.chi) * c
    if family == Fam.T43C:
        half = p.a.field(2).inv()
        f = (p.chi - p.m) * p.a - p.phi * (p.a * p.b)
        g = (p.m + p.chi) * half - p.phi * (p.b * half)
        return f, g, p.phi
    if family == Fam.T43D:
        al, rho = p.alpha, p.rho
        two_minus = al.field(2) - rho
        f = p.chi1 * (al * rho) + p.chi2 * (al * two_minus) - p.chi3 * (al * 2)
        g = p.chi1 * (rho / 4) + p.chi2 * (two_minus / 4) + p.chi3 / 2
        h = (p.chi1 - p.chi2) / (p.lam * 2)
        return f, g, h
    if family == Fam.T43E:
        inner_family, inner = p.inner
        return conjugate(*_build(inner_family, inner, S, sigma), p.delta)
    if family == Fam.T43F:
        z = Func.zero(p.beta.field, p.Phi0.n)
        return conjugate(p.Psi0 + p.k, z, p.Phi0, p.beta)
    if family == Fam.T43G:
        c = p.c
        z = Func.zero(c.field, p.m.n)
        return conjugate(p.m * (c * c) - p.Phi0 * c + p.k, z, p.m * c, p.beta)
    if family == Fam.T43H_reconstructed:
        a, b = p.a, p.b
        half = a.field(2).inv()
        f = -(p.m * a) - p.Phi0 * (a * b) + p.k
        g = p.m * half - p.Phi0 * (b * half) - p.k * (b * b * half)
        h = p.Phi0 + p.k * b
        return f, g, h
    raise ValueError(f"unknown family {family!r}")


# -- validation -------------------------------------------------------------

_REQUIRED = {
    FamilyId.T41A: ("g",),
    FamilyId.T41B: ("f", "lam"),
    FamilyId.T42A_i: ("m", "lam", "mu", "eta", "rho"),
    FamilyId.T42A_ii: ("m", "lam", "mu", "rho"),
    FamilyId.T42B: ("chi1", "chi2", "c", "lam"),
    FamilyId.T42C: ("chi", "phi", "lam"),
    FamilyId.T42D: ("psi", "chi", "phi", "lam"),
    FamilyId.T42E: ("chi", "chi1", "c", "lam"),
    FamilyId.T42F: ("psi", "phi", "k", "lam"),
    FamilyId.T43A: ("psi", "chi", "phi"),
    FamilyId.T43B: ("m", "chi", "phi", "c"),
    FamilyId.T43C: ("m", "chi", "phi", "a", "b"),
    FamilyId.T43D: ("chi1", "chi2", "chi3", "alpha", "lam", "rho"),
    FamilyId.T43E: ("delta",),
    FamilyId.T43F: ("Phi0", "Psi0", "k", "beta"),
    FamilyId.T43G: ("m", "Phi0", "k", "c", "beta"),
    FamilyId.T43H_reconstructed: ("m", "Phi0", "k", "a", "b"),
}


class _Checker:
    def __init__(self, S: Semigroup, sigma: Involution):
        self.S, self.sigma = S, sigma
        self.out: list[Violation] = []

    def need(self, ok: bool, name: str, witness=None):
        if not ok:
            self.out.append(Violation(name, witness))

    def nonzero(self, v, name: str):
        self.need(not v.is_zero(), f"{name} != 0 required")

    def mult(self, u: Func, name: str):
        self.need(is_multiplicative(u, self.S), f"{name} must be multiplicative")

    def even(self, u: Func, name: str):
        self.need(u.is_even(self.sigma), f"{name} must be sigma-even")

    def odd(self, u: Func, name: str):
        self.need(u.is_odd(self.sigma), f"{name} must be sigma-odd")

    def additive(self, phi: Func, chi: Func, name: str):
        r = residual_sine(self.S, phi, chi)
        self.need(r.zero, f"{name} must be chi-additive", r.witness)

    def zero_additive(self, u: Func, name: str):
        self.need(u.zero_on(square_set(self.S)), f"{name} must vanish on S^2")

    def cs_type(self, psi, chi, phi, name: str, twisted: bool):
        r = residual_cs_type(self.S, self.sigma if twisted else None, psi, chi, phi)
        kind = "(chi, sigma, phi)" if twisted else "(chi, phi)"
        self.need(r.zero, f"{name} must be of cosine-sine type {kind}", r.witness)

    def odd_k(self, k: Func):
        self.zero_additive(k, "k")
        self.odd(k, "k")


def validate_params(family: FamilyId, p: ParamSet, S: Semigroup,
                    sigma: Involution) -> list[Violation]:
    """Every constraint the family places on its parameters; [] means ok."""
    family = FamilyId(family)
    missing = [s for s in _REQUIRED[family] if getattr(p, s) is None]
    if family == FamilyId.T43E and p.inner is None:
        missing.append("inner")
    if missing:
        return [Violation(f"missing parameter {s}") for s in missing]
    slots = p.set_slots()
    fields = {v.field for v in slots.values()}
    if len(fields) > 1:
        return [Violation("parameters live in different fields")]
    F = next(iter(fields)) if fields else None
    bad_len = [n for n, v in slots.items() if isinstance(v, Func) and v.n != S.n]
    if bad_len:
        return [Violation(f"function {n} has the wrong length") for n in bad_len]
    ck = _Checker(S, sigma)
    Fam = FamilyId

    if family == Fam.T41B:
        ck.nonzero(p.f, "f")
        ck.zero_additive(p.f, "f")
    elif family in (Fam.T42A_i, Fam.T42A_ii):
        D = p.lam * p.lam - p.mu * 2
        ck.mult(p.m, "m")
        ck.need(not D.is_zero(), "lambda^2 - 2 mu != 0 required")
        ck.nonzero(p.rho, "rho")
        if not D.is_zero():
            ck.need(p.rho * p.rho * (D * 4) == F(-1), "rho^2 = -1/(4(lambda^2 - 2 mu)) required")
        if family == Fam.T42A_i:
            ck.even(p.m, "m")
            ck.nonzero(p.m, "m")
            if p.k is not None:
                ck.odd_k(p.k)
            e, lam, mu = p.eta, p.lam, p.mu
            opt1 = (e * e - lam * e * 2 + mu * 2).is_zero() and not e.is_zero()
            opt2 = e.is_zero() and mu.is_zero() and not lam.is_zero()
            ck.need(opt1 or opt2, "eta^2 - 2 lambda eta + 2 mu = 0 with eta != 0, "
                                  "or eta = mu = 0 with lambda != 0")
        else:
            ck.need(not p.m.is_even(sigma), "m* != m required")
            ck.need(p.k is None or p.k.is_zero(), "k = 0 required when m* != m")
    elif family == Fam.T42B:
        for n in ("chi1", "chi2"):
            ck.mult(getattr(p, n), n)
            ck.even(getattr(p, n), n)
        ck.need(p.chi1 != p.chi2, "chi1 != chi2 required")
        ck.nonzero(p.c, "c")
    elif family == Fam.T42C:
        ck.mult(p.chi, "chi")
        ck.nonzero(p.chi, "chi")
        ck.even(p.chi, "chi")
        ck.even(p.phi, "phi")
        ck.nonzero(p.phi, "phi")
        ck.additive(p.phi, p.chi, "phi")
    elif family in (Fam.T42D, Fam.T42F):
        chi = p.chi if family == Fam.T42D else Func.zero(F, S.n)
        if family == Fam.T42D:
            ck.mult(chi, "chi")
            ck.even(chi, "chi")
        else:
            ck.odd_k(p.k)
        ck.need(imaginary_unit(F) is not None, "the field needs a square root of -1")
        ck.odd(p.phi, "phi")
        ck.nonzero(p.phi, "phi")
        ck.additive(p.phi, chi, "phi")
        ck.even(p.psi, "psi")
        ck.cs_type(p.psi, chi, p.phi, "psi", twisted=False)
    elif family == Fam.T42E:
        ck.mult(p.chi, "chi")
        ck.even(p.chi, "chi")
        ck.mult(p.chi1, "chi1")
        ck.need(not p.chi1.is_even(sigma), "chi1* != chi1 required")
        ck.need(p.chi != p.chi1, "chi != chi1 required")
        ck.nonzero(p.c, "c")
    elif family in (Fam.T43A, Fam.T43B, Fam.T43C):
        ck.mult(p.chi, "chi")
        ck.nonzero(p.chi, "chi")
        ck.even(p.chi, "chi")
        ck.nonzero(p.phi, "phi")
        ck.even(p.phi, "phi")
        ck.additive(p.phi, p.chi, "phi")
        if family == Fam.T43A:
            ck.nonzero(p.psi, "psi")
            ck.even(p.psi, "psi")
            ck.cs_type(p.psi, p.chi, p.phi, "psi", twisted=False)
        else:
            ck.mult(p.m, "m")
            ck.nonzero(p.m, "m")
            ck.even(p.m, "m")
            ck.need(p.m != p.chi, "m != chi required")
        if family == Fam.T43B:
            ck.nonzero(p.c, "c")
        if family == Fam.T43C:
            ck.nonzero(p.a, "a")
            ck.nonzero(p.b, "b")
            ck.need((p.a * p.b * p.b + 1).is_zero(), "1 + a b^2 = 0 required")
    elif family == Fam.T43D:
        chis = (p.chi1, p.chi2, p.chi3)
        for n, u in zip(("chi1", "chi2", "chi3"), chis):
            ck.mult(u, n)
            ck.even(u, n)
        ck.need(chis[0] != chis[1] and chis[0] != chis[2] and chis[1] != chis[2],
                "chi1, chi2, chi3 must be different")
        for n in ("alpha", "lam", "rho"):
            ck.nonzero(getattr(p, n), n)
        ck.need(p.alpha * p.lam * p.lam * p.rho * (F(2) - p.rho) * 2 == F(1),
                "2 alpha lambda^2 rho (2 - rho) = 1 required")
    elif family == Fam.T43E:
        inner_family, inner = p.inner
        if FamilyId(inner_family) not in INNER_FAMILIES:
            ck.need(False, "inner family must be one of T43A-T43D")
        else:
            ck.out.extend(validate_params(inner_family, inner, S, sigma))
    elif family in (Fam.T43F, Fam.T43G, Fam.T43H_reconstructed):
        ck.nonzero(p.Phi0, "Phi0")
        ck.zero_additive(p.Phi0, "Phi0")
        ck.even(p.Phi0, "Phi0")
        ck.odd_k(p.k)
        if family == Fam.T43F:
            ck.nonzero(p.Psi0, "Psi0")
            ck.even(p.Psi0, "Psi0")
            ck.cs_type(p.Psi0, Func.zero(F, S.n), p.Phi0, "Psi0", twisted=True)
        else:
            ck.mult(p.m, "m")
            ck.nonzero(p.m, "m")
            ck.even(p.m, "m")
        if family == Fam.T43G:
            ck.nonzero(p.c, "c")
        if family == Fam.T43H_reconstructed:
            ck.nonzero(p.a, "a")
            ck.nonzero(p.b, "b")
            ck.need((p.a * p.b * p.b + 1).is_zero(), "1 + a b^2 = 0 required")
    return ck.out


def construct(family: FamilyId, p: ParamSet, S: Semigroup, sigma: Involution,
              check: bool = True) -> SolutionTriple:
    """Build the family's triple and attach its residual.

    For T42A both candidate coefficients of h are tried; the one with zero
    residual is kept and named in ``notes["t42a_variant"]``.
    """
    family = FamilyId(family)
    if check:
        bad = validate_params(family, p, S, sigma)
        if bad:
            raise ConstraintError(family, bad)
    f, g, h = _build(family, p, S, sigma)
    notes = {"family": family.value}
    if family in (FamilyId.T42A_i, FamilyId.T42A_ii):
        r_half = residual_main(S, sigma, f, g, h)
        h_full = _t42a_h(p, sigma, "lam/D")
        r_full = residual_main(S, sigma, f, g, h_full)
        if r_half.zero and r_full.zero:
            notes["t42a_variant"] = "both"
        elif r_half.zero:
            notes["t42a_variant"] = "lam/(2D)"
        elif r_full.zero:
            notes["t42a_variant"] = "lam/D"
            h = h_full
        else:
            raise RuntimeError("neither T42A variant of h solves the equation")
        res = r_full if notes["t42a_variant"] == "lam/D" else r_half
        return SolutionTriple(f, g, h, sigma, res, notes)
    return SolutionTriple(f, g, h, sigma, residual_main(S, sigma, f, g, h), notes)


# -- sampling ---------------------------------------------------------------


class _Pools:
    """Cached building blocks for one (S, sigma, field)."""

    _cache: dict = {}

    def __init__(self, S: Semigroup, sigma: Involution, field: Field):
        self.S, self.sigma, self.field = S, sigma, field
        self.mult = multiplicative_functions(S, field)
        self.even_mult = [m for m in self.mult if m.is_even(sigma)]
        self.nz_even_mult = [m for m in self.even_mult if not m.is_zero()]
        self.twisted_mult = [m for m in self.mult if not m.is_even(sigma)]
        self.i = imaginary_unit(field)
        self.zero = Func.zero(field, S.n)
        self._additive: dict = {}
        self._types: dict = {}

    @classmethod
    def get(cls, S, sigma, field) -> "_Pools":
        key = (S, sigma, field)
        if key not in cls._cache:
            cls._cache[key] = cls(S, sigma, field)
        return cls._cache[key]

    def additive(self, chi: Func, parity: int) -> list[Func]:
        """Basis of chi-additive functions with the given sigma-parity."""
        key = (chi.values.tobytes(), parity)
        if key not in self._additive:
            self._additive[key] = solve_chi_additive(self.S, chi, self.sigma, parity)
        return self._additive[key]

    def cs_type(self, chi: Func, phi: Func, twisted: bool) -> AffineSpace:
        """sigma-even psi of type (chi, phi) or (chi, sigma, phi)."""
        key = (chi.values.tobytes(), phi.values.tobytes(), twisted)
        if key not in self._types:
            self._types[key] = solve_cosine_sine_type(
                self.S, self.sigma if twisted else None, chi, phi, parity=1,
                parity_sigma=self.sigma)
        return self._types[key]


class _Draw:
    def __init__(self, pools: _Pools, rng: np.random.Generator):
        self.P, self.rng, self.F = pools, rng, pools.field

    def scalar(self, nonzero: bool = False) -> Scalar:
        for _ in range(64):
            s = self.F.element(self.F.random(self.rng))
            if not (nonzero and s.is_zero()):
                return s
        raise Unrealizable("could not draw a nonzero scalar")

    def choice(self, items, what: str):
        if not items:
            raise Unrealizable(f"no {what} on this semigroup/sigma/field")
        return items[int(self.rng.integers(len(items)))]

    def span(self, basis, what: str, nonzero: bool = True) -> Func:
        if not basis:
            if nonzero:
                raise Unrealizable(f"no nonzero {what}")
            return self.P.zero
        B = np.vstack([b.values for b in basis])
        for _ in range(64):
            coeffs = self.F.asarray(self.F.random(self.rng, size=len(basis)))
            u = Func(self.F, self.F.dot(coeffs, B))
            if not (nonzero and u.is_zero()):
                return u
        raise Unrealizable(f"could not draw a nonzero {what}")

    def affine(self, space: AffineSpace, what: str, nonzero: bool = True) -> Func:
        if space.is_empty:
            raise Unrealizable(f"no {what}")
        if nonzero and not space.basis and space.particular.is_zero():
            raise Unrealizable(f"only the zero {what}")
        for _ in range(64):
            u = space.sample(self.rng)
            if not (nonzero and u.is_zero()):
                return u
        raise Unrealizable(f"could not draw a nonzero {what}")

    def k(self) -> Func:
        return self.span(self.P.additive(self.P.zero, -1), "odd 0-additive k", nonzero=False)

    def rho_for(self, D: Scalar) -> Scalar | None:
        roots = sqrt(-(D * 4).inv())
        return self.choice(list(roots), "rho") if roots else None


def _draw_once(family: FamilyId, d: _Draw) -> ParamSet:
    Fam, P, F = FamilyId, d.P, d.F
    sigma = P.sigma
    if family == Fam.T41A:
        return ParamSet(g=Func(F, F.random(d.rng, size=P.S.n)))
    if family == Fam.T41B:
        return ParamSet(f=d.span(P.additive(P.zero, 0), "function vanishing on S^2"),
                        lam=d.scalar())
    if family == Fam.T42A_i:
        m = d.choice(P.nz_even_mult, "nonzero even multiplicative m")
        lam = d.scalar(nonzero=True)   # lam = 0 cannot tell the two h variants apart
        if d.rng.integers(2):
            eta = d.scalar(nonzero=True)
            if eta == lam:
                raise _Retry
            mu = (lam * eta * 2 - eta * eta) / 2
        else:
            eta, mu = F(0), F(0)
        rho = d.rho_for(lam * lam - mu * 2)
        if rho is None:
            raise Unrealizable("-1/(4(lambda^2 - 2 mu)) is never a square here")
        return ParamSet(m=m, lam=lam, mu=mu, eta=eta, rho=rho, k=d.k())
    if family == Fam.T42A_ii:
        m = d.choice(P.twisted_mult, "multiplicative m with m* != m")
        lam, mu = d.scalar(nonzero=True), d.scalar()
        D = lam * lam - mu * 2
        if D.is_zero():
            raise _Retry
        rho = d.rho_for(D)
        if rho is None:
            raise _Retry
        return ParamSet(m=m, lam=lam, mu=mu, rho=rho, eta=F(0))
    if family == Fam.T42B:
        chi1 = d.choice(P.even_mult, "even multiplicative function")
        chi2 = d.choice([u for u in P.even_mult if u != chi1], "second even multiplicative function")
        return ParamSet(chi1=chi1, chi2=chi2, c=d.scalar(nonzero=True), lam=d.scalar())
    if family == Fam.T42C:
        chi = d.choice([u for u in P.nz_even_mult if P.additive(u, 1)],
                       "nonzero even chi with a nonzero even chi-additive function")
        return ParamSet(chi=chi, phi=d.span(P.additive(chi, 1), "even chi-additive phi"),
                        lam=d.scalar())
    if family in (Fam.T42D, Fam.T42F):
        if P.i is None:
            raise Unrealizable("no square root of -1 in the field")
        if family == Fam.T42D:
            chi = d.choice([u for u in P.even_mult if P.additive(u, -1)],
                           "even chi with a nonzero odd chi-additive function")
        else:
            chi = P.zero
        phi = d.span(P.additive(chi, -1), "odd chi-additive phi")
        # psi of type (chi, phi); the (chi, sigma, phi) reading is tried too
        variants = {}
        for twisted in (False, True):
            try:
                variants[twisted] = d.affine(P.cs_type(chi, phi, twisted), "even psi", nonzero=False)
            except Unrealizable:
                pass
        if not variants:
            raise _Retry
        extra = {"chi": chi} if family == Fam.T42D else {"k": d.k()}
        lam = d.scalar()
        chosen = None
        outcome = {}
        for twisted, psi in variants.items():
            trial = ParamSet(psi=psi, phi=phi, lam=lam, **extra)
            f, g, h = _build(family, trial, P.S, sigma)
            outcome[twisted] = residual_main(P.S, sigma, f, g, h).zero
            if outcome[twisted] and chosen is None:
                chosen = trial
        if chosen is None:
            raise _Retry
        chosen.notes["psi_type"] = ("(chi, phi)" if outcome.get(False)
                                    else "(chi, sigma, phi)")
        chosen.notes["psi_type_results"] = {("(chi, sigma, phi)" if t else "(chi, phi)"): ok
                                            for t, ok in outcome.items()}
        return chosen
    if family == Fam.T42E:
        chi1 = d.choice(P.twisted_mult, "multiplicative chi1 with chi1* != chi1")
        chi = d.choice([u for u in P.even_mult if u != chi1], "even multiplicative chi")
        return ParamSet(chi=chi, chi1=chi1, c=d.scalar(nonzero=True), lam=d.scalar())
    if family in (Fam.T43A, Fam.T43B, Fam.T43C):
        chi = d.choice([u for u in P.nz_even_mult if P.additive(u, 1)],
                       "nonzero even chi with a nonzero even chi-additive function")
        phi = d.span(P.additive(chi, 1), "even chi-additive phi")
        if family == Fam.T43A:
            psi = d.affine(P.cs_type(chi, phi, False), "even psi of type (chi, phi)")
            return ParamSet(psi=psi, chi=chi, phi=phi)
        m = d.choice([u for u in P.nz_even_mult if u != chi], "second nonzero even multiplicative")
        if family == Fam.T43B:
            return ParamSet(m=m, chi=chi, phi=phi, c=d.scalar(nonzero=True))
        b = d.scalar(nonzero=True)
        return ParamSet(m=m, chi=chi, phi=phi, a=-(b * b).inv(), b=b)
    if family == Fam.T43D:
        # the zero function is admitted, so at most one of the three vanishes
        pool = P.even_mult
        if len(pool) < 3:
            raise Unrealizable("fewer than three even multiplicative functions")
        idx = d.rng.choice(len(pool), size=3, replace=False)
        chi1, chi2, chi3 = (pool[int(j)] for j in idx)
        lam, rho = d.scalar(nonzero=True), d.scalar(nonzero=True)
        if rho == F(2):
            raise _Retry
        alpha = (lam * lam * rho * (F(2) - rho) * 2).inv()
        return ParamSet(chi1=chi1, chi2=chi2, chi3=chi3, alpha=alpha, lam=lam, rho=rho)
    if family == Fam.T43E:
        order = list(INNER_FAMILIES)
        d.rng.shuffle(order)
        for inner_family in order:
            try:
                inner = _draw_valid(inner_family, d)
            except Unrealizable:
                continue
            return ParamSet(delta=d.scalar(), inner=(inner_family, inner))
        raise Unrealizable("none of T43A-T43D is realizable")
    if family in (Fam.T43F, Fam.T43G, Fam.T43H_reconstructed):
        Phi0 = d.span(P.additive(P.zero, 1), "even 0-additive Phi0")
        k = d.k()
        if family == Fam.T43F:
            Psi0 = d.affine(P.cs_type(P.zero, Phi0, True), "even Psi0 of type (0, sigma, Phi0)")
            return ParamSet(Phi0=Phi0, Psi0=Psi0, k=k, beta=d.scalar())
        m = d.choice(P.nz_even_mult, "nonzero even multiplicative function")
        if family == Fam.T43G:
            return ParamSet(m=m, Phi0=Phi0, k=k, c=d.scalar(nonzero=True), beta=d.scalar())
        b = d.scalar(nonzero=True)
        return ParamSet(m=m, Phi0=Phi0, k=k, a=-(b * b).inv(), b=b)
    raise ValueError(f"unknown family {family!r}")


class _Retry(Exception):
    pass


_ATTEMPTS = 200
_DEAD_ENDS = 16


def _draw_valid(family: FamilyId, d: _Draw) -> ParamSet:
    """Rejection-sample until the triple lands in the family's branch."""
    P = d.P
    want = FAMILY_BRANCH[family]
    dead_ends = 0
    for _ in range(_ATTEMPTS):
        try:
            p = _draw_once(family, d)
        except _Retry:
            continue
        except Unrealizable:
            # a random choice may lead nowhere; give up only if it keeps happening
            dead_ends += 1
            if dead_ends >= _DEAD_ENDS:
                raise
            continue
        f, _, h = _build(family, p, P.S, P.sigma)
        if branch_of(P.S, P.sigma, f, h) == want:
            return p
    raise Unrealizable(f"no draw landed in the {want} branch after {_ATTEMPTS} attempts")


def sample_params(family: FamilyId, S: Semigroup, sigma: Involution, field: Field,
                  seed: int | np.random.Generator = 0) -> ParamSet:
    """Random admissible parameters; raises :class:`Unrealizable` when none exist.

    The draw also respects the family's branch (rank of {fe, he} and
    whether fe vanishes on S^2), so classification round-trips are meaningful.
    """
    family = FamilyId(family)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    d = _Draw(_Pools.get(S, sigma, field), rng)
    return _draw_valid(family, d)
