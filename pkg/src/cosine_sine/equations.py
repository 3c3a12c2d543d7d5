"""Residuals of the four equations and checkers for the structural lemmas.

Notation: ``f* = f o sigma``, ``fe``/``fo`` the even/odd parts.  The main
equation is

    f(x sigma(y)) = f(x)g(y) + g(x)f(y) + h(x)h(y).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from . import linalg
from .fields import Field
from .functions import (
    Func,
    PreconditionError,
    is_central,
    is_multiplicative,
    linear_rank,
    multiplicative_functions,
    solve_chi_additive,
)
from .semigroup import Involution, Semigroup, square_set

__all__ = [
    "Residual",
    "SolutionTriple",
    "LemmaEntry",
    "LemmaReport",
    "residual_main",
    "residual_sine",
    "residual_special_cs",
    "residual_cs_type",
    "check_lemma33",
    "check_lemma34_37",
    "check_prop31",
    "Prop32Fit",
    "check_prop32",
]


@dataclass(frozen=True)
class Residual:
    """Outcome of a residual evaluation over all n^2 pairs.

    ``max_abs`` is only meaningful over complex doubles; over finite fields
    ``zero`` is exact.  ``witness`` is the first violating pair.
    """

    zero: bool
    violations: int
    max_abs: float | None
    witness: tuple[int, int] | None

    def __bool__(self):
        return self.zero


def _sym(field: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """a(x)b(y) + b(x)a(y)."""
    return field.add(field.mul(a[:, None], b[None, :]), field.mul(b[:, None], a[None, :]))


def _outer(field: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return field.mul(a[:, None], b[None, :])


def _residual(field: Field, lhs: np.ndarray, rhs: np.ndarray) -> Residual:
    diff = field.sub(lhs, rhs)
    bad = ~field.eq(lhs, rhs)
    witness = None
    if bad.any():
        x, y = np.argwhere(bad)[0][:2]
        witness = (int(x), int(y))
    max_abs = None if field.is_finite else float(np.abs(diff).max(initial=0.0))
    return Residual(not bad.any(), int(bad.sum()), max_abs, witness)


def _same(*fs: Func):
    for f in fs[1:]:
        fs[0]._check(f)


def residual_main(S: Semigroup, sigma: Involution, f: Func, g: Func, h: Func) -> Residual:
    _same(f, g, h)
    if f.n != S.n or sigma.n != S.n:
        raise ValueError("dimension mismatch between functions, semigroup and sigma")
    F = f.field
    lhs = f.values[S.table[:, sigma.perm]]
    rhs = F.add(_sym(F, f.values, g.values), _outer(F, h.values, h.values))
    return _residual(F, lhs, rhs)


def residual_sine(S: Semigroup, phi: Func, chi: Func) -> Residual:
    """phi(xy) = phi(x)chi(y) + chi(x)phi(y)."""
    _same(phi, chi)
    F = phi.field
    return _residual(F, phi.values[S.table], _sym(F, phi.values, chi.values))


def residual_special_cs(S: Semigroup, f: Func, chi: Func, phi: Func) -> Residual:
    """f(xy) = f(x)chi(y) + chi(x)f(y) + phi(x)phi(y)."""
    return residual_cs_type(S, None, f, chi, phi)


def residual_cs_type(S: Semigroup, sigma: Involution | None, psi: Func, chi: Func,
                     phi: Func) -> Residual:
    """psi(x s(y)) = psi(x)chi(y) + chi(x)psi(y) + phi(x)phi(y), s = sigma or id."""
    _same(psi, chi, phi)
    F = psi.field
    perm = np.arange(S.n) if sigma is None else sigma.perm
    lhs = psi.values[S.table[:, perm]]
    rhs = F.add(_sym(F, psi.values, chi.values), _outer(F, phi.values, phi.values))
    return _residual(F, lhs, rhs)


@dataclass(frozen=True)
class SolutionTriple:
    f: Func
    g: Func
    h: Func
    sigma: Involution
    residual: Residual | None = None
    notes: dict = dc_field(default_factory=dict, compare=False)

    def __post_init__(self):
        _same(self.f, self.g, self.h)
        if self.sigma.n != self.f.n:
            raise ValueError("sigma and functions disagree on the semigroup order")

    @property
    def field(self) -> Field:
        return self.f.field

    def with_residual(self, S: Semigroup) -> "SolutionTriple":
        r = residual_main(S, self.sigma, self.f, self.g, self.h)
        return SolutionTriple(self.f, self.g, self.h, self.sigma, r, dict(self.notes))

    def lift(self, field: Field) -> "SolutionTriple":
        return SolutionTriple(self.f.lift(field), self.g.lift(field), self.h.lift(field),
                              self.sigma, self.residual, dict(self.notes))

    def parts(self):
        """(fe, fo, ge, go, he, ho)."""
        s = self.sigma
        return (self.f.even(s), self.f.odd(s), self.g.even(s), self.g.odd(s),
                self.h.even(s), self.h.odd(s))

    def key(self) -> tuple:
        return (self.f.key(), self.g.key(), self.h.key())

    def to_json(self) -> dict:
        return {"f": self.f.render(), "g": self.g.render(), "h": self.h.render(),
                "sigma": self.sigma.perm.tolist()}


def _require_solution(S: Semigroup, t: SolutionTriple):
    r = residual_main(S, t.sigma, t.f, t.g, t.h)
    if not r.zero:
        raise PreconditionError("triple is not a solution of the main equation", r.witness)


# -- lemma reports ----------------------------------------------------------


@dataclass
class LemmaEntry:
    lemma: str
    hypotheses_held: bool
    conclusion_held: bool | None
    witnesses: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        return {"lemma": self.lemma, "hypotheses_held": self.hypotheses_held,
                "conclusion_held": self.conclusion_held, "witnesses": self.witnesses}


@dataclass
class LemmaReport:
    entries: list[LemmaEntry]

    @property
    def failures(self) -> list[LemmaEntry]:
        return [e for e in self.entries if e.hypotheses_held and e.conclusion_held is False]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> list[dict]:
        return [e.to_json() for e in self.entries]


def _first_bad(mask: np.ndarray):
    if not mask.any():
        return None
    return [int(i) for i in np.argwhere(mask)[0]]


def check_lemma33(S: Semigroup, sigma: Involution, triple: SolutionTriple) -> LemmaReport:
    """The four unconditional identities every solution satisfies."""
    _require_solution(S, triple)
    F = triple.field
    fe, fo, ge, go, he, ho = (u.values for u in triple.parts())
    T, Ts = S.table, S.table[:, sigma.perm]
    entries = []

    ok, w = is_central(Func(F, fe), S)
    entries.append(LemmaEntry("3.3(1)", True, ok, {} if ok else {"pair": list(w)}))

    bad = ~F.is_zero(F.add(fo[T], fo[T.T]))
    entries.append(LemmaEntry("3.3(2)", True, not bad.any(),
                              {} if not bad.any() else {"pair": _first_bad(bad)}))

    bad = ~F.is_zero(fo[S.triple_products()])
    entries.append(LemmaEntry("3.3(3)", True, not bad.any(),
                              {} if not bad.any() else {"triple": _first_bad(bad)}))

    two = F.from_int(2)
    lhs_o = F.add(fo[T], fo[Ts])
    rhs_o = F.mul(two, F.add(F.add(_outer(F, fo, ge), _outer(F, go, fe)), _outer(F, ho, he)))
    lhs_e = F.add(fe[T], fe[Ts])
    rhs_e = F.mul(two, F.add(_sym(F, fe, ge), _outer(F, he, he)))
    bad_o = ~F.eq(lhs_o, rhs_o)
    bad_e = ~F.eq(lhs_e, rhs_e)
    ok4 = not (bad_o.any() or bad_e.any())
    wit = {}
    if bad_o.any():
        wit["odd_identity_pair"] = _first_bad(bad_o)
    if bad_e.any():
        wit["even_identity_pair"] = _first_bad(bad_e)
    entries.append(LemmaEntry("3.3(4)", True, ok4, wit))
    return LemmaReport(entries)


def _fit_scalar(F: Field, target: Func, base: Func):
    """c with target = c*base, or None.  base must be nonzero for uniqueness."""
    c = linalg.fit(F, target.values, base.values[None, :])
    return None if c is None else F.element(c[0])


def _fit_pair(F: Field, target: Func, u: Func, v: Func):
    c = linalg.fit(F, target.values, np.vstack([u.values, v.values]))
    return None if c is None else (F.element(c[0]), F.element(c[1]))


def check_lemma34_37(S: Semigroup, sigma: Involution, triple: SolutionTriple) -> LemmaReport:
    """Detect the hypotheses of the conditional checks and verify their conclusions."""
    _require_solution(S, triple)
    F = triple.field
    f, g, h = triple.f, triple.g, triple.h
    fe, fo, ge, go, he, ho = triple.parts()
    T, Ts = S.table, S.table[:, sigma.perm]
    sq = square_set(S)
    half = F(2).inv()
    entries = []

    # f != 0 and f odd
    hyp = (not f.is_zero()) and f.is_odd(sigma)
    e = LemmaEntry("3.4", hyp, None)
    if hyp:
        lam = _fit_scalar(F, h, f)
        parts = {
            "g_odd": g.is_odd(sigma),
            "h_odd": h.is_odd(sigma),
            "f_zero_on_S2": f.zero_on(sq),
            "h_eq_lambda_f": lam is not None,
            "g_eq_-lambda^2/2_f": lam is not None and g == f * (-(lam * lam) * half),
        }
        e.conclusion_held = all(parts.values())
        e.witnesses = {"checks": parts, "lambda": None if lam is None else str(lam)}
    entries.append(e)

    fe_nz = not fe.is_zero()
    fe_nz_S2 = not fe.zero_on(sq)
    lam = _fit_scalar(F, he, fe) if fe_nz else None

    # fe != 0 on S^2 and he = lambda fe
    hyp = fe_nz_S2 and lam is not None
    e = LemmaEntry("3.5", hyp, None)
    if hyp:
        mu = _fit_scalar(F, go + ho * lam, fo) if not fo.is_zero() else (
            F(0) if (go + ho * lam).is_zero() else None)
        case1 = case2 = False
        if mu is not None:
            G = ge + fe * (lam * lam * half)
            lhs = fe.values[T]
            rhs = F.sub(_sym(F, fe.values, G.values), _outer(F, ho.values, ho.values))
            case1 = fo.is_zero() and go == -(ho * lam) and F.all_eq(lhs, rhs)
            mu2 = _fit_scalar(F, -ge, fe)
            # one mu serves both identities unless fo = 0 leaves it free
            if mu2 is not None and (fo.is_zero() or mu2 == mu):
                D = lam * lam - mu2 * 2
                c13 = F.all_zero(fo.values[T])
                lhs14 = F.add(fe.values[T], fe.values[T.T[:, sigma.perm]])
                rhs14 = F.mul(F.mul(F.from_int(2), D.value), _outer(F, fe.values, fe.values))
                c14 = F.all_eq(lhs14, rhs14)
                rhs140 = F.mul(D.value, _outer(F, fe.values, fe.values))
                rhs140 = F.add(rhs140, F.mul((mu2 * 2).value, _outer(F, fo.values, fo.values)))
                rhs140 = F.sub(rhs140, F.mul(lam.value, _sym(F, fo.values, ho.values)))
                rhs140 = F.add(rhs140, _outer(F, ho.values, ho.values))
                c140 = F.all_eq(fe.values[Ts], rhs140)
                case2 = c13 and c14 and c140
        e.conclusion_held = mu is not None and (case1 or case2)
        e.witnesses = {"lambda": str(lam), "mu": None if mu is None else str(mu),
                       "case1": bool(case1), "case2": bool(case2)}
    entries.append(e)

    # fe != 0, fe = 0 on S^2, he = lambda fe
    hyp = fe_nz and not fe_nz_S2 and lam is not None
    e = LemmaEntry("3.6", hyp, None)
    if hyp:
        l2h = lam * lam * half
        k = go - fo * l2h + ho * lam
        c1 = ge == -(fe * l2h)
        c2 = F.all_eq(fo.values[Ts], _sym(F, k.values, fe.values))
        c3 = F.all_zero(F.add(_sym(F, fo.values, go.values), _outer(F, ho.values, ho.values)))
        e.conclusion_held = bool(c1 and c2 and c3)
        e.witnesses = {"lambda": str(lam), "parts": {"1": bool(c1), "2": bool(c2), "3": bool(c3)}}
    entries.append(e)

    # fe, he independent
    r, _ = linear_rank([fe, he])
    hyp = r == 2
    e = LemmaEntry("3.7", hyp, None)
    if hyp:
        # even triples with {f, g, h} dependent and 2 alpha != beta^2 also
        # reach case 1, so independence is reported instead of required
        case1 = (f.is_even(sigma) and g.is_even(sigma) and h.is_even(sigma)
                 and F.all_eq(f.values[T], F.add(_sym(F, f.values, g.values),
                                                  _outer(F, h.values, h.values))))
        independent = linear_rank([f, g, h])[0] == 3
        case2 = False
        beta2 = None
        if linear_rank([fe, ge, he])[0] < 3:
            ab = _fit_pair(F, ge, fe, he)
            if ab is not None:
                a, beta2 = ab
                b2h = beta2 * beta2 * half
                case2 = (a == b2h
                         and F.all_eq(fe.values[T], F.add(_sym(F, fe.values, ge.values),
                                                           _outer(F, he.values, he.values)))
                         and F.all_zero(fo.values[T])
                         and go == -(fo * b2h) and ho == -(fo * beta2))
        case3 = False
        beta3 = None
        ab = _fit_pair(F, g, f, h)
        if ab is not None:
            a, beta3 = ab
            l = f * beta3 + h
            case3 = (a == beta3 * beta3 * half
                     and not (fo * beta3 + ho).is_zero()
                     and F.all_eq(f.values[Ts], _outer(F, l.values, l.values)))
        e.conclusion_held = bool(case1 or case2 or case3)
        e.witnesses = {"case1": bool(case1), "case2": bool(case2), "case3": bool(case3),
                       "dependent_even": bool(case1 and not independent and not (case2 or case3)),
                       "beta2": None if beta2 is None else str(beta2),
                       "beta3": None if beta3 is None else str(beta3)}
    entries.append(e)
    return LemmaReport(entries)


# -- propositions -----------------------------------------------------------


def check_prop31(S: Semigroup, field: Field) -> list[dict]:
    """Search for nonzero chi-additive functions inside span(multiplicative).

    For every nonzero multiplicative chi the whole chi-additive space is
    intersected with the span of all multiplicative functions; a nonzero
    intersection vector is a certificate.
    """
    if not field.is_finite:
        raise ValueError("check_prop31 needs a finite field")
    mults = multiplicative_functions(S, field)
    M = np.vstack([m.values for m in mults])
    certs = []
    for chi in mults:
        if chi.is_zero():
            continue
        basis = solve_chi_additive(S, chi)
        if not basis:
            continue
        A = np.vstack([b.values for b in basis])
        # sum a_i A_i - sum c_j M_j = 0
        ker = linalg.nullspace(field, np.vstack([A, field.neg(M)]).T)
        for vec in ker:
            a = vec[: len(basis)]
            if field.all_zero(a):
                continue
            phi = field.dot(a, A)
            certs.append({
                "chi": chi.render(),
                "phi": [field.render(v) for v in phi.tolist()],
                "coefficients": [field.render(v) for v in vec[len(basis):].tolist()],
                "multiplicative": [m.render() for m in mults],
            })
            break
    return certs


@dataclass
class Prop32Fit:
    case: int | None
    inner_case: int | None = None
    params: dict = dc_field(default_factory=dict)


def check_prop32(S: Semigroup, triple: SolutionTriple,
                 mults: list[Func] | None = None) -> Prop32Fit:
    """Fit a sigma = id solution with independent f, h to one of three shapes.

    Shape (3) is the delta-conjugate of (1)/(2); delta and alpha come from
    writing g - chi in the basis {f, h} for each multiplicative chi, beta
    from a linear fit (case 1: against the multiplicative list; case 2: the
    sine law is linear in beta).
    """
    if not triple.sigma.is_identity():
        raise PreconditionError("check_prop32 needs sigma = identity")
    _require_solution(S, triple)
    f, g, h = triple.f, triple.g, triple.h
    if linear_rank([f, h])[0] < 2:
        raise PreconditionError("f and h must be linearly independent")
    F = triple.field
    half = F(2).inv()
    mults = multiplicative_functions(S, F) if mults is None else mults
    T = S.table
    for chi in mults:
        ab = _fit_pair(F, g - chi, f, h)
        if ab is None:
            continue
        a, delta = ab
        alpha = a - delta * delta * half
        Ff, Hf = f, h + f * delta
        G = g - f * (delta * delta * half) - h * delta
        inner = None
        params = {"chi": chi.render(), "delta": str(delta)}
        if alpha.is_zero():
            for m in mults:
                beta = _fit_scalar(F, m - chi, Hf)
                if beta is None:
                    continue
                phi = Hf - Ff * beta
                if residual_sine(S, phi, chi).zero:
                    inner = 1
                    params.update({"beta": str(beta), "m": m.render(), "phi": phi.render()})
                    break
        else:
            K = chi + Ff * (alpha * 2)
            target = F.sub(Hf.values[T], _sym(F, Hf.values, K.values)).ravel()
            base = _outer(F, Hf.values, Hf.values).ravel()
            c = linalg.fit(F, target, base[None, :])
            if c is not None and is_multiplicative(G - Ff * alpha, S):
                inner = 2
                params.update({"alpha": str(alpha), "beta": F.render(c[0].item())})
        if inner is not None:
            case = inner if delta.is_zero() else 3
            return Prop32Fit(case, inner, params)
    return Prop32Fit(None)
