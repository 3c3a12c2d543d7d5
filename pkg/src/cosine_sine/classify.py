"""Map a solution triple back to the family that produces it.

The triple's branch is fixed by rank{fe, he} and by whether fe vanishes on
S^2.  Inside a branch each family is tried in a fixed order.  Parameters are
recovered algebraically (linear fits, the multiplicative-function list,
square roots) and every candidate is accepted only if ``validate_params``
passes and ``construct`` reproduces the triple exactly.

Over GF(p) a failed classification is retried with the triple lifted to
GF(p^2), because some families need square roots (rho, i) that only exist
in the extension.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterator

from . import linalg
from .equations import SolutionTriple, residual_main
from .families import (
    FAMILY_BRANCH,
    INNER_FAMILIES,
    FamilyId,
    ParamSet,
    _Pools,
    branch_of,
    conjugate,
    construct,
    validate_params,
)
from .fields import Field, PrimeField, Scalar, sqrt
from .functions import Func, PreconditionError
from .semigroup import Involution, Semigroup

__all__ = ["CLASSIFY_ORDER", "Classification", "classify"]

Fam = FamilyId

CLASSIFY_ORDER = (
    Fam.T41A, Fam.T41B,
    Fam.T42B, Fam.T42C, Fam.T42D, Fam.T42E, Fam.T42F, Fam.T42A_i, Fam.T42A_ii,
    Fam.T43A, Fam.T43B, Fam.T43C, Fam.T43D, Fam.T43E, Fam.T43F, Fam.T43G,
    Fam.T43H_reconstructed,
)


@dataclass
class Classification:
    branch: str
    family: FamilyId | None = None
    params: ParamSet | None = None
    field: Field | None = None
    lifted: bool = False
    matches: list = dc_field(default_factory=list)
    failed_fits: dict = dc_field(default_factory=dict)

    @property
    def classified(self) -> bool:
        return self.family is not None

    def certificate(self, S: Semigroup, triple: SolutionTriple) -> dict:
        return {
            "table": S.table.tolist(),
            "sigma": triple.sigma.perm.tolist(),
            "field": triple.field.spec,
            "triple": {"f": triple.f.render(), "g": triple.g.render(), "h": triple.h.render()},
            "branch": self.branch,
            "failed_fits": dict(self.failed_fits),
        }

    def to_json(self) -> dict:
        out = {"branch": self.branch, "family": None if self.family is None else self.family.value,
               "lifted": self.lifted}
        if self.params is not None:
            out["params"] = self.params.to_json()
            out["params_field"] = self.field.spec
        if len(self.matches) > 1:
            out["overlaps"] = [m.value for m, _ in self.matches]
        return out


class _Ctx:
    """Everything the fitters share for one (S, sigma, triple, field)."""

    def __init__(self, S: Semigroup, sigma: Involution, f: Func, g: Func, h: Func):
        self.S, self.sigma = S, sigma
        self.f, self.g, self.h = f, g, h
        self.F = f.field
        self.P = _Pools.get(S, sigma, self.F)
        self.half = self.F(2).inv()
        self.zero = Func.zero(self.F, S.n)

    def scalar(self, raw) -> Scalar:
        return Scalar(self.F, raw.item() if hasattr(raw, "item") else raw)

    def fit1(self, target: Func, u: Func) -> Scalar | None:
        """c with target = c u (u != 0)."""
        if u.is_zero():
            return None
        c = linalg.fit(self.F, target.values, u.values[None, :])
        return None if c is None else self.scalar(c[0])

    def fit2(self, target: Func, u: Func, v: Func):
        c = linalg.fit(self.F, target.values, [u.values, v.values])
        return None if c is None else (self.scalar(c[0]), self.scalar(c[1]))

    def reproduces(self, family: FamilyId, p: ParamSet) -> bool:
        if validate_params(family, p, self.S, self.sigma):
            return False
        t = construct(family, p, self.S, self.sigma, check=False)
        return t.f == self.f and t.g == self.g and t.h == self.h

    def sub(self, f: Func, g: Func, h: Func) -> "_Ctx":
        return _Ctx(self.S, self.sigma, f, g, h)


# -- fitters: each yields candidate ParamSets ------------------------------


def _fit_t41a(c: _Ctx) -> Iterator[ParamSet]:
    if c.f.is_zero() and c.h.is_zero():
        yield ParamSet(g=c.g)


def _fit_t41b(c: _Ctx) -> Iterator[ParamSet]:
    lam = c.fit1(c.h, c.f)
    if lam is not None:
        yield ParamSet(f=c.f, lam=lam)


def _dependent_lambda(c: _Ctx) -> Scalar | None:
    return c.fit1(c.h.even(c.sigma), c.f.even(c.sigma))


def _undo(c: _Ctx, lam: Scalar):
    """Undo the C_{-lam} wrapper every dependent-branch family carries."""
    return conjugate(c.f, c.g, c.h, lam)


def _fit_t42b(c: _Ctx) -> Iterator[ParamSet]:
    lam = _dependent_lambda(c)
    if lam is None:
        return
    F0, G0, H0 = _undo(c, lam)
    if not H0.is_zero():
        return
    for chi1 in c.P.even_mult:
        cc = c.fit1(chi1 - G0, F0)
        if cc is None or cc.is_zero():
            continue
        yield ParamSet(chi1=chi1, chi2=G0 * 2 - chi1, c=cc, lam=lam)


def _fit_t42c(c: _Ctx) -> Iterator[ParamSet]:
    lam = _dependent_lambda(c)
    if lam is None:
        return
    F0, G0, H0 = _undo(c, lam)
    if H0.is_zero():
        yield ParamSet(phi=F0, chi=G0, lam=lam)


def _fit_t42d(c: _Ctx) -> Iterator[ParamSet]:
    lam, i = _dependent_lambda(c), c.P.i
    if lam is None or i is None:
        return
    F0, G0, H0 = _undo(c, lam)
    yield ParamSet(psi=F0, chi=G0, phi=H0 * i, lam=lam)


def _fit_t42e(c: _Ctx) -> Iterator[ParamSet]:
    lam = _dependent_lambda(c)
    if lam is None:
        return
    F0, G0, H0 = _undo(c, lam)
    for chi1 in c.P.twisted_mult:
        Q = chi1 - chi1.star(c.sigma)
        cc = c.fit1(H0, Q)
        if cc is None or cc.is_zero():
            continue
        P = chi1 + chi1.star(c.sigma)
        yield ParamSet(chi=G0 * 2 - P * c.half, chi1=chi1, c=cc, lam=lam)


def _fit_t42f(c: _Ctx) -> Iterator[ParamSet]:
    lam, i = _dependent_lambda(c), c.P.i
    if lam is None or i is None:
        return
    F0, G0, H0 = _undo(c, lam)
    if G0.is_zero():
        yield ParamSet(psi=F0.even(c.sigma), k=F0.odd(c.sigma), phi=-(H0 * i), lam=lam)


def _fit_t42a(c: _Ctx, want: FamilyId) -> Iterator[ParamSet]:
    lam = _dependent_lambda(c)
    if lam is None:
        return
    F, s = c.F, c.sigma
    F0, G0, H0 = _undo(c, lam)
    # F0 = P/(2D) + k, G0 = P/4 - (eta - lam)^2/2 k, H0 = -rho Q + (eta - lam) k
    P = G0.even(s) * 4
    k = F0.odd(s)
    sc = c.fit1(F0.even(s), P)
    if sc is None or sc.is_zero():
        return
    D = (sc * 2).inv()
    mu = (lam * lam - D) * c.half
    for m in c.P.mult:
        if m + m.star(s) != P:
            continue
        Q = m - m.star(s)
        twisted = not Q.is_zero()
        if twisted != (want == Fam.T42A_ii):
            continue
        if twisted:
            rho = c.fit1(-H0, Q)
            if rho is not None:
                yield ParamSet(m=m, lam=lam, mu=mu, rho=rho, eta=F(0))
            continue
        rhos = sqrt(-(D * 4).inv())
        if not rhos:
            continue
        if not k.is_zero():
            t = c.fit1(H0, k)
            etas = [] if t is None else [t + lam]
        else:
            etas = [lam + r for r in sqrt(D)] + [F(0)]
        for eta in etas:
            yield ParamSet(m=m, lam=lam, mu=mu, eta=eta, rho=rhos[0], k=k)


def _fit_t43a(c: _Ctx) -> Iterator[ParamSet]:
    yield ParamSet(psi=c.f, chi=c.g, phi=c.h)


def _fit_t43b(c: _Ctx) -> Iterator[ParamSet]:
    chi = c.g
    for m in c.P.nz_even_mult:
        if m == chi:
            continue
        cc = c.fit1(c.h, m - chi)
        if cc is None or cc.is_zero():
            continue
        phi = ((m - chi) * (cc * cc) - c.f) / cc
        yield ParamSet(m=m, chi=chi, phi=phi, c=cc)


def _fit_t43c(c: _Ctx) -> Iterator[ParamSet]:
    phi = c.h
    pool = c.P.nz_even_mult
    for m in pool:
        for chi in pool:
            if m == chi:
                continue
            b = c.fit1((m + chi) * c.half - c.g, phi * c.half)
            if b is None or b.is_zero():
                continue
            yield ParamSet(m=m, chi=chi, phi=phi, a=-(b * b).inv(), b=b)


def _fit_t43d(c: _Ctx) -> Iterator[ParamSet]:
    pool = c.P.even_mult
    F = c.F
    for chi1 in pool:
        for chi2 in pool:
            if chi1 == chi2:
                continue
            u = chi1 - chi2
            lam2 = c.fit1(u, c.h)          # u = 2 lam h
            if lam2 is None or lam2.is_zero():
                continue
            lam = lam2 * c.half
            for chi3 in pool:
                if chi3 == chi1 or chi3 == chi2:
                    continue
                # 2g - chi2 - chi3 = (rho/2) u
                r = c.fit1(c.g * 2 - chi2 - chi3, u)
                if r is None:
                    continue
                rho = r * 2
                if rho.is_zero() or rho == F(2):
                    continue
                alpha = (lam * lam * rho * (F(2) - rho) * 2).inv()
                yield ParamSet(chi1=chi1, chi2=chi2, chi3=chi3, alpha=alpha, lam=lam, rho=rho)


_INNER_FITTERS = {
    Fam.T43A: _fit_t43a,
    Fam.T43B: _fit_t43b,
    Fam.T43C: _fit_t43c,
    Fam.T43D: _fit_t43d,
}


def _delta_candidates(c: _Ctx) -> list[Scalar]:
    """delta values for which C_{-delta}(f, g, h) may be one of T43A-T43D."""
    out: list[Scalar] = []

    def add(d):
        if d is not None and not any(d == e for e in out):
            out.append(d)

    pool = c.P.nz_even_mult
    # inner A/B: g0 = chi, so g - chi = delta^2/2 f + delta h
    for chi in pool:
        ab = c.fit2(c.g - chi, c.f, c.h)
        if ab is not None and ab[0] == ab[1] * ab[1] * c.half:
            add(ab[1])
    # inner C: g - (m + chi)/2 = u f + v h with delta^2 - 2 v delta + 2 u = 0
    for m in pool:
        for chi in pool:
            if m == chi:
                continue
            uv = c.fit2(c.g - (m + chi) * c.half, c.f, c.h)
            if uv is None:
                continue
            u, v = uv
            for r in sqrt(v * v - u * 2):
                add(v + r)
    # inner D: h + delta f is a multiple of chi1 - chi2
    for chi1 in c.P.even_mult:
        for chi2 in c.P.even_mult:
            if chi1 == chi2:
                continue
            sd = c.fit2(c.h, chi1 - chi2, c.f)
            if sd is not None:
                add(-sd[1])
    return out


def _fit_t43e(c: _Ctx, scan: bool = False) -> Iterator[ParamSet]:
    """Algebraic delta candidates, or (``scan``) every element of a finite field."""
    tried: list[Scalar] = []
    if scan:
        candidates = [c.F.element(v) for v in c.F.elements()] if c.F.is_finite else []
    else:
        candidates = _delta_candidates(c)
    for delta in candidates:
        if delta.is_zero() or any(delta == t for t in tried):
            continue
        tried.append(delta)
        inner = c.sub(*conjugate(c.f, c.g, c.h, -delta))
        for fam in INNER_FAMILIES:
            for p in _INNER_FITTERS[fam](inner):
                if inner.reproduces(fam, p):
                    yield ParamSet(delta=delta, inner=(fam, p))
                    break
            else:
                continue
            break


def _beta_of_zero_g(c: _Ctx) -> Scalar | None:
    """beta with g = beta^2/2 f + beta h, i.e. the middle entry of C_{-beta} is 0."""
    ab = c.fit2(c.g, c.f, c.h)
    if ab is None or ab[0] != ab[1] * ab[1] * c.half:
        return None
    return ab[1]


def _fit_t43f(c: _Ctx) -> Iterator[ParamSet]:
    beta = _beta_of_zero_g(c)
    if beta is None:
        return
    F0, _, H0 = conjugate(c.f, c.g, c.h, -beta)
    s = c.sigma
    yield ParamSet(Psi0=F0.even(s), k=F0.odd(s), Phi0=H0, beta=beta)


def _fit_t43g_like(c: _Ctx):
    beta = _beta_of_zero_g(c)
    if beta is None:
        return
    F0, _, H0 = conjugate(c.f, c.g, c.h, -beta)
    s = c.sigma
    for m in c.P.nz_even_mult:
        cc = c.fit1(H0, m)
        if cc is None or cc.is_zero():
            continue
        Phi0 = (m * (cc * cc) - F0.even(s)) / cc
        yield beta, cc, m, Phi0, F0.odd(s)


def _fit_t43g(c: _Ctx) -> Iterator[ParamSet]:
    for beta, cc, m, Phi0, k in _fit_t43g_like(c):
        yield ParamSet(m=m, Phi0=Phi0, k=k, c=cc, beta=beta)


def _fit_t43h(c: _Ctx) -> Iterator[ParamSet]:
    # same shape as G with c beta = 1: b = -beta, a = -c^2
    for beta, cc, m, Phi0, k in _fit_t43g_like(c):
        if cc * beta == c.F(1):
            yield ParamSet(m=m, Phi0=Phi0, k=k, a=-(cc * cc), b=-beta)


_FITTERS = {
    Fam.T41A: _fit_t41a,
    Fam.T41B: _fit_t41b,
    Fam.T42A_i: lambda c: _fit_t42a(c, Fam.T42A_i),
    Fam.T42A_ii: lambda c: _fit_t42a(c, Fam.T42A_ii),
    Fam.T42B: _fit_t42b,
    Fam.T42C: _fit_t42c,
    Fam.T42D: _fit_t42d,
    Fam.T42E: _fit_t42e,
    Fam.T42F: _fit_t42f,
    **_INNER_FITTERS,
    Fam.T43E: _fit_t43e,
    Fam.T43F: _fit_t43f,
    Fam.T43G: _fit_t43g,
    Fam.T43H_reconstructed: _fit_t43h,
}


def _attempt(c: _Ctx, branch: str, all_matches: bool):
    matches, failed = [], {}
    for fam in CLASSIFY_ORDER:
        if FAMILY_BRANCH[fam] != branch:
            continue
        n = 0
        for p in _FITTERS[fam](c):
            n += 1
            if c.reproduces(fam, p):
                matches.append((fam, p))
                break
        else:
            failed[fam.value] = "no parameter candidates" if n == 0 else f"{n} candidates rejected"
        if matches and not all_matches:
            break
    if not matches and branch == "independent":
        # last resort: exhaustive delta search for T43E
        for p in _fit_t43e(c, scan=True):
            if c.reproduces(Fam.T43E, p):
                matches.append((Fam.T43E, p))
                failed.pop(Fam.T43E.value, None)
                break
    return matches, failed


def classify(S: Semigroup, sigma: Involution, triple: SolutionTriple,
             all_matches: bool = False, lift: bool = True) -> Classification:
    """Family and fitted parameters of a zero-residual triple.

    With ``all_matches`` every family of the branch is tried and all that
    reproduce the triple are listed (the first is still the reported one).
    """
    r = residual_main(S, sigma, triple.f, triple.g, triple.h)
    if not r.zero:
        raise PreconditionError("classify needs a zero-residual triple", r.witness)
    branch = branch_of(S, sigma, triple.f, triple.h)
    fields = [triple.field]
    if lift and isinstance(triple.field, PrimeField):
        fields.append(triple.field.lift())
    failed_all = {}
    for k, F in enumerate(fields):
        t = triple if k == 0 else triple.lift(F)
        matches, failed = _attempt(_Ctx(S, sigma, t.f, t.g, t.h), branch, all_matches)
        if matches:
            fam, params = matches[0]
            return Classification(branch, fam, params, F, k > 0, matches, failed)
        failed_all.update({f"{name}@{F.spec}": why for name, why in failed.items()})
    return Classification(branch, failed_fits=failed_all)
