"""Exhaustive solvers over finite fields.

For fixed (g, h) the equation is linear in f:

    f(x s(y)) - f(x)g(y) - g(x)f(y) = h(x)h(y).

``brute_force_solutions`` loops over g, row-reduces the n^2 x n system once
per g (keeping the row transform), checks every h at once with one matrix
product, and spans the affine f-space for each consistent h.
``full_scan_solutions`` is the dumb q^(3n) cross-check.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import linalg
from .classify import classify
from .equations import SolutionTriple, check_lemma34_37
from .fields import Field
from .functions import Func
from .semigroup import Involution, Semigroup

__all__ = [
    "DEFAULT_BUDGET",
    "SCAN_BUDGET",
    "BudgetExceeded",
    "SolutionSet",
    "OracleRun",
    "all_vectors",
    "brute_force_solutions",
    "full_scan_solutions",
    "batch_residual_zero",
    "batch_lemma33",
    "completeness_report",
]

DEFAULT_BUDGET = 10**8
SCAN_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    pass


def all_vectors(field: Field, n: int) -> np.ndarray:
    """Every vector of length n in lexicographic order of codes, shape (q^n, n)."""
    q = field.order
    idx = np.arange(q ** n, dtype=np.int64)
    powers = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // powers[None, :]) % q


@dataclass
class SolutionSet:
    """Solutions as three code arrays of shape (count, n), canonically sorted."""

    S: Semigroup
    sigma: Involution
    field: Field
    f: np.ndarray
    g: np.ndarray
    h: np.ndarray

    def __len__(self):
        return len(self.f)

    def __iter__(self):
        F = self.field
        for a, b, c in zip(self.f, self.g, self.h):
            yield SolutionTriple(Func(F, a), Func(F, b), Func(F, c), self.sigma)

    def keys(self) -> set:
        return {(tuple(a), tuple(b), tuple(c))
                for a, b, c in zip(self.f.tolist(), self.g.tolist(), self.h.tolist())}

    def same_as(self, other: "SolutionSet") -> bool:
        return (self.f.shape == other.f.shape and np.array_equal(self.f, other.f)
                and np.array_equal(self.g, other.g) and np.array_equal(self.h, other.h))


def _canonical(S, sigma, field, f, g, h) -> SolutionSet:
    n = S.n
    f = f.reshape(-1, n)
    g = g.reshape(-1, n)
    h = h.reshape(-1, n)
    # lexsort keys: last key is primary -> order by g, then h, then f
    keys = [*(f[:, j] for j in reversed(range(n))), *(h[:, j] for j in reversed(range(n))),
            *(g[:, j] for j in reversed(range(n)))]
    order = np.lexsort(keys) if len(f) else np.arange(0)
    return SolutionSet(S, sigma, field, f[order], g[order], h[order])


def batch_residual_zero(S: Semigroup, sigma: Involution, field: Field,
                        f: np.ndarray, g: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Per-row exact check of the main equation; independent of the solver."""
    F = field
    lhs = f[:, S.table[:, sigma.perm]]
    fg = F.mul(f[:, :, None], g[:, None, :])
    gf = F.mul(g[:, :, None], f[:, None, :])
    hh = F.mul(h[:, :, None], h[:, None, :])
    rhs = F.add(F.add(fg, gf), hh)
    return np.all(F.eq(lhs, rhs).reshape(len(f), -1), axis=1)


def _system_rows(S: Semigroup, sigma: Involution, field: Field, g: np.ndarray) -> np.ndarray:
    """n^2 x n matrix of f -> f(x s(y)) - f(x)g(y) - g(x)f(y)."""
    n = S.n
    F = field
    X, Y = np.divmod(np.arange(n * n), n)
    rows = np.arange(n * n)
    A = F.zeros((n * n, n))
    A[rows, S.table[X, sigma.perm[Y]]] = F.from_int(1)
    # sequential updates so coinciding columns accumulate
    A[rows, X] = F.sub(A[rows, X], g[Y])
    A[rows, Y] = F.sub(A[rows, Y], g[X])
    return A


def _solve_range(S: Semigroup, sigma: Involution, field: Field, start: int, stop: int):
    F = field
    n = S.n
    vecs = all_vectors(F, n)
    hh = F.mul(vecs[:, :, None], vecs[:, None, :]).reshape(len(vecs), n * n)
    eye = F.zeros((n * n, n * n))
    eye[np.arange(n * n), np.arange(n * n)] = F.from_int(1)
    elems = F.elements()
    combos_cache: dict[int, np.ndarray] = {}
    out_f, out_g, out_h = [], [], []
    for gi in range(start, stop):
        g = vecs[gi]
        A = _system_rows(S, sigma, F, g)
        R, piv = linalg.rref(F, np.hstack([A, eye]), limit=n)
        r = len(piv)
        T = R[:, n:]
        TB = F.dot(hh, T.T)                          # (q^n, n^2)
        ok = np.all(F.is_zero(TB[:, r:]), axis=1)
        hs = np.flatnonzero(ok)
        if hs.size == 0:
            continue
        part = F.zeros((hs.size, n))
        if r:
            part[:, piv] = TB[hs, :r]
        free = [j for j in range(n) if j not in piv]
        d = len(free)
        if d:
            basis = F.zeros((d, n))
            for k, j in enumerate(free):
                basis[k, j] = F.from_int(1)
                for i, pc in enumerate(piv):
                    basis[k, pc] = F.neg(R[i, j])
            if d not in combos_cache:
                combos_cache[d] = np.array(list(itertools.product(elems, repeat=d)), dtype=np.int64)
            span = F.dot(combos_cache[d], basis)    # (q^d, n)
            fs = F.add(part[:, None, :], span[None, :, :]).reshape(-1, n)
            h_idx = np.repeat(hs, len(span))
        else:
            fs = part
            h_idx = hs
        out_f.append(fs)
        out_g.append(np.broadcast_to(g, fs.shape))
        out_h.append(vecs[h_idx])
    if not out_f:
        empty = np.zeros((0, n), dtype=np.int64)
        return empty, empty, empty
    return np.vstack(out_f), np.vstack(out_g), np.vstack(out_h)


def _worker(args):
    table, perm, field, start, stop = args
    return _solve_range(Semigroup(table), Involution(perm), field, start, stop)


def _shard_bounds(total: int, shards: int) -> list[tuple[int, int]]:
    edges = np.linspace(0, total, shards + 1).round().astype(int)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def brute_force_solutions(S: Semigroup, sigma: Involution, field: Field,
                          budget: int = DEFAULT_BUDGET, shards: int = 1,
                          workers: int | None = None,
                          g_range: tuple[int, int] | None = None) -> SolutionSet:
    """Every zero-residual triple over a finite field, canonically sorted.

    ``shards`` splits the g-index range (and with it the (g, h) space) into
    contiguous pieces; with ``shards > 1`` they run in a process pool of
    ``workers`` processes (default: one per shard).  ``g_range`` restricts
    the run to one slice of g indices, for manual sharding.
    """
    if not field.is_finite:
        raise ValueError("the oracle needs a finite field")
    q, n = field.order, S.n
    cost = q ** (2 * n)
    if cost > budget:
        raise BudgetExceeded(f"q^(2n) = {q}^{2 * n} = {cost} exceeds the budget {budget}; "
                             "use a smaller field or raise --budget")
    lo, hi = g_range if g_range is not None else (0, q ** n)
    bounds = [(lo + a, lo + b) for a, b in _shard_bounds(hi - lo, max(1, shards))]
    if len(bounds) <= 1:
        parts = [_solve_range(S, sigma, field, lo, hi)]
    else:
        jobs = [(np.array(S.table), np.array(sigma.perm), field, a, b) for a, b in bounds]
        with ProcessPoolExecutor(max_workers=workers or len(jobs)) as pool:
            parts = list(pool.map(_worker, jobs))
    f = np.vstack([p[0] for p in parts])
    g = np.vstack([p[1] for p in parts])
    h = np.vstack([p[2] for p in parts])
    ok = batch_residual_zero(S, sigma, field, f, g, h)
    if not ok.all():
        bad = int(np.flatnonzero(~ok)[0])
        raise AssertionError(f"linear solver emitted a non-solution: f={f[bad]}, g={g[bad]}, h={h[bad]}")
    return _canonical(S, sigma, field, f, g, h)


def full_scan_solutions(S: Semigroup, sigma: Involution, field: Field,
                        budget: int = SCAN_BUDGET) -> SolutionSet:
    """Check all q^(3n) triples directly."""
    if not field.is_finite:
        raise ValueError("the oracle needs a finite field")
    q, n = field.order, S.n
    if q ** (3 * n) > budget:
        raise BudgetExceeded(f"q^(3n) = {q ** (3 * n)} exceeds the scan budget {budget}")
    F = field
    vecs = all_vectors(F, n)
    gh = np.array(list(itertools.product(range(len(vecs)), repeat=2)), dtype=np.int64)
    G, H = vecs[gh[:, 0]], vecs[gh[:, 1]]
    out = ([], [], [])
    for f in vecs:
        Fm = np.broadcast_to(f, G.shape)
        ok = batch_residual_zero(S, sigma, F, Fm, G, H)
        out[0].append(Fm[ok])
        out[1].append(G[ok])
        out[2].append(H[ok])
    return _canonical(S, sigma, F, *(np.vstack(o) for o in out))


def batch_lemma33(S: Semigroup, sigma: Involution, field: Field,
                  f: np.ndarray, g: np.ndarray, h: np.ndarray) -> dict[str, np.ndarray]:
    """Vectorised unconditional checks; one boolean per solution for each part."""
    F = field
    s, T = sigma.perm, S.table
    Ts = T[:, s]
    half = F.inv(F.from_int(2))

    def ev(u):
        return F.mul(F.add(u, u[:, s]), half)

    def od(u):
        return F.mul(F.sub(u, u[:, s]), half)

    def outer(a, b):
        return F.mul(a[:, :, None], b[:, None, :])

    def sym(a, b):
        return F.add(outer(a, b), outer(b, a))

    m = len(f)
    fe, fo, ge, go, he, ho = ev(f), od(f), ev(g), od(g), ev(h), od(h)
    flat = lambda a: a.reshape(m, -1)
    two = F.from_int(2)
    out = {
        "3.3(1)": np.all(flat(F.eq(fe[:, T], fe[:, T.T])), axis=1),
        "3.3(2)": np.all(flat(F.is_zero(F.add(fo[:, T], fo[:, T.T]))), axis=1),
        "3.3(3)": np.all(flat(F.is_zero(fo[:, S.triple_products()])), axis=1),
    }
    lhs_o = F.add(fo[:, T], fo[:, Ts])
    rhs_o = F.mul(two, F.add(F.add(outer(fo, ge), outer(go, fe)), outer(ho, he)))
    lhs_e = F.add(fe[:, T], fe[:, Ts])
    rhs_e = F.mul(two, F.add(sym(fe, ge), outer(he, he)))
    out["3.3(4)"] = (np.all(flat(F.eq(lhs_o, rhs_o)), axis=1)
                     & np.all(flat(F.eq(lhs_e, rhs_e)), axis=1))
    return out


@dataclass
class OracleRun:
    name: str | None
    table: list
    sigma: list
    field: str
    solution_count: int
    histogram: dict = dc_field(default_factory=dict)
    lifted_count: int = 0
    overlaps: dict = dc_field(default_factory=dict)
    certificates: list = dc_field(default_factory=list)
    lemma33: dict = dc_field(default_factory=dict)
    lemma_conditional: dict = dc_field(default_factory=dict)
    lemma_certificates: list = dc_field(default_factory=list)
    timings: dict = dc_field(default_factory=dict)

    @property
    def lemma33_ok(self) -> bool:
        return all(v["failed"] == 0 for v in self.lemma33.values())

    @property
    def conditional_ok(self) -> bool:
        return not self.lemma_certificates

    def to_json(self) -> dict:
        return {
            "semigroup": self.name, "table": self.table, "sigma": self.sigma, "field": self.field,
            "solution_count": self.solution_count, "histogram": dict(sorted(self.histogram.items())),
            "lifted_count": self.lifted_count, "overlaps": dict(sorted(self.overlaps.items())),
            "certificates": self.certificates, "lemma33": self.lemma33,
            "lemma_conditional": self.lemma_conditional,
            "lemma_certificates": self.lemma_certificates, "timings": self.timings,
        }


def completeness_report(S: Semigroup, sigma: Involution, field: Field,
                        budget: int = DEFAULT_BUDGET, shards: int = 1,
                        conditional_lemmas: bool = True, all_matches: bool = False) -> OracleRun:
    """Run the oracle, classify every solution and run the lemma suites."""
    t0 = time.perf_counter()
    sols = brute_force_solutions(S, sigma, field, budget=budget, shards=shards)
    t1 = time.perf_counter()
    run = OracleRun(S.name, S.table.tolist(), sigma.perm.tolist(), field.spec, len(sols))

    l33 = batch_lemma33(S, sigma, field, sols.f, sols.g, sols.h)
    run.lemma33 = {k: {"checked": int(len(v)), "failed": int((~v).sum())} for k, v in l33.items()}
    for k, v in l33.items():
        for i in np.flatnonzero(~v)[:5]:
            run.lemma_certificates.append({
                "lemma": k, "f": sols.f[i].tolist(), "g": sols.g[i].tolist(), "h": sols.h[i].tolist()})

    cond = {}
    for triple in sols:
        c = classify(S, sigma, triple, all_matches=all_matches)
        if c.classified:
            run.histogram[c.family.value] = run.histogram.get(c.family.value, 0) + 1
            run.lifted_count += int(c.lifted)
            if len(c.matches) > 1:
                key = "+".join(m.value for m, _ in c.matches)
                run.overlaps[key] = run.overlaps.get(key, 0) + 1
        else:
            run.certificates.append(c.certificate(S, triple))
        if conditional_lemmas:
            rep = check_lemma34_37(S, sigma, triple)
            for e in rep.entries:
                st = cond.setdefault(e.lemma, {"hypotheses_held": 0, "conclusion_failed": 0,
                                               "dependent_even": 0})
                st["hypotheses_held"] += int(e.hypotheses_held)
                st["dependent_even"] += int(bool((e.witnesses or {}).get("dependent_even")))
                if e.hypotheses_held and e.conclusion_held is False:
                    st["conclusion_failed"] += 1
                    run.lemma_certificates.append({
                        "lemma": e.lemma, "f": triple.f.render(), "g": triple.g.render(),
                        "h": triple.h.render(), "witnesses": e.witnesses})
    run.lemma_conditional = cond
    t2 = time.perf_counter()
    run.timings = {"oracle_s": round(t1 - t0, 4), "classify_and_lemmas_s": round(t2 - t1, 4)}
    return run
