"""Functions S -> K and the building blocks the solution families are made of.

A :class:`Func` is a length-n vector of field values.  Besides the even/odd
calculus this module finds multiplicative functions, chi-additive functions
(sine addition law) and functions of cosine-sine type, the last two as
solutions of linear systems over the field.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

from . import linalg
from .fields import ComplexField, Field, FieldError, Scalar
from .semigroup import Involution, Semigroup, square_set

__all__ = [
    "Func",
    "EvenOddPair",
    "AffineSpace",
    "PreconditionError",
    "even_odd_decompose",
    "enumerate_multiplicative",
    "root_of_unity_multiplicative",
    "multiplicative_functions",
    "is_multiplicative",
    "sine_residual_matrix",
    "solve_chi_additive",
    "solve_cosine_sine_type",
    "linear_rank",
    "is_central",
    "vanishing_on_squares",
]


class PreconditionError(ValueError):
    """Raised when an input violates an operation's precondition."""

    def __init__(self, message: str, witness=None):
        super().__init__(message if witness is None else f"{message} (witness {witness})")
        self.witness = witness


class Func:
    """An immutable function S -> K stored as a vector of field codes."""

    __slots__ = ("field", "values")

    def __init__(self, field: Field, values):
        vals = field.asarray(values).copy()
        vals.setflags(write=False)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "values", vals)

    def __setattr__(self, name, value):
        raise AttributeError("Func is immutable")

    @classmethod
    def zero(cls, field: Field, n: int) -> "Func":
        return cls(field, field.zeros(n))

    @classmethod
    def const(cls, field: Field, n: int, value) -> "Func":
        return cls(field, field.zeros(n) + field(value).value)

    @property
    def n(self) -> int:
        return len(self.values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, x) -> Scalar:
        return Scalar(self.field, self.values[x].item())

    def _check(self, other: "Func"):
        if not isinstance(other, Func):
            raise TypeError(f"expected Func, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldError(f"mixed fields {self.field.spec} and {other.field.spec}")
        if other.n != self.n:
            raise ValueError(f"length mismatch {self.n} vs {other.n}")

    def __add__(self, other):
        self._check(other)
        return Func(self.field, self.field.add(self.values, other.values))

    def __sub__(self, other):
        self._check(other)
        return Func(self.field, self.field.sub(self.values, other.values))

    def __neg__(self):
        return Func(self.field, self.field.neg(self.values))

    def __mul__(self, c):
        if isinstance(c, Func):
            self._check(c)
            return Func(self.field, self.field.mul(self.values, c.values))
        return Func(self.field, self.field.mul(self.values, self.field(c).value))

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * self.field(c).inv()

    def __eq__(self, other):
        if not isinstance(other, Func) or other.field != self.field or other.n != self.n:
            return False
        return self.field.all_eq(self.values, other.values)

    __hash__ = None

    def key(self) -> tuple:
        """Hashable identity for finite-field functions."""
        return tuple(self.values.tolist())

    def is_zero(self) -> bool:
        return self.field.all_zero(self.values)

    def compose(self, perm) -> "Func":
        perm = perm.perm if isinstance(perm, Involution) else np.asarray(perm)
        return Func(self.field, self.values[perm])

    def star(self, sigma: Involution) -> "Func":
        """``f o sigma``."""
        return self.compose(sigma)

    def even(self, sigma: Involution) -> "Func":
        return (self + self.star(sigma)) / 2

    def odd(self, sigma: Involution) -> "Func":
        return (self - self.star(sigma)) / 2

    def is_even(self, sigma: Involution) -> bool:
        return self == self.star(sigma)

    def is_odd(self, sigma: Involution) -> bool:
        return self == -self.star(sigma)

    def zero_on(self, subset) -> bool:
        idx = sorted(subset)
        return self.field.all_zero(self.values[idx]) if idx else True

    def lift(self, field: Field) -> "Func":
        """Re-home the values in an extension field with compatible codes."""
        if field == self.field:
            return self
        if getattr(field, "p", None) != getattr(self.field, "p", None) or not field.is_finite:
            raise FieldError(f"cannot lift {self.field.spec} into {field.spec}")
        return Func(field, self.values)

    def render(self) -> list[str]:
        return [self.field.render(v) for v in self.values.tolist()]

    def __repr__(self):
        return f"Func({self.field.spec}, [{', '.join(self.render())}])"


@dataclass(frozen=True)
class EvenOddPair:
    even: Func
    odd: Func
    sigma: Involution


def even_odd_decompose(f: Func, sigma: Involution) -> EvenOddPair:
    return EvenOddPair(f.even(sigma), f.odd(sigma), sigma)


# -- multiplicative functions ---------------------------------------------


def _index_period(S: Semigroup, x: int) -> tuple[int, int]:
    """Smallest (i, r) with x^(i+r) = x^i."""
    seen = {}
    power, k = x, 1
    while power not in seen:
        seen[power] = k
        power = int(S.table[power, x])
        k += 1
    i = seen[power]
    return i, k - i


def _candidate_values(S: Semigroup, field: Field, x: int) -> np.ndarray:
    # m(x)^i (m(x)^r - 1) = 0, so m(x) is 0 or an r-th root of unity
    _, r = _index_period(S, x)
    if field.is_finite:
        elems = field.elements()
        roots = elems[field.eq(field.pow(elems, r), field.from_int(1))]
        return np.concatenate([field.zeros(1), roots])
    roots = np.exp(2j * np.pi * np.arange(r) / r)
    return np.concatenate([field.zeros(1), roots])


def _dfs_multiplicative(S: Semigroup, field: Field) -> list[Func]:
    n = S.n
    T = S.table
    cands = [_candidate_values(S, field, x) for x in range(n)]
    found: list[Func] = []

    def in_cands(z, v):
        return bool(np.any(field.eq(cands[z], v)))

    def propagate(assign: dict) -> dict | None:
        assign = dict(assign)
        changed = True
        while changed:
            changed = False
            for x, y in itertools.product(list(assign), repeat=2):
                z = int(T[x, y])
                v = field.mul(assign[x], assign[y])
                if z in assign:
                    if not bool(field.eq(assign[z], v)):
                        return None
                elif in_cands(z, v):
                    assign[z] = v
                    changed = True
                else:
                    return None
        return assign

    def search(assign: dict):
        free = [x for x in range(n) if x not in assign]
        if not free:
            found.append(Func(field, [assign[x] for x in range(n)]))
            return
        x = free[0]
        for v in cands[x]:
            nxt = propagate({**assign, x: v})
            if nxt is not None:
                search(nxt)

    search({})
    return found


@functools.lru_cache(maxsize=256)
def _multiplicative_cached(S: Semigroup, field: Field) -> tuple[Func, ...]:
    funcs = _dfs_multiplicative(S, field)
    if field.is_finite:
        funcs.sort(key=Func.key)
    return tuple(funcs)


def enumerate_multiplicative(S: Semigroup, field: Field) -> list[Func]:
    """Every m with m(xy) = m(x)m(y), the zero function included.

    Finite fields only.  Depth-first assignment in element order; each value is
    restricted to 0 or a root of unity of the element's period, and products
    of assigned elements are propagated through the Cayley table.
    """
    if not field.is_finite:
        raise FieldError("multiplicative enumeration needs a finite field")
    return list(_multiplicative_cached(S, field))


def root_of_unity_multiplicative(S: Semigroup, field: ComplexField) -> list[Func]:
    """Complex multiplicative functions built from roots of unity.

    On a finite semigroup every value of a multiplicative function is 0 or a
    root of unity of the element's period, so the same search is complete.
    """
    if field.is_finite:
        raise FieldError("use enumerate_multiplicative for finite fields")
    return list(_multiplicative_cached(S, field))


def multiplicative_functions(S: Semigroup, field: Field) -> list[Func]:
    if field.is_finite:
        return enumerate_multiplicative(S, field)
    return root_of_unity_multiplicative(S, field)


def is_multiplicative(f: Func, S: Semigroup) -> bool:
    v = f.values
    return f.field.all_eq(v[S.table], f.field.mul(v[:, None], v[None, :]))


# -- linear systems in the unknown function --------------------------------


def _indicator(n: int, idx: np.ndarray, field: Field) -> np.ndarray:
    """Rows e_{idx[k]} as an integer 0/1 matrix converted to field codes."""
    out = field.zeros((idx.size, n))
    out[np.arange(idx.size), idx.ravel()] = field.from_int(1)
    return out


def sine_residual_matrix(S: Semigroup, chi: Func, sigma: Involution | None = None) -> np.ndarray:
    """Rows of ``u(x s(y)) - u(x)chi(y) - chi(x)u(y)`` as linear forms in u.

    ``s`` is sigma or the identity.  Shape (n*n, n), row index ``x*n + y``.
    """
    field, n = chi.field, S.n
    perm = np.arange(n) if sigma is None else sigma.perm
    X, Y = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    X, Y = X.ravel(), Y.ravel()
    M = _indicator(n, S.table[X, perm[Y]], field)
    M = field.sub(M, field.mul(_indicator(n, X, field), chi.values[Y][:, None]))
    M = field.sub(M, field.mul(_indicator(n, Y, field), chi.values[X][:, None]))
    return M


def _parity_rows(field: Field, sigma: Involution, parity: int) -> np.ndarray:
    """Rows of ``u(s(x)) - parity*u(x)``."""
    n = sigma.n
    idx = np.arange(n)
    A = _indicator(n, sigma.perm, field)
    B = _indicator(n, idx, field)
    return field.sub(A, B) if parity > 0 else field.add(A, B)


@dataclass(frozen=True)
class AffineSpace:
    """``particular + span(basis)``; ``particular`` is None when empty."""

    field: Field
    particular: Func | None
    basis: tuple[Func, ...]

    @property
    def is_empty(self) -> bool:
        return self.particular is None

    @property
    def dim(self) -> int:
        return -1 if self.is_empty else len(self.basis)

    def sample(self, rng: np.random.Generator) -> Func:
        if self.is_empty:
            raise ValueError("empty affine space")
        out = self.particular
        for b in self.basis:
            out = out + b * self.field.element(self.field.random(rng))
        return out

    def points(self):
        """All points (finite fields only)."""
        if self.is_empty:
            return
        elems = self.field.elements().tolist()
        for coeffs in itertools.product(elems, repeat=len(self.basis)):
            out = self.particular
            for c, b in zip(coeffs, self.basis):
                out = out + b * self.field.element(c)
            yield out

    def size(self) -> int:
        if self.is_empty:
            return 0
        return self.field.order ** len(self.basis)


def _solve_system(field: Field, n: int, blocks, rhs_blocks) -> AffineSpace:
    A = np.vstack(blocks) if blocks else field.zeros((0, n))
    b = np.concatenate(rhs_blocks) if rhs_blocks else field.zeros(A.shape[0])
    x, basis = linalg.solve(field, A, b)
    part = None if x is None else Func(field, x)
    if part is not None and not field.is_finite and not field.all_zero(field.sub(field.dot(A, x), b)):
        part = None
    return AffineSpace(field, part, tuple(Func(field, v) for v in basis))


def solve_chi_additive(S: Semigroup, chi: Func, sigma: Involution | None = None,
                       parity: int = 0) -> list[Func]:
    """Basis of {phi : phi(xy) = phi(x)chi(y) + chi(x)phi(y)}.

    With ``parity`` = +1/-1 (and ``sigma``) the basis is of the even/odd
    solutions only.
    """
    field = chi.field
    blocks = [sine_residual_matrix(S, chi)]
    if parity:
        blocks.append(_parity_rows(field, sigma, parity))
    return list(_solve_system(field, S.n, blocks, []).basis)


def _check_chi_additive(S: Semigroup, chi: Func, phi: Func):
    M = sine_residual_matrix(S, chi)
    bad = np.flatnonzero(~chi.field.is_zero(chi.field.dot(M, phi.values)))
    if bad.size:
        x, y = divmod(int(bad[0]), S.n)
        raise PreconditionError("phi is not chi-additive", (x, y))


def solve_cosine_sine_type(S: Semigroup, sigma: Involution | None, chi: Func, phi: Func,
                           parity: int = 0, parity_sigma: Involution | None = None) -> AffineSpace:
    """All psi with psi(x s(y)) = psi(x)chi(y) + chi(x)psi(y) + phi(x)phi(y).

    ``sigma=None`` means s is the identity, i.e. type (chi, phi).  ``parity``
    restricts to psi o parity_sigma = +/- psi.
    """
    _check_chi_additive(S, chi, phi)
    field, n = chi.field, S.n
    blocks = [sine_residual_matrix(S, chi, sigma)]
    rhs = [field.mul(phi.values[:, None], phi.values[None, :]).ravel()]
    if parity:
        blocks.append(_parity_rows(field, parity_sigma or sigma, parity))
        rhs.append(field.zeros(n))
    return _solve_system(field, n, blocks, rhs)


def vanishing_on_squares(S: Semigroup, field: Field) -> list[Func]:
    """Standard basis of {u : u = 0 on S^2} (the 0-additive functions)."""
    sq = square_set(S)
    out = []
    for x in range(S.n):
        if x not in sq:
            v = field.zeros(S.n)
            v[x] = field.from_int(1)
            out.append(Func(field, v))
    return out


# -- rank / dependence ------------------------------------------------------


def linear_rank(fs) -> tuple[int, np.ndarray | None]:
    """Rank of a list of functions and, when deficient, a dependency.

    The dependency ``c`` satisfies ``sum c_i f_i = 0`` with its last nonzero
    entry normalised to -1.
    """
    fs = list(fs)
    if not fs:
        return 0, None
    field = fs[0].field
    for f in fs[1:]:
        fs[0]._check(f)
    V = np.vstack([f.values for f in fs])
    r = linalg.rank(field, V)
    if r == len(fs):
        return r, None
    return r, linalg.dependency(field, V)


def is_central(f: Func, S: Semigroup) -> tuple[bool, tuple[int, int] | None]:
    v = f.values
    diff = ~f.field.eq(v[S.table], v[S.table.T])
    if diff.any():
        x, y = np.argwhere(diff)[0]
        return False, (int(x), int(y))
    return True, None
