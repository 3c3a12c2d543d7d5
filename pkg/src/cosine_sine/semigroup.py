"""Finite semigroups as Cayley tables on dense indices ``0..n-1``."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

__all__ = [
    "MAX_ORDER",
    "InvalidSemigroup",
    "Semigroup",
    "Involution",
    "validate_table",
    "validate_involution",
    "enumerate_involutive_automorphisms",
    "square_set",
    "enumerate_all_semigroups",
    "catalog",
    "CATALOG_NAMES",
    "GROUP_NAMES",
]

MAX_ORDER = 8


class InvalidSemigroup(ValueError):
    """A table or permutation failed validation.  ``witnesses`` lists offenders."""

    def __init__(self, message: str, witnesses=()):
        super().__init__(message)
        self.witnesses = list(witnesses)


@dataclass(frozen=True, eq=False)
class Semigroup:
    table: np.ndarray
    name: str | None = None

    def __post_init__(self):
        self.table.setflags(write=False)

    @property
    def n(self) -> int:
        return self.table.shape[0]

    def __eq__(self, other):
        return isinstance(other, Semigroup) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())

    def __repr__(self):
        label = self.name or "semigroup"
        return f"<{label} n={self.n} {self.table.tolist()}>"

    def mul(self, x, y):
        return self.table[x, y]

    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def identity(self) -> int | None:
        idx = np.arange(self.n)
        for e in range(self.n):
            if np.array_equal(self.table[e], idx) and np.array_equal(self.table[:, e], idx):
                return e
        return None

    def is_group(self) -> bool:
        if self.identity() is None:
            return False
        idx = np.arange(self.n)
        return all(np.array_equal(np.sort(row), idx) for row in self.table)

    def triple_products(self) -> np.ndarray:
        """All products ``x*y*z`` as an (n, n, n) array."""
        return self.table[self.table[:, :, None], np.arange(self.n)[None, None, :]]


@dataclass(frozen=True, eq=False)
class Involution:
    perm: np.ndarray

    def __post_init__(self):
        self.perm.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.perm)

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.perm, np.arange(self.n)))

    def __eq__(self, other):
        return isinstance(other, Involution) and np.array_equal(self.perm, other.perm)

    def __hash__(self):
        return hash(self.perm.tobytes())

    def __repr__(self):
        return f"Involution({self.perm.tolist()})"

    @classmethod
    def identity(cls, n: int) -> "Involution":
        return cls(np.arange(n))


def _associativity_violations(T: np.ndarray) -> list[tuple[int, int, int]]:
    n = T.shape[0]
    idx = np.arange(n)
    left = T[T[:, :, None], idx[None, None, :]]   # (xy)z
    right = T[idx[:, None, None], T[None, :, :]]  # x(yz)
    return [tuple(map(int, w)) for w in np.argwhere(left != right)]


def validate_table(raw, name: str | None = None) -> Semigroup:
    """Check shape, range and associativity; raise with every violating triple."""
    try:
        A = np.array(raw)
        T = A.astype(np.int64)
    except (TypeError, ValueError) as exc:
        raise InvalidSemigroup(f"table is not an integer matrix: {exc}") from None
    if A.size and not np.issubdtype(A.dtype, np.integer):
        raise InvalidSemigroup("table entries must be integers")
    if T.ndim != 2 or T.shape[0] != T.shape[1] or T.shape[0] == 0:
        raise InvalidSemigroup(f"table must be a non-empty square matrix, got shape {T.shape}")
    n = T.shape[0]
    if n > MAX_ORDER:
        raise InvalidSemigroup(f"order {n} exceeds the supported maximum {MAX_ORDER}")
    bad = np.argwhere((T < 0) | (T >= n))
    if bad.size:
        raise InvalidSemigroup("entries out of range", [tuple(map(int, w)) for w in bad])
    violations = _associativity_violations(T)
    if violations:
        raise InvalidSemigroup(f"not associative ({len(violations)} violating triples)", violations)
    return Semigroup(T, name)


def validate_involution(S: Semigroup, perm) -> Involution:
    try:
        P = np.array(perm, dtype=np.int64)
    except (TypeError, ValueError):
        raise InvalidSemigroup("sigma is not an integer array") from None
    if P.shape != (S.n,) or sorted(P.tolist()) != list(range(S.n)):
        raise InvalidSemigroup(f"sigma must be a permutation of range({S.n})")
    not_inv = [int(x) for x in np.flatnonzero(P[P] != np.arange(S.n))]
    if not_inv:
        raise InvalidSemigroup("sigma is not involutive", [(x,) for x in not_inv])
    hom = np.argwhere(P[S.table] != S.table[P[:, None], P[None, :]])
    if hom.size:
        raise InvalidSemigroup("sigma is not a homomorphism", [tuple(map(int, w)) for w in hom])
    return Involution(P)


def _involutions(n: int):
    """All involutive permutations of range(n), identity first."""

    def build(perm, rest):
        if not rest:
            yield tuple(perm)
            return
        x, tail = rest[0], rest[1:]
        perm[x] = x
        yield from build(perm, tail)
        for i, y in enumerate(tail):
            perm[x], perm[y] = y, x
            yield from build(perm, tail[:i] + tail[i + 1:])
            perm[y] = y
        perm[x] = x

    yield from build(list(range(n)), list(range(n)))


def enumerate_involutive_automorphisms(S: Semigroup) -> list[Involution]:
    T = S.table
    out = []
    for perm in _involutions(S.n):
        P = np.array(perm)
        if np.array_equal(P[T], T[P[:, None], P[None, :]]):
            out.append(Involution(P))
    return out


def square_set(S: Semigroup) -> frozenset[int]:
    return frozenset(int(v) for v in np.unique(S.table))


def enumerate_all_semigroups(n: int):
    """Yield every associative table on ``range(n)`` (no isomorphism reduction)."""
    if not 1 <= n <= 3:
        raise ValueError("raw semigroup enumeration is limited to 1 <= n <= 3")
    cells = n * n
    tables = np.array(list(itertools.product(range(n), repeat=cells)), dtype=np.int64)
    tables = tables.reshape(-1, n, n)
    idx = np.arange(n)
    k = np.arange(len(tables))[:, None, None, None]
    xy = tables[:, :, :, None]                                  # (xy) for each z slot
    left = tables[k, xy, idx[None, None, None, :]]              # (xy)z
    yz = tables[:, None, :, :]                                  # (yz) indexed [k, -, y, z]
    right = tables[k, idx[None, :, None, None], yz]             # x(yz)
    ok = np.all((left == right).reshape(len(tables), -1), axis=1)
    for T in tables[ok]:
        yield Semigroup(T.copy())


def _cyclic(n: int) -> list[list[int]]:
    return [[(i + j) % n for j in range(n)] for i in range(n)]


_CATALOG = {
    "trivial": [[0]],
    "z2": _cyclic(2),
    "z3": _cyclic(3),
    "z4": _cyclic(4),
    "klein4": [[i ^ j for j in range(4)] for i in range(4)],
    "null2": [[0, 0], [0, 0]],
    "null3": [[0] * 3 for _ in range(3)],
    "leftzero2": [[i] * 2 for i in range(2)],
    "leftzero3": [[i] * 3 for i in range(3)],
    "rightzero3": [list(range(3)) for _ in range(3)],
}

CATALOG_NAMES = tuple(_CATALOG)
GROUP_NAMES = ("trivial", "z2", "z3", "z4", "klein4")


def catalog(name: str) -> Semigroup:
    try:
        raw = _CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown semigroup {name!r}; valid names: {', '.join(CATALOG_NAMES)}") from None
    return validate_table(raw, name=name)
