"""Scalar arithmetic over GF(p), GF(p^2) and complex doubles.

Finite-field elements are stored as non-negative integer codes.  In GF(p) the
code is the residue itself; in GF(p^2) = GF(p)[w]/(w^2 - d) the code
``a + b*p`` stands for ``a + b*w``.  The prime subfield therefore has the same
codes in both fields, so lifting a GF(p) vector into GF(p^2) is free.

All arithmetic methods accept numpy arrays (or Python scalars) and broadcast.
"""

from __future__ import annotations

import functools
import math
import re
from dataclasses import dataclass

import numpy as np

__all__ = [
    "FieldError",
    "Field",
    "PrimeField",
    "QuadraticField",
    "ComplexField",
    "Scalar",
    "make_field",
    "is_prime",
]

DEFAULT_TOL = 1e-9


class FieldError(ValueError):
    """Bad field specification or illegal scalar operation."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % k for k in range(3, math.isqrt(n) + 1, 2))


class Field:
    """Common interface; concrete fields are frozen dataclasses below."""

    kind: str
    is_finite: bool = True

    # -- construction -----------------------------------------------------
    def __call__(self, value) -> "Scalar":
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldError(f"scalar from {value.field.spec} used in {self.spec}")
            return value
        return Scalar(self, self.coerce(value))

    def coerce(self, value):
        raise NotImplementedError

    def element(self, code) -> "Scalar":
        """Wrap a raw storage code (e.g. an entry of a value vector)."""
        if isinstance(code, (np.ndarray, np.generic)):
            code = code.item()
        return Scalar(self, code)

    def asarray(self, values) -> np.ndarray:
        raise NotImplementedError

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=self.dtype)

    def ones(self, shape) -> np.ndarray:
        return np.ones(shape, dtype=self.dtype)

    # -- predicates ---------------------------------------------------------
    def eq(self, a, b):
        return np.asarray(a) == np.asarray(b)

    def is_zero(self, a):
        return np.asarray(a) == 0

    def all_zero(self, a) -> bool:
        return bool(np.all(self.is_zero(a)))

    def all_eq(self, a, b) -> bool:
        return bool(np.all(self.eq(a, b)))

    # -- linear algebra helpers ---------------------------------------------
    def dot(self, A, B) -> np.ndarray:
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, k: int):
        result = self.ones(np.shape(a))
        base = self.asarray(a)
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result


@dataclass(frozen=True)
class PrimeField(Field):
    """GF(p) for an odd prime p."""

    p: int

    kind = "prime-field"
    dtype = np.int64

    def __post_init__(self):
        if not is_prime(self.p):
            raise FieldError(f"{self.p} is not prime")
        if self.p == 2:
            raise FieldError("characteristic 2 is unsupported: even/odd parts divide by 2")

    @property
    def order(self) -> int:
        return self.p

    @property
    def char(self) -> int:
        return self.p

    @property
    def spec(self) -> str:
        return f"gf:{self.p}"

    def coerce(self, value) -> int:
        if isinstance(value, (int, np.integer)):
            return int(value) % self.p
        raise FieldError(f"cannot coerce {value!r} into {self.spec}")

    def from_int(self, k: int) -> int:
        return k % self.p

    def asarray(self, values) -> np.ndarray:
        return np.asarray(values, dtype=np.int64) % self.p

    def elements(self) -> np.ndarray:
        return np.arange(self.p, dtype=np.int64)

    def add(self, a, b):
        return (np.asarray(a) + np.asarray(b)) % self.p

    def neg(self, a):
        return (-np.asarray(a)) % self.p

    def mul(self, a, b):
        return (np.asarray(a) * np.asarray(b)) % self.p

    def inv(self, a):
        a = np.asarray(a)
        if np.any(a % self.p == 0):
            raise ZeroDivisionError(f"inverse of 0 in {self.spec}")
        return _inverse_table(self)[a]

    def dot(self, A, B):
        return (np.asarray(A) @ np.asarray(B)) % self.p

    def render(self, value) -> str:
        return str(int(value))

    def parse(self, text: str) -> int:
        return int(text) % self.p

    def random(self, rng: np.random.Generator, size=None):
        return rng.integers(0, self.p, size=size)

    def lift(self) -> "QuadraticField":
        return QuadraticField.standard(self.p)


@dataclass(frozen=True)
class QuadraticField(Field):
    """GF(p^2) realised as GF(p)[w]/(w^2 - d) with d a non-residue mod p."""

    p: int
    d: int

    kind = "quadratic-extension"
    dtype = np.int64

    def __post_init__(self):
        PrimeField(self.p)  # validates p
        if any((x * x - self.d) % self.p == 0 for x in range(self.p)):
            raise FieldError(f"x^2 - {self.d} has a root mod {self.p}")

    @classmethod
    def standard(cls, p: int) -> "QuadraticField":
        PrimeField(p)
        squares = {(x * x) % p for x in range(p)}
        d = next(k for k in range(1, p) if k not in squares)
        return cls(p, d)

    @property
    def ext_poly(self) -> tuple[int, int, int]:
        """Coefficients (c0, c1, c2) of c0 + c1*x + c2*x^2."""
        return ((-self.d) % self.p, 0, 1)

    @property
    def order(self) -> int:
        return self.p * self.p

    @property
    def char(self) -> int:
        return self.p

    @property
    def spec(self) -> str:
        return f"gf:{self.p}^2"

    def coerce(self, value) -> int:
        if isinstance(value, (int, np.integer)):
            return int(value) % self.p
        if isinstance(value, tuple) and len(value) == 2:
            a, b = value
            return int(a) % self.p + (int(b) % self.p) * self.p
        raise FieldError(f"cannot coerce {value!r} into {self.spec}")

    def from_int(self, k: int) -> int:
        return k % self.p

    def asarray(self, values) -> np.ndarray:
        arr = np.asarray(values, dtype=np.int64)
        if np.any((arr < 0) | (arr >= self.order)):
            raise FieldError(f"codes out of range for {self.spec}")
        return arr

    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def split(self, a):
        a = np.asarray(a)
        return a % self.p, a // self.p

    def join(self, re_, im_):
        return (re_ % self.p) + (im_ % self.p) * self.p

    def add(self, a, b):
        a0, a1 = self.split(a)
        b0, b1 = self.split(b)
        return self.join(a0 + b0, a1 + b1)

    def neg(self, a):
        a0, a1 = self.split(a)
        return self.join(-a0, -a1)

    def mul(self, a, b):
        a0, a1 = self.split(a)
        b0, b1 = self.split(b)
        return self.join(a0 * b0 + self.d * ((a1 * b1) % self.p), a0 * b1 + a1 * b0)

    def inv(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError(f"inverse of 0 in {self.spec}")
        return _inverse_table(self)[a]

    def dot(self, A, B):
        A0, A1 = self.split(A)
        B0, B1 = self.split(B)
        p = self.p
        re_ = (A0 @ B0) % p + self.d * ((A1 @ B1) % p)
        im_ = (A0 @ B1) % p + (A1 @ B0) % p
        return self.join(re_, im_)

    def render(self, value) -> str:
        a, b = int(value) % self.p, int(value) // self.p
        if b == 0:
            return str(a)
        wpart = "w" if b == 1 else f"{b}w"
        return wpart if a == 0 else f"{a}+{wpart}"

    def parse(self, text: str) -> int:
        m = re.fullmatch(r"(\d+)|(?:(\d+)\+)?(\d*)w", text.replace(" ", ""))
        if not m:
            raise FieldError(f"cannot parse {text!r} as an element of {self.spec}")
        if m.group(1) is not None:
            return int(m.group(1)) % self.p
        a = int(m.group(2) or 0)
        b = int(m.group(3)) if m.group(3) else 1
        return int(self.join(a, b))

    def random(self, rng: np.random.Generator, size=None):
        return rng.integers(0, self.order, size=size)

    def lift(self) -> "QuadraticField":
        return self


@dataclass(frozen=True)
class ComplexField(Field):
    """Complex doubles with hybrid relative/absolute equality."""

    tol: float = DEFAULT_TOL

    kind = "complex-float"
    is_finite = False
    dtype = np.complex128

    def __post_init__(self):
        if not self.tol > 0:
            raise FieldError("complex tolerance must be positive")

    @property
    def spec(self) -> str:
        return f"complex:{self.tol:g}"

    @property
    def char(self) -> int:
        return 0

    def coerce(self, value) -> complex:
        if isinstance(value, (int, float, complex, np.number)):
            return complex(value)
        raise FieldError(f"cannot coerce {value!r} into {self.spec}")

    def from_int(self, k: int) -> complex:
        return complex(k)

    def asarray(self, values) -> np.ndarray:
        return np.asarray(values, dtype=np.complex128)

    def add(self, a, b):
        return np.asarray(a) + np.asarray(b)

    def neg(self, a):
        return -np.asarray(a)

    def mul(self, a, b):
        return np.asarray(a) * np.asarray(b)

    def inv(self, a):
        a = np.asarray(a)
        if np.any(self.is_zero(a)):
            raise ZeroDivisionError("inverse of 0")
        return 1.0 / a

    def dot(self, A, B):
        return np.asarray(A) @ np.asarray(B)

    def eq(self, a, b):
        a, b = np.asarray(a), np.asarray(b)
        scale = np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))
        return np.abs(a - b) <= self.tol * scale

    def is_zero(self, a):
        return np.abs(np.asarray(a)) <= self.tol

    def render(self, value) -> str:
        z = complex(value)
        return f"{z.real:.17g}{z.imag:+.17g}i"

    def parse(self, text: str) -> complex:
        return complex(text.replace("i", "j"))

    def random(self, rng: np.random.Generator, size=None):
        # unit-scale magnitudes keep family residuals well inside tol
        mag = rng.uniform(0.5, 2.0, size=size)
        ang = rng.uniform(0, 2 * np.pi, size=size)
        return mag * np.exp(1j * ang)

    def lift(self) -> "ComplexField":
        return self


@functools.lru_cache(maxsize=None)
def _inverse_table(field: Field) -> np.ndarray:
    q = field.order
    elems = np.arange(q, dtype=np.int64)
    table = np.zeros(q, dtype=np.int64)
    if isinstance(field, PrimeField):
        table[1:] = [pow(int(a), field.p - 2, field.p) for a in elems[1:]]
        return table
    p = field.p
    a, b = elems % p, elems // p
    norm = (a * a - field.d * b * b) % p
    ninv = np.array([0] + [pow(k, p - 2, p) for k in range(1, p)], dtype=np.int64)[norm]
    table[:] = field.join(a * ninv, -b * ninv)
    table[0] = 0
    return table


@functools.lru_cache(maxsize=None)
def _square_roots(field: Field) -> dict[int, tuple[int, ...]]:
    elems = field.elements()
    sq = field.mul(elems, elems)
    roots: dict[int, list[int]] = {}
    for r, s in zip(elems.tolist(), sq.tolist()):
        roots.setdefault(s, []).append(r)
    return {k: tuple(sorted(v)) for k, v in roots.items()}


def sqrt(a: "Scalar") -> tuple["Scalar", ...]:
    """All square roots of ``a`` (0, 1 or 2 of them), sorted by code."""
    field = a.field
    if field.is_finite:
        return tuple(Scalar(field, r) for r in _square_roots(field).get(int(a.value), ()))
    z = complex(a.value)
    if abs(z) <= field.tol:
        return (Scalar(field, 0j),)
    r = complex(np.sqrt(z))
    return (Scalar(field, r), Scalar(field, -r))


@dataclass(frozen=True)
class Scalar:
    """An immutable field element."""

    field: Field
    value: object

    def _other(self, other) -> object:
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldError(f"mixed-field operands: {self.field.spec} vs {other.field.spec}")
            return other.value
        return self.field.coerce(other)

    def _wrap(self, raw) -> "Scalar":
        raw = raw.item() if isinstance(raw, np.ndarray) or isinstance(raw, np.generic) else raw
        return Scalar(self.field, raw)

    def __add__(self, other):
        return self._wrap(self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self.field.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return self._wrap(self.field.sub(self._other(other), self.value))

    def __mul__(self, other):
        if not isinstance(other, (Scalar, int, float, complex, np.number)):
            return NotImplemented
        return self._wrap(self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(self.field.neg(self.value))

    def inv(self) -> "Scalar":
        return self._wrap(self.field.inv(self.value))

    def __truediv__(self, other):
        return self * self.field(other).inv()

    def __rtruediv__(self, other):
        return self.field(other) * self.inv()

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        return self._wrap(self.field.pow(self.value, k))

    def __eq__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            other = self.field(other)
        if not isinstance(other, Scalar) or other.field != self.field:
            return NotImplemented
        return bool(self.field.eq(self.value, other.value))

    def __hash__(self):
        if self.field.is_finite:
            return hash((self.field, self.value))
        raise TypeError("complex scalars are not hashable (tolerance equality)")

    def is_zero(self) -> bool:
        return bool(self.field.is_zero(self.value))

    def sqrt(self) -> tuple["Scalar", ...]:
        return sqrt(self)

    def __str__(self):
        return self.field.render(self.value)

    def __repr__(self):
        return f"Scalar({self.field.spec}, {self})"


_SPEC_RE = re.compile(r"^(?:gf:(\d+)(\^2)?|complex:(.+))$")


def make_field(spec: str) -> Field:
    """Parse ``"gf:p"``, ``"gf:p^2"`` or ``"complex:tol"``."""
    m = _SPEC_RE.match(spec.strip())
    if not m:
        raise FieldError(f"malformed field spec {spec!r}; expected gf:p, gf:p^2 or complex:tol")
    if m.group(3) is not None:
        try:
            tol = float(m.group(3))
        except ValueError:
            raise FieldError(f"malformed tolerance in {spec!r}") from None
        return ComplexField(tol)
    p = int(m.group(1))
    if m.group(2):
        return QuadraticField.standard(p)
    return PrimeField(p)
