"""Table-driven finite fields of odd characteristic.

Elements are integer codes: 0 is the zero element and ``i + 1`` is
``omega**i`` for the canonical primitive element ``omega``.  Every table is
a numpy array indexed by code, so all arithmetic helpers accept scalars or
arrays of codes and broadcast.

A parallel "vector" representation (the coefficient vector of an element in
the polynomial basis, packed as a base-p integer) backs addition and the
trace maps.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    BadModulus,
    BadSubfield,
    EvenCharacteristic,
    FieldMismatch,
    NotPrime,
    TooLarge,
    ZeroInverse,
)

MAX_ORDER = 2**32


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, s)`` with ``q == p**s`` or None if q is not a prime power."""
    if q < 2:
        return None
    fs = prime_factors(q)
    if len(fs) != 1:
        return None
    p = fs[0]
    s = 0
    while q > 1:
        q //= p
        s += 1
    return p, s


# -- polynomial helpers over F_p; coefficient lists are ascending ----------

def _polymulmod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    """Multiply a*b modulo the monic polynomial x^s + mod[s-1] x^{s-1} + ... + mod[0]."""
    s = len(mod)
    prod = [0] * (2 * s - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for k in range(len(prod) - 1, s - 1, -1):
        c = prod[k]
        if c:
            prod[k] = 0
            for j in range(s):
                prod[k - s + j] = (prod[k - s + j] - c * mod[j]) % p
    return prod[:s]


def _x_power(e: int, mod: list[int], p: int) -> list[int]:
    s = len(mod)
    result = [1] + [0] * (s - 1)
    base = [0] * s
    if s == 1:
        base = [(-mod[0]) % p]
    else:
        base[1] = 1
    while e:
        if e & 1:
            result = _polymulmod(result, base, mod, p)
        base = _polymulmod(base, base, mod, p)
        e >>= 1
    return result


def is_primitive(mod: list[int], p: int) -> bool:
    """True iff x has multiplicative order p^s - 1 modulo the monic polynomial ``mod``."""
    s = len(mod)
    n = p**s - 1
    one = [1] + [0] * (s - 1)
    if mod[0] == 0:
        return False
    if _x_power(n, mod, p) != one:
        return False
    return all(_x_power(n // r, mod, p) != one for r in prime_factors(n))


def canonical_modulus(p: int, s: int) -> tuple[int, ...]:
    """Smallest primitive monic polynomial of degree s over F_p.

    Candidates are ordered by the base-p integer read off the coefficients
    ``(c_{s-1}, ..., c_0)``.  Returns the ascending tuple ``(c_0, ..., c_{s-1})``.
    """
    for v in range(p**s):
        coeffs = [(v // p**k) % p for k in range(s)]
        if is_primitive(coeffs, p):
            return tuple(coeffs)
    raise AssertionError(f"no primitive polynomial of degree {s} over F_{p}")


class FieldTable:
    """The field F_{p^s} with canonical primitive element and lookup tables."""

    def __init__(self, p: int, s: int, modulus: tuple[int, ...]):
        self.p = p
        self.s = s
        self.order = p**s
        self.n = self.order - 1
        self.modulus = tuple(modulus)
        self._pows = p ** np.arange(s, dtype=np.int64)

        # exp_vec[i] is the packed coefficient vector of omega**i
        exp_vec = np.empty(self.n, dtype=np.int64)
        cur = [1] + [0] * (s - 1)
        for i in range(self.n):
            exp_vec[i] = sum(c * p**k for k, c in enumerate(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [(cur[k] - top * self.modulus[k]) % p for k in range(s)]
        self.exp_vec = exp_vec
        self.vec_of_code = np.concatenate([[0], exp_vec]).astype(np.int64)
        code_of_vec = np.zeros(self.order, dtype=np.int64)
        code_of_vec[exp_vec] = np.arange(1, self.order, dtype=np.int64)
        self.code_of_vec = code_of_vec
        self.digits = (np.arange(self.order, dtype=np.int64)[:, None] // self._pows) % p
        for table in (self.vec_of_code, self.code_of_vec, self.digits):
            table.setflags(write=False)
        self._trace: dict[int, np.ndarray] = {}
        self._trace_p = None

    # -- identity -----------------------------------------------------------
    def __repr__(self) -> str:
        return f"FieldTable(p={self.p}, s={self.s}, modulus={list(self.modulus)})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldTable)
            and (self.p, self.s, self.modulus) == (other.p, other.s, other.modulus)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.s, self.modulus))

    def descriptor(self) -> dict:
        return {"p": self.p, "s": self.s, "modulus": list(self.modulus)}

    @property
    def log_table(self) -> np.ndarray:
        """Element code -> discrete log (the zero element maps to -1)."""
        return np.arange(self.order, dtype=np.int64) - 1

    @property
    def exp_table(self) -> np.ndarray:
        """Discrete log -> element code."""
        return np.arange(1, self.order, dtype=np.int64)

    # -- code-level arithmetic (broadcasting) --------------------------------
    def elem(self, i):
        """Code of omega**i."""
        return np.mod(i, self.n) + 1

    def log(self, u):
        return np.asarray(u) - 1

    def from_int(self, k: int) -> int:
        """Code of the prime-field element k mod p."""
        return int(self.code_of_vec[k % self.p])

    def add(self, u, v):
        du = self.digits[self.vec_of_code[u]]
        dv = self.digits[self.vec_of_code[v]]
        return self.code_of_vec[((du + dv) % self.p) @ self._pows]

    def neg(self, u):
        return self.code_of_vec[((-self.digits[self.vec_of_code[u]]) % self.p) @ self._pows]

    def sub(self, u, v):
        return self.add(u, self.neg(v))

    def mul(self, u, v):
        u = np.asarray(u)
        v = np.asarray(v)
        r = (u + v - 2) % self.n + 1
        return np.where((u == 0) | (v == 0), 0, r)

    def inv(self, u):
        u = np.asarray(u)
        if np.any(u == 0):
            raise ZeroInverse("zero has no inverse")
        return (-(u - 1)) % self.n + 1

    def power(self, u, k: int):
        u = np.asarray(u)
        if k < 0:
            u = self.inv(u)
            k = -k
        r = ((u - 1) * k) % self.n + 1
        if k == 0:
            return np.ones_like(u)
        return np.where(u == 0, 0, r)

    def frobenius(self, u, k: int = 1, d: int = 1):
        """x -> x^(p^(d*k))."""
        return self.power(u, pow(self.p, d * k, self.n) if self.n > 1 else 1)

    # -- subfields and traces -------------------------------------------------
    def _check_sub(self, d: int) -> None:
        if d < 1 or self.s % d:
            raise BadSubfield(f"F_{self.p}^{d} is not a subfield of F_{self.p}^{self.s}")

    def subfield_step(self, d: int) -> int:
        """Log stride of the subfield F_{p^d}: its generator is omega**step."""
        self._check_sub(d)
        return self.n // (self.p**d - 1)

    def subfield_codes(self, d: int) -> np.ndarray:
        step = self.subfield_step(d)
        return np.concatenate([[0], np.arange(0, self.n, step) + 1]).astype(np.int64)

    def in_subfield(self, u, d: int):
        step = self.subfield_step(d)
        u = np.asarray(u)
        return (u == 0) | ((u - 1) % step == 0)

    def trace_table(self, d: int) -> np.ndarray:
        """Code -> code of Tr_{p^s/p^d}, recomputed from the power-sum definition."""
        self._check_sub(d)
        if d not in self._trace:
            codes = np.arange(self.order, dtype=np.int64)
            acc = np.zeros(self.order, dtype=np.int64)
            for k in range(self.s // d):
                acc = self.add(acc, self.frobenius(codes, k, d))
            acc.setflags(write=False)
            self._trace[d] = acc
        return self._trace[d]

    def trace(self, u, d: int = 1):
        return self.trace_table(d)[u]

    @property
    def trace_p(self) -> np.ndarray:
        """Code -> Tr_{p^s/p}(x) as an integer residue in [0, p)."""
        if self._trace_p is None:
            t = self.vec_of_code[self.trace_table(1)].copy()
            t.setflags(write=False)
            self._trace_p = t
        return self._trace_p

    def cyclotomic_class(self, N: int, i: int) -> np.ndarray:
        """Codes of C_i^(N) = omega^i <omega^N>, sorted by discrete log."""
        if N < 1 or self.n % N:
            raise BadModulus(f"{N} does not divide {self.n}")
        return np.arange(i % N, self.n, N, dtype=np.int64) + 1

    def class_index(self, u, N: int):
        """Index i with u in C_i^(N); -1 for zero."""
        u = np.asarray(u)
        return np.where(u == 0, -1, (u - 1) % N)

    # -- element objects -------------------------------------------------------
    def element(self, code: int) -> "FieldElement":
        return FieldElement(self, int(code))

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    @property
    def omega(self) -> "FieldElement":
        return FieldElement(self, int(self.elem(1)))

    def coefficients(self, code: int) -> list[int]:
        """Polynomial-basis coordinates (ascending) of the element with this code."""
        return [int(c) for c in self.digits[self.vec_of_code[code]]]

    def from_coefficients(self, coeffs) -> int:
        vec = sum((int(c) % self.p) * self.p**k for k, c in enumerate(coeffs))
        return int(self.code_of_vec[vec])


@lru_cache(maxsize=None)
def build_field(p: int, s: int) -> FieldTable:
    """Canonical F_{p^s}; cached, so repeated calls return the same table."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p == 2:
        raise EvenCharacteristic("characteristic 2 is not supported")
    if s < 1:
        raise TooLarge(f"extension degree must be positive, got {s}")
    if p**s >= MAX_ORDER:
        raise TooLarge(f"{p}^{s} exceeds the table size cap")
    return FieldTable(p, s, canonical_modulus(p, s))


def field_from_descriptor(desc: dict) -> FieldTable:
    field = build_field(int(desc["p"]), int(desc["s"]))
    if "modulus" in desc and tuple(desc["modulus"]) != field.modulus:
        raise BadModulus(f"descriptor modulus {desc['modulus']} is not canonical")
    return field


@dataclass(frozen=True)
class FieldElement:
    field: FieldTable
    code: int

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch("elements belong to different fields")
            return other.code
        if isinstance(other, (int, np.integer)):
            return self.field.from_int(int(other))
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return FieldElement(self.field, int(self.field.add(self.code, o)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return FieldElement(self.field, int(self.field.sub(self.code, o)))

    def __rsub__(self, other):
        o = self._other(other)
        return FieldElement(self.field, int(self.field.sub(o, self.code)))

    def __neg__(self):
        return FieldElement(self.field, int(self.field.neg(self.code)))

    def __mul__(self, other):
        o = self._other(other)
        return FieldElement(self.field, int(self.field.mul(self.code, o)))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, int(self.field.inv(self.code)))

    def __truediv__(self, other):
        o = self._other(other)
        return self * FieldElement(self.field, int(self.field.inv(o)))

    def __pow__(self, k: int):
        return FieldElement(self.field, int(self.field.power(self.code, int(k))))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.code == other.code
        if isinstance(other, (int, np.integer)):
            return self.code == self.field.from_int(int(other))
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.code))

    def __bool__(self):
        return self.code != 0

    @property
    def log(self) -> int:
        if self.code == 0:
            raise ZeroInverse("log of zero")
        return self.code - 1

    def __repr__(self):
        if self.code == 0:
            return "0"
        return f"w^{self.code - 1}"


def arith(kind: str, x: FieldElement, y=None) -> FieldElement:
    """Dispatch helper: kind in {add, mul, inv, pow}."""
    if kind == "add":
        return x + y
    if kind == "mul":
        return x * y
    if kind == "inv":
        return x.inverse()
    if kind == "pow":
        return x ** int(y)
    raise ValueError(f"unknown operation {kind!r}")


def trace(x: FieldElement, to_degree: int = 1) -> FieldElement:
    return x.field.element(int(x.field.trace(x.code, to_degree)))


def frobenius(x: FieldElement, k: int = 1, d: int = 1) -> FieldElement:
    return x.field.element(int(x.field.frobenius(x.code, k, d)))


def cyclotomic_class(field: FieldTable, N: int, i: int) -> list[FieldElement]:
    return [field.element(c) for c in field.cyclotomic_class(N, i)]
