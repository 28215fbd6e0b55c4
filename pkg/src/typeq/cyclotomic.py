"""Exact arithmetic in Z[zeta_p] and the character sums built on it.

A :class:`CycInt` stores coordinates on the basis ``1, z, ..., z^(p-2)``
(``z = zeta_p``), obtained by eliminating ``z^(p-1) = -(1 + z + ... + z^(p-2))``.
That basis is a Z-basis, so equality and exact division are coordinate-wise.

Additive character sums are formed by histogramming trace residues and
embedding the histogram, so no floating point is involved anywhere except
:func:`davenport_hasse_check`.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .errors import BadModulus, BadOrder, PreconditionViolated, PrimeMismatch
from .gfcore import FieldTable


@dataclass(frozen=True)
class CycInt:
    p: int
    coeffs: tuple = dc_field(default=())

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        if len(c) < self.p - 1:
            c = c + (0,) * (self.p - 1 - len(c))
        elif len(c) > self.p - 1:
            raise ValueError(f"expected {self.p - 1} coordinates, got {len(c)}")
        object.__setattr__(self, "coeffs", c)

    # -- constructors ---------------------------------------------------------
    @classmethod
    def from_int(cls, p: int, n: int) -> "CycInt":
        return cls(p, (n,))

    @classmethod
    def zeta(cls, p: int, k: int = 1) -> "CycInt":
        return cls.from_histogram(p, np.bincount([k % p], minlength=p))

    @classmethod
    def from_histogram(cls, p: int, hist) -> "CycInt":
        """Embed sum_k hist[k] * z^k."""
        h = [int(x) for x in hist]
        if len(h) != p:
            raise ValueError(f"histogram must have {p} buckets")
        top = h[p - 1]
        return cls(p, tuple(h[k] - top for k in range(p - 1)))

    def to_histogram(self) -> list[int]:
        return list(self.coeffs) + [0]

    # -- ring operations ------------------------------------------------------
    def _coerce(self, other) -> "CycInt":
        if isinstance(other, CycInt):
            if other.p != self.p:
                raise PrimeMismatch(f"Z[zeta_{self.p}] vs Z[zeta_{other.p}]")
            return other
        if isinstance(other, (int, np.integer)):
            return CycInt.from_int(self.p, int(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CycInt(self.p, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycInt(self.p, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.p
        # multiply in Z[x]/(x^p - 1), then reduce by 1 + z + ... + z^(p-1) = 0
        prod = [0] * p
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[(i + j) % p] += a * b
        return CycInt.from_histogram(p, prod)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not defined in Z[zeta_p]")
        result = CycInt.from_int(self.p, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def exact_div(self, k: int) -> "CycInt":
        if any(a % k for a in self.coeffs):
            raise ArithmeticError(f"{self} is not divisible by {k} in Z[zeta_{self.p}]")
        return CycInt(self.p, tuple(a // k for a in self.coeffs))

    def conjugate(self) -> "CycInt":
        h = self.to_histogram()
        return CycInt.from_histogram(self.p, [h[(-k) % self.p] for k in range(self.p)])

    def __eq__(self, other):
        if isinstance(other, CycInt):
            return self.p == other.p and self.coeffs == other.coeffs
        if isinstance(other, (int, np.integer)):
            return self.is_rational() and self.coeffs[0] == other
        if isinstance(other, Fraction):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.coeffs))

    # -- inspection -----------------------------------------------------------
    def is_rational(self) -> bool:
        return all(a == 0 for a in self.coeffs[1:])

    def to_int(self) -> int:
        if not self.is_rational():
            raise ValueError(f"{self} is not a rational integer")
        return self.coeffs[0]

    def to_complex(self) -> complex:
        k = np.arange(self.p - 1)
        return complex(np.dot(np.array(self.coeffs, dtype=float), np.exp(2j * np.pi * k / self.p)))

    def to_dict(self) -> dict:
        return {"p": self.p, "coeffs": list(self.coeffs)}

    @classmethod
    def from_dict(cls, d: dict) -> "CycInt":
        return cls(int(d["p"]), tuple(d["coeffs"]))

    def __repr__(self):
        if self.is_rational():
            return f"CycInt({self.coeffs[0]})"
        terms = []
        for k, a in enumerate(self.coeffs):
            if a:
                terms.append(f"{a}" if k == 0 else f"{a}*z^{k}")
        return "CycInt(" + " + ".join(terms) + f"; p={self.p})"


def cyc_arith(kind: str, a: CycInt, b=None):
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "int_embed":
        return CycInt.from_int(a, b) if isinstance(a, int) else CycInt.from_int(a.p, b)
    if kind == "equals":
        return a == b
    raise ValueError(f"unknown operation {kind!r}")


# -- additive character sums ------------------------------------------------

def trace_histogram(field: FieldTable, codes, multiplier: int = 1) -> np.ndarray:
    """Bucket counts of Tr_{F/F_p}(multiplier * x) over the given codes."""
    codes = np.asarray(codes, dtype=np.int64).ravel()
    t = field.trace_p[field.mul(codes, multiplier)]
    return np.bincount(t, minlength=field.p)


def char_sum(field: FieldTable, codes, multiplier: int = 1) -> CycInt:
    """psi(multiplier * S) = sum over x in S of zeta_p^Tr(multiplier * x)."""
    return CycInt.from_histogram(field.p, trace_histogram(field, codes, multiplier))


def rational_char_sum(field: FieldTable, codes, multiplier: int = 1) -> int | None:
    """The character sum as an int, or None when it is not rational."""
    h = trace_histogram(field, codes, multiplier)
    if np.all(h[1:] == h[1]):
        return int(h[0] - h[1])
    return None


def quadratic_gauss_sum(field: FieldTable) -> CycInt:
    """G(eta) = sum over x != 0 of eta(x) zeta_p^Tr(x), eta = +1 on squares."""
    p = field.p
    squares = field.cyclotomic_class(2, 0)
    nonsquares = field.cyclotomic_class(2, 1)
    hist = trace_histogram(field, squares) - trace_histogram(field, nonsquares)
    return CycInt.from_histogram(p, hist)


def gauss_period(field: FieldTable, N: int, i: int) -> CycInt:
    return char_sum(field, field.cyclotomic_class(N, i))


def quadratic_gauss_sum_square(q: int) -> int:
    """(-1)^((q-1)/2) q, the value G(eta)^2 must take."""
    return q if q % 4 == 1 else -q


# -- semi-primitive corollary ---------------------------------------------

@dataclass
class SemiprimitiveReport:
    q: int
    m: int
    K: tuple
    eps: int
    table: dict  # b-code -> (character value, predicted, coset label)
    passed: bool
    violations: list

    def value_counts(self) -> dict:
        out: dict[int, int] = {}
        for value, _, _ in self.table.values():
            out[value] = out.get(value, 0) + 1
        return out


def semiprimitive_eps(p: int, s: int, m: int) -> int:
    """Selector for the half D_eps, with q = p**s and 2m | q + 1."""
    ell = next(l for l in range(1, 2 * m + 1) if (p**l + 1) % (2 * m) == 0)
    t = s // ell
    return 1 if ((p**ell + 1) // (2 * m)) % 2 == 0 and t % 2 == 1 else 0


def semiprimitive_half_check(field: FieldTable, K, eps: int | None = None) -> SemiprimitiveReport:
    """Evaluate psi(b D_eps) for every b != 0 and compare with the two-case prediction.

    ``field`` is F_{q^2}; ``K`` is an m-subset of Z_{2m} with K and K + m
    disjoint; D_0 (resp. D_1) is the union of the classes C_i^(2m) for i in K
    (resp. K + m).  The prediction is (-1 - q)/2 when b^-1 lies in D_0 and
    (-1 + q)/2 when b^-1 lies in D_1.
    """
    if field.s % 2:
        raise PreconditionViolated("field must be a quadratic extension F_{q^2}")
    q = field.p ** (field.s // 2)
    K = tuple(sorted(int(k) for k in K))
    m = len(K)
    if m == 0 or (q + 1) % (2 * m):
        raise PreconditionViolated(f"2m={2 * m} does not divide q+1={q + 1}")
    if any(not 0 <= k < 2 * m for k in K) or set(K) & {(k + m) % (2 * m) for k in K}:
        raise PreconditionViolated(f"K={K} is not a valid half of Z_{2 * m}")
    if eps is None:
        eps = semiprimitive_eps(field.p, field.s // 2, m)
    shift = 0 if eps == 0 else m
    d_eps = np.concatenate([field.cyclotomic_class(2 * m, k + shift) for k in K])
    kset = set(K)
    table = {}
    violations = []
    for b in range(1, field.order):
        value = rational_char_sum(field, d_eps, b)
        binv_class = int(field.class_index(field.inv(b), 2 * m))
        in_d0 = binv_class in kset
        predicted = (-1 - q) // 2 if in_d0 else (-1 + q) // 2
        table[b] = (value, predicted, "D0" if in_d0 else "D1")
        if value != predicted:
            violations.append({"b": b, "value": value, "predicted": predicted})
    return SemiprimitiveReport(q, m, K, eps, table, not violations, violations)


# -- Davenport-Hasse product formula (numeric) -----------------------------

def davenport_hasse_check(field: FieldTable, chi_index: int, ell: int, precision_bits: int = 128):
    """Max |lhs - rhs| of the Davenport-Hasse product formula.

    chi is the multiplicative character omega^k -> e^(2 pi i chi_index k/(q-1)),
    chi' has order ``ell``.  Gauss sums run over the nonzero elements with
    the canonical additive character, so the trivial character gives -1.
    """
    import mpmath

    n = field.n
    if ell < 2 or n % ell:
        raise BadOrder(f"ell={ell} must divide q-1={n} and exceed 1")
    if chi_index % n == 0:
        raise BadOrder("chi must be nontrivial")
    logs = np.arange(n)
    tr = field.trace_p[logs + 1].tolist()
    with mpmath.workprec(precision_bits):
        zeta_p = [mpmath.expjpi(mpmath.mpf(2 * k) / field.p) for k in range(field.p)]
        root = [mpmath.expjpi(mpmath.mpf(2 * k) / n) for k in range(n)]

        def gauss(j: int):
            j %= n
            return mpmath.fsum(root[(j * k) % n] * zeta_p[tr[k]] for k in range(n))

        def chi_power(j: int, code: int):
            return root[(j * (code - 1)) % n]

        step = n // ell
        lhs = gauss(chi_index)
        ell_code = field.from_int(ell)
        rhs = gauss(ell * chi_index) / chi_power(ell * chi_index, ell_code)
        for i in range(1, ell):
            rhs *= gauss(i * step) / gauss(chi_index + i * step)
        return float(abs(lhs - rhs))
