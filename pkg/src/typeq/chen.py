"""Generalized Chen construction of type-Q sets from semi-primitive classes.

Inputs are an integer m with 2m | q + 1, an m-subset K of Z_2m avoiding its
own translate by m, and two subsets T0, T1 of F_q.  From them

    S0 = {x : Tr_{q^2/q}(x) in T0},   S1 = {x : Tr_{q^2/q}(x w^m) in T1},
    A0 = S0 - S1,  A1 = S1 - S0,
    D0 = union of C_i^(2m), i in K,  D1 = union of C_{i+m}^(2m), i in K,

and the candidate set is {(x, xy) : x in D0, y in A0} u {(x, xy) : x in D1,
y in A1}, plus the axis piece {(0, x) : x in D_eps} when |T0| = |T1| = (q-1)/2.

Subsets of F_q are given as codes of F_q itself (0 is zero, k + 1 is
w_q^k with w_q = w^(q+1)).  ``omega_log`` selects the primitive element
w^omega_log of F_{q^2} that the construction is relative to; the default
is the canonical w.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cyclotomic import CycInt, char_sum, semiprimitive_eps
from .errors import BadK, BadM, BadTSizes, OracleMismatch, PropertyViolation, VariantSizeMismatch
from .geometry import INFINITY, Bundle, PointSet, Spread, half_order
from .gfcore import FieldTable

T_PRESETS = ("squares", "first-half")


def fq_to_big(field: FieldTable, codes) -> np.ndarray:
    """Map codes of F_q to codes of F_{q^2} under w_q = w^(q+1)."""
    q = half_order(field)
    c = np.asarray(codes, dtype=np.int64)
    return np.where(c == 0, 0, (q + 1) * (c - 1) + 1)


def big_to_fq(field: FieldTable, codes) -> np.ndarray:
    q = half_order(field)
    c = np.asarray(codes, dtype=np.int64)
    if np.any((c != 0) & ((c - 1) % (q + 1) != 0)):
        raise ValueError("element is not in the subfield F_q")
    return np.where(c == 0, 0, (c - 1) // (q + 1) + 1)


def t_preset(q: int, name: str, with_zero: bool = False) -> tuple[int, ...]:
    """A (q-1)/2-subset of F_q (as F_q codes), optionally extended by 0."""
    if name == "squares":
        codes = [2 * j + 1 for j in range((q - 1) // 2)]
    elif name == "first-half":
        codes = [j + 1 for j in range((q - 1) // 2)]
    else:
        raise ValueError(f"unknown T preset {name!r}; choose from {T_PRESETS}")
    return tuple(([0] if with_zero else []) + codes)


def admissible_m(q: int) -> list[int]:
    return [m for m in range(1, (q + 1) // 2 + 1) if (q + 1) % (2 * m) == 0]


@dataclass(frozen=True)
class ChenParams:
    field: FieldTable
    m: int
    ell: int
    t: int
    K: tuple
    T0: tuple  # F_q codes
    T1: tuple
    eps: int
    omega_log: int = 1

    @property
    def q(self) -> int:
        return half_order(self.field)

    @property
    def variant(self) -> int:
        return 0 if len(self.T1) == (self.q - 1) // 2 else 1

    def omega_m(self) -> int:
        """Code of w^m for the chosen primitive element w."""
        return int(self.field.elem((self.omega_log * self.m) % self.field.n))

    def class_of(self, u) -> np.ndarray:
        """Index mod 2m of u relative to the chosen primitive element, -1 for zero."""
        f = self.field
        u = np.asarray(u, dtype=np.int64)
        ginv = pow(self.omega_log, -1, f.n)
        return np.where(u == 0, -1, ((u - 1) * ginv) % f.n % (2 * self.m))

    def to_dict(self) -> dict:
        return {
            "m": self.m, "ell": self.ell, "t": self.t, "K": list(self.K),
            "T0": list(self.T0), "T1": list(self.T1), "eps": self.eps,
            "omega_log": self.omega_log,
        }


def derive_params(field: FieldTable, m: int = 1, K=None, T0=None, T1=None, omega_log: int = 1) -> ChenParams:
    """Validate (m, K, T0, T1) and compute ell, t and eps.

    T0 defaults to the squares of F_q; T1 to the same set.
    """
    q = half_order(field)
    p, s = field.p, field.s // 2
    if m < 1 or (q + 1) % (2 * m):
        raise BadM(f"2m={2 * m} does not divide q+1={q + 1}")
    if math.gcd(omega_log, field.n) != 1:
        raise ValueError(f"w^{omega_log} is not a primitive element")
    ell = next(l for l in range(1, 2 * m + 1) if (p**l + 1) % (2 * m) == 0)
    if s % ell:
        raise BadM(f"ell={ell} does not divide s={s}")
    K = tuple(range(m)) if K is None else tuple(sorted(int(k) for k in K))
    if len(K) != m or len(set(K)) != m or any(not 0 <= k < 2 * m for k in K):
        raise BadK(f"K={K} must be an {m}-subset of Z_{2 * m}")
    if set(K) & {(k + m) % (2 * m) for k in K}:
        raise BadK(f"K={K} meets its translate by m")
    T0 = t_preset(q, "squares") if T0 is None else tuple(sorted(int(x) for x in T0))
    T1 = t_preset(q, "squares") if T1 is None else tuple(sorted(int(x) for x in T1))
    for name, T in (("T0", T0), ("T1", T1)):
        if len(set(T)) != len(T) or any(not 0 <= x < q for x in T):
            raise BadTSizes(f"{name}={T} is not a set of F_{q} codes")
    if len(T0) != (q - 1) // 2 or len(T1) not in ((q - 1) // 2, (q + 1) // 2):
        raise BadTSizes(
            f"need |T0|=(q-1)/2 and |T1| in {{(q-1)/2, (q+1)/2}}, got {len(T0)}, {len(T1)}"
        )
    eps = semiprimitive_eps(p, s, m)
    return ChenParams(field, m, ell, s // ell, K, T0, T1, eps, omega_log % field.n)


def random_params(field: FieldTable, rng: np.random.Generator, variant: int = 0, m: int | None = None) -> ChenParams:
    """Uniformly sampled admissible (m, K, T0, T1)."""
    q = half_order(field)
    if m is None:
        m = int(rng.choice(admissible_m(q)))
    K = [int(i + m * rng.integers(2)) for i in range(m)]
    T0 = rng.choice(q, size=(q - 1) // 2, replace=False)
    T1 = rng.choice(q, size=(q - 1) // 2 + variant, replace=False)
    return derive_params(field, m, K, T0.tolist(), T1.tolist())


@dataclass(frozen=True)
class ChenSets:
    S0: np.ndarray
    S1: np.ndarray
    A0: np.ndarray
    A1: np.ndarray
    D0: np.ndarray
    D1: np.ndarray
    epsilon: int

    @property
    def D_eps(self) -> np.ndarray:
        return self.D1 if self.epsilon else self.D0

    @property
    def D_eps1(self) -> np.ndarray:
        return self.D0 if self.epsilon else self.D1


def _trace_set(params: ChenParams, T, shift: int) -> np.ndarray:
    """Codes x with Tr_{q^2/q}(x * shift) in T."""
    f = params.field
    codes = np.arange(f.order, dtype=np.int64)
    tr = f.trace(f.mul(codes, shift), f.s // 2)
    return codes[np.isin(tr, fq_to_big(f, list(T)))]


def build_sets(params: ChenParams) -> ChenSets:
    f = params.field
    q = params.q
    S0 = _trace_set(params, params.T0, 1)
    S1 = _trace_set(params, params.T1, params.omega_m())
    A0 = np.setdiff1d(S0, S1)
    A1 = np.setdiff1d(S1, S0)
    cls = params.class_of(np.arange(1, f.order))
    nonzero = np.arange(1, f.order, dtype=np.int64)
    D0 = nonzero[np.isin(cls, params.K)]
    D1 = nonzero[np.isin(cls, [(k + params.m) % (2 * params.m) for k in params.K])]
    if len(S0) != q * len(params.T0) or len(S1) != q * len(params.T1):
        raise PropertyViolation("|S_i| != q |T_i|")
    if len(np.intersect1d(S0, S1)) != len(params.T0) * len(params.T1):
        raise PropertyViolation("|S0 n S1| != |T0||T1|")
    return ChenSets(S0, S1, A0, A1, D0, D1, params.eps)


def graph_set(field: FieldTable, xs, ys) -> PointSet:
    """{(x, x y) : x in xs, y in ys}."""
    x = np.repeat(np.asarray(xs, dtype=np.int64), len(ys))
    y = np.tile(np.asarray(ys, dtype=np.int64), len(xs))
    return PointSet.from_codes(field, x, field.mul(x, y))


def axis_set(field: FieldTable, ys) -> PointSet:
    ys = np.asarray(ys, dtype=np.int64)
    return PointSet.from_codes(field, np.zeros_like(ys), ys)


def build_E(params: ChenParams, variant: int = 0, sets: ChenSets | None = None) -> PointSet:
    q = params.q
    want = (q - 1) // 2 + variant
    if variant not in (0, 1) or len(params.T0) != (q - 1) // 2 or len(params.T1) != want:
        raise VariantSizeMismatch(
            f"variant {variant} needs |T0|={(q - 1) // 2}, |T1|={want}; got {len(params.T0)}, {len(params.T1)}"
        )
    cs = sets or build_sets(params)
    f = params.field
    E = graph_set(f, cs.D0, cs.A0) | graph_set(f, cs.D1, cs.A1)
    if variant == 0:
        E = E | axis_set(f, cs.D_eps)
    if E.card != (q**4 - 1) // 4:
        raise PropertyViolation(f"|E|={E.card}, expected {(q**4 - 1) // 4}")
    return E


def build_quadruple(params: ChenParams) -> Bundle:
    """C0..C3 and the slope spread, halves split as A0 u A1 u {inf} vs A0' u A1'."""
    f = params.field
    cs = build_sets(params)
    # S1' uses the complement of T1 in F_q
    q = params.q
    S1p = _trace_set(params, sorted(set(range(q)) - set(params.T1)), params.omega_m())
    A0p = np.setdiff1d(cs.S0, S1p)
    A1p = np.setdiff1d(S1p, cs.S0)
    C0 = build_E(params, 0, cs)
    C1 = graph_set(f, cs.D0, A0p) | graph_set(f, cs.D1, A1p)
    C2 = graph_set(f, cs.D1, cs.A0) | graph_set(f, cs.D0, cs.A1) | axis_set(f, cs.D_eps1)
    C3 = graph_set(f, cs.D1, A0p) | graph_set(f, cs.D0, A1p)
    wm = params.omega_m()
    if C0.scaled(wm) != C2 or C1.scaled(wm) != C3:
        raise PropertyViolation("C2 != w^m C0 or C3 != w^m C1")
    first = sorted(int(y) for y in np.union1d(cs.A0, cs.A1)) + [INFINITY]
    second = sorted(int(y) for y in np.union1d(A0p, A1p))
    return Bundle(
        (C0, C1, C2, C3), Spread(f, "slope"), (first, second),
        construction="chen", params=params.to_dict(),
    )


def chen_original(field: FieldTable) -> Bundle:
    """Chen's original quadruple written out with X, X' and the quadratic classes."""
    f = field
    q = half_order(f)
    codes = np.arange(f.order, dtype=np.int64)
    sq_q = fq_to_big(f, t_preset(q, "squares"))
    X = codes[np.isin(f.trace(codes, f.s // 2), sq_q)]
    Xp = f.mul(X, int(f.elem(1)))
    X1 = np.setdiff1d(X, Xp)
    X2 = np.setdiff1d(Xp, X)
    X3 = np.intersect1d(X, Xp)
    X4 = np.setdiff1d(codes, np.union1d(np.union1d(X1, X2), X3))
    Q0 = f.cyclotomic_class(2, 0)
    Q1 = f.cyclotomic_class(2, 1)
    tau = 0 if q % 4 == 1 else 1
    Qt, Qt1 = (Q0, Q1) if tau == 0 else (Q1, Q0)
    C0 = graph_set(f, Q0, X1) | graph_set(f, Q1, X2) | axis_set(f, Qt)
    C1 = graph_set(f, Q0, X3) | graph_set(f, Q1, X4)
    C2 = graph_set(f, Q1, X1) | graph_set(f, Q0, X2) | axis_set(f, Qt1)
    C3 = graph_set(f, Q1, X3) | graph_set(f, Q0, X4)
    first = sorted(int(y) for y in np.union1d(X1, X2)) + [INFINITY]
    second = sorted(int(y) for y in np.union1d(X3, X4))
    return Bundle(
        (C0, C1, C2, C3), Spread(f, "slope"), (first, second),
        construction="chen-preset-original", params={"tau": tau},
    )


def original_as_params(field: FieldTable) -> ChenParams:
    """Parameters of the generalized construction that reproduce :func:`chen_original`.

    X' = w X is S1 relative to the primitive element w^-1, hence omega_log = -1.
    """
    q = half_order(field)
    sq = t_preset(q, "squares")
    return derive_params(field, 1, (0,), sq, sq, omega_log=-1)


# -- lemma oracles -------------------------------------------------------------

@dataclass
class OracleReport:
    a: int
    b: int
    variant: int
    computed: dict
    expected: dict
    mismatches: list

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def __bool__(self) -> bool:
        return self.passed


def _sum_over(field: FieldTable, xs, ys, a: int, b: int) -> CycInt:
    """sum over x in xs, y in ys of psi(x (a + b y))."""
    inner = field.add(a, field.mul(b, np.asarray(ys, dtype=np.int64)))
    vals = field.mul(np.asarray(xs, dtype=np.int64)[:, None], inner[None, :])
    return char_sum(field, vals.ravel(), 1)


def _point_char(E: PointSet, a: int, b: int) -> CycInt:
    f = E.field
    pts = E.points()
    return char_sum(f, f.add(f.mul(pts[:, 0], a), f.mul(pts[:, 1], b)), 1)


def lemma_oracle_U(params: ChenParams, a: int, b: int, variant: int | None = None,
                   sets: ChenSets | None = None, E: PointSet | None = None) -> OracleReport:
    """Direct sums U1, U2, U3 against their closed forms and the final character value.

    For b = 0 the two b = 0 evaluations of psi_{a,0}(E) are checked instead.
    """
    f = params.field
    q = params.q
    variant = params.variant if variant is None else variant
    cs = sets or build_sets(params)
    E = E or build_E(params, variant, cs)
    t0, t1 = len(params.T0), len(params.T1)
    hi, lo = (q * q - 1) // 4, (-3 * q * q - 1) // 4
    computed: dict = {}
    expected: dict = {}
    psi = _point_char(E, a, b)
    computed["psi"] = psi
    if b == 0:
        if a == 0:
            raise ValueError("(a, b) = (0, 0) is the trivial character")
        if variant == 0:
            expected["psi"] = hi
        else:
            in_eps = int(params.class_of(f.inv(a))) in _d_indices(params, params.eps)
            expected["psi"] = hi if in_eps else lo
    else:
        binv = int(f.inv(b))
        in_d0 = int(params.class_of(binv)) in params.K
        z = int(f.neg(f.mul(a, binv)))
        in_s0 = bool(np.isin(z, cs.S0))
        in_s1 = bool(np.isin(z, cs.S1))
        both = np.intersect1d(cs.S0, cs.S1)
        computed["U1"] = _sum_over(f, cs.D0, cs.S0, a, b)
        computed["U2"] = _sum_over(f, cs.D1, cs.S1, a, b)
        computed["U3"] = _sum_over(f, np.arange(1, f.order), both, a, b)
        expected["U1"] = (-q * t0 + q * q * in_s0) if in_d0 else 0
        expected["U2"] = (-q * t1 + q * q * in_s1) if in_d0 else 0
        expected["U3"] = -t0 * t1 + q * q * (in_s0 and in_s1)
        if in_d0:
            branch = -q * (t0 + t1) + t0 * t1 if not (in_s0 or in_s1) else -q * (t0 + t1 - q) + t0 * t1
        else:
            branch = -q * q + t0 * t1 if (in_s0 and in_s1) else t0 * t1
        computed["U1+U2-U3"] = computed["U1"] + computed["U2"] - computed["U3"]
        expected["U1+U2-U3"] = branch
        if variant == 0:
            computed["psi(b D_eps)"] = char_sum(f, cs.D_eps, b)
            expected["psi(b D_eps)"] = (-1 - q) // 2 if in_d0 else (-1 + q) // 2
            expected["psi"] = branch + expected["psi(b D_eps)"]
        else:
            expected["psi"] = branch
        low = (in_d0 and not in_s0 and not in_s1) or (not in_d0 and in_s0 and in_s1)
        expected["psi[table]"] = lo if low else hi
        computed["psi[table]"] = psi
    mismatches = []
    for key, want in expected.items():
        got = computed[key]
        if not got.is_rational():
            mismatches.append({"term": key, "reason": "NotRational", "value": got.to_dict()})
        elif got.to_int() != want:
            mismatches.append({"term": key, "value": got.to_int(), "expected": want})
    return OracleReport(
        a, b, variant,
        {k: (v.to_int() if v.is_rational() else v.to_dict()) for k, v in computed.items()},
        expected, mismatches,
    )


def _d_indices(params: ChenParams, which: int) -> tuple:
    return params.K if which == 0 else tuple((k + params.m) % (2 * params.m) for k in params.K)


def check_oracles(params: ChenParams, pairs, variant: int | None = None) -> list[OracleReport]:
    """Run :func:`lemma_oracle_U` over pairs and raise on the first mismatch."""
    variant = params.variant if variant is None else variant
    cs = build_sets(params)
    E = build_E(params, variant, cs)
    out = []
    for a, b in pairs:
        r = lemma_oracle_U(params, int(a), int(b), variant, cs, E)
        if not r:
            raise OracleMismatch(f"(a, b) = ({a}, {b}): {r.mismatches}")
        out.append(r)
    return out
