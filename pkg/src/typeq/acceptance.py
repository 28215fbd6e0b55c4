"""The acceptance matrix: ten criteria, each run exhaustively at its stated scale.

Every criterion returns a :class:`CriterionResult`; nothing here loosens a
check, a failing sub-check is reported with its location.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import chen, verifier, wilson_xiang as wx
from .cyclotomic import (
    CycInt,
    davenport_hasse_check,
    gauss_period,
    quadratic_gauss_sum,
    quadratic_gauss_sum_square,
    semiprimitive_half_check,
)
from .geometry import PointSet
from .gfcore import build_field, prime_power

FIELDS = {3: (3, 1), 5: (5, 1), 7: (7, 1), 9: (3, 2), 11: (11, 1), 13: (13, 1), 17: (17, 1), 25: (5, 2)}
Q_LIST = (3, 5, 7, 9, 11, 13)


def big_field(q: int):
    """F_{q^2} for an odd prime power q."""
    p, s = prime_power(q)
    return build_field(p, 2 * s)


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    checks: int = 0
    failures: list = dc_field(default_factory=list)
    elapsed: float = 0.0
    notes: str = ""

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        extra = f"; {self.notes}" if self.notes else ""
        return f"[{tag}] criterion {self.number}: {self.name} ({self.checks} checks, {self.elapsed:.1f}s{extra})"


class _Tally:
    def __init__(self):
        self.checks = 0
        self.failures: list = []

    def __call__(self, ok: bool, where) -> bool:
        self.checks += 1
        if not ok:
            self.failures.append(where)
        return ok


def _result(number: int, name: str, tally: _Tally, t0: float, notes: str = "") -> CriterionResult:
    return CriterionResult(number, name, not tally.failures, tally.checks, tally.failures[:20],
                           time.perf_counter() - t0, notes)


def random_K(m: int, rng: np.random.Generator) -> list[int]:
    return [int(i + m * rng.integers(2)) for i in range(m)]


# -- 1 ------------------------------------------------------------------------

def criterion_gauss(max_base: int = 289) -> CriterionResult:
    t0 = time.perf_counter()
    ok = _Tally()
    for q in range(3, max_base + 1, 2):
        pp = prime_power(q)
        if pp is None:
            continue
        f = build_field(*pp)
        G = quadratic_gauss_sum(f)
        ok(G * G == quadratic_gauss_sum_square(q), {"q": q, "check": "G^2"})
        for i in (0, 1):
            sign = 1 if i == 0 else -1
            ok(gauss_period(f, 2, i) * 2 == G * sign - 1, {"q": q, "check": f"period C_{i}^(2)"})
    return _result(1, "quadratic Gauss sums and order-2 periods", ok, t0)


# -- 2 ------------------------------------------------------------------------

def criterion_semiprimitive(q_list=Q_LIST, seed: int = 2, n_random: int = 20) -> CriterionResult:
    t0 = time.perf_counter()
    ok = _Tally()
    rng = np.random.default_rng(seed)
    for q in q_list:
        f = big_field(q)
        for m in chen.admissible_m(q):
            for K in [list(range(m))] + [random_K(m, rng) for _ in range(n_random)]:
                r = semiprimitive_half_check(f, K)
                ok(r.passed, {"q": q, "m": m, "K": K, "violations": r.violations[:3]})
    return _result(2, "semi-primitive half-class character values", ok, t0)


# -- 3 ------------------------------------------------------------------------

def criterion_davenport_hasse(q_list=(9, 13, 25), tol: float = 1e-6) -> CriterionResult:
    t0 = time.perf_counter()
    ok = _Tally()
    worst = 0.0
    for q in q_list:
        f = build_field(*prime_power(q))
        for ell in (2, 3):
            if (q - 1) % ell:
                continue
            for chi in range(1, q - 1):
                dev = davenport_hasse_check(f, chi, ell, 128)
                worst = max(worst, dev)
                ok(dev < tol, {"q": q, "ell": ell, "chi": chi, "deviation": dev})
    return _result(3, "Davenport-Hasse product formula", ok, t0, f"max deviation {worst:.1e}")


# -- 4, 5 -----------------------------------------------------------------------

def chen_param_sets(q: int, n_random: int, seed: int) -> list[tuple]:
    """(variant-0 params, variant-1 params) pairs: defaults first, then seeded draws."""
    f = big_field(q)
    rng = np.random.default_rng([seed, q])
    sq = chen.t_preset(q, "squares")
    out = [(chen.derive_params(f, 1), chen.derive_params(f, 1, None, sq, chen.t_preset(q, "squares", True)))]
    for _ in range(n_random):
        m = int(rng.choice(chen.admissible_m(q)))
        K = random_K(m, rng)
        T0 = rng.choice(q, (q - 1) // 2, replace=False).tolist()
        T1 = rng.choice(q, (q - 1) // 2, replace=False).tolist()
        extra = [x for x in range(q) if x not in T1]
        T1v = T1 + [int(rng.choice(extra))]
        out.append((chen.derive_params(f, m, K, T0, T1), chen.derive_params(f, m, K, T0, T1v)))
    return out


def _spectrum_ok(ok: _Tally, E: PointSet, q: int, where: dict, jobs) -> None:
    r = verifier.is_type_q(E, jobs=jobs)
    ok(r.passed and r.spectrum == verifier.type_q_multiplicities(q), {**where, "spectrum": r.spectrum})


def criterion_chen(q_list=Q_LIST, n_random: int = 20, seed: int = 4, jobs=None) -> CriterionResult:
    t0 = time.perf_counter()
    ok = _Tally()
    for q in q_list:
        cert = [4 * q**4, 2 * q**4 - q * q, q**4 - q * q]
        for k, (p0, p1) in enumerate(chen_param_sets(q, n_random, seed)):
            where = {"q": q, "set": k, "params": p0.to_dict()}
            _spectrum_ok(ok, chen.build_E(p0, 0), q, {**where, "variant": 0}, jobs)
            _spectrum_ok(ok, chen.build_E(p1, 1), q, {**where, "variant": 1, "T1": list(p1.T1)}, jobs)
            b = chen.build_quadruple(p0)
            r = verifier.bundle_check(b.sets, b.spread, b.halves, jobs=jobs)
            ok(r.passed and r.details["certificate"]["parameters"] == cert,
               {**where, "bundle": [v["reason"] for v in r.violations]})
    return _result(4, "generalized Chen sets and bundles", ok, t0)


def _pairs(q: int, rng: np.random.Generator, n: int) -> list[tuple[int, int]]:
    out = []
    while len(out) < n:
        a, b = (int(v) for v in rng.integers(0, q * q, 2))
        if a or b:
            out.append((a, b))
    return out


def criterion_chen_oracles(q_list=Q_LIST, n_pairs: int = 200, n_sets: int = 20, seed: int = 5) -> CriterionResult:
    t0 = time.perf_counter()
    ok = _Tally()
    rng = np.random.default_rng(seed)
    for q in q_list:
        for k, (p0, p1) in enumerate(chen_param_sets(q, n_sets, seed)):
            for variant, params in ((0, p0), (1, p1)):
                cs = chen.build_sets(params)
                E = chen.build_E(params, variant, cs)
                for a, b in _pairs(q, rng, n_pairs):
                    r = chen.lemma_oracle_U(params, a, b, variant, cs, E)
                    ok(r.passed, {"q": q, "set": k, "variant": variant, "a": a, "b": b, "mismatches": r.mismatches})
    return _result(5, "U1/U2/U3 closed forms", ok, t0)


# -- 6, 7 -----------------------------------------------------------------------

def criterion_wx(q_list=Q_LIST, jobs=None) -> CriterionResult:
    t0 = time.perf_counter()
    ok = _Tally()
    for q in q_list:
        f = big_field(q)
        cert = [4 * q**4, 2 * q**4 - q * q, q**4 - q * q]
        for c in range(1, 2 * (q + 1), 2):
            where = {"q": q, "c": c}
            try:
                s = wx.build_setting(f, c)
                ch = wx.corollary_AB(s)
            except Exception as exc:  # a property or parity hypothesis failed
                ok(False, {**where, "error": repr(exc)})
                continue
            ok(all(s.checks[k] for k in ("P1", "P2", "P3", "P4", "P5", "P6", "P8", "P9")), {**where, "checks": s.checks})
            ok(wx.relative_difference_check(s), {**where, "check": "I2 relative difference set"})
            t = verifier.scheme_table_check(s)
            ok(t.passed and t.details["cells"] == 20 * (q + 1), {**where, "tables": t.violations[:3]})
            b = wx.build_quadruple(s)
            r = verifier.bundle_check(b.sets, b.spread, b.halves, jobs=jobs)
            ok(r.passed and r.details["certificate"]["parameters"] == cert,
               {**where, "bundle": [v["reason"] for v in r.violations], "choices": [x.to_dict() for x in ch]})
    return _result(6, "generalized Wilson-Xiang settings, tables and bundles", ok, t0)


def criterion_wx_oracles(q_list=Q_LIST, n_pairs: int = 200, seed: int = 7) -> CriterionResult:
    t0 = time.perf_counter()
    ok = _Tally()
    rng = np.random.default_rng(seed)
    for q in q_list:
        s = wx.build_setting(big_field(q), 1)
        for choice in wx.corollary_AB(s):
            E = wx.build_E(s, choice)
            if q == 3:
                pairs = [(a, b) for a in range(9) for b in range(9) if a or b]
            else:
                pairs = _pairs(q, rng, n_pairs)
            for a, b in pairs:
                r = wx.lemma_oracle_VW(s, choice, a, b, E)
                ok(r.passed, {"q": q, "variant": choice.variant, "a": a, "b": b, "mismatches": r.mismatches})
    return _result(7, "V/W sums against closed forms", ok, t0)


# -- 8 ------------------------------------------------------------------------

def constructed_sets(q: int, exhaustive: bool, seed: int = 8):
    """(label, PointSet) for every set the constructions produce at q."""
    f = big_field(q)
    n_random = 20 if exhaustive else 0
    for k, (p0, p1) in enumerate(chen_param_sets(q, n_random, seed)):
        b = chen.build_quadruple(p0)
        for i, C in enumerate(b.sets):
            yield f"chen[{k}] C{i}", C
        yield f"chen[{k}] E1", chen.build_E(p1, 1)
    cs = range(1, 2 * (q + 1), 2) if exhaustive else (1,)
    for c in cs:
        b = wx.build_quadruple(wx.build_setting(f, c))
        for i, C in enumerate(b.sets):
            yield f"wx[c={c}] C{i}", C
    for i, C in enumerate(chen.chen_original(f).sets):
        yield f"chen-original C{i}", C


def criterion_cross_oracle(q_list=Q_LIST, jobs=None) -> CriterionResult:
    t0 = time.perf_counter()
    ok = _Tally()
    for q in q_list:
        for label, E in constructed_sets(q, exhaustive=True):
            r = verifier.char_spectrum(E, "both", jobs)
            ok(r.passed and r.spectrum == r.details["hyperplane_spectrum"], {"q": q, "set": label})
    return _result(8, "direct vs hyperplane spectra", ok, t0)


# -- 9 ------------------------------------------------------------------------

def criterion_presets(q_list=Q_LIST, jobs=None) -> CriterionResult:
    t0 = time.perf_counter()
    ok = _Tally()
    for q in q_list:
        f = big_field(q)
        orig = chen.chen_original(f)
        r = verifier.bundle_check(orig.sets, orig.spread, orig.halves, jobs=jobs)
        ok(r.passed, {"q": q, "preset": "chen-original", "bundle": [v["reason"] for v in r.violations]})
        gen = chen.build_quadruple(chen.original_as_params(f))
        ok(all(a == b for a, b in zip(orig.sets, gen.sets)), {"q": q, "preset": "chen-original", "check": "matches generalized"})
    f5 = big_field(5)
    passing = []
    for c in range(1, 12, 2):
        b = wx.wx_original(f5, c)
        if verifier.bundle_check(b.sets, b.spread, b.halves, jobs=jobs).passed:
            passing.append(c)
    ok(bool(passing), {"q": 5, "preset": "wx-original", "passing_c": passing})
    return _result(9, "original Chen and Wilson-Xiang-shaped presets", ok, t0, f"q=5 WX shape passes for c in {passing}")


# -- 10 -----------------------------------------------------------------------

def criterion_negative_controls(q_list=(3, 5), seed: int = 10) -> CriterionResult:
    t0 = time.perf_counter()
    ok = _Tally()
    rng = np.random.default_rng(seed)
    for q in q_list:
        f = big_field(q)
        bundles = {
            "chen": chen.build_quadruple(chen.derive_params(f, 1)),
            "wx": wx.build_quadruple(wx.build_setting(f, 1)),
        }
        for name, b in bundles.items():
            C0 = b.sets[0]
            # flip a member off and a non-member on, keeping the size
            pts = C0.points()
            off = pts[rng.integers(len(pts))]
            free = np.argwhere(~C0.bits)
            free = free[(free[:, 0] != 0) | (free[:, 1] != 0)]
            on = free[rng.integers(len(free))]
            swapped = C0.flipped(*off).flipped(*on)
            r = verifier.is_type_q(swapped)
            ok(not r.passed and any("a" in v for v in r.violations), {"q": q, "set": name, "control": "swap one point"})
            flipped = C0.flipped(*off)
            r = verifier.is_type_q(flipped)
            ok(not r.passed and r.violations[0]["reason"] == "WrongSize" and not r.spectrum,
               {"q": q, "set": name, "control": "wrong size"})
            C = b.sets
            r = verifier.bundle_check((C[0], C[2], C[1], C[3]), b.spread, b.halves)
            ok(not r.passed and any(v["reason"] == "UnionMismatch" for v in r.violations),
               {"q": q, "set": name, "control": "swap C1 and C2"})
            r = verifier.bundle_check(C, b.spread, (b.halves[1], b.halves[0]))
            ok(not r.passed and any(v["reason"] == "UnionMismatch" for v in r.violations),
               {"q": q, "set": name, "control": "swap halves"})
        size = (q**4 - 1) // 4
        cells = rng.choice(np.arange(1, q**4), size, replace=False)
        rand = PointSet.from_codes(f, cells // (q * q), cells % (q * q))
        r = verifier.is_type_q(rand)
        ok(not r.passed and bool(r.violations), {"q": q, "control": "random set"})
    return _result(10, "negative controls", ok, t0)


def run_all(max_q: int = 13, jobs=None, echo=print) -> list[CriterionResult]:
    qs = tuple(q for q in Q_LIST if q <= max_q)
    runs = [
        lambda: criterion_gauss(),
        lambda: criterion_semiprimitive(qs),
        lambda: criterion_davenport_hasse(),
        lambda: criterion_chen(qs, jobs=jobs),
        lambda: criterion_chen_oracles(qs),
        lambda: criterion_wx(qs, jobs=jobs),
        lambda: criterion_wx_oracles(qs),
        lambda: criterion_cross_oracle(qs, jobs=jobs),
        lambda: criterion_presets(qs, jobs=jobs),
        lambda: criterion_negative_controls(),
    ]
    out = []
    for run in runs:
        res = run()
        if echo:
            echo(res.line())
        out.append(res)
    return out
