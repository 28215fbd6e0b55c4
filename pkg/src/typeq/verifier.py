"""Exhaustive verification: character spectra, type-Q tests, spreads, bundles.

Two independent spectrum engines are provided:

``direct``
    For every character (a, b) the histogram of Tr_{q^2/p}(a x + b y) over E
    is formed.  With the one-hot tensor U[a, r, x] = [Tr(a x) = r] all
    histograms come out of one product U E U^T followed by a cyclic fold of
    the two residue axes.
``hyperplane``
    Projective points of S are intersected with hyperplanes
    Tr_{q^2/q}(a x + b y) = 0, and psi_{a,b}(E) = q |H_{a,b} n S| - |S|.

Both products run in float64; every entry is a count below 2^53, so the
results are exact integers.
"""
from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np

from .cyclotomic import CycInt, char_sum, quadratic_gauss_sum
from .errors import NotClosed, NotProjective
from .geometry import PointSet, Spread, half_order
from .gfcore import FieldTable, build_field

MAX_VIOLATIONS = 20


@dataclass
class Report:
    check: str
    passed: bool
    spectrum: dict = dc_field(default_factory=dict)
    violations: list = dc_field(default_factory=list)
    elapsed_ms: float = 0.0
    details: dict = dc_field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "pass": self.passed,
            "spectrum": {str(k): v for k, v in sorted(self.spectrum.items())},
            "violations": self.violations,
            "elapsed_ms": round(self.elapsed_ms, 3),
            **({"details": self.details} if self.details else {}),
        }


SpectrumReport = Report


def type_q_values(q: int) -> tuple[int, int]:
    return (q * q - 1) // 4, (-3 * q * q - 1) // 4


def type_q_size(q: int) -> int:
    return (q**4 - 1) // 4


def type_q_multiplicities(q: int) -> dict:
    hi, lo = type_q_values(q)
    return {hi: 3 * (q**4 - 1) // 4, lo: (q**4 - 1) // 4}


def menon_hadamard_parameters(q: int) -> tuple[int, int, int]:
    m = q * q
    return 4 * m * m, 2 * m * m - m, m * m - m


def _default_jobs(jobs: int | None) -> int:
    return max(1, jobs or os.cpu_count() or 1)


# -- direct engine ---------------------------------------------------------

@lru_cache(maxsize=8)
def _residue_onehot(field: FieldTable) -> np.ndarray:
    """(order * p, order) float array; row a*p + r, column x: [Tr_{F/F_p}(a x) = r]."""
    codes = np.arange(field.order, dtype=np.int64)
    tr = field.trace_p[field.mul(codes[:, None], codes[None, :])]
    onehot = np.zeros((field.order, field.p, field.order), dtype=np.float64)
    a_idx, x_idx = np.indices(tr.shape)
    onehot[a_idx, tr, x_idx] = 1.0
    out = onehot.reshape(field.order * field.p, field.order)
    out.setflags(write=False)
    return out


def character_histograms(E: PointSet, jobs: int | None = None) -> np.ndarray:
    """h[a, b, r] = #{(x, y) in E : Tr(a x + b y) = r} for all a, b."""
    f = E.field
    n, p = f.order, f.p
    U = _residue_onehot(f)
    right = E.bits.astype(np.float64) @ U.T  # (x, b*p + r2)
    block = max(1, min(n, (1 << 22) // (p * n * p)))
    starts = list(range(0, n, block))
    out = np.empty((n, n, p), dtype=np.int64)

    def work(a0: int) -> None:
        a1 = min(n, a0 + block)
        c = U[a0 * p : a1 * p] @ right  # ((a, r1), (b, r2))
        c = np.rint(c).astype(np.int64).reshape(a1 - a0, p, n, p)
        h = np.zeros((a1 - a0, n, p), dtype=np.int64)
        for r1 in range(p):
            h += np.roll(c[:, r1], r1, axis=-1)
        out[a0:a1] = h

    jobs = _default_jobs(jobs)
    if jobs == 1 or len(starts) == 1:
        for a0 in starts:
            work(a0)
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            list(pool.map(work, starts))
    return out


def _spectrum_from_values(values: np.ndarray, mask: np.ndarray) -> dict:
    vals, counts = np.unique(values[mask], return_counts=True)
    return {int(v): int(c) for v, c in zip(vals, counts)}


def _direct(E: PointSet, jobs: int | None):
    h = character_histograms(E, jobs)
    rational = np.all(h[..., 1:] == h[..., 1:2], axis=-1)
    values = h[..., 0] - h[..., 1]
    nontrivial = np.ones(rational.shape, dtype=bool)
    nontrivial[0, 0] = False
    return values, rational, nontrivial, h


def _direct_report(E: PointSet, jobs: int | None) -> Report:
    t0 = time.perf_counter()
    values, rational, nontrivial, h = _direct(E, jobs)
    bad = np.argwhere(nontrivial & ~rational)
    violations = []
    for a, b in bad[:MAX_VIOLATIONS]:
        violations.append(
            {"a": int(a), "b": int(b), "reason": "NotRational",
             "value": CycInt.from_histogram(E.field.p, h[a, b]).to_dict()}
        )
    report = Report(
        "char_spectrum[direct]",
        passed=len(bad) == 0,
        spectrum=_spectrum_from_values(values, nontrivial & rational),
        violations=violations,
        details={"non_rational": int(len(bad))},
    )
    report.elapsed_ms = (time.perf_counter() - t0) * 1e3
    report.details["values"] = values
    return report


# -- hyperplane engine -------------------------------------------------------

def canonical_mask(field: FieldTable) -> np.ndarray:
    """Vectors (x, y) that are the canonical representative of their projective point.

    The first nonzero coordinate is scaled into omega^j with 0 <= j < q + 1.
    """
    q = half_order(field)
    codes = np.arange(field.order)
    lead = (codes >= 1) & (codes - 1 < q + 1)
    mask = np.zeros((field.order, field.order), dtype=bool)
    mask[lead, :] = True
    mask[0, :] = lead
    return mask


def projectivize(E: PointSet) -> np.ndarray:
    """Canonical (code_x, code_y) representatives of the projective points of E."""
    if E.bits[0, 0]:
        raise NotClosed("the zero vector is not a projective point")
    if not E.is_fq_closed():
        raise NotClosed("set is not closed under F_q^* scaling")
    return np.argwhere(E.bits & canonical_mask(E.field))


@lru_cache(maxsize=8)
def _subtrace_onehot(field: FieldTable):
    q = half_order(field)
    codes = np.arange(field.order, dtype=np.int64)
    tq = field.trace(field.mul(codes[:, None], codes[None, :]), field.s // 2)
    sub = field.subfield_codes(field.s // 2)
    index = np.full(field.order, -1, dtype=np.int64)
    index[sub] = np.arange(q)
    onehot = np.zeros((q, field.order, field.order), dtype=np.float64)
    a_idx, x_idx = np.indices(tq.shape)
    onehot[index[tq], a_idx, x_idx] = 1.0
    neg_index = index[field.neg(sub)]
    onehot.setflags(write=False)
    return onehot, neg_index


def hyperplane_counts(field: FieldTable, reps: np.ndarray) -> np.ndarray:
    """count[a, b] = #{points <(x, y)> in reps : Tr_{q^2/q}(a x + b y) = 0}."""
    onehot, neg_index = _subtrace_onehot(field)
    P = np.zeros((field.order, field.order), dtype=np.float64)
    if len(reps):
        P[reps[:, 0], reps[:, 1]] = 1.0
    count = np.zeros((field.order, field.order), dtype=np.float64)
    for v in range(onehot.shape[0]):
        count += onehot[v] @ P @ onehot[neg_index[v]].T
    return np.rint(count).astype(np.int64)


def _hyperplane_report(E: PointSet) -> Report:
    t0 = time.perf_counter()
    f = E.field
    q = half_order(f)
    if not E.is_fq_closed() or E.bits[0, 0]:
        raise NotClosed("hyperplane method needs an F_q^*-closed set without the origin")
    reps = projectivize(E)
    counts = hyperplane_counts(f, reps)
    hyper = canonical_mask(f)
    values = q * counts - len(reps)
    spectrum = {
        v: c * (q - 1) for v, c in _spectrum_from_values(values, hyper).items()
    }
    report = Report("char_spectrum[hyperplane]", passed=True, spectrum=spectrum)
    report.details["values"] = values
    report.details["hyperplane_mask"] = hyper
    report.elapsed_ms = (time.perf_counter() - t0) * 1e3
    return report


def _public(report: Report) -> Report:
    report.details = {k: v for k, v in report.details.items() if not isinstance(v, np.ndarray)}
    return report


def char_spectrum(E: PointSet, method: str = "direct", jobs: int | None = None) -> Report:
    """Value -> multiplicity over all q^4 - 1 nontrivial characters of E."""
    if method == "direct":
        return _public(_direct_report(E, jobs))
    if method == "hyperplane":
        return _public(_hyperplane_report(E))
    if method == "both":
        d = _direct_report(E, jobs)
        hp = _hyperplane_report(E)
        mask = hp.details["hyperplane_mask"].copy()
        mask[0, 0] = False
        disagree = np.argwhere(mask & (d.details["values"] != hp.details["values"]))
        report = Report(
            "char_spectrum[both]",
            passed=d.passed and len(disagree) == 0 and d.spectrum == hp.spectrum,
            spectrum=d.spectrum,
            violations=d.violations
            + [{"a": int(a), "b": int(b), "reason": "EngineDisagreement"} for a, b in disagree[:MAX_VIOLATIONS]],
            elapsed_ms=d.elapsed_ms + hp.elapsed_ms,
            details={"hyperplane_spectrum": hp.spectrum},
        )
        return report
    raise ValueError(f"unknown method {method!r}")


def is_type_q(E: PointSet, method: str = "direct", jobs: int | None = None) -> Report:
    """Size gate plus the two-value character test."""
    t0 = time.perf_counter()
    q = half_order(E.field)
    if E.card != type_q_size(q):
        return Report(
            "is_type_q",
            passed=False,
            violations=[{"reason": "WrongSize", "card": E.card, "expected": type_q_size(q)}],
            elapsed_ms=(time.perf_counter() - t0) * 1e3,
        )
    allowed = set(type_q_values(q))
    if method == "hyperplane" and not E.is_fq_closed():
        return Report("is_type_q", passed=False, violations=[{"reason": "NotClosed"}])
    if method == "both":
        summary = char_spectrum(E, "both", jobs)
        values = None
    else:
        full = _direct_report(E, jobs) if method == "direct" else _hyperplane_report(E)
        values = full.details["values"]
        summary = _public(full)
    violations = list(summary.violations)
    if values is None:
        values = _direct_report(E, jobs).details["values"]
    nontrivial = np.ones(values.shape, dtype=bool)
    nontrivial[0, 0] = False
    if method == "hyperplane":
        nontrivial &= canonical_mask(E.field)
    bad = np.argwhere(nontrivial & ~np.isin(values, list(allowed)))
    for a, b in bad[:MAX_VIOLATIONS]:
        violations.append({"a": int(a), "b": int(b), "reason": "ValueOutsideTypeQ", "value": int(values[a, b])})
    passed = summary.passed and len(bad) == 0 and summary.spectrum == type_q_multiplicities(q)
    return Report(
        "is_type_q",
        passed=passed,
        spectrum=summary.spectrum,
        violations=violations,
        elapsed_ms=(time.perf_counter() - t0) * 1e3,
        details={"method": method, "bad_characters": int(len(bad))},
    )


def projective_parameters(q: int) -> tuple[int, int, int, int]:
    """(n, k, h1, h2) of a projective set of type Q in PG(3, q)."""
    return (q**4 - 1) // (4 * (q - 1)), 4, (q - 1) ** 2 // 4, (q + 1) ** 2 // 4


def projective_type_q(field: FieldTable, points) -> Report:
    """Hyperplane-intersection test on a list of canonical projective points."""
    q = half_order(field)
    pts = np.asarray(points, dtype=np.int64).reshape(-1, 2)
    canon = canonical_mask(field)
    if len(pts) and not np.all(canon[pts[:, 0], pts[:, 1]]):
        raise NotProjective("points must be canonical projective representatives")
    if len({tuple(p) for p in pts.tolist()}) != len(pts):
        raise NotProjective("duplicate projective points")
    n, _, h1, h2 = projective_parameters(q)
    if len(pts) != n:
        return Report("projective_type_q", False, violations=[{"reason": "WrongSize", "n": len(pts), "expected": n}])
    counts = hyperplane_counts(field, pts)
    bad = np.argwhere(canon & ~np.isin(counts, [h1, h2]))
    vals, mult = np.unique(counts[canon], return_counts=True)
    return Report(
        "projective_type_q",
        passed=len(bad) == 0,
        spectrum={int(v): int(c) for v, c in zip(vals, mult)},
        violations=[{"a": int(a), "b": int(b), "meets": int(counts[a, b])} for a, b in bad[:MAX_VIOLATIONS]],
    )


# -- spreads and bundles -----------------------------------------------------

def is_spread(spread: Spread) -> Report:
    t0 = time.perf_counter()
    f = spread.field
    q = half_order(f)
    violations = []
    if len(spread.slopes) != q * q + 1:
        violations.append({"reason": "WrongMemberCount", "members": len(spread.slopes)})
    cover = np.zeros((f.order, f.order), dtype=np.int64)
    lam = int(f.elem(q + 1))
    for y in spread.slopes:
        member = spread.member(y)
        cover += member.bits
        pts = member.points()
        if member.card != q * q or not member.bits[0, 0]:
            violations.append({"slope": y, "reason": "WrongSize", "card": member.card})
            continue
        if member.scaled(lam) != member:
            violations.append({"slope": y, "reason": "NotScalingClosed"})
        sx = f.add(pts[:, None, 0], pts[None, :, 0])
        sy = f.add(pts[:, None, 1], pts[None, :, 1])
        if not np.all(member.bits[sx, sy]):
            violations.append({"slope": y, "reason": "NotAdditionClosed"})
    overlap = np.argwhere(cover[1:, :] > 1)
    overlap0 = np.argwhere(cover[0, 1:] > 1)
    if len(overlap) or len(overlap0):
        violations.append({"reason": "MembersMeetOutsideZero", "vectors": int(len(overlap) + len(overlap0))})
    uncovered = int((cover == 0).sum())
    if uncovered:
        violations.append({"reason": "NotCovering", "uncovered": uncovered})
    return Report(
        "is_spread",
        passed=not violations,
        violations=violations[:MAX_VIOLATIONS],
        elapsed_ms=(time.perf_counter() - t0) * 1e3,
        details={"kind": spread.kind, "members": len(spread.slopes)},
    )


def bundle_check(sets, spread: Spread, half_assignment, jobs: int | None = None, method: str = "direct") -> Report:
    """Check four type-Q sets against a spread split into two halves.

    ``half_assignment`` is a pair of slope lists; C0 u C2 u {0} must be the
    union of the first half, C1 u C3 u {0} the union of the second.
    """
    t0 = time.perf_counter()
    C = list(sets)
    f = spread.field
    q = half_order(f)
    violations = []
    if len(C) != 4:
        raise ValueError("bundle_check needs exactly four sets")
    sp = is_spread(spread)
    if not sp:
        violations.append({"reason": "NotSpread", "detail": sp.violations})
    first, second = (list(h) for h in half_assignment)
    half = (q * q + 1) // 2
    if len(first) != half or len(second) != half:
        violations.append({"reason": "HalfSize", "sizes": [len(first), len(second)]})
    if sorted(first + second, key=_slope_key) != sorted(spread.slopes, key=_slope_key):
        violations.append({"reason": "HalvesDoNotPartitionSpread"})
    for i in range(4):
        if C[i].bits[0, 0]:
            violations.append({"reason": "ContainsOrigin", "set": i})
        for j in range(i + 1, 4):
            if not C[i].isdisjoint(C[j]):
                violations.append({"reason": "NotDisjoint", "sets": [i, j], "common": int((C[i].bits & C[j].bits).sum())})
    reports = []
    for i, Ci in enumerate(C):
        r = is_type_q(Ci, method=method, jobs=jobs)
        reports.append(r.to_dict())
        if not r:
            violations.append({"reason": "NotTypeQ", "set": i, "detail": r.violations[:5]})
    for (i, j), slopes in (((0, 2), first), ((1, 3), second)):
        lhs = (C[i] | C[j]).with_origin()
        rhs = spread.union(slopes)
        if lhs != rhs:
            diff = np.argwhere(lhs.bits ^ rhs.bits)
            violations.append({
                "reason": "UnionMismatch", "sets": [i, j], "differing_vectors": int(len(diff)),
                "example": diff[0].tolist(),
            })
    report = Report(
        "bundle_check",
        passed=not violations,
        spectrum=reports[0]["spectrum"] if reports else {},
        violations=violations,
        elapsed_ms=(time.perf_counter() - t0) * 1e3,
        details={"type_q_reports": reports},
    )
    if report.passed:
        report.details["certificate"] = {
            "group_order": 4 * q**4,
            "parameters": list(menon_hadamard_parameters(q)),
        }
    return report


def _slope_key(y):
    return -1 if y is None else y


# -- association scheme tables ----------------------------------------------

def scheme_table(q: int, G: CycInt) -> list[list[tuple[CycInt, int]]]:
    """Rows are the five dual classes, columns the five relations.

    Each entry is (numerator, denominator) with entries exact in Z[zeta_p].
    """
    one = CycInt.from_int(G.p, 1)
    sgn = 1 if q % 4 == 1 else -1
    qq = one * q
    r5_edge = (one * (1 - sgn * q), 2)
    return [
        [(qq - 2 + G, 2), (qq - 2 - G, 2), ((G - 1) * (q - 1), 4), ((-G - 1) * (q - 1), 4), (one * (1 - q), 2)],
        [(qq - 2 - G, 2), (qq - 2 + G, 2), ((-G - 1) * (q - 1), 4), ((G - 1) * (q - 1), 4), (one * (1 - q), 2)],
        [(G - 1, 1), (-G - 1, 1), ((one - G) ** 2, 4), ((one + G) ** 2, 4), r5_edge],
        [(-G - 1, 1), (G - 1, 1), ((one + G) ** 2, 4), ((one - G) ** 2, 4), r5_edge],
        [(-one, 1), (-one, 1), (one * (1 - sgn * q), 4), (one * (1 - sgn * q), 4), (one * (1 + sgn * q), 2)],
    ]


def scheme_table_check(setting) -> Report:
    """Both character tables of the 5-class scheme attached to a WX setting.

    ``psi(omega^a R_i)`` (R_i built from the X-classes) must equal the table
    entry for the Y-class of a, and dually with the roles of X and Y swapped.
    """
    t0 = time.perf_counter()
    f = setting.field
    q = setting.q
    n2 = 2 * (q + 1)
    G = quadratic_gauss_sum(build_field(f.p, f.s // 2))
    table = scheme_table(q, G)
    violations = []
    cells = 0
    for name, parts, duals in (("table1", setting.X, setting.Y), ("table2", setting.Y, setting.X)):
        row_of = {}
        for row, cls in enumerate(duals):
            for a in cls:
                row_of[a] = row
        for col, part in enumerate(parts):
            R = np.concatenate([f.cyclotomic_class(n2, j) for j in sorted(part)])
            for a in range(n2):
                value = char_sum(f, R, int(f.elem(a)))
                num, den = table[row_of[a]][col]
                cells += 1
                if value * den != num:
                    violations.append({"table": name, "a": a, "R": col + 1, "row": row_of[a] + 1,
                                       "value": value.to_dict(), "expected_num": num.to_dict(), "den": den})
    return Report(
        "scheme_table_check",
        passed=not violations,
        violations=violations[:MAX_VIOLATIONS],
        elapsed_ms=(time.perf_counter() - t0) * 1e3,
        details={"cells": cells, "q": q, "c": setting.c},
    )
