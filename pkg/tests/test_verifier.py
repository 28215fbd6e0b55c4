from __future__ import annotations

import json

import numpy as np
import pytest

from typeq import build_field, chen, wilson_xiang as wx
from typeq.cyclotomic import CycInt, char_sum
from typeq.errors import NotClosed, NotProjective
from typeq.geometry import PointSet, Spread
from typeq.verifier import (
    bundle_check,
    canonical_mask,
    char_spectrum,
    hyperplane_counts,
    is_spread,
    is_type_q,
    menon_hadamard_parameters,
    projective_parameters,
    projective_type_q,
    projectivize,
    scheme_table_check,
    type_q_multiplicities,
    type_q_size,
    type_q_values,
)


def chen_E(q_field, **kw):
    params = chen.derive_params(q_field, **kw)
    return chen.build_E(params, params.variant)


def naive_values(E):
    """psi_{a,b}(E) for every (a, b), as CycInt, one character at a time."""
    f = E.field
    pts = E.points()
    out = {}
    for a in range(f.order):
        for b in range(f.order):
            hist = [0] * f.p
            for x, y in pts:
                hist[int(f.trace_p[f.add(f.mul(a, x), f.mul(b, y))])] += 1
            out[a, b] = CycInt.from_histogram(f.p, hist)
    return out


def naive_hyperplane_counts(f, reps):
    q = f.p ** (f.s // 2)
    d = f.s // 2
    out = np.zeros((f.order, f.order), dtype=np.int64)
    for a in range(f.order):
        for b in range(f.order):
            for x, y in reps:
                if f.trace(int(f.add(f.mul(a, int(x)), f.mul(b, int(y)))), d) == 0:
                    out[a, b] += 1
    return out


# -- spectra ----------------------------------------------------------------------------

@pytest.mark.parametrize("p,s", [(3, 2), (5, 2)])
@pytest.mark.parametrize("method", ["direct", "hyperplane"])
def test_full_set_spectrum(p, s, method):
    f = build_field(p, s)
    r = char_spectrum(PointSet.full_nonzero(f), method)
    assert r.spectrum == {-1: f.order**2 - 1}


def test_direct_matches_naive_oracle(f9):
    E = chen_E(f9)
    naive = naive_values(E)
    values = {}
    for (a, b), v in naive.items():
        if (a, b) != (0, 0):
            values[v.to_int()] = values.get(v.to_int(), 0) + 1
    assert char_spectrum(E).spectrum == values == {2: 60, -7: 20}


def test_direct_matches_naive_on_non_rational_set(f9):
    rng = np.random.default_rng(3)
    E = PointSet(f9, rng.random((9, 9)) < 0.25)
    r = char_spectrum(E)
    naive = naive_values(E)
    n_irr = sum(1 for k, v in naive.items() if k != (0, 0) and not v.is_rational())
    assert r.details["non_rational"] == n_irr
    assert r.passed == (n_irr == 0)


@pytest.mark.parametrize("p,s", [(3, 2), (5, 2)])
def test_hyperplane_counts_match_naive(p, s):
    f = build_field(p, s)
    reps = projectivize(chen_E(f))
    canon = canonical_mask(f)
    assert np.array_equal(hyperplane_counts(f, reps)[canon], naive_hyperplane_counts(f, reps)[canon])


@pytest.mark.parametrize("p,s", [(3, 2), (5, 2), (7, 2)])
def test_engines_agree(p, s):
    f = build_field(p, s)
    for E in chen.build_quadruple(chen.derive_params(f)).sets:
        r = char_spectrum(E, "both")
        assert r.passed
        assert r.spectrum == r.details["hyperplane_spectrum"]


def test_hyperplane_needs_closed_set(f9):
    with pytest.raises(NotClosed):
        char_spectrum(PointSet.from_codes(f9, [1], [1]), "hyperplane")


@pytest.mark.parametrize("jobs", [1, 2, 3])
def test_jobs_do_not_change_result(f25, jobs):
    E = chen_E(f25)
    assert char_spectrum(E, jobs=jobs).spectrum == type_q_multiplicities(5)


# -- type-Q predicate --------------------------------------------------------------------

@pytest.mark.parametrize("q,values,size", [(3, (2, -7), 20), (5, (6, -19), 156), (7, (12, -37), 600)])
def test_type_q_constants(q, values, size):
    assert type_q_values(q) == values
    assert type_q_size(q) == size
    mult = type_q_multiplicities(q)
    assert sum(mult.values()) == q**4 - 1
    # sum over nontrivial characters is -|E|
    assert sum(v * c for v, c in mult.items()) == -size


@pytest.mark.parametrize("method", ["direct", "hyperplane", "both"])
def test_chen_q5_is_type_q(f25, method):
    assert is_type_q(chen_E(f25), method)


def test_random_set_fails_with_violation(f9):
    rng = np.random.default_rng(11)
    idx = rng.choice(np.arange(1, 81), size=20, replace=False)
    E = PointSet.from_codes(f9, idx // 9, idx % 9)
    r = is_type_q(E)
    assert not r
    assert any({"a", "b"} <= set(v) for v in r.violations)


def test_wrong_size_short_circuits(f9):
    r = is_type_q(PointSet.from_codes(f9, [1, 2], [0, 0]))
    assert not r and r.spectrum == {}
    assert r.violations[0]["reason"] == "WrongSize"


def test_report_serializes(f9):
    d = is_type_q(chen_E(f9)).to_dict()
    assert d["pass"] and d["spectrum"] == {"-7": 20, "2": 60}
    json.dumps(d)


# -- projective form --------------------------------------------------------------------

@pytest.mark.parametrize("q,expected", [(3, (10, 4, 1, 4)), (5, (39, 4, 4, 9))])
def test_projective_parameters(q, expected):
    assert projective_parameters(q) == expected


@pytest.mark.parametrize("p,s", [(3, 2), (5, 2)])
def test_projectivization_is_projective_type_q(p, s):
    f = build_field(p, s)
    reps = projectivize(chen_E(f))
    r = projective_type_q(f, reps)
    assert r and set(r.spectrum) == set(projective_parameters(f.p ** (f.s // 2))[2:])


def test_projective_rejects_non_canonical(f9):
    with pytest.raises(NotProjective):
        projective_type_q(f9, [[5, 1]])
    with pytest.raises(NotProjective):
        projective_type_q(f9, [[1, 1], [1, 1]])


# -- spreads and bundles ----------------------------------------------------------------

@pytest.mark.parametrize("p,s,kind", [(3, 2, "slope"), (3, 2, "twisted"), (5, 2, "twisted"), (5, 2, "slope")])
def test_spreads(p, s, kind):
    r = is_spread(Spread(build_field(p, s), kind))
    assert r and r.details["members"] == p**s + 1


def test_slope_members_meet_in_zero(f9):
    sp = Spread(f9, "slope")
    for y1 in range(9):
        for y2 in range(y1 + 1, 9):
            assert (sp.member(y1) & sp.member(y2)).points().tolist() == [[0, 0]]


def test_broken_spread(f9):
    r = is_spread(Spread(f9, "slope", list(range(9)) + [1]))
    assert not r
    reasons = {v["reason"] for v in r.violations}
    assert {"MembersMeetOutsideZero", "NotCovering"} <= reasons


@pytest.mark.parametrize("build", ["chen", "wx"])
def test_bundle_certificate(f9, build):
    b = chen.build_quadruple(chen.derive_params(f9)) if build == "chen" else wx.build_quadruple(wx.build_setting(f9, 1))
    r = bundle_check(b.sets, b.spread, b.halves)
    assert r, r.violations
    assert r.details["certificate"]["parameters"] == [324, 153, 72] == list(menon_hadamard_parameters(3))


def test_bundle_swap_fails_union(f9):
    b = chen.build_quadruple(chen.derive_params(f9))
    C0, C1, C2, C3 = b.sets
    r = bundle_check((C0, C2, C1, C3), b.spread, b.halves)
    assert not r
    assert "UnionMismatch" in {v["reason"] for v in r.violations}


def test_bundle_bad_halves(f9):
    b = chen.build_quadruple(chen.derive_params(f9))
    first, second = b.halves
    r = bundle_check(b.sets, b.spread, (first[:-1], second + first[-1:]))
    assert {"HalfSize", "UnionMismatch"} <= {v["reason"] for v in r.violations}


# -- scheme tables ------------------------------------------------------------------------

def test_scheme_table_examples(f9):
    s = wx.build_setting(f9, 1)
    Y = wx.build_Y(s)
    R = [np.concatenate([f9.cyclotomic_class(8, j) for j in sorted(part)]) for part in s.X]
    for a in Y[0]:
        assert char_sum(f9, R[4], int(f9.elem(a))) == CycInt.from_int(3, -1)
    for a in Y[4]:
        assert char_sum(f9, R[2], int(f9.elem(a))) == CycInt.from_int(3, 1)
    for a in Y[2]:
        assert char_sum(f9, R[0], int(f9.elem(a))) == CycInt(3, (0, 2))


@pytest.mark.parametrize("p,s,c", [(3, 2, 1), (3, 2, 3), (5, 2, 1), (5, 2, 7), (7, 2, 5)])
def test_scheme_tables(p, s, c):
    r = scheme_table_check(wx.build_setting(build_field(p, s), c))
    assert r, r.violations
    assert r.details["cells"] == 2 * 5 * 2 * (p ** (s // 2) + 1)
