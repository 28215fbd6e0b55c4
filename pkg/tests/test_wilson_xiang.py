from __future__ import annotations

import numpy as np
import pytest

from typeq import build_field, wilson_xiang as wx
from typeq.errors import EvenC, ParityHypothesisFailed, VariantMismatch
from typeq.verifier import bundle_check, char_spectrum, is_type_q

FIELDS = {3: (3, 2), 5: (5, 2), 7: (7, 2), 9: (3, 4), 11: (11, 2)}


def F(q):
    return build_field(*FIELDS[q])


def odd_cs(q):
    return range(1, 2 * (q + 1), 2)


def brute_index_sets(f):
    """Classify Tr(w^i) = w^i + w^(iq) as zero, nonzero square or nonsquare of F_q, by search."""
    q = f.p ** (f.s // 2)
    sub = [f.element(int(c)) for c in f.subfield_codes(f.s // 2)]
    squares = {z * z for z in sub if z}
    out = ([], [], [])
    for i in range(2 * (q + 1)):
        x = f.omega**i
        t = x + x**q
        out[0 if not t else (1 if t in squares else 2)].append(i)
    return tuple(frozenset(S) for S in out)


@pytest.fixture(scope="module")
def s3(f9):
    return wx.build_setting(f9, 1)


# -- the q = 3, c = 1 worked example ---------------------------------------------------

def test_index_sets_example(s3):
    assert [sorted(S) for S in s3.I] == [[2, 6], [4, 5, 7], [0, 1, 3]]


def test_x_families_example(s3):
    assert [sorted(S) for S in s3.X] == [[5, 6], [1, 2], [4], [0], [3, 7]]
    assert (s3.eps, s3.delta) == (-1, -1)
    assert (s3.alpha, s3.beta, s3.gamma) == (5, 6, 2)
    assert sorted(s3.x_at(5)[0]) == [2, 5]


def test_y_families_example(s3):
    assert [sorted(S) for S in s3.Y] == [[0, 1], [4, 5], [7], [3], [2, 6]]
    assert sorted((-y + 1) % 8 for y in s3.Y[2] | s3.Y[3]) == [2, 6]


def test_corollary_choice_example(s3):
    ch0, ch1 = wx.corollary_AB(s3)
    assert (sorted(ch0.A), sorted(ch0.B)) == ([4, 6], [4, 5])
    assert (sorted(ch1.A), sorted(ch1.B)) == ([2, 5, 7], [7])
    assert wx.parity_gap(ch0.A, ch0.B) == 2
    assert wx.parity_gap(ch1.A, ch1.B) == 0


def test_D_sizes_example(s3):
    ch0, _ = wx.corollary_AB(s3)
    D = wx.build_D(s3, ch0)
    assert [d.card for d in D] == [4, 4, 8, 8]
    # every orbit vector arises from exactly two (x, y, i) triples
    for k, idx in ((0, ch0.A), (1, ch0.B)):
        mult = wx.orbit_multiplicity(s3.field, k, idx)
        assert set(np.unique(mult[mult > 0]).tolist()) == {2}


def test_E_example(s3):
    ch0, ch1 = wx.corollary_AB(s3)
    E0 = wx.build_E(s3, ch0)
    assert char_spectrum(E0).spectrum == {2: 60, -7: 20}
    E1 = wx.build_E(s3, ch1)
    assert is_type_q(E1)


# -- properties at every odd c -----------------------------------------------------------

@pytest.mark.parametrize("q", [3, 5, 7, 9, 11])
def test_index_sets_match_brute_force(q):
    f = F(q)
    assert wx.index_sets(f) == brute_index_sets(f)


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11])
def test_settings_for_all_c(q):
    f = F(q)
    n = 2 * (q + 1)
    h = (q + 1) // 2
    for c in odd_cs(q):
        s = wx.build_setting(f, c)
        for key in ("P1", "P2", "P3", "P4", "P5", "P6", "P8", "P9", "eps_delta"):
            assert s.checks[key], (key, c)
        assert s.beta == (h * s.eps) % n
        assert s.alpha == (h * s.delta - c) % n
        assert wx.relative_difference_check(s)
        ch0, ch1 = wx.corollary_AB(s)
        assert ch1.c == (c + q + 1) % n


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11])
def test_parity_of_alpha_beta(q):
    # (alpha, beta) mod 2 is (1, 0) for q = 3 mod 4 and (0, 1) for q = 1 mod 4
    observed = {wx.build_setting(F(q), c).checks["P6_parity_observed"] for c in odd_cs(q)}
    assert observed == {(1, 0) if q % 4 == 3 else (0, 1)}
    assert not any(wx.build_setting(F(q), c).checks["P6_parity_stated"] for c in odd_cs(q))


@pytest.mark.parametrize("q", [5, 9])
def test_p4_literal_form_fails_when_q_is_1_mod_4(q):
    assert not all(wx.build_setting(F(q), c).checks["P4_symmetric"] for c in odd_cs(q))


@pytest.mark.parametrize("q,c", [(3, 1), (3, 3), (3, 7), (5, 1), (5, 5), (7, 3)])
def test_quadruple_passes_bundle_check(q, c):
    b = wx.build_quadruple(wx.build_setting(F(q), c))
    r = bundle_check(b.sets, b.spread, b.halves)
    assert r, r.violations
    assert 0 in b.halves[1]


@pytest.mark.parametrize("q,c", [(3, 1), (5, 3)])
def test_negated_halves_fail(q, c):
    b = wx.build_quadruple(wx.build_setting(F(q), c), convention="negated")
    r = bundle_check(b.sets, b.spread, b.halves)
    assert "UnionMismatch" in {v["reason"] for v in r.violations}


@pytest.mark.parametrize("q,c", [(3, 1), (5, 1), (5, 7), (7, 1)])
def test_original_shape_equals_corollary(q, c):
    f = F(q)
    assert wx.wx_original(f, c).sets == wx.build_quadruple(wx.build_setting(f, c)).sets


# -- lemma oracles -------------------------------------------------------------------------

@pytest.mark.parametrize("q", [3, 5])
def test_oracles_exhaustive(q):
    f = F(q)
    pairs = [(a, b) for a in range(f.order) for b in range(f.order) if a or b]
    for c in (1, 3):
        s = wx.build_setting(f, c)
        for ch in wx.corollary_AB(s):
            assert len(wx.check_oracles(s, ch, pairs)) == len(pairs)


def test_one_zero_values(s3):
    f = s3.field
    ch0, ch1 = wx.corollary_AB(s3)
    E0, E1 = wx.build_E(s3, ch0), wx.build_E(s3, ch1)
    for a in range(1, 9):
        assert wx.lemma_oracle_VW(s3, ch0, a, 0, E0).computed["psi"] == 2
        want = -7 if int(f.class_index(a, 2)) == (s3.tau + 1) % 2 else 2
        assert wx.lemma_oracle_VW(s3, ch1, a, 0, E1).computed["psi"] == want


# -- errors --------------------------------------------------------------------------------

def test_even_c(f9):
    with pytest.raises(EvenC):
        wx.build_setting(f9, 2)


def test_choice_errors(s3):
    ch0, _ = wx.corollary_AB(s3)
    with pytest.raises(VariantMismatch):
        wx.check_choice(3, wx.ABChoice(ch0.A | {0}, ch0.B, 0, 1))
    with pytest.raises(ParityHypothesisFailed):
        wx.check_choice(3, wx.ABChoice(frozenset({4, 2}), frozenset({5, 1}), 0, 1))


def test_unknown_convention(s3):
    with pytest.raises(ValueError):
        wx.build_quadruple(s3, convention="mirrored")
