from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from typeq import build_field, chen
from typeq.errors import BadK, BadM, BadTSizes, VariantSizeMismatch
from typeq.geometry import INFINITY
from typeq.verifier import char_spectrum, is_type_q, type_q_multiplicities

FIELDS = {3: (3, 2), 5: (5, 2), 7: (7, 2)}


def F(q):
    return build_field(*FIELDS[q])


@pytest.fixture(scope="module")
def spec_params(f9):
    # T0 = {0}, T1 = {1} as F_3 codes
    return chen.derive_params(f9, 1, [0], [0], [1])


# -- parameters ---------------------------------------------------------------------------

@pytest.mark.parametrize("q,m,ell,t,eps", [(3, 1, 1, 1, 1), (3, 2, 1, 1, 0), (5, 3, 1, 1, 0), (7, 2, 1, 1, 1), (5, 1, 1, 1, 0)])
def test_derive_params(q, m, ell, t, eps):
    K = list(range(m))
    p = chen.derive_params(F(q), m, K)
    assert (p.ell, p.t, p.eps) == (ell, t, eps)


@pytest.mark.parametrize("q,expected", [(3, [1, 2]), (5, [1, 3]), (7, [1, 2, 4]), (11, [1, 2, 3, 6])])
def test_admissible_m(q, expected):
    assert chen.admissible_m(q) == expected


def test_subfield_embedding(f25):
    codes = np.arange(5)
    big = chen.fq_to_big(f25, codes)
    assert f25.in_subfield(big, 1).all()
    assert np.array_equal(chen.big_to_fq(f25, big), codes)
    with pytest.raises(ValueError):
        chen.big_to_fq(f25, [2])


@pytest.mark.parametrize(
    "args,exc",
    [
        (dict(m=2), BadM),                       # q=5: 4 does not divide 6
        (dict(m=1, K=[0, 1]), BadK),
        (dict(m=3, K=[0, 3, 1]), BadK),          # K meets K + m
        (dict(m=1, T0=[1]), BadTSizes),
        (dict(m=1, T1=[1, 2, 3, 4]), BadTSizes),
        (dict(m=1, T0=[1, 7]), BadTSizes),
    ],
)
def test_param_errors(f25, args, exc):
    with pytest.raises(exc):
        chen.derive_params(f25, **args)


def test_t_presets():
    assert chen.t_preset(7, "squares") == (1, 3, 5)
    assert chen.t_preset(7, "first-half", with_zero=True) == (0, 1, 2, 3)
    with pytest.raises(ValueError):
        chen.t_preset(7, "cubes")


# -- sets and E ---------------------------------------------------------------------------

def test_build_sets_example(f9, spec_params):
    cs = chen.build_sets(spec_params)
    assert sorted(cs.S0.tolist()) == [0, 3, 7]  # 0, w^2, w^6
    assert len(np.intersect1d(cs.S0, cs.S1)) == 1
    assert len(cs.A0) == len(cs.A1) == 2


def test_E_example(spec_params):
    E = chen.build_E(spec_params, 0)
    assert E.card == 20
    assert char_spectrum(E).spectrum == {2: 60, -7: 20}


@pytest.mark.parametrize("q", [3, 5, 7])
@pytest.mark.parametrize("m_index", [0, -1])
def test_E_spectrum_is_forced(q, m_index):
    m = chen.admissible_m(q)[m_index]
    E = chen.build_E(chen.derive_params(F(q), m))
    assert E.is_fq_closed()
    assert char_spectrum(E).spectrum == type_q_multiplicities(q)


def test_variant1_b0(f9):
    p = chen.derive_params(f9, 1, None, None, chen.t_preset(3, "squares", with_zero=True))
    assert p.variant == 1
    cs = chen.build_sets(p)
    E = chen.build_E(p, 1, cs)
    d_eps = set(cs.D_eps.tolist())
    for a in range(1, 9):
        r = chen.lemma_oracle_U(p, a, 0, 1, cs, E)
        assert r
        assert (r.computed["psi"] == 2) == (int(f9.inv(a)) in d_eps)


def test_variant_size_mismatch(spec_params):
    with pytest.raises(VariantSizeMismatch):
        chen.build_E(spec_params, 1)


# -- quadruple ------------------------------------------------------------------------------

@pytest.mark.parametrize("q", [3, 5])
def test_quadruple(q):
    f = F(q)
    b = chen.build_quadruple(chen.derive_params(f))
    C0, C1, C2, C3 = b.sets
    union = C0 | C1 | C2 | C3
    assert union.card == q**4 - 1 and (0, 0) not in union
    assert sum(C.card for C in b.sets) == q**4 - 1
    first, second = b.halves
    assert INFINITY in first and len(first) == len(second) == (q * q + 1) // 2
    assert (C0 | C2).with_origin() == b.spread.union(first)
    assert (C0 | C2).with_origin().card == (q * q + 1) // 2 * (q * q - 1) + 1
    for C in b.sets:
        assert is_type_q(C)


@pytest.mark.parametrize("q", [3, 5, 7])
def test_original_equals_generalized(q):
    f = F(q)
    orig = chen.chen_original(f)
    gen = chen.build_quadruple(chen.original_as_params(f))
    assert orig.sets == gen.sets
    assert orig.halves == gen.halves


# -- lemma oracles --------------------------------------------------------------------------

def test_lemma_examples(f9, spec_params):
    cs = chen.build_sets(spec_params)
    E = chen.build_E(spec_params, 0, cs)
    d1 = set(cs.D1.tolist())
    d0 = set(cs.D0.tolist())
    both = set(np.intersect1d(cs.S0, cs.S1).tolist())
    s0 = set(cs.S0.tolist())
    seen = {"D1": 0, "D0": 0, "S01": 0}
    for a in range(1, 9):
        for b in range(1, 9):
            r = chen.lemma_oracle_U(spec_params, a, b, 0, cs, E)
            assert r
            binv = int(f9.inv(b))
            z = int(f9.neg(f9.mul(a, binv)))
            if binv in d1:
                assert r.computed["U1"] == r.computed["U2"] == 0
                seen["D1"] += 1
            elif binv in d0 and z not in s0:
                assert r.computed["U1"] == -3
                seen["D0"] += 1
            if z in both:
                assert r.computed["U3"] == 8
                seen["S01"] += 1
    assert all(seen.values())


@pytest.mark.parametrize("q", [3, 5])
@pytest.mark.parametrize("variant", [0, 1])
def test_oracles_exhaustive(q, variant):
    f = F(q)
    T1 = chen.t_preset(q, "squares", with_zero=bool(variant))
    p = chen.derive_params(f, 1, None, None, T1)
    pairs = [(a, b) for a in range(f.order) for b in range(f.order) if a or b]
    assert len(chen.check_oracles(p, pairs)) == len(pairs)


def test_oracle_mismatch_detected(f9):
    p = chen.derive_params(f9)
    E = chen.build_E(chen.derive_params(f9, 1, [1]))  # D0 and D1 swapped
    reports = [chen.lemma_oracle_U(p, a, b, 0, None, E) for a in range(9) for b in range(1, 9)]
    assert not all(reports)


@settings(max_examples=15, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(q=st.sampled_from([3, 5, 7]), seed=st.integers(0, 2**32 - 1), variant=st.sampled_from([0, 1]))
def test_random_params_give_type_q(q, seed, variant):
    f = F(q)
    p = chen.random_params(f, np.random.default_rng(seed), variant)
    assert is_type_q(chen.build_E(p, variant))
