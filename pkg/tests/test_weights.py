import math

import numpy as np
import pytest

from meanchaos.errors import DomainError
from meanchaos.logcore import index_int, index_str
from meanchaos.weights import (AnchorProfile, BlockHalvesTwos, Constant, ExplicitList, Harmonic,
                               TbilcamiProfile, build_tbilcami, cum_log, profile_from_json,
                               profile_to_json, verify_tbilcami)

from oracles import block_cum_log, m_k, n_k, tbil_anchors


def test_harmonic_prefix_products():
    w = Harmonic()
    for j in (1, 2, 7, 1000):
        assert math.exp(w.cum_log(j)) == pytest.approx(j, rel=1e-12)
    assert w.log_weight(1) == 0.0
    js = np.arange(1, 50)
    assert np.allclose(w.cum_log_array(js), [w.cum_log(int(j)) for j in js])


def test_block_weights_match_brute_force():
    w = BlockHalvesTwos()
    js = np.arange(0, 400)
    want = [0.0] + [block_cum_log(int(j)) for j in js[1:]]
    assert np.allclose(w.cum_log_array(js), want, atol=1e-12)
    assert [math.exp(w.log_weight(j)) for j in range(1, 7)] == [0.5, 2, 0.5, 0.5, 2, 2]
    assert w.block_of(13) == (4, 1)


def test_block_kinks_include_block_edges():
    assert BlockHalvesTwos().kinks(1, 20) == [1, 2, 4, 6, 9, 12, 16, 20]


def test_constant_and_explicit():
    assert Constant(2.0).cum_log(5) == pytest.approx(5 * math.log(2))
    e = ExplicitList([1.0, 3.0, 0.5], tail=2.0)
    assert math.exp(e.cum_log(5)) == pytest.approx(1 * 3 * 0.5 * 2 * 2)
    with pytest.raises(DomainError):
        Constant(-1.0)


def test_tbilcami_anchor_indices_are_exact():
    p = build_tbilcami("original", 5)
    for k in range(1, 6):
        assert p.index(2 * k) == n_k(k)
        assert p.index(2 * k + 1) == m_k(k)
        assert p.index(-2 * k) == -p.index(2 * k + 1)
    assert p.index(0) == -1 and p.index(1) == 1
    assert p.valley(1) == (4, pytest.approx(-math.log(2) / 3))
    assert p.hill(1) == (68, pytest.approx(math.log(3) / 4))


def test_tbilcami_values_match_oracle():
    p = build_tbilcami("original", 3)
    an = tbil_anchors(3)
    for (i, v) in an:
        assert p.log_v(i) == pytest.approx(float(math.log(v)), abs=1e-14)
    # interior point of the first climb
    a, b = 4, 68
    j = 30
    want = (math.log(3) / 4 + math.log(2) / 3) * (j - a) / (b - a) - math.log(2) / 3
    assert p.log_v(j) == pytest.approx(want, rel=1e-14)
    assert p.log_v_range(25, 35)[5] == pytest.approx(want, rel=1e-14)


def test_lazy_profile_handles_huge_levels():
    p = TbilcamiProfile("original", 10 ** 4)
    top = p.index(p.pos_max)
    assert top.bit_length() > 3 * 10 ** 5
    assert p.locate(top - 1) == p.pos_max - 1
    walked = list(p.iter_anchors(2 * 9999, 2 * 10 ** 4 + 1))
    assert walked[-1][1] == top
    down = list(p.iter_anchors(6, 0))
    assert [i for _, i, _ in down] == [p.index(q) for q in range(6, -1, -1)]


def test_negative_side_streaming_matches_index():
    p = build_tbilcami("original", 6)
    got = [i for _, i, _ in p.iter_anchors(-12, 3)]
    assert got == [p.index(q) for q in range(-12, 4)]


def test_flattened_hills():
    p = build_tbilcami("flattened", 4)
    assert all(p.hill(k)[1] == 0.0 for k in range(0, 5))
    assert p.valley(2)[1] == pytest.approx(-math.log(4) / 3)


def test_locate_and_domain():
    p = build_tbilcami("original", 2)
    assert p.locate(4) in (1, 2)
    assert p.index(p.locate(100)) <= 100 <= p.index(p.locate(100) + 1)
    with pytest.raises(DomainError):
        p.log_v(p.index(p.pos_max) + 1)
    with pytest.raises(DomainError):
        cum_log(p, 5)


def test_verify_tbilcami_passes_all_levels():
    p = build_tbilcami("original", 9)
    for k in range(1, 9):
        rep = verify_tbilcami(p, k)
        assert rep.passed, rep.summary()
        assert all(e.margin > 0 for e in rep.entries if e.status == "checked" and e.relation != "==")


def test_verify_tbilcami_detects_a_broken_profile():
    p = build_tbilcami("original", 4)
    bad = p.replace(4, math.log(4) / 3)
    assert not verify_tbilcami(bad, 2).passed


def test_profile_json_roundtrip():
    p = build_tbilcami("original", 2).to_explicit()
    q = profile_from_json(profile_to_json(p), origin=p.origin)
    assert isinstance(q, AnchorProfile)
    assert [q.index(i) for i in range(q.pos_min, q.pos_max + 1)] == \
        [p.index(i) for i in range(p.pos_min, p.pos_max + 1)]
    assert '"index": "' in profile_to_json(p)


def test_profile_rejects_unsorted_anchors():
    with pytest.raises(DomainError):
        AnchorProfile([(0, 0.0), (0, 1.0)])


def test_huge_indices_serialise_as_decimal_strings():
    p = TbilcamiProfile("original", 2000)
    top = p.index(p.pos_max)
    text = index_str(top)
    assert len(text) > 4300
    assert index_int(text) == top
