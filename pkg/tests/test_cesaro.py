import math

import pytest

from meanchaos.cesaro import (Explicit, GeometricGrid, TbilcamiDips, TbilcamiHills, as_points,
                              cesaro_mean, cesaro_sum, cesaro_trace, density_bound_from_cesaro,
                              geometric_segment_sum, window_mean)
from meanchaos.errors import CapabilityError, DomainError
from meanchaos.shiftops import (BilateralForward, SparseVec, UnilateralBackward,
                                orbit_norm_series)
from meanchaos.weights import BlockHalvesTwos, Harmonic, build_tbilcami

import oracles

# frozen from tests/oracles.py (tbil_mean_closed, 40-digit arithmetic)
DIPS = {1: 0.896081529515571, 2: 0.7112291327608031, 3: 0.6138856251780267,
        10: 0.39577388122928897, 100: 0.17528144102769935}
FLAT_DIPS = {1: 0.84755385349983756, 2: 0.67657209269160558, 3: 0.58573689659231966}
HILLS = {1: 1.0338498204669574, 2: 0.9695523569833676, 10: 0.9215962062263483,
         100: 1.0289579515894273}


@pytest.fixture(scope="module")
def tbil():
    return BilateralForward(build_tbilcami("original", 101))


def test_oracle_agrees_with_itself():
    N = 2 * oracles.n_k(2)
    assert oracles.tbil_mean_direct(N, 3) == pytest.approx(oracles.tbil_mean_closed(N, 3), rel=1e-12)
    assert oracles.tbil_mean_closed(2 * oracles.n_k(1), 2) == pytest.approx(DIPS[1], rel=1e-14)


@pytest.mark.parametrize("k", [1, 2, 3, 10, 100])
def test_dips_match_oracle(tbil, k):
    N = TbilcamiDips([k]).points()[0]
    assert N == 2 * k * oracles.n_k(k)
    s = orbit_norm_series(tbil, SparseVec.basis(0), N)
    assert cesaro_mean(s, N, "segment").to_real() == pytest.approx(DIPS[k], rel=1e-10)


def test_flattened_dips_match_oracle():
    T = BilateralForward(build_tbilcami("flattened", 4))
    pts = TbilcamiDips([1, 2, 3]).points()
    tr = cesaro_trace(orbit_norm_series(T, SparseVec.basis(0), pts[-1]), pts, "segment")
    for k, v in zip((1, 2, 3), tr.values):
        assert v.to_real() == pytest.approx(FLAT_DIPS[k], rel=1e-12)


@pytest.mark.parametrize("k", [1, 2, 10, 100])
def test_hills_match_oracle(tbil, k):
    N = TbilcamiHills([k]).points()[0]
    s = orbit_norm_series(tbil, SparseVec.basis(0), N)
    assert cesaro_mean(s, N).to_real() == pytest.approx(HILLS[k], rel=1e-10)


@pytest.mark.parametrize("k", [1, 2])
def test_loop_and_segment_agree(tbil, k):
    N = TbilcamiDips([k]).points()[0]
    s = orbit_norm_series(tbil, SparseVec.basis(0), N)
    a = cesaro_mean(s, N, "loop").to_real()
    b = cesaro_mean(s, N, "segment").to_real()
    assert abs(a - b) / b <= 1e-9


def test_harmonic_sums_closed_form():
    T = UnilateralBackward(Harmonic())
    s = orbit_norm_series(T, SparseVec.basis(12), 30)
    assert cesaro_mean(s, 11).to_real() == pytest.approx(12 / 11 * oracles.harmonic_H(11), rel=1e-12)
    assert cesaro_sum(s, 30).to_real() == pytest.approx(12 * oracles.harmonic_H(11), rel=1e-12)


def test_block_backends_agree():
    T = UnilateralBackward(BlockHalvesTwos())
    x = SparseVec([(20, 1.0), (57, 0.5), (300, 0.25)])
    s = orbit_norm_series(T, x, 400)
    for N in (1, 19, 20, 56, 299, 400):
        assert cesaro_mean(s, N, "segment").to_real() == pytest.approx(
            cesaro_mean(s, N, "loop").to_real(), rel=1e-12)


def test_window_mean_chasles(tbil):
    s = orbit_norm_series(tbil, SparseVec.basis(0), 10 ** 5)
    K, N = 300, 10 ** 5
    whole = cesaro_sum(s, N).to_real()
    head = cesaro_sum(s, K).to_real()
    assert window_mean(s, K, N).to_real() * (N - K) == pytest.approx(whole - head, rel=1e-12)
    assert window_mean(s, K, N, "loop").to_real() == pytest.approx(
        window_mean(s, K, N, "segment").to_real(), rel=1e-11)


def test_segment_backend_refuses_inexact_sums():
    T = UnilateralBackward(Harmonic(), p=2)
    s = orbit_norm_series(T, SparseVec([(3, 1.0), (5, 1.0)]), 10)
    with pytest.raises(CapabilityError):
        cesaro_mean(s, 10, "segment")
    assert cesaro_mean(s, 10).to_real() > 0


def test_loop_budget(tbil):
    s = orbit_norm_series(tbil, SparseVec.basis(0), 10 ** 9)
    with pytest.raises(CapabilityError):
        cesaro_mean(s, 10 ** 9, "loop", loop_budget=10 ** 6)


def test_geometric_segment_sum():
    got = geometric_segment_sum(math.log(3.0), math.log(0.5), 4).to_real()
    assert got == pytest.approx(3 * (1 + 0.5 + 0.25 + 0.125))


def test_schedules():
    assert GeometricGrid(1, 10, 2).points() == [1, 2, 4, 8, 10]
    assert as_points([3, 5]) == [3, 5]
    assert TbilcamiHills([1, 2]).points() == [68, oracles.m_k(2)]
    with pytest.raises(DomainError):
        Explicit([5, 5]).points()
    with pytest.raises(DomainError):
        GeometricGrid(4, 2).points()


def test_trace_csv_and_extrema(tbil):
    pts = [8, 100, 4624]
    tr = cesaro_trace(orbit_norm_series(tbil, SparseVec.basis(0), pts[-1]), pts)
    lines = tr.to_csv().splitlines()
    assert lines[0] == "N,mean,log10_mean" and len(lines) == 4
    assert tr.argmin in pts and tr.min <= tr.max


def test_markov_density_bound():
    assert density_bound_from_cesaro(0.1, 0.5) == pytest.approx(0.2)
    assert density_bound_from_cesaro(3.0, 0.5) == 1.0
    with pytest.raises(DomainError):
        density_bound_from_cesaro(1.0, 0.0)
