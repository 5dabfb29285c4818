import math

import numpy as np
import pytest

from meanchaos.errors import CapabilityError, DomainError
from meanchaos.logcore import LogReal
from meanchaos.shiftops import (BilateralBackward, BilateralForward, DirectSumWithIdentity,
                                Identity, PairVec, SparseVec, UnilateralBackward,
                                UnilateralForward, apply, inverse, log_geometric_sum,
                                operator_norm, orbit_norm, orbit_norm_series,
                                special_block_vector, vector_norm)
from meanchaos.weights import BlockHalvesTwos, Constant, ExplicitList, Harmonic, build_tbilcami

PROFILE = build_tbilcami("original", 3)


def brute_norm(op, x):
    """``||x||`` straight from the coefficients."""
    if isinstance(x, PairVec):
        a, b = brute_norm(op.inner, x.first), brute_norm(op.identity, x.second)
        return (a ** op.p + b ** op.p) ** (1 / op.p)
    v = getattr(op, "v", None)
    tot = 0.0
    for i, c in x:
        w = math.exp(v.log_v(i)) if v is not None else 1.0
        tot += abs(c.to_real()) ** op.p * w
    return tot ** (1 / op.p)


def brute_orbit(op, x, j):
    for _ in range(j):
        x = apply(op, x)
    return brute_norm(op, x)


OPS = [
    UnilateralBackward(Harmonic()),
    UnilateralBackward(BlockHalvesTwos(), p=2),
    UnilateralBackward(ExplicitList([1, 3, 0.25, 2, 5], tail=0.5)),
    UnilateralForward(Harmonic()),
    UnilateralForward(Constant(1.5), p=3),
    BilateralForward(PROFILE),
    BilateralBackward(PROFILE, p=2),
    Identity(),
]


@pytest.mark.parametrize("op", OPS, ids=lambda o: type(o).__name__)
def test_orbit_norm_matches_iteration(op):
    x = SparseVec([(3, 1.0), (7, -0.5), (12, 2.0)])
    for j in range(0, 15):
        want = brute_orbit(op, x, j)
        got = orbit_norm(op, x, j).to_real()
        assert got == pytest.approx(want, rel=1e-12, abs=1e-300)


@pytest.mark.parametrize("op", OPS, ids=lambda o: type(o).__name__)
def test_series_log_norms_agree_with_orbit_norm(op):
    x = SparseVec([(2, 1.0), (9, 0.3)])
    s = orbit_norm_series(op, x, 40)
    arr = s.log_norms(1, 40)
    for j in (1, 5, 8, 9, 10, 40):
        assert arr[j - 1] == pytest.approx(orbit_norm(op, x, j).logmag, rel=1e-12, abs=1e-12)


def test_harmonic_norm_law():
    T = UnilateralBackward(Harmonic())
    for n in (1, 2, 10, 9999):
        assert orbit_norm(T, SparseVec.basis(n + 1), n).to_real() == pytest.approx(n + 1, rel=1e-12)
        assert operator_norm(T, n).to_real() == pytest.approx(n + 1, rel=1e-12)
    assert orbit_norm(T, SparseVec.basis(5), 5).is_zero()


def test_block_special_vector_stays_large():
    T = UnilateralBackward(BlockHalvesTwos())
    x = special_block_vector(200)
    assert min(orbit_norm(T, x, m).to_real() for m in range(1, 101)) >= 1 - 1e-12
    assert operator_norm(T, 3).to_real() == pytest.approx(8.0)


def test_explicit_operator_norm_scans_windows():
    T = UnilateralBackward(ExplicitList([1, 3, 0.25, 2, 5], tail=0.5))
    # windows w_{k+1}..w_{k+2}, k >= 1: (3,.25) (.25,2) (2,5) (5,.5) (.5,.5)
    assert operator_norm(T, 2).to_real() == pytest.approx(10.0)


def test_forward_convention():
    F = UnilateralForward(ExplicitList([1, 2, 3, 4]))
    y = apply(F, SparseVec.basis(1))
    assert y.indices == [2] and y.coeff(2).to_real() == pytest.approx(2.0)


def test_bilateral_inverse_and_weighted_norm():
    F, B = BilateralForward(PROFILE), BilateralBackward(PROFILE)
    assert inverse(F) == B and inverse(B) == F
    x = SparseVec.basis(4)
    assert vector_norm(F, x).to_real() == pytest.approx(2 ** (-1 / 3))
    assert orbit_norm(F, SparseVec.basis(0), 68).to_real() == pytest.approx(3 ** 0.25)
    assert orbit_norm(B, SparseVec.basis(68), 64).to_real() == pytest.approx(2 ** (-1 / 3))


def test_direct_sum():
    S = DirectSumWithIdentity(UnilateralBackward(Harmonic()), )
    x = PairVec(SparseVec.basis(3), SparseVec.basis(1, 2.0))
    assert orbit_norm(S, x, 1).to_real() == pytest.approx(1.5 + 2.0)
    assert orbit_norm(S, x, 10).to_real() == pytest.approx(2.0)
    with pytest.raises(DomainError):
        apply(S, SparseVec.basis(1))
    assert operator_norm(S, 4).to_real() == pytest.approx(5.0)


def test_sparse_vector_algebra():
    a = SparseVec([(1, 1.0), (2, 2.0), (1, 0.5)])
    assert a.coeff(1).to_real() == pytest.approx(1.5)
    assert (a - a).is_zero()
    assert (2 * a).coeff(2).to_real() == pytest.approx(4.0)
    assert SparseVec([(5, 0.0)]).is_zero()


def test_huge_bilateral_index():
    p = build_tbilcami("original", 50)
    F = BilateralForward(p)
    j = p.index(2 * 50 + 1)
    assert orbit_norm(F, SparseVec.basis(0), j).logmag == pytest.approx(math.log(52) / 4, rel=1e-12)


@pytest.mark.parametrize("first,rise,run,count", [
    (0.0, 1.0, 10, 10), (0.3, -2.0, 7, 3), (1.0, 1e-20, 10 ** 30, 10 ** 29),
    (0.0, 5.0, 1, 1), (-1.0, 0.0, 4, 4), (0.0, -50.0, 100, 60)])
def test_log_geometric_sum(first, rise, run, count):
    got = log_geometric_sum(first, rise, run, count)
    if count <= 10 ** 6:
        terms = [first + rise * k / run for k in range(count)]
        want = math.log(math.fsum(math.exp(t) for t in terms))
    else:
        # nearly flat: sum ~ count * exp(first + rise*(count-1)/(2 run))
        want = first + math.log(count) + rise * (count - 1) / (2 * run)
    assert got == pytest.approx(want, rel=1e-12, abs=1e-12)


def test_segments_cover_orbit():
    s = orbit_norm_series(BilateralForward(PROFILE), SparseVec.basis(0), 10 ** 5)
    segs = s.segments
    assert segs[0].j_start == 1
    assert all(b.j_start == a.j_end + 1 for a, b in zip(segs, segs[1:]))
    for seg in segs[:4]:
        for j in (seg.j_start, seg.j_end):
            assert seg.log_at(j) == pytest.approx(s.log_norm(j).logmag, abs=1e-12)


def test_unsupported_operator_norm():
    with pytest.raises(CapabilityError):
        operator_norm(BilateralForward(PROFILE), 3)


def test_aligned_segment_sum_matches_general_path():
    from meanchaos.shiftops import Segment
    base, run = 10 ** 40, 3 * 10 ** 39 + 7
    fast = Segment(base + 1, base + run, base, -0.3, 0.8, run, True)
    slow = Segment(base + 1, base + run, base, -0.3, 0.8, run)
    assert fast.count == slow.count
    assert fast.log_sum() == pytest.approx(slow.log_sum(), rel=1e-14)
