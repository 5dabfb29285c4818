"""Weight sequences for the shift operators.

Unilateral models (indexed from 1) expose ``log_weight`` and the prefix sum
``cum_log(j) = sum_{i<=j} log w_i``, so window products are differences of
two ``cum_log`` values.  Bilateral weights are :class:`AnchorProfile`
objects: piecewise log-linear between integer anchors that alternate
between valleys ``n_k`` and hills ``m_k``.
"""
from __future__ import annotations

import bisect
import json
import math
from functools import lru_cache
from math import isqrt
from typing import Iterator, Sequence

import numpy as np

from .checks import CheckReport
from .errors import DomainError
from .logcore import LogReal, exact_ratio, index_brief, index_int, index_str, log_index

LN2 = math.log(2.0)


class WeightModel:
    """Positive weights ``w_1, w_2, ...`` of a unilateral shift."""

    bilateral = False
    #: every integer is a slope change of ``cum_log`` (no long affine runs)
    dense_kinks = False

    def log_weight(self, j: int) -> float:
        raise NotImplementedError

    def cum_log(self, j: int) -> float:
        raise NotImplementedError

    def cum_log_array(self, idx: np.ndarray) -> np.ndarray:
        return np.array([self.cum_log(int(i)) for i in idx], dtype=float)

    def kinks(self, lo: int, hi: int) -> list:
        """Indices in ``[lo, hi]`` (ends included) between which ``cum_log`` is affine."""
        if self.dense_kinks:
            return list(range(lo, hi + 1))
        return [lo, hi] if hi > lo else [lo]

    def sup_weight(self) -> float:
        """``sup_{j>=2} w_j``, the norm of the backward shift on unweighted l^p."""
        raise NotImplementedError

    def _check(self, j, lo=1):
        if j < lo:
            raise DomainError(f"index {j} outside the weight domain (j >= {lo})")


class Constant(WeightModel):
    def __init__(self, c: float = 1.0):
        if c <= 0:
            raise DomainError("weights must be strictly positive")
        self.c = float(c)
        self._lc = math.log(self.c)

    def log_weight(self, j):
        self._check(j)
        return self._lc

    def cum_log(self, j):
        self._check(j, 0)
        return 0.0 if self._lc == 0.0 else j * self._lc

    def cum_log_array(self, idx):
        return np.asarray(idx, dtype=float) * self._lc

    def sup_weight(self):
        return self.c

    def __repr__(self):
        return f"Constant({self.c!r})"


class Harmonic(WeightModel):
    """``w_k = k/(k-1)`` for ``k >= 2``; ``w_1`` is taken as 1 (never used)."""

    dense_kinks = True

    def log_weight(self, j):
        self._check(j)
        return 0.0 if j == 1 else math.log1p(exact_ratio(1, j - 1))

    def cum_log(self, j):
        self._check(j, 0)
        return 0.0 if j == 0 else log_index(j)

    def cum_log_array(self, idx):
        idx = np.asarray(idx, dtype=float)
        out = np.zeros_like(idx)
        pos = idx > 0
        out[pos] = np.log(idx[pos])
        return out

    def sup_weight(self):
        return 2.0

    def __repr__(self):
        return "Harmonic()"


class BlockHalvesTwos(WeightModel):
    """``(1/2, 2, 1/2, 1/2, 2, 2, ...)``: block ``n`` is ``n`` halves then ``n`` twos.

    Block ``n`` occupies indices ``(n-1)n+1 .. n(n+1)``.
    """

    @staticmethod
    def block_of(j: int) -> tuple:
        """``(n, r)``: block number and 1-based offset of index ``j`` in it."""
        n = (isqrt(4 * j - 3) + 1) // 2  # largest n with (n-1)n < j
        while (n - 1) * n >= j:
            n -= 1
        while n * (n + 1) < j:
            n += 1
        return n, j - (n - 1) * n

    def log_weight(self, j):
        self._check(j)
        n, r = self.block_of(j)
        return -LN2 if r <= n else LN2

    def cum_log(self, j):
        self._check(j, 0)
        if j == 0:
            return 0.0
        n, r = self.block_of(j)
        return -LN2 * (r if r <= n else 2 * n - r)

    def cum_log_array(self, idx):
        j = np.asarray(idx, dtype=np.int64)
        n = np.floor((np.sqrt(np.maximum(4.0 * j - 3.0, 1.0)) + 1.0) / 2.0).astype(np.int64)
        n = np.where((n - 1) * n >= j, n - 1, n)
        n = np.where(n * (n + 1) < j, n + 1, n)
        r = j - (n - 1) * n
        out = -LN2 * np.where(r <= n, r, 2 * n - r).astype(float)
        return np.where(j == 0, 0.0, out)

    def kinks(self, lo, hi):
        # slope changes at l(l-1) and l^2
        pts = {lo, hi}
        l = max(1, isqrt(max(lo, 0)) - 1)
        while (l - 1) * l <= hi:
            for q in ((l - 1) * l, l * l):
                if lo < q < hi:
                    pts.add(q)
            l += 1
        return sorted(pts)

    def sup_weight(self):
        return 2.0

    def __repr__(self):
        return "BlockHalvesTwos()"


class ExplicitList(WeightModel):
    """Listed weights ``w_1..w_n``, then ``tail`` forever."""

    dense_kinks = True

    def __init__(self, values: Sequence[float], tail: float = 1.0):
        vals = np.asarray(values, dtype=float)
        if vals.size == 0 or (vals <= 0).any() or tail <= 0:
            raise DomainError("weights must be strictly positive")
        self.values = vals
        self.tail = float(tail)
        self._lw = np.log(vals)
        self._cum = np.concatenate([[0.0], np.cumsum(self._lw)])
        self._lt = math.log(self.tail)

    def log_weight(self, j):
        self._check(j)
        return float(self._lw[j - 1]) if j <= len(self.values) else self._lt

    def cum_log(self, j):
        self._check(j, 0)
        n = len(self.values)
        if j <= n:
            return float(self._cum[j])
        return float(self._cum[n]) + (j - n) * self._lt

    def cum_log_array(self, idx):
        idx = np.asarray(idx, dtype=np.int64)
        n = len(self.values)
        out = self._cum[np.minimum(idx, n)]
        return out + np.maximum(idx - n, 0) * self._lt

    def kinks(self, lo, hi):
        n = len(self.values)
        if lo >= n:
            return [lo, hi] if hi > lo else [lo]
        return list(range(lo, min(hi, n) + 1)) + ([hi] if hi > n else [])

    def sup_weight(self):
        w = self.values[1:] if len(self.values) > 1 else self.values[:0]
        return float(max(w.max(initial=0.0), self.tail))

    def __repr__(self):
        return f"ExplicitList(<{len(self.values)} values>, tail={self.tail!r})"


# ---------------------------------------------------------------------------
# bilateral profiles


class AnchorProfile:
    """Bilateral weight ``v_j`` (``j`` in Z), log-linear between anchors.

    Anchors are addressed by *position*: position ``2k`` is the valley
    ``n_k`` and ``2k+1`` the hill ``m_k``.  ``origin`` is the list position
    of ``n_0``; by default the last anchor with a negative index.
    """

    bilateral = True

    def __init__(self, anchors: Sequence[tuple], origin: int | None = None):
        idx = [int(a) for a, _ in anchors]
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise DomainError("anchor indices must be strictly increasing")
        if len(idx) < 2:
            raise DomainError("a profile needs at least two anchors")
        self._idx = idx
        self._lv = [float(v) for _, v in anchors]
        if origin is None:
            neg = [i for i, a in enumerate(idx) if a < 0]
            origin = neg[-1] if neg else 0
        self.origin = origin

    # positions ------------------------------------------------------------
    @property
    def pos_min(self) -> int:
        return -self.origin

    @property
    def pos_max(self) -> int:
        return len(self._idx) - 1 - self.origin

    @property
    def k_min(self) -> int:
        return -((-self.pos_min) // 2)  # ceil(pos_min / 2)

    @property
    def k_max(self) -> int:
        return (self.pos_max - 1) // 2

    def index(self, pos: int) -> int:
        self._check_pos(pos)
        return self._idx[pos + self.origin]

    def logv(self, pos: int) -> float:
        self._check_pos(pos)
        return self._lv[pos + self.origin]

    def valley(self, k: int) -> tuple:
        return self.index(2 * k), self.logv(2 * k)

    def hill(self, k: int) -> tuple:
        return self.index(2 * k + 1), self.logv(2 * k + 1)

    def _check_pos(self, pos):
        if not self.pos_min <= pos <= self.pos_max:
            raise DomainError(f"anchor position {pos} outside profile "
                              f"[{self.pos_min}, {self.pos_max}]")

    def locate(self, j: int) -> int:
        """Position ``p`` with ``index(p) <= j <= index(p+1)``."""
        lo, hi = self._idx[0], self._idx[-1]
        if not lo <= j <= hi:
            raise DomainError(f"index {index_brief(j)} outside profile anchors "
                              f"[{index_brief(lo)}, {index_brief(hi)}]")
        i = bisect.bisect_right(self._idx, j) - 1
        return min(i, len(self._idx) - 2) - self.origin

    def iter_anchors(self, pos_from: int, pos_to: int) -> Iterator[tuple]:
        """Yield ``(pos, index, logv)`` from ``pos_from`` to ``pos_to`` inclusive.

        Descending when ``pos_to < pos_from``.
        """
        step = 1 if pos_to >= pos_from else -1
        for p in range(pos_from, pos_to + step, step):
            yield p, self.index(p), self.logv(p)

    # values ---------------------------------------------------------------
    def log_v(self, j: int) -> float:
        p = self.locate(j)
        a, b = self.index(p), self.index(p + 1)
        la, lb = self.logv(p), self.logv(p + 1)
        if j == a:
            return la
        if j == b:
            return lb
        return la + (lb - la) * exact_ratio(j - a, b - a)

    def log_weight(self, j: int) -> LogReal:
        return LogReal(1, self.log_v(j))

    def log_v_range(self, lo: int, hi: int) -> np.ndarray:
        """``log v_j`` for the consecutive indices ``lo..hi``."""
        out = np.empty(hi - lo + 1)
        p = self.locate(lo)
        j = lo
        while j <= hi:
            a, b = self.index(p), self.index(p + 1)
            la, lb = self.logv(p), self.logv(p + 1)
            stop = min(b, hi)
            off = np.arange(j - lo, stop - lo + 1)
            frac = (float(j - a) + np.arange(stop - j + 1, dtype=float)) / float(b - a)
            out[off] = la + (lb - la) * frac
            j = stop + 1
            p += 1
        return out

    def to_explicit(self, pos_from=None, pos_to=None) -> "AnchorProfile":
        pos_from = self.pos_min if pos_from is None else pos_from
        pos_to = self.pos_max if pos_to is None else pos_to
        anchors = [(i, v) for _, i, v in self.iter_anchors(pos_from, pos_to)]
        return AnchorProfile(anchors, origin=-pos_from)

    def replace(self, pos: int, logv: float) -> "AnchorProfile":
        """Copy with the value at one anchor changed."""
        prof = self.to_explicit()
        prof._lv[pos + prof.origin] = float(logv)
        return prof

    def to_json(self) -> str:
        return profile_to_json(self)

    def __repr__(self):
        return (f"{type(self).__name__}(positions {self.pos_min}..{self.pos_max}, "
                f"origin index {self.index(0)})")


def profile_to_json(profile: AnchorProfile) -> str:
    rows = [{"index": index_str(i), "logv": v}
            for _, i, v in profile.iter_anchors(profile.pos_min, profile.pos_max)]
    return json.dumps(rows)


def profile_from_json(text: str, origin: int | None = None) -> AnchorProfile:
    rows = json.loads(text)
    return AnchorProfile([(index_int(r["index"]), float(r["logv"])) for r in rows], origin)


def _growth(k: int) -> int:
    return 16 * k ** 3 + 1


@lru_cache(maxsize=128)
def _magnitude(q: int) -> int:
    """``P(q)``: the positive anchor at position ``q >= 1`` (``1, 4, 68, ...``)."""
    if q == 1:
        return 1
    k = q // 2
    n_k = 4 * math.prod(_growth(i) for i in range(1, k)) ** 2
    return n_k if q % 2 == 0 else n_k * _growth(k)


class TbilcamiProfile(AnchorProfile):
    """The hill/valley profile with ``m_k = (16k^3+1) n_k``, ``n_{k+1} = (16k^3+1) m_k``.

    Anchor indices are exact integers produced on demand; nothing is stored
    per level, so profiles with ``k_max`` in the tens of thousands (indices
    with ~10^5 digits) stay cheap.  ``variant='flattened'`` puts every hill
    at ``v = 1`` and keeps the indices.
    """

    def __init__(self, variant: str = "original", k_max: int = 8):
        if variant not in ("original", "flattened"):
            raise ValueError(f"unknown variant {variant!r}")
        if k_max < 1:
            raise DomainError("k_max must be >= 1")
        self.variant = variant
        self._k_max = int(k_max)
        self.origin = 2 * self._k_max
        # log P(q) for q = 0..2k_max+1, used to narrow searches
        steps = [0.0, 0.0, math.log(4.0)]
        for q in range(2, 2 * self._k_max + 1):
            steps.append(math.log(_growth(q // 2)))
        self._lnP = np.cumsum(steps)  # index q -> log P(q); entry 0 unused

    @property
    def pos_min(self):
        return -2 * self._k_max

    @property
    def pos_max(self):
        return 2 * self._k_max + 1

    @property
    def flattened(self) -> bool:
        return self.variant == "flattened"

    def index(self, pos):
        self._check_pos(pos)
        return _magnitude(pos) if pos >= 1 else -_magnitude(1 - pos)

    def logv(self, pos):
        self._check_pos(pos)
        if pos >= 1:
            k = pos // 2
            if pos % 2:
                return 0.0 if self.flattened else math.log(k + 2) / 4.0
            return -math.log(2 * k) / 3.0
        kk = -(pos // 2)
        if pos % 2 == 0:
            return -math.log(2 * kk + 1) / 3.0
        return 0.0 if self.flattened else math.log(kk + 1) / 4.0

    def _first_q_at_least(self, m: int) -> int:
        """Smallest ``q >= 1`` with ``P(q) >= m``."""
        q = int(np.searchsorted(self._lnP[1:], math.log(m) - 1e-9)) + 1
        q = max(1, min(q, len(self._lnP) - 1))
        while q > 1 and _magnitude(q - 1) >= m:
            q -= 1
        while _magnitude(q) < m:
            q += 1
        return q

    def locate(self, j):
        lo, hi = self.index(self.pos_min), self.index(self.pos_max)
        if not lo <= j <= hi:
            raise DomainError(f"index {index_brief(j)} outside profile anchors (levels up to "
                              f"k_max={self._k_max})")
        if j >= 1:
            q = self._first_q_at_least(j)
            if _magnitude(q) > j:
                q -= 1
            return min(q, self.pos_max - 1)
        if j >= -1:
            return 0
        return 1 - self._first_q_at_least(-j)

    def iter_anchors(self, pos_from, pos_to):
        self._check_pos(pos_from)
        self._check_pos(pos_to)
        step = 1 if pos_to >= pos_from else -1
        p = pos_from
        idx = self.index(p)
        while True:
            yield p, idx, self.logv(p)
            if p == pos_to:
                return
            p += step
            idx = self._neighbour(p - step, idx, step)

    @staticmethod
    def _neighbour(pos, idx, step):
        """Index of anchor ``pos + step`` given the index at ``pos``."""
        if pos >= 1 or (pos == 0 and step > 0):
            q, mag = (pos, idx) if pos >= 1 else (0, None)
            if step > 0:
                if q == 0:
                    return 1
                return 4 if q == 1 else mag * _growth(q // 2)
            if q == 1:
                return -1
            return 1 if q == 2 else mag // _growth((q - 1) // 2)
        # negative side: index(pos) = -P(1 - pos)
        q, mag = 1 - pos, -idx
        if step < 0:
            return -(4 if q == 1 else mag * _growth(q // 2))
        return -(1 if q == 2 else mag // _growth((q - 1) // 2))

    def to_explicit(self, pos_from=None, pos_to=None):
        return AnchorProfile.to_explicit(self, pos_from, pos_to)

    def __repr__(self):
        return f"TbilcamiProfile({self.variant!r}, k_max={self._k_max})"


def build_tbilcami(variant: str = "original", k_max: int = 8) -> TbilcamiProfile:
    """Anchors ``n_k, m_k`` for ``k = -k_max..k_max`` of the hill/valley profile.

    ``n_0 = -1, m_0 = 1, n_1 = 4``, ``m_k = (16k^3+1) n_k``,
    ``n_{k+1} = (16k^3+1) m_k`` and ``m_{-k} = -n_k``, ``n_{-k} = -m_k``.
    Values: ``v_{n_k} = (2k)^(-1/3)``, ``v_{m_k} = (k+2)^(1/4)``,
    ``v_{n_-k} = (2k+1)^(-1/3)``, ``v_{m_-k} = (k+1)^(1/4)``; the flattened
    variant sets every hill to 1.
    """
    return TbilcamiProfile(variant, k_max)


def log_weight(model, j: int) -> LogReal:
    """``log w_j`` (or ``log v_j`` for a bilateral profile)."""
    if isinstance(model, AnchorProfile):
        return model.log_weight(j)
    return LogReal(1, model.log_weight(j))


def cum_log(model, j: int) -> float:
    """Prefix sum ``L(j) = sum_{i<=j} log w_i`` of a unilateral model."""
    if isinstance(model, AnchorProfile):
        raise DomainError("cum_log is not defined for bilateral profiles; use log_weight")
    return model.cum_log(j)


# ---------------------------------------------------------------------------
# inequality suite for the hill/valley construction


def _segment_log_slope(a, la, b, lb):
    """``(sign, log|slope|)`` of ``log v`` on ``[a, b]``; slope = rise/run."""
    rise = lb - la
    if rise == 0:
        return 0, -math.inf, rise, b - a
    return (1 if rise > 0 else -1), math.log(abs(rise)) - log_index(b - a), rise, b - a


def verify_tbilcami(profile: AnchorProfile, k: int, M: float = 2.0) -> CheckReport:
    """Check the slope, envelope and spacing hypotheses at level ``k``.

    * forward: ``S_k^{k(n_k - m_-k)} <= min(M, min_{[m_-k, m_k-1]} v / v_{n_k})``
      with ``S_k`` the largest ratio ``v_j / v_{j-1}`` for ``j`` outside
      ``]m_-k, m_k-1]``;
    * backward: ``s_k^{k(n_-k - m_k)} <= min(M, min_{[m_-k, m_k]} v / v_{n_-k})``
      with ``s_k`` the smallest ratio outside ``]m_-k, m_k]``;
    * envelopes ``M v_{m_-k} >= v_j`` on ``[m_-k, m_k-1]`` and
      ``M v_{m_k} >= v_j`` on ``[m_-k, m_k]``;
    * spacing ``m_k - n_k > 2(m_k-1 - n_k-1)`` and
      ``n_k+1 - m_k > 2(n_k - m_k-1)``.

    All comparisons are made between logarithms.  Window minima and maxima
    are taken over anchors only; that is enough because ``log v`` is affine
    between anchors.  The supremum and infimum of the ratios run over every
    segment of the profile outside the window; the last entry checks that
    the extreme slopes are not attained at the outermost levels, i.e. that
    levels beyond the profile cannot change them.
    """
    if k < 1:
        raise DomainError("level k must be >= 1")
    need_lo, need_hi = -2 * k, 2 * k + 2
    if profile.pos_min > need_lo or profile.pos_max < need_hi:
        raise DomainError(f"profile must contain anchors n_-{k} .. n_{k + 1}")
    rep = CheckReport(f"hill/valley hypotheses at k={k}")
    lnM = math.log(M)

    n_k, lv_nk = profile.valley(k)
    m_mk, lv_mmk = profile.hill(-k)
    n_mk, lv_nmk = profile.valley(-k)
    m_k, lv_mk = profile.hill(k)
    m_km1, _ = profile.hill(k - 1)

    # anchors for window extrema
    win_f = [(i, v) for _, i, v in profile.iter_anchors(2 * (-k) + 1, 2 * (k - 1) + 1)]
    win_b = [(i, v) for _, i, v in profile.iter_anchors(2 * (-k) + 1, 2 * k + 1)]

    # segment slopes: restricted to levels up to k+3 (or the profile's end)
    span_lo = max(profile.pos_min, -2 * (k + 3))
    span_hi = min(profile.pos_max, 2 * (k + 3) + 1)
    segs = []
    prev = None
    for p, i, v in profile.iter_anchors(span_lo, span_hi):
        if prev is not None:
            segs.append((prev[1], prev[2], i, v, prev[0]))
        prev = (p, i, v)

    def outside(seg, lo_idx, hi_idx):
        a, _, b, _, _ = seg
        return b <= lo_idx or a >= hi_idx

    # forward sup of ratios outside ]m_-k, m_k-1]
    best_f = None
    for seg in segs:
        if not outside(seg, m_mk, m_km1):
            continue
        sgn, lsl, rise, run = _segment_log_slope(*seg[:4])
        key = (sgn, lsl if sgn > 0 else -lsl)
        if best_f is None or key > best_f[0]:
            best_f = (key, rise, run, seg)
    _, rise_f, run_f, seg_f = best_f
    lhs_f = rise_f * exact_ratio(k * (n_k - m_mk), run_f)
    rhs_f = min(lnM, min(v for _, v in win_f) - lv_nk)
    rep.add("forward_slope", lhs_f, rhs_f, "<=", anchor="S_k^{k(n_k-m_{-k})} <= min{M, min v / v_{n_k}}",
            note=f"sup ratio attained on segment starting at anchor position {seg_f[4]}")

    # backward inf of ratios outside ]m_-k, m_k]
    best_b = None
    for seg in segs:
        if not outside(seg, m_mk, m_k):
            continue
        sgn, lsl, rise, run = _segment_log_slope(*seg[:4])
        key = (-sgn, lsl if sgn < 0 else -lsl)
        if best_b is None or key > best_b[0]:
            best_b = (key, rise, run, seg)
    _, rise_b, run_b, seg_b = best_b
    lhs_b = rise_b * exact_ratio(k * (n_mk - m_k), run_b)
    rhs_b = min(lnM, min(v for _, v in win_b) - lv_nmk)
    rep.add("backward_slope", lhs_b, rhs_b, "<=", anchor="s_k^{k(n_{-k}-m_k)} <= min{M, min v / v_{n_{-k}}}",
            note=f"inf ratio attained on segment starting at anchor position {seg_b[4]}")

    rep.add("forward_envelope", max(v for _, v in win_f), lnM + lv_mmk, "<=",
            anchor="M v_{m_{-k}} >= v_j on [m_{-k}, m_{k-1}]")
    rep.add("backward_envelope", max(v for _, v in win_b), lnM + lv_mk, "<=",
            anchor="M v_{m_k} >= v_j on [m_{-k}, m_k]")

    n_km1, _ = profile.valley(k - 1)
    n_kp1, _ = profile.valley(k + 1)
    rep.add("spacing_hill", log_index(m_k - n_k), math.log(2) + log_index(m_km1 - n_km1), ">",
            anchor="m_k - n_k > 2(m_{k-1} - n_{k-1})")
    rep.add("spacing_valley", log_index(n_kp1 - m_k), math.log(2) + log_index(n_k - m_km1), ">",
            anchor="n_{k+1} - m_k > 2(n_k - m_{k-1})")

    # the extreme ratios must come from inner levels when the profile was cut
    edge = {span_lo, span_hi - 1}
    cut = span_lo > profile.pos_min or span_hi < profile.pos_max
    inner = seg_f[4] not in edge and seg_b[4] not in edge
    if cut or profile.pos_min == span_lo:
        rep.add("extremes_interior", 0.0 if inner else 1.0, 0.0, "==",
                anchor="S_k, s_k over j outside the level-k window",
                note="extreme ratios are attained away from the truncated levels")
    return rep


def tbilcami_index(pos: int) -> int:
    """Exact anchor index at position ``pos`` (``2k -> n_k``, ``2k+1 -> m_k``)."""
    return _magnitude(pos) if pos >= 1 else -_magnitude(1 - pos)
