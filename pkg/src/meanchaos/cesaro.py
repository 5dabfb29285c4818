"""Cesàro means ``A_N(x) = (1/N) sum_{j=1}^N ||T^j x||`` and evaluation schedules.

Two interchangeable backends:

``loop``
    direct vectorised evaluation of every term (``N`` up to a budget);
``segment``
    closed-form geometric sums over the affine pieces of ``log ||T^j x||``,
    usable at any ``N`` the weight profile reaches.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import CapabilityError, DomainError
from .logcore import ZERO, LogReal, index_str, log_add, log_index, log_sum_array
from .shiftops import OrbitNormSeries, log_geometric_sum
from .weights import tbilcami_index

LOOP_BUDGET = 10 ** 8
BACKENDS = ("loop", "segment", "auto")


def geometric_segment_sum(log_a: float, log_q: float, count: int) -> LogReal:
    """``sum_{l=0}^{count-1} a q^l`` for ``a = exp(log_a)``, ``q = exp(log_q)``."""
    if count < 0:
        raise DomainError("count must be >= 0")
    if count == 0:
        return ZERO
    return LogReal(1, log_geometric_sum(log_a, log_q, 1, count))


def _divide(total: LogReal, N: int) -> LogReal:
    return LogReal(total.sign, total.logmag - log_index(N)) if total.sign else ZERO


def _pick_backend(series: OrbitNormSeries, N: int, backend: str, loop_budget: int) -> str:
    if backend not in BACKENDS:
        raise ValueError(f"backend must be one of {BACKENDS}")
    if backend == "auto":
        return "segment" if series.exact else "loop"
    if backend == "segment" and not series.exact:
        raise CapabilityError("segment backend needs p = 1 or a single-entry vector")
    if backend == "loop" and N > loop_budget:
        raise CapabilityError(f"N={N} exceeds the loop budget {loop_budget}")
    return backend


def cesaro_sum(series: OrbitNormSeries, N: int, backend: str = "auto",
               loop_budget: int = LOOP_BUDGET) -> LogReal:
    """``sum_{j=1}^N ||T^j x||``."""
    series._check_n(N)
    if _pick_backend(series, N, backend, loop_budget) == "segment":
        return series.segment_sum(N)
    return series.loop_sum(N)


def cesaro_mean(series: OrbitNormSeries, N: int, backend: str = "auto",
                loop_budget: int = LOOP_BUDGET) -> LogReal:
    """``A_N``; the division by ``N`` happens in the log domain."""
    return _divide(cesaro_sum(series, N, backend, loop_budget), N)


def window_mean(series: OrbitNormSeries, K: int, N: int, backend: str = "auto") -> LogReal:
    """Mean of ``||T^j x||`` over ``K < j <= N``."""
    if not 0 <= K < N:
        raise DomainError("need 0 <= K < N")
    if _pick_backend(series, N, backend, LOOP_BUDGET) == "segment":
        total = ZERO
        for seg in series.iter_segments():
            if seg.j_start > N:
                break
            part = seg.log_sum(K + 1, N)
            if part > -math.inf:
                total = log_add(total, LogReal(1, part))
        return _divide(total, N - K)
    return _divide(log_sum_array(series.log_norms(K + 1, N)), N - K)


def density_bound_from_cesaro(A_N, delta: float) -> float:
    """Markov bound ``card{j <= N : ||T^j x|| >= delta} / N <= min(1, A_N / delta)``."""
    if delta <= 0:
        raise DomainError("delta must be > 0")
    a = A_N.to_real() if isinstance(A_N, LogReal) else float(A_N)
    return min(1.0, a / delta)


# ---------------------------------------------------------------------------
# schedules


class Schedule:
    def points(self) -> list:
        raise NotImplementedError

    def _checked(self, pts):
        pts = [int(n) for n in pts]
        if not pts or pts[0] < 1 or any(b <= a for a, b in zip(pts, pts[1:])):
            raise DomainError("schedules are nonempty, positive and strictly increasing")
        return pts


@dataclass
class GeometricGrid(Schedule):
    N_min: int
    N_max: int
    factor: float = 2.0

    def points(self):
        if self.factor <= 1 or self.N_min < 1 or self.N_max < self.N_min:
            raise DomainError("need 1 <= N_min <= N_max and factor > 1")
        pts, n = [], self.N_min
        while n < self.N_max:
            pts.append(n)
            n = max(n + 1, int(math.ceil(n * self.factor)))
        pts.append(self.N_max)
        return self._checked(pts)


@dataclass
class TbilcamiDips(Schedule):
    """``N_k = k(n_k - m_-k) = 2k n_k``."""

    ks: Sequence[int] = (1, 2, 3)

    def points(self):
        return self._checked([2 * k * tbilcami_index(2 * k) for k in self.ks])


@dataclass
class TbilcamiHills(Schedule):
    """``N = m_k``."""

    ks: Sequence[int] = (10, 100)

    def points(self):
        return self._checked([tbilcami_index(2 * k + 1) for k in self.ks])


@dataclass
class Explicit(Schedule):
    values: Sequence[int] = ()

    def points(self):
        return self._checked(self.values)


def as_points(schedule) -> list:
    if isinstance(schedule, Schedule):
        return schedule.points()
    return Explicit(list(schedule)).points()


@dataclass
class CesaroTrace:
    schedule: list
    values: list
    backends: list = field(default_factory=list)

    def _reals(self):
        return [v.to_real() for v in self.values]

    @property
    def argmin(self) -> int:
        return self.schedule[min(range(len(self.values)), key=lambda i: self.values[i])]

    @property
    def argmax(self) -> int:
        return self.schedule[max(range(len(self.values)), key=lambda i: self.values[i])]

    @property
    def min(self) -> LogReal:
        return min(self.values)

    @property
    def max(self) -> LogReal:
        return max(self.values)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["N", "mean", "log10_mean"])
        for N, v in zip(self.schedule, self.values):
            w.writerow([index_str(N), repr(v.to_real()), repr(v.log10)])
        return buf.getvalue()

    def to_dict(self):
        return {"N": [index_str(N) for N in self.schedule],
                "mean": self._reals(),
                "log10_mean": [v.log10 for v in self.values],
                "backend": list(self.backends)}


def cesaro_trace(series: OrbitNormSeries, schedule, backend: str = "auto",
                 loop_budget: int = LOOP_BUDGET) -> CesaroTrace:
    """``A_N`` at every schedule point; segment sums stream through the series once."""
    pts = as_points(schedule)
    for N in pts:
        series._check_n(N)
    chosen = [_pick_backend(series, N, backend, loop_budget) for N in pts]
    values = [None] * len(pts)
    seg_idx = [i for i, b in enumerate(chosen) if b == "segment"]
    if seg_idx:
        sums = series.segment_sums([pts[i] for i in seg_idx])
        for i, s in zip(seg_idx, sums):
            values[i] = _divide(s, pts[i])
    for i, b in enumerate(chosen):
        if b == "loop":
            values[i] = _divide(series.loop_sum(pts[i]), pts[i])
    return CesaroTrace(pts, values, chosen)
