"""Finite-horizon densities, distributional functions and pair classification.

Everything here is evidence at a horizon, never an asymptotic claim: each
verdict is labelled ``supported`` / ``unsupported`` and carries the horizon,
schedule and thresholds it was computed with.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .cesaro import GeometricGrid, as_points, cesaro_trace
from .errors import DomainError
from .logcore import index_str
from .shiftops import PairVec, SparseVec, orbit_norm_series

SUPPORTED, UNSUPPORTED = "supported", "unsupported"
FLAGS = ("LY", "meanLY", "DC1", "DC2", "DC2half", "DC3")
DENSITY_BUDGET = 10 ** 8


@dataclass(frozen=True)
class DensityEstimate:
    """``low``/``high``: min/max of ``card(A ∩ [1,n])/n`` over ``tail_start <= n <= horizon``."""

    horizon: int
    tail_start: int
    low: float
    high: float


def _default_tail(horizon: int) -> int:
    return max(1, horizon // 10)


def _membership_mask(member, horizon: int) -> np.ndarray:
    if not callable(member):
        mask = np.asarray(member, dtype=bool)
        if mask.shape != (horizon,):
            raise DomainError(f"membership mask must have length {horizon}")
        return mask
    js = np.arange(1, horizon + 1, dtype=np.int64)
    try:
        mask = np.asarray(member(js), dtype=bool)
        if mask.shape == js.shape:
            return mask
    except (TypeError, ValueError):
        pass
    return np.fromiter((bool(member(int(j))) for j in js), dtype=bool, count=horizon)


def _ratios(mask: np.ndarray) -> np.ndarray:
    return np.cumsum(mask, dtype=np.int64) / np.arange(1, mask.size + 1, dtype=float)


def density_estimate(member: Union[Callable, np.ndarray], horizon: int,
                     tail_start: Optional[int] = None) -> DensityEstimate:
    """Lower/upper density surrogates of a set of positive integers.

    ``member`` is a predicate on ``j`` (vectorised over a numpy array when it
    can be, else called per integer) or a boolean mask whose entry ``j-1``
    says whether ``j`` is in the set.
    """
    if horizon < 1 or horizon > DENSITY_BUDGET:
        raise DomainError(f"horizon must be in [1, {DENSITY_BUDGET}]")
    tail_start = _default_tail(horizon) if tail_start is None else int(tail_start)
    if not 1 <= tail_start <= horizon:
        raise DomainError("need 1 <= tail_start <= horizon")
    r = _ratios(_membership_mask(member, horizon))[tail_start - 1:]
    return DensityEstimate(horizon, tail_start, float(r.min()), float(r.max()))


def density_table(member, horizon: int, every: int = 1) -> list:
    """Rows ``(n, count, ratio)`` for ``n = every, 2*every, ...`` (and ``horizon``)."""
    mask = _membership_mask(member, horizon)
    counts = np.cumsum(mask, dtype=np.int64)
    ns = list(range(every, horizon + 1, every))
    if not ns or ns[-1] != horizon:
        ns.append(horizon)
    return [(n, int(counts[n - 1]), counts[n - 1] / n) for n in ns]


def default_delta_grid() -> list:
    return [float(d) for d in np.logspace(-6, 2, 17)]


@dataclass
class DistributionalProfile:
    delta_grid: list
    F: list       # DensityEstimate per delta; F(delta) = est.low
    Fstar: list   # same sets; F*(delta) = est.high

    @property
    def F_values(self):
        return [e.low for e in self.F]

    @property
    def Fstar_values(self):
        return [e.high for e in self.Fstar]


def _difference(x, y):
    if y is None:
        return x
    return x - y


def _orbit_log_norms(op, d, horizon):
    if d.is_zero():
        return np.full(horizon, -math.inf)
    return orbit_norm_series(op, d, horizon).log_norms(1, horizon)


def distributional_profile(op, x, y, delta_grid: Sequence[float], horizon: int,
                           tail_start: Optional[int] = None) -> DistributionalProfile:
    """Densities of ``{j : ||T^j x - T^j y|| < delta}`` for each grid ``delta``."""
    grid = sorted(float(d) for d in delta_grid)
    if not grid or grid[0] <= 0:
        raise DomainError("delta grid must be positive")
    if horizon > DENSITY_BUDGET:
        raise DomainError(f"horizon beyond the per-step budget {DENSITY_BUDGET}")
    logs = _orbit_log_norms(op, _difference(x, y), horizon)
    tail_start = _default_tail(horizon) if tail_start is None else int(tail_start)
    ests = [density_estimate(logs < math.log(d), horizon, tail_start) for d in grid]
    return DistributionalProfile(grid, ests, ests)


@dataclass
class ClassifyParams:
    eta: float = 1e-3          # smallness threshold
    Lam: float = 1e3           # largeness threshold
    c: float = 0.5             # density margin
    horizon: int = 10 ** 4     # per-step horizon (LY and distributional functions)
    tail_start: Optional[int] = None
    deltas: Optional[list] = None
    schedule: Optional[list] = None  # Cesàro points; default geometric grid to horizon
    density_tol: float = 0.05  # "F* = 1" is read as F* >= 1 - density_tol
    backend: str = "auto"

    def resolved(self) -> "ClassifyParams":
        sched = as_points(self.schedule) if self.schedule is not None else \
            GeometricGrid(1, self.horizon, 2.0).points()
        return ClassifyParams(self.eta, self.Lam, self.c, int(self.horizon),
                              _default_tail(self.horizon) if self.tail_start is None
                              else int(self.tail_start),
                              sorted(self.deltas) if self.deltas else default_delta_grid(),
                              sched, self.density_tol, self.backend)

    def to_dict(self):
        d = asdict(self)
        d["schedule"] = None if self.schedule is None else [index_str(n) for n in self.schedule]
        return d


@dataclass
class PairVerdict:
    flags: dict
    params: ClassifyParams
    evidence: dict = field(default_factory=dict)
    pair: dict = field(default_factory=dict)

    def supported(self, flag: str) -> bool:
        return self.flags[flag] == SUPPORTED

    def to_dict(self):
        return {"pair": self.pair, "params": self.params.to_dict(),
                "flags": dict(self.flags), "evidence": self.evidence}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, default=_json_default)


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    raise TypeError(f"not serialisable: {type(o).__name__}")


def _vec_dict(v):
    if v is None:
        return None
    if isinstance(v, PairVec):
        return {"first": v.first.to_dict(), "second": v.second.to_dict()}
    return v.to_dict()


def _finite(x: float):
    return x if math.isfinite(x) else (None if math.isnan(x) else ("inf" if x > 0 else "-inf"))


def classify_pair(op, x, y=None, params: Optional[ClassifyParams] = None) -> PairVerdict:
    """Flags LY, meanLY and DC1/DC2/DC2half/DC3 for the pair ``(x, y)`` at a horizon.

    Decision rules (strict inequalities, so ties are unsupported):

    * meanLY: ``min_N A_N(x-y) < eta`` and ``max_N A_N(x-y) > Lam`` over the schedule;
    * LY: the same with the per-step norms ``||T^j(x-y)||``, ``j <= horizon``,
      or implied by meanLY (``min_j ||T^j d|| <= A_N <= max_j ||T^j d||``);
    * DC1: ``F* >= 1 - tol`` on the whole grid and ``F(eps) < tol`` for some grid ``eps``;
    * DC2: ``F* >= 1 - tol`` on the grid and ``F(eps) < 1 - tol`` for some ``eps``;
    * DC2half: ``F*(d) - F(d) > c`` at the smallest grid ``d``;
    * DC3: ``F(d) < F*(d) - c`` at two adjacent grid points.

    Flags are closed upwards (DC1 => DC2 => DC2half => DC3).
    """
    prm = (params or ClassifyParams()).resolved()
    if prm.eta >= prm.Lam:
        raise DomainError("need eta < Lam")
    d = _difference(x, y)
    sched = prm.schedule
    flags = dict.fromkeys(FLAGS, UNSUPPORTED)
    evidence = {"schedule_max": index_str(sched[-1]), "horizon": prm.horizon}

    if d.is_zero():
        dip = peak = 0.0
        arg_dip = arg_peak = sched[0]
        logs = np.full(prm.horizon, -math.inf)
    else:
        series = orbit_norm_series(op, d, max(sched[-1], prm.horizon))
        trace = cesaro_trace(series, sched, prm.backend)
        dip, peak = trace.min.to_real(), trace.max.to_real()
        arg_dip, arg_peak = trace.argmin, trace.argmax
        logs = series.log_norms(1, prm.horizon)
    evidence.update(dip=dip, peak=peak, argdip=index_str(arg_dip), argpeak=index_str(arg_peak))
    if dip < prm.eta and peak > prm.Lam:
        flags["meanLY"] = SUPPORTED

    nmin, nmax = float(np.exp(logs.min())), float(np.exp(logs.max()))
    evidence.update(min_norm=nmin, max_norm=_finite(nmax))
    # a mean below eta (above Lam) forces some single norm below eta (above Lam)
    if (nmin < prm.eta and nmax > prm.Lam) or flags["meanLY"] == SUPPORTED:
        flags["LY"] = SUPPORTED

    tol = prm.density_tol
    F, Fs = [], []
    for delta in prm.deltas:
        est = density_estimate(logs < math.log(delta), prm.horizon, prm.tail_start)
        F.append(est.low)
        Fs.append(est.high)
    evidence.update(F=F, Fstar=Fs)
    full = all(v >= 1 - tol for v in Fs)
    dc1 = full and any(v < tol for v in F)
    dc2 = dc1 or (full and any(v < 1 - tol for v in F))
    dc2h = dc2 or (Fs[0] - F[0] > prm.c)
    gaps = [fs - f > prm.c for f, fs in zip(F, Fs)]
    dc3 = dc2h or any(a and b for a, b in zip(gaps, gaps[1:]))
    for name, ok in (("DC1", dc1), ("DC2", dc2), ("DC2half", dc2h), ("DC3", dc3)):
        flags[name] = SUPPORTED if ok else UNSUPPORTED

    return PairVerdict(flags, prm, evidence, {"x": _vec_dict(x), "y": _vec_dict(y)})
