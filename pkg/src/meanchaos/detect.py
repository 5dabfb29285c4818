"""Probes and constructions around Cesàro boundedness and irregular vectors.

* :func:`acb_probe` looks for vectors whose Cesàro means are large relative
  to their norm (evidence against absolute Cesàro boundedness);
* :func:`ami_probe` reports the dip/peak behaviour of one vector;
* :func:`mlycc_witness_search` finds ``(y_k, N_k)`` with ``A_{N_k}(y_k) > k ||y_k||``;
* :func:`construct_irregular_vector` runs the staged construction of an
  irregular vector ``x = sum_j x_{r_j} / (2C)^{r_j}`` and
  :func:`verify_certificate` re-checks its peak and dip inequalities.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

from .cesaro import as_points, cesaro_mean, cesaro_trace
from .checks import CheckReport
from .errors import CapabilityError, DomainError
from .logcore import LogReal, index_str
from .weights import Constant
from .shiftops import (DirectSumWithIdentity, Identity, SparseVec, UnilateralBackward,
                       UnilateralForward, operator_norm, orbit_norm, orbit_norm_series,
                       vector_norm)


def _normalized(op, x):
    n = vector_norm(op, x)
    if n.sign == 0:
        raise DomainError("zero vector")
    return x.scale(LogReal(1, -n.logmag)), n


@dataclass
class ProbeReport:
    kind: str
    rows: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    verdict: str = ""

    def to_dict(self):
        return {"kind": self.kind, "rows": self.rows, "summary": self.summary,
                "verdict": self.verdict}


# ---------------------------------------------------------------------------


def acb_probe(op, samples: Iterable, schedule, C0: Optional[float] = None) -> ProbeReport:
    """``sup_N A_N(x) / ||x||`` over the schedule for each sample.

    Only violations can be reported: a finite search never certifies
    Cesàro boundedness.
    """
    pts = as_points(schedule)
    rep = ProbeReport("acb_probe")
    best = -math.inf
    for x in samples:
        nx = vector_norm(op, x)
        if nx.sign == 0:
            raise DomainError("acb_probe needs nonzero samples")
        series = orbit_norm_series(op, x, pts[-1])
        trace = cesaro_trace(series, pts)
        lr = trace.max.logmag - nx.logmag
        best = max(best, lr)
        rep.rows.append({"sample": x.to_dict() if hasattr(x, "to_dict") else repr(x),
                         "sup_ratio": math.exp(lr), "log_sup_ratio": lr,
                         "argN": index_str(trace.argmax)})
    rep.summary = {"max_ratio": math.exp(best) if best < 700 else math.inf,
                   "log_max_ratio": best, "C0": C0}
    if C0 is not None and best > math.log(C0):
        rep.verdict = f"ACB violated beyond C0={C0}"
    else:
        rep.verdict = "no violation observed"
    return rep


def ami_probe(op, x, dip_schedule, peak_schedule, eta: float = 1e-3, Lam: float = 1e3,
              lam0: Optional[float] = None) -> ProbeReport:
    """Dip/peak summary of ``A_N(x)`` with irregular / semi-irregular candidate flags."""
    if x.is_zero():
        raise DomainError("ami_probe needs x != 0")
    lam0 = 10 * eta if lam0 is None else lam0
    dips, peaks = as_points(dip_schedule), as_points(peak_schedule)
    series = orbit_norm_series(op, x, max(dips[-1], peaks[-1]))
    td, tp = cesaro_trace(series, dips), cesaro_trace(series, peaks)
    lo, hi = td.min.to_real(), tp.max.to_real()
    rep = ProbeReport("ami_probe")
    rep.rows = [{"N": index_str(N), "mean": v.to_real(), "role": role}
                for role, t in (("dip", td), ("peak", tp))
                for N, v in zip(t.schedule, t.values)]
    irregular = lo < eta and hi > Lam
    semi = lo < eta and hi > lam0
    rep.summary = {"min_dip": lo, "max_peak": hi, "argdip": index_str(td.argmin),
                   "argpeak": index_str(tp.argmax), "eta": eta, "Lam": Lam, "lam0": lam0,
                   "irregular_candidate": irregular, "semi_irregular_candidate": semi}
    rep.verdict = ("irregular-candidate" if irregular else
                   "semi-irregular-candidate" if semi else "no flag")
    return rep


# ---------------------------------------------------------------------------
# witness searches


def basis_vectors(start: int = 1):
    """``e_start, e_start+1, ...``."""
    return (SparseVec.basis(i) for i in itertools.count(start))


class _Replay:
    """Re-iterable view of a candidate source (callable, iterable or generator)."""

    def __init__(self, source):
        self._factory = source if callable(source) else None
        self._it = None if callable(source) else iter(source)
        self._cache = []

    def __iter__(self):
        if self._factory is not None:
            yield from self._factory()
            return
        yield from self._cache
        for x in self._it:
            self._cache.append(x)
            yield x


def _log_means(op, x, H: int) -> np.ndarray:
    """``log A_N(x)`` for ``N = 1..H`` (entry ``N-1``)."""
    series = orbit_norm_series(op, x, H)
    logs = series.log_norms(1, H)
    with np.errstate(divide="ignore"):
        return np.logaddexp.accumulate(logs) - np.log(np.arange(1, H + 1, dtype=float))


def _orbit_horizon(op, x, cap: int) -> int:
    """Useful scan length: the orbit's lifetime when it dies, else ``cap``."""
    try:
        s = orbit_norm_series(op, x, cap)
    except DomainError:
        return cap
    za = s.zero_after
    return cap if za is None else max(1, min(cap, za - 1))


@dataclass
class Witness:
    k: int
    y: Optional[SparseVec]
    N: Optional[int]
    log_mean: float = math.nan
    found: bool = False

    def to_dict(self):
        return {"k": self.k, "y": None if self.y is None else self.y.to_dict(),
                "N": None if self.N is None else index_str(self.N),
                "mean_over_norm": math.exp(self.log_mean) if self.found else None,
                "found": self.found}


def mlycc_witness_search(op, X0=None, k_max: int = 5, budget: int = 10 ** 4,
                         max_N: int = 10 ** 5) -> list:
    """For ``k = 1..k_max`` the first ``(y, N)`` with ``A_N(y) > k ||y||``.

    Candidates come from ``X0`` in order (default: basis vectors ``e_1, e_2, ...``);
    for each one every ``N`` up to the orbit's lifetime (or ``max_N``) is
    scanned.  ``budget`` caps the number of candidates per ``k``; a miss is
    returned as a witness with ``found=False``.
    """
    src = _Replay(basis_vectors if X0 is None else X0)
    out = []
    for k in range(1, k_max + 1):
        w = Witness(k, None, None)
        for y in itertools.islice(src, budget):
            ny = vector_norm(op, y)
            if ny.sign == 0:
                continue
            H = _orbit_horizon(op, y, max_N)
            lm = _log_means(op, y, H) - ny.logmag
            hits = np.nonzero(lm > math.log(k))[0]
            if hits.size:
                N = int(hits[0]) + 1
                w = Witness(k, y, N, float(lm[N - 1]), True)
                break
        out.append(w)
    return out


@dataclass
class Stage:
    m: int
    x: SparseVec
    N: int
    log_peak: float           # log A_{N_m}(x_m)
    log_dips: list             # log A_{N_k}(x_m), k < m

    def to_dict(self):
        return {"m": self.m, "x": self.x.to_dict(), "N": index_str(self.N),
                "peak": math.exp(self.log_peak),
                "dips": [math.exp(d) for d in self.log_dips]}


@dataclass
class Certificate:
    C: float
    stages: list = field(default_factory=list)
    r: list = field(default_factory=list)
    x_beta: SparseVec = field(default_factory=SparseVec)
    failed_stage: Optional[int] = None
    evaluations: int = 0
    note: str = ""

    @property
    def complete(self) -> bool:
        return self.failed_stage is None

    def to_dict(self):
        return {"C": self.C, "stages": [s.to_dict() for s in self.stages],
                "r": self.r, "x_beta": self.x_beta.to_dict(),
                "failed_stage": self.failed_stage, "evaluations": self.evaluations,
                "note": self.note}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def default_C(op) -> float:
    """An upper bound for ``||T||``: the largest single weight (1 for the identity)."""
    if isinstance(op, Identity):
        return 1.0
    if isinstance(op, DirectSumWithIdentity):
        return max(1.0, default_C(op.inner))
    if isinstance(op, (UnilateralBackward, UnilateralForward)):
        try:
            return op.w.sup_weight()
        except NotImplementedError:
            pass
    return operator_norm(op, 1).to_real()


def _log_power_bound(op) -> Optional[float]:
    """``log sup_n ||T^n||`` when it is known exactly and finite, else ``None``."""
    if isinstance(op, Identity):
        return 0.0
    if isinstance(op, DirectSumWithIdentity):
        inner = _log_power_bound(op.inner)
        return None if inner is None else max(inner, 0.0)
    if isinstance(op, (UnilateralBackward, UnilateralForward)) and isinstance(op.w, Constant):
        return 0.0 if op.w.c <= 1 else None
    return None


def construct_irregular_vector(op, C: Optional[float] = None, stages: int = 3, X0=None,
                               budget: int = 10 ** 6, max_N: int = 10 ** 5) -> Certificate:
    """Staged construction of an absolutely mean irregular vector.

    Stage ``m`` looks for a unit vector ``x_m`` and ``N_m > N_{m-1}`` with

    * ``A_{N_m}(x_m) > m (2C)^m``;
    * ``A_{N_k}(x_m) < 1/m`` for ``k < m``;
    * ``A_{N_m}(x_i) < 1/m`` for the earlier ``x_i`` (their orbits have died
      out by then; this is what choosing ``N_m`` large achieves).

    Indices ``r_1 = 1``, ``r_{j+1}`` = the least value ``>= 1 + r_j + N_{r_j+1}``
    are kept while a stage exists, and ``x_beta = sum_j x_{r_j} / (2C)^{r_j}``.
    ``budget`` caps the total number of candidate vectors examined.
    """
    C = default_C(op) if C is None else float(C)
    cert = Certificate(C)
    if stages < 1:
        return cert
    src = _Replay(basis_vectors if X0 is None else X0)
    bound = _log_power_bound(op)
    prev_means = []  # log A_N(x_i) arrays of accepted stage vectors
    evals = 0
    for m in range(1, stages + 1):
        target = math.log(m) + m * math.log(2 * C)
        if bound is not None and bound <= target:
            cert.failed_stage = m
            cert.note = f"A_N(x) <= sup_n ||T^n|| ||x|| = {math.exp(bound):.6g} cannot exceed the stage target"
            break
        small = -math.log(m)
        Ns = [s.N for s in cert.stages]
        N_prev = Ns[-1] if Ns else 0
        found = None
        for y in src:
            if evals >= budget:
                break
            evals += 1
            try:
                x, _ = _normalized(op, y)
            except DomainError:
                continue
            H = max(_orbit_horizon(op, x, max_N), N_prev + 1)
            H = min(H, max_N)
            if H <= N_prev:
                continue
            lm = _log_means(op, x, H)
            if any(lm[N - 1] >= small for N in Ns):
                continue
            ok = lm > target
            ok[:N_prev] = False
            for pm in prev_means:
                ok &= pm[:H] < small
            hits = np.nonzero(ok)[0]
            if hits.size:
                N = int(hits[0]) + 1
                found = Stage(m, x, N, float(lm[N - 1]), [float(lm[n - 1]) for n in Ns])
                break
        if found is None:
            cert.failed_stage = m
            break
        cert.stages.append(found)
        prev_means.append(_extended_log_means(op, found.x, max_N))
    cert.evaluations = evals
    _assemble(cert)
    return cert


def _extended_log_means(op, x, max_N):
    H = _orbit_horizon(op, x, max_N)
    lm = _log_means(op, x, H)
    if H < max_N:
        # dead orbit: A_N = total / N beyond the lifetime
        tail = lm[-1] + math.log(H) - np.log(np.arange(H + 1, max_N + 1, dtype=float))
        lm = np.concatenate([lm, tail])
    return lm


def _assemble(cert: Certificate):
    r = []
    if cert.stages:
        r.append(1)
        while True:
            nxt = r[-1] + 1  # stage r_j + 1 fixes the spacing
            if nxt > len(cert.stages):
                break
            cand = 1 + r[-1] + cert.stages[nxt - 1].N
            if cand > len(cert.stages):
                break
            r.append(cand)
    cert.r = r
    l2c = math.log(2 * cert.C)
    x = SparseVec()
    for rj in r:
        x = x + cert.stages[rj - 1].x.scale(LogReal(1, -rj * l2c))
    cert.x_beta = x


def verify_certificate(op, cert: Certificate, tol: float = 1e-6) -> CheckReport:
    """Peak ``A_{N_{r_k}}(x_beta) >= r_k - 1`` and dip ``A_{N_{r_k+1}}(x_beta) <= 1/(r_k+1)``."""
    rep = CheckReport("irregular-vector certificate")
    if not cert.r:
        return rep
    Ns = [s.N for s in cert.stages]
    series = orbit_norm_series(op, cert.x_beta, max(Ns))
    for k, rk in enumerate(cert.r, start=1):
        peak = cesaro_mean(series, Ns[rk - 1]).to_real()
        rep.add(f"peak_{k}", peak, rk - 1, ">=", tol=tol * max(1.0, rk - 1),
                anchor="A_{N_{r_k}}(x) >= r_k - 1", note=f"r_k={rk}, N={Ns[rk - 1]}")
        if rk < len(Ns):
            dip = cesaro_mean(series, Ns[rk]).to_real()
            rep.add(f"dip_{k}", dip, 1.0 / (rk + 1), "<=", tol=tol,
                    anchor="A_{N_{r_k+1}}(x) < 1/(r_k+1)",
                    note=f"N={Ns[rk]}; x is a finite sum, so there is no truncated tail")
        else:
            rep.skip(f"dip_{k}", note=f"stage {rk + 1} was not built")
    return rep


# ---------------------------------------------------------------------------


def norm_growth_probe(op, horizon: int) -> ProbeReport:
    """``max_{n <= horizon} ||T^n|| / n`` and where it is attained."""
    if horizon < 1:
        raise DomainError("horizon must be >= 1")
    best, arg = -math.inf, 1
    last = None
    for n in range(1, horizon + 1):
        lr = operator_norm(op, n).logmag - math.log(n)
        if lr > best:
            best, arg = lr, n
        last = lr
    rep = ProbeReport("norm_growth_probe")
    rep.summary = {"max_ratio": math.exp(best) if best < 700 else math.inf,
                   "log_max_ratio": best, "argmax": arg,
                   "last_ratio": math.exp(last) if last < 700 else math.inf,
                   "horizon": horizon}
    rep.verdict = f"max ||T^n||/n = {rep.summary['max_ratio']:.6g} at n={arg}"
    return rep
