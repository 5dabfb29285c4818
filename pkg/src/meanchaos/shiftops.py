"""Weighted shifts, finitely supported vectors and closed-form orbit norms.

Spaces and norms:

* unilateral shifts act on ``l^p(N)`` (1-based, unweighted);
* bilateral shifts act on ``l^p(v, Z)`` with ``||x||^p = sum |x_j|^p v_j``.

Every operator here maps distinct basis vectors to multiples of distinct
basis vectors, so ``||T^j x||^p`` is the sum of the entries' contributions.
Each entry's contribution ``j -> log ||T^j (c e_i)||`` is piecewise affine
in ``j`` whenever the log weights are; :class:`OrbitNormSeries` exposes
those pieces as :class:`Segment` objects for closed-form summation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

from .errors import CapabilityError, DomainError
from .logcore import (NEG_INF, ZERO, LogReal, _coerce, exact_ratio, index_str,
                      log_abs_expm1, log_add, log_index, log_sum, log_sum_array)
from .weights import AnchorProfile, BlockHalvesTwos, Constant, ExplicitList, Harmonic, WeightModel

_I64 = 1 << 62


# ---------------------------------------------------------------------------
# vectors


class SparseVec:
    """Finitely supported vector: sorted ``(index, LogReal)`` pairs, no zeros."""

    __slots__ = ("entries",)

    def __init__(self, entries=()):
        acc: dict = {}
        for i, c in entries:
            i = int(i)
            c = _coerce(c)
            acc[i] = log_add(acc[i], c) if i in acc else c
        self.entries = tuple(sorted((i, c) for i, c in acc.items() if c.sign != 0))

    @classmethod
    def basis(cls, i: int, coeff=1.0) -> "SparseVec":
        return cls([(i, coeff)])

    @property
    def indices(self):
        return [i for i, _ in self.entries]

    @property
    def coeffs(self):
        return [c for _, c in self.entries]

    def is_zero(self) -> bool:
        return not self.entries

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        return isinstance(other, SparseVec) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def scale(self, lam) -> "SparseVec":
        lam = _coerce(lam)
        return SparseVec([(i, c * lam) for i, c in self.entries])

    def __mul__(self, lam):
        return self.scale(lam)

    __rmul__ = __mul__

    def __neg__(self):
        return SparseVec([(i, -c) for i, c in self.entries])

    def __add__(self, other):
        return SparseVec(list(self.entries) + list(other.entries))

    def __sub__(self, other):
        return self + (-other)

    def coeff(self, i: int) -> LogReal:
        for j, c in self.entries:
            if j == i:
                return c
        return ZERO

    def to_dict(self):
        return [{"index": index_str(i), "coeff": c.to_real(), "sign": c.sign, "logmag": c.logmag}
                for i, c in self.entries]

    def __repr__(self):
        if len(self.entries) <= 4:
            body = ", ".join(f"{i}: {c.to_real():.6g}" for i, c in self.entries)
        else:
            body = f"<{len(self.entries)} entries, {self.entries[0][0]}..{self.entries[-1][0]}>"
        return f"SparseVec({{{body}}})"


@dataclass(frozen=True)
class PairVec:
    """Element ``(x, y)`` of ``X (+) X`` for :class:`DirectSumWithIdentity`."""

    first: SparseVec
    second: SparseVec

    def is_zero(self):
        return self.first.is_zero() and self.second.is_zero()

    def scale(self, lam):
        return PairVec(self.first.scale(lam), self.second.scale(lam))

    __mul__ = scale
    __rmul__ = scale

    def __neg__(self):
        return PairVec(-self.first, -self.second)

    def __add__(self, other):
        return PairVec(self.first + other.first, self.second + other.second)

    def __sub__(self, other):
        return self + (-other)


def special_block_vector(n_max: int) -> SparseVec:
    """``x_{n(n+1)} = 2^-n`` for ``n = 1..n_max``: one entry at the last 2 of each block."""
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    return SparseVec([(n * (n + 1), LogReal(1, -n * math.log(2.0))) for n in range(1, n_max + 1)])


# ---------------------------------------------------------------------------
# operators


@dataclass(frozen=True)
class ShiftOperator:
    p: float = 1.0

    def __post_init__(self):
        if self.p < 1:
            raise DomainError("p must be >= 1")

    # log ||c e_i|| in the underlying space
    def basis_log_norm(self, i: int) -> float:
        return 0.0


@dataclass(frozen=True)
class UnilateralBackward(ShiftOperator):
    """``B_w(x_1, x_2, ...) = (w_2 x_2, w_3 x_3, ...)``, i.e. ``B e_n = w_n e_{n-1}``."""

    w: WeightModel = None

    def __init__(self, w: WeightModel, p: float = 1.0):
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "p", float(p))
        self.__post_init__()


@dataclass(frozen=True)
class UnilateralForward(ShiftOperator):
    """Adjoint-style forward shift ``F e_n = w_{n+1} e_{n+1}``."""

    w: WeightModel = None

    def __init__(self, w: WeightModel, p: float = 1.0):
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "p", float(p))
        self.__post_init__()


@dataclass(frozen=True)
class BilateralForward(ShiftOperator):
    """``T e_j = e_{j+1}`` on ``l^p(v, Z)``."""

    v: AnchorProfile = None

    def __init__(self, v: AnchorProfile, p: float = 1.0):
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "p", float(p))
        self.__post_init__()

    def basis_log_norm(self, i):
        return self.v.log_v(i) / self.p


@dataclass(frozen=True)
class BilateralBackward(ShiftOperator):
    """``B e_j = e_{j-1}``, the inverse of :class:`BilateralForward`."""

    v: AnchorProfile = None

    def __init__(self, v: AnchorProfile, p: float = 1.0):
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "p", float(p))
        self.__post_init__()

    def basis_log_norm(self, i):
        return self.v.log_v(i) / self.p


@dataclass(frozen=True)
class Identity(ShiftOperator):
    """Identity on ``l^p`` (weighted by ``v`` when given)."""

    v: Optional[AnchorProfile] = None

    def __init__(self, p: float = 1.0, v: Optional[AnchorProfile] = None):
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "p", float(p))
        self.__post_init__()

    def basis_log_norm(self, i):
        return 0.0 if self.v is None else self.v.log_v(i) / self.p


@dataclass(frozen=True)
class DirectSumWithIdentity(ShiftOperator):
    """``T (+) I`` on ``X (+) X`` with the p-sum norm."""

    inner: ShiftOperator = None

    def __init__(self, inner: ShiftOperator):
        object.__setattr__(self, "inner", inner)
        object.__setattr__(self, "p", inner.p)

    @property
    def identity(self) -> Identity:
        return Identity(self.inner.p, getattr(self.inner, "v", None))


def _bilateral_inverse(op):
    if isinstance(op, BilateralForward):
        return BilateralBackward(op.v, op.p)
    if isinstance(op, BilateralBackward):
        return BilateralForward(op.v, op.p)
    raise CapabilityError(f"{type(op).__name__} is not invertible here")


def inverse(op: ShiftOperator) -> ShiftOperator:
    return _bilateral_inverse(op)


def apply(op: ShiftOperator, x):
    """One application of ``op`` to a finitely supported vector."""
    if isinstance(op, DirectSumWithIdentity):
        if not isinstance(x, PairVec):
            raise DomainError("direct-sum operators act on PairVec")
        return PairVec(apply(op.inner, x.first), x.second)
    if isinstance(x, PairVec):
        raise DomainError("PairVec needs a DirectSumWithIdentity operator")
    if isinstance(op, Identity):
        return x
    if isinstance(op, UnilateralBackward):
        return SparseVec([(i - 1, c * LogReal(1, op.w.log_weight(i)))
                          for i, c in x if i >= 2])
    if isinstance(op, UnilateralForward):
        return SparseVec([(i + 1, c * LogReal(1, op.w.log_weight(i + 1))) for i, c in x])
    if isinstance(op, BilateralForward):
        return SparseVec([(i + 1, c) for i, c in x])
    if isinstance(op, BilateralBackward):
        return SparseVec([(i - 1, c) for i, c in x])
    raise CapabilityError(f"unsupported operator {type(op).__name__}")


def vector_norm(op: ShiftOperator, x) -> LogReal:
    """``||x||`` in the space ``op`` acts on."""
    return orbit_norm(op, x, 0)


# ---------------------------------------------------------------------------
# per-entry orbit norms


def _entry_log_norm(op, i: int, lc: float, j: int) -> float:
    """``log ||op^j (c e_i)||`` with ``lc = log|c|``; ``-inf`` when the orbit died."""
    if isinstance(op, Identity):
        return lc + op.basis_log_norm(i)
    if isinstance(op, UnilateralBackward):
        if i < 1:
            raise DomainError("unilateral indices start at 1")
        if j >= i:
            return NEG_INF
        return lc + op.w.cum_log(i) - op.w.cum_log(i - j)
    if isinstance(op, UnilateralForward):
        if i < 1:
            raise DomainError("unilateral indices start at 1")
        return lc + op.w.cum_log(i + j) - op.w.cum_log(i)
    if isinstance(op, BilateralForward):
        return lc + op.v.log_v(i + j) / op.p
    if isinstance(op, BilateralBackward):
        return lc + op.v.log_v(i - j) / op.p
    raise CapabilityError(f"unsupported operator {type(op).__name__}")


def _entries_log_norms(op, idx, lcs, j):
    """Vectorised over entries at a fixed step ``j``."""
    small = all(abs(i) < _I64 for i in idx) and j < _I64
    if small and isinstance(op, (UnilateralBackward, UnilateralForward)):
        ia = np.asarray(idx, dtype=np.int64)
        la = np.asarray(lcs, dtype=float)
        if (ia < 1).any():
            raise DomainError("unilateral indices start at 1")
        w = op.w
        if isinstance(op, UnilateralBackward):
            live = ia > j
            out = np.full(ia.shape, NEG_INF)
            out[live] = la[live] + w.cum_log_array(ia[live]) - w.cum_log_array(ia[live] - j)
            return out
        return la + w.cum_log_array(ia + j) - w.cum_log_array(ia)
    return np.array([_entry_log_norm(op, i, lc, j) for i, lc in zip(idx, lcs)], dtype=float)


def _entry_log_norms_range(op, i: int, lc: float, j_lo: int, j_hi: int) -> np.ndarray:
    """``log ||op^j (c e_i)||`` for ``j = j_lo..j_hi``."""
    n = j_hi - j_lo + 1
    if isinstance(op, Identity):
        return np.full(n, lc + op.basis_log_norm(i))
    if isinstance(op, UnilateralBackward):
        js = np.arange(j_lo, j_hi + 1, dtype=np.int64)
        out = np.full(n, NEG_INF)
        live = js < i
        if live.any():
            out[live] = lc + op.w.cum_log(i) - op.w.cum_log_array(i - js[live])
        return out
    if isinstance(op, UnilateralForward):
        js = np.arange(j_lo, j_hi + 1, dtype=np.int64)
        return lc + op.w.cum_log_array(i + js) - op.w.cum_log(i)
    if isinstance(op, BilateralForward):
        return lc + op.v.log_v_range(i + j_lo, i + j_hi) / op.p
    if isinstance(op, BilateralBackward):
        return lc + op.v.log_v_range(i - j_hi, i - j_lo)[::-1] / op.p
    raise CapabilityError(f"unsupported operator {type(op).__name__}")


def _parts_of(op, x):
    """Flatten ``(op, x)`` into ``(entry_operator, index, log|c|)`` triples."""
    if isinstance(op, DirectSumWithIdentity):
        if not isinstance(x, PairVec):
            raise DomainError("direct-sum operators act on PairVec")
        ident = op.identity
        return (_parts_of(op.inner, x.first)
                + [(ident, i, c.logmag) for i, c in x.second])
    if isinstance(x, PairVec):
        raise DomainError("PairVec needs a DirectSumWithIdentity operator")
    return [(op, i, c.logmag) for i, c in x]


def _combine(logs: np.ndarray, p: float) -> LogReal:
    if p == 1.0:
        return log_sum_array(logs)
    s = log_sum_array(p * logs)
    return LogReal(s.sign, s.logmag / p) if s.sign else ZERO


def orbit_norm(op: ShiftOperator, x, j: int) -> LogReal:
    """``||T^j x||`` without iterating; ``j = 0`` gives ``||x||``."""
    if j < 0:
        raise DomainError("j must be >= 0")
    parts = _parts_of(op, x)
    if not parts:
        return ZERO
    groups: dict = {}
    for eop, i, lc in parts:
        groups.setdefault(id(eop), (eop, [], []))
        groups[id(eop)][1].append(i)
        groups[id(eop)][2].append(lc)
    logs = np.concatenate([_entries_log_norms(eop, idx, lcs, j)
                           for eop, idx, lcs in groups.values()])
    return _combine(logs, op.p)


# ---------------------------------------------------------------------------
# closed-form segments


def log_geometric_sum(first: float, rise: float, run: int, count: int) -> float:
    """``log sum_{l=0}^{count-1} exp(first + l * rise/run)``.

    The per-step log ratio ``rise/run`` is never formed directly: with ``run``
    in the hundreds of thousands of digits it underflows, yet ``count * rise /
    run`` can be of order one.  Both expm1 factors are evaluated from
    logarithms instead.
    """
    if count <= 0:
        return NEG_INF
    if rise == 0.0 or count == 1:
        return first + log_index(count)
    sgn = 1 if rise > 0 else -1
    lrise = math.log(abs(rise))
    lrun = log_index(run)
    if count == run:
        lcs = lrise
    else:
        r = exact_ratio(count, run)
        lcs = lrise + (math.log(r) if 0.0 < r < math.inf else log_index(count) - lrun)
    return first + log_abs_expm1(lcs, sgn) - log_abs_expm1(lrise - lrun, sgn)


def _log_add_float(a: float, b: float) -> float:
    if a < b:
        a, b = b, a
    if b == NEG_INF:
        return a
    return a + math.log1p(math.exp(b - a))


@dataclass(frozen=True)
class Segment:
    """Steps ``j_start..j_end`` on which ``log||T^j x|| = log_base + rise (j - base)/run``."""

    j_start: int
    j_end: int
    base: int
    log_base: float
    rise: float
    run: int
    # set when j_start == base + 1 and j_end == base + run; spares big-int arithmetic
    aligned: bool = field(default=False, compare=False, repr=False)

    @property
    def count(self) -> int:
        if self.aligned:
            return self.run
        return self.j_end - self.j_start + 1

    @property
    def log_q(self) -> float:
        """Per-step log ratio (may underflow to 0.0 for astronomically long runs)."""
        return self.rise * exact_ratio(1, self.run)

    def log_at(self, j: int) -> float:
        d = j - self.base
        if d == 0:
            return self.log_base
        if d == self.run:
            return self.log_base + self.rise
        return self.log_base + self.rise * exact_ratio(d, self.run)

    def log_sum(self, lo: int = None, hi: int = None) -> float:
        """``log sum_j ||T^j x||`` over the segment clipped to ``[lo, hi]``."""
        if self.aligned and lo is None and hi is None:
            first = self.log_base + self.rise * exact_ratio(1, self.run)
            return log_geometric_sum(first, self.rise, self.run, self.run)
        js = self.j_start if lo is None else max(self.j_start, lo)
        je = self.j_end if hi is None else min(self.j_end, hi)
        if js > je:
            return NEG_INF
        return log_geometric_sum(self.log_at(js), self.rise, self.run, je - js + 1)


class EntrySeries:
    """Orbit norms of one entry ``c e_i`` of ``x`` under ``op``."""

    def __init__(self, op, i: int, lc: float, horizon: int):
        self.op, self.i, self.lc, self.horizon = op, i, lc, horizon
        self.zero_after = None
        if isinstance(op, UnilateralBackward):
            if i < 1:
                raise DomainError("unilateral indices start at 1")
            if horizon >= i:
                self.zero_after = i
        elif isinstance(op, BilateralForward):
            op.v.locate(i + horizon)  # raises beyond the anchors
        elif isinstance(op, BilateralBackward):
            op.v.locate(i - horizon)
        elif isinstance(op, UnilateralForward) and i < 1:
            raise DomainError("unilateral indices start at 1")

    @property
    def last_live(self) -> int:
        """Last step with a nonzero norm (within the horizon)."""
        return self.horizon if self.zero_after is None else self.zero_after - 1

    def log_norm(self, j: int) -> float:
        return _entry_log_norm(self.op, self.i, self.lc, j)

    def log_norms(self, j_lo: int, j_hi: int) -> np.ndarray:
        return _entry_log_norms_range(self.op, self.i, self.lc, j_lo, j_hi)

    def segments(self) -> Iterator[Segment]:
        """Affine pieces covering ``1..last_live`` in order (lazily generated)."""
        op, i, lc, top = self.op, self.i, self.lc, self.last_live
        if top < 1:
            return
        if isinstance(op, Identity):
            yield Segment(1, top, 1, lc + op.basis_log_norm(i), 0.0, 1)
        elif isinstance(op, UnilateralBackward):
            yield from self._unilateral_backward(top)
        elif isinstance(op, UnilateralForward):
            yield from self._unilateral_forward(top)
        elif isinstance(op, BilateralForward):
            yield from self._bilateral(top, +1)
        elif isinstance(op, BilateralBackward):
            yield from self._bilateral(top, -1)
        else:
            raise CapabilityError(f"unsupported operator {type(op).__name__}")

    def _unilateral_backward(self, top):
        w, n, lc = self.op.w, self.i, self.lc
        # L(n - j) for j in 1..top, i.e. arguments n-top..n-1, walked downwards
        ks = w.kinks(n - top, n - 1)
        Ln = w.cum_log(n)
        vals = {k: w.cum_log(k) for k in (ks if len(ks) < 4096 else ())}
        get = (lambda k: vals[k]) if vals else w.cum_log
        j_prev = 0
        if len(ks) == 1:
            yield Segment(1, 1, 1, lc + Ln - get(ks[0]), 0.0, 1)
            return
        for idx in range(len(ks) - 1, 0, -1):
            kb, ka = ks[idx], ks[idx - 1]
            la, lb = get(ka), get(kb)
            seg = Segment(j_prev + 1, n - ka, n - ka, lc + Ln - la, lb - la, kb - ka)
            j_prev = seg.j_end
            yield seg

    def _unilateral_forward(self, top):
        w, n, lc = self.op.w, self.i, self.lc
        ks = w.kinks(n + 1, n + top)
        Ln = w.cum_log(n)
        if len(ks) == 1:
            yield Segment(1, 1, 1, lc + w.cum_log(ks[0]) - Ln, 0.0, 1)
            return
        j_prev = 0
        lb = w.cum_log(ks[0])
        for ka, kb in zip(ks, ks[1:]):
            la, lb = lb, w.cum_log(kb)
            seg = Segment(max(j_prev + 1, 1), kb - n, ka - n, lc + la - Ln, lb - la, kb - ka)
            j_prev = seg.j_end
            yield seg

    def _bilateral(self, top, direction):
        v, i, lc, p = self.op.v, self.i, self.lc, self.op.p
        if direction > 0:
            p0 = v.locate(i + 1)
            p1 = v.locate(i + top) + 1
            anchors = v.iter_anchors(p0, p1)
        else:
            p0 = v.locate(i - 1) + 1
            p1 = v.locate(i - top)
            anchors = v.iter_anchors(p0, p1)
        j_prev = 0
        prev = None
        for _, a, la in anchors:
            # step at which the orbit reaches anchor a (no copy of huge ints when i == 0)
            rel = a if i == 0 else a - i
            if direction < 0:
                rel = -rel
            if prev is not None:
                prel, pla = prev
                j_end = rel if rel < top else top
                if j_end > j_prev:
                    run = rel - prel
                    # j_prev is prel itself whenever the previous segment ended on its anchor
                    aligned = j_prev is prel and j_end is rel
                    yield Segment(j_prev + 1, j_end, prel, lc + pla / p, (la - pla) / p, run,
                                  aligned)
                    j_prev = j_end
                if j_prev >= top:
                    return
            prev = (rel, la)


class OrbitNormSeries:
    """``j -> ||T^j x||`` for ``1 <= j <= horizon`` as a sum of entry series.

    With ``p = 1`` (or a single entry) the norm is the sum of piecewise
    log-affine entry norms and :meth:`segment_sums` evaluates Cesàro sums in
    closed form.  Otherwise the series is *sampled*: values come from
    vectorised per-step evaluation and only the loop backend applies.
    """

    def __init__(self, op, x, horizon: int):
        if horizon < 1:
            raise DomainError("horizon must be >= 1")
        self.op, self.x, self.horizon = op, x, int(horizon)
        self.p = op.p
        self.entries = [EntrySeries(eop, i, lc, self.horizon)
                        for eop, i, lc in _parts_of(op, x)]
        self.exact = self.p == 1.0 or len(self.entries) <= 1

    @property
    def tail(self) -> str:
        """``'zero-after'`` when every entry dies inside the horizon."""
        if self.entries and all(e.zero_after is not None for e in self.entries):
            return "zero-after"
        return "continues" if self.entries else "zero-after"

    @property
    def zero_after(self) -> Optional[int]:
        if self.tail != "zero-after":
            return None
        return max((e.zero_after for e in self.entries), default=1)

    @property
    def mode(self) -> str:
        return "segment" if self.exact else "sampled"

    @property
    def segments(self) -> list:
        """All segments, entry by entry (materialised; avoid at huge horizons)."""
        return [s for e in self.entries for s in e.segments()]

    def iter_segments(self) -> Iterator[Segment]:
        for e in self.entries:
            yield from e.segments()

    def log_norm(self, j: int) -> LogReal:
        self._check_n(j, allow_zero=True)
        return orbit_norm(self.op, self.x, j)

    def log_norms(self, j_lo: int, j_hi: int) -> np.ndarray:
        """``log ||T^j x||`` for consecutive ``j`` (``-inf`` for zero)."""
        if not self.entries:
            return np.full(j_hi - j_lo + 1, NEG_INF)
        rows = [e.log_norms(j_lo, j_hi) for e in self.entries]
        if len(rows) == 1:
            return rows[0]
        stack = np.vstack(rows) * self.p
        with np.errstate(divide="ignore"):
            top = stack.max(axis=0)
            safe = np.where(np.isfinite(top), top, 0.0)
            tot = safe + np.log(np.exp(stack - safe).sum(axis=0))
        return np.where(np.isfinite(top), tot, NEG_INF) / self.p

    def _check_n(self, N, allow_zero=False):
        if N < (0 if allow_zero else 1):
            raise DomainError("N must be >= 1")
        if N > self.horizon:
            raise DomainError(f"N={N} beyond the series horizon {self.horizon}")

    def loop_sum(self, N: int, chunk: int = 1 << 20) -> LogReal:
        """``sum_{j=1}^N ||T^j x||`` by direct evaluation."""
        self._check_n(N)
        top = N
        if self.zero_after is not None:
            top = min(N, self.zero_after - 1)
        parts = []
        j = 1
        while j <= top:
            hi = min(top, j + chunk - 1)
            parts.append(log_sum_array(self.log_norms(j, hi)))
            j = hi + 1
        return log_sum(parts)

    def segment_sums(self, Ns) -> list:
        """``sum_{j=1}^N ||T^j x||`` for each ``N`` in ascending ``Ns``, one streaming pass."""
        if not self.exact:
            raise CapabilityError("closed-form sums need p = 1 or a single-entry vector")
        Ns = [int(N) for N in Ns]
        for N in Ns:
            self._check_n(N)
        if any(b <= a for a, b in zip(Ns, Ns[1:])):
            raise DomainError("N values must be strictly increasing")
        per_entry = [self._entry_prefix_sums(e, Ns) for e in self.entries]
        return [log_sum(col) for col in zip(*per_entry)] if per_entry else [ZERO] * len(Ns)

    @staticmethod
    def _entry_prefix_sums(entry, Ns):
        out = []
        done = NEG_INF  # log of the sum over fully consumed segments
        k = 0
        for seg in entry.segments():
            while k < len(Ns) and Ns[k] < seg.j_end:
                out.append(_log_add_float(done, seg.log_sum(None, Ns[k])))
                k += 1
            if k == len(Ns):
                break
            done = _log_add_float(done, seg.log_sum())
        out.extend([done] * (len(Ns) - k))
        return [LogReal(1, v) for v in out]

    def segment_sum(self, N: int) -> LogReal:
        return self.segment_sums([N])[0]


def orbit_norm_series(op: ShiftOperator, x, horizon: int) -> OrbitNormSeries:
    return OrbitNormSeries(op, x, horizon)


# ---------------------------------------------------------------------------
# operator norms

_EXPLICIT_BUDGET = 10 ** 7


def operator_norm(op: ShiftOperator, n: int) -> LogReal:
    """``||T^n||``: the largest product of ``n`` consecutive weights."""
    if n < 0:
        raise DomainError("n must be >= 0")
    if n == 0 or isinstance(op, Identity):
        return LogReal(1, 0.0)
    if isinstance(op, DirectSumWithIdentity):
        inner = operator_norm(op.inner, n)
        return inner if inner.logmag > 0 else LogReal(1, 0.0)
    if not isinstance(op, (UnilateralBackward, UnilateralForward)):
        raise CapabilityError(f"operator norm of {type(op).__name__} is not available")
    w = op.w
    # windows w_{k+1}..w_{k+n}, k >= 1 (w_1 never acts)
    if isinstance(w, Harmonic):
        return LogReal(1, math.log1p(n))
    if isinstance(w, BlockHalvesTwos):
        return LogReal(1, n * math.log(2.0))
    if isinstance(w, Constant):
        return LogReal(1, n * math.log(w.c))
    if isinstance(w, ExplicitList):
        m = len(w.values)
        if m > _EXPLICIT_BUDGET:
            raise CapabilityError("explicit weight list too long for a window scan")
        ks = np.arange(1, m + 1, dtype=np.int64)
        best = float(np.max(w.cum_log_array(ks + n) - w.cum_log_array(ks)))
        return LogReal(1, max(best, n * math.log(w.tail)))
    raise CapabilityError(f"operator norm for weights {w!r} is not available")
