"""Translation-type semigroups on weighted L^p spaces, tested on step functions.

Families:

``Translation(v, p, domain)``
    ``T_t f(x) = f(x + t)`` on ``L^p_v`` over ``[0, inf)`` or the real line;
``MultiplicativeTranslation(gamma, p)``
    ``T_t f(x) = ((x + t)/x)^gamma f(x + t)`` on ``L^p(1, inf)``.

Norms of translated step functions are closed-form piece by piece whenever
the weight allows it; otherwise (and for the outer time integrals) an
adaptive Simpson rule runs on panels split at every kink.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .checks import CheckReport
from .errors import DomainError, QuadratureError
from .weights import AnchorProfile

# ---------------------------------------------------------------------------
# quadrature


def adaptive_simpson(fn: Callable[[float], float], a: float, b: float, tol: float = 1e-10,
                     max_depth: int = 48) -> tuple:
    """``(integral, error estimate)`` of a smooth ``fn`` over ``[a, b]``.

    Classic recursive Simpson with Richardson correction; the error target
    is absolute and halves on each split.  Raises :class:`QuadratureError`
    when the depth limit is hit before the target is met.
    """
    if b <= a:
        return 0.0, 0.0
    fa, fm, fb = fn(a), fn(0.5 * (a + b)), fn(b)
    whole = (b - a) * (fa + 4 * fm + fb) / 6
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    total, err, worst = 0.0, 0.0, 0.0
    while stack:
        lo, hi, flo, fmid, fhi, s, eps, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = fn(lm), fn(rm)
        left = (mid - lo) * (flo + 4 * flm + fmid) / 6
        right = (hi - mid) * (fmid + 4 * frm + fhi) / 6
        delta = left + right - s
        if abs(delta) <= 15 * eps or depth >= max_depth:
            if depth >= max_depth and abs(delta) > 15 * eps:
                worst = max(worst, abs(delta) / 15)
            total += left + right + delta / 15
            err += abs(delta) / 15
            continue
        stack.append((lo, mid, flo, flm, fmid, left, eps / 2, depth + 1))
        stack.append((mid, hi, fmid, frm, fhi, right, eps / 2, depth + 1))
    if worst > 0 and err > tol:
        raise QuadratureError(f"adaptive Simpson did not reach {tol:g}", achieved=err)
    return total, err


def integrate_piecewise(fn, a: float, b: float, kinks: Sequence[float] = (),
                        tol: float = 1e-10) -> tuple:
    """Adaptive Simpson on the panels of ``[a, b]`` cut at ``kinks``."""
    pts = sorted({a, b, *(k for k in kinks if a < k < b)})
    n = max(1, len(pts) - 1)
    val = err = 0.0
    for lo, hi in zip(pts, pts[1:]):
        v, e = adaptive_simpson(fn, lo, hi, tol * (hi - lo) / (b - a) if b > a else tol / n)
        val += v
        err += e
    return val, err


# ---------------------------------------------------------------------------
# test vectors and weights


@dataclass(frozen=True)
class StepFunction:
    """``values[i]`` on ``[breakpoints[i], breakpoints[i+1])``, zero elsewhere."""

    breakpoints: tuple
    values: tuple

    def __init__(self, breakpoints: Sequence[float], values: Sequence[float]):
        bp = tuple(float(b) for b in breakpoints)
        vals = tuple(float(v) for v in values)
        if len(bp) != len(vals) + 1 or any(b2 <= b1 for b1, b2 in zip(bp, bp[1:])):
            raise DomainError("need increasing breakpoints and one value per interval")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)

    @classmethod
    def indicator(cls, a: float, b: float, value: float = 1.0) -> "StepFunction":
        return cls([a, b], [value])

    @classmethod
    def zero(cls) -> "StepFunction":
        return cls([0.0, 1.0], [0.0])

    def pieces(self):
        return [(a, b, v) for a, b, v in zip(self.breakpoints, self.breakpoints[1:],
                                             self.values) if v != 0.0]

    def is_zero(self) -> bool:
        return not self.pieces()

    def __call__(self, x: float) -> float:
        for a, b, v in zip(self.breakpoints, self.breakpoints[1:], self.values):
            if a <= x < b:
                return v
        return 0.0

    def scale(self, c: float) -> "StepFunction":
        return StepFunction(self.breakpoints, [c * v for v in self.values])

    def translate(self, t: float) -> "StepFunction":
        """``x -> f(x + t)``."""
        return StepFunction([b - t for b in self.breakpoints], self.values)

    def restrict(self, lo: float) -> "StepFunction":
        """Zero on ``(-inf, lo)``."""
        pcs = [(max(a, lo), b, v) for a, b, v in self.pieces() if b > lo]
        if not pcs:
            return StepFunction.zero()
        return _from_pieces(pcs)


def _from_pieces(pcs):
    bps, vals = [pcs[0][0]], []
    for a, b, v in pcs:
        if a > bps[-1]:
            vals.append(0.0)
            bps.append(a)
        vals.append(v)
        bps.append(b)
    return StepFunction(bps, vals)


_STEP_ITEM = re.compile(r"^(?:[^=@]+=)?\s*([-+0-9.eE]+)\s*@\s*\[\s*([-+0-9.eE]+)\s*,\s*([-+0-9.eE]+)\s*\]$")


def parse_step(text: str) -> StepFunction:
    """``"step:1=1@[1,2]"`` or ``"step:2@[0,1];0.5@[3,4]"``.

    Each item is ``[label=]value@[a,b]``; the optional label only names the piece.
    """
    body = text.split(":", 1)[1] if text.startswith("step:") else text
    pcs = []
    for item in filter(None, (s.strip() for s in body.split(";"))):
        m = _STEP_ITEM.match(item)
        if not m:
            raise DomainError(f"bad step-function item {item!r}")
        v, a, b = (float(g) for g in m.groups())
        pcs.append((a, b, v))
    if not pcs:
        raise DomainError("empty step function")
    pcs.sort()
    if any(p[1] > q[0] for p, q in zip(pcs, pcs[1:])):
        raise DomainError("step-function pieces overlap")
    return _from_pieces(pcs)


class WeightFunction:
    """Positive weight ``v`` on the line; subclasses give ``int_a^b v``."""

    def log_v(self, x: float) -> float:
        raise NotImplementedError

    def integral(self, a: float, b: float) -> float:
        raise NotImplementedError

    def kinks(self, lo: float, hi: float) -> list:
        return []

    def __call__(self, x):
        return math.exp(self.log_v(x))


class ConstantWeight(WeightFunction):
    def __init__(self, c: float = 1.0):
        if c <= 0:
            raise DomainError("weights must be positive")
        self.c = float(c)

    def log_v(self, x):
        return math.log(self.c)

    def integral(self, a, b):
        return self.c * max(0.0, b - a)

    def __repr__(self):
        return f"ConstantWeight({self.c!r})"


class PiecewiseExponential(WeightFunction):
    """Log-linear between ``(x, log v)`` anchors, constant beyond the ends."""

    def __init__(self, anchors: Sequence[tuple]):
        xs = [float(a) for a, _ in anchors]
        if len(xs) < 1 or any(b <= a for a, b in zip(xs, xs[1:])):
            raise DomainError("anchor abscissae must be strictly increasing")
        self.xs = xs
        self.lv = [float(v) for _, v in anchors]

    def log_v(self, x):
        xs, lv = self.xs, self.lv
        if x <= xs[0]:
            return lv[0]
        if x >= xs[-1]:
            return lv[-1]
        i = int(np.searchsorted(xs, x, side="right")) - 1
        return lv[i] + (lv[i + 1] - lv[i]) * (x - xs[i]) / (xs[i + 1] - xs[i])

    def kinks(self, lo, hi):
        return [x for x in self.xs if lo < x < hi]

    def integral(self, a, b):
        if b <= a:
            return 0.0
        pts = [a, *self.kinks(a, b), b]
        total = 0.0
        for lo, hi in zip(pts, pts[1:]):
            l0, l1 = self.log_v(lo), self.log_v(hi)
            d = l1 - l0
            if d == 0.0:
                total += math.exp(l0) * (hi - lo)
            else:
                total += math.exp(l0) * (hi - lo) * math.expm1(d) / d
        return total


class StepFromProfile(WeightFunction):
    """``v(x) = v_k`` for ``x`` in ``]k-1, k]`` from a bilateral anchor profile."""

    cell_budget = 10 ** 7

    def __init__(self, profile: AnchorProfile):
        self.profile = profile

    def log_v(self, x):
        return self.profile.log_v(math.ceil(x))

    def kinks(self, lo, hi):
        return [float(k) for k in range(math.ceil(lo), math.floor(hi) + 1) if lo < k < hi]

    def integral(self, a, b):
        if b <= a:
            return 0.0
        k0, k1 = math.ceil(a), math.ceil(b)
        if k1 - k0 > self.cell_budget:
            raise DomainError("integration range too long for a cell-by-cell sum")
        lv = np.exp(self.profile.log_v_range(k0, k1))
        # cell k covers ]k-1, k]; clip the first and last cells to [a, b]
        lens = np.ones(k1 - k0 + 1)
        lens[0] = k0 - a if k0 > a else 0.0
        lens[-1] = b - (k1 - 1) if k1 > k0 else b - a
        if k1 == k0:
            lens[0] = b - a
        return float(np.dot(lv, lens))

    def __repr__(self):
        return f"StepFromProfile({self.profile!r})"


def discretized_profile_weight(profile: AnchorProfile) -> StepFromProfile:
    """Step weight ``v(x) = v(k)`` on ``]k-1, k]``."""
    return StepFromProfile(profile)


def sampled_admissibility(weight: WeightFunction, taus: Sequence[float],
                          ts: Sequence[float] = (0.25, 0.5, 0.75, 1.0)) -> float:
    """``max v(tau) / v(tau + t)`` over the sampled grid (a sanity report, not a proof)."""
    return max(math.exp(weight.log_v(x) - weight.log_v(x + t)) for x in taus for t in ts)


# ---------------------------------------------------------------------------
# families


@dataclass(frozen=True)
class Translation:
    v: WeightFunction = None
    p: float = 1.0
    domain: str = "R+"  # or "R"

    def __post_init__(self):
        if self.p < 1:
            raise DomainError("p must be >= 1")
        if self.domain not in ("R+", "R"):
            raise DomainError("domain must be 'R+' or 'R'")
        if self.v is None:
            object.__setattr__(self, "v", ConstantWeight(1.0))

    @property
    def lower(self) -> float:
        return 0.0 if self.domain == "R+" else -math.inf

    def apply(self, f: StepFunction, t: float) -> StepFunction:
        """``T_t f`` as a step function on the domain."""
        g = f.translate(t)
        return g.restrict(self.lower) if self.domain == "R+" else g

    def norm_p(self, f: StepFunction, t: float) -> float:
        """``||T_t f||^p``."""
        return sum(abs(c) ** self.p * self.v.integral(max(a - t, self.lower), b - t)
                   for a, b, c in f.pieces())

    def t_kinks(self, f: StepFunction, lo: float, hi: float) -> list:
        ks = {a for a, _, _ in f.pieces()} | {b for _, b, _ in f.pieces()}
        out = set()
        if self.domain == "R+":
            out |= {x for x in ks if lo < x < hi}
        for x in ks:
            # shifted breakpoints crossing weight kinks
            for w in self.v.kinks(x - hi, x - lo):
                out.add(x - w)
        return sorted(t for t in out if lo < t < hi)

    def operator_norm_bound(self, t: float, samples: int = 256) -> float:
        """``||T_t||``: exactly 1 for constant weights, else a sampled sup of ``(v(x)/v(x+t))^(1/p)``."""
        if isinstance(self.v, ConstantWeight):
            return 1.0
        lo = 0.0 if self.domain == "R+" else -samples / 4
        xs = np.linspace(lo, lo + samples / 2, samples)
        return max(math.exp((self.v.log_v(x) - self.v.log_v(x + t)) / self.p) for x in xs)


@dataclass(frozen=True)
class MultiplicativeTranslation:
    """``T_t f(x) = ((x+t)/x)^gamma f(x+t)`` on ``L^p(1, inf)``."""

    gamma: float = 1.0
    p: float = 1.0
    tol: float = 1e-8

    def __post_init__(self):
        if self.p < 1:
            raise DomainError("p must be >= 1")

    def norm_p(self, f: StepFunction, t: float) -> float:
        q = self.gamma * self.p
        total = 0.0
        for a, b, c in f.pieces():
            x1, x2 = max(a - t, 1.0), b - t
            if x2 <= x1:
                continue
            if q == 0.0:
                seg = x2 - x1
            elif q == 1.0:
                seg = (x2 - x1) + t * math.log(x2 / x1)
            else:
                seg = adaptive_simpson(lambda x: (1.0 + t / x) ** q, x1, x2,
                                       self.tol * (x2 - x1))[0]
            total += abs(c) ** self.p * seg
        return total

    def t_kinks(self, f, lo, hi):
        ks = {a - 1.0 for a, _, _ in f.pieces()} | {b - 1.0 for _, b, _ in f.pieces()}
        return sorted(t for t in ks if lo < t < hi)

    def operator_norm_bound(self, t: float, samples: int = 0) -> float:
        """``||T_t|| = (1 + t)^gamma`` (the sup of the multiplier, approached at ``x = 1``)."""
        return (1.0 + t) ** self.gamma


def _check_f(f):
    if not isinstance(f, StepFunction):
        raise DomainError("test vectors must be StepFunction instances")


def semigroup_norm(family, f: StepFunction, t: float) -> float:
    """``||T_t f||``."""
    _check_f(f)
    if t < 0:
        raise DomainError("t must be >= 0")
    return family.norm_p(f, t) ** (1.0 / family.p)


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error: float

    def __float__(self):
        return self.value


def cesaro_integral(family, f: StepFunction, b: float, tau: float = 1e-8,
                    power: float = 1.0) -> IntegralResult:
    """``(1/b) int_0^b ||T_t f||^power dt`` with its error estimate."""
    _check_f(f)
    if b <= 0:
        raise DomainError("b must be > 0")
    if f.is_zero():
        return IntegralResult(0.0, 0.0)
    p = family.p
    if power == p:
        g = lambda t: family.norm_p(f, t)
    else:
        g = lambda t: family.norm_p(f, t) ** (power / p)
    # past every support edge the integrand may be identically zero
    kinks = family.t_kinks(f, 0.0, b)
    scale = max(1e-300, abs(g(0.0)))
    val, err = integrate_piecewise(g, 0.0, b, kinks, tau * scale * b)
    return IntegralResult(val / b, err / b)


def _normalized(family, f):
    n = semigroup_norm(family, f, 0.0)
    if n == 0:
        raise DomainError("cannot normalise the zero function")
    return f.scale(1.0 / n)


def acb_integral_check(eps: float, p: float, f: StepFunction, b_grid: Sequence[float],
                       tau: float = 1e-6) -> CheckReport:
    """``(1/b) int_0^b ||T_t f||^p dt <= 2 + 2/eps`` for ``gamma = (1-eps)/p`` and ``||f||_p = 1``."""
    if not 0 < eps < 1:
        raise DomainError("eps must lie in (0, 1)")
    fam = MultiplicativeTranslation((1.0 - eps) / p, p, tol=tau * 1e-2)
    g = _normalized(fam, f)
    bound = 2.0 + 2.0 / eps
    rep = CheckReport(f"Cesàro integral bound, eps={eps}, p={p}")
    for b in b_grid:
        res = cesaro_integral(fam, g, b, tau, power=p)
        rep.add(f"b={b:g}", res.value, bound, "<=", tol=res.error,
                anchor="(1/b) int_0^b ||T_t f||^p dt <= 2 + 2/eps",
                note=f"quadrature error {res.error:.2e}")
    return rep


def estimate_C_s(family, s: float, grid: int = 64) -> float:
    """``max_{0 <= t <= s} ||T_t||`` over an even grid (exact where the bound is monotone)."""
    return max(family.operator_norm_bound(t) for t in np.linspace(0.0, s, grid + 1))


def sandwich_check(family, f: StepFunction, s: float, b_grid: Sequence[float],
                   tau: float = 1e-8) -> CheckReport:
    """Both sides of the time-discretisation bound for ``N s <= b < (N+1) s``.

    ``(1/C_s) (1/(N+1)) sum_{j=1}^N ||T_s^j f||  <=  (1/b) int_0^b ||T_t f|| dt
    <=  C_s (1/N) sum_{j=0}^N ||T_s^j f||``.
    """
    if s <= 0:
        raise DomainError("s must be > 0")
    C = estimate_C_s(family, s)
    rep = CheckReport(f"discretisation sandwich, s={s:g}, C_s={C:.6g}")
    for b in b_grid:
        N = math.floor(b / s)
        if N < 1:
            rep.skip(f"b={b:g}", note="N = floor(b/s) = 0")
            continue
        norms = [semigroup_norm(family, f, j * s) for j in range(N + 1)]
        mid = cesaro_integral(family, f, b, tau)
        lower = sum(norms[1:]) / ((N + 1) * C)
        upper = C * sum(norms) / N
        rep.add(f"lower b={b:g}", lower, mid.value, "<=", tol=mid.error,
                anchor="(1/C_s)(1/(N+1)) sum_{j=1}^N ||T_s^j x|| <= (1/b) int_0^b ||T_t x|| dt",
                note=f"N={N}")
        rep.add(f"upper b={b:g}", mid.value, upper, "<=", tol=mid.error,
                anchor="(1/b) int_0^b ||T_t x|| dt <= C_s (1/N) sum_{j=0}^N ||T_s^j x||",
                note=f"N={N}")
    return rep
