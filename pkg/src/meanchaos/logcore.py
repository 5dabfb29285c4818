"""Signed log-magnitude scalars.

Weight products over billions of steps and Cesàro sums at horizons with
hundreds of thousands of digits do not fit in a double.  Everything in the
package that can get large or small is therefore carried as a sign plus the
natural log of the magnitude.  Indices stay plain Python ``int`` (exact, any
size); :func:`log_index` turns them into log-domain reals.
"""
from __future__ import annotations

import decimal
import math
from dataclasses import dataclass
from functools import lru_cache, total_ordering
from typing import Iterable

import numpy as np

NEG_INF = float("-inf")

# terms per chunk when streaming through log_sum
_CHUNK = 1 << 16


@total_ordering
@dataclass(frozen=True)
class LogReal:
    """A real number stored as ``sign * exp(logmag)``.

    ``sign == 0`` is exact zero; its ``logmag`` is normalised to ``-inf`` so
    that equality is structural.
    """

    sign: int
    logmag: float

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or 1, got {self.sign!r}")
        object.__setattr__(self, "logmag", float(self.logmag))
        if self.sign == 0 or self.logmag == NEG_INF:
            object.__setattr__(self, "sign", 0)
            object.__setattr__(self, "logmag", NEG_INF)
        elif math.isnan(self.logmag) or self.logmag == math.inf:
            raise ValueError(f"logmag must be finite, got {self.logmag!r}")

    @classmethod
    def from_real(cls, x: float) -> "LogReal":
        if x == 0:
            return ZERO
        if isinstance(x, int) and not isinstance(x, bool):
            return cls(1 if x > 0 else -1, log_index(abs(x)))
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @classmethod
    def from_log(cls, logmag: float, sign: int = 1) -> "LogReal":
        return cls(sign, logmag)

    def to_real(self) -> float:
        """Native float value; ``inf`` on overflow, ``0.0`` on underflow."""
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * math.exp(self.logmag)
        except OverflowError:
            return self.sign * math.inf

    def __float__(self):
        return self.to_real()

    @property
    def log10(self) -> float:
        return self.logmag / math.log(10) if self.sign else NEG_INF

    def is_zero(self) -> bool:
        return self.sign == 0

    def __neg__(self):
        return LogReal(-self.sign, self.logmag)

    def __abs__(self):
        return LogReal(abs(self.sign), self.logmag)

    def __mul__(self, other):
        return log_mul(self, _coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other.sign == 0:
            raise ZeroDivisionError("division by LogReal zero")
        return LogReal(self.sign * other.sign, self.logmag - other.logmag)

    def __add__(self, other):
        return log_add(self, _coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return log_add(self, -_coerce(other))

    def __lt__(self, other):
        other = _coerce(other)
        if self.sign != other.sign:
            return self.sign < other.sign
        if self.sign == 0:
            return False
        if self.sign > 0:
            return self.logmag < other.logmag
        return self.logmag > other.logmag

    def __repr__(self):
        if self.sign == 0:
            return "LogReal(0)"
        s = "+" if self.sign > 0 else "-"
        return f"LogReal({s}exp({self.logmag!r}))"


ZERO = LogReal(0, NEG_INF)
ONE = LogReal(1, 0.0)


def _coerce(x) -> LogReal:
    return x if isinstance(x, LogReal) else LogReal.from_real(x)


def log_index(n: int) -> float:
    """Natural log of a positive integer of any size (double precision)."""
    if n <= 0:
        raise ValueError(f"log_index needs a positive integer, got {n}")
    return math.log(n)


def log_mul(a: LogReal, b: LogReal) -> LogReal:
    if a.sign == 0 or b.sign == 0:
        return ZERO
    return LogReal(a.sign * b.sign, a.logmag + b.logmag)


def log_add(a: LogReal, b: LogReal) -> LogReal:
    """``a + b`` by the max-plus-log1p form; exact cancellation gives zero."""
    if a.sign == 0:
        return b
    if b.sign == 0:
        return a
    # canonical order makes the operation exactly commutative
    hi, lo = (a, b) if (a.logmag, a.sign) >= (b.logmag, b.sign) else (b, a)
    gap = lo.logmag - hi.logmag
    if hi.sign == lo.sign:
        return LogReal(hi.sign, hi.logmag + math.log1p(math.exp(gap)))
    if gap == 0.0:
        return ZERO
    # 1 - e^gap through expm1 keeps nearly cancelling pairs accurate
    return LogReal(hi.sign, hi.logmag + math.log(-math.expm1(gap)))


def log_sum_array(logmags, signs=None) -> LogReal:
    """Sum of ``signs * exp(logmags)`` for numpy input, rescaled by the max."""
    lm = np.asarray(logmags, dtype=float)
    if lm.size == 0:
        return ZERO
    sg = np.ones_like(lm) if signs is None else np.asarray(signs, dtype=float)
    live = (sg != 0) & np.isfinite(lm)
    if not live.any():
        return ZERO
    lm, sg = lm[live], sg[live]
    top = lm.max()
    total = math.fsum(sg * np.exp(lm - top))
    if total == 0:
        return ZERO
    return LogReal(1 if total > 0 else -1, top + math.log(abs(total)))


def log_sum(terms: Iterable[LogReal]) -> LogReal:
    """Stable sum of a stream of :class:`LogReal` terms.

    Terms are buffered in chunks; each chunk is rescaled by its own maximum
    and summed with ``math.fsum``, and chunk results are combined the same
    way, so the result is order-independent to a few ulps.
    """
    partial = []
    buf_lm, buf_sg = [], []
    for t in terms:
        if t.sign == 0:
            continue
        buf_lm.append(t.logmag)
        buf_sg.append(t.sign)
        if len(buf_lm) >= _CHUNK:
            partial.append(log_sum_array(buf_lm, buf_sg))
            buf_lm, buf_sg = [], []
    if buf_lm:
        partial.append(log_sum_array(buf_lm, buf_sg))
    if not partial:
        return ZERO
    if len(partial) == 1:
        return partial[0]
    return log_sum_array([p.logmag for p in partial], [p.sign for p in partial])


def log_abs_expm1(log_abs_x: float, sign: int) -> float:
    """``log|expm1(x)|`` for ``x = sign * exp(log_abs_x)``.

    Works when ``x`` itself would underflow a double (tiny per-step slopes
    of astronomically long segments).
    """
    if sign == 0:
        return NEG_INF
    if log_abs_x < -30.0:
        # expm1(x) = x (1 + x/2 + ...); the correction is below 1e-13
        x = sign * math.exp(log_abs_x)
        return log_abs_x + math.log1p(x / 2.0)
    if log_abs_x > 709.0:
        return math.inf if sign > 0 else 0.0
    x = sign * math.exp(log_abs_x)
    if x > 0.5:
        return x + math.log1p(-math.exp(-x))
    if x < -0.5:
        return math.log1p(-math.exp(x))
    return math.log(abs(math.expm1(x)))


def exact_ratio(a: int, b: int) -> float:
    """Correctly rounded ``a / b`` for integers; ``inf`` when it overflows."""
    try:
        return a / b
    except OverflowError:
        return math.inf if (a > 0) == (b > 0) else -math.inf


def index_brief(n: int, width: int = 40) -> str:
    """Short form of a possibly huge index for messages: ``1234...5678 (1178 digits)``."""
    if n.bit_length() <= 3 * width:
        return str(n)
    text = index_str(n)
    return f"{text[:8]}...{text[-8:]} ({len(text.lstrip('-'))} digits)"


_SMALL_BITS = 8000  # below ~2400 digits the builtin conversions are fast and allowed


@lru_cache(maxsize=64)
def index_str(n: int) -> str:
    """Decimal string of an index of any size.

    Huge values are split recursively by powers of two and recombined in
    :mod:`decimal`, whose multiplication is subquadratic; this also avoids
    the interpreter's limit on int/str conversion length.
    """
    if abs(n).bit_length() <= _SMALL_BITS:
        return str(n)
    D = decimal.Decimal
    with decimal.localcontext() as ctx:
        ctx.prec = decimal.MAX_PREC
        ctx.Emax = decimal.MAX_EMAX
        ctx.traps[decimal.Inexact] = False
        pow2 = {}

        def split(m, w):
            if w <= 2000:
                return D(m)
            h = w >> 1
            hi = m >> h
            if h not in pow2:
                pow2[h] = D(2) ** h
            return split(m - (hi << h), h) + split(hi, w - h) * pow2[h]

        a = abs(n)
        body = format(split(a, a.bit_length()), "f")
    return "-" + body if n < 0 else body


def index_int(text: str) -> int:
    """Inverse of :func:`index_str`."""
    text = text.strip()
    if len(text) <= 2000:
        return int(text)
    neg = text[0] == "-"
    digits = text[1:] if text[0] in "+-" else text
    if not digits.isdigit():
        raise ValueError(f"not a decimal integer: {text[:20]}...")
    pow10 = {}

    def join(a, b):
        if b - a <= 2000:
            return int(digits[a:b])
        mid = (a + b + 1) >> 1
        k = b - mid
        if k not in pow10:
            pow10[k] = 5 ** k << k
        return join(mid, b) + join(a, mid) * pow10[k]

    v = join(0, len(digits))
    return -v if neg else v
