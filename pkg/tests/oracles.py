"""Independent reference computations used to freeze expected values.

Nothing here imports the package: anchors are rebuilt from their recurrence,
sums are done either by brute force over numpy arrays or by mpmath geometric
closed forms.
"""
import math

import mpmath as mp
import numpy as np

mp.mp.dps = 40


def tbil_anchors(k_max, flat=False):
    """Positive-side anchors ``(index, v)`` from ``m_0 = -1`` through ``m_{k_max}``."""
    out = [(-1, mp.mpf(1)), (1, mp.mpf(1) if flat else mp.mpf(2) ** 0.25)]
    n = 4
    for k in range(1, k_max + 1):
        m = (16 * k ** 3 + 1) * n
        out.append((n, (2 * mp.mpf(k)) ** (-mp.mpf(1) / 3)))
        out.append((m, mp.mpf(1) if flat else (k + 2) ** (mp.mpf(1) / 4)))
        n = (16 * k ** 3 + 1) * m
    return out


def n_k(k):
    return tbil_anchors(k)[2 * k][0]


def m_k(k):
    return tbil_anchors(k)[2 * k + 1][0]


def tbil_mean_direct(N, k_max, flat=False):
    """``(1/N) sum_{j<=N} v_j`` by interpolating log v on every integer."""
    an = tbil_anchors(k_max, flat)
    idx = np.array([a for a, _ in an], dtype=float)
    lv = np.array([float(mp.log(v)) for _, v in an])
    tot = 0.0
    for s in range(1, N + 1, 10 ** 7):
        j = np.arange(s, min(N, s + 10 ** 7 - 1) + 1, dtype=float)
        tot += np.exp(np.interp(j, idx, lv)).sum()
    return tot / N


def tbil_mean_closed(N, k_max, flat=False):
    """Same mean from geometric sums between anchors, precision scaled to ``N``."""
    # q - 1 is about 1/(b - a), so the working precision must grow with the indices
    with mp.workdps(30 + len(str(N))):
        an = tbil_anchors(k_max, flat)
        tot = mp.mpf(0)
        for (a, va), (b, vb) in zip(an, an[1:]):
            lo, hi = max(a + 1, 1), min(b, N)
            if lo > hi:
                continue
            q = (vb / va) ** (mp.mpf(1) / (b - a))
            first = va * q ** (lo - a)
            c = hi - lo + 1
            tot += first * (q ** c - 1) / (q - 1) if q != 1 else first * c
        return float(tot / N)


def tbil_hill_mean(K, flat=False):
    """``A_{m_K}(e_0)`` streaming the anchors (works for K = 10^4)."""
    mp.mp.dps = 30
    try:
        def piece(a, la, b, lb):
            lo = max(a + 1, 1)
            c = b - lo + 1
            d = lb - la
            L = b - a
            first = la + d * mp.mpf(lo - a) / L
            if d == 0:
                return mp.exp(first) * c
            s = d / L
            return mp.exp(first) * mp.expm1(s * c) / mp.expm1(s)

        cur = (1, mp.mpf(0) if flat else mp.log(2) / 4)
        tot = piece(-1, mp.mpf(0), cur[0], cur[1])
        n = 4
        for k in range(1, K + 1):
            m = (16 * k ** 3 + 1) * n
            ln_ = -mp.log(2 * k) / 3
            lm = mp.mpf(0) if flat else mp.log(k + 2) / 4
            tot += piece(cur[0], cur[1], n, ln_)
            tot += piece(n, ln_, m, lm)
            cur = (m, lm)
            if k < K:
                n = (16 * k ** 3 + 1) * m
        return float(tot / m)
    finally:
        mp.mp.dps = 40


def harmonic_mean_ratio(n, N):
    """``A_N(e_n) / ||e_n||`` for the harmonic backward shift (w_k = k/(k-1))."""
    return sum(n / (n - j) for j in range(1, min(N, n - 1) + 1)) / N


def harmonic_H(n):
    return math.fsum(1.0 / i for i in range(1, n + 1))


def block_cum_log(j):
    """``log prod_{i<=j} w_i`` for blocks ``1/2`` on ``]l(l-1), l^2]``, ``2`` on ``]l^2, l(l+1)]``."""
    tot = 0
    l = 1
    i = 1
    while i <= j:
        while not (l * (l - 1) < i <= l * (l + 1)):
            l += 1
        tot += -1 if i <= l * l else 1
        i += 1
    return tot * math.log(2)


def multiplicative_norm(t, a=1.0, b=2.0):
    """``||T_t chi_[a,b]||_1`` with ``T_t f(x) = ((x+t)/x) f(x+t)`` on ``(1, inf)``."""
    lo, hi = max(1.0, a - t), b - t
    if hi <= lo:
        return 0.0
    return float(mp.quad(lambda x: (x + t) / x, [lo, hi]))
