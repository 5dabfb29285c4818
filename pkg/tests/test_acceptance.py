"""The twelve acceptance criteria, each at its stated tolerance and time limit.

Every criterion prints one line ``[PASS|FAIL] Cn ...``; the lines are also
collected and repeated in the pytest terminal summary (see conftest.py).
Run directly with ``python3 tests/test_acceptance.py`` for the lines alone.
"""
import math
import time

import numpy as np
import pytest

from meanchaos.cesaro import TbilcamiDips, TbilcamiHills, cesaro_mean, cesaro_trace
from meanchaos.detect import construct_irregular_vector, mlycc_witness_search, verify_certificate
from meanchaos.gallery import hypercyclicity_indicator
from meanchaos.semigroup import (MultiplicativeTranslation, StepFunction, Translation,
                                 acb_integral_check, sandwich_check)
from meanchaos.shiftops import (BilateralForward, SparseVec, UnilateralBackward, orbit_norm,
                                orbit_norm_series, special_block_vector)
from meanchaos.weights import BlockHalvesTwos, Harmonic, build_tbilcami, verify_tbilcami

RESULTS = []


def record(cid, ok, limit, elapsed, detail):
    within = limit is None or elapsed < limit
    passed = bool(ok and within)
    budget = "" if limit is None else f" (limit {limit:g}s)"
    line = f"[{'PASS' if passed else 'FAIL'}] {cid}: {detail}; {elapsed:.3f}s{budget}"
    RESULTS.append(line)
    print(line)
    assert ok, line
    assert within, line


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def test_c01_harmonic_norm_law():
    T = UnilateralBackward(Harmonic())
    with Timer() as t:
        worst = max(abs(orbit_norm(T, SparseVec.basis(n + 1), n).to_real() / (n + 1) - 1)
                    for n in range(1, 10 ** 4 + 1))
    record("C1", worst <= 1e-9, 2.0, t.elapsed,
           f"max rel err of ||T^n e_(n+1)|| vs n+1 over n <= 1e4 = {worst:.2e}")


def test_c02_block_prefix_and_orbit():
    w = BlockHalvesTwos()
    T = UnilateralBackward(w)
    with Timer() as t:
        prefix = float(np.exp(w.cum_log_array(np.arange(1, 10 ** 6 + 1, dtype=np.int64)).max()))
        x = special_block_vector(2 * 10 ** 3)
        low = min(orbit_norm(T, x, m).to_real() for m in range(1, 10 ** 3 + 1))
    ok = abs(prefix - 1.0) <= 1e-9 and low >= 1 - 1e-9
    record("C2", ok, 10.0, t.elapsed,
           f"prefix sup = {prefix:.12g}, min_m<=1e3 ||B^m x*|| = {low:.12g}")


def test_c03_tbilcami_inequality_suite():
    with Timer() as t:
        prof = build_tbilcami("original", 9)
        reps = [verify_tbilcami(prof, k) for k in range(1, 9)]
    margins = [e.margin for r in reps for e in r.entries
               if e.status == "checked" and e.relation != "=="]
    ok = all(r.passed for r in reps) and min(margins) > 0
    record("C3", ok, 1.0, t.elapsed,
           f"k=1..8 all pass, smallest log-margin {min(margins):.3g}")


def test_c04_tbilcami_dips():
    ks = [1, 2, 3, 10, 100]
    with Timer() as t:
        T = BilateralForward(build_tbilcami("original", 101))
        pts = TbilcamiDips(ks).points()
        s = orbit_norm_series(T, SparseVec.basis(0), pts[-1])
        vals = [v.to_real() for v in cesaro_trace(s, pts, "segment").values]
        agree = [abs(cesaro_mean(s, N, "loop").to_real() / cesaro_mean(s, N, "segment").to_real() - 1)
                 for N in pts[:2]]
    bounds = [(2 * k) ** (2 / 3) / (k + 1) + 0.2 for k in ks]
    ok = all(v <= b for v, b in zip(vals, bounds)) and max(agree) <= 1e-9
    detail = ", ".join(f"k={k}: {v:.4f}<={b:.4f}" for k, v, b in zip(ks, vals, bounds))
    record("C4", ok, 30.0, t.elapsed, f"{detail}; loop/segment rel diff {max(agree):.1e}")


def test_c05_tbilcami_peaks():
    ks = [10, 100, 10 ** 4]
    with Timer() as t:
        T = BilateralForward(build_tbilcami("original", 10 ** 4))
        pts = TbilcamiHills(ks).points()
        s = orbit_norm_series(T, SparseVec.basis(0), pts[-1])
        vals = [v.to_real() for v in cesaro_trace(s, pts, "segment").values]
    ok = (vals[0] < vals[1] < vals[2] and 1.5 <= vals[2] <= 2.1 and vals[2] > vals[0] + 0.5)
    record("C5", ok, 5.0, t.elapsed,
           "A(m_k) for k=10,100,1e4: " + ", ".join(f"{v:.6f}" for v in vals))


def test_c06_hypercyclicity_indicator():
    with Timer() as t:
        vals, rep = hypercyclicity_indicator(None, [10 ** 3, 10 ** 4, 10 ** 5, 10 ** 6], 0.51)
    record("C6", rep.passed, 0.1, t.elapsed,
           f"v_jk(1e6) = {vals['v_jk'][-1]:.4f}, v_-jk(1e6) = {vals['v_minus_jk'][-1]:.4f}")


def test_c07_flattened_variant():
    with Timer() as t:
        T = BilateralForward(build_tbilcami("flattened", 100))
        hills = TbilcamiHills([10, 100]).points()
        dips = TbilcamiDips([1, 2, 3]).points()
        s = orbit_norm_series(T, SparseVec.basis(0), hills[-1])
        hv = [v.to_real() for v in cesaro_trace(s, hills, "segment").values]
        dv = [v.to_real() for v in cesaro_trace(s, dips, "segment").values]
    ok = max(hv) <= 1.2 and dv[-1] < 0.6
    record("C7", ok, None, t.elapsed,
           f"max hill {max(hv):.4f} <= 1.2, dip at k=3 {dv[-1]:.4f} < 0.6")


def test_c08_constructive_irregular_vector():
    T = UnilateralBackward(BlockHalvesTwos())
    with Timer() as t:
        cert = construct_irregular_vector(T, C=2.0, stages=3, budget=10 ** 6)
        rep = verify_certificate(T, cert)
    peak, dip = rep["peak_1"], rep["dip_1"]
    ok = (len(cert.stages) >= 1 and cert.evaluations <= 10 ** 6 and cert.r[0] == 1
          and peak.lhs >= cert.r[0] - 1 and dip.lhs <= 1 / (cert.r[0] + 1) + 1e-6 and rep.passed)
    record("C8", ok, 60.0, t.elapsed,
           f"{len(cert.stages)} stages, {cert.evaluations} evaluations, "
           f"A peak {peak.lhs:.4f} >= {peak.rhs:g}, A dip {dip.lhs:.4f} <= {dip.rhs:g}")


def test_c09_mlycc_witnesses():
    T = UnilateralBackward(Harmonic())
    with Timer() as t:
        found = mlycc_witness_search(T, k_max=5)
        checks = []
        for w in found:
            s = orbit_norm_series(T, w.y, w.N)
            checks.append(w.found and cesaro_mean(s, w.N, "loop").to_real() > w.k)
    ok = len(found) == 5 and all(checks)
    record("C9", ok, 5.0, t.elapsed,
           "witnesses " + ", ".join(f"k={w.k}: e_{w.y.indices[0]} N={w.N}" for w in found))


def test_c10_semigroup_acb_bound():
    f = StepFunction.indicator(1.0, 2.0)
    with Timer() as t:
        reps = [acb_integral_check(0.5, p, f, [1.0, 10.0, 100.0, 1000.0], tau=1e-6) for p in (1, 2)]
    worst = max(e.lhs for r in reps for e in r.entries)
    record("C10", all(r.passed for r in reps), 10.0, t.elapsed,
           f"max (1/b) int ||T_t f||^p dt = {worst:.4f} <= 6")


def test_c11_discretization_sandwich():
    fams = [Translation(), MultiplicativeTranslation(1.0, 1.0)]
    with Timer() as t:
        reps = [sandwich_check(fam, StepFunction.indicator(1.0, 2.0), 1.0, [2.5, 5.0, 50.0])
                for fam in fams]
    n = sum(len(r.entries) for r in reps)
    record("C11", all(r.passed for r in reps) and n == 12, 10.0, t.elapsed,
           f"{n} sandwich inequalities hold (C_s = 1 and 2)")


def test_c12_property_suites():
    import test_properties as props
    suites = [props.test_roundtrip_and_commutativity, props.test_associativity_and_distributivity,
              props.test_log_sum_is_order_independent, props.test_cesaro_homogeneity,
              props.test_chasles, props.test_density_complement,
              props.test_F_below_Fstar_and_monotone_in_delta,
              props.test_classify_depends_only_on_the_difference]
    failures = []
    with Timer() as t:
        for suite in suites:
            assert suite.hypothesis.inner_test is not None
            assert getattr(suite, "_hypothesis_internal_use_settings").max_examples >= 1000
            try:
                suite()
            except Exception as exc:  # report every suite, then fail
                failures.append(f"{suite.__name__}: {type(exc).__name__}")
    record("C12", not failures, None, t.elapsed,
           f"{len(suites)} suites x 1000 cases, failures: {failures or 'none'}")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-s"]))
