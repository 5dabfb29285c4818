"""Command-line front end: ``meanchaos <subcommand> ...``.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage error,
3 the request needs a capability the library does not have.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import random
import sys

from .cesaro import Explicit, GeometricGrid, TbilcamiDips, TbilcamiHills, cesaro_trace
from .chaostats import ClassifyParams, classify_pair, density_estimate, density_table
from .checks import CheckReport
from .detect import acb_probe, construct_irregular_vector, verify_certificate
from .errors import CapabilityError, DomainError
from .logcore import index_str
from .gallery import gallery_list, gallery_run, GALLERY
from .semigroup import (ConstantWeight, MultiplicativeTranslation, Translation, acb_integral_check,
                        cesaro_integral, discretized_profile_weight, parse_step, sandwich_check,
                        semigroup_norm)
from .shiftops import (BilateralBackward, BilateralForward, DirectSumWithIdentity, Identity,
                       PairVec, SparseVec, UnilateralBackward, UnilateralForward,
                       orbit_norm_series, special_block_vector)
from .weights import BlockHalvesTwos, Constant, ExplicitList, Harmonic, build_tbilcami

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAPABILITY = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# literal parsers


def _kv(text):
    out = {}
    for part in filter(None, text.split(",")):
        if "=" not in part:
            raise UsageError(f"expected key=value, got {part!r}")
        k, v = part.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _weight_model(text):
    kind, _, arg = text.partition(":")
    if kind == "harmonic":
        return Harmonic()
    if kind == "block":
        return BlockHalvesTwos()
    if kind == "const":
        return Constant(float(arg or 1.0))
    if kind == "weights":
        vals, _, tail = arg.partition("|")
        return ExplicitList([float(s) for s in vals.split(",")], float(tail or 1.0))
    raise UsageError(f"unknown weight {text!r}")


def parse_operator(text: str, p: float = 1.0):
    """Operator literals.

    ``harmonic``, ``block``, ``const:2``, ``weights:1,2,0.5|1`` (backward shift);
    ``forward:<weight>`` for the unilateral forward shift;
    ``tbilcami[:k=8,variant=flattened,dir=backward]`` for bilateral shifts;
    ``identity``; ``sumid:<operator>`` for ``T (+) I``.
    """
    text = text.strip()
    if text == "identity":
        return Identity(p)
    if text.startswith("sumid:"):
        return DirectSumWithIdentity(parse_operator(text[6:], p))
    if text.startswith("forward:"):
        return UnilateralForward(_weight_model(text[8:]), p)
    if text.split(":", 1)[0] == "tbilcami":
        opts = _kv(text.partition(":")[2])
        unknown = set(opts) - {"k", "variant", "dir"}
        if unknown:
            raise UsageError(f"unknown tbilcami option(s): {', '.join(sorted(unknown))}")
        prof = build_tbilcami(opts.get("variant", "original"), int(opts.get("k", 8)))
        cls = {"forward": BilateralForward, "backward": BilateralBackward}.get(opts.get("dir", "forward"))
        if cls is None:
            raise UsageError("dir must be forward or backward")
        return cls(prof, p)
    return UnilateralBackward(_weight_model(text), p)


def parse_vector(text: str):
    """``e:5``, ``e:-3@2.5``, ``sum:2=0.5,6=0.25`` (``sum:2@2=0.5`` also accepted),
    ``blockspecial:20`` and ``pair:<vec>|<vec>``."""
    text = text.strip()
    kind, _, arg = text.partition(":")
    if kind == "pair":
        a, sep, b = arg.partition("|")
        if not sep:
            raise UsageError("pair vectors need 'pair:<vec>|<vec>'")
        return PairVec(_zero_or(a), _zero_or(b))
    if kind == "e":
        idx, _, c = arg.partition("@")
        return SparseVec.basis(int(idx), float(c or 1.0))
    if kind == "sum":
        items = []
        for part in filter(None, arg.split(",")):
            key, eq, val = part.partition("=")
            if not eq:
                raise UsageError(f"expected index=value, got {part!r}")
            items.append((int(key.split("@", 1)[0]), float(val)))
        return SparseVec(items)
    if kind == "blockspecial":
        return special_block_vector(int(arg))
    raise UsageError(f"unknown vector literal {text!r}")


def _zero_or(text):
    return SparseVec() if text.strip() in ("", "0") else parse_vector(text)


def _int(s):
    return int(float(s)) if "e" in s.lower() else int(s)


def parse_schedule(text: str) -> list:
    """``geom:1:1e6[:2]``, ``dips:1,2,3``, ``hills:10,100``, ``list:1,5,10`` or ``1,5,10``.

    Several schedules joined with ``+`` are merged, e.g. ``dips:1,2,3+hills:10,100``.
    """
    if "+" in text:
        return sorted(set().union(*(parse_schedule(part) for part in text.split("+"))))
    kind, sep, arg = text.partition(":")
    if not sep:
        kind, arg = "list", text
    if kind == "geom":
        parts = arg.split(":")
        factor = float(parts[2]) if len(parts) > 2 else 2.0
        return GeometricGrid(_int(parts[0]), _int(parts[1]), factor).points()
    ks = [_int(s) for s in arg.split(",") if s]
    if kind == "dips":
        return TbilcamiDips(ks).points()
    if kind == "hills":
        return TbilcamiHills(ks).points()
    if kind == "list":
        return Explicit(ks).points()
    raise UsageError(f"unknown schedule {text!r}")


def _floats(text):
    return [float(s) for s in text.split(",") if s]


def parse_weight_function(text: str):
    """``const:1`` or ``profile:tbilcami:k=8[,variant=flattened]``."""
    if text.startswith("const:"):
        return ConstantWeight(float(text[6:]))
    if text.startswith("profile:tbilcami"):
        opts = _kv(text[len("profile:tbilcami"):].lstrip(":"))
        return discretized_profile_weight(build_tbilcami(opts.get("variant", "original"),
                                                         int(opts.get("k", 8))))
    raise UsageError(f"unknown weight function {text!r}")


# ---------------------------------------------------------------------------
# output


def _emit(rows, header, payload, fmt, out):
    if fmt == "json":
        json.dump(payload, out, indent=2, sort_keys=True, default=_default)
        out.write("\n")
    else:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _default(o):
    if isinstance(o, int):
        return index_str(o)
    if hasattr(o, "item"):
        return o.item()
    if hasattr(o, "to_dict"):
        return o.to_dict()
    raise TypeError(type(o).__name__)


def _log10(logmag):
    return logmag / math.log(10)


def _vec_text(x):
    return "sum:" + ",".join(f"{i}={c.to_real():g}" for i, c in zip(x.indices, x.coeffs))


def _report_exit(rep: CheckReport) -> int:
    return EXIT_OK if rep.passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# subcommands


def cmd_orbit(a, out):
    op = parse_operator(a.operator, a.p)
    x = parse_vector(a.vector)
    js = [_int(s) for s in a.at.split(",")] if a.at else list(range(0, a.horizon + 1))
    series = orbit_norm_series(op, x, max(js))
    rows = []
    for j in js:
        lm = series.log_norm(j).logmag
        rows.append((j, math.exp(lm), _log10(lm)) if lm < 700 else (j, math.inf, _log10(lm)))
    _emit(rows, ("j", "norm", "log10_norm"),
          {"operator": a.operator, "vector": a.vector,
           "rows": [{"j": index_str(j), "norm": n, "log10_norm": l} for j, n, l in rows]}, a.out, out)
    return EXIT_OK


def cmd_cesaro(a, out):
    op = parse_operator(a.operator, a.p)
    x = parse_vector(a.vector)
    sched = parse_schedule(a.schedule)
    tr = cesaro_trace(orbit_norm_series(op, x, sched[-1]), sched, a.backend)
    if a.out == "json":
        _emit(None, None, {"operator": a.operator, "vector": a.vector, **tr.to_dict()}, "json", out)
    else:
        out.write(tr.to_csv())
    return EXIT_OK


def cmd_density(a, out):
    op = parse_operator(a.operator, a.p)
    x = parse_vector(a.vector)
    y = parse_vector(a.vector2) if a.vector2 else None
    delta = _floats(a.deltas)[0] if a.deltas else 1.0
    d = x if y is None else x - y
    logs = orbit_norm_series(op, d, a.horizon).log_norms(1, a.horizon)
    mask = logs < math.log(delta)
    est = density_estimate(mask, a.horizon, a.tail_start)
    rows = density_table(mask, a.horizon, a.every or max(1, a.horizon // 20))
    _emit(rows, ("n", "count", "ratio"),
          {"delta": delta, "horizon": a.horizon, "tail_start": est.tail_start,
           "low": est.low, "high": est.high,
           "rows": [{"n": n, "count": c, "ratio": r} for n, c, r in rows]}, a.out, out)
    return EXIT_OK


def cmd_classify(a, out):
    op = parse_operator(a.operator, a.p)
    x = parse_vector(a.vector)
    y = parse_vector(a.vector2) if a.vector2 else None
    prm = ClassifyParams(eta=a.eta, Lam=a.Lam, c=a.c, horizon=a.horizon,
                         deltas=_floats(a.deltas) if a.deltas else None,
                         schedule=parse_schedule(a.schedule) if a.schedule else None,
                         backend=a.backend)
    v = classify_pair(op, x, y, prm)
    if a.out == "json":
        out.write(v.to_json() + "\n")
    else:
        _emit(sorted(v.flags.items()), ("flag", "status"), None, "csv", out)
    return EXIT_OK


def cmd_acb_probe(a, out):
    op = parse_operator(a.operator, a.p)
    if a.samples:
        samples = [parse_vector(s) for s in a.samples.split(";") if s.strip()]
    else:
        rng = random.Random(a.seed)
        samples = [SparseVec.basis(rng.randint(1, a.max_index)) for _ in range(a.count)]
    rep = acb_probe(op, samples, parse_schedule(a.schedule), a.C0)
    if a.out == "json":
        _emit(None, None, rep.to_dict(), "json", out)
    else:
        rows = [(_vec_text(x), r["sup_ratio"], r["log_sup_ratio"], r["argN"])
                for x, r in zip(samples, rep.rows)]
        _emit(rows, ("sample", "sup_ratio", "log_sup_ratio", "argN"), None, "csv", out)
    return EXIT_OK


def cmd_construct(a, out):
    op = parse_operator(a.operator, a.p)
    cert = construct_irregular_vector(op, C=a.C, stages=a.stages, budget=a.budget)
    ver = verify_certificate(op, cert)
    payload = {"certificate": cert.to_dict(), "verification": ver.to_dict()}
    _emit(None, None, payload, "json", out)
    return _report_exit(ver)


def cmd_semigroup(a, out):
    f = parse_step(a.f)
    if a.family == "translation":
        v = parse_weight_function(a.weight) if a.weight else None
        fam = Translation(v, a.p, "R" if a.weight and a.weight.startswith("profile:") else "R+")
    else:
        if a.weight:
            raise UsageError("--weight applies to the translation family only")
        fam = MultiplicativeTranslation(a.gamma, a.p)
    if a.check == "acb":
        rep = acb_integral_check(a.eps, a.p, f, _floats(a.b) or [1.0, 10.0, 100.0])
    elif a.check == "sandwich":
        rep = sandwich_check(fam, f, a.s, _floats(a.b) or [2.5, 5.0, 50.0])
    else:
        rows = [("t", t, semigroup_norm(fam, f, t)) for t in _floats(a.t)]
        for b in _floats(a.b):
            r = cesaro_integral(fam, f, b)
            rows.append(("b", b, r.value))
        _emit(rows, ("kind", "arg", "value"),
              {"rows": [{"kind": k, "arg": x, "value": y} for k, x, y in rows]}, a.out, out)
        return EXIT_OK
    _emit([(e.name, e.lhs, e.relation, e.rhs, e.passed) for e in rep.entries],
          ("check", "lhs", "relation", "rhs", "passed"), rep.to_dict(), a.out, out)
    return _report_exit(rep)


def cmd_gallery(a, out):
    if a.action == "list":
        for name in gallery_list():
            out.write(f"{name}\t{GALLERY[name].summary}\n")
        return EXIT_OK
    if not a.name:
        raise UsageError("gallery run needs an entry name")
    overrides = {}
    for s in a.set or []:
        k, eq, v = s.partition("=")
        if not eq:
            raise UsageError(f"--set expects key=value, got {s!r}")
        try:
            overrides[k] = json.loads(v)
        except json.JSONDecodeError:
            overrides[k] = v
    rep = gallery_run(a.name, overrides, timed=a.timed)
    if a.out == "csv":
        _emit([(e.name, e.lhs, e.relation, e.rhs, e.passed) for e in rep.checks.entries],
              ("check", "lhs", "relation", "rhs", "passed"), None, "csv", out)
    else:
        out.write(rep.to_json(include_runtime=a.timed) + "\n")
    return _report_exit(rep.checks)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="meanchaos", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, vector=True, fmt="csv"):
        p.add_argument("--operator", required=True, help="operator literal, e.g. harmonic")
        p.add_argument("--p", type=float, default=1.0, help="exponent of the l^p space")
        if vector:
            p.add_argument("--vector", required=True, help="vector literal, e.g. e:5")
        p.add_argument("--out", choices=("csv", "json"), default=fmt)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("orbit", help="orbit norms ||T^j x||")
    common(p)
    p.add_argument("--horizon", type=_int, default=20)
    p.add_argument("--at", help="comma-separated j values instead of 0..horizon")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("cesaro", help="Cesàro means along a schedule")
    common(p)
    p.add_argument("--schedule", default="geom:1:1024")
    p.add_argument("--backend", choices=("auto", "loop", "segment"), default="auto")
    p.set_defaults(func=cmd_cesaro)

    p = sub.add_parser("density", help="density of {j : ||T^j(x-y)|| < delta}")
    common(p)
    p.add_argument("--vector2")
    p.add_argument("--deltas", help="delta (first value used)")
    p.add_argument("--horizon", type=_int, default=10 ** 4)
    p.add_argument("--tail-start", type=_int, dest="tail_start")
    p.add_argument("--every", type=_int)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("classify", help="LY / mean LY / DC flags for a pair")
    common(p, fmt="json")
    p.add_argument("--vector2")
    p.add_argument("--schedule")
    p.add_argument("--horizon", type=_int, default=10 ** 4)
    p.add_argument("--deltas")
    p.add_argument("--eta", type=float, default=1e-3)
    p.add_argument("--Lam", type=float, default=1e3)
    p.add_argument("--c", type=float, default=0.5)
    p.add_argument("--backend", choices=("auto", "loop", "segment"), default="auto")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("acb-probe", help="sup of A_N(x)/||x|| over samples")
    common(p, vector=False, fmt="json")
    p.add_argument("--samples", help="';'-separated vector literals")
    p.add_argument("--count", type=int, default=16, help="random basis samples if no --samples")
    p.add_argument("--max-index", type=_int, default=1000, dest="max_index")
    p.add_argument("--schedule", default="geom:1:1024")
    p.add_argument("--C0", type=float)
    p.set_defaults(func=cmd_acb_probe)

    p = sub.add_parser("construct-irregular", help="staged construction with certificate")
    common(p, vector=False, fmt="json")
    p.add_argument("--C", type=float)
    p.add_argument("--stages", type=int, default=3)
    p.add_argument("--budget", type=_int, default=10 ** 4)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("semigroup", help="translation semigroups on step functions")
    p.add_argument("--family", choices=("translation", "multiplicative"), default="translation")
    p.add_argument("--weight", help="const:1 or profile:tbilcami:k=8")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--f", default="step:1=1@[1,2]")
    p.add_argument("--t", default="0,0.5,1")
    p.add_argument("--b", default="")
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--eps", type=float, default=0.5)
    p.add_argument("--check", choices=("none", "acb", "sandwich"), default="none")
    p.add_argument("--out", choices=("csv", "json"), default="csv")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_semigroup)

    p = sub.add_parser("gallery", help="named reproductions")
    p.add_argument("action", choices=("list", "run"))
    p.add_argument("name", nargs="?")
    p.add_argument("--set", action="append", help="override key=value (JSON values)")
    p.add_argument("--out", choices=("csv", "json"), default="json")
    p.add_argument("--timed", action="store_true", help="include the runtime in the report")
    p.set_defaults(func=cmd_gallery)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return a.func(a, out)
    except CapabilityError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAPABILITY
    except (UsageError, DomainError, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def run(argv=None) -> tuple:
    """``(exit_code, stdout_text)`` for in-process use."""
    buf = io.StringIO()
    code = main(argv, buf)
    return code, buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
