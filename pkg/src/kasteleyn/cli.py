"""Command-line interface: kernel values, correlation sweeps, finite oracle, verify.

Exit codes: 0 success, 1 verify failure, 2 invalid parameters, 3 convergence
failure.  Settings come from flags, then a flat JSON config file (keys are
the flag names without dashes), then built-in defaults.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

from .analytic import ModelParams, critical_point_from_phi, g_func, solve_omega_c
from .asymptotics import DEFAULT_EPS, DEFAULT_GAMMA
from .aztec import build_aztec, partition_function
from .correlations import (DimerPairSpec, angle_profile, classify_regime, corr_angle_asym,
                           corr_antidiag_asym, corr_diag_asym, corr_exact)
from .errors import ConvergenceError, DomainError, ParameterError
from .kernels import c_omegac, c_tilde, d_omegac, ekl_many_scaled, k11_inv
from .lattice import VertexRef
from .magnetic import kinv_magnetic
from .quadrature import MAX_NODES, QuadratureSpec

CSV_HEADER = "r,r1,r2,corr_exact,corr_asym,regime,gate"
KERNELS = ("ekl", "ctilde", "k11", "comegac", "kinv-magnetic", "d")

DEFAULTS = {
    "a": 0.5, "xi": None, "phic": None, "k": None, "ell": None, "n": "16,32,64",
    "dir": "diag", "theta": None, "rmin": 6.0, "rmax": 60.0, "rstep": 1.0,
    "nodes": None, "max_nodes": MAX_NODES, "gamma": DEFAULT_GAMMA, "eps": DEFAULT_EPS,
    "format": "csv", "jobs": 1, "x": None, "y": None, "s1": None, "s2": None,
}


class UsageError(ParameterError):
    pass


def _fmt(v, digits):
    if v is None:
        return ""
    if isinstance(v, complex):
        return f"{v.real:.{digits}g}{v.imag:+.{digits}g}j"
    if isinstance(v, float):
        return f"{v:.{digits}g}"
    return str(v)


def _json_value(v):
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if not math.isfinite(v):
            return json.dumps(str(v))
        return f"{v:.17g}"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, complex):
        return "[" + _json_value(v.real) + ", " + _json_value(v.imag) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_json_value(x)}" for k, x in v.items()) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_json_value(x) for x in v) + "]"
    return json.dumps(str(v))


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    add = common.add_argument
    add("--config", default=None, help="flat JSON file with default flag values")
    add("--a", type=float, default=None, help="weight a in (0, 1)")
    add("--xi", type=float, default=None, help="macroscopic coordinate xi")
    add("--phic", type=float, default=None, help="critical angle phi_c (instead of xi)")
    add("--nodes", type=int, default=None, help="starting quadrature nodes")
    add("--max-nodes", dest="max_nodes", type=int, default=None,
        help="refinement cap on quadrature nodes")
    add("--gamma", type=float, default=None)
    add("--eps", type=float, default=None, help="non-resonance guard epsilon")
    add("--format", choices=("csv", "json"), default=None)
    add("--jobs", type=int, default=None)

    p = argparse.ArgumentParser(prog="kasteleyn", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kernel", parents=[common], help="one kernel value")
    k.add_argument("kind", choices=KERNELS)
    k.add_argument("--k", type=int, default=None)
    k.add_argument("--ell", type=int, default=None)
    k.add_argument("--x", default=None, help="white vertex 'x1,x2'")
    k.add_argument("--y", default=None, help="black vertex 'y1,y2'")
    k.add_argument("--s1", type=float, default=None)
    k.add_argument("--s2", type=float, default=None)

    for name, text in (("corr", "correlations over an r range"),
                       ("sweep", "correlations over an r range, in parallel")):
        c = sub.add_parser(name, parents=[common], help=text)
        c.add_argument("--dir", choices=("diag", "anti", "angle"), default=None)
        c.add_argument("--theta", type=float, default=None)
        c.add_argument("--rmin", type=float, default=None)
        c.add_argument("--rmax", type=float, default=None)
        c.add_argument("--rstep", type=float, default=None)

    o = sub.add_parser("oracle", parents=[common], help="finite vs infinite kernel")
    o.add_argument("--n", default=None, help="comma-separated sizes")

    sub.add_parser("verify", parents=[common], help="run the invariant suite")
    return p


def _settings(args):
    cfg = {}
    if args.config:
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}")
        if not isinstance(cfg, dict):
            raise UsageError("config must be a flat JSON object")
        cfg = {key.replace("-", "_"): v for key, v in cfg.items()}
        unknown = set(cfg) - set(DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
    out = dict(DEFAULTS)
    out.update(cfg)
    for key in DEFAULTS:
        v = getattr(args, key, None)
        if v is not None:
            out[key] = v
    if out["xi"] is not None and out["phic"] is not None:
        raise UsageError("give --xi or --phic, not both")
    return out


def _quad(s):
    kw = {"max_nodes": int(s["max_nodes"])}
    if s["nodes"] is not None:
        kw["nodes"] = int(s["nodes"])
    return QuadratureSpec(**kw)


def _crit(s, params, required=True):
    if s["xi"] is not None:
        return solve_omega_c(float(s["xi"]), params)
    if s["phic"] is not None:
        return critical_point_from_phi(float(s["phic"]), params)
    if required:
        raise UsageError("this command needs --xi or --phic")
    return None


def _vertex(text, what):
    if text is None:
        raise UsageError(f"this kernel needs --{what} 'x1,x2'")
    try:
        x1, x2 = (int(t) for t in str(text).split(","))
    except ValueError:
        raise UsageError(f"--{what} must be two integers 'x1,x2', got {text!r}")
    return VertexRef(x1, x2)


def _indices(s):
    if s["k"] is None or s["ell"] is None:
        raise UsageError("this kernel needs --k and --ell")
    return int(s["k"]), int(s["ell"])


def cmd_kernel(args, s, out):
    params = ModelParams(float(s["a"]))
    q = _quad(s)
    kind = args.kind
    if kind == "ekl":
        k, l = _indices(s)
        # zero indices use the same integral at (|k|, |l|); odd k + l gives 0
        val = float(ekl_many_scaled([k], [l], params, q)[0])
    elif kind == "ctilde":
        k, l = _indices(s)
        val = c_tilde(k, l, _crit(s, params), params, q)
    elif kind == "d":
        k, l = _indices(s)
        val = d_omegac(k, l, _crit(s, params), params, q)
    else:
        x, y = _vertex(s["x"], "x"), _vertex(s["y"], "y")
        if x.color != "white" or y.color != "black":
            raise DomainError("--x must be a white vertex and --y a black vertex")
        if kind == "k11":
            val = k11_inv(x, y, params, q)
        elif kind == "comegac":
            val = c_omegac(x, y, _crit(s, params), params, q)
        else:
            crit = _crit(s, params, required=False)
            s1 = 1.0 if s["s1"] is None else float(s["s1"])
            if s["s2"] is not None:
                s2 = float(s["s2"])
            elif crit is not None:
                s2 = abs(g_func(crit.omega_c, params.c)) ** -2
            else:
                s2 = 1.0
            val = kinv_magnetic(x, y, s1, s2, params, q)
    if isinstance(val, complex) and val.imag == 0:
        val = val.real
    if s["format"] == "json":
        out.write("{" + f'"kernel": {json.dumps(kind)}, "value": {_json_value(val)}' + "}\n")
    else:
        out.write(_fmt(val, 15) + "\n")
    return 0


def _r_values(s):
    lo, hi, step = float(s["rmin"]), float(s["rmax"]), float(s["rstep"])
    if not (lo > 0 and hi >= lo and step > 0):
        raise UsageError("need 0 < rmin <= rmax and rstep > 0")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [lo + i * step for i in range(count)]


def _gate(validity):
    if not validity.get("window", True):
        return "window_fail"
    if not validity.get("lambda_eps", True):
        return "lambda_eps_fail"
    return "ok"


def sweep_row(task):
    """One SweepRow as a dict; module level so worker processes can run it."""
    r, s = task
    params = ModelParams(float(s["a"]))
    crit = _crit(s, params)
    q = _quad(s)
    direction, theta = s["dir"], s["theta"]
    eps, gamma = float(s["eps"]), float(s["gamma"])
    spec = DimerPairSpec.along(direction, r, theta)
    exact = corr_exact(spec, crit, params, q).value
    if direction == "diag":
        av = corr_diag_asym(spec.r1, crit, params, eps, gamma, strict=False)
        rr = float(spec.r1)
    elif direction == "anti":
        av = corr_antidiag_asym(spec.r1, crit, params, gamma)
        rr = float(spec.r1)
    else:
        th = spec.theta
        try:
            prof = angle_profile(th, params, eps)
        except DomainError:
            prof = angle_profile(float(theta), params, eps)
        rr = spec.r
        av = corr_angle_asym(rr, prof, crit, params, eps, gamma, strict=False)
    reg = classify_regime(rr, direction, crit, params, theta=theta)
    return {"r": rr, "r1": spec.r1, "r2": spec.r2, "corr_exact": exact,
            "corr_asym": av.value, "regime": reg.regime, "gate": _gate(av.validity),
            "method": f"exact-kernel, remainder-free; asym={av.regime_tag}"}


def cmd_corr(args, s, out):
    params = ModelParams(float(s["a"]))
    _crit(s, params)
    _quad(s)
    if s["dir"] == "angle":
        if s["theta"] is None:
            raise UsageError("--dir angle needs --theta")
        angle_profile(float(s["theta"]), params, float(s["eps"]))
    tasks = [(r, s) for r in _r_values(s)]
    jobs = max(1, int(s["jobs"]))
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(sweep_row, tasks))
    else:
        rows = [sweep_row(t) for t in tasks]
    if s["format"] == "json":
        out.write("[\n" + ",\n".join(_json_value(r) for r in rows) + "\n]\n")
    else:
        out.write(CSV_HEADER + "\n")
        for row in rows:
            out.write(",".join(_fmt(row[key], 15) for key in CSV_HEADER.split(",")) + "\n")
    return 0


def cmd_oracle(args, s, out):
    from .oracle import compare
    a = float(s["a"])
    try:
        sizes = [int(t) for t in str(s["n"]).split(",")]
    except ValueError:
        raise UsageError(f"--n must be comma-separated integers, got {s['n']!r}")
    header = "n,x1,x2,y1,y2,finite_re,finite_im,infinite_re,infinite_im,gap,envelope"
    report = {"a": a, "xi": s["xi"], "partition_function": {}, "rows": []}
    for n in sizes:
        g = build_aztec(n, a)
        report["partition_function"][str(n)] = partition_function(g)
        if a >= 1.0 or s["xi"] is None:
            continue
        for row in compare(n, a, float(s["xi"]), q=_quad(s), graph=g):
            report["rows"].append({
                "n": n, "x1": row.x.x1, "x2": row.x.x2, "y1": row.y.x1, "y2": row.y.x2,
                "finite_re": row.finite.real, "finite_im": row.finite.imag,
                "infinite_re": row.infinite.real, "infinite_im": row.infinite.imag,
                "gap": row.gap, "envelope": row.envelope})
    if s["format"] == "json":
        out.write(_json_value(report) + "\n")
        return 0
    for n, z in report["partition_function"].items():
        out.write(f"# partition function n={n} a={_fmt(a, 15)}: {_fmt(z, 15)}\n")
    if report["rows"]:
        out.write(header + "\n")
        for row in report["rows"]:
            out.write(",".join(_fmt(row[key], 15) for key in header.split(",")) + "\n")
    return 0


def cmd_verify(args, s, out):
    from .verify import run
    report = run(_quad(s))
    out.write(_json_value(report) + "\n")
    return 0 if report["passed"] else 1


COMMANDS = {"kernel": cmd_kernel, "corr": cmd_corr, "sweep": cmd_corr,
            "oracle": cmd_oracle, "verify": cmd_verify}


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    args = _parser().parse_args(argv)
    try:
        s = _settings(args)
        return COMMANDS[args.command](args, s, out)
    except (ParameterError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
