"""Command line front end.

Exit codes: 0 success or complete verdict, 2 inconclusive or failed property,
1 error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from dataclasses import dataclass

from . import bounds, bundled_descriptor, constants, gfunc, grid_evaluator, s_integral, turing
from .ball import ball_to_json
from .errors import LCertifyError, PreconditionViolated
from .lfunc_model import load_descriptor as _load_path

log = logging.getLogger("lcertify")

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2


@dataclass
class RunConfig:
    subcommand: str
    args: argparse.Namespace
    threads: int


def load_descriptor(path: str):
    """A descriptor file, or the name of a bundled one (zeta, zeta_artin, dirichlet_mod3)."""
    if not os.path.exists(path) and os.sep not in path and not path.endswith(".json"):
        return bundled_descriptor(path)
    return _load_path(path)


def _emit(obj, out: str | None):
    text = json.dumps(obj, indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _threads(ns) -> int:
    if ns.threads is not None:
        return max(1, ns.threads)
    env = os.environ.get("LCERTIFY_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def cmd_constants(cfg: RunConfig) -> int:
    a = cfg.args
    rep = constants.c_theta(a.theta, a.eps, a.variant, C_L=a.C_L, l=a.l)
    _emit(rep.to_json(), a.out)
    return EXIT_OK


def cmd_bound(cfg: RunConfig) -> int:
    a = cfg.args
    d = load_descriptor(a.input)
    fn = s_integral.bound_for_reverse if a.reverse else s_integral.bound_for
    rep = fn(d, a.t1, a.t2, a.eps, a.X, strict=True)
    _emit(rep.to_json(), a.out)
    return EXIT_OK


def cmd_convexity(cfg: RunConfig) -> int:
    a = cfg.args
    d = load_descriptor(a.input)
    s = complex(a.sigma, a.t)
    val = bounds.convexity_bound(bounds.StripBoundInput(d, s, a.eps))
    _emit({"s": [s.real, s.imag], "epsilon": a.eps, "bound": ball_to_json(val)}, a.out)
    return EXIT_OK


def cmd_examples(cfg: RunConfig) -> int:
    a = cfg.args
    s = complex(a.sigma, a.t)
    out = {"maass_constant": ball_to_json(bounds.maass_constant())}
    if a.which in ("artin", "all"):
        out["artin"] = ball_to_json(bounds.artin_example_bound(a.r, a.N, s))
    if a.which in ("maass", "all"):
        out["maass"] = ball_to_json(bounds.maass_example_bound(int(a.N), a.parity, a.r_prime, s))
    _emit(out, a.out)
    return EXIT_OK


def _write_rows(rows, header, out):
    fh = open(out, "w", newline="") if out else sys.stdout
    try:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    finally:
        if out:
            fh.close()


def cmd_eval(cfg: RunConfig) -> int:
    a = cfg.args
    d = load_descriptor(a.input)
    if a.g_only:
        us = [float(u) for u in a.u.split(",")]
        rows = []
        for u in us:
            g = gfunc.g_eval(d, u, a.eta, a.tol)
            v = complex(g.value.mid)
            rows.append([u, repr(v.real), repr(v.imag), repr(g.value.rad), v.real.hex(),
                         v.imag.hex(), g.value.rad.hex(), g.method, g.residues])
        _write_rows(rows, ["u", "re", "im", "radius", "re_hex", "im_hex", "radius_hex",
                           "method", "residues"], a.out)
        return EXIT_OK
    spec = grid_evaluator.choose_grid(d, a.T, a.tol)
    grid = grid_evaluator.invert_to_lambda(d, spec, workers=cfg.threads)
    keys = list(grid.samples[0].ledger) if grid.samples else []
    rows = []
    for s in grid.samples:
        c, r = float(s.value.mid), s.value.rad
        rows.append([repr(s.t), repr(c), repr(r), c.hex(), r.hex(), repr(float(s.F.mid)),
                     repr(s.F.rad)] + [repr(s.ledger[k]) for k in keys])
    _write_rows(rows, ["t", "lambda_center", "lambda_radius", "lambda_center_hex",
                       "lambda_radius_hex", "F_center", "F_radius"] + keys, a.out)
    if a.spec_out:
        _emit(spec.to_json(), a.spec_out)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    a = cfg.args
    d = load_descriptor(a.input)
    hs = (a.h,) if a.h is not None else turing.H_SWEEP
    spec = grid_evaluator.choose_grid(d, a.t_max + max(hs) + 1.0, a.tol)
    grid = grid_evaluator.invert_to_lambda(d, spec, workers=cfg.threads)
    cert = turing.certify(d, a.t_min, a.t_max, a.h, a.eps, a.X, grid=grid)
    _emit(cert.to_json(), a.out)
    log.info("verdict %s, count %s", cert.verdict.value, cert.claimed_zero_count)
    return EXIT_OK if cert.verdict is turing.Verdict.COMPLETE else EXIT_INCONCLUSIVE


def cmd_check_properties(cfg: RunConfig) -> int:
    a = cfg.args
    d = load_descriptor(a.input)
    gq = []
    for sigma, t, eps, X in s_integral.sample_gammaQ_configs(d, a.n, a.seed):
        lo, hi = s_integral.check_gammaQ_property(d, sigma, t, eps, X)
        gq.append({"sigma": sigma, "t": t, "epsilon": eps, "X": X, "lower_ok": lo, "upper_ok": hi})
    ez = []
    for w, eps in s_integral.sample_easy_configs(a.n, a.seed):
        ez.append({"w": [w.real, w.imag], "epsilon": eps,
                   "ok": s_integral.check_easy_integral_property(w, eps)})
    passed = all(r["lower_ok"] and r["upper_ok"] for r in gq) and all(r["ok"] for r in ez)
    _emit({"gammaQ": gq, "easy_integral": ez, "passed": passed}, a.out)
    return EXIT_OK if passed else EXIT_INCONCLUSIVE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lcertify", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--log-level", default="WARNING")
    sub = p.add_subparsers(dest="subcommand", required=True)

    def common(sp, descriptor=True):
        if descriptor:
            sp.add_argument("--input", required=True, help="descriptor JSON")
        sp.add_argument("--out", default=None)
        return sp

    sp = common(sub.add_parser("constants"), descriptor=False)
    sp.add_argument("--theta", type=float, default=0.0)
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--variant", choices=[v.value for v in constants.Variant], default="artin")
    sp.add_argument("--C-L", dest="C_L", type=float, default=1.0)
    sp.add_argument("--l", type=int, default=1)
    sp.set_defaults(func=cmd_constants)

    sp = common(sub.add_parser("bound"))
    sp.add_argument("--t1", type=float, required=True)
    sp.add_argument("--t2", type=float, required=True)
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--X", type=float, required=True)
    sp.add_argument("--reverse", action="store_true", help="bound -pi int S instead")
    sp.set_defaults(func=cmd_bound)

    sp = common(sub.add_parser("convexity"))
    sp.add_argument("--sigma", type=float, required=True)
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--eps", type=float, required=True)
    sp.set_defaults(func=cmd_convexity)

    sp = common(sub.add_parser("examples"), descriptor=False)
    sp.add_argument("--which", choices=["artin", "maass", "all"], default="all")
    sp.add_argument("--r", type=int, default=2)
    sp.add_argument("--N", type=float, default=1.0)
    sp.add_argument("--parity", type=int, default=0)
    sp.add_argument("--r-prime", dest="r_prime", type=float, default=0.0)
    sp.add_argument("--sigma", type=float, default=0.5)
    sp.add_argument("--t", type=float, default=10.0)
    sp.set_defaults(func=cmd_examples)

    sp = common(sub.add_parser("eval"))
    sp.add_argument("--T", type=float, default=50.0)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--g-only", action="store_true", help="evaluate the G-kernel only")
    sp.add_argument("--u", default="0", help="comma separated u values for --g-only")
    sp.add_argument("--eta", type=float, default=0.0)
    sp.add_argument("--spec-out", default=None)
    sp.set_defaults(func=cmd_eval)

    sp = common(sub.add_parser("verify"))
    sp.add_argument("--t-min", type=float, default=0.0)
    sp.add_argument("--t-max", type=float, required=True)
    sp.add_argument("--h", type=float, default=None)
    sp.add_argument("--eps", type=float, default=0.45)
    sp.add_argument("--X", type=float, default=None)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.set_defaults(func=cmd_verify)

    sp = common(sub.add_parser("check-properties"))
    sp.add_argument("--n", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_check_properties)
    return p


def _validate(ns):
    for name in ("eps", "tol", "T"):
        v = getattr(ns, name, None)
        if v is not None and v != v:
            raise PreconditionViolated(f"{name} is a number")
    if getattr(ns, "tol", None) is not None and not ns.tol > 0:
        raise PreconditionViolated("tol>0", f"tol={ns.tol}")
    if getattr(ns, "t_max", None) is not None and not ns.t_max > ns.t_min:
        raise PreconditionViolated("t-max>t-min", f"{ns.t_max} <= {ns.t_min}")


def run(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, str(ns.log_level).upper(), logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = RunConfig(ns.subcommand, ns, _threads(ns))
    try:
        _validate(ns)
        return ns.func(cfg)
    except PreconditionViolated as exc:
        print(f"precondition failed: {exc.condition}" + (f" ({exc.detail})" if exc.detail else ""),
              file=sys.stderr)
        return EXIT_ERROR
    except (LCertifyError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
