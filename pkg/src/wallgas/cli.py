"""Command-line front end.

Every subcommand emits its scalar results as JSON on stdout, writes curve
data as CSV (17 significant digits, fixed column order), and drops a run
manifest JSON next to its outputs.  Rerunning from a manifest reproduces the
outputs bit-exactly (stochastic commands included, via the recorded seed).

Exit codes: 0 ok, 2 validation error, 3 solver/oracle error, 4 MC tuning
failure, 5 precision exhaustion.
"""

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional

import numpy as np

from . import __version__
from .audit import audit_as_dicts, format_audit
from .density import density_for, normalize_check, reflect_negative
from .edges import classify
from .energy import (
    energy,
    energy_fullline,
    left_rate,
    log_prob_estimate,
    right_rate,
    tail_coefficient,
    theta,
)
from .errors import (
    BracketFailure,
    OracleMismatch,
    PrecisionExhausted,
    QuadratureFailure,
    TuningFailure,
)
from .model import EnsembleParams
from .montecarlo import (
    analytic_bin_averages,
    l1_distance,
    min_eigenvalue_samples,
    run_and_histogram,
)
from .orthopoly import build_basis, convergence_study, overlay_rows

EXIT_VALIDATION = 2
EXIT_SOLVER = 3
EXIT_TUNING = 4
EXIT_PRECISION = 5

OUT_DIR_ENV = "WALLGAS_OUT_DIR"


def _fmt(x):
    return f"{float(x):.17g}"


def write_csv(path, header, rows):
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) if not isinstance(v, int) else str(v) for v in row) + "\n")


@dataclass
class RunManifest:
    subcommand: str
    arguments: Dict
    seed: Optional[int]
    version: str
    duration_s: float
    outputs: List[str] = field(default_factory=list)

    def write(self, path):
        with open(path, "w") as fh:
            json.dump(asdict(self), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @staticmethod
    def load(path):
        with open(path) as fh:
            raw = json.load(fh)
        return RunManifest(**raw)


def _out_dir(args):
    d = args.out_dir or os.environ.get(OUT_DIR_ENV) or "."
    os.makedirs(d, exist_ok=True)
    return d


def _params(args):
    return EnsembleParams(alpha=args.alpha, beta=args.beta, sigma=args.sigma)


def _emit(payload, fmt="json"):
    if fmt == "csv":
        for key in sorted(payload):
            val = payload[key]
            if isinstance(val, (list, dict)):
                continue
            sys.stdout.write(f"{key},{val if not isinstance(val, float) else _fmt(val)}\n")
        return
    json.dump(payload, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def cmd_edges(args):
    sol = classify(_params(args))
    payload = {
        "regime": sol.kind.value,
        "a": sol.edges.a,
        "b": sol.edges.b,
        "residual_psi": sol.residual_psi,
        "residual_phi_slack": sol.residual_phi_slack,
    }
    _emit(payload, args.format)
    return payload, []


def cmd_density(args):
    if args.grid < 2:
        raise ValueError(f"grid must be >= 2, got {args.grid}")
    if args.reflected:
        d = reflect_negative(args.alpha, args.sigma, beta=args.beta)
    else:
        d = density_for(_params(args))
    a, b = d.support
    pad = 1e-6 * (b - a)
    xs = np.linspace(a + pad, b - pad, args.grid)
    rows = list(zip(xs.tolist(), d.pdf(xs).tolist()))
    out = args.out or os.path.join(_out_dir(args), "density.csv")
    write_csv(out, ["x", "f"], rows)
    payload = {
        "regime": d.solution.kind.value,
        "form": d.form.value,
        "a": a,
        "b": b,
        "mass": normalize_check(d),
        "csv": out,
    }
    _emit(payload, args.format)
    return payload, [out]


def cmd_energy(args):
    rep = energy(_params(args))
    payload = {
        "regime": rep.regime,
        "a": rep.edges[0],
        "b": rep.edges[1],
        "robin": rep.robin,
        "m2": rep.m2,
        "log_moment": rep.log_moment,
        "energy": rep.energy,
        "closed_form_energy": rep.closed_form_energy,
        "discrepancy": rep.discrepancy,
        "fullline_energy": energy_fullline(args.alpha),
    }
    _emit(payload, args.format)
    return payload, []


def cmd_theta(args):
    val = theta(args.alpha, beta=args.beta)
    payload = {
        "theta": val,
        "beta": args.beta,
        "log_prob_coefficient": -args.beta * val,
    }
    _emit(payload, args.format)
    return payload, []


def cmd_rate(args):
    alpha = args.alpha
    if args.x is not None:
        xs = [args.x]
    else:
        lo, hi = args.x_min, args.x_max
        if lo is None or hi is None:
            raise ValueError("rate needs either --x or both --x-min/--x-max")
        xs = np.linspace(lo, hi, args.grid).tolist()
    if args.side == "right":
        rows = [(x, right_rate(x, alpha, beta=args.beta)) for x in xs]
        columns = ["sigma", "phi_plus"]
    else:
        rows = [(x, left_rate(x, alpha, beta=args.beta)) for x in xs]
        columns = ["x", "delta_e"]
    payload = {
        "side": args.side,
        "tail_coefficient": tail_coefficient(alpha),
        "values": [{columns[0]: r[0], columns[1]: r[1]} for r in rows],
    }
    outputs = []
    if len(rows) > 1 or args.out:
        out = args.out or os.path.join(_out_dir(args), f"rate_{args.side}.csv")
        write_csv(out, columns, rows)
        payload["csv"] = out
        outputs.append(out)
    _emit(payload, args.format)
    return payload, outputs


def cmd_sample(args):
    params = _params(args)
    hist = run_and_histogram(
        params, args.n, args.sweeps, burn_in=args.burn_in, seed=args.seed, bins=args.bins
    )
    d = density_for(params)
    overlay = analytic_bin_averages(hist, d)
    l1 = l1_distance(hist, d)
    base = args.out or os.path.join(_out_dir(args), "sample.csv")
    stem = base[:-4] if base.endswith(".csv") else base
    hist_csv = stem + ".csv"
    overlay_csv = stem + "_overlay.csv"
    write_csv(hist_csv, ["bin_center", "density_estimate"], list(zip(hist.bin_centers, hist.density)))
    write_csv(overlay_csv, ["bin_center", "analytic_density"], list(zip(hist.bin_centers, overlay)))
    outputs = [hist_csv, overlay_csv]
    payload = {
        "l1_distance": l1,
        "acceptance_rate": hist.acceptance_rate,
        "step_width": hist.step_width,
        "samples": hist.total,
        "seed": args.seed,
        "csv": hist_csv,
        "overlay_csv": overlay_csv,
    }
    if args.min_replicas:
        series = min_eigenvalue_samples(
            params, args.n, args.min_replicas, args.sweeps, args.seed, burn_in=args.burn_in
        )
        mins_csv = stem + "_min.csv"
        rows = []
        for r, s in enumerate(series):
            rows += [(r, i, v) for i, v in enumerate(s)]
        write_csv(mins_csv, ["replica", "sweep", "min_value"], rows)
        outputs.append(mins_csv)
        payload["min_mean"] = float(np.mean([np.mean(s) for s in series]))
        payload["min_csv"] = mins_csv
    _emit(payload, args.format)
    return payload, outputs


def cmd_approx(args):
    mu = args.mu if args.mu is not None else round(args.alpha * args.n)
    if args.n_list:
        rows = convergence_study(args.alpha, sorted(args.n_list))
        out = args.out or os.path.join(_out_dir(args), "approx_convergence.csv")
        write_csv(out, ["n", "mu_n", "l1_trimmed", "mass"], [(r.n, r.mu_n, r.l1_trimmed, r.mass) for r in rows])
        payload = {
            "alpha": args.alpha,
            "rows": [asdict(r) for r in rows],
            "csv": out,
        }
        _emit(payload)
        return payload, [out]
    basis = build_basis(args.n, mu)
    alpha = mu / args.n
    rows = overlay_rows(basis, EnsembleParams(alpha=alpha, beta=args.beta, sigma=0.0), grid=args.grid)
    out = args.out or os.path.join(_out_dir(args), "approx.csv")
    write_csv(out, ["x", "f_n", "f_limit"], rows)
    payload = {
        "n": args.n,
        "mu": mu,
        "alpha": alpha,
        "precision_bits": basis.precision,
        "gram_residual": basis.residual,
        "csv": out,
    }
    _emit(payload, args.format)
    return payload, [out]


def cmd_audit(args):
    entries = audit_as_dicts()
    out = args.out or os.path.join(_out_dir(args), "audit.json")
    with open(out, "w") as fh:
        json.dump(entries, fh, indent=2, sort_keys=True)
        fh.write("\n")
    sys.stdout.write(format_audit())
    return {"entries": len(entries), "json": out}, [out]


def cmd_rerun(args):
    manifest = RunManifest.load(args.manifest)
    argv = [manifest.subcommand]
    for key, val in manifest.arguments.items():
        if key in ("func",) or val is None or val is False:
            continue
        flag = "--" + key.replace("_", "-")
        if val is True:
            argv.append(flag)
        elif isinstance(val, list):
            argv.append(flag)
            argv += [str(v) for v in val]
        else:
            argv += [flag, str(val)]
    return main(argv)


def build_parser():
    p = argparse.ArgumentParser(
        prog="wallgas",
        description="Equilibrium measures, energies, and large-deviation rates "
        "of the hard-wall log-gas; Monte Carlo and finite-n oracles included.",
    )
    p.add_argument("--version", action="version", version=f"wallgas {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, sigma=True, seedless=True):
        sp.add_argument("--alpha", type=float, required=True)
        sp.add_argument("--beta", type=float, default=2.0)
        if sigma:
            sp.add_argument("--sigma", type=float, default=0.0)
        sp.add_argument("--out", type=str, default=None)
        sp.add_argument("--out-dir", type=str, default=None)
        sp.add_argument("--format", choices=["json", "csv"], default="json")

    sp = sub.add_parser("edges", help="regime and support edges")
    common(sp)
    sp.set_defaults(func=cmd_edges)

    sp = sub.add_parser("density", help="limiting density curve as CSV")
    common(sp)
    sp.add_argument("--grid", type=int, default=400)
    sp.add_argument("--reflected", action="store_true", help="lambda_max <= sigma variant")
    sp.set_defaults(func=cmd_density)

    sp = sub.add_parser("energy", help="equilibrium energy report")
    common(sp)
    sp.set_defaults(func=cmd_energy)

    sp = sub.add_parser("theta", help="positivity-probability exponent")
    common(sp, sigma=False)
    sp.set_defaults(func=cmd_theta)

    sp = sub.add_parser("rate", help="right/left rate function values or curves")
    common(sp, sigma=False)
    sp.add_argument("--side", choices=["right", "left"], required=True)
    sp.add_argument("--x", type=float, default=None)
    sp.add_argument("--x-min", type=float, default=None)
    sp.add_argument("--x-max", type=float, default=None)
    sp.add_argument("--grid", type=int, default=50)
    sp.set_defaults(func=cmd_rate)

    sp = sub.add_parser("sample", help="Metropolis gas run with histogram vs analytic overlay")
    common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--sweeps", type=int, required=True)
    sp.add_argument("--burn-in", type=int, default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--bins", type=int, default=40)
    sp.add_argument("--min-replicas", type=int, default=0)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("approx", help="finite-n orthogonal-polynomial density")
    common(sp, sigma=False)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--mu", type=float, default=None)
    sp.add_argument("--grid", type=int, default=200)
    sp.add_argument("--n-list", type=int, nargs="*", default=None)
    sp.set_defaults(func=cmd_approx)

    sp = sub.add_parser("audit", help="published-vs-computed discrepancy report")
    sp.add_argument("--out", type=str, default=None)
    sp.add_argument("--out-dir", type=str, default=None)
    sp.set_defaults(func=cmd_audit)

    sp = sub.add_parser("rerun", help="re-execute a run from its manifest")
    sp.add_argument("manifest", type=str)
    sp.set_defaults(func=cmd_rerun)

    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.func is cmd_rerun:
        return cmd_rerun(args)
    t0 = time.perf_counter()
    try:
        payload, outputs = args.func(args)
    except (ValueError,) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except TuningFailure as exc:
        print(f"tuning failure: {exc}", file=sys.stderr)
        return EXIT_TUNING
    except PrecisionExhausted as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (BracketFailure, OracleMismatch, QuadratureFailure) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    duration = time.perf_counter() - t0
    arguments = {
        k: v for k, v in vars(args).items() if k not in ("func", "command") and v is not None
    }
    manifest = RunManifest(
        subcommand=args.command,
        arguments=arguments,
        seed=getattr(args, "seed", None),
        version=__version__,
        duration_s=duration,
        outputs=outputs,
    )
    manifest_path = os.path.join(_out_dir(args), f"{args.command}_manifest.json")
    manifest.write(manifest_path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
