"""Command-line driver: predictions, solves, parameter studies, reports.

Exit codes: 0 success, 2 argument/configuration validation failure,
3 numerical failure (non-convergence).  All file outputs are written
atomically (temporary file + rename) with deterministic formatting:
floats at 17 significant digits, '.' decimal separator, '\\n' line
endings, JSON with stable key order.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .eigen import ConvergenceError, eigenfunction_boundary_report, leading_eigenpairs
from .exponents import classify_bq, nu_case_machine, predict_mu
from .fitting import fit_report
from .grids import graded_mesh
from .kernels import ProblemParams, check_kernel_bounds, synthetic_k5
from .operators import assemble, green_q_norm_profile, spectral_mt_operator
from .solver import SolverConfig, harnack_report, picard_solve

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

STUDY_HEADER = ("s,gamma,p,backend,n,mu_pred,mu_hat,r2,regime,"
                "log_exp_pred,log_exp_hat,ghp_ratio,iterations,residual,wall_ms")


def _fmt(x) -> str:
    """Deterministic float formatting at 17 significant digits."""
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _prediction_json(s: float, gamma: float, p: float, force_critical: bool) -> dict:
    pred = predict_mu(s, gamma, p, force_critical=force_critical)
    case = nu_case_machine(s, gamma, 1.0 / p, force_critical=force_critical)
    out = {"mu": pred.mu, "sigma": pred.sigma, "regime": pred.regime,
           "case_label": case.label}
    if pred.log_exponent is not None:
        out["log_exponent"] = pred.log_exponent
    if case.nu_1 is not None:
        out["nu_1"] = case.nu_1
    if case.nu_infinity is not None:
        out["nu_infinity"] = case.nu_infinity
    return out


# ---------------------------------------------------------------- case running

def _build_operator(case: dict):
    n = int(case["n"])
    beta = float(case.get("beta_g", 3.0))
    backend = case["backend"]
    if backend == "spectral":
        grid = graded_mesh(n, 1.0)
        return spectral_mt_operator(float(case["s"]), grid)
    params = ProblemParams(s=float(case["s"]), gamma=float(case["gamma"]),
                           p=float(case["p"]))
    return assemble(synthetic_k5(params), graded_mesh(n, beta))


def _validate_case(case: dict) -> None:
    for key in ("backend", "s", "gamma", "p", "n"):
        if key not in case:
            raise ValueError(f"case missing required field {key!r}")
    if case["backend"] not in ("synthetic", "spectral"):
        raise ValueError(f"unknown backend {case['backend']!r}")
    ProblemParams(s=float(case["s"]), gamma=float(case["gamma"]), p=float(case["p"]))
    if case["backend"] == "synthetic" and not float(case["s"]) < 0.5:
        raise ValueError("synthetic backend requires s < 1/2")
    n = int(case["n"])
    if n < 8 or n % 2:
        raise ValueError("n must be even and at least 8")
    if float(case.get("beta_g", 3.0)) < 1.0:
        raise ValueError("beta_g must be >= 1")
    if not 0.0 < float(case["p"]) < 1.0:
        raise ValueError("solver handles 0 < p < 1")


def run_case(case: dict) -> dict:
    """Solve one study case and return its result row as a dict."""
    start = time.perf_counter()
    s, gamma, p = float(case["s"]), float(case["gamma"]), float(case["p"])
    op = _build_operator(case)
    tol = float(case.get("tol", 1e-10))
    sol = picard_solve(op, SolverConfig(p=p, tol=tol))
    pred = predict_mu(s, gamma, p, force_critical=bool(case.get("force_critical", False)))
    rep = fit_report(sol.u, op.grid, pred)
    ghp = harnack_report(sol.u, op.grid, pred)
    wall_ms = (time.perf_counter() - start) * 1e3
    return {
        "s": s, "gamma": gamma, "p": p, "backend": case["backend"],
        "n": int(case["n"]),
        "mu_pred": pred.mu, "mu_hat": rep.mu_hat, "r2": rep.r2,
        "regime": pred.regime,
        "log_exp_pred": rep.log_exp_pred, "log_exp_hat": rep.log_exp_hat,
        "ghp_ratio": ghp.global_ratio,
        "iterations": sol.iterations, "residual": sol.residual,
        "wall_ms": wall_ms,
        "_solution": sol, "_grid": op.grid,
    }


def _row_csv(row: dict) -> str:
    # The CSV contract is byte-identical output for identical configs, so the
    # wall_ms column carries a deterministic 0; measured timings go to JSON.
    return ",".join([
        _fmt(row["s"]), _fmt(row["gamma"]), _fmt(row["p"]), row["backend"],
        str(row["n"]), _fmt(row["mu_pred"]), _fmt(row["mu_hat"]), _fmt(row["r2"]),
        row["regime"], _fmt(row["log_exp_pred"]), _fmt(row["log_exp_hat"]),
        _fmt(row["ghp_ratio"]), str(row["iterations"]), _fmt(row["residual"]),
        "0",
    ])


def _row_json(row: dict) -> dict:
    return {k: v for k, v in row.items() if not k.startswith("_")}


# ----------------------------------------------------------------- subcommands

def cmd_predict(args) -> int:
    out = _prediction_json(args.s, args.gamma, args.p, args.force_critical)
    sys.stdout.write(_json_text(out))
    return EXIT_OK


def cmd_solve(args) -> int:
    case = {"backend": args.backend, "s": args.s, "gamma": args.gamma,
            "p": args.p, "n": args.n, "beta_g": args.beta_g, "tol": args.tol,
            "force_critical": args.force_critical}
    _validate_case(case)
    os.makedirs(args.out_dir, exist_ok=True)
    fit_path = os.path.join(args.out_dir, "fit.json")
    try:
        row = run_case(case)
    except ConvergenceError as exc:
        diag = {"error": str(exc), "residual": exc.residual,
                "s": args.s, "gamma": args.gamma, "p": args.p,
                "backend": args.backend, "n": args.n}
        _atomic_write(fit_path, _json_text(diag))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    grid, sol = row["_grid"], row["_solution"]
    lines = ["x,delta,u"]
    for x, d, u in zip(grid.nodes, grid.delta, sol.u):
        lines.append(f"{_fmt(x)},{_fmt(d)},{_fmt(u)}")
    _atomic_write(os.path.join(args.out_dir, "solution.csv"), "\n".join(lines) + "\n")
    _atomic_write(fit_path, _json_text(_row_json(row)))
    return EXIT_OK


def cmd_study(args) -> int:
    with open(args.config, encoding="utf-8") as fh:
        config = json.load(fh)
    cases = config.get("cases", [])
    if not cases:
        raise ValueError("study config contains no cases")
    for i, case in enumerate(cases):
        try:
            _validate_case(case)
        except (ValueError, TypeError, KeyError) as exc:
            raise ValueError(f"case {i}: {exc}") from exc

    jobs = args.jobs
    env_jobs = os.environ.get("NONLOCAL_SHARP_JOBS")
    if env_jobs is not None:
        jobs = int(env_jobs)
    if jobs < 1:
        raise ValueError("--jobs must be >= 1")

    if jobs == 1 or len(cases) == 1:
        rows = [run_case(case) for case in cases]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(run_case, cases))  # preserves input order

    out_dir = config.get("out_dir", args.out_dir)
    lines = [STUDY_HEADER] + [_row_csv(r) for r in rows]
    _atomic_write(os.path.join(out_dir, "study.csv"), "\n".join(lines) + "\n")

    non_critical = [r for r in rows if r["regime"] != "critical"]
    pool_rows = non_critical or rows
    errs = [abs(r["mu_hat"] - r["mu_pred"]) for r in pool_rows]
    worst = int(np.argmax(errs))
    summary = {
        "max_abs_err": float(max(errs)),
        "worst_case": {k: pool_rows[worst][k]
                       for k in ("s", "gamma", "p", "backend", "n",
                                 "mu_pred", "mu_hat")},
        "n_cases": len(rows),
    }
    _atomic_write(os.path.join(out_dir, "summary.json"), _json_text(summary))
    sys.stdout.write(_json_text(summary))
    return EXIT_OK


def cmd_eigen(args) -> int:
    case = {"backend": args.backend, "s": args.s, "gamma": args.gamma,
            "p": 0.5, "n": args.n, "beta_g": args.beta_g}
    _validate_case(case)
    op = _build_operator(case)
    try:
        pairs = leading_eigenpairs(op, n_eigs=args.n_eigs, tol=args.tol)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    gamma = 1.0 if args.backend == "spectral" else args.gamma
    ratios = eigenfunction_boundary_report(pairs, op.grid, gamma)
    lines = ["index,mu,lambda,residual"]
    for pair in pairs:
        lines.append(f"{pair.index},{_fmt(pair.mu)},{_fmt(1.0 / pair.mu)},"
                     f"{_fmt(pair.residual)}")
    os.makedirs(args.out_dir, exist_ok=True)
    _atomic_write(os.path.join(args.out_dir, "eigenpairs.csv"), "\n".join(lines) + "\n")
    report = [{"index": r.index, "sup_ratio": r.sup_ratio, "inf_ratio": r.inf_ratio}
              for r in ratios]
    _atomic_write(os.path.join(args.out_dir, "boundary_ratios.json"), _json_text(report))
    sys.stdout.write(_json_text({"mu_1": pairs[0].mu, "n_pairs": len(pairs)}))
    return EXIT_OK


def cmd_bq(args) -> int:
    cls = classify_bq(args.N, args.s, args.gamma, args.q)
    out = {"regime": cls.regime, "phi_exponent": cls.phi_exponent,
           "q_low": cls.q_low, "q_high": cls.q_high}
    if cls.log_exponent is not None:
        out["log_exponent"] = cls.log_exponent
    sys.stdout.write(_json_text(out))
    return EXIT_OK


def cmd_green_norm(args) -> int:
    params = ProblemParams(s=args.s, gamma=args.gamma)
    kernel = synthetic_k5(params)
    grid = graded_mesh(args.n, args.beta_g)
    deltas, norms = green_q_norm_profile(kernel, grid, args.q)
    slope, intercept = np.polyfit(np.log(deltas), np.log(norms), 1)
    cls = classify_bq(1, args.s, args.gamma, args.q)
    predicted = {"linear": args.gamma, "log": args.gamma,
                 "power": args.gamma * cls.phi_exponent}[cls.regime]
    out = {"slope": float(slope), "intercept": float(intercept),
           "n_points": int(deltas.size), "regime": cls.regime,
           "predicted_slope": predicted}
    sys.stdout.write(_json_text(out))
    return EXIT_OK


def cmd_verify_kernel(args) -> int:
    if args.backend == "synthetic":
        target = synthetic_k5(ProblemParams(s=args.s, gamma=args.gamma))
    else:
        target = spectral_mt_operator(args.s, graded_mesh(args.n, 1.0))
    report = check_kernel_bounds(target, n_samples=args.n_samples, seed=args.seed)
    out = {"c0_hat": report.c0_hat, "c1_hat": report.c1_hat,
           "violations": report.violations, "n_samples": report.n_samples}
    sys.stdout.write(_json_text(out))
    return EXIT_OK


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nonlocal-sharp",
        description="Semilinear nonlocal Dirichlet solver and boundary-exponent toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_params(p, with_p=True):
        p.add_argument("--s", type=float, required=True)
        p.add_argument("--gamma", type=float, default=1.0)
        if with_p:
            p.add_argument("--p", type=float, required=True)

    sp = sub.add_parser("predict", help="closed-form exponent prediction as JSON")
    add_params(sp)
    sp.add_argument("--N", type=int, default=1)
    sp.add_argument("--force-critical", action="store_true")
    sp.set_defaults(func=cmd_predict)

    sp = sub.add_parser("solve", help="solve one case; write solution CSV + fit JSON")
    add_params(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--beta-g", type=float, default=3.0)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--backend", choices=["synthetic", "spectral"], default="synthetic")
    sp.add_argument("--force-critical", action="store_true")
    sp.add_argument("--out-dir", default=".")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("study", help="run a JSON config of cases; write study CSV + summary")
    sp.add_argument("--config", required=True)
    sp.add_argument("--out-dir", default=".")
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_study)

    sp = sub.add_parser("eigen", help="leading eigenpairs + boundary ratios")
    add_params(sp, with_p=False)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--beta-g", type=float, default=1.0)
    sp.add_argument("--n-eigs", type=int, default=1)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--backend", choices=["synthetic", "spectral"], default="spectral")
    sp.add_argument("--out-dir", default=".")
    sp.set_defaults(func=cmd_eigen)

    sp = sub.add_parser("bq", help="classify the L^q Green-norm regime")
    add_params(sp, with_p=False)
    sp.add_argument("--N", type=int, default=1)
    sp.add_argument("--q", type=float, required=True)
    sp.set_defaults(func=cmd_bq)

    sp = sub.add_parser("green-norm", help="fit the q-norm boundary slope")
    add_params(sp, with_p=False)
    sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--n", type=int, default=2000)
    sp.add_argument("--beta-g", type=float, default=3.0)
    sp.set_defaults(func=cmd_green_norm)

    sp = sub.add_parser("verify-kernel", help="sampled two-sided kernel bound report")
    add_params(sp, with_p=False)
    sp.add_argument("--backend", choices=["synthetic", "spectral"], default="synthetic")
    sp.add_argument("--n", type=int, default=1000)
    sp.add_argument("--n-samples", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_verify_kernel)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags already; normalize other codes
        return EXIT_VALIDATION if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
