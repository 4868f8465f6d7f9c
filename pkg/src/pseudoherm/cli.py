"""Command-line front end.

Subcommands: verify, solve, chain, perturb, quasi, weyl, example.  Every run
emits one report (JSON by default, ``--format text`` for humans) containing a
``checks`` array of named pass/fail entries, so CI can assert on named checks
instead of parsing prose.  Exit codes: 0 all checks pass, 1 a mathematical
check failed, 2 input error.  Runs are deterministic given the flags, the
input files and the seed; the only non-deterministic report field is the
``generated_at`` timestamp.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys

import numpy as np

from . import io
from .chain import build_chain, chain_via_shift
from .errors import CheckError, InputError
from .metric import (
    catalog_oscillator,
    catalog_two_point,
    classify_metric,
    find_metric,
    frobenius,
    hermiticity_defect,
    residual,
    solve_metric_space,
)
from .perturbation import RealPolynomial, commutator_defect, matrix_poly
from .quasi import induced_hamiltonian, metric_sqrt
from .weyl import build_shifted_hamiltonian, check_symbolic


def _check(name: str, passed: bool, value=None, threshold=None) -> dict:
    entry = {"name": name, "passed": bool(passed)}
    entry["value"] = None if value is None else float(value)
    entry["threshold"] = None if threshold is None else float(threshold)
    return entry


def _matrix_digest(path, m: np.ndarray) -> dict:
    return {"path": str(path), "n": int(m.shape[0]), "frobenius_norm": frobenius(m)}


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=_positive_float, default=1e-10,
                        help="relative tolerance for all checks (default 1e-10)")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized searches (default 0)")
    common.add_argument("--out", default=None, metavar="PATH",
                        help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="json",
                        help="report format (default json)")

    parser = argparse.ArgumentParser(
        prog="pseudoherm",
        description="Construct, classify, chain, and verify metric operators "
                    "for pseudo-Hermitian Hamiltonians.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common],
                       help="check that eta intertwines H with its adjoint")
    p.add_argument("--hamiltonian", required=True, metavar="PATH")
    p.add_argument("--eta", required=True, metavar="PATH")

    p = sub.add_parser("solve", parents=[common],
                       help="solve for all Hermitian metrics of H")
    p.add_argument("--hamiltonian", required=True, metavar="PATH")
    p.add_argument("--positive", action="store_true",
                   help="search for a positive representative")

    p = sub.add_parser("chain", parents=[common],
                       help="generate the metric chain eta_k = (H^dag)^k eta_0")
    p.add_argument("--hamiltonian", required=True, metavar="PATH")
    p.add_argument("--eta0", required=True, metavar="PATH")
    p.add_argument("--k-max", type=int, default=4, metavar="K")
    p.add_argument("--no-normalize", action="store_true",
                   help="keep raw chain elements instead of unit-norm ones")
    p.add_argument("--via-shift", action="store_true",
                   help="build on H + alpha*I when H is singular, then "
                        "validate against the original H")

    p = sub.add_parser("perturb", parents=[common],
                       help="form H + f(K) and verify the metric still works")
    p.add_argument("--hamiltonian", required=True, metavar="PATH")
    p.add_argument("--eta", required=True, metavar="PATH")
    p.add_argument("--poly", required=True, metavar="COEFFS",
                   help='real coefficients, constant first, e.g. "0,3" for 3x')
    p.add_argument("--k", default=None, metavar="PATH",
                   help="Hermitian K commuting with eta (default: K = eta)")
    p.add_argument("--allow-hermitian", action="store_true",
                   help="accept a Hermitian input Hamiltonian")

    p = sub.add_parser("quasi", parents=[common],
                       help="metric square root and induced Hermitian Hamiltonian")
    p.add_argument("--hamiltonian", required=True, metavar="PATH")
    p.add_argument("--eta", required=True, metavar="PATH")

    p = sub.add_parser("weyl", parents=[common],
                       help="certify a shifted-potential Hamiltonian symbolically")
    p.add_argument("--spec", required=True, metavar="PATH")
    p.add_argument("--theta", type=float, default=None,
                   help="boost parameter (default: 2*gamma from the spec)")
    p.add_argument("--float", dest="float_mode", action="store_true",
                   help="threshold the residual norm at --tol instead of "
                        "requiring exact zero")

    p = sub.add_parser("example", parents=[common],
                       help="write a catalog Hamiltonian/metric pair to files")
    p.add_argument("name", choices=("two-point", "oscillator"))
    p.add_argument("--x", default=None, metavar="COMPLEX",
                   help='two-point diagonal entry, e.g. "1+1i"')
    p.add_argument("--y", default="0", metavar="COMPLEX",
                   help="two-point off-diagonal entry (default 0)")
    p.add_argument("--omega", type=float, default=None,
                   help="oscillator frequency")
    p.add_argument("--out-dir", default=".", metavar="DIR")
    p.add_argument("--prefix", default=None,
                   help="output file prefix (default: the example name)")

    return parser


def _cmd_verify(args):
    H = io.parse_matrix(args.hamiltonian)
    eta = io.parse_matrix(args.eta)
    inputs = {"hamiltonian": _matrix_digest(args.hamiltonian, H),
              "eta": _matrix_digest(args.eta, eta)}
    defect = hermiticity_defect(eta)
    r = residual(H, eta)
    cls = classify_metric(eta, args.tol)
    checks = [
        _check("eta_hermitian", defect <= args.tol, defect, args.tol),
        _check("intertwining_residual", r <= args.tol, r, args.tol),
    ]
    results = {"residual": r, "eta_classification": io.classification_to_dict(cls)}
    return inputs, results, checks


def _cmd_solve(args):
    H = io.parse_matrix(args.hamiltonian)
    inputs = {"hamiltonian": _matrix_digest(args.hamiltonian, H)}
    basis = solve_metric_space(H, args.tol)
    representative = find_metric(basis, want_positive=args.positive,
                                 tol=args.tol, seed=args.seed)
    max_residual = max((residual(H, b) for b in basis.basis), default=0.0)
    checks = [
        _check("basis_residual_max", max_residual <= args.tol, max_residual, args.tol),
        _check("metric_found", representative is not None),
    ]
    results = io.basis_to_dict(basis)
    results["metric"] = None if representative is None else io.matrix_to_dict(representative)
    results["metric_classification"] = (
        None if representative is None
        else io.classification_to_dict(classify_metric(representative, args.tol)))
    return inputs, results, checks


def _cmd_chain(args):
    H = io.parse_matrix(args.hamiltonian)
    eta0 = io.parse_matrix(args.eta0)
    inputs = {"hamiltonian": _matrix_digest(args.hamiltonian, H),
              "eta0": _matrix_digest(args.eta0, eta0)}
    builder = chain_via_shift if args.via_shift else build_chain
    chain = builder(H, eta0, args.k_max, normalize=not args.no_normalize,
                    tol=args.tol)
    max_residual = max(chain.residuals)
    max_defect = max(hermiticity_defect(e) for e in chain.etas)
    degenerate = chain.degenerate_indices
    checks = [
        _check("chain_residual_max", max_residual <= args.tol, max_residual, args.tol),
        _check("all_elements_hermitian", max_defect <= args.tol, max_defect, args.tol),
        _check("all_elements_invertible", not degenerate, float(len(degenerate)), 0.0),
    ]
    results = io.chain_to_dict(chain)
    results["degenerate_indices"] = degenerate
    return inputs, results, checks


def _cmd_perturb(args):
    H = io.parse_matrix(args.hamiltonian)
    eta = io.parse_matrix(args.eta)
    f = RealPolynomial.parse(args.poly)
    inputs = {"hamiltonian": _matrix_digest(args.hamiltonian, H),
              "eta": _matrix_digest(args.eta, eta),
              "poly": str(f)}
    if args.k is not None:
        K = io.parse_matrix(args.k)
        inputs["k"] = _matrix_digest(args.k, K)
    else:
        K = eta
    if not (H.shape == eta.shape == K.shape):
        raise InputError("H, eta and K must share one dimension")

    defect_eta = hermiticity_defect(eta)
    r0 = residual(H, eta)
    defect_K = hermiticity_defect(K)
    cd = commutator_defect(K, eta)
    defect_H = hermiticity_defect(H)
    checks = [
        _check("eta_hermitian", defect_eta <= args.tol, defect_eta, args.tol),
        _check("eta_is_metric", r0 <= args.tol, r0, args.tol),
        _check("k_hermitian", defect_K <= args.tol, defect_K, args.tol),
        _check("k_commutes_with_eta", cd <= args.tol, cd, args.tol),
    ]
    if not args.allow_hermitian:
        checks.append(_check("hamiltonian_non_hermitian", defect_H > args.tol,
                             defect_H, args.tol))
    results = {"commutator_defect": cd}
    if all(c["passed"] for c in checks):
        H_tilde = H + matrix_poly(K, f)
        r = residual(H_tilde, eta)
        drift = frobenius((H_tilde - H_tilde.conj().T) - (H - H.conj().T))
        drift /= max(1.0, frobenius(H))
        checks.append(_check("perturbed_residual", r <= args.tol, r, args.tol))
        checks.append(_check("anti_hermitian_part_preserved", drift <= args.tol,
                             drift, args.tol))
        results["hamiltonian_tilde"] = io.matrix_to_dict(H_tilde)
        results["residual"] = r
    return inputs, results, checks


def _cmd_quasi(args):
    H = io.parse_matrix(args.hamiltonian)
    eta = io.parse_matrix(args.eta)
    inputs = {"hamiltonian": _matrix_digest(args.hamiltonian, H),
              "eta": _matrix_digest(args.eta, eta)}
    cls = classify_metric(eta, args.tol)
    r0 = residual(H, eta)
    checks = [
        _check("eta_positive", cls.positive,
               cls.min_eigenvalue_of_hermitian_part, args.tol),
        _check("eta_is_metric", r0 <= args.tol, r0, args.tol),
    ]
    results = {"eta_classification": io.classification_to_dict(cls), "residual": r0}
    if cls.positive and r0 <= args.tol:
        form = metric_sqrt(eta, args.tol)
        H_eta = induced_hamiltonian(H, form, args.tol)
        scale = max(1.0, frobenius(H))
        defect = frobenius(H_eta - H_eta.conj().T) / scale
        eigvals = np.sort_complex(np.linalg.eigvals(H_eta))
        max_imag = float(np.max(np.abs(eigvals.imag))) if eigvals.size else 0.0
        checks.append(_check("induced_hermitian", defect <= args.tol, defect, args.tol))
        checks.append(_check("spectrum_real", max_imag <= args.tol * scale,
                             max_imag, args.tol * scale))
        results["sqrt_eta"] = io.matrix_to_dict(form.sqrt_eta)
        results["induced_hamiltonian"] = io.matrix_to_dict(H_eta)
        results["eigenvalues"] = [[float(z.real), float(z.imag)] for z in eigvals]
    return inputs, results, checks


def _cmd_weyl(args):
    spec = io.parse_weyl_spec(args.spec)
    inputs = {"spec": {"path": str(args.spec), "potential_degree": spec.V.degree,
                       "momentum_degree": spec.f.degree, "alpha": spec.alpha,
                       "beta": spec.beta, "gamma": spec.gamma}}
    theta = args.theta if args.theta is not None else spec.theta
    H = build_shifted_hamiltonian(spec)
    residual_poly = check_symbolic(spec, theta_override=args.theta)
    exact = not args.float_mode
    if exact:
        passed = residual_poly.is_zero()
        value = float(len(residual_poly.terms))
        threshold = 0.0
    else:
        value = residual_poly.max_coefficient()
        threshold = args.tol
        passed = value <= threshold
    checks = [_check("residual_zero", passed, value, threshold)]
    results = {
        "theta": theta,
        "hamiltonian_terms": io.weyl_terms_to_list(H, exact=exact),
        "residual_terms": io.weyl_terms_to_list(residual_poly, exact=exact),
    }
    return inputs, results, checks


def _cmd_example(args):
    if args.name == "two-point":
        if args.x is None:
            raise InputError("example two-point requires --x")
        x = io.parse_complex_scalar(args.x)
        y = io.parse_complex_scalar(args.y)
        H, eta = catalog_two_point(x, y)
        params = {"x": [x.real, x.imag], "y": [y.real, y.imag]}
    else:
        if args.omega is None:
            raise InputError("example oscillator requires --omega")
        H, eta = catalog_oscillator(args.omega)
        params = {"omega": args.omega}
    prefix = args.prefix if args.prefix is not None else args.name.replace("-", "_")
    os.makedirs(args.out_dir, exist_ok=True)
    h_path = os.path.join(args.out_dir, f"{prefix}_hamiltonian.json")
    eta_path = os.path.join(args.out_dir, f"{prefix}_eta.json")
    io.write_matrix(h_path, H)
    io.write_matrix(eta_path, eta)
    r = residual(H, eta)
    inputs = {"example": args.name, "params": params}
    checks = [_check("intertwining_residual", r <= args.tol, r, args.tol)]
    results = {"hamiltonian_path": h_path, "eta_path": eta_path, "residual": r,
               "hamiltonian": io.matrix_to_dict(H), "eta": io.matrix_to_dict(eta)}
    return inputs, results, checks


_HANDLERS = {
    "verify": _cmd_verify,
    "solve": _cmd_solve,
    "chain": _cmd_chain,
    "perturb": _cmd_perturb,
    "quasi": _cmd_quasi,
    "weyl": _cmd_weyl,
    "example": _cmd_example,
}


def run(args: argparse.Namespace) -> tuple[dict, int]:
    """Execute one parsed command; returns (report, exit_code) and never raises
    on malformed input."""
    report = {
        "command": args.command,
        "generated_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "tol": args.tol,
        "seed": args.seed,
    }
    try:
        inputs, results, checks = _HANDLERS[args.command](args)
    except CheckError as exc:
        report["inputs"] = {}
        report["results"] = {}
        report["checks"] = [_check(exc.check, False, exc.value, exc.threshold)]
        report["status"] = "fail"
        report["error"] = str(exc)
        return report, 1
    except InputError as exc:
        report["inputs"] = {}
        report["results"] = {}
        report["checks"] = []
        report["status"] = "input_error"
        report["error"] = str(exc)
        return report, 2
    report["inputs"] = inputs
    report["results"] = results
    report["checks"] = checks
    passed = all(c["passed"] for c in checks)
    report["status"] = "pass" if passed else "fail"
    return report, 0 if passed else 1


def render_text(report: dict) -> str:
    lines = [f"command: {report['command']}"]
    if report.get("error"):
        lines.append(f"error: {report['error']}")
    for name, digest in sorted(report.get("inputs", {}).items()):
        lines.append(f"input {name}: {json.dumps(digest, sort_keys=True)}")
    for check in report.get("checks", []):
        verdict = "PASS" if check["passed"] else "FAIL"
        detail = ""
        if check["value"] is not None:
            detail = f" (value={check['value']:.6g}"
            if check["threshold"] is not None:
                detail += f", threshold={check['threshold']:.6g}"
            detail += ")"
        lines.append(f"check {check['name']}: {verdict}{detail}")
    lines.append(f"status: {report['status']}")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    report, code = run(args)
    if args.format == "text":
        rendered = render_text(report)
    else:
        rendered = json.dumps(report, indent=2) + "\n"
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as handle:
                handle.write(rendered)
        except OSError as exc:
            print(f"cannot write report to {args.out}: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(rendered)
    return code


if __name__ == "__main__":
    sys.exit(main())
