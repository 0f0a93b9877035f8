"""``bandcorr`` command line.

Exit codes: 0 success, 1 hard failure (violated assumption, failed check,
numerical error), 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import contextlib
import sys
import warnings

from . import analysis, correlation, figures, lattice_sums, montecarlo, verify
from .config import ConfigError, RunConfig, load_config
from .profile import ModelError, moments_report
from .spectral import ParameterError, compute_params, validate_assumptions

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="TOML run configuration")
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--precision", choices=("auto", "double", "extended"))
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="bandcorr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("params", parents=[common], help="spectral parameters and assumption report")
    sub.add_parser("moments", parents=[common], help="profile moments")

    p = sub.add_parser("sum", parents=[common], help="evaluate S1(ib) or S2(b)")
    p.add_argument("which", choices=("s1", "s2"))
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--R", type=float, default=1e5, help="truncation radius of the direct sum")

    p = sub.add_parser("corr", parents=[common], help="correlation breakdown as CSV")
    p.add_argument("--dim", type=int, choices=(1, 2))

    p = sub.add_parser("figure", parents=[common], help="figure data as CSV")
    p.add_argument("figure", type=int, choices=(1, 2, 3))

    p = sub.add_parser("crossover", parents=[common], help="oscillatory/log crossover b*")
    p.add_argument("--L", type=float)
    p.add_argument("--W", type=float)
    p.add_argument("--omega", type=float)

    p = sub.add_parser("zeros", parents=[common], help="sign changes of Re S2")
    p.add_argument("--b-min", type=float, default=1.0)
    p.add_argument("--b-max", type=float, default=60.0)
    p.add_argument("--evaluator", choices=("theta-series", "asymptotic"), default="theta-series")

    p = sub.add_parser("verify", parents=[common], help="run an invariant suite (TAP output)")
    p.add_argument("suite", choices=sorted(verify.SUITES))

    sub.add_parser("mc", parents=[common], help="Monte Carlo correlation estimate")
    return parser


def _config(args) -> RunConfig:
    cfg = load_config(args.config)
    return cfg.with_overrides(precision=args.precision, seed=args.seed, samples=args.samples)


@contextlib.contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def cmd_params(args, cfg: RunConfig, out) -> int:
    model = cfg.model()
    params = compute_params(cfg.E1, cfg.E2, cfg.eta, model)
    for name in ("E1", "E2", "eta", "omega", "E", "nu", "alpha", "u", "zeta", "b", "R"):
        out.write(f"{name} = {getattr(params, name)!r}\n")
    out.write(f"regime = {params.regime.value}\n")
    report = validate_assumptions(params, model)
    out.write(report.format() + "\n")
    return EXIT_FAIL if report.hard_failure else EXIT_OK


def cmd_moments(args, cfg, out) -> int:
    out.write(moments_report(cfg.model()) + "\n")
    return EXIT_OK


def cmd_sum(args, cfg, out) -> int:
    b = args.b
    if args.which == "s1":
        closed = lattice_sums.s1_closed(1j * b)
        d = lattice_sums.s1_direct(1j * b, args.R)
        out.write(f"s1_closed = {closed!r}\ns1_direct = {d.value!r}\ntail_bound = {d.tail_bound!r}\n")
        out.write(f"re_s1_pure_imag = {lattice_sums.re_s1_pure_imag(b)!r}\nf = {lattice_sums.f_dim1(b)!r}\n")
        return EXIT_OK
    out.write(f"re_s2_theta = {lattice_sums.re_s2_theta(b, precision=cfg.precision)!r}\n")
    if b <= lattice_sums.DOUBLE_MAX_B:
        out.write(f"re_s2_abel_plana = {lattice_sums.re_s2_from_abel_plana(b)!r}\n")
    R = min(args.R, 4096.0)
    if R * R > 2 * b:
        d = lattice_sums.s2_direct(b, R)
        out.write(f"s2_direct = {d.value!r}\ntail_bound = {d.tail_bound!r}\n")
    if b >= 1:
        out.write(f"asymptotic = {lattice_sums.re_s2_asymptotic(b)!r}\n")
        out.write(f"asymptotic_resolved = {lattice_sums.re_s2_asymptotic_resolved(b)!r}\n")
    return EXIT_OK


def cmd_corr(args, cfg, out) -> int:
    dim = args.dim or cfg.dim
    if dim != cfg.dim:
        cfg = cfg.with_overrides(dim=dim)
    model = cfg.model()
    params = compute_params(cfg.E1, cfg.E2, cfg.eta, model)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        br = correlation.corr_dim1(model, params) if dim == 1 else correlation.corr_dim2(model, params)
    for w in caught:
        sys.stderr.write(f"warning: {w.message}\n")
    correlation.write_csv(out, [(model, params, br)])
    return EXIT_OK


def cmd_figure(args, cfg, out) -> int:
    figures.write_figure_csv(out, args.figure, precision=cfg.precision)
    return EXIT_OK


def cmd_crossover(args, cfg, out) -> int:
    L = args.L or cfg.L
    W = args.W or cfg.W
    omega = args.omega or (cfg.E2 - cfg.E1)
    res = analysis.crossover_b(L, W, omega)
    for name in ("b_star", "gamma", "a", "c", "bracket_ok", "residual"):
        out.write(f"{name} = {getattr(res, name)!r}\n")
    return EXIT_OK


def cmd_zeros(args, cfg, out) -> int:
    rep = analysis.count_sign_changes(args.b_min, args.b_max, args.evaluator, precision=cfg.precision)
    analysis.write_zeros_csv(out, rep)
    sys.stderr.write(
        f"found {len(rep.zeros_found)} zeros, predicted {len(rep.predicted_zeros)}, "
        f"max deviation {rep.max_deviation:.4g}\n"
    )
    return EXIT_OK


def cmd_verify(args, cfg, out) -> int:
    kw = {"samples": cfg.samples, "seed": cfg.seed} if args.suite == "mc" else {}
    checks = verify.run_suite(args.suite, **kw)
    out.write(verify.format_tap(checks) + "\n")
    return EXIT_OK if all(c.ok for c in checks) else EXIT_FAIL


def cmd_mc(args, cfg, out) -> int:
    spec = montecarlo.EnsembleSpec(cfg.model(), seed=cfg.seed, n_samples=cfg.samples)
    est = montecarlo.estimate_correlation(spec, cfg.E1, cfg.E2, cfg.eta)
    if args.out is not None:
        montecarlo.write_samples_csv(out, est.samples)
    summary = sys.stderr if args.out is not None else out
    for name in ("mean_Y1", "mean_Y2", "cov", "normalized", "stderr_mean_Y1", "stderr_mean_Y2",
                 "stderr_cov", "stderr_normalized", "n_samples"):
        summary.write(f"{name} = {getattr(est, name)!r}\n")
    return EXIT_OK


COMMANDS = {
    "params": cmd_params, "moments": cmd_moments, "sum": cmd_sum, "corr": cmd_corr,
    "figure": cmd_figure, "crossover": cmd_crossover, "zeros": cmd_zeros,
    "verify": cmd_verify, "mc": cmd_mc,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on bad usage, 0 on --help
        return int(exc.code or 0)
    try:
        cfg = _config(args)
    except ConfigError as exc:
        sys.stderr.write(f"bandcorr: config error: {exc}\n")
        return EXIT_USAGE
    try:
        with _output(args.out) as out:
            return COMMANDS[args.command](args, cfg, out)
    except (ModelError, ParameterError, analysis.NoRootError, lattice_sums.PrecisionLossError,
            lattice_sums.QuadratureError, correlation.PoleError, correlation.SizeLimitError,
            ValueError) as exc:
        sys.stderr.write(f"bandcorr: {exc}\n")
        return EXIT_FAIL
    except OSError as exc:
        sys.stderr.write(f"bandcorr: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
