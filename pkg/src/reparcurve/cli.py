"""Command-line driver: parse a curve, run the pipeline, emit report/plot/CSV.

Input format (JSON): an object with "x" and "y", each holding "num" and
"den" coefficient lists in ascending degree.  Coefficients may be floats,
decimal strings, or [re, im] pairs for complex values, e.g.

    {"x": {"num": [0, 1], "den": [1]}, "y": {"num": [0, 0, 1], "den": [1]}}

The report is JSON with the same coefficient-list encoding for every
polynomial; it is byte-deterministic for a fixed (input, eps, seed, grid)
tuple.  With --interval the report gains a closeness certificate and the
tool renders an overlay figure (input curve solid, reparametrized dashed)
plus a CSV of the samples.

Exit codes: 0 ok, 2 parse error, 3 unstable index, 4 no admissible pair or
cross-difference mismatch, 5 resultant degree mismatch, 6 pole in interval.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errorbound import IntervalSpec, error_bound_report
from .errors import (
    InputContractError,
    InterpolationDegreeError,
    NoAdmissiblePairError,
    NotMoebiusLikeError,
    PoleInIntervalError,
    ReparcurveError,
    UnstableIndexError,
)
from .numpoly import BiPoly, PlaneParametrization, Poly, RationalFunction
from .reparam import reparametrize, validate_input_contract

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_PARSE = 2
EXIT_UNSTABLE = 3
EXIT_NO_PAIR = 4
EXIT_DEGREE = 5
EXIT_POLE = 6

_EXIT_BY_ERROR = (
    (InputContractError, EXIT_PARSE),
    (UnstableIndexError, EXIT_UNSTABLE),
    (NoAdmissiblePairError, EXIT_NO_PAIR),
    (NotMoebiusLikeError, EXIT_NO_PAIR),
    (InterpolationDegreeError, EXIT_DEGREE),
    (PoleInIntervalError, EXIT_POLE),
)


@dataclass
class JobConfig:
    input_path: str
    eps: float
    interval: tuple | None = None
    seed: int = 0
    n_samples: int | None = None
    report_path: str | None = None
    plot_path: str | None = None
    csv_path: str | None = None
    mode: str = "numeric"
    grid_n: int = 4096
    plot_samples: int = 400

    def __post_init__(self):
        if self.eps <= 0:
            raise InputContractError("eps must be positive")
        if self.interval is not None and not self.interval[0] < self.interval[1]:
            raise InputContractError("interval must satisfy d1 < d2")


# -- coefficient (de)serialization -------------------------------------------


def _coeff_from_json(value) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, str):
        return complex(float(Fraction(value)))
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise InputContractError(f"cannot read coefficient {value!r}")


def _coeff_to_json(value: complex):
    value = complex(value)
    if value.imag == 0.0:
        return value.real
    return [value.real, value.imag]


def poly_to_json(p: Poly):
    return [_coeff_to_json(c) for c in p.coeffs]


def bipoly_to_json(b: BiPoly):
    return [[_coeff_to_json(c) for c in row] for row in b.coeffs]


def fraction_to_json(rf: RationalFunction):
    return {"num": poly_to_json(rf.num), "den": poly_to_json(rf.den)}


def parametrization_to_json(p: PlaneParametrization):
    return {"x": fraction_to_json(p.x), "y": fraction_to_json(p.y)}


def _fraction_from_json(obj) -> RationalFunction:
    if not isinstance(obj, dict) or "num" not in obj or "den" not in obj:
        raise InputContractError("each component needs 'num' and 'den' lists")
    num = Poly([_coeff_from_json(c) for c in obj["num"]])
    den = Poly([_coeff_from_json(c) for c in obj["den"]])
    if den.is_zero:
        raise InputContractError("zero denominator")
    return RationalFunction(num, den)


def parse_input(path, eps: float) -> PlaneParametrization:
    """Load a parametrization and check both components are reduced at eps."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise InputContractError(f"input file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InputContractError(f"malformed JSON in {path}: {exc}") from exc
    if not isinstance(data, dict) or "x" not in data or "y" not in data:
        raise InputContractError("input must be an object with 'x' and 'y'")
    param = PlaneParametrization(
        _fraction_from_json(data["x"]), _fraction_from_json(data["y"])
    )
    validate_input_contract(param, eps)
    return param


def _parse_exact_component(obj):
    from .exact import ExactRationalFunction

    def to_fraction(value):
        if isinstance(value, (list, tuple)):
            raise InputContractError("exact mode supports real coefficients only")
        return Fraction(str(value)) if not isinstance(value, int) else Fraction(value)

    return ExactRationalFunction.from_coeffs(
        [to_fraction(c) for c in obj["num"]], [to_fraction(c) for c in obj["den"]]
    )


def parse_input_exact(path):
    from .exact import ExactParametrization

    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return ExactParametrization(
        _parse_exact_component(data["x"]), _parse_exact_component(data["y"])
    )


# -- report assembly ----------------------------------------------------------


def _diagnostics_for_report(diag: dict) -> dict:
    out = {k: v for k, v in diag.items() if k != "elapsed_s"}
    if "votes" in out:
        out["votes"] = {str(k): v for k, v in out["votes"].items()}
    return out


def _numeric_result_json(report) -> dict:
    return {
        "ell": report.ell,
        "pair": list(report.pair_choice) if report.pair_choice is not None else None,
        "S": bipoly_to_json(report.S),
        "R": fraction_to_json(report.R),
        "Qtilde": parametrization_to_json(report.Qtilde),
        "Q": parametrization_to_json(report.Q),
        "eps_bar": report.eps_bar,
        "certified_at_request": report.certified_at_request,
        "diagnostics": _diagnostics_for_report(report.diagnostics),
    }


def _error_bound_json(eb) -> dict:
    return {
        "interval": [eb.interval.d1, eb.interval.d2],
        "grid_n": eb.interval.grid_n,
        "d": eb.d,
        "M": eb.M,
        "C": eb.C,
        "norm_p": eb.norm_p,
        "norm_q": eb.norm_q,
        "point_bound": eb.point_bound,
        "offset_bound": eb.offset_bound,
        "empirical_max": eb.empirical_max,
        "eps_used": eb.eps_used,
        "ell": eb.ell,
        "deg_p": eb.deg_p,
    }


def _ratpoly_to_json(rp):
    return [str(c) for c in rp.coeffs]


def _exact_result_json(result, index: int) -> dict:
    return {
        "index": index,
        "pair": list(result.pair) if result.pair is not None else None,
        "Q": {
            "x": {"num": _ratpoly_to_json(result.Q.x.num), "den": _ratpoly_to_json(result.Q.x.den)},
            "y": {"num": _ratpoly_to_json(result.Q.y.num), "den": _ratpoly_to_json(result.Q.y.den)},
        },
        "R": {"num": _ratpoly_to_json(result.R.num), "den": _ratpoly_to_json(result.R.den)},
    }


def _write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


# -- plot and CSV -------------------------------------------------------------


def _curve_samples(P, Q, R, interval, count):
    ts = np.linspace(interval[0], interval[1], count)
    px, py = P(ts)
    r_values = R(ts)
    qx, qy = Q.x(r_values), Q.y(r_values)
    return ts, px, py, qx, qy


def write_csv(path, samples) -> None:
    ts, px, py, qx, qy = samples
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)  # csv defaults to CRLF line endings
        writer.writerow(["t", "p_x", "p_y", "q_x", "q_y"])
        for row in zip(ts, px, py, qx, qy):
            writer.writerow([repr(float(np.real(v))) for v in row])


def write_plot(path, samples) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "reparcurve"
    ts, px, py, qx, qy = samples
    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    ax.plot(np.real(px), np.real(py), "-", color="tab:blue", label="input curve")
    ax.plot(np.real(qx), np.real(qy), "--", color="tab:red", label="reparametrized")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.legend(loc="best")
    ax.set_title(f"t in [{ts[0]:.3g}, {ts[-1]:.3g}]")
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


# -- job runner ---------------------------------------------------------------


def _exit_code_for(error: Exception) -> int:
    for klass, code in _EXIT_BY_ERROR:
        if isinstance(error, klass):
            return code
    return EXIT_FAILURE


def run_job(cfg: JobConfig) -> int:
    """Execute one job; always writes the report when a path is configured."""
    report_obj = {
        "schema": "reparcurve-report/1",
        "eps": cfg.eps,
        "seed": cfg.seed,
        "n_samples": cfg.n_samples,
        "mode": cfg.mode,
        "input_path": str(cfg.input_path),
        "status": "error",
        "stage": None,
        "message": "",
    }
    try:
        if cfg.mode == "exact":
            from . import exact

            param = parse_input_exact(cfg.input_path)
            result = exact.exact_reparametrize(param)
            index = exact.tracing_index(param)
            report_obj["result"] = _exact_result_json(result, index)
            report_obj["status"] = "ok"
            report_obj["message"] = (
                "input is proper; returned unchanged"
                if index == 1
                else f"exact proper reparametrization found (index {index})"
            )
        else:
            param = parse_input(cfg.input_path, cfg.eps)
            report = reparametrize(param, cfg.eps, seed=cfg.seed, n_samples=cfg.n_samples)
            report_obj["result"] = _numeric_result_json(report)
            report_obj["status"] = "ok"
            report_obj["message"] = report.message
            if cfg.interval is not None:
                spec = IntervalSpec(cfg.interval[0], cfg.interval[1], cfg.grid_n)
                eb = error_bound_report(
                    param, report.Q, report.R, spec, eps_used=max(cfg.eps, report.eps_bar)
                )
                report_obj["error_bound"] = _error_bound_json(eb)
                samples = _curve_samples(
                    param, report.Q, report.R, cfg.interval, cfg.plot_samples
                )
                if cfg.csv_path:
                    write_csv(cfg.csv_path, samples)
                if cfg.plot_path:
                    write_plot(cfg.plot_path, samples)
    except ReparcurveError as error:
        report_obj["stage"] = error.stage
        report_obj["message"] = str(error)
        if cfg.report_path:
            _write_json(cfg.report_path, report_obj)
        print(f"error[{error.stage}]: {error}", file=sys.stderr)
        return _exit_code_for(error)
    except ValueError as error:
        report_obj["stage"] = "validate"
        report_obj["message"] = str(error)
        if cfg.report_path:
            _write_json(cfg.report_path, report_obj)
        print(f"error[validate]: {error}", file=sys.stderr)
        return EXIT_FAILURE

    if cfg.report_path:
        _write_json(cfg.report_path, report_obj)
    print(report_obj["message"])
    return EXIT_OK


def _parse_interval(text: str):
    try:
        d1, d2 = text.split(":")
        return (float(d1), float(d2))
    except ValueError as exc:
        raise argparse.ArgumentTypeError("interval must look like d1:d2") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reparcurve",
        description=(
            "Detect whether a rational plane-curve parametrization retraces its "
            "curve within a tolerance, and rewrite it as a proper Q composed "
            "with an inner rational map R."
        ),
    )
    parser.add_argument("input", help="path to the JSON curve description")
    parser.add_argument("--eps", type=float, required=True, help="tolerance (> 0)")
    parser.add_argument(
        "--interval",
        type=_parse_interval,
        default=None,
        metavar="D1:D2",
        help="real interval for the closeness certificate and plots",
    )
    parser.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")
    parser.add_argument(
        "--samples", type=int, default=None, help="override the specialization count"
    )
    parser.add_argument(
        "--exact", action="store_true", help="run the exact-rational algorithm instead"
    )
    parser.add_argument("--report", default=None, metavar="OUT.json", help="report path")
    parser.add_argument("--plot", default=None, metavar="OUT.svg", help="overlay figure path")
    parser.add_argument("--csv", default=None, metavar="OUT.csv", help="sample table path")
    parser.add_argument(
        "--grid", type=int, default=4096, help="grid density for the bound constants"
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = JobConfig(
            input_path=args.input,
            eps=args.eps,
            interval=args.interval,
            seed=args.seed,
            n_samples=args.samples,
            report_path=args.report,
            plot_path=args.plot,
            csv_path=args.csv,
            mode="exact" if args.exact else "numeric",
            grid_n=args.grid,
        )
    except InputContractError as error:
        print(f"error[parse]: {error}", file=sys.stderr)
        return EXIT_PARSE
    return run_job(cfg)


if __name__ == "__main__":
    raise SystemExit(main())
