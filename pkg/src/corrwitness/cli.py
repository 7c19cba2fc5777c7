"""Command-line entry point.

    corrwitness run --config scenario.json --out result.csv [--format csv|json]
    corrwitness suite {metric,contraction,witness-soundness,paper-examples} [--seed N] [--cases N]

Exit codes: 0 success, 1 failed suite check, 2 invalid config,
3 numerical failure.
"""

import argparse
import io
import json
import math
import sys

import numpy as np

from . import models
from .dynamics import Evolution, TimeGrid
from .errors import (
    BoundViolation,
    ConvergenceFailure,
    CorrWitnessError,
    DimensionTooLarge,
    NotHermitian,
)
from .states import BipartiteState, DensityMatrix
from .suites import SUITES
from .witness import WITNESS_TOL, WitnessReport, analyze

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_BAD_CONFIG = 2
EXIT_NUMERICAL = 3

MODELS = models.SCENARIOS + ("custom",)
# loose enough for amplitudes written with ~10 decimals; they are renormalized
AMPLITUDE_NORM_TOL = 1e-6
CSV_COLUMNS = ("t", "D", "sigma", "d0", "i_bound", "eq6_bound", "witness_flag")
NUMERICAL_ERRORS = (NotHermitian, BoundViolation, DimensionTooLarge, ConvergenceFailure)


class ConfigError(ValueError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def _number(cfg: dict, key: str, default=None, kind=float):
    if key not in cfg:
        if default is None:
            raise ConfigError(key, "required field is missing")
        return default
    val = cfg[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(key, f"expected a number, got {val!r}")
    if kind is int and int(val) != val:
        raise ConfigError(key, f"expected an integer, got {val!r}")
    if not math.isfinite(val):
        raise ConfigError(key, "must be finite")
    return kind(val)


def _complex(cfg: dict, key: str) -> complex:
    val = cfg.get(key)
    if val is None:
        raise ConfigError(key, "required field is missing")
    if (
        not isinstance(val, list)
        or len(val) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in val)
    ):
        raise ConfigError(key, f"expected [re, im], got {val!r}")
    return complex(val[0], val[1])


def _amplitudes(cfg: dict) -> tuple[complex, complex]:
    a, b = _complex(cfg, "alpha"), _complex(cfg, "beta")
    norm = abs(a) ** 2 + abs(b) ** 2
    if abs(norm - 1.0) > AMPLITUDE_NORM_TOL:
        raise ConfigError("alpha/beta", f"normalization |alpha|^2 + |beta|^2 = {norm:.12g}, must be 1")
    if a == 0 or b == 0:
        raise ConfigError("alpha/beta", "alpha and beta must both be nonzero")
    scale = 1.0 / math.sqrt(norm)
    return a * scale, b * scale


def parse_matrix(value, field: str) -> np.ndarray:
    """Accept ``{"re": [[...]], "im": [[...]]}``, nested ``[re, im]`` pairs, or real nested lists."""
    try:
        if isinstance(value, dict):
            if set(value) - {"re", "im"} or "re" not in value:
                raise ConfigError(field, "matrix object needs 're' and optionally 'im'")
            re = np.asarray(value["re"], dtype=float)
            im = np.asarray(value.get("im", np.zeros_like(re)), dtype=float)
            if re.shape != im.shape:
                raise ConfigError(field, "'re' and 'im' shapes differ")
            m = re + 1j * im
        else:
            arr = np.asarray(value, dtype=float)
            if arr.ndim == 3 and arr.shape[2] == 2:
                m = arr[..., 0] + 1j * arr[..., 1]
            else:
                m = arr.astype(complex)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(field, f"not a numeric matrix ({exc})") from None
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ConfigError(field, f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ConfigError(field, "matrix has non-finite entries")
    return m


def _grid(cfg: dict, default: TimeGrid | None) -> TimeGrid | None:
    if "grid" not in cfg:
        return default
    g = cfg["grid"]
    if not isinstance(g, dict):
        raise ConfigError("grid", "expected an object with t_end and steps")
    t_end = _number(g, "t_end")
    steps = _number(g, "steps", 200, int)
    t_start = _number(g, "t_start", 0.0)
    try:
        return TimeGrid(t_end=t_end, steps=steps, t_start=t_start)
    except ValueError as exc:
        raise ConfigError("grid", str(exc)) from None


def _custom(cfg: dict):
    c = cfg.get("custom")
    if not isinstance(c, dict):
        raise ConfigError("custom", "model 'custom' needs a 'custom' object")
    dim_s = _number(c, "dim_s", kind=int)
    dim_e = _number(c, "dim_e", kind=int)
    if dim_s < 1 or dim_e < 1:
        raise ConfigError("custom.dim_s/dim_e", "dimensions must be positive")
    if ("hamiltonian" in c) == ("gate" in c):
        raise ConfigError("custom", "give exactly one of 'hamiltonian' or 'gate'")
    states = []
    for key in ("rho1", "rho2"):
        if key not in c:
            raise ConfigError(f"custom.{key}", "required field is missing")
        m = parse_matrix(c[key], f"custom.{key}")
        if m.shape[0] != dim_s * dim_e:
            raise ConfigError(f"custom.{key}", f"dimension {m.shape[0]} != dim_s*dim_e = {dim_s * dim_e}")
        try:
            states.append(BipartiteState(DensityMatrix(m), dim_s, dim_e))
        except NotHermitian:
            raise
        except CorrWitnessError as exc:
            raise ConfigError(f"custom.{key}", str(exc)) from None
    if "gate" in c:
        u = parse_matrix(c["gate"], "custom.gate")
        try:
            ev = Evolution.from_gate(u)
        except ValueError as exc:
            if isinstance(exc, CorrWitnessError):
                raise
            raise ConfigError("custom.gate", str(exc)) from None
    else:
        h = parse_matrix(c["hamiltonian"], "custom.hamiltonian")
        hbar = _number(cfg, "hbar", 1.0)
        if hbar <= 0:
            raise ConfigError("hbar", "must be positive")
        ev = Evolution.from_hamiltonian(h, hbar=hbar)
    if ev.dim != dim_s * dim_e:
        raise ConfigError("custom", "evolution and state dimensions differ")
    return states[0], states[1], ev


def build_scenario(cfg: dict):
    """Turn a config mapping into ``(rho1, rho2, evolution, grid, tol)``."""
    if not isinstance(cfg, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    model = cfg.get("model")
    if model not in MODELS:
        raise ConfigError("model", f"expected one of {', '.join(MODELS)}, got {model!r}")
    tol = _number(cfg, "tolerance", WITNESS_TOL)
    if tol <= 0:
        raise ConfigError("tolerance", "must be positive")
    swap = cfg.get("apply_swap")
    if swap is not None and not isinstance(swap, bool):
        raise ConfigError("apply_swap", "expected true or false")

    if model == "custom":
        rho1, rho2, ev = _custom(cfg)
        grid = _grid(cfg, None)
        if grid is None and not ev.is_gate:
            raise ConfigError("grid", "a Hamiltonian scenario needs a grid")
        return rho1, rho2, ev, grid, tol

    alpha, beta = _amplitudes(cfg)
    if model == "spin-bath":
        n_bath = _number(cfg, "n_bath", kind=int)
        if not 1 <= n_bath <= models.MAX_BATH:
            raise ConfigError("n_bath", f"must be between 1 and {models.MAX_BATH}")
        a0 = _number(cfg, "a0", 1.0)
        if a0 == 0:
            raise ConfigError("a0", "coupling must be nonzero")
        sc = models.SpinBathScenario(n_bath=n_bath, alpha=alpha, beta=beta, a0=a0)
        rho1, rho2, ev = models.spin_bath_pair(sc)
        return rho1, rho2, ev, _grid(cfg, sc.default_grid()), tol

    default_swap = model == "cnot-swap"
    sc = models.CnotScenario(alpha, beta, apply_swap=default_swap if swap is None else swap)
    if model == "cnot":
        rho1, rho2, ev = models.cnot_pair(sc)
    else:
        rho1, rho2, ev = models.cnot_classical_pair(sc)
    return rho1, rho2, ev, None, tol


def _g(x: float) -> str:
    return format(float(x), ".17g")


def report_csv(report: WitnessReport) -> str:
    b = report.bounds
    traj = report.trajectory
    flags = report.firing_flags()
    buf = io.StringIO()
    buf.write(",".join(CSV_COLUMNS) + "\n")
    for t, d, s, f in zip(traj.times, traj.d_values, traj.sigma_values, flags):
        row = [_g(t), _g(d), _g(s), _g(b.d0), _g(b.i_bound), _g(b.triangle_bound), str(int(f))]
        buf.write(",".join(row) + "\n")
    return buf.getvalue()


def _finite_or_none(x):
    x = float(x)
    return x if math.isfinite(x) else None


def report_dict(report: WitnessReport, model: str = "") -> dict:
    traj = report.trajectory
    out = {"model": model}
    out.update(report.bounds.as_dict())
    out.update(
        max_increase=report.max_increase,
        witness_fired=report.witness_fired,
        first_firing_time=report.first_firing_time,
        bound_saturated=report.bound_saturated,
        tolerance=report.tol,
        series={
            "t": [float(t) for t in traj.times],
            "D": [float(d) for d in traj.d_values],
            "sigma": [_finite_or_none(s) for s in traj.sigma_values],
        },
    )
    return out


def run(config_path: str, out_path: str, fmt: str | None = None) -> int:
    try:
        with open(config_path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except json.JSONDecodeError as exc:
        print(f"error: config is not valid JSON: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    if fmt is None:
        fmt = "json" if out_path.endswith(".json") else "csv"
    try:
        rho1, rho2, ev, grid, tol = build_scenario(cfg)
        report = analyze(rho1, rho2, ev, grid, tol=tol)
    except ConfigError as exc:
        print(f"error: invalid config: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except NUMERICAL_ERRORS as exc:
        print(f"error: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except CorrWitnessError as exc:
        print(f"error: invalid config: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG

    if fmt == "csv":
        text = report_csv(report)
    else:
        text = json.dumps(report_dict(report, cfg["model"]), indent=2, allow_nan=False) + "\n"
    if out_path == "-":
        sys.stdout.write(text)
    else:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    return EXIT_OK


def suite(name: str, seed: int = 42, cases: int | None = None) -> int:
    kwargs = {"seed": seed}
    if cases is not None:
        kwargs["cases"] = cases
    checks = SUITES[name](**kwargs)
    for c in checks:
        print(c.line())
    failed = sum(not c.passed for c in checks)
    print(f"{name}: {len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corrwitness",
        description="Trace-distance dynamics and initial-correlation witness for open quantum systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="analyze one scenario described by a JSON config")
    p_run.add_argument("--config", required=True, help="scenario JSON file")
    p_run.add_argument("--out", required=True, help="output file, or - for stdout")
    p_run.add_argument("--format", choices=("csv", "json"), default=None,
                       help="output format (default: from the --out suffix, else csv)")

    p_suite = sub.add_parser("suite", help="run a randomized verification suite")
    p_suite.add_argument("name", choices=sorted(SUITES))
    p_suite.add_argument("--seed", type=int, default=42)
    p_suite.add_argument("--cases", type=int, default=None, help="number of random cases")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return run(args.config, args.out, args.format)
    return suite(args.name, args.seed, args.cases)


if __name__ == "__main__":
    sys.exit(main())
