"""Command-line front end.

Subcommands
-----------
solve     lowest levels of one l-channel (optionally a density table)
sweep     levels versus one potential parameter
critical  critical screening constant of a Hulthen/Yukawa state
validate  re-run the built-in reference registry
classify  small-r singularity class of a potential

Exit codes: 0 success, 1 validation failure, 2 configuration error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from . import analysis
from .discretization import Convention
from .mapping import DEFAULT_ALPHA, DEFAULT_N, DEFAULT_RMAX, GridSpec
from .observables import radial_density
from .potentials import classify, from_dict

log = logging.getLogger(__name__)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3
COMMANDS = ("solve", "sweep", "critical", "validate", "classify")
CONVENTIONS = {"half": 0.5, "full": 1.0}
REGISTRY = "reference_values.json"


class ConfigError(ValueError):
    """Invalid run configuration (exit code 2)."""


class OutputError(OSError):
    """A file could not be read or written (exit code 3)."""


# ---------------------------------------------------------------------------
# configuration

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "command": {"enum": list(COMMANDS)},
        "potential": {"type": "object"},
        "l": {"type": "integer", "minimum": 0},
        "n_states": {"type": "integer", "minimum": 1},
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "N": {"type": "integer", "minimum": 8},
                "r_max": {"type": "number", "exclusiveMinimum": 0},
                "alpha": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "convention": {"enum": list(CONVENTIONS)},
        "report_scale": {"type": "number", "exclusiveMinimum": 0},
        "format": {"enum": ["csv", "json"]},
        "out": {"type": "string"},
        "density": {"type": "boolean"},
        "state": {"type": "integer", "minimum": 0},
        "param": {"type": "string"},
        "values": {"type": "array", "items": {"type": "number"}, "minItems": 1},
        "ls": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1},
        "family": {"enum": ["hulthen", "yukawa"]},
        "n_r": {"type": "integer", "minimum": 0},
        "bracket": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
        "tol": {"type": "number", "exclusiveMinimum": 0},
        "Z": {"type": "number", "exclusiveMinimum": 0},
        "suites": {"type": "array", "items": {"type": "string"}},
    },
}


@dataclass
class RunConfig:
    command: str
    potential: object = None
    l: int = 0
    n_states: int = 5
    grid: GridSpec = field(default_factory=GridSpec)
    convention: Convention = field(default_factory=Convention)
    format: str = "csv"
    out: str | None = None
    density: bool = False
    state: int = 0
    param: str | None = None
    values: tuple = ()
    ls: tuple | None = None
    family: str | None = None
    n_r: int = 0
    bracket: tuple | None = None
    tol: float = 1e-6
    Z: float = 1.0
    suites: tuple = ()


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _ints(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _range(text):
    try:
        start, stop, num = text.split(":")
        return list(np.linspace(float(start), float(stop), int(num)))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected start:stop:count, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON run configuration; flags override it")
    common.add_argument("--potential", help='potential JSON, or @file containing it')
    common.add_argument("--l", type=int)
    common.add_argument("--n-states", dest="n_states", type=int)
    common.add_argument("--rmax", type=float)
    common.add_argument("--alpha", type=float)
    common.add_argument("--N", type=int)
    common.add_argument("--convention", choices=list(CONVENTIONS))
    common.add_argument("--report-scale", dest="report_scale", type=float)
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="gps-spectra", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", parents=[common], help="solve one l-channel")
    p.add_argument("--density", action="store_true", help="emit (r, u^2) at the grid nodes")
    p.add_argument("--state", type=int, help="state index for --density (default 0)")

    p = sub.add_parser("sweep", parents=[common], help="sweep a potential parameter")
    p.add_argument("--param", help="parameter name, e.g. lam or params.lam")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--values", type=_floats, help="comma-separated values")
    g.add_argument("--range", dest="values", type=_range, help="start:stop:count")
    p.add_argument("--ls", type=_ints, help="comma-separated l values (default: --l)")

    p = sub.add_parser("critical", parents=[common], help="critical screening constant")
    p.add_argument("--family", choices=["hulthen", "yukawa"])
    p.add_argument("--n-r", dest="n_r", type=int)
    p.add_argument("--bracket", type=_floats, help="lo,hi")
    p.add_argument("--tol", type=float)
    p.add_argument("--Z", type=float)

    p = sub.add_parser("validate", parents=[common], help="run the reference registry")
    p.add_argument("--suite", dest="suites", action="append",
                   help="suite name (repeatable; default: all)")

    sub.add_parser("classify", parents=[common], help="singularity class of a potential")
    return parser


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise OutputError(f"cannot read {path}: {exc}") from exc


def _potential_json(text: str):
    """Decode ``--potential``: inline JSON or ``@path`` to a JSON file."""
    if text.startswith("@"):
        text = _read_text(text[1:])
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"potential: invalid JSON ({exc})") from exc


def parse_config(argv=None) -> RunConfig:
    """Parse flags (and an optional ``--config`` JSON file) into a RunConfig.

    Raises
    ------
    ConfigError
        On any schema or value problem; the message names the field.
    """
    args = build_parser().parse_args(argv)
    data = {}
    if args.config:
        try:
            data = json.loads(_read_text(args.config))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: invalid JSON ({exc})") from exc
    flags = {k: v for k, v in vars(args).items()
             if v is not None and k not in ("config", "verbose", "command", "rmax", "alpha", "N")
             and not (k == "density" and v is False)}
    data.update(flags)
    grid = dict(data.get("grid", {}))
    for flag, key in (("N", "N"), ("rmax", "r_max"), ("alpha", "alpha")):
        if getattr(args, flag) is not None:
            grid[key] = getattr(args, flag)
    if grid:
        data["grid"] = grid
    if isinstance(data.get("potential"), str):
        data["potential"] = _potential_json(data["potential"])
    data.setdefault("command", args.command)
    if data["command"] != args.command:
        raise ConfigError(f"command: config says {data['command']!r} but {args.command!r} was invoked")
    for key in ("values", "bracket", "ls", "suites"):
        if key in data and not isinstance(data[key], list):
            data[key] = list(data[key])

    try:
        jsonschema.validate(data, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = ".".join(str(p) for p in exc.absolute_path) or "config"
        raise ConfigError(f"{where}: {exc.message}") from exc

    cmd = data["command"]
    try:
        grid_spec = GridSpec(N=data.get("grid", {}).get("N", DEFAULT_N),
                             r_max=float(data.get("grid", {}).get("r_max", DEFAULT_RMAX)),
                             alpha=float(data.get("grid", {}).get("alpha", DEFAULT_ALPHA)))
        conv = Convention(CONVENTIONS[data.get("convention", "half")],
                          float(data.get("report_scale", 1.0)))
    except ValueError as exc:
        raise ConfigError(f"grid/convention: {exc}") from exc

    cfg = RunConfig(command=cmd, grid=grid_spec, convention=conv,
                    format=data.get("format", "csv"), out=data.get("out"))
    for key in ("l", "n_states", "density", "state", "param", "family", "n_r", "tol", "Z"):
        if key in data:
            setattr(cfg, key, data[key])
    for key in ("values", "ls", "bracket", "suites"):
        if key in data:
            setattr(cfg, key, tuple(data[key]))

    if cmd in ("solve", "sweep", "classify"):
        if "potential" not in data:
            raise ConfigError("potential: required for " + cmd)
        try:
            cfg.potential = from_dict(data["potential"])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"potential: {exc}") from exc
    if cmd == "sweep":
        if not cfg.param:
            raise ConfigError("param: required for sweep")
        if not cfg.values:
            raise ConfigError("values: required for sweep (--values or --range)")
    if cmd == "critical":
        if cfg.family is None:
            raise ConfigError("family: required for critical")
        if cfg.bracket is None:
            raise ConfigError("bracket: required for critical (lo,hi)")
    if cmd == "solve" and cfg.density and cfg.state >= cfg.n_states:
        raise ConfigError(f"state: {cfg.state} is not among the {cfg.n_states} requested states")
    if cfg.n_states > cfg.grid.N - 1:
        raise ConfigError(f"n_states: must be <= N-1 = {cfg.grid.N - 1}")
    return cfg


# ---------------------------------------------------------------------------
# validation

@dataclass(frozen=True)
class CaseResult:
    suite: str
    label: str
    expected: float
    computed: float
    abs_error: float
    rel_error: float
    tolerance: float
    tolerance_kind: str
    provenance: str
    passed: bool


@dataclass(frozen=True)
class ValidationReport:
    cases: tuple[CaseResult, ...]

    @property
    def n_passed(self) -> int:
        return sum(c.passed for c in self.cases)

    @property
    def n_failed(self) -> int:
        return len(self.cases) - self.n_passed

    @property
    def all_passed(self) -> bool:
        return self.n_failed == 0

    def summary(self) -> str:
        return f"{self.n_passed}/{len(self.cases)} cases passed"


def load_registry() -> dict:
    text = resources.files("gps_spectra").joinpath("data", REGISTRY).read_text()
    return json.loads(text)["suites"]


def run_validate(suites=None) -> ValidationReport:
    """Run registered cases; a case fails iff its error exceeds its tolerance."""
    registry = load_registry()
    names = list(registry) if not suites or "all" in suites else list(suites)
    unknown = [s for s in names if s not in registry]
    if unknown:
        raise ConfigError(f"suites: unknown {unknown}; available {sorted(registry)}")
    out = []
    for suite in names:
        for case in registry[suite]:
            conv = Convention(case["convention"]["c"], case["convention"]["s"])
            computed = analysis.lowest_energy(
                from_dict(case["potential"]), l=case["l"], n_r=case["n_r"],
                grid=GridSpec(**case["grid"]), convention=conv)
            expected = case["expected"]
            abs_err = abs(computed - expected)
            rel_err = abs_err / abs(expected) if expected else float("inf")
            err = rel_err if case["tolerance_kind"] == "rel" else abs_err
            out.append(CaseResult(suite, case["label"], expected, computed, abs_err, rel_err,
                                  case["tolerance"], case["tolerance_kind"],
                                  case["provenance"], bool(err <= case["tolerance"])))
    return ValidationReport(tuple(out))


# ---------------------------------------------------------------------------
# output

def _g(v) -> str:
    return format(float(v), ".12g")


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_g(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


@dataclass(frozen=True)
class DensityTable:
    """Node-sampled (r, u^2) of one state."""

    l: int
    n_r: int
    energy: float
    rows: tuple


@dataclass(frozen=True)
class Classification:
    potential: object
    singularity: str


def render(result, fmt: str = "csv") -> str:
    """Serialize any CLI result to CSV or JSON text."""
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown format {fmt!r}")
    if isinstance(result, analysis.SpectrumResult):
        req = result.request
        if fmt == "json":
            obj = {"energies": [float(e) for e in result.energies],
                   "convention": req.convention.to_dict(),
                   "grid": req.grid.to_dict(),
                   "potential": req.potential.to_dict(),
                   "l": req.l,
                   "states": [{"n_r": k, "nodes": st.node_count, "energy": float(st.energy),
                               "residual": float(result.residuals[k])}
                              for k, st in enumerate(result.states)]}
            return json.dumps(obj, indent=2) + "\n"
        rows = [(k, req.l, analysis.spectroscopic_label(k, req.l), float(e))
                for k, e in enumerate(result.energies)]
        return _csv(["n_r", "l", "label", "energy"], rows)
    if isinstance(result, analysis.SweepResult):
        cols = [f"E_{i + 1}" for i in range(len(result.labels))]
        if fmt == "json":
            obj = {"parameter": result.parameter,
                   "values": [float(v) for v in result.values],
                   "labels": [{"column": c, "n_r": n_r, "l": l}
                              for c, (n_r, l) in zip(cols, result.labels)],
                   "energies": [[float(e) for e in row] for row in result.energies]}
            return json.dumps(obj, indent=2) + "\n"
        rows = [(float(v), *map(float, row)) for v, row in zip(result.values, result.energies)]
        return _csv([result.parameter, *cols], rows)
    if isinstance(result, analysis.CriticalScreeningResult):
        d = result.to_dict()
        if fmt == "json":
            return json.dumps(d, indent=2) + "\n"
        return _csv(list(d), [[d[k] if isinstance(d[k], (str, int)) else float(d[k]) for k in d]])
    if isinstance(result, ValidationReport):
        if fmt == "json":
            obj = {"passed": result.n_passed, "failed": result.n_failed,
                   "cases": [c.__dict__ for c in result.cases]}
            return json.dumps(obj, indent=2) + "\n"
        rows = [(c.suite, c.label, float(c.expected), float(c.computed), float(c.abs_error),
                 float(c.tolerance), c.tolerance_kind, c.provenance, "pass" if c.passed else "FAIL")
                for c in result.cases]
        return _csv(["suite", "label", "expected", "computed", "abs_error", "tolerance",
                     "kind", "provenance", "status"], rows)
    if isinstance(result, DensityTable):
        if fmt == "json":
            obj = {"l": result.l, "n_r": result.n_r, "energy": result.energy,
                   "r": [r for r, _ in result.rows], "u2": [u for _, u in result.rows]}
            return json.dumps(obj, indent=2) + "\n"
        return _csv(["r", "u2"], [(float(r), float(u)) for r, u in result.rows])
    if isinstance(result, Classification):
        if fmt == "json":
            return json.dumps({"potential": result.potential.to_dict(),
                               "class": result.singularity}, indent=2) + "\n"
        return _csv(["family", "class"], [(result.potential.family, result.singularity)])
    raise TypeError(f"cannot render {type(result).__name__}")


def emit_output(result, fmt: str = "csv", path=None, stream=None) -> str:
    """Render ``result`` and write it to ``path`` (or ``stream``/stdout)."""
    text = render(result, fmt)
    if path is None:
        (stream or sys.stdout).write(text)
        return text
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc
    return text


# ---------------------------------------------------------------------------
# execution

def execute(cfg: RunConfig):
    """Run a parsed configuration and return its result object."""
    if cfg.command == "classify":
        return Classification(cfg.potential, classify(cfg.potential).value)
    if cfg.command == "validate":
        return run_validate(cfg.suites)
    if cfg.command == "critical":
        return analysis.critical_screening(cfg.family, (cfg.n_r, cfg.l), tuple(cfg.bracket),
                                           tol=cfg.tol, Z=cfg.Z, convention=cfg.convention)
    req = analysis.SpectrumRequest(cfg.potential, l=cfg.l, n_states=cfg.n_states,
                                   grid=cfg.grid, convention=cfg.convention)
    if cfg.command == "sweep":
        return analysis.parameter_sweep(req, cfg.param, cfg.values,
                                        ls=list(cfg.ls) if cfg.ls else None)
    res = analysis.solve_spectrum(req)
    if cfg.density:
        st = res.states[cfg.state]
        rows = tuple((float(r), float(u * u)) for r, u in zip(st.r, st.u))
        return DensityTable(cfg.l, cfg.state, float(res.energies[cfg.state]), rows)
    return res


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    verbose = "-v" in argv or "--verbose" in argv
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = parse_config(argv)
        result = execute(cfg)
        emit_output(result, cfg.format, cfg.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OutputError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, analysis.SweepError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if isinstance(result, ValidationReport):
        print(result.summary(), file=sys.stderr)
        return EXIT_OK if result.all_passed else EXIT_FAIL
    return EXIT_OK


def density_at(cfg: RunConfig, radii):
    """(r, u^2) pairs for ``cfg``'s state at arbitrary radii (library helper)."""
    req = analysis.SpectrumRequest(cfg.potential, l=cfg.l, n_states=cfg.n_states,
                                   grid=cfg.grid, convention=cfg.convention)
    return radial_density(analysis.solve_spectrum(req).states[cfg.state], radii)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
