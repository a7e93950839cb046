"""Command-line front end: survival-probability tables, concurrence traces,
(t, alpha^2) surfaces, Markovian comparisons, and the validation suite.

Output is deterministic CSV: a comment header recording the resolved
configuration, a column-name row, then 12-significant-digit values. Exit
codes: 0 success, 1 validation failure, 2 config error, 3 I/O error.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from ._accel import backend_name
from .concurrence import (build_trace, concurrence, concurrence_phi,
                          concurrence_phi_signed, concurrence_psi,
                          concurrence_psi_signed)
from .errors import ConfigError, RegimeError, ValidationError
from .memory import METHODS, MemoryFunction, ReservoirSpec, p_closed, p_markov, p_volterra
from .pair_dynamics import evolve_elements, x_state_from_density
from .selfcheck import run_and_format
from .states import DensityMatrix, make_phi, make_psi, make_werner, pure_to_density, validate_density

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_IO = 3

FAMILIES = ("phi", "psi", "werner")
_STATE_FILE_TOL = 1e-9

_DEFAULTS = {
    "family": "phi",
    "alpha2": "0.5",
    "delta": "0.0",
    "lambda": "0.1",
    "lambda_markov": "5.0",
    "method": "closed_form",
    "tmax": "20.0",
    "samples": "2001",
    "step": "1e-3",
    "seed": "20070901",
    "tol_factor": "1.0",
    "out": "",
    "emit_gnuplot": "0",
}
_SURFACE_ALPHA2_DEFAULT = "0:1:201"


def _fmt(x):
    return f"{float(x):.11e}"


# ---------------------------------------------------------------------------
# configuration handling


def parse_config_file(path):
    """Flat ``key = value`` file; '#' starts a comment, unknown keys error."""
    text = Path(path).read_text()
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _DEFAULTS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        entries[key] = value
    return entries


def _resolve(args):
    """defaults < config file < explicit flags; all values kept as strings
    until typed accessors parse them."""
    cfg = dict(_DEFAULTS)
    if args.command == "surface":
        cfg["alpha2"] = _SURFACE_ALPHA2_DEFAULT
    if getattr(args, "config", None):
        cfg.update(parse_config_file(args.config))
    for key in cfg:
        flag = getattr(args, key, None)
        if flag is not None:
            cfg[key] = str(flag)
    cfg["command"] = args.command
    return cfg


def _as_float(cfg, key, positive=False):
    try:
        value = float(cfg[key])
    except ValueError:
        raise ConfigError(f"{key} must be a number, got {cfg[key]!r}") from None
    if positive and value <= 0:
        raise ConfigError(f"{key} must be positive, got {value}")
    return value


def _as_int(cfg, key, minimum=None):
    try:
        value = int(cfg[key])
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {cfg[key]!r}") from None
    if minimum is not None and value < minimum:
        raise ConfigError(f"{key} must be >= {minimum}, got {value}")
    return value


def _as_bool(cfg, key):
    value = cfg[key].strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off", ""):
        return False
    raise ConfigError(f"{key} must be a boolean, got {cfg[key]!r}")


def _alpha2_scalar(cfg):
    if ":" in cfg["alpha2"]:
        raise ConfigError(f"{cfg['command']} needs a single alpha2 value, got sweep {cfg['alpha2']!r}")
    value = _as_float(cfg, "alpha2")
    if not 0.0 <= value <= 1.0:
        raise ConfigError(f"alpha2 must lie in [0, 1], got {value}")
    return value


def _alpha2_sweep(cfg):
    spec = cfg["alpha2"]
    if ":" not in spec:
        raise ConfigError(f"surface needs an alpha2 sweep 'start:stop:count', got {spec!r}")
    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError(f"sweep must be 'start:stop:count', got {spec!r}")
    try:
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError:
        raise ConfigError(f"bad sweep {spec!r}") from None
    if count < 2 or not (0.0 <= start < stop <= 1.0):
        raise ConfigError(f"sweep must satisfy 0 <= start < stop <= 1 and count >= 2, got {spec!r}")
    return np.linspace(start, stop, count)


def _method(cfg):
    method = cfg["method"]
    if method not in METHODS:
        raise ConfigError(f"unknown method {method!r}; choose from {METHODS}")
    return method


def _time_grid(cfg):
    tmax = _as_float(cfg, "tmax", positive=True)
    samples = _as_int(cfg, "samples", minimum=2)
    return np.linspace(0.0, tmax, samples), tmax, samples


def _load_state_file(path):
    """4x4 complex matrix as 16 're im' lines, row-major, excited-first
    ordering. Gated at 1e-9, then hermitized and trace-normalized before the
    strict density-matrix invariants apply."""
    try:
        text = Path(path).read_text()
    except FileNotFoundError:
        raise ConfigError(f"state file {path!r} does not exist") from None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ConfigError(f"{path}:{lineno}: expected 're im', got {raw!r}")
        try:
            rows.append(complex(float(parts[0]), float(parts[1])))
        except ValueError:
            raise ConfigError(f"{path}:{lineno}: bad number in {raw!r}") from None
    if len(rows) != 16:
        raise ConfigError(f"{path}: expected 16 matrix entries, got {len(rows)}")
    m = np.array(rows, dtype=np.complex128).reshape(4, 4)
    report = validate_density(m)
    if not report.ok(_STATE_FILE_TOL):
        raise ConfigError(
            f"{path}: not a physical state within {_STATE_FILE_TOL:g} "
            f"(trace dev {report.trace_deviation:.2e}, hermiticity dev "
            f"{report.hermiticity_deviation:.2e}, min eigenvalue {report.min_eigenvalue:.2e})")
    m = 0.5 * (m + m.conj().T)
    m /= np.trace(m).real
    return DensityMatrix(m)


def _initial_state(cfg):
    """Resolve the family field to (label, DensityMatrix)."""
    family = cfg["family"]
    if family == "phi":
        return family, pure_to_density(make_phi(np.sqrt(_alpha2_scalar(cfg)), _as_float(cfg, "delta")))
    if family == "psi":
        return family, pure_to_density(make_psi(np.sqrt(_alpha2_scalar(cfg)), _as_float(cfg, "delta")))
    if family == "werner":
        return family, make_werner(_alpha2_scalar(cfg))
    if Path(family).exists() or "/" in family or family.endswith(".txt"):
        return "custom", _load_state_file(family)
    raise ConfigError(f"family must be one of {FAMILIES} or a matrix-file path, got {family!r}")


def _memory_function(cfg, lam=None, tmax=None):
    lam = _as_float(cfg, "lambda", positive=True) if lam is None else lam
    spec = ReservoirSpec(1.0, lam)
    method = _method(cfg)
    if method.startswith("volterra"):
        if tmax is None:
            tmax = _as_float(cfg, "tmax", positive=True)
        return MemoryFunction(spec, method, t_max=tmax, h=_solver_step(cfg, tmax))
    return MemoryFunction(spec, method)


def _solver_step(cfg, tmax):
    # Closest step to the requested one that tiles the output grid exactly.
    step = _as_float(cfg, "step", positive=True)
    samples = _as_int(cfg, "samples", minimum=2)
    spacing = tmax / (samples - 1)
    return spacing / max(1, int(round(spacing / step)))


# ---------------------------------------------------------------------------
# output


def _config_line(cfg, keys):
    parts = [f"{key}={cfg[key]}" for key in keys]
    return "# config: " + " ".join(parts) + f" backend={backend_name()}"


def _write_output(cfg, header_cols, rows, config_line, footer_lines=()):
    lines = [config_line, ",".join(header_cols)]
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    lines.extend(footer_lines)
    text = "\n".join(lines) + "\n"
    out = cfg["out"]
    if not out:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    if _as_bool(cfg, "emit_gnuplot"):
        if not out:
            raise ConfigError("--emit-gnuplot needs --out")
        _write_gnuplot(cfg, out, header_cols)


def _write_gnuplot(cfg, out, header_cols):
    csv_name = Path(out).name
    script = Path(out).with_suffix(".gp")
    lines = ["# generated companion plot script",
             "set datafile separator ','",
             f"set xlabel '{header_cols[0]}'"]
    if cfg["command"] == "surface":
        samples = _as_int(cfg, "samples", minimum=2)
        count = len(_alpha2_sweep(cfg))
        lines += [f"set ylabel '{header_cols[1]}'",
                  f"set zlabel '{header_cols[2]}'",
                  f"set dgrid3d {count},{samples}",
                  "set hidden3d",
                  f"splot '{csv_name}' using 1:2:3 with lines notitle"]
    else:
        ycols = ", ".join(
            f"'{csv_name}' using 1:{i + 2} with lines title '{name}'"
            for i, name in enumerate(header_cols[1:]))
        lines += [f"set ylabel 'value'", f"plot {ycols}"]
    with open(script, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# commands


def cmd_pfunc(cfg):
    times, tmax, samples = _time_grid(cfg)
    lam = _as_float(cfg, "lambda", positive=True)
    spec = ReservoirSpec(1.0, lam)
    closed = p_closed(spec, times)
    markov = p_markov(spec, times)
    step = _solver_step(cfg, tmax)
    refine = max(1, int(round((tmax / (samples - 1)) / step)))
    _, ode_full = p_volterra(spec, tmax, step, "ode_reduction")
    _, quad_full = p_volterra(spec, tmax, step, "quadrature")
    ode = ode_full[::refine]
    quad = quad_full[::refine]
    rows = zip(times, closed, ode, quad, markov)
    keys = ("lambda", "tmax", "samples", "step")
    _write_output(cfg, ("gamma0_t", "p_closed", "p_volterra_ode", "p_volterra_quad", "p_markov"),
                  rows, _config_line(cfg, keys))
    return EXIT_OK


def _x_concurrence_signed_batch(batch):
    # vectorized pre-clamp X-state concurrence over an (n, 4, 4) stack
    d = np.maximum(batch[:, (0, 1, 2, 3), (0, 1, 2, 3)].real, 0.0)
    inner = np.abs(batch[:, 1, 2]) - np.sqrt(d[:, 0] * d[:, 3])
    outer = np.abs(batch[:, 0, 3]) - np.sqrt(d[:, 1] * d[:, 2])
    return 2.0 * np.maximum(inner, outer)


def _x_concurrence_batch(batch):
    return np.maximum(0.0, _x_concurrence_signed_batch(batch))


def _trace_for_state(cfg, label, rho0, times, mem):
    pvals = np.asarray(mem(times), dtype=np.float64)
    refine = None
    if label == "phi":
        alpha = np.sqrt(_alpha2_scalar(cfg))
        values = concurrence_phi(alpha, pvals)
        refine = lambda t: concurrence_phi_signed(alpha, float(mem(t)))
    elif label == "psi":
        alpha = np.sqrt(_alpha2_scalar(cfg))
        values = concurrence_psi(alpha, pvals)
        refine = lambda t: concurrence_psi_signed(alpha, float(mem(t)))
    else:
        try:
            x_state_from_density(rho0, tol=1e-14)
            is_x = True
        except ValidationError:
            is_x = False
        if is_x:
            values = _x_concurrence_batch(evolve_elements(rho0.matrix, pvals))
            refine = lambda t: float(_x_concurrence_signed_batch(
                evolve_elements(rho0.matrix, [float(mem(t))]))[0])
        else:
            values = np.array([concurrence(DensityMatrix(m))
                               for m in evolve_elements(rho0.matrix, pvals)])
    return build_trace(times, np.asarray(values, dtype=np.float64), refine=refine), pvals


def cmd_concurrence(cfg):
    times, tmax, _ = _time_grid(cfg)
    label, rho0 = _initial_state(cfg)
    mem = _memory_function(cfg, tmax=tmax)
    trace, pvals = _trace_for_state(cfg, label, rho0, times, mem)
    footer = [f"# event: {e.kind} t_start={_fmt(e.t_start)} t_end={_fmt(e.t_end)}"
              for e in trace.events]
    keys = ("family", "alpha2", "delta", "lambda", "method", "tmax", "samples")
    _write_output(cfg, ("gamma0_t", "concurrence", "p"),
                  zip(times, trace.values, pvals), _config_line(cfg, keys), footer)
    return EXIT_OK


def cmd_surface(cfg):
    times, tmax, _ = _time_grid(cfg)
    family = cfg["family"]
    if family not in FAMILIES:
        raise ConfigError(f"surface supports families {FAMILIES}, got {family!r}")
    sweep = _alpha2_sweep(cfg)
    mem = _memory_function(cfg, tmax=tmax)
    pvals = np.asarray(mem(times), dtype=np.float64)
    if family == "phi":
        grid = concurrence_phi(sweep[None, :] ** 0.5, pvals[:, None])
    elif family == "psi":
        grid = concurrence_psi(sweep[None, :] ** 0.5, pvals[:, None])
    else:
        grid = np.empty((times.size, sweep.size))
        for col, fid in enumerate(sweep):
            batch = evolve_elements(make_werner(fid).matrix, pvals)
            grid[:, col] = _x_concurrence_batch(batch)
    rows = ((times[i], sweep[j], grid[i, j])
            for i in range(times.size) for j in range(sweep.size))
    keys = ("family", "alpha2", "delta", "lambda", "method", "tmax", "samples")
    _write_output(cfg, ("gamma0_t", "alpha2", "concurrence"), rows, _config_line(cfg, keys))
    return EXIT_OK


def cmd_compare(cfg):
    times, tmax, _ = _time_grid(cfg)
    label, rho0 = _initial_state(cfg)
    if label == "custom":
        raise ConfigError("compare supports the named families only")
    lam_markov = _as_float(cfg, "lambda_markov", positive=True)
    mem_non = _memory_function(cfg, tmax=tmax)
    if _method(cfg) == "markov_limit":
        mem_mark = MemoryFunction(ReservoirSpec(1.0, lam_markov), "markov_limit")
    else:
        mem_mark = MemoryFunction(ReservoirSpec(1.0, lam_markov), "closed_form")
    trace_non, _ = _trace_for_state(cfg, label, rho0, times, mem_non)
    trace_mark, _ = _trace_for_state(cfg, label, rho0, times, mem_mark)
    keys = ("family", "alpha2", "delta", "lambda", "lambda_markov", "method", "tmax", "samples")
    _write_output(cfg, ("gamma0_t", "c_nonmarkov", "c_markov"),
                  zip(times, trace_non.values, trace_mark.values), _config_line(cfg, keys))
    return EXIT_OK


def cmd_validate(cfg):
    seed = _as_int(cfg, "seed")
    tol_factor = _as_float(cfg, "tol_factor", positive=True)
    results, report = run_and_format(seed=seed, tol_factor=tol_factor)
    print(report)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VALIDATION


# ---------------------------------------------------------------------------
# argument parsing


def build_parser():
    parser = argparse.ArgumentParser(
        prog="esdlab",
        description="Entanglement dynamics of independent qubits under "
                    "non-Markovian amplitude damping.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_family=True):
        if with_family:
            p.add_argument("--family",
                           help="phi | psi | werner | path to a 4x4 matrix file "
                                "(16 're im' lines, row-major, |11> first). "
                                "For werner, --alpha2 is the fidelity.")
            p.add_argument("--alpha2", help="alpha^2 (or 'start:stop:count' sweep for surface)")
            p.add_argument("--delta", help="phase of the beta amplitude (radians)")
        p.add_argument("--lambda", dest="lambda_", metavar="RATIO",
                       help="spectral width / gamma0 (default 0.1)")
        p.add_argument("--method", choices=METHODS, help="survival-probability evaluator")
        p.add_argument("--tmax", help="trace end in gamma0*t units (default 20)")
        p.add_argument("--samples", help="number of output samples (default 2001)")
        p.add_argument("--step", help="Volterra solver step in gamma0*t units (default 1e-3)")
        p.add_argument("--out", help="output CSV path (stdout when omitted)")
        p.add_argument("--config", help="flat key=value config file; flags override it")
        p.add_argument("--emit-gnuplot", dest="emit_gnuplot", action="store_const", const="1",
                       help="also write a companion gnuplot script next to --out")
        p.add_argument("--seed", help="seed recorded in the output header")

    p = sub.add_parser("pfunc", help="survival probability by every method on one grid")
    add_common(p, with_family=False)

    p = sub.add_parser("concurrence", help="concurrence trace with death/revival footer")
    add_common(p)

    p = sub.add_parser("surface", help="concurrence over a (gamma0_t, alpha2) grid")
    add_common(p)

    p = sub.add_parser("compare", help="non-Markovian vs Markovian concurrence")
    add_common(p)
    p.add_argument("--lambda-markov", dest="lambda_markov",
                   help="spectral width of the Markovian reference (default 5)")

    p = sub.add_parser("validate", help="run the built-in oracle suite")
    p.add_argument("--seed", help="RNG seed for the sampled checks")
    p.add_argument("--tol-factor", dest="tol_factor",
                   help="multiply every tolerance (e.g. 1e-6 to demo failures)")
    return parser


_COMMANDS = {
    "pfunc": cmd_pfunc,
    "concurrence": cmd_concurrence,
    "surface": cmd_surface,
    "compare": cmd_compare,
    "validate": cmd_validate,
}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return int(code) if code else 0
    if getattr(args, "lambda_", None) is not None:
        setattr(args, "lambda", args.lambda_)
    try:
        cfg = _resolve(args)
        return _COMMANDS[args.command](cfg)
    except (ConfigError, ValidationError, RegimeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
