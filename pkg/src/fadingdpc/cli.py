"""Command-line entry point producing deterministic CSV/JSON tables.

Commands: ``bounds``, ``gap-table``, ``dpc-sim``, ``bc-region`` and
``lattice-check``. Powers given in dB are converted to linear values once,
while arguments are parsed. Every table carries enough metadata (seed, sample
count, version, resolved configuration) to be regenerated byte for byte.

Exit codes: 0 success, 2 usage or configuration error, 3 numerical failure,
4 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np

from . import __version__
from .bc_regions import MODES, BcConfig, sweep_region
from .bounds import PowerConfig, dpc_inner, gap_rayleigh_mimo, lattice_inner, outer_bound
from .dpc_sim import DpcConfig, summarize
from .errors import (ConfigurationError, FadingDpcError, InputError, NumericalError,
                     PreconditionError, ResourceError)
from .fading import FadingSpec
from .lattice import (Lattice, NestedLatticeCode, enumerate_codebook, normalized_second_moment,
                      sample_dither, second_moment)
from .mc import DEFAULT_SAMPLES, DEFAULT_SEED, SeedSpec

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_RESOURCE = 0, 2, 3, 4

# Figure presets: command plus flag defaults (dB values are converted like flags).
PRESETS: dict[str, dict[str, Any]] = {
    "fig1": {"command": "gap-table", "M": [1, 2, 3, 4], "N_max": 30},
    "fig2": {"command": "bounds", "fading": "rayleigh", "M": 2, "N": 2, "ps_db": 80.0,
             "snr_db": "0:30:2"},
    "fig3": {"command": "bounds", "fading": "nakagami", "m": 2.0, "M": 1, "N": 1, "ps_db": 80.0,
             "snr_db": "0:30:2"},
    "fig4": {"command": "bounds", "fading": "rayleigh", "M": 1, "N": 1, "ps_db": 80.0,
             "snr_db": "0:30:2"},
    "fig5": {"command": "bc-region", "M": 2, "N1": 2, "N2": 4, "user1": "deterministic",
             "G": "[[1,0],[0,1]]", "user2": "rayleigh", "px_pw1_db": 0.0, "px_pw2_db": 20.0,
             "mode": ["thm3", "dpc_csit", "time_share"]},
    "fig6": {"command": "bc-region", "M": 1, "N1": 1, "N2": 1, "user1": "deterministic",
             "G": "[[1]]", "user2": "nakagami", "m2": 2.0, "px_pw1_db": 0.0, "px_pw2_db": 20.0,
             "mode": ["thm3", "dpc_csit", "time_share"]},
    "fig7": {"command": "bc-region", "M": 1, "N1": 2, "N2": 2, "user1": "nakagami", "m1": 2.0,
             "user2": "nakagami", "m2": 2.0, "px_pw1_db": 0.0, "px_pw2_db": 20.0,
             "mode": ["thm4", "dpc_csit", "time_share"]},
}


class UsageError(FadingDpcError, ValueError):
    pass


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


def parse_grid(text) -> list[float]:
    """``"a:b:step"`` (inclusive) or a comma list; a bare number or a list is accepted too."""
    if isinstance(text, (int, float)):
        return [float(text)]
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    text = str(text).strip()
    if ":" in text:
        parts = [float(v) for v in text.split(":")]
        if len(parts) != 3 or parts[2] <= 0 or parts[1] < parts[0]:
            raise UsageError(f"range must be start:stop:step with step > 0 and stop >= start, got {text!r}")
        start, stop, step = parts
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [start + k * step for k in range(count)]
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse number list {text!r}") from exc


def parse_matrix(text) -> np.ndarray:
    """A JSON nested list; entries may be numbers or strings such as ``"1+2j"``."""
    data = json.loads(text) if isinstance(text, str) else text
    try:
        arr = np.array([[complex(v) for v in row] for row in data], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"cannot parse channel matrix {text!r}") from exc
    return arr


@dataclass
class ResultTable:
    header: list[str]
    rows: list[list[Any]]
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.header):
                raise ValueError(f"row has {len(row)} columns, header has {len(self.header)}")

    def to_csv(self) -> str:
        lines = [f"# {k}: {json.dumps(v, sort_keys=True)}" for k, v in self.metadata.items()]
        lines.append(",".join(self.header))
        lines.extend(",".join(_fmt(v) for v in row) for row in self.rows)
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        rows = [{h: _json_value(v) for h, v in zip(self.header, row)} for row in self.rows]
        return json.dumps({"metadata": self.metadata, "rows": rows}, indent=2, sort_keys=False) + "\n"

    def render(self, fmt: str) -> str:
        return self.to_json() if fmt == "json" else self.to_csv()


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def _json_value(v):
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    v = float(v)
    return v if math.isfinite(v) else None


# ---------------------------------------------------------------- commands

def _fading(kind: str, M: int, N: int, m: Optional[float], G) -> FadingSpec:
    if kind == "rayleigh":
        return FadingSpec.rayleigh(M, N)
    if kind == "nakagami":
        if m is None:
            raise UsageError("nakagami fading needs -m / --m")
        if M != 1:
            raise UsageError("nakagami fading is defined for a single transmit antenna")
        return FadingSpec.nakagami(m, N)
    if kind == "deterministic":
        H = np.eye(N, M, dtype=complex) if G is None else parse_matrix(G)
        if H.shape != (N, M):
            raise UsageError(f"channel matrix has shape {H.shape}, expected ({N}, {M})")
        return FadingSpec.deterministic(H)
    raise UsageError(f"unknown fading kind {kind!r}")


def _seed(ns) -> SeedSpec:
    return SeedSpec(ns.seed)


def cmd_bounds(ns) -> ResultTable:
    spec = _fading(ns.fading, ns.M, ns.N, ns.m, ns.G)
    seed = _seed(ns)
    rows = []
    for snr_db, snr in zip(ns.snr_db_values, ns.snr_values):
        cfg = PowerConfig(snr, ns.ps_linear, 1.0, ns.M, ns.N)
        o = outer_bound(cfg, spec, ns.samples, seed, ns.workers)
        d = dpc_inner(cfg, spec, ns.samples, seed, ns.workers)
        lat = lattice_inner(cfg, spec, ns.samples, seed, ns.workers)
        rows.append([snr_db, o.mean, o.std_error, d.mean, d.std_error, lat.mean, lat.std_error])
    return ResultTable(["snr_db", "outer", "outer_se", "dpc", "dpc_se", "lattice", "lattice_se"], rows)


def cmd_gap_table(ns) -> ResultTable:
    rows = []
    for M in ns.M:
        n_lo = ns.N_min if ns.N_min is not None else M + 1
        for N in range(n_lo, ns.N_max + 1):
            if N <= M:
                rows.append([M, N, float("nan"), "skipped: N <= M"])
            else:
                rows.append([M, N, gap_rayleigh_mimo(M, N), ""])
    return ResultTable(["M", "N", "gap_bits", "warning"], rows)


def _code(ns, n: int) -> list[NestedLatticeCode]:
    q = math.sqrt(6.0 * ns.px_linear / ns.M)
    if ns.code == "cubic":
        return [NestedLatticeCode.cubic(q, int(lv), n) for lv in ns.levels]
    if ns.G is None:
        raise UsageError("a construction-A code needs --G (generator over F_p)")
    G = np.real(parse_matrix(ns.G)).astype(int)
    if G.shape[1] != n:
        raise UsageError(f"generator length {G.shape[1]} must equal M * n_sym = {n}")
    return [NestedLatticeCode.construction_a_over_cubic(ns.p, G, q, int(mult)) for mult in ns.levels]


def cmd_dpc_sim(ns) -> ResultTable:
    spec = _fading(ns.fading, ns.M, ns.N, ns.m, ns.G_channel)
    cfg = PowerConfig(ns.px_linear, ns.ps_linear, 1.0, ns.M, ns.N)
    seed = _seed(ns)
    rows = []
    for n_sym in ns.n_sym:
        for code in _code(ns, ns.M * int(n_sym)):
            dpc = DpcConfig(cfg, spec, code, int(n_sym), ns.epsilon)
            s = summarize(dpc, ns.trials, seed, ns.samples)
            rows.append([int(n_sym), dpc.rate_bits, s["ser"], s["mean_z_norm"], s["radius_sq"],
                         s["concentration_prob"]])
    return ResultTable(["n_sym", "rate_bits", "ser", "mean_z_norm", "radius_sq", "concentration_prob"], rows)


def bc_config(ns) -> BcConfig:
    """The broadcast configuration described by parsed ``bc-region`` flags (``Px = 1``)."""
    M = ns.M
    user1 = _fading(ns.user1, M, ns.N1, ns.m1, ns.G)
    user2 = _fading(ns.user2, M, ns.N2, ns.m2, None)
    Px = 1.0
    grid = [k / ns.alpha_steps for k in range(ns.alpha_steps + 1)]
    return BcConfig(M, ns.N1, ns.N2, Px, Px / ns.px_pw1_linear, Px / ns.px_pw2_linear, user1, user2, grid,
                    corrected_thm4=not ns.thm4_as_printed)


def cmd_bc_region(ns) -> list[tuple[str, ResultTable]]:
    bc = bc_config(ns)
    out = []
    for mode in ns.mode:
        curve = sweep_region(mode, bc, ns.samples, _seed(ns))
        rows = [[p.alpha, p.R1, p.R1_se, p.R2, p.R2_se] for p in curve.points]
        table = ResultTable(["alpha", "R1", "R1_se", "R2", "R2_se"], rows)
        table.metadata["mode"] = mode
        out.append((mode, table))
    return out


def cmd_lattice_check(ns) -> ResultTable:
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(ns.seed)))
    n_draw = ns.samples
    rows = []

    def row(name, measured, expected, tol, ok):
        rows.append([name, float(measured), float(expected), float(tol), "pass" if ok else "fail"])

    cub = Lattice.integer(ns.q, ns.n)
    d = sample_dither(cub, rng, n_draw)
    emp = float(np.mean(d**2))
    se = float(np.std(d**2) / math.sqrt(d.size))
    row("integer_second_moment", second_moment(cub), ns.q**2 / 12.0, 1e-12,
        abs(second_moment(cub) - ns.q**2 / 12.0) <= 1e-12)
    row("integer_dither_power", emp, ns.q**2 / 12.0, 3 * se, abs(emp - ns.q**2 / 12.0) <= 3 * se)

    G = np.real(parse_matrix(ns.G)).astype(int)
    lat = Lattice.construction_a(ns.p, G, ns.scale)
    dA = sample_dither(lat, rng, n_draw)
    sigma2 = float(np.mean(np.sum(dA**2, axis=1)) / lat.n)
    cov = dA.T @ dA / n_draw
    white = float(np.max(np.abs(cov - sigma2 * np.eye(lat.n))) / sigma2)
    row("dither_whiteness", white, 0.0, 0.02, white <= 0.02)
    mean_dev = float(np.max(np.abs(dA.mean(axis=0))) / math.sqrt(sigma2))
    row("dither_zero_mean", mean_dev, 0.0, 0.02, mean_dev <= 0.02)
    nsm = normalized_second_moment(lat, rng, n_draw)
    row("nsm_above_sphere_bound", nsm, 1.0 / (2 * math.pi * math.e), 0.0, nsm >= 1.0 / (2 * math.pi * math.e))

    span = 10.0 * lat.period
    a = rng.uniform(-span, span, (ns.pairs, lat.n))
    b = rng.uniform(-span, span, (ns.pairs, lat.n))
    lhs, rhs = lat.mod(lat.mod(a) + b), lat.mod(a + b)
    dist = float(np.max(np.abs(lhs - rhs)))
    row("mod_distributive", dist, 0.0, 1e-9, dist <= 1e-9)
    Qa = lat.quantize(a)
    idem = float(np.max(np.abs(lat.quantize(Qa) - Qa)))
    row("quantize_idempotent", idem, 0.0, 1e-9, idem <= 1e-9)
    in_cell = float(np.max(np.abs(lat.quantize(lat.mod(a)))))
    row("mod_lands_in_voronoi", in_cell, 0.0, 1e-9, in_cell <= 1e-9)
    member = bool(np.all(lat.contains(Qa)))
    row("quantize_returns_lattice_points", float(member), 1.0, 0.0, member)

    code = NestedLatticeCode.cubic(ns.q, ns.levels_check, ns.n)
    book = enumerate_codebook(code)
    row("codebook_size", len(book), code.size, 0.0, len(book) == code.size)
    return ResultTable(["check", "measured", "expected", "tolerance", "result"], rows)


# ---------------------------------------------------------------- parsing

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", choices=sorted(PRESETS), help="figure parameter preset")
    p.add_argument("--config", help="JSON file whose keys mirror the long flags")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="Monte Carlo samples (default 1e5)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="master seed (default 42)")
    p.add_argument("--workers", type=int, default=1, help="threads for Monte Carlo blocks; output unaffected")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", "-o", help="output file (default stdout)")


def _add_fading(p: argparse.ArgumentParser, default: str = "rayleigh") -> None:
    p.add_argument("--fading", choices=("rayleigh", "nakagami", "deterministic"), default=default)
    p.add_argument("-M", "--M", type=int, default=1, help="transmit antennas")
    p.add_argument("-N", "--N", type=int, default=1, help="receive antennas")
    p.add_argument("-m", "--m", type=float, help="Nakagami shape")


def _add_db_pair(p: argparse.ArgumentParser, name: str, help_text: str, default_db: Optional[float]) -> None:
    g = p.add_mutually_exclusive_group()
    key = name.replace("-", "_")
    g.add_argument(f"--{name}-db", dest=f"{key}_db", default=default_db, help=f"{help_text} in dB")
    g.add_argument(f"--{name}", dest=f"{key}_lin", help=f"{help_text}, linear")


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(prog="fadingdpc", description=__doc__.split("\n")[0], allow_abbrev=False)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {}

    p = sub.add_parser("bounds", help="outer, DPC and lattice rates over an SNR sweep")
    p.allow_abbrev = False
    _add_common(p)
    _add_fading(p)
    p.add_argument("--G", help="deterministic channel as a JSON nested list (default identity)")
    _add_db_pair(p, "snr", "Px/Pw sweep (start:stop:step or comma list)", "0:30:5")
    _add_db_pair(p, "ps", "dirt power Ps/Pw", None)
    subs["bounds"] = p

    p = sub.add_parser("gap-table", help="closed-form Rayleigh MIMO gap bound over M and N")
    p.allow_abbrev = False
    _add_common(p)
    p.add_argument("-M", "--M", type=int, nargs="+", default=[1, 2, 3, 4])
    p.add_argument("--N-min", dest="N_min", type=int, help="smallest N (default M+1)")
    p.add_argument("--N-max", dest="N_max", type=int, default=30)
    subs["gap-table"] = p

    p = sub.add_parser("dpc-sim", help="link-level nested-lattice dirty-paper simulation")
    p.allow_abbrev = False
    _add_common(p)
    _add_fading(p)
    p.add_argument("--G-channel", dest="G_channel", help="deterministic channel as a JSON nested list")
    _add_db_pair(p, "px", "signal power Px/Pw", "10")
    _add_db_pair(p, "ps", "dirt power Ps/Pw", None)
    p.add_argument("--n-sym", dest="n_sym", type=int, nargs="+", default=[1000])
    p.add_argument("--code", choices=("cubic", "construction-a"), default="cubic")
    p.add_argument("--levels", type=int, nargs="+", default=[2],
                   help="cubic: PAM levels per dimension; construction-a: fine periods per coarse period")
    p.add_argument("--p", type=int, default=2, help="construction-A prime")
    p.add_argument("--G", help="construction-A generator (k x M*n_sym) as a JSON nested list")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--epsilon", type=float, default=0.1)
    subs["dpc-sim"] = p

    p = sub.add_parser("bc-region", help="two-user broadcast rate regions")
    p.allow_abbrev = False
    _add_common(p)
    p.add_argument("--mode", nargs="+", choices=MODES, default=list(MODES[1:]))
    p.add_argument("-M", "--M", type=int, default=1)
    p.add_argument("--N1", type=int, default=1)
    p.add_argument("--N2", type=int, default=1)
    p.add_argument("--user1", choices=("rayleigh", "nakagami", "deterministic"), default="rayleigh")
    p.add_argument("--user2", choices=("rayleigh", "nakagami", "deterministic"), default="rayleigh")
    p.add_argument("--m1", type=float)
    p.add_argument("--m2", type=float)
    p.add_argument("--G", help="deterministic user-1 channel as a JSON nested list")
    _add_db_pair(p, "px-pw1", "Px/Pw1", "0")
    _add_db_pair(p, "px-pw2", "Px/Pw2", "20")
    p.add_argument("--alpha-steps", dest="alpha_steps", type=int, default=20)
    p.add_argument("--thm4-as-printed", dest="thm4_as_printed", action="store_true",
                   help="keep the extra 1/Pw1 factor in the ergodic user-1 rate")
    subs["bc-region"] = p

    p = sub.add_parser("lattice-check", help="property checks for lattices and nested codes")
    p.allow_abbrev = False
    _add_common(p)
    p.add_argument("--q", type=float, default=4.0)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--p", type=int, default=5)
    p.add_argument("--G", default="[[1,2]]")
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--pairs", type=int, default=1000)
    p.add_argument("--levels-check", dest="levels_check", type=int, default=4)
    subs["lattice-check"] = p
    return parser, subs


def _pre_scan(argv: Sequence[str]) -> tuple[Optional[str], Optional[str], Optional[str]]:
    pre = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    pre.add_argument("command", nargs="?")
    pre.add_argument("--preset")
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(list(argv))
    return known.command, known.preset, known.config


def _resolve_db(ns, name: str, attr: str, grid: bool) -> None:
    db, lin = getattr(ns, f"{name}_db", None), getattr(ns, f"{name}_lin", None)
    if lin is not None:
        lin_vals = parse_grid(lin)
        if any(v <= 0 for v in lin_vals) and name != "ps":
            raise UsageError(f"--{name} must be positive")
        db_vals = [linear_to_db(v) if v > 0 else float("-inf") for v in lin_vals]
    elif db is not None:
        db_vals = parse_grid(db)
        lin_vals = [db_to_linear(v) for v in db_vals]
    else:
        db_vals, lin_vals = [float("-inf")], [0.0]
    if grid:
        setattr(ns, f"{attr}_db_values", db_vals)
        setattr(ns, f"{attr}_values", lin_vals)
    else:
        if len(lin_vals) != 1:
            raise UsageError(f"--{name} takes a single value")
        setattr(ns, f"{attr}_linear", lin_vals[0])


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    parser, subs = build_parser()
    command, preset, config = _pre_scan(argv)
    if command in subs:
        defaults: dict[str, Any] = {}
        if preset is not None:
            if preset not in PRESETS:
                parser.error(f"unknown preset {preset!r}")
            values = dict(PRESETS[preset])
            if values.pop("command") != command:
                parser.error(f"preset {preset} belongs to the {PRESETS[preset]['command']} command")
            defaults.update(values)
        if config is not None:
            try:
                loaded = json.loads(Path(config).read_text())
            except (OSError, json.JSONDecodeError) as exc:
                parser.error(f"cannot read config file {config}: {exc}")
            if not isinstance(loaded, dict):
                parser.error("config file must hold a JSON object")
            defaults.update({k.replace("-", "_"): v for k, v in loaded.items()})
        known = {a.dest for a in subs[command]._actions}
        unknown = sorted(set(defaults) - known)
        if unknown:
            parser.error(f"unknown config keys for {command}: {', '.join(unknown)}")
        subs[command].set_defaults(**defaults)
    ns = parser.parse_args(list(argv))
    if getattr(ns, "samples", 1) < 1:
        parser.error("--samples must be at least 1")
    try:
        if ns.command == "bounds":
            _resolve_db(ns, "snr", "snr", grid=True)
            _resolve_db(ns, "ps", "ps", grid=False)
        elif ns.command == "dpc-sim":
            _resolve_db(ns, "px", "px", grid=False)
            _resolve_db(ns, "ps", "ps", grid=False)
        elif ns.command == "bc-region":
            _resolve_db(ns, "px_pw1", "px_pw1", grid=False)
            _resolve_db(ns, "px_pw2", "px_pw2", grid=False)
            if ns.alpha_steps < 1:
                raise UsageError("--alpha-steps must be at least 1")
    except UsageError as exc:
        parser.error(str(exc))
    return ns


def _metadata(ns, argv: Sequence[str]) -> dict[str, Any]:
    config = {k: v for k, v in sorted(vars(ns).items()) if k not in ("output", "config")}
    return {
        "command": ns.command,
        "version": __version__,
        "seed": ns.seed,
        "n_samples": ns.samples,
        "argv": list(argv),
        "config": _jsonable(config),
    }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    return str(obj)


def _write(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _mode_path(path: Optional[str], mode: str, n_modes: int) -> Optional[str]:
    if path is None or n_modes == 1:
        return path
    p = Path(path)
    return str(p.with_name(f"{p.stem}_{mode}{p.suffix}"))


def run(argv: Sequence[str]) -> int:
    ns = parse_args(argv)
    meta = _metadata(ns, argv)
    handlers = {"bounds": cmd_bounds, "gap-table": cmd_gap_table, "dpc-sim": cmd_dpc_sim,
                "lattice-check": cmd_lattice_check}
    if ns.command == "bc-region":
        tables = cmd_bc_region(ns)
        for mode, table in tables:
            table.metadata = {**meta, "mode": mode}
            _write(table.render(ns.format), _mode_path(ns.output, mode, len(tables)))
    else:
        table = handlers[ns.command](ns)
        table.metadata = meta
        _write(table.render(ns.format), ns.output)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        return run(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    except (UsageError, ConfigurationError, PreconditionError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ResourceError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
