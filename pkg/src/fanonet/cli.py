"""Command-line front end.

Subcommands: ``trap`` (certify trapped modes of a user graph), ``evolve``
(survival-probability sweeps), ``bound`` (exact bound states), ``transmit``
(transmission spectra with zero catalogs).  Exit codes: 0 success, 2 input
error, 3 empty trap search, 4 domain violation.

Identical run configurations produce byte-identical output files: no
timestamps, fixed float formatting, deterministic ordering.  Energies are
in units of the host hopping (kappa = 1) unless --kappa is given.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bound_states import (
    evanescent_bound_states,
    long_time_survival,
    resonant_bound_states,
)
from .dynamics import (
    SpectralPropagator,
    SurvivalSeries,
    classify_decay,
    safe_horizon,
    survival_probability,
)
from .graphs import GraphSpecError, assemble_hamiltonian, parse_graph_file
from .pilattice import CENTRAL, PiLatticeSpec, build_pi_lattice
from .scattering import (
    ZeroEntry,
    common_zeros,
    l_dependent_reflection_zeros,
    peak_dip_report,
    scattering_point,
)
from .spectra import find_trapping_modes, open_chain_modes

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_EMPTY = 3
EXIT_DOMAIN = 4

FORMATS = ("csv", "json")


@dataclass
class RunConfig:
    """Resolved parameters of one invocation (flags merged over --config)."""

    subcommand: str
    n0: int | None = None
    length: int | None = None
    kappa: float = 1.0
    kappa0: float = 1.0
    leads: int | None = None
    e_min: float | None = None
    e_max: float | None = None
    steps: int | None = None
    t_max: float | None = None
    modes: list[int] | None = None
    compare: int | None = None
    long_time: int | None = None
    allow_reflections: bool = False
    graph: str | None = None
    subgraph: int = 0
    out: str | None = None
    format: str = "csv"

    def validate(self):
        if self.format not in FORMATS:
            raise GraphSpecError(f"format must be one of {FORMATS}, got {self.format!r}")
        if self.steps is not None and self.steps < 2:
            raise GraphSpecError(f"steps must be >= 2, got {self.steps}")
        if self.e_min is not None and self.e_max is not None and not self.e_min < self.e_max:
            raise GraphSpecError("empty energy range: e_min must be < e_max")


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _write_text(path: str | None, text: str):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="")


def _resolve(args: argparse.Namespace, config_path: str | None) -> RunConfig:
    """Merge explicit flags over --config values over defaults."""
    overrides = {
        key: value for key, value in vars(args).items()
        if key not in ("command", "config") and value is not None
    }
    merged: dict = {}
    if config_path:
        try:
            merged.update(json.loads(Path(config_path).read_text(encoding="utf-8")))
        except json.JSONDecodeError as exc:
            raise GraphSpecError(f"parse failure in config: {exc}") from exc
        merged.pop("subcommand", None)
    merged.update(overrides)
    if isinstance(merged.get("modes"), str):
        merged["modes"] = _parse_modes(merged["modes"])
    cfg = RunConfig(subcommand=args.command, **merged)
    cfg.validate()
    return cfg


def _parse_modes(text: str) -> list[int] | None:
    if text.strip().lower() == "all":
        return None
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise GraphSpecError(f"parse failure: bad mode list {text!r}") from exc


# ----------------------------------------------------------------- trap ----

def cmd_trap(cfg: RunConfig) -> int:
    if cfg.graph is None:
        raise GraphSpecError("trap needs a graph file")
    graph, partition = parse_graph_file(cfg.graph)
    if partition is None:
        raise GraphSpecError("graph file carries no 'partition' entry")
    if cfg.subgraph not in partition.subgraph_indices():
        raise GraphSpecError(
            f"subgraph {cfg.subgraph} not in partition {partition.subgraph_indices()}"
        )
    if not partition.joint_sites(cfg.subgraph):
        print(
            f"warning: subgraph {cfg.subgraph} has no couplings to the rest "
            "of the graph; every eigenmode is vacuously trapped",
            file=sys.stderr,
        )
    certificates = find_trapping_modes(graph, partition, cfg.subgraph)
    lines = [f"# trapped modes of subgraph {cfg.subgraph} ({len(certificates)} found)"]
    subgraph_sites = partition.sites_of(cfg.subgraph)
    for cert in certificates:
        nodes = cert.node_sites(subgraph_sites)
        lines.append(
            f"energy={_fmt(cert.energy)} nodes={nodes} residual={cert.residual:.3e}"
        )
    print("\n".join(lines))
    if cfg.out:
        payload = [c.to_json_dict() for c in certificates]
        _write_text(cfg.out, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if certificates else EXIT_EMPTY


# --------------------------------------------------------------- evolve ----

def cmd_evolve(cfg: RunConfig) -> int:
    if cfg.n0 is None or cfg.length is None or cfg.leads is None:
        raise GraphSpecError("evolve needs --n0, --len and --m")
    spec = PiLatticeSpec(cfg.n0, cfg.length, cfg.kappa, cfg.kappa0, cfg.leads)
    horizon = safe_horizon(cfg.leads, cfg.kappa)
    t_max = horizon if cfg.t_max is None else cfg.t_max
    if t_max > horizon and not cfg.allow_reflections:
        print(
            f"error: t_max={t_max} exceeds the safe horizon {horizon} "
            "(rerun with --allow-reflections to override)",
            file=sys.stderr,
        )
        return EXIT_DOMAIN
    steps = cfg.steps if cfg.steps is not None else 720
    times = np.linspace(0.0, t_max, steps)

    lattice = build_pi_lattice(spec)
    central = lattice.central_sites
    lam = spec.central_size
    modes = cfg.modes if cfg.modes else list(range(1, lam + 1))
    bad = [n for n in modes if not 1 <= n <= lam]
    if bad:
        raise GraphSpecError(f"modes {bad} outside [1, {lam}]")

    propagator = SpectralPropagator(assemble_hamiltonian(lattice.graph))
    chain = open_chain_modes(lam, cfg.kappa) if cfg.kappa == cfg.kappa0 else None
    rows = []
    for n in modes:
        psi0 = np.zeros(lattice.graph.site_count, dtype=complex)
        if chain is not None:
            psi0[central] = chain[n - 1].amplitudes
        else:
            from .graphs import subgraph_hamiltonian
            from .spectra import diagonalize

            block, _ = subgraph_hamiltonian(lattice.graph, lattice.partition, CENTRAL)
            psi0[central] = diagonalize(block)[1][:, n - 1]
        amps = propagator.evolve(psi0, times)
        values = np.sum(np.abs(amps[:, central]) ** 2, axis=1)
        series = SurvivalSeries(n, times, values, horizon)
        try:
            label = classify_decay(series)
        except ValueError:          # too few samples to call the shape
            label = "unclassified"
        rows.extend(
            f"{cfg.n0},{cfg.length},{n},{_fmt(t)},{_fmt(p)},{label}"
            for t, p in zip(times, values)
        )
    header = (
        f"# fanonet evolve n0={cfg.n0} len={cfg.length} m={cfg.leads} "
        f"kappa={_fmt(cfg.kappa)} kappa0={_fmt(cfg.kappa0)} steps={steps} "
        f"t_max={_fmt(t_max)}; energies and times in units kappa={_fmt(cfg.kappa)}\n"
        "N0,L,n,t,P,classification\n"
    )
    _write_text(cfg.out, header + "\n".join(rows) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------- bound ----

def cmd_bound(cfg: RunConfig) -> int:
    if cfg.n0 is None or cfg.length is None:
        raise GraphSpecError("bound needs --n0 and --len")
    PiLatticeSpec(cfg.n0, cfg.length, cfg.kappa, cfg.kappa0)  # parameter validation
    resonant = resonant_bound_states(cfg.n0, cfg.length, cfg.kappa, cfg.kappa0)
    evanescent = evanescent_bound_states(cfg.n0, cfg.length, cfg.kappa, cfg.kappa0)
    print(f"# bound states: {len(resonant)} resonant, {len(evanescent)} evanescent")
    for state in resonant + evanescent:
        momentum = f"k={_fmt(state.k.real)}+{_fmt(state.k.imag)}i"
        parity = f" parity={state.parity}" if state.parity else ""
        print(f"{state.kind}: {momentum} E={_fmt(state.energy)}"
              f" gamma={_fmt(state.gamma)}{parity}")
    payload: dict = {
        "states": [s.to_json_dict() for s in resonant + evanescent],
    }
    if cfg.long_time is not None:
        report = long_time_survival(
            cfg.n0, cfg.length, cfg.kappa, cfg.kappa0, cfg.long_time
        )
        print(f"long-time survival of mode {report.mode}: {report.p_infinity:.6f}")
        payload["long_time"] = {
            "mode": report.mode,
            "p_infinity": report.p_infinity,
            "overlaps": report.contributions,
        }
    if cfg.out:
        _write_text(cfg.out, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


# ------------------------------------------------------------- transmit ----

def cmd_transmit(cfg: RunConfig) -> int:
    if cfg.n0 is None or cfg.length is None:
        raise GraphSpecError("transmit needs --n0 and --len")
    PiLatticeSpec(cfg.n0, cfg.length, cfg.kappa, cfg.kappa0)
    band = 2.0 * cfg.kappa
    e_min = cfg.e_min if cfg.e_min is not None else -band + 1e-3 * cfg.kappa
    e_max = cfg.e_max if cfg.e_max is not None else band - 1e-3 * cfg.kappa
    if not (-band < e_min < e_max < band):
        print(
            f"error: energy range [{e_min}, {e_max}] must lie strictly inside "
            f"the band (-{band}, {band})",
            file=sys.stderr,
        )
        return EXIT_DOMAIN
    steps = cfg.steps if cfg.steps is not None else 800
    energies = np.linspace(e_min, e_max, steps)
    lengths = [cfg.length] + ([cfg.compare] if cfg.compare else [])

    for length in lengths:
        rows = []
        for energy in energies:
            k = float(np.arccos(-energy / band))
            point = scattering_point(k, cfg.n0, length, cfg.kappa, cfg.kappa0)
            rows.append(
                f"{_fmt(point.k)},{_fmt(point.energy)},"
                f"{_fmt(point.transmission)},{_fmt(point.reflection)},"
                f"{_fmt(point.t.real)},{_fmt(point.t.imag)}"
            )
        header = (
            f"# fanonet transmit n0={cfg.n0} len={length} "
            f"kappa={_fmt(cfg.kappa)} kappa0={_fmt(cfg.kappa0)} steps={steps}; "
            f"energies in units kappa={_fmt(cfg.kappa)}\n"
            "k,E,T,R,re_t,im_t\n"
        )
        out = cfg.out
        if out is not None and length != cfg.length:
            path = Path(out)
            out = str(path.with_name(f"{path.stem}_L{length}{path.suffix}"))
        _write_text(out, header + "\n".join(rows) + "\n")

    catalog = common_zeros(cfg.n0, cfg.kappa, cfg.kappa0)
    k0_entries = {
        length: [
            ZeroEntry(k0, -2.0 * cfg.kappa * np.cos(k0), 0, "L-dependent")
            for k0 in l_dependent_reflection_zeros(cfg.n0, length, cfg.kappa, cfg.kappa0)
        ]
        for length in lengths
    }
    sidecar = catalog.to_json_dict()
    sidecar["k0"] = {
        str(length): [
            {"k": z.k, "E": z.energy, "provenance": z.provenance} for z in entries
        ]
        for length, entries in k0_entries.items()
    }
    if cfg.compare:
        report = peak_dip_report(cfg.n0, cfg.length, cfg.compare, cfg.kappa, cfg.kappa0)
        sidecar["peak_dip"] = report.entries
    if cfg.out:
        _write_text(f"{cfg.out}.zeros.json", json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    else:
        print(json.dumps(sidecar, indent=2, sort_keys=True), file=sys.stderr)
    return EXIT_OK


# ----------------------------------------------------------------- main ----

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fanonet",
        description="Tight-binding network trapping, bound states and scattering.",
    )
    parser.add_argument("--config", help="JSON run configuration (flags override it)")
    sub = parser.add_subparsers(dest="command")

    def common_lattice(p, leads=False):
        p.add_argument("--n0", type=int, help="side-chain length")
        p.add_argument("--len", dest="length", type=int, help="anchor separation")
        p.add_argument("--kappa", type=float, help="host-chain hopping")
        p.add_argument("--kappa0", type=float, help="side-chain hopping")
        if leads:
            p.add_argument("--m", dest="leads", type=int, help="lead sites per side")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--config", help="JSON run configuration")

    p_trap = sub.add_parser("trap", help="certify trapped modes of a graph file")
    p_trap.add_argument("graph", nargs="?", help="graph spec JSON with a partition")
    p_trap.add_argument("--subgraph", type=int, help="subgraph index (default 0)")
    p_trap.add_argument("--out", help="certificate JSON output")
    p_trap.add_argument("--config", help="JSON run configuration")

    p_evolve = sub.add_parser("evolve", help="survival-probability time sweep")
    common_lattice(p_evolve, leads=True)
    p_evolve.add_argument("--modes", help="comma-separated mode list or 'all'")
    p_evolve.add_argument("--t-max", dest="t_max", type=float, help="sweep end time")
    p_evolve.add_argument("--steps", type=int, help="time samples (default 720)")
    p_evolve.add_argument(
        "--allow-reflections",
        action="store_const",
        const=True,
        help="permit times beyond the safe horizon",
    )

    p_bound = sub.add_parser("bound", help="resonant and evanescent bound states")
    common_lattice(p_bound)
    p_bound.add_argument(
        "--long-time", dest="long_time", type=int,
        help="also report the stationary survival of this initial mode",
    )

    p_transmit = sub.add_parser("transmit", help="transmission spectrum sweep")
    common_lattice(p_transmit)
    p_transmit.add_argument("--e-min", dest="e_min", type=float, help="sweep start energy")
    p_transmit.add_argument("--e-max", dest="e_max", type=float, help="sweep end energy")
    p_transmit.add_argument("--steps", type=int, help="energy samples (default 800)")
    p_transmit.add_argument("--compare", type=int, help="second anchor separation")
    return parser


COMMANDS = {
    "trap": cmd_trap,
    "evolve": cmd_evolve,
    "bound": cmd_bound,
    "transmit": cmd_transmit,
}


def _config_from_argv(argv: list[str]) -> str | None:
    for i, token in enumerate(argv):
        if token == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if token.startswith("--config="):
            return token.split("=", 1)[1]
    return None


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(argv)
    command = args.command
    # a pre-subcommand --config is clobbered by the subparser default
    config_path = args.config or _config_from_argv(argv)
    if command is None:
        if not config_path:
            parser.print_usage(sys.stderr)
            return EXIT_INPUT
        try:
            command = json.loads(Path(config_path).read_text(encoding="utf-8")).get(
                "subcommand"
            )
        except json.JSONDecodeError as exc:
            print(f"error: parse failure in config: {exc}", file=sys.stderr)
            return EXIT_INPUT
        if command not in COMMANDS:
            print(f"error: config names no valid subcommand: {command!r}", file=sys.stderr)
            return EXIT_INPUT
        args = parser.parse_args([command])
        args.config = config_path
    try:
        cfg = _resolve(args, config_path)
        cfg.subcommand = command
        return COMMANDS[command](cfg)
    except (GraphSpecError, FileNotFoundError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
