"""``setcx`` command-line interface.

Exit codes: 0 success, 1 runtime or data error, 2 usage error.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from . import __version__
from .bitstrings import read_string_set
from .compression import CompressorSpec
from .errors import ConfigurationError, SetcxError
from .experiments import (
    ExperimentConfig,
    config_header,
    run,
    write_curve_csv,
    write_plot_csv,
)
from .graphinfo import GRAPH_MODES, graph_psi, maximize_psi, read_graph, write_graph_psi_csv
from .infodist import calibrate, distance_matrix
from .rbn import write_sweep_csv
from .setmeasures import KERNELS, Kernel, psi
from .stringset import StringSet

__all__ = ["main", "load_config", "build_parser"]

SUBCOMMANDS = ("ncd", "psi", "measures", "rbn-sweep", "graph-psi", "graph-max",
               "fig1", "fig2", "fig3", "fig4", "fig5")

_FIELDS = {f.name: f for f in dataclasses.fields(ExperimentConfig)}


class UsageError(Exception):
    pass


def _convert(name: str, text: str):
    default = _FIELDS[name].default
    if name == "compressor":
        return CompressorSpec.parse(text)
    if name in ("max_flips", "workers"):
        return None if text.lower() in ("", "none") else int(text)
    if isinstance(default, bool):
        return text.lower() in ("1", "true", "yes")
    if isinstance(default, int):
        return int(text)
    if isinstance(default, float):
        return float(text)
    return text


def load_config(path) -> ExperimentConfig:
    """Read ``key = value`` lines (``#`` starts a comment) into a config."""
    return ExperimentConfig(**_read_config(path))


def _read_config(path) -> dict:
    path = Path(path)
    values = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if not eq or not key:
            raise ConfigurationError(f"{path}:{lineno}: expected 'key = value'")
        if key not in _FIELDS:
            raise ConfigurationError(
                f"{path}:{lineno}: unknown key {key!r}; valid keys: {', '.join(_FIELDS)}"
            )
        try:
            values[key] = _convert(key, val)
        except ValueError as exc:
            if isinstance(exc, ConfigurationError):
                raise ConfigurationError(f"{path}:{lineno}: {exc}") from None
            raise ConfigurationError(f"{path}:{lineno}: bad value for {key}: {val!r}") from None
    return values


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _shared(p):
    p.add_argument("--input", metavar="PATH")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--seed", type=int)
    p.add_argument("--norm", choices=("xi", "pairs-mean", "pairs_mean"))
    p.add_argument("--kernel", default="d1d", choices=KERNELS)
    p.add_argument("--calibrate", action="store_true")
    p.add_argument("--threads", type=int, metavar="N")
    p.add_argument("--config", metavar="PATH")
    p.add_argument("--compressor", metavar="NAME[:LEVEL]")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="setcx", allow_abbrev=False,
                     description="Compression-based set complexity.")
    parser.add_argument("--version", action="version", version=f"setcx {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="SUBCOMMAND", parser_class=_Parser)
    helps = {
        "ncd": "pairwise NCD matrix of a string set (i,j,d CSV)",
        "psi": "set complexity report of a string set",
        "measures": "measure report for every named kernel",
        "rbn-sweep": "bias sweep of random Boolean networks",
        "graph-psi": "set complexity of a graph file",
        "graph-max": "hill-climb for a high-complexity graph",
        "fig1": "noise experiment", "fig2": "substitution experiment",
        "fig3": "calibrated noise experiment", "fig4": "RBN criticality sweep",
        "fig5": "two cliques versus searched graph",
    }
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, help=helps[name], allow_abbrev=False)
        _shared(p)
        if name in ("psi", "measures"):
            p.add_argument("--per-pair", metavar="PATH")
            p.add_argument("--length-normalized", action="store_true")
        if name in ("graph-psi", "graph-max", "fig5"):
            p.add_argument("--mode", choices=GRAPH_MODES, default="global")
        if name in ("graph-max", "fig5"):
            p.add_argument("--n", type=int, dest="graph_n")
            p.add_argument("--iterations", type=int)
            p.add_argument("--restarts", type=int)
            p.add_argument("--graph-out", metavar="PATH")
        if name in ("fig1", "fig2", "fig3"):
            p.add_argument("--set-size", type=int, dest="N")
            p.add_argument("--length", type=int, dest="L")
            p.add_argument("--replicates", type=int)
            p.add_argument("--step-every", type=int)
            p.add_argument("--max-flips", type=int)
            p.add_argument("--encoding", choices=("ascii01", "packed"))
            p.add_argument("--plot", metavar="PATH")
        if name in ("rbn-sweep", "fig4"):
            p.add_argument("--n", type=int)
            p.add_argument("--k", type=int)
            p.add_argument("--p-min", type=float)
            p.add_argument("--p-max", type=float)
            p.add_argument("--p-step", type=float)
            p.add_argument("--networks", type=int)
            p.add_argument("--traj-len", type=int)
            p.add_argument("--burn-in", type=int)
    return parser


_OVERRIDES = ("seed", "norm", "compressor", "N", "L", "replicates", "step_every", "max_flips",
              "encoding", "n", "k", "p_min", "p_max", "p_step", "networks", "traj_len",
              "burn_in", "graph_n", "iterations", "restarts")


def _config(args, experiment: str) -> ExperimentConfig:
    values = _read_config(args.config) if args.config else {}
    values["experiment"] = experiment
    for key in _OVERRIDES:
        v = getattr(args, key, None)
        if v is None:
            continue
        values[key] = CompressorSpec.parse(v) if key == "compressor" else v
    if args.threads is not None:
        values["workers"] = args.threads
    return ExperimentConfig(**values)


def _header(cfg: ExperimentConfig, extra=()) -> list[str]:
    return [f"version={__version__}", f"seed={cfg.seed}", f"compressor={cfg.compressor}",
            f"norm={cfg.norm}", *extra]


def _emit(text: str, args):
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _strings(args, cfg):
    if not args.input:
        raise UsageError("--input is required")
    path = Path(args.input)
    if not path.exists():
        raise FileNotFoundError(f"input file not found: {path}")
    strings = read_string_set(path)
    if len(strings) < 2:
        raise ConfigurationError(f"{path}: need at least two strings")
    return StringSet(strings, cfg.compressor)


def _cmd_ncd(args, cfg):
    S = _strings(args, cfg)
    cal = calibrate(S, cfg.compressor, cfg.seed, threads=args.threads) if args.calibrate else None
    D = distance_matrix(S, cfg.compressor, cal, args.threads)
    extra = [f"calibration={cal.d_min!r},{cal.d_max!r}" if cal else "calibration=none"]
    head = "".join(f"#{h}\n" for h in _header(cfg, extra))
    _emit(head + D.to_csv(), args)


def _report_rows(args, cfg, kernels):
    S = _strings(args, cfg)
    cal = calibrate(S, cfg.compressor, cfg.seed, threads=args.threads) if args.calibrate else None
    D = distance_matrix(S, cfg.compressor, cal, args.threads)
    weights = S.complexities(args.length_normalized) if args.length_normalized else S
    extra = [f"calibration={cal.d_min!r},{cal.d_max!r}" if cal else "calibration=none",
             f"units={'per-byte' if args.length_normalized else 'bytes'}"]
    reports = [(k, psi(weights, D, Kernel(k), cfg.norm, per_pair=bool(args.per_pair)))
               for k in kernels]
    return reports, extra


def _cmd_psi(args, cfg):
    reports, extra = _report_rows(args, cfg, [args.kernel])
    kname, rep = reports[0]
    head = "".join(f"#{h}\n" for h in _header(cfg, [f"kernel={kname}", *extra]))
    _emit(head + rep.to_csv(), args)
    if args.per_pair:
        Path(args.per_pair).write_text(rep.per_pair_csv())


def _cmd_measures(args, cfg):
    reports, extra = _report_rows(args, cfg, KERNELS)
    lines = ["kernel," + ",".join(reports[0][1].CSV_FIELDS)]
    for kname, rep in reports:
        lines.append(kname + "," + rep.to_csv(header=False).strip())
    head = "".join(f"#{h}\n" for h in _header(cfg, extra))
    _emit(head + "\n".join(lines) + "\n", args)
    if args.per_pair:
        Path(args.per_pair).write_text(reports[0][1].per_pair_csv())


def _cmd_sweep(args, cfg):
    rows = run(dataclasses.replace(cfg, experiment="fig4"))
    sc = cfg.sweep_config()
    _emit(write_sweep_csv(rows, sc, header_lines=_header(cfg)), args)


def _cmd_graph_psi(args, cfg):
    if not args.input:
        raise UsageError("--input is required")
    path = Path(args.input)
    if not path.exists():
        raise FileNotFoundError(f"input file not found: {path}")
    G = read_graph(path)
    value = graph_psi(G, args.mode)
    _emit(write_graph_psi_csv(G, value, args.mode, header_lines=_header(cfg)), args)


def _write_edges(G, path):
    lines = [f"# n={G.n}"] + [f"{i} {j}" for i, j in G.edges()]
    Path(path).write_text("\n".join(lines) + "\n")


def _cmd_graph_max(args, cfg):
    G, value = maximize_psi(cfg.graph_n, cfg.iterations, cfg.restarts, cfg.seed, args.mode)
    _emit(write_graph_psi_csv(G, value, args.mode, header_lines=_header(cfg)), args)
    if args.graph_out:
        _write_edges(G, args.graph_out)


def _cmd_curve(args, cfg):
    curve = run(cfg)
    _emit(write_curve_csv(curve, cfg), args)
    if args.plot:
        Path(args.plot).write_text(write_plot_csv(curve))


def _cmd_fig5(args, cfg):
    res = run(cfg)
    head = "".join(f"#{h}\n" for h in config_header(cfg))
    lines = ["graph,n,edges,psi,mode"]
    for name, (G, value) in res.items():
        lines.append(f"{name},{G.n},{G.n_edges},{value!r},global")
    _emit(head + "\n".join(lines) + "\n", args)
    if args.graph_out:
        _write_edges(res["searched"][0], args.graph_out)


_COMMANDS = {
    "ncd": _cmd_ncd, "psi": _cmd_psi, "measures": _cmd_measures,
    "rbn-sweep": _cmd_sweep, "fig4": _cmd_sweep,
    "graph-psi": _cmd_graph_psi, "graph-max": _cmd_graph_max,
    "fig1": _cmd_curve, "fig2": _cmd_curve, "fig3": _cmd_curve, "fig5": _cmd_fig5,
}

_EXPERIMENT = {"fig1": "fig1", "fig2": "fig2", "fig3": "fig3", "fig4": "fig4",
               "rbn-sweep": "fig4", "fig5": "fig5", "graph-max": "fig5"}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_usage(sys.stderr)
            raise UsageError("setcx: error: a subcommand is required")
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    try:
        cfg = _config(args, _EXPERIMENT.get(args.command, "fig1"))
        _COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"setcx: error: {exc}", file=sys.stderr)
        return 2
    except (SetcxError, OSError, ValueError) as exc:
        print(f"setcx: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
