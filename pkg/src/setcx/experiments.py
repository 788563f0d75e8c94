"""Noise, substitution, adjustment, RBN-sweep and graph experiments.

Every experiment is a pure function of its :class:`ExperimentConfig`.
Replicate r draws from ``SeedSequence(seed, spawn_key=(r,))``, so results do
not depend on the number of worker processes.
"""
from __future__ import annotations

import dataclasses
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .bitstrings import BitString, make_rng, permute_bits, random_bitstring
from .compression import CompressorSpec, compressed_size
from .errors import ConfigurationError, DomainError
from .graphinfo import graph_psi, maximize_psi, two_cliques
from .infodist import Calibration, calibrate, distance_matrix, pairwise_ncd, self_distances
from .rbn import SweepConfig, sweep
from .setmeasures import psi
from .stringset import StringSet

__all__ = [
    "EXPERIMENTS",
    "ExperimentConfig",
    "Curve",
    "noise_experiment",
    "substitution_experiment",
    "adjusted_experiment",
    "rbn_experiment",
    "graph_experiment",
    "run",
    "config_header",
    "write_curve_csv",
    "write_plot_csv",
]

EXPERIMENTS = ("fig1", "fig2", "fig3", "fig4", "fig5")


@dataclass
class ExperimentConfig:
    """Flat settings shared by all experiments; each one reads what it needs."""

    experiment: str = "fig1"
    N: int = 25
    L: int = 1000
    replicates: int = 10
    seed: int = 0
    compressor: CompressorSpec = field(default_factory=CompressorSpec)
    norm: str = "xi"
    encoding: str = "ascii01"
    step_every: int = 1
    max_flips: int | None = None
    workers: int | None = None
    # fig4
    n: int = 1000
    k: int = 3
    p_min: float = 0.05
    p_max: float = 0.50
    p_step: float = 0.01
    networks: int = 20
    traj_len: int = 20
    burn_in: int = 100
    # fig5
    graph_n: int = 10
    iterations: int = 2000
    restarts: int = 20

    def __post_init__(self):
        if isinstance(self.compressor, str):
            self.compressor = CompressorSpec.parse(self.compressor)
        self.norm = self.norm.replace("-", "_")
        if self.experiment not in EXPERIMENTS:
            raise ConfigurationError(f"experiment must be one of {EXPERIMENTS}")
        if self.N < 2:
            raise ConfigurationError("set size N must be at least 2")
        if self.L < 1:
            raise ConfigurationError("string length L must be at least 1")
        if self.replicates < 1 or self.step_every < 1:
            raise ConfigurationError("replicates and step_every must be positive")
        if self.norm not in ("xi", "pairs_mean"):
            raise ConfigurationError("norm must be xi or pairs_mean")
        if self.encoding not in ("ascii01", "packed"):
            raise ConfigurationError("encoding must be ascii01 or packed")
        if self.max_flips is not None and self.max_flips > self.L:
            raise DomainError(f"cannot perturb {self.max_flips} distinct positions of {self.L}")

    def items(self):
        for f in dataclasses.fields(self):
            yield f.name, getattr(self, f.name)

    def sweep_config(self) -> SweepConfig:
        return SweepConfig(n=self.n, k=self.k, p_min=self.p_min, p_max=self.p_max,
                           p_step=self.p_step, networks_per_p=self.networks,
                           burn_in=self.burn_in, traj_len=self.traj_len, seed=self.seed,
                           spec=self.compressor, norm=self.norm, workers=self.workers)


@dataclass
class Curve:
    """Replicate values on a common x grid; ``mean`` and ``stderr`` per point."""

    name: str
    x: np.ndarray
    values: np.ndarray  # (replicates, len(x))
    extra: dict = field(default_factory=dict)

    @property
    def mean(self) -> np.ndarray:
        return self.values.mean(axis=0)

    @property
    def stderr(self) -> np.ndarray:
        r = self.values.shape[0]
        if r < 2:
            return np.zeros(self.values.shape[1])
        return self.values.std(axis=0, ddof=1) / np.sqrt(r)


def _replicate_rng(seed: int, r: int) -> np.random.Generator:
    return make_rng(np.random.SeedSequence(seed, spawn_key=(r,)))


def _map(fn, jobs, workers):
    workers = workers or os.cpu_count() or 1
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            return list(pool.map(fn, jobs))
    return [fn(j) for j in jobs]


def _grid(cfg: ExperimentConfig) -> list[int]:
    top = cfg.L if cfg.max_flips is None else cfg.max_flips
    steps = list(range(0, top + 1, cfg.step_every))
    if steps[-1] != top:
        steps.append(top)
    return steps


class _NoisySet:
    """N copies of one string, perturbed one new position at a time.

    Each copy visits its positions in its own random order. A visited
    position is redrawn uniformly (so it flips with probability 1/2); after
    all L positions are visited the copies are independent random strings.
    """

    def __init__(self, x: BitString, N: int, rng):
        L = len(x)
        self.x = x
        self.order = np.array([rng.permutation(L) for _ in range(N)])
        self.coins = rng.integers(0, 2, size=(N, L), dtype=np.uint8)

    def at(self, m: int) -> list[BitString]:
        out = []
        for order, coins in zip(self.order, self.coins):
            bits = self.x.bits.copy()
            pos = order[:m]
            bits[pos] ^= coins[:m]
            out.append(BitString(bits, self.x.encoding))
        return out


def _noise_replicate(args):
    cfg, r, adjusted = args
    rng = _replicate_rng(cfg.seed, r)
    spec = cfg.compressor
    x = random_bitstring(cfg.L, rng, cfg.encoding)
    noisy = _NoisySet(x, cfg.N, rng)
    cal = None
    if adjusted:
        cal = _endpoint_calibration(x, cfg, rng)
    out = []
    for m in _grid(cfg):
        S = StringSet(noisy.at(m), spec)
        c = cal if adjusted else calibrate(S, spec, rng, "max", threads=1)
        out.append(psi(S, distance_matrix(S, spec, c, threads=1), "d1d", cfg.norm).psi)
    extra = {"d_min": cal.d_min, "d_max": cal.d_max} if adjusted else {}
    return out, extra


def _endpoint_calibration(x: BitString, cfg: ExperimentConfig, rng) -> Calibration:
    """Calibration from the two substitution endpoints.

    d_min: self-distance of the identical set's string. d_max: mean NCD
    between bit-permuted copies of an all-random set.
    """
    spec = cfg.compressor
    d_min = float(self_distances(StringSet([x], spec), spec)[0])
    R = [random_bitstring(cfg.L, rng, cfg.encoding) for _ in range(cfg.N)]
    shuffled = [permute_bits(s, rng) for s in R]
    sizes = [compressed_size(s, spec) for s in shuffled]
    pair = pairwise_ncd(shuffled, sizes, spec, threads=1)[np.tril_indices(cfg.N, -1)]
    return Calibration(max(d_min, 0.0), float(pair.mean()))


def noise_experiment(cfg: ExperimentConfig) -> Curve:
    """Self-calibrated psi of a set of identical strings as noise is added.

    At each step every string has one more (new, independently chosen)
    position redrawn at random. Each evaluated set is calibrated on itself.
    """
    res = _map(_noise_replicate, [(cfg, r, False) for r in range(cfg.replicates)], cfg.workers)
    return Curve("fig1", np.array(_grid(cfg)), np.array([v for v, _ in res]))


def adjusted_experiment(cfg: ExperimentConfig) -> Curve:
    """The noise experiment under one fixed calibration per replicate.

    The calibration comes from the substitution endpoints: the identical
    set's self-distance is the floor and the mean distance among a random
    set's permuted strings is the ceiling.
    """
    res = _map(_noise_replicate, [(cfg, r, True) for r in range(cfg.replicates)], cfg.workers)
    curve = Curve("fig3", np.array(_grid(cfg)), np.array([v for v, _ in res]))
    curve.extra["d_min"] = float(np.mean([e["d_min"] for _, e in res]))
    curve.extra["d_max"] = float(np.mean([e["d_max"] for _, e in res]))
    return curve


def _substitution_replicate(args):
    cfg, r = args
    rng = _replicate_rng(cfg.seed, r)
    spec = cfg.compressor
    x = random_bitstring(cfg.L, rng, cfg.encoding)
    fresh = [random_bitstring(cfg.L, rng, cfg.encoding) for _ in range(cfg.N)]
    out = []
    last = None
    for t in range(cfg.N + 1):
        S = StringSet(fresh[:t] + [x] * (cfg.N - t), spec)
        D = distance_matrix(S, spec, None, threads=1)
        out.append(psi(S, D, "d1d", cfg.norm).psi)
        last = D
    return out, float(last.raw[np.tril_indices(cfg.N, -1)].mean())


def substitution_experiment(cfg: ExperimentConfig) -> Curve:
    """Uncalibrated psi while identical strings are swapped for random ones.

    Step t has t random strings and N - t copies of the original. The exact
    value would be 0 at every step; the curve shows the estimator's error.
    ``extra["mean_random_ncd"]`` is the mean raw NCD of the all-random set.
    """
    res = _map(_substitution_replicate, [(cfg, r) for r in range(cfg.replicates)], cfg.workers)
    curve = Curve("fig2", np.arange(cfg.N + 1), np.array([v for v, _ in res]))
    curve.extra["mean_random_ncd"] = float(np.mean([m for _, m in res]))
    v = curve.mean
    curve.extra["endpoint_ratio"] = float(v[-1] / v[0]) if v[0] > 0 else float("inf")
    return curve


def rbn_experiment(cfg: ExperimentConfig, progress=None):
    """Bias sweep of random Boolean network trajectories."""
    return sweep(cfg.sweep_config(), progress)


def graph_experiment(cfg: ExperimentConfig) -> dict:
    """psi of two disjoint cliques versus the best graph a hill-climb finds."""
    n = cfg.graph_n
    base = two_cliques(n)
    best, best_psi = maximize_psi(n, cfg.iterations, cfg.restarts, make_rng(cfg.seed))
    return {
        "two_cliques": (base, graph_psi(base)),
        "searched": (best, best_psi),
    }


def run(cfg: ExperimentConfig, progress=None):
    return {
        "fig1": noise_experiment,
        "fig2": substitution_experiment,
        "fig3": adjusted_experiment,
        "fig4": lambda c: rbn_experiment(c, progress),
        "fig5": graph_experiment,
    }[cfg.experiment](cfg)


def config_header(cfg: ExperimentConfig) -> list[str]:
    """``#``-less header lines recording everything needed to rerun."""
    lines = [f"version={__version__}"]
    lines += [f"config={k}={v}" for k, v in cfg.items()]
    return lines


def write_curve_csv(curve: Curve, cfg: ExperimentConfig, out=None):
    buf = io.StringIO() if out is None else out
    for line in config_header(cfg):
        buf.write(f"#{line}\n")
    for k, v in curve.extra.items():
        buf.write(f"#{k}={v!r}\n")
    buf.write("step,value,stderr\n")
    for x, m, s in zip(curve.x, curve.mean, curve.stderr):
        buf.write(f"{int(x)},{float(m)!r},{float(s)!r}\n")
    return buf.getvalue() if out is None else None


def write_plot_csv(curve: Curve, out=None):
    """Plot-ready columns: x, mean, and a one-standard-error band."""
    buf = io.StringIO() if out is None else out
    buf.write("x,mean,lower,upper\n")
    for x, m, s in zip(curve.x, curve.mean, curve.stderr):
        buf.write(f"{int(x)},{float(m)!r},{float(m - s)!r},{float(m + s)!r}\n")
    return buf.getvalue() if out is None else None
