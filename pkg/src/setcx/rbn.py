"""Random Boolean networks: generation, synchronous dynamics and the bias sweep."""
from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bitstrings import BitString, make_rng
from .compression import DEFAULT_SPEC, CompressorSpec
from .errors import DomainError
from .setmeasures import calibrated_psi

__all__ = [
    "BooleanNetwork",
    "Trajectory",
    "SweepConfig",
    "SweepRow",
    "generate_network",
    "step",
    "trajectory",
    "sensitivity",
    "lyapunov",
    "critical_bias",
    "trajectory_psi",
    "sweep",
    "write_sweep_csv",
]


@dataclass(frozen=True, eq=False)
class BooleanNetwork:
    """n nodes, each reading k distinct inputs through a 2**k-entry truth table.

    ``inputs[v]`` lists the sources of node v; the first source is the most
    significant bit of the table index.
    """

    inputs: np.ndarray
    tables: np.ndarray
    p: float = float("nan")

    def __post_init__(self):
        inputs = np.array(self.inputs, dtype=np.int64)
        tables = np.array(self.tables, dtype=np.uint8)
        if inputs.ndim != 2 or tables.ndim != 2 or inputs.shape[0] != tables.shape[0]:
            raise DomainError("inputs must be (n, k) and tables (n, 2**k)")
        n, k = inputs.shape
        if tables.shape[1] != 2**k:
            raise DomainError(f"each truth table needs {2**k} entries")
        if inputs.size and (inputs.min() < 0 or inputs.max() >= n):
            raise DomainError("input index out of range")
        if any(len(set(row)) != k for row in inputs.tolist()):
            raise DomainError("a node's inputs must be distinct")
        if tables.size and tables.max() > 1:
            raise DomainError("truth tables must be binary")
        inputs.flags.writeable = False
        tables.flags.writeable = False
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "tables", tables)
        object.__setattr__(self, "_place", 1 << np.arange(k - 1, -1, -1, dtype=np.int64))

    @property
    def n(self) -> int:
        return self.inputs.shape[0]

    @property
    def k(self) -> int:
        return self.inputs.shape[1]


def generate_network(n: int, k: int, p: float, rng) -> BooleanNetwork:
    """Random network: inputs drawn without replacement from all n nodes
    (a node may read itself), table entries i.i.d. Bernoulli(p)."""
    if n < 1 or k < 1:
        raise DomainError("need n >= 1 and k >= 1")
    if k > n:
        raise DomainError(f"in-degree k={k} exceeds node count n={n}")
    if not 0.0 < p < 1.0:
        raise DomainError("bias p must lie in (0, 1)")
    rng = make_rng(rng)
    # argsort of uniform keys gives k distinct sources per node in one shot
    if k == n:
        inputs = np.argsort(rng.random((n, n)), axis=1)
    else:
        inputs = np.argpartition(rng.random((n, n)), k, axis=1)[:, :k]
        inputs = rng.permuted(inputs, axis=1)
    tables = (rng.random((n, 2**k)) < p).astype(np.uint8)
    return BooleanNetwork(inputs, tables, float(p))


def step(net: BooleanNetwork, state) -> np.ndarray:
    """One synchronous update of every node."""
    state = np.asarray(state, dtype=np.uint8)
    if state.shape != (net.n,):
        raise DomainError(f"state must have length {net.n}")
    idx = state[net.inputs].astype(np.int64) @ net._place
    return net.tables[np.arange(net.n), idx]


@dataclass(frozen=True)
class Trajectory:
    states: np.ndarray  # (len, n) uint8
    burn_in: int
    seed: object = None

    def bitstrings(self, encoding: str = "ascii01") -> list[BitString]:
        return [BitString(s, encoding) for s in self.states]

    def __len__(self):
        return self.states.shape[0]


def trajectory(net: BooleanNetwork, rng, burn_in: int = 100, length: int = 20,
               initial=None) -> Trajectory:
    """Run from a uniform random state and record `length` states after burn-in.

    The initial state (drawn from `rng` unless given) is never recorded:
    with ``burn_in=0`` the first recorded state is one update after it.
    """
    if burn_in < 0 or length < 1:
        raise DomainError("need burn_in >= 0 and length >= 1")
    if initial is None:
        state = make_rng(rng).integers(0, 2, size=net.n, dtype=np.uint8)
    else:
        state = np.asarray(initial, dtype=np.uint8)
        if state.shape != (net.n,):
            raise DomainError(f"initial state must have length {net.n}")
    for _ in range(burn_in):
        state = step(net, state)
    out = np.empty((length, net.n), dtype=np.uint8)
    for t in range(length):
        state = step(net, state)
        out[t] = state
    return Trajectory(out, burn_in)


def sensitivity(k: int, p: float) -> float:
    """Average sensitivity 2kp(1-p) of a random k-input function with bias p."""
    if k < 1 or not 0.0 < p < 1.0:
        raise DomainError("need k >= 1 and p in (0, 1)")
    return 2.0 * k * p * (1.0 - p)


def lyapunov(k: int, p: float) -> float:
    """Natural log of the average sensitivity."""
    return math.log(sensitivity(k, p))


def critical_bias(k: int) -> tuple[float, float]:
    """Both roots of 2kp(1-p) = 1; raises when k = 1 (no critical point)."""
    disc = 1.0 - 2.0 / k
    if disc < 0:
        raise DomainError(f"no critical bias exists for k={k}")
    r = math.sqrt(disc)
    return (1.0 - r) / 2.0, (1.0 + r) / 2.0


def trajectory_psi(traj: Trajectory, spec: CompressorSpec = DEFAULT_SPEC, rng=0,
                   norm: str = "xi") -> float:
    """Calibrated set complexity of the states in a trajectory (ascii01)."""
    return calibrated_psi(traj.bitstrings("ascii01"), spec, rng, "d1d", norm, threads=1).psi


@dataclass
class SweepConfig:
    """Bias sweep settings. Defaults match the full criticality sweep (k=3, n=1000)."""

    n: int = 1000
    k: int = 3
    p_min: float = 0.05
    p_max: float = 0.50
    p_step: float = 0.01
    networks_per_p: int = 20
    burn_in: int = 100
    traj_len: int = 20
    seed: int = 0
    spec: CompressorSpec = field(default_factory=CompressorSpec)
    norm: str = "xi"
    workers: int | None = None

    def __post_init__(self):
        if self.traj_len < 2:
            raise DomainError("trajectories need at least 2 states")
        if self.networks_per_p < 1:
            raise DomainError("need at least one network per bias value")
        if self.p_step <= 0 or self.p_max < self.p_min:
            raise DomainError("need p_step > 0 and p_max >= p_min")
        for p in self.p_values:
            if not 0.0 < p < 1.0:
                raise DomainError(f"bias {p} outside (0, 1)")

    @property
    def p_values(self) -> list[float]:
        count = int(round((self.p_max - self.p_min) / self.p_step)) + 1
        return [round(self.p_min + i * self.p_step, 10) for i in range(count)]


@dataclass
class SweepRow:
    p: float
    s: float
    lam: float
    mean_psi: float
    std_psi: float
    psis: list


def _network_job(args):
    n, k, p, burn_in, traj_len, seed, p_index, net_index, spec, norm = args
    ss = np.random.SeedSequence(seed, spawn_key=(p_index, net_index))
    rng = make_rng(ss)
    net = generate_network(n, k, p, rng)
    traj = trajectory(net, rng, burn_in, traj_len)
    return trajectory_psi(traj, spec, rng, norm)


def sweep(cfg: SweepConfig, progress=None) -> list[SweepRow]:
    """Mean and sample standard deviation of trajectory psi at each bias.

    Network j at bias index i draws from ``SeedSequence(seed, spawn_key=(i, j))``,
    so rows do not depend on worker count or scheduling.
    """
    jobs = [
        (cfg.n, cfg.k, p, cfg.burn_in, cfg.traj_len, cfg.seed, i, j, cfg.spec, cfg.norm)
        for i, p in enumerate(cfg.p_values)
        for j in range(cfg.networks_per_p)
    ]
    workers = cfg.workers or os.cpu_count() or 1
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_network_job, jobs, chunksize=4))
    else:
        results = []
        for job in jobs:
            results.append(_network_job(job))
            if progress is not None:
                progress(len(results), len(jobs))
    rows = []
    m = cfg.networks_per_p
    for i, p in enumerate(cfg.p_values):
        vals = np.array(results[i * m:(i + 1) * m])
        s = sensitivity(cfg.k, p)
        std = float(vals.std(ddof=1)) if m > 1 else 0.0
        rows.append(SweepRow(p, s, math.log(s), float(vals.mean()), std, vals.tolist()))
    return rows


SWEEP_FIELDS = ("p", "s", "lambda", "mean_psi", "std_psi", "n", "k", "networks",
                "traj_len", "burn_in", "seed")


def write_sweep_csv(rows, cfg: SweepConfig, out=None, header_lines=()):
    """Sweep table with one row per bias; lambda is the natural log of s."""
    buf = io.StringIO() if out is None else out
    for line in header_lines:
        buf.write(f"#{line}\n")
    buf.write("#lambda=ln(s)\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_FIELDS)
    for r in rows:
        w.writerow([r.p, repr(r.s), repr(r.lam), repr(r.mean_psi), repr(r.std_psi),
                    cfg.n, cfg.k, cfg.networks_per_p, cfg.traj_len, cfg.burn_in, cfg.seed])
    return buf.getvalue() if out is None else None
