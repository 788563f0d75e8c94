"""Set-complexity measures built from complexities and pairwise distances.

Every pairwise measure has the form

    norm_factor * sum over unordered pairs (i, j) of max(C_i, C_j) * kernel(d_ij)

where ``C`` are the members' complexities (compressed sizes, in bytes) and
``d`` their distances. Two normalizations are offered: ``"xi"`` uses
1/(N-1) and ``"pairs_mean"`` uses 2/(N(N-1)), which makes the measure a mean
over pairs.

Sums go through :func:`math.fsum`, so results are independent of the order
in which members are supplied.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, fields

import numpy as np

from .compression import DEFAULT_SPEC, CompressorSpec, compressed_size, joint_size
from .errors import DomainError
from .infodist import DistanceMatrix
from .stringset import StringSet

__all__ = [
    "NORMS",
    "Kernel",
    "KERNELS",
    "MeasureReport",
    "norm_factor",
    "theta",
    "theta_pair",
    "lambda_avg",
    "phi",
    "psi",
    "pi_general",
    "decomposition",
    "avg_distance",
    "conditional_complexity",
    "mutual_info_estimate",
    "mutual_info_direct",
]

NORMS = ("xi", "pairs_mean")


def _norm_name(norm: str) -> str:
    norm = norm.replace("-", "_")
    if norm not in NORMS:
        raise DomainError(f"norm must be one of {NORMS}, not {norm!r}")
    return norm


def norm_factor(n: int, norm: str = "xi") -> float:
    if n < 2:
        raise DomainError("pairwise measures need at least two members")
    norm = _norm_name(norm)
    return 1.0 / (n - 1) if norm == "xi" else 2.0 / (n * (n - 1))


def _xlogx(x):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(x > 0, x * np.log(np.where(x > 0, x, 1.0)), 0.0)
    return out


_NAMED = {
    "d1d": ("d(1-d)", lambda d: d * (1.0 - d)),
    "d": ("d", lambda d: d),
    "1d": ("1-d", lambda d: 1.0 - d),
    "dlnd": ("d ln d", _xlogx),
    "1dln1d": ("(1-d) ln(1-d)", lambda d: _xlogx(1.0 - d)),
}

KERNELS = tuple(_NAMED)


@dataclass(frozen=True)
class Kernel:
    """A pairwise distance weighting.

    Either one of the named kernels in :data:`KERNELS`, or a finite list of
    ``(alpha, beta, a)`` terms meaning ``sum a * d**alpha * (1-d)**beta``
    with alpha, beta >= 1, so the kernel vanishes at d = 0 and d = 1.
    """

    name: str = "d1d"
    coefficients: tuple = ()

    def __post_init__(self):
        if self.coefficients:
            coeffs = tuple((int(a), int(b), float(c)) for a, b, c in self.coefficients)
            for a, b, _ in coeffs:
                if a < 1 or b < 1:
                    raise DomainError("kernel exponents alpha and beta must be >= 1")
            object.__setattr__(self, "coefficients", coeffs)
            if self.name == "d1d":
                object.__setattr__(self, "name", "poly")
        elif self.name not in _NAMED:
            raise DomainError(f"unknown kernel {self.name!r}; choose from {KERNELS}")

    @classmethod
    def polynomial(cls, coefficients) -> "Kernel":
        coefficients = tuple(coefficients)
        if not coefficients:
            raise DomainError("polynomial kernel needs at least one term")
        return cls("poly", coefficients)

    def __call__(self, d):
        d = np.asarray(d, dtype=float)
        if self.coefficients:
            out = np.zeros_like(d)
            for a, b, c in self.coefficients:
                out = out + c * d**a * (1.0 - d) ** b
            return out
        return _NAMED[self.name][1](d)

    @property
    def label(self) -> str:
        if self.coefficients:
            return " + ".join(f"{c:g}*d^{a}(1-d)^{b}" for a, b, c in self.coefficients)
        return _NAMED[self.name][0]


def _kernel(kernel) -> Kernel:
    if isinstance(kernel, Kernel):
        return kernel
    return Kernel(str(kernel))


def _weights(S) -> np.ndarray:
    if isinstance(S, StringSet):
        return S.complexities()
    c = np.asarray(S, dtype=float).ravel()
    if c.size == 0:
        raise DomainError("empty set")
    return c


def _distances(D, n: int) -> np.ndarray:
    if isinstance(D, DistanceMatrix):
        d = D.values
    else:
        d = np.asarray(D, dtype=float)
    if d.shape != (n, n):
        raise DomainError(f"distance matrix shape {d.shape} does not match set size {n}")
    return d


def _pairs(S, D):
    """Per-pair (i, j, C_max, d) arrays over i > j."""
    c = _weights(S)
    n = c.size
    if n < 2:
        raise DomainError("pairwise measures need at least two members")
    d = _distances(D, n)
    ii, jj = np.tril_indices(n, -1)
    return ii, jj, np.maximum(c[ii], c[jj]), d[ii, jj]


def _pair_sum(S, D, kernel: Kernel, norm: str) -> float:
    _, _, cmax, d = _pairs(S, D)
    return norm_factor(_weights(S).size, norm) * math.fsum(cmax * kernel(d))


def theta(S) -> float:
    """Plain sum of member complexities."""
    return math.fsum(_weights(S))


def theta_pair(S, norm: str = "xi") -> float:
    """norm_factor times the sum over pairs of the larger complexity."""
    c = _weights(S)
    ii, jj = np.tril_indices(c.size, -1)
    return norm_factor(c.size, norm) * math.fsum(np.maximum(c[ii], c[jj]))


def lambda_avg(S, D, norm: str = "xi") -> float:
    """Complexity-weighted average distance (average conditional complexity)."""
    return _pair_sum(S, D, Kernel("d"), norm)


def phi(S, D, norm: str = "xi") -> float:
    """Mutual-information sum: weights (1 - d), zero for a mutually random set."""
    return _pair_sum(S, D, Kernel("1d"), norm)


def pi_general(S, D, coefficients, norm: str = "xi") -> float:
    """Measure with the polynomial kernel ``sum a * d**alpha * (1-d)**beta``."""
    return _pair_sum(S, D, Kernel.polynomial(coefficients), norm)


def decomposition(S, D, norm: str = "xi"):
    """Mean-field split of psi: returns ``(lambda, delta_sq, psi)``.

    ``delta_sq = norm_factor * sum C_max d**2 - lambda**2``, and
    ``psi = lambda * (1 - lambda) - delta_sq`` holds algebraically.
    """
    _, _, cmax, d = _pairs(S, D)
    f = norm_factor(_weights(S).size, norm)
    lam = f * math.fsum(cmax * d)
    second = f * math.fsum(cmax * d * d)
    p = f * math.fsum(cmax * Kernel("d1d")(d))
    return lam, second - lam * lam, p


@dataclass
class MeasureReport:
    """All measures of one set under a single kernel and normalization."""

    n: int
    norm: str
    theta: float
    theta_pair: float
    lambda_: float
    phi: float
    psi: float
    delta_sq: float
    kernel: str = "d(1-d)"
    per_pair: list | None = field(default=None, repr=False)

    CSV_FIELDS = ("n", "norm", "theta", "theta_pair", "lambda", "phi", "psi", "delta_sq")

    def row(self) -> list:
        return [self.n, self.norm, self.theta, self.theta_pair, self.lambda_,
                self.phi, self.psi, self.delta_sq]

    def to_csv(self, out=None, header: bool = True):
        buf = io.StringIO() if out is None else out
        w = csv.writer(buf, lineterminator="\n")
        if header:
            w.writerow(self.CSV_FIELDS)
        w.writerow([repr(v) if isinstance(v, float) else v for v in self.row()])
        return buf.getvalue() if out is None else None

    def per_pair_csv(self, out=None):
        if self.per_pair is None:
            raise DomainError("report was built without per-pair terms")
        buf = io.StringIO() if out is None else out
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["i", "j", "c_max", "d", "contribution"])
        for i, j, c, d, t in self.per_pair:
            w.writerow([i, j, repr(c), repr(d), repr(t)])
        return buf.getvalue() if out is None else None


def psi(S, D, kernel="d1d", norm: str = "xi", per_pair: bool = False) -> MeasureReport:
    """Set complexity with its companion statistics.

    ``psi = norm_factor * sum over pairs of C_max * kernel(d)``; with the
    default kernel d(1-d) it vanishes both for identical sets (all d = 0)
    and for mutually random ones (all d = 1).
    """
    kernel = _kernel(kernel)
    norm = _norm_name(norm)
    ii, jj, cmax, d = _pairs(S, D)
    n = _weights(S).size
    f = norm_factor(n, norm)
    terms = cmax * kernel(d)
    lam, dsq, _ = decomposition(S, D, norm)
    pairs = None
    if per_pair:
        pairs = [(int(a), int(b), float(c), float(x), f * float(t))
                 for a, b, c, x, t in zip(jj, ii, cmax, d, terms)]
        pairs.sort()
    return MeasureReport(
        n=n,
        norm=norm,
        theta=theta(S),
        theta_pair=f * math.fsum(cmax),
        lambda_=lam,
        phi=f * math.fsum(cmax * (1.0 - d)),
        psi=f * math.fsum(terms),
        delta_sq=dsq,
        kernel=kernel.label,
        per_pair=pairs,
    )


def avg_distance(D) -> float:
    """Mean distance over unordered pairs."""
    d = D.values if isinstance(D, DistanceMatrix) else np.asarray(D, dtype=float)
    n = d.shape[0]
    if n < 2:
        raise DomainError("average distance needs at least two members")
    return math.fsum(d[np.tril_indices(n, -1)]) * 2.0 / (n * (n - 1))


def _size(x, spec) -> float:
    if isinstance(x, (int, float, np.integer, np.floating)):
        return float(x)
    return float(compressed_size(x, spec))


def _check_d(d):
    if not 0.0 <= d <= 1.0:
        raise DomainError("distance must lie in [0, 1]")


def conditional_complexity(x, y, d_xy: float, spec: CompressorSpec = DEFAULT_SPEC) -> float:
    """Information needed to describe the more complex of x, y given the other.

    `x` and `y` are complexities or strings (compressed with `spec`).
    """
    _check_d(d_xy)
    return d_xy * max(_size(x, spec), _size(y, spec))


def mutual_info_estimate(x, y, d_xy: float, spec: CompressorSpec = DEFAULT_SPEC) -> float:
    """Shared information read off a distance: ``max(C(x), C(y)) * (1 - d)``."""
    _check_d(d_xy)
    return (1.0 - d_xy) * max(_size(x, spec), _size(y, spec))


def mutual_info_direct(x, y, spec: CompressorSpec = DEFAULT_SPEC) -> float:
    """Shared information from sizes alone: ``C(x) + C(y) - C(xy)``."""
    return float(compressed_size(x, spec) + compressed_size(y, spec) - joint_size(x, y, spec))


def calibrated_psi(strings, spec: CompressorSpec = DEFAULT_SPEC, rng=0, kernel="d1d",
                   norm: str = "xi", upper: str = "max", threads=None) -> MeasureReport:
    """Compress, self-calibrate and score a collection of bit strings.

    A set whose members are all the same string scores 0 even when the
    calibration range is degenerate (a constant string is its own
    permutation).
    """
    from .errors import CalibrationError
    from .infodist import calibrate, distance_matrix

    S = strings if isinstance(strings, StringSet) else StringSet(strings, spec)
    try:
        cal = calibrate(S, S.spec, rng, upper=upper, threads=threads)
    except CalibrationError:
        first = S.members[0]
        if all(m == first for m in S.members):
            return psi(S, np.zeros((len(S), len(S))), kernel, norm)
        raise
    return psi(S, distance_matrix(S, S.spec, cal, threads), kernel, norm)
