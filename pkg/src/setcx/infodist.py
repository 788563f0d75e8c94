"""Normalized compression distance, its calibration, and distance matrices."""
from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bitstrings import BitString, make_rng, permute_bits
from .compression import DEFAULT_SPEC, CompressorSpec, compressed_size, joint_size
from .errors import CalibrationError, DomainError
from .stringset import StringSet

__all__ = [
    "Calibration",
    "DistanceMatrix",
    "ncd_raw",
    "calibrate",
    "apply_calibration",
    "distance_matrix",
    "pairwise_ncd",
]


def _first(x: BitString, y: BitString, cx: int, cy: int, ix: int = 0, iy: int = 0) -> bool:
    """True when x goes first in the concatenation."""
    return (cx, x.encode(), ix) <= (cy, y.encode(), iy)


def ncd_raw(x: BitString, y: BitString, spec: CompressorSpec = DEFAULT_SPEC,
            cx: int | None = None, cy: int | None = None) -> float:
    """(C(xy) - min(C(x), C(y))) / max(C(x), C(y)).

    The string with the smaller compressed size is concatenated first (ties
    by byte order), so ``ncd_raw(x, y) == ncd_raw(y, x)`` exactly. The result
    is not clamped and can fall slightly outside [0, 1].
    Precomputed sizes may be passed as `cx` and `cy`.
    """
    if len(x) < 1 or len(y) < 1:
        raise DomainError("NCD needs nonempty strings")
    if cx is None:
        cx = compressed_size(x, spec)
    if cy is None:
        cy = compressed_size(y, spec)
    cxy = joint_size(x, y, spec) if _first(x, y, cx, cy) else joint_size(y, x, spec)
    return (cxy - min(cx, cy)) / max(cx, cy)


def _resolve_threads(threads):
    if threads is None:
        return os.cpu_count() or 1
    return max(1, int(threads))


def pairwise_ncd(members, sizes, spec: CompressorSpec = DEFAULT_SPEC, threads=None) -> np.ndarray:
    """Raw NCD for every unordered pair, as a symmetric matrix with zero diagonal.

    Each pair is compressed once, in canonical order, over the strictly lower
    triangle. Thread count never changes the result.
    """
    n = len(members)
    ii, jj = np.tril_indices(n, -1)

    def one(k):
        i, j = int(ii[k]), int(jj[k])
        x, y, cx, cy = members[i], members[j], int(sizes[i]), int(sizes[j])
        if _first(x, y, cx, cy, i, j):
            cxy = joint_size(x, y, spec)
        else:
            cxy = joint_size(y, x, spec)
        return (cxy - min(cx, cy)) / max(cx, cy)

    threads = _resolve_threads(threads)
    if threads == 1 or ii.size < 64:
        vals = [one(k) for k in range(ii.size)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            vals = list(pool.map(one, range(ii.size), chunksize=16))
    out = np.zeros((n, n))
    out[ii, jj] = vals
    out[jj, ii] = vals
    return out


@dataclass(frozen=True)
class Calibration:
    """Observable NCD range: self-distance floor and random-pair ceiling."""

    d_min: float
    d_max: float

    def __post_init__(self):
        if not (0.0 <= self.d_min < self.d_max):
            raise CalibrationError(
                f"degenerate calibration: need 0 <= d_min < d_max, "
                f"got d_min={self.d_min:.6g}, d_max={self.d_max:.6g}"
            )

    def __call__(self, d):
        return apply_calibration(d, self)


def apply_calibration(d, cal: Calibration):
    """Map raw NCD linearly so d_min -> 0 and d_max -> 1, then clamp to [0, 1].

    Works elementwise on arrays.
    """
    scaled = (np.asarray(d, dtype=float) - cal.d_min) / (cal.d_max - cal.d_min)
    out = np.clip(scaled, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def _as_stringset(S, spec) -> StringSet:
    if isinstance(S, StringSet):
        return S
    return StringSet(S, spec if spec is not None else DEFAULT_SPEC)


def self_distances(S: StringSet, spec: CompressorSpec | None = None) -> np.ndarray:
    """ncd_raw(x, x) for each member."""
    S = _as_stringset(S, spec)
    spec = S.spec if spec is None else spec
    return np.array([ncd_raw(x, x, spec, c, c) for x, c in zip(S.members, S.sizes)])


def calibrate(S, spec: CompressorSpec | None = None, rng=0, upper: str = "max",
              threads=None) -> Calibration:
    """Estimate the observable NCD range of a set.

    ``d_min`` is the smallest self-distance ncd_raw(x, x) over the members.
    ``d_max`` comes from one seeded bit-permuted copy of every member: the
    largest NCD over all pairs of copies (``upper="max"``), or their mean
    (``upper="mean"``).
    """
    S = _as_stringset(S, spec)
    spec = S.spec if spec is None else spec
    if len(S) < 2:
        raise DomainError("calibration needs at least two strings")
    if upper not in ("max", "mean"):
        raise DomainError(f"upper must be 'max' or 'mean', not {upper!r}")
    d_min = float(self_distances(S, spec).min())
    rng = make_rng(rng)
    shuffled = [permute_bits(x, rng) for x in S.members]
    sizes = [compressed_size(x, spec) for x in shuffled]
    pair = pairwise_ncd(shuffled, sizes, spec, threads)[np.tril_indices(len(S), -1)]
    d_max = float(pair.max() if upper == "max" else pair.mean())
    return Calibration(max(d_min, 0.0), d_max)


class DistanceMatrix:
    """Symmetric pairwise distances in [0, 1] with zero diagonal.

    ``raw`` keeps the unclamped NCD values when the matrix came from a
    compressor; ``calibration`` is the range used to scale them, if any.
    """

    def __init__(self, values, calibration: Calibration | None = None, raw=None):
        d = np.array(values, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise DomainError("distance matrix must be square")
        if d.shape[0] < 2:
            raise DomainError("distance matrix needs at least two members")
        if not np.array_equal(d, d.T):
            raise DomainError("distance matrix must be symmetric")
        if np.any(np.diag(d) != 0):
            raise DomainError("distance matrix diagonal must be zero")
        if np.any(d < 0) or np.any(d > 1) or not np.all(np.isfinite(d)):
            raise DomainError("distances must lie in [0, 1]")
        d.flags.writeable = False
        self.values = d
        self.calibration = calibration
        if raw is not None:
            raw = np.array(raw, dtype=float)
            raw.flags.writeable = False
        self.raw = raw

    @classmethod
    def uniform(cls, n: int, d: float) -> "DistanceMatrix":
        m = np.full((n, n), float(d))
        np.fill_diagonal(m, 0.0)
        return cls(m)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def __len__(self):
        return self.n

    def pair_values(self) -> np.ndarray:
        """Strictly-lower-triangle entries, row by row."""
        return self.values[np.tril_indices(self.n, -1)]

    def to_csv(self, out=None) -> str | None:
        """Write ``i,j,d`` rows for i < j. Returns the text if `out` is None."""
        buf = io.StringIO() if out is None else out
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["i", "j", "d"])
        n = self.n
        for i in range(n):
            for j in range(i + 1, n):
                w.writerow([i, j, repr(float(self.values[i, j]))])
        return buf.getvalue() if out is None else None

    def __repr__(self):
        cal = "calibrated" if self.calibration else "clamped"
        return f"DistanceMatrix(n={self.n}, {cal})"


def distance_matrix(S, spec: CompressorSpec | None = None, cal: Calibration | None = None,
                    threads=None) -> DistanceMatrix:
    """Pairwise NCD over a set, calibrated by `cal` or else clamped to [0, 1]."""
    S = _as_stringset(S, spec)
    spec = S.spec if spec is None else spec
    if len(S) < 2:
        raise DomainError("distance matrix needs at least two strings")
    sizes = S.sizes if spec == S.spec else [compressed_size(x, spec) for x in S.members]
    raw = pairwise_ncd(S.members, sizes, spec, threads)
    if cal is None:
        vals = np.clip(raw, 0.0, 1.0)
    else:
        vals = apply_calibration(raw, cal)
    np.fill_diagonal(vals, 0.0)
    return DistanceMatrix(vals, cal, raw)
