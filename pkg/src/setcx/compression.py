"""Lossless compressors used as computable upper bounds on Kolmogorov complexity.

Only compressed *sizes* are ever needed, so every backend here is a pure
function ``bytes -> int``. Calls share no state (no dictionary reuse), which
makes them deterministic and safe to run from many threads at once.

The reference backend is ``deflate``: zlib's DEFLATE engine (the one inside
gzip) at level 9, emitting a raw DEFLATE stream. Container framing (the zlib
or gzip header and checksum) is fixed overhead that carries no information
about the input, so it is not counted.
"""
from __future__ import annotations

import bz2
import lzma
import zlib
from dataclasses import dataclass

from .errors import ConfigurationError

__all__ = [
    "CompressorSpec",
    "DEFAULT_SPEC",
    "ALGORITHMS",
    "compressed_size",
    "joint_size",
    "header_size",
]


def _deflate(data: bytes, level: int) -> int:
    c = zlib.compressobj(level, zlib.DEFLATED, -15, 9)
    return len(c.compress(data)) + len(c.flush())


def _zlib(data: bytes, level: int) -> int:
    return len(zlib.compress(data, level))


def _gzip(data: bytes, level: int) -> int:
    # gzip member = 10-byte header + raw deflate + crc32 + isize; mtime fixed at 0
    return 18 + _deflate(data, level)


def _bz2(data: bytes, level: int) -> int:
    return len(bz2.compress(data, level))


def _lzma(data: bytes, level: int) -> int:
    filters = [{"id": lzma.FILTER_LZMA2, "preset": level | lzma.PRESET_EXTREME}]
    return len(lzma.compress(data, format=lzma.FORMAT_RAW, filters=filters))


# name -> (size function, valid levels, maximum-effort level)
ALGORITHMS = {
    "deflate": (_deflate, range(0, 10), 9),
    "zlib": (_zlib, range(0, 10), 9),
    "gzip": (_gzip, range(0, 10), 9),
    "bz2": (_bz2, range(1, 10), 9),
    "lzma": (_lzma, range(0, 10), 9),
}


@dataclass(frozen=True)
class CompressorSpec:
    """Backend name and effort level. ``level=None`` means maximum effort."""

    algorithm: str = "deflate"
    level: int | None = None

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigurationError(
                f"unsupported compressor {self.algorithm!r}; "
                f"choose one of {', '.join(sorted(ALGORITHMS))}"
            )
        _, levels, top = ALGORITHMS[self.algorithm]
        if self.level is None:
            object.__setattr__(self, "level", top)
        elif self.level not in levels:
            raise ConfigurationError(
                f"level {self.level} invalid for {self.algorithm} "
                f"(allowed {levels.start}..{levels.stop - 1})"
            )

    @classmethod
    def parse(cls, text: str) -> "CompressorSpec":
        """Parse ``"name"`` or ``"name:level"``."""
        name, _, level = text.strip().partition(":")
        if level:
            try:
                return cls(name, int(level))
            except ValueError as exc:
                if isinstance(exc, ConfigurationError):
                    raise
                raise ConfigurationError(f"bad compressor level in {text!r}") from None
        return cls(name)

    def __str__(self) -> str:
        return f"{self.algorithm}:{self.level}"


DEFAULT_SPEC = CompressorSpec()


def _as_bytes(x) -> bytes:
    if isinstance(x, bytes):
        return x
    if isinstance(x, (bytearray, memoryview)):
        return bytes(x)
    encode = getattr(x, "encode", None)
    if encode is not None and not isinstance(x, str):
        return encode()
    raise TypeError(f"expected a byte sequence, got {type(x).__name__}")


def compressed_size(x, spec: CompressorSpec = DEFAULT_SPEC) -> int:
    """Size in bytes of the compressed form of `x`.

    `x` is any bytes-like object, or an object with an ``encode()`` method
    returning bytes (e.g. :class:`~setcx.bitstrings.BitString`).
    """
    fn = ALGORITHMS[spec.algorithm][0]
    return fn(_as_bytes(x), spec.level)


def joint_size(x, y, spec: CompressorSpec = DEFAULT_SPEC) -> int:
    """Compressed size of `x` followed directly by `y` (no separator)."""
    fn = ALGORITHMS[spec.algorithm][0]
    return fn(_as_bytes(x) + _as_bytes(y), spec.level)


def header_size(spec: CompressorSpec = DEFAULT_SPEC) -> int:
    """Compressed size of the empty input, the backend's fixed overhead."""
    return compressed_size(b"", spec)
