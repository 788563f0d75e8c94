"""Bit strings, their byte encodings, and seeded random operations on them."""
from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .errors import DomainError, FormatError

__all__ = [
    "ENCODINGS",
    "BitString",
    "make_rng",
    "random_bitstring",
    "flip_bits",
    "permute_bits",
    "read_string_set",
    "write_string_set",
]

ENCODINGS = ("ascii01", "packed")


def make_rng(seed) -> np.random.Generator:
    """PCG64 generator for an integer seed or a SeedSequence.

    Passing a Generator returns it unchanged, so callers can thread one
    stream through several operations.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


class BitString:
    """Immutable finite sequence of bits.

    Bits are held in a read-only ``uint8`` array. ``encoding`` decides how
    :meth:`encode` turns them into bytes for a compressor.
    """

    __slots__ = ("_bits", "encoding", "_bytes")

    def __init__(self, bits, encoding: str = "ascii01"):
        if encoding not in ENCODINGS:
            raise DomainError(f"unknown encoding {encoding!r}")
        if isinstance(bits, str):
            if set(bits) - {"0", "1"}:
                raise DomainError("bit string literal may only contain '0' and '1'")
            arr = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
        else:
            arr = np.asarray(bits)
            if arr.ndim != 1:
                raise DomainError("bits must be one-dimensional")
            if arr.size and (arr.min() < 0 or arr.max() > 1):
                raise DomainError("bits must be 0 or 1")
            arr = arr.astype(np.uint8)
        arr = arr.copy()
        arr.flags.writeable = False
        self._bits = arr
        self.encoding = encoding
        self._bytes = None

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    def __len__(self):
        return self._bits.size

    def __str__(self):
        return (self._bits + ord("0")).tobytes().decode("ascii")

    def __repr__(self):
        s = str(self)
        if len(s) > 24:
            s = s[:20] + "..."
        return f"BitString('{s}', L={len(self)}, encoding={self.encoding!r})"

    def __eq__(self, other):
        if not isinstance(other, BitString):
            return NotImplemented
        return np.array_equal(self._bits, other._bits)

    def __hash__(self):
        return hash(self._bits.tobytes())

    @property
    def weight(self) -> int:
        """Number of ones."""
        return int(self._bits.sum())

    def hamming(self, other: "BitString") -> int:
        if len(self) != len(other):
            raise DomainError("Hamming distance needs equal lengths")
        return int(np.count_nonzero(self._bits != other._bits))

    def with_encoding(self, encoding: str) -> "BitString":
        return BitString(self._bits, encoding)

    def encode(self) -> bytes:
        """Bytes fed to the compressor.

        ascii01 writes one ``'0'``/``'1'`` byte per bit. packed writes 8 bits
        per byte, most significant first, zero-padding the last byte.
        """
        if self._bytes is None:
            if self.encoding == "ascii01":
                self._bytes = (self._bits + ord("0")).tobytes()
            else:
                self._bytes = np.packbits(self._bits).tobytes()
        return self._bytes

    @classmethod
    def decode(cls, data: bytes, length: int | None = None, encoding: str = "ascii01"):
        """Inverse of :meth:`encode`. packed data needs the bit `length`."""
        if encoding == "ascii01":
            return cls(data.decode("ascii"), "ascii01")
        if encoding != "packed":
            raise DomainError(f"unknown encoding {encoding!r}")
        bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8))
        if length is None:
            length = bits.size
        if length > bits.size or math.ceil(length / 8) != len(data):
            raise DomainError("packed length does not match byte count")
        return cls(bits[:length], "packed")


def random_bitstring(L: int, rng, encoding: str = "ascii01") -> BitString:
    """L i.i.d. uniform bits drawn from `rng`."""
    if L < 1:
        raise DomainError("bit string length must be at least 1")
    rng = make_rng(rng)
    return BitString(rng.integers(0, 2, size=L, dtype=np.uint8), encoding)


def flip_bits(x: BitString, positions) -> BitString:
    """Copy of `x` with each listed position inverted."""
    pos = np.asarray(sorted(positions) if isinstance(positions, (set, frozenset)) else positions,
                     dtype=np.int64).ravel()
    if pos.size:
        if pos.min() < 0 or pos.max() >= len(x):
            raise DomainError(f"flip position out of range for length {len(x)}")
        if np.unique(pos).size != pos.size:
            raise DomainError("flip positions must be distinct")
    bits = x.bits.copy()
    bits[pos] ^= 1
    return BitString(bits, x.encoding)


def permute_bits(x: BitString, rng) -> BitString:
    """Uniformly random rearrangement of the bits of `x`."""
    rng = make_rng(rng)
    return BitString(rng.permutation(x.bits), x.encoding)


def read_string_set(path) -> list[BitString]:
    """Read a string-set file: one '0'/'1' string per line.

    An optional first line ``#encoding=ascii01|packed`` selects the encoding
    used for compression. Other lines starting with ``#`` and blank lines are
    skipped.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="ascii")
    except UnicodeDecodeError as exc:
        raise FormatError("file is not ASCII", path) from exc
    encoding = "ascii01"
    strings = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r")
        if not line.strip():
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition("=")
            if key.strip() == "encoding":
                if strings:
                    raise FormatError("encoding header must precede the strings", path, lineno)
                value = value.strip()
                if value not in ENCODINGS:
                    raise FormatError(f"unknown encoding {value!r}", path, lineno)
                encoding = value
            continue
        line = line.strip()
        bad = set(line) - {"0", "1"}
        if bad:
            raise FormatError(f"unexpected character {sorted(bad)[0]!r}", path, lineno)
        strings.append(line)
    return [BitString(s, encoding) for s in strings]


def write_string_set(path, strings, encoding: str | None = None) -> None:
    """Write `strings` in the format read by :func:`read_string_set`."""
    strings = list(strings)
    if encoding is None:
        encoding = strings[0].encoding if strings else "ascii01"
    lines = [f"#encoding={encoding}"] + [str(s) for s in strings]
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")
