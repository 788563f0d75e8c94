"""Ordered collections of bit strings with cached compressed sizes."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .bitstrings import BitString
from .compression import DEFAULT_SPEC, CompressorSpec, compressed_size
from .errors import DomainError

__all__ = ["StringSet"]


class StringSet:
    """Members in input order plus their compressed sizes under one backend.

    ``order`` lists member indices by increasing compressed size, ties broken
    by encoded bytes and then by input index. Measures never depend on this
    order; it exists for reporting.
    """

    def __init__(self, members: Sequence[BitString], spec: CompressorSpec = DEFAULT_SPEC):
        members = list(members)
        if not members:
            raise DomainError("a string set needs at least one member")
        for m in members:
            if not isinstance(m, BitString):
                raise TypeError("StringSet members must be BitString instances")
            if len(m) < 1:
                raise DomainError("set members must have at least one bit")
        self.members = tuple(members)
        self.spec = spec
        sizes = np.array([compressed_size(m, spec) for m in members], dtype=np.int64)
        sizes.flags.writeable = False
        self.sizes = sizes
        self.order = tuple(
            sorted(range(len(members)), key=lambda i: (sizes[i], members[i].encode(), i))
        )

    def __len__(self):
        return len(self.members)

    def __getitem__(self, i):
        return self.members[i]

    def __iter__(self):
        return iter(self.members)

    def complexities(self, length_normalized: bool = False) -> np.ndarray:
        """Compressed sizes as floats, optionally divided by encoded length."""
        c = self.sizes.astype(float)
        if length_normalized:
            c = c / np.array([len(m.encode()) for m in self.members], dtype=float)
        return c

    def __repr__(self):
        return f"StringSet(n={len(self)}, spec={self.spec})"
