import gzip
import zlib

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from setcx.bitstrings import random_bitstring
from setcx.compression import (
    ALGORITHMS,
    DEFAULT_SPEC,
    CompressorSpec,
    compressed_size,
    header_size,
    joint_size,
)
from setcx.errors import ConfigurationError


def test_default_is_max_effort_deflate():
    assert DEFAULT_SPEC.algorithm == "deflate"
    assert DEFAULT_SPEC.level == 9
    assert str(DEFAULT_SPEC) == "deflate:9"


def test_empty_input_costs_the_header():
    # measured once with zlib's raw deflate: a single empty final block
    assert compressed_size(b"") == 2
    assert header_size() == 2


@pytest.mark.parametrize("name", sorted(ALGORITHMS))
def test_every_backend_has_positive_header(name):
    assert header_size(CompressorSpec(name)) > 0


def test_gzip_backend_matches_stdlib_gzip(random_1000):
    data = random_1000.encode()
    assert compressed_size(data, CompressorSpec("gzip")) == len(gzip.compress(data, 9, mtime=0))
    assert compressed_size(data, CompressorSpec("zlib")) == len(zlib.compress(data, 9))


def test_repeated_zero_bytes_compress_far_below_random(random_1000):
    zeros = compressed_size(b"0" * 1000)
    rand = compressed_size(random_1000)
    assert zeros == 11
    assert rand == 206
    assert zeros < 40 < rand


def test_duplicate_is_nearly_free():
    x = b"0110" * 250
    cx = compressed_size(x)
    assert compressed_size(x + x) - cx < cx / 2


def test_joint_size_with_empty_is_identity(random_1000):
    assert joint_size(random_1000, b"") == compressed_size(random_1000)


def test_joint_of_copy_below_twice(random_1000):
    assert joint_size(random_1000, random_1000) < 2 * compressed_size(random_1000)


def test_independent_random_blobs_add_up():
    r = np.random.default_rng(5)
    for _ in range(10):
        x = random_bitstring(1000, r).encode()
        y = random_bitstring(1000, r).encode()
        total = compressed_size(x) + compressed_size(y)
        assert abs(joint_size(x, y) - total) <= 0.10 * total


def test_unsupported_algorithm_rejected():
    with pytest.raises(ConfigurationError):
        CompressorSpec("brotli")
    with pytest.raises(ConfigurationError):
        CompressorSpec("deflate", 12)
    with pytest.raises(ConfigurationError):
        CompressorSpec.parse("deflate:x")


def test_parse_roundtrip():
    assert CompressorSpec.parse("bz2:5") == CompressorSpec("bz2", 5)
    assert CompressorSpec.parse("lzma") == CompressorSpec("lzma", 9)


@settings(max_examples=60, deadline=None)
@given(st.binary(max_size=3000))
def test_deterministic_and_bounded(data):
    h0 = header_size()
    a = compressed_size(data)
    assert a == compressed_size(data)
    # stored blocks cost 5 bytes per 64 KiB plus the final empty block
    assert a <= len(data) + h0 + 5 * (len(data) // 65535 + 1)


@settings(max_examples=40, deadline=None)
@given(st.binary(max_size=1500), st.binary(max_size=1500))
def test_subadditive_up_to_header(x, y):
    assert joint_size(x, y) <= compressed_size(x) + compressed_size(y) + header_size()
