"""
Compression as a complexity proxy
=================================

Compressed length stands in for information content. Here we look at how
the default DEFLATE backend treats random and structured bit strings, and
at the normalized compression distance (NCD) between them.
"""

# %%
import numpy as np

from setcx.bitstrings import BitString, make_rng, permute_bits, random_bitstring
from setcx.compression import CompressorSpec, compressed_size, header_size
from setcx.infodist import ncd_raw

rng = make_rng(0)
spec = CompressorSpec()  # deflate, maximum level
print(spec, "empty input costs", header_size(spec), "bytes")

# %%
# A constant string compresses to almost nothing, a random one does not.
zeros = BitString("0" * 1000)
x = random_bitstring(1000, rng)
print("zeros :", compressed_size(zeros))
print("random:", compressed_size(x))

# %%
# One bit per ASCII character wastes 7/8 of each byte; packing removes it.
for enc in ("ascii01", "packed"):
    print(enc, compressed_size(x.with_encoding(enc)))

# %%
# NCD of a string with itself is small but not zero. Against an unrelated
# string it approaches one. A bit permutation keeps the weight but destroys
# shared structure, so it behaves like an unrelated string.
y = random_bitstring(1000, rng)
print("self     ", ncd_raw(x, x))
print("random   ", ncd_raw(x, y))
print("permuted ", ncd_raw(x, permute_bits(x, rng)))

# %%
# The random-pair mean depends on the encoding and on the compressor.
for enc, algo in [("ascii01", "deflate"), ("packed", "zlib"), ("ascii01", "lzma")]:
    s = CompressorSpec(algo)
    vals = [ncd_raw(random_bitstring(1000, rng, enc), random_bitstring(1000, rng, enc), s)
            for _ in range(50)]
    print(f"{enc:8s} {algo:8s} mean NCD {np.mean(vals):.3f}")
