#
# Copyright (C) 2024 Canonical Ltd.
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU Affero General Public License as
# published by the Free Software Foundation, either version 3 of the
# License, or (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU Affero General Public License for more details.
#
# You should have received a copy of the GNU Affero General Public License
# along with this program. If not, see <https://www.gnu.org/licenses/>.
#

"""Bit level helpers for subfile payloads.

Payloads are packed most-significant-bit first into ceil(bits/8) bytes. The
padding bits in the final byte are always zero, so XOR of packed payloads
never disturbs them.
"""

from typing import Sequence, Union

import numpy as np

from coded_cache.exception import ParameterError, SizeMismatchError

BitsLike = Union[str, Sequence[int], np.ndarray]


def payload_size(nbits: int) -> int:
    """Number of bytes holding nbits packed bits."""
    return (nbits + 7) // 8


def as_bits(value: BitsLike) -> np.ndarray:
    """Convert a "0101" string or a 0/1 sequence to a uint8 bit array."""
    if isinstance(value, str):
        bits = np.frombuffer(value.encode("ascii"), dtype=np.uint8) - ord("0")
    else:
        bits = np.asarray(value, dtype=np.uint8)
    if bits.ndim != 1 or np.any(bits > 1):
        raise ParameterError("bit strings may only contain 0 and 1")
    return bits


def pack_bits(bits: BitsLike) -> bytes:
    """Pack bits MSB-first, zero-padding the final byte."""
    return np.packbits(as_bits(bits)).tobytes()


def unpack_bits(payload: bytes, nbits: int) -> np.ndarray:
    """Unpack the first nbits bits of a packed payload."""
    if len(payload) != payload_size(nbits):
        raise SizeMismatchError(
            f"payload of {len(payload)} bytes cannot hold exactly {nbits} bits"
        )
    return np.unpackbits(np.frombuffer(payload, dtype=np.uint8), count=nbits)


def bits_to_str(payload: bytes, nbits: int) -> str:
    """Render a packed payload as a "0101" string."""
    return "".join(map(str, unpack_bits(payload, nbits).tolist()))


def mask_padding(payload: bytes, nbits: int) -> bytes:
    """Clear the padding bits after the first nbits bits."""
    return pack_bits(unpack_bits(payload, nbits))


def xor_payloads(payloads: Sequence[bytes], nbytes: int) -> bytes:
    """Bitwise XOR of equally sized packed payloads.

    :param payloads: the payloads to combine; may be empty.
    :param nbytes: the size every payload must have.
    :return: the XOR sum, all zero bytes for an empty input.
    """
    if any(len(p) != nbytes for p in payloads):
        sizes = sorted({len(p) for p in payloads})
        raise SizeMismatchError(f"cannot XOR payloads of sizes {sizes} bytes, need {nbytes}")
    if not payloads:
        return bytes(nbytes)
    stacked = np.frombuffer(b"".join(payloads), dtype=np.uint8).reshape(len(payloads), nbytes)
    return np.bitwise_xor.reduce(stacked, axis=0).tobytes()


def join_payloads(payloads: Sequence[bytes], nbits: int) -> bytes:
    """Concatenate payloads of nbits bits each at bit granularity."""
    if not payloads:
        return b""
    return pack_bits(np.concatenate([unpack_bits(p, nbits) for p in payloads]))
