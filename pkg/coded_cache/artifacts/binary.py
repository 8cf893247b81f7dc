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

"""Binary cache image and transcript formats.

Cache image::

    "MACC" | version u8 | N u16 | K u16 | L u16 | subfile_bits u32
    K cache blocks of q entries: position j u16 | payload

Transcript::

    "MACX" | version u8 | N u16 | K u16 | L u16 | subfile_bits u32
    demand: K x u8 | entry count u32
    entries: n u16 | j u16 | origin u8 (0 forced, 1 extra) | payload

Integers are big-endian. A payload is ceil(subfile_bits/8) bytes packed
MSB-first with zero padding in the low-order bits of the last byte.
"""

import struct
from typing import List

from coded_cache import bits
from coded_cache.core import CyclicIndex, SystemParams, validate_params
from coded_cache.delivery import DemandVector, Origin, Transcript, TranscriptEntry
from coded_cache.exception import (
    BadMagicError,
    InvariantViolationError,
    ParameterError,
    TruncatedStreamError,
    VersionMismatchError,
)
from coded_cache.placement import CacheArray, CodedFile, cache_content_indices

CACHE_MAGIC = b"MACC"
TRANSCRIPT_MAGIC = b"MACX"
FORMAT_VERSION = 1

_PARAMS = struct.Struct(">HHHI")
_CACHE_ENTRY = struct.Struct(">H")
_TRANSCRIPT_ENTRY = struct.Struct(">HHB")
_COUNT = struct.Struct(">I")

ORIGIN_CODES = {Origin.FORCED: 0, Origin.EXTRA: 1}
ORIGINS = {code: origin for origin, code in ORIGIN_CODES.items()}


class _Reader:
    """Cursor over a byte stream that reports the offset of every failure."""

    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def take(self, size: int, what: str) -> bytes:
        if self.offset + size > len(self.data):
            raise TruncatedStreamError(
                self.offset,
                f"truncated stream: {what} needs {size} bytes, "
                f"{len(self.data) - self.offset} left",
            )
        chunk = self.data[self.offset:self.offset + size]
        self.offset += size
        return chunk

    def unpack(self, layout: struct.Struct, what: str) -> tuple:
        return layout.unpack(self.take(layout.size, what))

    def finish(self) -> None:
        if self.offset != len(self.data):
            raise InvariantViolationError(
                self.offset, f"{len(self.data) - self.offset} trailing bytes"
            )


def _header(magic: bytes, params: SystemParams) -> bytes:
    if max(params.N, params.K, params.L) > 0xFFFF or params.subfile_bits > 0xFFFFFFFF:
        raise ParameterError(f"{params.triple()} does not fit the artifact header")
    return magic + bytes([FORMAT_VERSION]) + _PARAMS.pack(
        params.N, params.K, params.L, params.subfile_bits
    )


def _read_header(reader: _Reader, magic: bytes) -> SystemParams:
    found = reader.take(len(magic), "magic")
    if found != magic:
        raise BadMagicError(0, f"bad magic {found!r}, expected {magic!r}")
    (version,) = reader.take(1, "format version")
    if version != FORMAT_VERSION:
        raise VersionMismatchError(
            len(magic), f"format version {version}, expected {FORMAT_VERSION}"
        )
    at = reader.offset
    N, K, L, subfile_bits = reader.unpack(_PARAMS, "parameters")
    try:
        return validate_params(N, K, L, subfile_bits)
    except ParameterError as e:
        raise InvariantViolationError(at, f"invalid parameters: {e}") from e


def _read_payload(reader: _Reader, params: SystemParams, what: str) -> bytes:
    return bits.mask_padding(reader.take(params.payload_bytes, what), params.subfile_bits)


def serialize_caches(caches: CacheArray) -> bytes:
    """Encode the K cache contents, entries in placement order."""
    chunks = [_header(CACHE_MAGIC, caches.params)]
    for cache in caches.contents:
        for f in cache:
            chunks.append(_CACHE_ENTRY.pack(f.j))
            chunks.append(f.payload)
    return b"".join(chunks)


def deserialize_caches(data: bytes) -> CacheArray:
    """Decode a cache image, checking the placement structure."""
    reader = _Reader(data)
    params = _read_header(reader, CACHE_MAGIC)
    contents = []
    for k in range(1, params.K + 1):
        entries: List[CodedFile] = []
        for expected in cache_content_indices(CyclicIndex(k), params):
            at = reader.offset
            (j,) = reader.unpack(_CACHE_ENTRY, f"cache {k} position")
            if j != expected:
                raise InvariantViolationError(
                    at, f"cache {k} stores position {j}, placement puts {expected} there"
                )
            entries.append(CodedFile(j=j, payload=_read_payload(reader, params, f"F_{j}")))
        contents.append(tuple(entries))
    reader.finish()
    return CacheArray(params=params, contents=tuple(contents))


def serialize_transcript(t: Transcript) -> bytes:
    """Encode a transcript."""
    params = t.params
    if max(t.demand.d) > 0xFF:
        raise ParameterError(f"demand vector {t.demand} does not fit one byte per user")
    chunks = [_header(TRANSCRIPT_MAGIC, params), bytes(t.demand.d), _COUNT.pack(len(t.entries))]
    for e in t.entries:
        chunks.append(_TRANSCRIPT_ENTRY.pack(e.n, e.j, ORIGIN_CODES[e.origin]))
        chunks.append(e.payload)
    return b"".join(chunks)


def deserialize_transcript(data: bytes) -> Transcript:
    """Decode a transcript, checking every label against the parameters.

    Entry counts other than K(N-1) are accepted; whether such a transcript
    decodes is up to the decoder.
    """
    reader = _Reader(data)
    params = _read_header(reader, TRANSCRIPT_MAGIC)
    at = reader.offset
    demand = tuple(reader.take(params.K, "demand vector"))
    for k, value in enumerate(demand):
        if not 1 <= value <= params.N:
            raise InvariantViolationError(at + k, f"demand out of range: d({k + 1}) = {value}")
    (count,) = reader.unpack(_COUNT, "entry count")
    entries = []
    for _ in range(count):
        at = reader.offset
        n, j, code = reader.unpack(_TRANSCRIPT_ENTRY, "transcript entry")
        if not (1 <= n <= params.N and 1 <= j <= params.K):
            raise InvariantViolationError(at, f"entry W_{{{n},{j}}} outside N={params.N}, "
                                              f"K={params.K}")
        if code not in ORIGINS:
            raise InvariantViolationError(at + 4, f"unknown origin code {code}")
        payload = _read_payload(reader, params, f"W_{{{n},{j}}}")
        entries.append(TranscriptEntry(n=n, j=j, payload=payload, origin=ORIGINS[code]))
    reader.finish()
    return Transcript(params=params, demand=DemandVector(d=demand), entries=tuple(entries))


def check_consistent(caches: CacheArray, t: Transcript) -> None:
    """Raise if a cache image and a transcript describe different systems."""
    a, b = caches.params, t.params
    if (a.triple(), a.subfile_bits) != (b.triple(), b.subfile_bits):
        raise ParameterError(
            f"cache image is for (N,K,L)={a.triple()}, subfile_bits={a.subfile_bits}; "
            f"transcript is for (N,K,L)={b.triple()}, subfile_bits={b.subfile_bits}"
        )
