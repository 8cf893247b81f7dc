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

"""Placement phase: split files, build coded files and fill the caches.

Every file W_n is split into K equal subfiles W_{n,1..K}. The j-th coded file
is F_j = W_{1,j} xor ... xor W_{N,j}, and cache Z_k stores the coded files at
positions <k + iL>_K for i = 0 .. (K-1)/L - 1.
"""

from typing import Dict, List, Sequence, Tuple

from oslo_log import log as logging
from pydantic import model_validator

from coded_cache import bits
from coded_cache.core import CyclicIndex, SystemParams, cyclic_range, mod_index
from coded_cache.exception import ParameterError, SizeMismatchError
from coded_cache.objects import Object

LOG = logging.getLogger(__name__)


def split_file(file_payload: bits.BitsLike, params: SystemParams) -> List[bytes]:
    """Split a file into K contiguous subfiles of subfile_bits bits each.

    :param file_payload: the whole file as a "0101" string or 0/1 array.
    :param params: system parameters.
    :return: the K packed subfile payloads, position 1 first.
    :raises SizeMismatchError: if the file is not exactly K*subfile_bits long.
    """
    file_bits = bits.as_bits(file_payload)
    if file_bits.size != params.file_bits:
        raise SizeMismatchError(
            f"file has {file_bits.size} bits, expected K*subfile_bits = {params.file_bits}"
        )
    size = params.subfile_bits
    return [bits.pack_bits(file_bits[j * size:(j + 1) * size]) for j in range(params.K)]


class FileStore(Object):
    """The N server files, addressed as subfiles W_{n,j}."""

    params: SystemParams
    subfiles: Tuple[Tuple[bytes, ...], ...]

    @model_validator(mode="after")
    def _check_shape(self) -> "FileStore":
        if len(self.subfiles) != self.params.N:
            raise ValueError(f"store holds {len(self.subfiles)} files, expected N={self.params.N}")
        for n, row in enumerate(self.subfiles, start=1):
            if len(row) != self.params.K:
                raise ValueError(f"file {n} has {len(row)} subfiles, expected K={self.params.K}")
            if any(len(p) != self.params.payload_bytes for p in row):
                raise ValueError(f"file {n} has a subfile of the wrong size")
        return self

    @classmethod
    def from_files(cls, params: SystemParams, files: Sequence[bits.BitsLike]) -> "FileStore":
        """Build a store from N whole files."""
        if len(files) != params.N:
            raise ParameterError(f"got {len(files)} files, expected N={params.N}")
        return cls(params=params, subfiles=tuple(tuple(split_file(f, params)) for f in files))

    def subfile(self, n: int, j: int) -> bytes:
        """Return W_{n,j}."""
        return self.subfiles[n - 1][j - 1]

    def file_payload(self, n: int) -> bytes:
        """Return the whole file W_n, packed."""
        return bits.join_payloads(self.subfiles[n - 1], self.params.subfile_bits)


class CodedFile(Object):
    """The coded file F_j, XOR of the N subfiles at position j."""

    j: int
    payload: bytes


def coded_file(j: CyclicIndex, store: FileStore) -> CodedFile:
    """Build F_j from the store."""
    params = store.params
    if not 1 <= j <= params.K:
        raise ParameterError(f"position j={j} outside [1, {params.K}]")
    column = [store.subfile(n, j) for n in range(1, params.N + 1)]
    return CodedFile(j=j, payload=bits.xor_payloads(column, params.payload_bytes))


def cache_content_indices(k: CyclicIndex, params: SystemParams) -> List[CyclicIndex]:
    """Positions of the coded files stored in cache Z_k, in placement order."""
    return [mod_index(k + i * params.L, params.K) for i in range(params.q)]


def accessible_coded_indices(k: CyclicIndex, params: SystemParams) -> List[CyclicIndex]:
    """Positions user U_k can read through caches Z_k .. Z_<k+L-1>.

    These are [k : k+K-2]_K; the one position missing is <k-1>_K.
    """
    return cyclic_range(k, k + params.K - 2, params.K)


def blocked_user(j: CyclicIndex, params: SystemParams) -> CyclicIndex:
    """The only user that cannot read F_j."""
    return mod_index(j + 1, params.K)


def users_with_access(j: CyclicIndex, params: SystemParams) -> List[CyclicIndex]:
    """The K-1 users that can read F_j, [j+2 : j+K]_K."""
    return cyclic_range(j + 2, j + params.K, params.K)


class CacheArray(Object):
    """The K cache contents Z_1 .. Z_K."""

    params: SystemParams
    contents: Tuple[Tuple[CodedFile, ...], ...]

    @model_validator(mode="after")
    def _check_placement(self) -> "CacheArray":
        if len(self.contents) != self.params.K:
            raise ValueError(f"{len(self.contents)} caches, expected K={self.params.K}")
        for k, cache in enumerate(self.contents, start=1):
            expected = cache_content_indices(CyclicIndex(k), self.params)
            if [f.j for f in cache] != expected:
                raise ValueError(f"cache {k} holds positions {[f.j for f in cache]}, "
                                 f"expected {expected}")
            if any(len(f.payload) != self.params.payload_bytes for f in cache):
                raise ValueError(f"cache {k} holds a coded file of the wrong size")
        return self

    def cache(self, k: int) -> Tuple[CodedFile, ...]:
        """Return Z_k."""
        LOG.debug(f"reading cache Z_{k}")
        return self.contents[k - 1]

    def stored_bits(self, k: int) -> int:
        """Bits of coded file payload held by Z_k, padding excluded.

        Counted from the payloads themselves, not from the entry count.

        :raises SizeMismatchError: if a payload is not one subfile long.
        """
        return sum(
            bits.unpack_bits(f.payload, self.params.subfile_bits).size
            for f in self.contents[k - 1]
        )


def place(store: FileStore) -> CacheArray:
    """Run the placement phase for the given store."""
    params = store.params
    coded: Dict[int, CodedFile] = {
        j: coded_file(CyclicIndex(j), store) for j in range(1, params.K + 1)
    }
    contents = tuple(
        tuple(coded[j] for j in cache_content_indices(CyclicIndex(k), params))
        for k in range(1, params.K + 1)
    )
    LOG.debug(f"placed {params.q} coded files in each of {params.K} caches, M = {params.M}")
    return CacheArray(params=params, contents=contents)
