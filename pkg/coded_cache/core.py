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

"""System parameters and the cyclic index algebra.

Everything is 1-based: caches, users, files and subfile positions are
numbered from 1, and the representative of 0 modulo K is K.
"""

from fractions import Fraction
from typing import List, NewType, Tuple

from oslo_log import log as logging
from pydantic import model_validator

from coded_cache.exception import (
    DegenerateFileCountError,
    ParameterError,
    SchemeInapplicableError,
)
from coded_cache.objects import Object

LOG = logging.getLogger(__name__)

CyclicIndex = NewType("CyclicIndex", int)

WARN_FILES_EXCEED_USERS = "N > K: rate N-1 is not below the trivial rate min(N, K)"


def check_params(N: int, K: int, L: int, subfile_bits: int) -> None:
    """Raise the matching ParameterError if (N, K, L, subfile_bits) is invalid."""
    if K < 2:
        raise ParameterError(f"K={K}: the scheme needs at least 2 users")
    if not 1 <= L <= K - 1:
        raise ParameterError(f"L={L}: access span must be in [1, {K - 1}]")
    if (K - 1) % L:
        raise SchemeInapplicableError(f"(K-1)/L = {K - 1}/{L} is not an integer")
    if N < 2:
        raise DegenerateFileCountError(f"N={N}: delivery needs at least 2 files")
    if subfile_bits < 1:
        raise ParameterError(f"subfile_bits={subfile_bits}: must be at least 1")


class SystemParams(Object):
    """A validated (N, K, L) system with its subfile size."""

    N: int
    K: int
    L: int
    subfile_bits: int
    warnings: Tuple[str, ...] = ()

    @model_validator(mode="after")
    def _check(self) -> "SystemParams":
        check_params(self.N, self.K, self.L, self.subfile_bits)
        return self

    @property
    def q(self) -> int:
        """Coded files per cache, (K-1)/L."""
        return (self.K - 1) // self.L

    @property
    def M(self) -> Fraction:  # noqa: N802
        """Per-cache memory in file units, (K-1)/(KL)."""
        return Fraction(self.q, self.K)

    @property
    def file_bits(self) -> int:
        return self.K * self.subfile_bits

    @property
    def payload_bytes(self) -> int:
        """Bytes of one packed subfile payload."""
        return (self.subfile_bits + 7) // 8

    def triple(self) -> Tuple[int, int, int]:
        return self.N, self.K, self.L


def mod_index(k: int, K: int) -> CyclicIndex:
    """Return <k>_K, the representative of k modulo K in [1..K].

    Negative k is accepted; -1 maps to K-1 and 0 maps to K.
    """
    if K < 1:
        raise ParameterError(f"K={K}: modulus must be at least 1")
    return CyclicIndex(k % K or K)


def cyclic_range(a: int, b: int, K: int) -> List[CyclicIndex]:
    """Return [a:b]_K = [<a>_K, <a+1>_K, ..., <b>_K].

    :raises ParameterError: if b < a, K < 1, or the span is longer than K.
    """
    if K < 1:
        raise ParameterError(f"K={K}: modulus must be at least 1")
    if b < a:
        raise ParameterError(f"cyclic range [{a}:{b}] is empty")
    if b - a + 1 > K:
        raise ParameterError(f"cyclic range [{a}:{b}] is longer than K={K}")
    return [mod_index(i, K) for i in range(a, b + 1)]


def validate_params(N: int, K: int, L: int, subfile_bits: int) -> SystemParams:
    """Gate every (N, K, L) triple before use.

    :return: the SystemParams, carrying a warning when N > K. The scheme still
        runs then, but rate N-1 does not beat the trivial point.
    :raises ParameterError: or one of its subclasses for invalid input.
    """
    check_params(N, K, L, subfile_bits)
    warnings: Tuple[str, ...] = ()
    if N > K:
        LOG.warning(f"(N={N}, K={K}, L={L}): {WARN_FILES_EXCEED_USERS}")
        warnings = (WARN_FILES_EXCEED_USERS,)
    return SystemParams(N=N, K=K, L=L, subfile_bits=subfile_bits, warnings=warnings)


def trivial_rate(params: SystemParams) -> int:
    """Rate of the cache-free point (M=0): every distinct demand is sent whole."""
    return min(params.N, params.K)
