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

"""GF(2) decodability oracle.

Every subfile W_{n,j} is a formal symbol, one coordinate of an NK dimensional
vector space over GF(2). A coded file F_j is the vector with ones at all N
symbols of position j, a broadcast subfile is a unit vector. A user can
decode its file iff the K unit vectors of its requested file lie in the span
of what it knows. Payload bits are never looked at.
"""

from typing import List

import galois
import numpy as np

from coded_cache.core import CyclicIndex, SystemParams, cyclic_range
from coded_cache.delivery import DemandVector, Transcript
from coded_cache.placement import CacheArray


GF2 = galois.GF(2)


def gf2_rank(matrix: np.ndarray) -> int:
    """Rank of a 0/1 matrix over GF(2)."""
    return int(np.linalg.matrix_rank(GF2(np.asarray(matrix, dtype=np.uint8) & 1)))


def symbol(n: int, j: int, params: SystemParams) -> int:
    """Coordinate of W_{n,j}."""
    return (n - 1) * params.K + (j - 1)


def knowledge_matrix(k: CyclicIndex, caches: CacheArray, t: Transcript) -> np.ndarray:
    """Rows spanning what user U_k knows: its coded files and the broadcast."""
    params = caches.params
    rows: List[np.ndarray] = []
    for c in cyclic_range(k, k + params.L - 1, params.K):
        for f in caches.contents[c - 1]:
            row = np.zeros(params.N * params.K, dtype=np.uint8)
            row[[symbol(n, f.j, params) for n in range(1, params.N + 1)]] = 1
            rows.append(row)
    for e in t.entries:
        row = np.zeros(params.N * params.K, dtype=np.uint8)
        row[symbol(e.n, e.j, params)] = 1
        rows.append(row)
    return np.vstack(rows)


def oracle_decodable(
    k: CyclicIndex, d: DemandVector, caches: CacheArray, t: Transcript
) -> bool:
    """Whether user U_k can in principle recover W_{d(k)} from its caches and t."""
    params = caches.params
    known = knowledge_matrix(k, caches, t)
    targets = np.zeros((params.K, params.N * params.K), dtype=np.uint8)
    for j in range(1, params.K + 1):
        targets[j - 1, symbol(d.of(k), j, params)] = 1
    return gf2_rank(np.vstack([known, targets])) == gf2_rank(known)
