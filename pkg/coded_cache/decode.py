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

"""User side decoding.

User U_k reads caches Z_k .. Z_<k+L-1>, which together hold every coded file
but F_<k-1>. For each position j it either picks W_{d(k),j} straight from the
broadcast, or peels it out of F_j by XOR-ing away the N-1 other subfiles at
position j that were broadcast.
"""

from typing import Dict, Iterable, List, Optional

from oslo_log import log as logging
from pydantic import model_validator

from coded_cache import bits
from coded_cache.core import CyclicIndex, cyclic_range
from coded_cache.delivery import DemandVector, Transcript
from coded_cache.exception import ParameterError, SizeMismatchError, UndecodableError
from coded_cache.objects import Object
from coded_cache.placement import CacheArray, accessible_coded_indices

LOG = logging.getLogger(__name__)


class UserView(Object):
    """Everything user U_k has: its accessible coded files and the broadcast."""

    k: int
    coded: Dict[int, bytes]
    demand: DemandVector
    transcript: Transcript

    @model_validator(mode="after")
    def _check_access(self) -> "UserView":
        expected = set(accessible_coded_indices(CyclicIndex(self.k), self.transcript.params))
        if set(self.coded) != expected:
            raise ValueError(f"user {self.k} view holds positions {sorted(self.coded)}, "
                             f"expected {sorted(expected)}")
        return self


def build_user_view(k: CyclicIndex, caches: CacheArray, t: Transcript) -> UserView:
    """Assemble the view of user U_k from its L caches only."""
    params = caches.params
    if (params.triple(), params.subfile_bits) != (t.params.triple(), t.params.subfile_bits):
        raise ParameterError(
            f"caches are for (N,K,L)={params.triple()} with {params.subfile_bits} bit "
            f"subfiles, transcript for {t.params.triple()} with {t.params.subfile_bits}"
        )
    if not 1 <= k <= params.K:
        raise ParameterError(f"user k={k} outside [1, {params.K}]")
    coded: Dict[int, bytes] = {}
    for c in cyclic_range(k, k + params.L - 1, params.K):
        for f in caches.cache(c):
            coded[f.j] = f.payload
    return UserView(k=k, coded=coded, demand=t.demand, transcript=t)


def peel(coded_payload: bytes, received: List[bytes]) -> bytes:
    """XOR the received subfiles out of a coded file.

    With N-1 of the N constituents received, the result is the missing one.
    """
    size = len(coded_payload)
    if any(len(p) != size for p in received):
        raise SizeMismatchError(f"received subfiles do not match the {size} byte coded file")
    return bits.xor_payloads([coded_payload, *received], size)


def decode_user(view: UserView) -> bytes:
    """Recover the file requested by the user of the view.

    :return: the packed file, K*subfile_bits bits.
    :raises UndecodableError: when a subfile is neither broadcast nor peelable.
    """
    params = view.transcript.params
    k = view.k
    wanted = view.demand.of(k)
    others = set(range(1, params.N + 1)) - {wanted}
    pieces = []
    for j in range(1, params.K + 1):
        entry = view.transcript.find(wanted, j)
        if entry is not None:
            pieces.append(entry.payload)
            continue
        if j not in view.coded:
            raise UndecodableError(
                f"user {k}: W_{{{wanted},{j}}} was not broadcast and F_{j} is not accessible"
            )
        received: Dict[int, bytes] = {}
        for e in view.transcript.at(j):
            received.setdefault(e.n, e.payload)
        if set(received) != others:
            raise UndecodableError(
                f"user {k}: position {j} carries files {sorted(received)}, peeling "
                f"W_{{{wanted},{j}}} needs exactly {sorted(others)}"
            )
        LOG.debug(f"user {k}: peeling W_{{{wanted},{j}}} out of F_{j}")
        pieces.append(peel(view.coded[j], list(received.values())))
    return bits.join_payloads(pieces, params.subfile_bits)


def decode_users(
    caches: CacheArray, t: Transcript, users: Optional[Iterable[int]] = None
) -> Dict[int, bytes]:
    """Decode the given users, or all K, returning k -> file payload."""
    if users is None:
        users = range(1, caches.params.K + 1)
    return {
        k: decode_user(build_user_view(CyclicIndex(k), caches, t)) for k in users
    }
