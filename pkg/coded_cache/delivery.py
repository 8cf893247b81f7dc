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

"""Delivery phase: the broadcast for a demand vector.

For every position j the server sends the subfile W_{d(<j+1>_K),j} wanted by
the one user that cannot read F_j, then N-2 further subfiles at position j.
That is K(N-1) subfiles of 1/K file units each, a rate of N-1.
"""

import enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from oslo_log import log as logging
from pydantic import field_validator

from coded_cache.core import CyclicIndex, SystemParams, cyclic_range, mod_index
from coded_cache.exception import IntegrityError, ParameterError
from coded_cache.objects import Object
from coded_cache.placement import FileStore

LOG = logging.getLogger(__name__)


class DemandVector(Object):
    """The file requested by each user, d = (d(1), ..., d(K))."""

    d: Tuple[int, ...]

    @field_validator("d")
    @classmethod
    def _positive(cls, d: Tuple[int, ...]) -> Tuple[int, ...]:
        if not d or min(d) < 1:
            raise ValueError(f"demand vector {d} must be non-empty with entries >= 1")
        return d

    @classmethod
    def parse(cls, text: str) -> "DemandVector":
        """Parse a comma separated demand vector such as "1,2,1,2,2"."""
        try:
            return cls(d=tuple(int(v) for v in text.split(",")))
        except ValueError as e:
            raise ParameterError(f"invalid demand vector '{text}': {e}") from e

    def of(self, k: int) -> int:
        """Return d(k)."""
        return self.d[k - 1]

    def check(self, params: SystemParams) -> "DemandVector":
        """Verify the vector has K entries in [1..N]."""
        if len(self.d) != params.K:
            raise ParameterError(f"demand vector has {len(self.d)} entries, expected K={params.K}")
        if max(self.d) > params.N:
            raise ParameterError(f"demand vector {self.d} requests a file above N={params.N}")
        return self

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.d)) + ")"


class Origin(str, enum.Enum):
    """Why a subfile is in the transcript."""

    FORCED = "forced"
    EXTRA = "extra"


class ExtraSetRule(str, enum.Enum):
    """How the N-2 subfiles sent after the forced one are picked."""

    SMALLEST = "smallest"
    LARGEST = "largest"


class TranscriptEntry(Object):
    """One broadcast subfile W_{n,j}."""

    n: int
    j: int
    payload: bytes
    origin: Origin

    def label(self) -> Tuple[int, int]:
        return self.n, self.j


class Transcript(Object):
    """The broadcast X_d for one demand vector."""

    params: SystemParams
    demand: DemandVector
    entries: Tuple[TranscriptEntry, ...]

    def at(self, j: int) -> List[TranscriptEntry]:
        """Entries sent at position j, in transcript order."""
        return [e for e in self.entries if e.j == j]

    def find(self, n: int, j: int) -> Optional[TranscriptEntry]:
        """The first entry carrying W_{n,j}, if any."""
        return next((e for e in self.entries if e.n == n and e.j == j), None)

    def labels(self) -> List[Tuple[int, int]]:
        return [e.label() for e in self.entries]


def forced_file_index(j: CyclicIndex, d: DemandVector) -> int:
    """The file of the user that cannot read F_j, d(<j+1>_K)."""
    return d.of(mod_index(j + 1, len(d.d)))


def forced_beneficiaries(j: CyclicIndex, d: DemandVector) -> List[CyclicIndex]:
    """Users that can read F_j and want the same file as the blocked user.

    The forced subfile serves them directly; nothing extra is sent for them.
    """
    K = len(d.d)
    forced = forced_file_index(j, d)
    return [i for i in cyclic_range(j + 2, j + K, K) if d.of(i) == forced]


def extra_set(
    j: CyclicIndex, d: DemandVector, N: int, rule: ExtraSetRule = ExtraSetRule.SMALLEST
) -> List[int]:
    """The N-2 file indices sent at position j after the forced one.

    Any N-2 indices other than the forced one work. SMALLEST takes the
    lexicographically smallest, LARGEST the largest; both ascending.
    """
    if N < 2:
        raise ParameterError(f"N={N}: extra set needs at least 2 files")
    forced = forced_file_index(j, d)
    candidates = [n for n in range(1, N + 1) if n != forced]
    if rule is ExtraSetRule.LARGEST:
        return candidates[1:]
    return candidates[:N - 2]


def deliver(
    d: DemandVector, store: FileStore, rule: ExtraSetRule = ExtraSetRule.SMALLEST
) -> Transcript:
    """Run the delivery phase for demand vector d.

    Entries come in ascending position order, the forced entry first at each
    position, followed by the extra set in ascending file index.
    """
    params = store.params
    d.check(params)
    entries: List[TranscriptEntry] = []
    for j in range(1, params.K + 1):
        forced = forced_file_index(CyclicIndex(j), d)
        entries.append(TranscriptEntry(
            n=forced, j=j, payload=store.subfile(forced, j), origin=Origin.FORCED
        ))
        for n in extra_set(CyclicIndex(j), d, params.N, rule):
            entries.append(TranscriptEntry(
                n=n, j=j, payload=store.subfile(n, j), origin=Origin.EXTRA
            ))
    LOG.debug(f"delivered {len(entries)} subfiles for d={d}")
    return Transcript(params=params, demand=d, entries=tuple(entries))


def build_transcript(
    d: DemandVector, store: FileStore, labels: Sequence[Tuple[int, int]]
) -> Transcript:
    """Build a transcript from explicit (n, j) labels, payloads read from the store.

    This is how a transcript produced by another valid choice of extra sets is
    represented. At each position the first label matching the forced file
    index is tagged forced, everything else extra.
    """
    params = store.params
    d.check(params)
    forced_seen = set()
    entries = []
    for n, j in labels:
        if not (1 <= n <= params.N and 1 <= j <= params.K):
            raise ParameterError(f"label W_{{{n},{j}}} outside the store")
        origin = Origin.EXTRA
        if j not in forced_seen and n == forced_file_index(CyclicIndex(j), d):
            forced_seen.add(j)
            origin = Origin.FORCED
        entries.append(TranscriptEntry(n=n, j=j, payload=store.subfile(n, j), origin=origin))
    return Transcript(params=params, demand=d, entries=tuple(entries))


def rate_of(t: Transcript) -> Fraction:
    """Broadcast size in file units, one subfile being 1/K.

    :raises IntegrityError: if the transcript does not hold K(N-1) entries.
    """
    N, K = t.params.N, t.params.K
    if len(t.entries) != K * (N - 1):
        raise IntegrityError(
            f"transcript has {len(t.entries)} entries, delivery sends K(N-1) = {K * (N - 1)}"
        )
    return Fraction(len(t.entries), K)
