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

"""Deterministic file store generation.

Each subfile W_{n,j} comes from its own generator, seeded by
SeedSequence(seed, spawn_key=(n, j)), so one subfile can be regenerated
without the others.
"""

import numpy as np
from oslo_log import log as logging

from coded_cache import bits
from coded_cache.core import SystemParams
from coded_cache.exception import ParameterError
from coded_cache.placement import FileStore

LOG = logging.getLogger(__name__)

MAX_SEED = 2**64 - 1


def _check_seed(seed: int) -> None:
    if not 0 <= seed <= MAX_SEED:
        raise ParameterError(f"seed {seed} is not a 64-bit unsigned integer")


def generate_subfile(params: SystemParams, seed: int, n: int, j: int) -> bytes:
    """Regenerate W_{n,j} of the store generate_store(params, seed) builds."""
    _check_seed(seed)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(n, j))))
    return bits.pack_bits(rng.integers(0, 2, size=params.subfile_bits, dtype=np.uint8))


def generate_store(params: SystemParams, seed: int) -> FileStore:
    """Build the N files of the system from a 64-bit seed."""
    _check_seed(seed)
    LOG.debug(f"generating {params.N} files of {params.file_bits} bits from seed {seed}")
    return FileStore(
        params=params,
        subfiles=tuple(
            tuple(generate_subfile(params, seed, n, j) for j in range(1, params.K + 1))
            for n in range(1, params.N + 1)
        ),
    )
