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

"""Verification activities run by the coded-cache workers."""

import itertools
from typing import Tuple

from temporalio import activity, workflow

with workflow.unsafe.imports_passed_through():
    from oslo_log import log as logging

    from coded_cache import verify
    from coded_cache.core import SystemParams
    from coded_cache.delivery import ExtraSetRule
    from coded_cache.objects import Object


LOG = logging.getLogger(__name__)


class VerifyRequest(Object):
    """Verify one system over its planned demand vectors."""

    params: SystemParams
    seed: int
    budget: int
    rule: ExtraSetRule = ExtraSetRule.SMALLEST
    oracle: bool = True
    batch_size: int = 512


class BatchRequest(Object):
    """Check demand vectors [start, stop) of a verification plan."""

    params: SystemParams
    seed: int
    budget: int
    start: int
    stop: int
    rule: ExtraSetRule = ExtraSetRule.SMALLEST
    oracle: bool = True


class SweepRequest(Object):
    """Verify every (N, K, L) triple of a grid."""

    grid: Tuple[Tuple[int, int, int], ...]
    subfile_bits: int
    seed: int
    budget: int
    rule: ExtraSetRule = ExtraSetRule.SMALLEST
    oracle: bool = True


class TripleRequest(Object):
    """Verify one grid point of a sweep."""

    triple: Tuple[int, int, int]
    subfile_bits: int
    seed: int
    budget: int
    rule: ExtraSetRule = ExtraSetRule.SMALLEST
    oracle: bool = True


@activity.defn
def verify_demand_batch(request: BatchRequest) -> verify.BatchResult:
    """Check one slice of the demand plan.

    Every batch regenerates the store and the caches from the seed, so
    batches are independent and can run on any worker.

    :param request: the plan and the slice to check.
    :return: the batch outcome, merged later by the workflow.
    """
    LOG.info(f"checking demands {request.start}..{request.stop - 1} of "
             f"(N,K,L)={request.params.triple()}")
    demands = itertools.islice(
        verify.iter_demands(request.params, request.seed, request.budget),
        request.start,
        request.stop,
    )
    return verify.verify_demands(
        request.params, request.seed, demands, request.rule, request.oracle
    )


@activity.defn
def sweep_triple(request: TripleRequest) -> verify.SweepRow:
    """Verify one grid point, reporting invalid triples as skipped."""
    return verify.sweep_row(
        request.triple, request.subfile_bits, request.seed, request.budget,
        request.rule, request.oracle,
    )
