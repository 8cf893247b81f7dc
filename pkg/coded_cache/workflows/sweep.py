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

"""Temporal workflows fanning verification out over workers."""

import argparse
import asyncio
import sys
from datetime import timedelta
from typing import List, Optional

from temporalio import workflow
from temporalio.client import Client

with workflow.unsafe.imports_passed_through():
    from oslo_log import log as logging

    import coded_cache.conf
    from coded_cache import config, verify
    from coded_cache.activities.verification import (
        BatchRequest,
        SweepRequest,
        TripleRequest,
        VerifyRequest,
        sweep_triple,
        verify_demand_batch,
    )
    from coded_cache.artifacts import text
    from coded_cache.converters import pydantic_data_converter
    from coded_cache.core import validate_params
    from coded_cache.delivery import ExtraSetRule


CONF = coded_cache.conf.CONF
LOG = logging.getLogger(__name__)

ACTIVITY_TIMEOUT = timedelta(minutes=30)


@workflow.defn
class CodedCacheVerifyWorkflow:
    """Verify one system, one activity per batch of demand vectors."""

    @workflow.run
    async def run(self, request: VerifyRequest) -> verify.VerificationReport:
        """Fan the demand plan out in batches and merge the results.

        The batches are merged by verify.assemble_report, which sorts the
        failures, so the report does not depend on completion order.

        :param request: the system, seed, budget and batch size.
        :return: the merged verification report.
        """
        params = request.params
        total = verify.demand_count(params, request.budget)
        LOG.info(f"Verifying (N,K,L)={params.triple()} over {total} demand vectors")

        tasks = []
        for start in range(0, total, request.batch_size):
            batch = BatchRequest(
                params=params,
                seed=request.seed,
                budget=request.budget,
                start=start,
                stop=min(start + request.batch_size, total),
                rule=request.rule,
                oracle=request.oracle,
            )
            tasks.append(asyncio.create_task(workflow.execute_activity(
                verify_demand_batch,
                args=[batch],
                start_to_close_timeout=ACTIVITY_TIMEOUT,
            )))
        batches = await asyncio.gather(*tasks)

        return verify.assemble_report(
            params,
            request.seed,
            verify.plan_coverage(params, request.seed, request.budget),
            request.rule,
            request.oracle,
            batches,
        )


@workflow.defn
class CodedCacheSweepWorkflow:
    """Verify a grid of systems, one activity per triple."""

    @workflow.run
    async def run(self, request: SweepRequest) -> List[verify.SweepRow]:
        """Run every grid point concurrently; rows come back in grid order.

        :param request: the grid and the shared verification settings.
        :return: one sweep row per triple.
        """
        LOG.info(f"Sweeping {len(request.grid)} grid points")
        tasks = [
            asyncio.create_task(workflow.execute_activity(
                sweep_triple,
                args=[TripleRequest(
                    triple=triple,
                    subfile_bits=request.subfile_bits,
                    seed=request.seed,
                    budget=request.budget,
                    rule=request.rule,
                    oracle=request.oracle,
                )],
                start_to_close_timeout=ACTIVITY_TIMEOUT,
            ))
            for triple in request.grid
        ]
        return list(await asyncio.gather(*tasks))


def setup_opts(argv: Optional[List[str]]):
    """Parse CLI arguments.

    :param argv: list of arguments to parse
    """
    parser = argparse.ArgumentParser()
    parser.add_argument("--grid", help='Triples to sweep, e.g. "2,5,2;2,7,3".')
    parser.add_argument("-N", dest="files", type=int, help="Number of files.")
    parser.add_argument("-K", dest="users", type=int, help="Number of users and caches.")
    parser.add_argument("-L", dest="span", type=int, help="Caches each user reads.")
    parser.add_argument("--reference", action="store_true",
                        help="Add the trivial point columns to the sweep CSV.")
    return parser.parse_known_args(argv)


async def async_main(argv: Optional[List[str]] = None):
    """Async entry point for the verification workflows.

    :param argv: list of CLI arguments
    """
    if argv is None:
        argv = sys.argv

    (options, args) = setup_opts(argv[1:])
    config.parse_args([argv[0], *args])
    logging.setup(CONF, "coded-cache")

    rule = ExtraSetRule(CONF.scheme.extra_set_rule)

    # Create client connected to server at the given address.
    client = await Client.connect(
        f"{CONF.temporal.host}:{CONF.temporal.port}",
        namespace=CONF.temporal.namespace,
        data_converter=pydantic_data_converter,
    )

    if options.grid:
        request = SweepRequest(
            grid=tuple(verify.parse_grid(options.grid)),
            subfile_bits=CONF.scheme.subfile_bits,
            seed=CONF.scheme.seed,
            budget=CONF.verify.demand_budget,
            rule=rule,
            oracle=CONF.verify.oracle,
        )
        rows = await client.execute_workflow(
            CodedCacheSweepWorkflow.run,
            request,
            id=f"coded-cache-sweep-{CONF.scheme.seed}",
            task_queue=CONF.temporal.task_queue,
        )
        print(text.emit_sweep_csv(rows, reference=options.reference), end="")
        return 0 if all(not row.status.startswith("failed") for row in rows) else 1

    if None in (options.files, options.users, options.span):
        LOG.error("Either --grid or all of -N, -K and -L are required")
        return 2
    params = validate_params(options.files, options.users, options.span,
                             CONF.scheme.subfile_bits)
    request = VerifyRequest(
        params=params,
        seed=CONF.scheme.seed,
        budget=CONF.verify.demand_budget,
        rule=rule,
        oracle=CONF.verify.oracle,
        batch_size=CONF.verify.batch_size,
    )
    report = await client.execute_workflow(
        CodedCacheVerifyWorkflow.run,
        request,
        id=f"coded-cache-verify-{params.N}-{params.K}-{params.L}-{CONF.scheme.seed}",
        task_queue=CONF.temporal.task_queue,
    )
    print(text.format_report(report), end="")
    return 0 if report.ok else 1


def main(argv: Optional[List[str]] = None):
    """Entry point for starting a verification workflow.

    :param argv: list of CLI arguments
    """
    return asyncio.run(async_main(argv))
