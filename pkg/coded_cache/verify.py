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

"""Verification harness.

Builds a seeded store, places it, and for every checked demand vector runs
delivery and decodes every user, comparing bit for bit with the store and
with the GF(2) oracle. Failures are recorded in the report, never raised.
"""

import enum
import itertools
from fractions import Fraction
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from oslo_log import log as logging
from pydantic import model_validator

from coded_cache.artifacts.store import generate_store
from coded_cache.core import CyclicIndex, SystemParams, mod_index, trivial_rate, validate_params
from coded_cache.decode import build_user_view, decode_user
from coded_cache.delivery import DemandVector, ExtraSetRule, deliver, rate_of
from coded_cache.exception import IntegrityError, ParameterError, UndecodableError
from coded_cache.objects import Object, Rational
from coded_cache.oracle import oracle_decodable
from coded_cache.placement import CacheArray, FileStore, place

LOG = logging.getLogger(__name__)

__all__ = [
    "Coverage",
    "CoverageKind",
    "Failure",
    "BatchResult",
    "MemoryAudit",
    "SweepRow",
    "VerificationReport",
    "assemble_report",
    "check_demand",
    "demand_count",
    "iter_demands",
    "memory_audit",
    "oracle_decodable",
    "parse_grid",
    "plan_coverage",
    "plan_demands",
    "sweep",
    "sweep_row",
    "verify_all_demands",
    "verify_demands",
]

# spawn key of the demand sampling stream; store subfiles use (n, j) keys.
DEMAND_STREAM = (0,)


class CoverageKind(str, enum.Enum):
    EXHAUSTIVE = "exhaustive"
    SAMPLED = "sampled"


class Coverage(Object):
    """Which demand vectors a report covers."""

    kind: CoverageKind
    seed: Optional[int] = None
    count: Optional[int] = None

    def __str__(self) -> str:
        if self.kind is CoverageKind.EXHAUSTIVE:
            return self.kind.value
        return f"sampled({self.seed}, {self.count})"


class Failure(Object):
    """One user of one demand vector that did not check out."""

    demand: Tuple[int, ...]
    user: int
    reason: str


class MemoryAudit(Object):
    """Per-cache memory in file units."""

    per_cache: Tuple[Rational, ...]
    maximum: Rational


class BatchResult(Object):
    """Outcome of checking a batch of demand vectors."""

    demands_checked: int = 0
    failures: Tuple[Failure, ...] = ()
    measured_rate: Rational = Fraction(0)
    measured_memory: Rational = Fraction(0)
    oracle_agreements: int = 0


class VerificationReport(Object):
    """Result of verifying one (N, K, L) system."""

    params: SystemParams
    seed: int
    extra_set_rule: ExtraSetRule
    oracle: bool
    coverage: Coverage
    demands_checked: int
    failures: Tuple[Failure, ...]
    measured_rate: Rational
    measured_memory: Rational
    oracle_agreements: int

    @model_validator(mode="after")
    def _check_coverage(self) -> "VerificationReport":
        if (self.coverage.kind is CoverageKind.EXHAUSTIVE
                and self.demands_checked != self.params.N ** self.params.K):
            raise ValueError(f"exhaustive coverage checked {self.demands_checked} demands, "
                             f"N^K = {self.params.N ** self.params.K}")
        return self

    @property
    def expected_rate(self) -> Fraction:
        return Fraction(self.params.N - 1)

    @property
    def expected_memory(self) -> Fraction:
        return self.params.M

    @property
    def ok(self) -> bool:
        """True iff no failure was recorded, i.e. P_e = 0 over the checked demands."""
        return not self.failures


class SweepRow(Object):
    """One (N, K, L) point of a sweep; memory and rate are empty when skipped."""

    N: int
    K: int
    L: int
    memory: Optional[Rational] = None
    rate: Optional[Rational] = None
    failures: int = 0
    status: str
    trivial_rate: int
    reason: str = ""


def memory_audit(caches: CacheArray) -> MemoryAudit:
    """Measure the memory of every cache as stored bits over the file size."""
    params = caches.params
    per_cache = tuple(
        Fraction(caches.stored_bits(k), params.file_bits) for k in range(1, params.K + 1)
    )
    return MemoryAudit(per_cache=per_cache, maximum=max(per_cache))


def demand_count(params: SystemParams, budget: int) -> int:
    """Number of demand vectors a verification with this budget checks."""
    return min(params.N ** params.K, budget)


def plan_coverage(params: SystemParams, seed: int, budget: int) -> Coverage:
    if params.N ** params.K <= budget:
        return Coverage(kind=CoverageKind.EXHAUSTIVE)
    return Coverage(kind=CoverageKind.SAMPLED, seed=seed, count=budget)


def adversarial_demands(params: SystemParams) -> List[Tuple[int, ...]]:
    """All-equal, cyclic and (when N >= K) all-distinct demand vectors."""
    N, K = params.N, params.K
    patterns = [
        (1,) * K,
        tuple(mod_index(k, N) for k in range(1, K + 1)),
    ]
    if N >= K:
        patterns.append(tuple(range(1, K + 1)))
    return list(dict.fromkeys(patterns))


def iter_demands(params: SystemParams, seed: int, budget: int) -> Iterator[Tuple[int, ...]]:
    """Yield the demand vectors a verification checks, in a fixed order.

    Exhaustive plans walk [N]^K lexicographically. Sampled plans start with
    the adversarial vectors and fill the budget with uniform draws.
    """
    if budget < 1:
        raise ParameterError(f"demand budget {budget} must be at least 1")
    N, K = params.N, params.K
    if N ** K <= budget:
        yield from itertools.product(range(1, N + 1), repeat=K)
        return
    forced = adversarial_demands(params)[:budget]
    yield from forced
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=DEMAND_STREAM))
    for row in rng.integers(1, N + 1, size=(budget - len(forced), K)):
        yield tuple(int(v) for v in row)


def plan_demands(
    params: SystemParams, seed: int, budget: int
) -> Tuple[Coverage, List[Tuple[int, ...]]]:
    """The coverage of a verification and the demand vectors it checks, in order."""
    return plan_coverage(params, seed, budget), list(iter_demands(params, seed, budget))


def check_demand(
    demand: DemandVector,
    store: FileStore,
    caches: CacheArray,
    rule: ExtraSetRule = ExtraSetRule.SMALLEST,
    oracle: bool = True,
) -> Tuple[Optional[Fraction], List[Failure], int]:
    """Deliver one demand vector and decode every user.

    :return: (rate or None if malformed, failures, oracle agreements).
    """
    params = store.params
    transcript = deliver(demand, store, rule)
    failures: List[Failure] = []
    rate: Optional[Fraction] = None
    try:
        rate = rate_of(transcript)
        if rate != params.N - 1:
            failures.append(Failure(demand=demand.d, user=0, reason=f"rate {rate} != N-1"))
    except IntegrityError as e:
        failures.append(Failure(demand=demand.d, user=0, reason=str(e)))

    agreements = 0
    for k in range(1, params.K + 1):
        try:
            decoded = decode_user(build_user_view(CyclicIndex(k), caches, transcript))
            recovered = decoded == store.file_payload(demand.of(k))
            reason = "decoded file differs from the store"
        except UndecodableError as e:
            recovered, reason = False, str(e)
        if not recovered:
            failures.append(Failure(demand=demand.d, user=k, reason=reason))
        if oracle:
            verdict = oracle_decodable(CyclicIndex(k), demand, caches, transcript)
            if verdict == recovered:
                agreements += 1
            else:
                failures.append(Failure(
                    demand=demand.d, user=k,
                    reason=f"oracle says decodable={verdict}, decoder recovered={recovered}",
                ))
    return rate, failures, agreements


def verify_demands(
    params: SystemParams,
    seed: int,
    demands: Iterable[Sequence[int]],
    rule: ExtraSetRule = ExtraSetRule.SMALLEST,
    oracle: bool = True,
) -> BatchResult:
    """Check the given demand vectors against the store generated from seed."""
    store = generate_store(params, seed)
    caches = place(store)
    audit = memory_audit(caches)
    checked, agreements, worst = 0, 0, Fraction(0)
    failures: List[Failure] = []
    for d in demands:
        rate, found, agreed = check_demand(DemandVector(d=tuple(d)), store, caches, rule, oracle)
        checked += 1
        agreements += agreed
        failures.extend(found)
        if rate is not None:
            worst = max(worst, rate)
    return BatchResult(
        demands_checked=checked,
        failures=tuple(failures),
        measured_rate=worst,
        measured_memory=audit.maximum,
        oracle_agreements=agreements,
    )


def assemble_report(
    params: SystemParams,
    seed: int,
    coverage: Coverage,
    rule: ExtraSetRule,
    oracle: bool,
    batches: Sequence[BatchResult],
) -> VerificationReport:
    """Merge batch results; the outcome does not depend on batch order."""
    failures = sorted(
        (f for b in batches for f in b.failures), key=lambda f: (f.demand, f.user, f.reason)
    )
    return VerificationReport(
        params=params,
        seed=seed,
        extra_set_rule=rule,
        oracle=oracle,
        coverage=coverage,
        demands_checked=sum(b.demands_checked for b in batches),
        failures=tuple(failures),
        measured_rate=max((b.measured_rate for b in batches), default=Fraction(0)),
        measured_memory=max((b.measured_memory for b in batches), default=Fraction(0)),
        oracle_agreements=sum(b.oracle_agreements for b in batches),
    )


def verify_all_demands(
    params: SystemParams,
    seed: int,
    demand_budget: int,
    rule: ExtraSetRule = ExtraSetRule.SMALLEST,
    oracle: bool = True,
) -> VerificationReport:
    """Verify zero-error decoding for every (or a sample of) demand vector."""
    coverage, demands = plan_demands(params, seed, demand_budget)
    LOG.info(f"verifying (N,K,L)={params.triple()}: {coverage}, {len(demands)} demand vectors")
    batch = verify_demands(params, seed, demands, rule, oracle)
    report = assemble_report(params, seed, coverage, rule, oracle, [batch])
    if report.ok:
        LOG.info(f"(N,K,L)={params.triple()}: no failures, R = {report.measured_rate}, "
                 f"M = {report.measured_memory}")
    else:
        LOG.error(f"(N,K,L)={params.triple()}: {len(report.failures)} failures")
    return report


def sweep_row(
    triple: Tuple[int, int, int],
    subfile_bits: int,
    seed: int,
    budget: int,
    rule: ExtraSetRule = ExtraSetRule.SMALLEST,
    oracle: bool = True,
) -> SweepRow:
    """Verify one grid point, or report it skipped if the scheme does not apply."""
    N, K, L = triple
    try:
        params = validate_params(N, K, L, subfile_bits)
    except ParameterError as e:
        LOG.info(f"skipping (N,K,L)={triple}: {e}")
        return SweepRow(N=N, K=K, L=L, status=f"skipped:{e.code}",
                        trivial_rate=min(N, K), reason=str(e))
    report = verify_all_demands(params, seed, budget, rule, oracle)
    return SweepRow(
        N=N, K=K, L=L,
        memory=report.measured_memory,
        rate=report.measured_rate,
        failures=len(report.failures),
        status="ok" if report.ok else "failed",
        trivial_rate=trivial_rate(params),
    )


def sweep(
    grid: Iterable[Tuple[int, int, int]],
    subfile_bits: int,
    seed: int,
    budget: int,
    rule: ExtraSetRule = ExtraSetRule.SMALLEST,
    oracle: bool = True,
) -> List[SweepRow]:
    """Verify every (N, K, L) of the grid, one row per triple in grid order."""
    return [sweep_row(tuple(t), subfile_bits, seed, budget, rule, oracle) for t in grid]


def parse_grid(text: str) -> List[Tuple[int, int, int]]:
    """Parse "N,K,L;N,K,L;..." into triples."""
    grid = []
    for item in filter(None, (part.strip() for part in text.split(";"))):
        values = item.split(",")
        if len(values) != 3:
            raise ParameterError(f"grid entry '{item}' is not an N,K,L triple")
        try:
            N, K, L = (int(v) for v in values)
        except ValueError as e:
            raise ParameterError(f"grid entry '{item}': {e}") from e
        grid.append((N, K, L))
    return grid
