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

"""Text renderings: sweep CSV, verification report and symbolic tables."""

import csv
import io
from fractions import Fraction
from typing import Iterable, List, Optional

from coded_cache.delivery import Transcript
from coded_cache.objects import format_fraction
from coded_cache.placement import CacheArray
from coded_cache.verify import SweepRow, VerificationReport

SWEEP_HEADER = ["N", "K", "L", "M_num", "M_den", "R_num", "R_den", "failures", "status"]
REFERENCE_HEADER = ["R0_num", "R0_den"]


def _parts(value: Optional[Fraction]) -> List[str]:
    if value is None:
        return ["", ""]
    return [str(value.numerator), str(value.denominator)]


def emit_sweep_csv(rows: Iterable[SweepRow], reference: bool = False) -> str:
    """Render sweep rows as CSV, rationals as numerator/denominator columns.

    :param rows: rows from verify.sweep.
    :param reference: append the trivial point (M=0, R=min(N,K)) columns.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER + (REFERENCE_HEADER if reference else []))
    for row in rows:
        fields = [row.N, row.K, row.L, *_parts(row.memory), *_parts(row.rate),
                  row.failures, row.status]
        if reference:
            fields += [row.trivial_rate, 1]
        writer.writerow(fields)
    return buf.getvalue()


def format_report(report: VerificationReport) -> str:
    """Render a report as stable "key: value" lines, one line per failure."""
    p = report.params
    rate = format_fraction(report.measured_rate)
    memory = format_fraction(report.measured_memory)
    relation = "=" if report.measured_rate == report.expected_rate else "!="
    lines = [
        f"params: N={p.N} K={p.K} L={p.L} subfile_bits={p.subfile_bits}",
        f"seed: {report.seed}",
        f"coverage: {report.coverage}",
        f"extra_set_rule: {report.extra_set_rule.value}",
        f"oracle: {'on' if report.oracle else 'off'}",
        f"demands_checked: {report.demands_checked}",
        f"failures: {len(report.failures)}",
        f"measured_rate: {rate}",
        f"expected_rate: {format_fraction(report.expected_rate)}",
        f"measured_memory: {memory}",
        f"expected_memory: {format_fraction(report.expected_memory)}",
        f"oracle_agreements: {report.oracle_agreements}",
    ]
    lines += [f"warning: {w}" for w in p.warnings]
    lines.append(
        f"summary: {report.coverage.kind.value}, {report.demands_checked} demands, "
        f"{len(report.failures)} failures, R = {rate} {relation} N-1, M = {memory}"
    )
    for f in report.failures:
        demand = ",".join(map(str, f.demand))
        lines.append(f"failure: d=({demand}) k={f.user} {f.reason}")
    return "\n".join(lines) + "\n"


def subfile_label(n: int, j: int) -> str:
    return f"W_{{{n},{j}}}"


def coded_label(j: int, N: int) -> str:
    """Symbolic F_j, e.g. W_{1,3}⊕W_{2,3}."""
    return "⊕".join(subfile_label(n, j) for n in range(1, N + 1))


def render_cache_table(caches: CacheArray) -> str:
    """One column per cache, one row per stored coded file."""
    params = caches.params
    columns = [
        [f"Z_{k}"] + [coded_label(f.j, params.N) for f in caches.cache(k)]
        for k in range(1, params.K + 1)
    ]
    width = max(len(cell) for column in columns for cell in column)
    rows = zip(*columns)
    return "\n".join(" | ".join(cell.ljust(width) for cell in row).rstrip() for row in rows)


def render_transcript(t: Transcript) -> str:
    """The broadcast of t as a symbolic tuple, in transcript order."""
    return "(" + ",".join(subfile_label(n, j) for n, j in t.labels()) + ")"
