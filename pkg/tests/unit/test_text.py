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

from fractions import Fraction

from coded_cache import verify
from coded_cache.artifacts import text
from coded_cache.core import validate_params
from coded_cache.delivery import DemandVector, deliver

HEADER = "N,K,L,M_num,M_den,R_num,R_den,failures,status"


class TestSweepCsv:
    def setup_method(self):
        self.ok = verify.SweepRow(
            N=2, K=5, L=2, memory=Fraction(2, 5), rate=Fraction(1), failures=0,
            status="ok", trivial_rate=2,
        )
        self.skipped = verify.SweepRow(N=2, K=6, L=4, status="skipped:KL", trivial_rate=2)

    def test_rows(self):
        lines = text.emit_sweep_csv([self.ok, self.skipped]).splitlines()
        assert lines == [HEADER, "2,5,2,2,5,1,1,0,ok", "2,6,4,,,,,0,skipped:KL"]

    def test_empty_grid(self):
        assert text.emit_sweep_csv([]) == HEADER + "\n"

    def test_reference_columns(self):
        lines = text.emit_sweep_csv([self.ok, self.skipped], reference=True).splitlines()
        assert lines == [
            HEADER + ",R0_num,R0_den",
            "2,5,2,2,5,1,1,0,ok,2,1",
            "2,6,4,,,,,0,skipped:KL,2,1",
        ]

    def test_sweep_output(self):
        rows = verify.sweep([(2, 5, 2), (2, 7, 3), (2, 9, 4)], 8, 0, 1000)
        assert text.emit_sweep_csv(rows).splitlines()[1:] == [
            "2,5,2,2,5,1,1,0,ok",
            "2,7,3,2,7,1,1,0,ok",
            "2,9,4,2,9,1,1,0,ok",
        ]


class TestReport:
    def test_passing_report(self):
        report = verify.verify_all_demands(validate_params(2, 5, 2, 16), 3, 1000)
        lines = text.format_report(report).splitlines()
        assert "params: N=2 K=5 L=2 subfile_bits=16" in lines
        assert "seed: 3" in lines
        assert "coverage: exhaustive" in lines
        assert "measured_memory: 2/5" in lines
        assert lines[-1] == "summary: exhaustive, 32 demands, 0 failures, R = 1 = N-1, M = 2/5"

    def test_warning_and_failures(self, mocker):
        mocker.patch("coded_cache.verify.decode_user", return_value=b"")
        report = verify.verify_all_demands(validate_params(6, 3, 2, 8), 0, 10, oracle=False)
        lines = text.format_report(report).splitlines()
        assert any(line.startswith("warning: N > K") for line in lines)
        assert "coverage: sampled(0, 10)" in lines
        failures = [line for line in lines if line.startswith("failure: ")]
        assert len(failures) == 30
        assert failures[0] == "failure: d=(1,1,1) k=1 decoded file differs from the store"


class TestSymbolic:
    def test_labels(self):
        assert text.subfile_label(2, 4) == "W_{2,4}"
        assert text.coded_label(3, 3) == "W_{1,3}⊕W_{2,3}⊕W_{3,3}"

    def test_cache_table(self, caches_252):
        lines = text.render_cache_table(caches_252).splitlines()
        assert len(lines) == 3
        assert lines[0].split(" | ")[0].strip() == "Z_1"
        assert [c.strip() for c in lines[1].split(" | ")][3] == "W_{1,4}⊕W_{2,4}"

    def test_transcript(self, store_252):
        t = deliver(DemandVector(d=(1, 2, 1, 2, 2)), store_252)
        assert text.render_transcript(t) == "(W_{2,1},W_{1,2},W_{2,3},W_{2,4},W_{1,5})"
