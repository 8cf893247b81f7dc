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

import pytest
from pydantic import ValidationError

from coded_cache import cli


def run(*args):
    return cli.main(["coded-cache", *args])


class TestVerify:
    def test_worked_system(self, capsys):
        assert run("verify", "-N", "2", "-K", "5", "-L", "2", "--subfile-bits", "16") == 0
        out = capsys.readouterr().out
        assert "summary: exhaustive, 32 demands, 0 failures, R = 1 = N-1, M = 2/5" in out

    def test_sampled(self, capsys):
        assert run("verify", "-N", "3", "-K", "7", "-L", "3", "--budget", "500", "--seed", "8") == 0
        out = capsys.readouterr().out
        assert "coverage: sampled(8, 500)" in out
        assert "demands_checked: 500" in out

    def test_inapplicable(self, capsys):
        assert run("verify", "-N", "2", "-K", "6", "-L", "4") == 2
        assert "error: " in capsys.readouterr().err

    def test_failures_exit_one(self, mocker, capsys):
        mocker.patch("coded_cache.verify.decode_user", return_value=b"")
        assert run("verify", "-N", "2", "-K", "3", "-L", "1", "--no-oracle") == 1
        assert "failure: d=(1,1,1) k=1" in capsys.readouterr().out

    def test_config_file_defaults(self, tmp_path, capsys):
        path = tmp_path / "coded_cache.conf"
        path.write_text("[scheme]\nsubfile_bits = 12\nseed = 5\n")
        args = ["--config-file", str(path), "verify", "-N", "2", "-K", "3", "-L", "2"]
        assert run(*args) == 0
        out = capsys.readouterr().out
        assert "params: N=2 K=3 L=2 subfile_bits=12" in out
        assert "seed: 5" in out

    def test_command_is_required(self):
        with pytest.raises(SystemExit):
            run()


class TestDemo:
    def test_worked_system(self, capsys):
        assert run("demo") == 0
        out = capsys.readouterr().out
        assert "(N,K,L) = (2, 5, 2), M = (K-1)/(KL) = 2/5" in out
        assert "W_{1,1}⊕W_{2,1}" in out
        assert (
            "d = (1,2,1,2,2): X_d = (W_{2,1},W_{1,2},W_{2,3},W_{2,4},W_{1,5}), R = 1, "
            "all users decode" in out
        )
        assert "  F_2: W_{1,2} for U_3, also serving U_1" in out

    def test_coded_file_bits(self, capsys):
        assert run("demo", "--subfile-bits", "8", "--seed", "0") == 0
        out = capsys.readouterr().out
        assert "  F_1 = 00001101, read by U_3, U_4, U_5, U_1" in out
        assert "  F_3 = 01101100, read by U_5, U_1, U_2, U_3" in out

    def test_three_files(self, capsys):
        assert run("demo", "-N", "3") == 0
        out = capsys.readouterr().out
        assert "d = (1,2,3,1,2): alternative X_d = " in out
        assert "DECODING FAILED" not in out


class TestArtifacts:
    def test_place_deliver_decode(self, tmp_path, capsys):
        caches, transcript = str(tmp_path / "caches.bin"), str(tmp_path / "x.bin")
        system = ["-N", "3", "-K", "5", "-L", "2", "--subfile-bits", "16", "--seed", "4"]
        assert run("place", *system, "--output", caches) == 0
        assert run("deliver", *system, "--demand", "1,2,3,1,2", "--output", transcript) == 0
        assert run("decode", "--caches", caches, "--transcript", transcript, "--seed", "4") == 0
        out = capsys.readouterr().out
        assert "R = 2" in out
        assert out.count("recovered bit-exactly") == 5

    def test_decode_one_user_against_another_store(self, tmp_path, capsys):
        caches, transcript = str(tmp_path / "caches.bin"), str(tmp_path / "x.bin")
        system = ["-N", "2", "-K", "5", "-L", "2", "--seed", "4"]
        assert run("place", *system, "--output", caches) == 0
        assert run("deliver", *system, "--demand", "1,2,1,2,2", "--output", transcript) == 0
        args = ["--caches", caches, "--transcript", transcript, "--user", "3", "--seed", "5"]
        assert run("decode", *args) == 1
        assert "user 3: W_1 MISMATCH" in capsys.readouterr().out

    def test_missing_file(self, tmp_path, capsys):
        missing = str(tmp_path / "nope.bin")
        other = str(tmp_path / "other.bin")
        assert run("decode", "--caches", missing, "--transcript", other) == 2
        assert missing in capsys.readouterr().err

    def test_same_path_twice(self, tmp_path, capsys):
        path = str(tmp_path / "a.bin")
        assert run("decode", "--caches", path, "--transcript", path) == 2
        err = capsys.readouterr().err
        assert "error: " in err
        assert "paths must be distinct" in err

    def test_mixed_systems(self, tmp_path):
        caches, transcript = str(tmp_path / "caches.bin"), str(tmp_path / "x.bin")
        assert run("place", "-N", "2", "-K", "5", "-L", "2", "--output", caches) == 0
        assert run("deliver", "-N", "3", "-K", "5", "-L", "2", "--demand", "1,2,3,1,2",
                   "--output", transcript) == 0
        assert run("decode", "--caches", caches, "--transcript", transcript) == 2

    def test_bad_demand(self, tmp_path):
        output = str(tmp_path / "x.bin")
        assert run("deliver", "-N", "2", "-K", "5", "-L", "2", "--demand", "1,2,3",
                   "--output", output) == 2


class TestSweep:
    def test_csv(self, capsys):
        assert run("sweep", "--grid", "2,5,2;2,6,4", "--subfile-bits", "8") == 0
        assert capsys.readouterr().out.splitlines() == [
            "N,K,L,M_num,M_den,R_num,R_den,failures,status",
            "2,5,2,2,5,1,1,0,ok",
            "2,6,4,,,,,0,skipped:KL",
        ]

    def test_reference_to_file(self, tmp_path):
        output = tmp_path / "sweep.csv"
        assert run("sweep", "--grid", "3,5,2", "--budget", "20", "--reference",
                   "--output", str(output)) == 0
        assert output.read_text().splitlines()[1] == "3,5,2,2,5,2,1,0,ok,3,1"


def test_paths_must_be_distinct():
    with pytest.raises(ValidationError):
        cli.CommandConfig(subcommand="decode", caches="a.bin", transcript="a.bin")
