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

import numpy as np
import pytest
from pydantic import ValidationError

from coded_cache import bits, decode
from coded_cache.artifacts.store import generate_store
from coded_cache.core import validate_params
from coded_cache.decode import UserView, build_user_view, decode_user, decode_users, peel
from coded_cache.delivery import DemandVector, build_transcript, deliver
from coded_cache.exception import ParameterError, SizeMismatchError, UndecodableError
from coded_cache.placement import CacheArray, place
from tests.unit import WORKED_DEMANDS

FOREIGN_LABELS = [(2, 1), (1, 1), (1, 3), (2, 3), (3, 2), (2, 2), (2, 4), (1, 4), (1, 5), (2, 5)]


class TestPeel:
    def test_two_constituents(self):
        a, b = b"\x0f", b"\x35"
        assert peel(bits.xor_payloads([a, b], 1), [a]) == b

    def test_three_constituents(self):
        a, b, c = b"\x01\x02", b"\xf0\x0f", b"\x99\x66"
        assert peel(bits.xor_payloads([a, b, c], 2), [b, c]) == a

    def test_size_mismatch(self):
        with pytest.raises(SizeMismatchError):
            peel(b"\x00\x00", [b"\x00"])

    def test_random_coded_files(self):
        rng = np.random.default_rng(2024)
        for N in range(2, 7):
            for _ in range(200):
                nbytes = int(rng.integers(1, 17))
                subfiles = [rng.bytes(nbytes) for _ in range(N)]
                missing = int(rng.integers(0, N))
                received = [s for i, s in enumerate(subfiles) if i != missing]
                assert peel(bits.xor_payloads(subfiles, nbytes), received) == subfiles[missing]


class TestUserView:
    @pytest.mark.parametrize(
        "k, N, K, L, expected",
        [
            (5, 2, 5, 2, {5, 1, 2, 3}),
            (1, 2, 5, 2, {1, 2, 3, 4}),
            (2, 2, 9, 4, {2, 3, 4, 5, 6, 7, 8, 9}),
        ],
    )
    def test_accessible_positions(self, k, N, K, L, expected):
        params = validate_params(N, K, L, 8)
        store = generate_store(params, 0)
        t = deliver(DemandVector(d=(1,) * K), store)
        view = build_user_view(k, place(store), t)
        assert set(view.coded) == expected

    def test_reads_only_its_own_caches(self, mocker, caches_252, store_252):
        t = deliver(DemandVector(d=(1, 2, 1, 2, 2)), store_252)
        spy = mocker.spy(CacheArray, "cache")
        build_user_view(5, caches_252, t)
        assert [call.args[-1] for call in spy.call_args_list] == [5, 1]

    def test_view_positions_are_checked(self, caches_252, store_252):
        t = deliver(DemandVector(d=(1, 2, 1, 2, 2)), store_252)
        view = build_user_view(3, caches_252, t)
        coded = dict(view.coded)
        coded[2] = b"\x00"
        with pytest.raises(ValidationError):
            UserView(k=3, coded=coded, demand=view.demand, transcript=t)

    def test_parameter_mismatch(self, caches_252, store_352):
        t = deliver(DemandVector(d=(1, 2, 3, 1, 2)), store_352)
        with pytest.raises(ParameterError):
            build_user_view(1, caches_252, t)

    def test_user_out_of_range(self, caches_252, store_252):
        t = deliver(DemandVector(d=(1, 2, 1, 2, 2)), store_252)
        with pytest.raises(ParameterError):
            build_user_view(6, caches_252, t)


class TestDecodeUser:
    @pytest.mark.parametrize("demand", WORKED_DEMANDS)
    def test_worked_demands(self, store_252, caches_252, demand):
        d = DemandVector(d=demand)
        decoded = decode_users(caches_252, deliver(d, store_252))
        assert decoded == {k: store_252.file_payload(d.of(k)) for k in range(1, 6)}

    def test_blocked_position_comes_from_the_broadcast(self, store_252, caches_252):
        # U_3 cannot read F_2; W_{1,2} is the forced subfile at position 2.
        d = DemandVector(d=(1, 2, 1, 2, 2))
        t = deliver(d, store_252)
        assert t.find(1, 2) is not None
        assert decode_user(build_user_view(3, caches_252, t)) == store_252.file_payload(1)

    def test_three_files(self, store_352, caches_352):
        d = DemandVector(d=(1, 2, 3, 1, 2))
        t = deliver(d, store_352)
        assert decode_user(build_user_view(2, caches_352, t)) == store_352.file_payload(2)

    def test_foreign_extra_sets_decode(self, store_352, caches_352):
        d = DemandVector(d=(1, 2, 3, 1, 2))
        t = build_transcript(d, store_352, FOREIGN_LABELS)
        decoded = decode_users(caches_352, t)
        assert decoded == {k: store_352.file_payload(d.of(k)) for k in range(1, 6)}

    def test_all_equal_demands_need_no_peeling(self, mocker, store_352, caches_352):
        spy = mocker.spy(decode, "peel")
        d = DemandVector(d=(2, 2, 2, 2, 2))
        decoded = decode_users(caches_352, deliver(d, store_352))
        assert set(decoded.values()) == {store_352.file_payload(2)}
        assert spy.call_count == 0

    def test_missing_forced_entry(self, store_252, caches_252):
        d = DemandVector(d=(1, 2, 1, 2, 2))
        t = deliver(d, store_252)
        # W_{1,2} is what U_3 needs at the position it cannot read.
        t = t.model_copy(update={"entries": tuple(e for e in t.entries if e.label() != (1, 2))})
        with pytest.raises(UndecodableError):
            decode_user(build_user_view(3, caches_252, t))

    def test_missing_extra_entry(self, store_352, caches_352):
        d = DemandVector(d=(1, 2, 3, 1, 2))
        t = deliver(d, store_352)
        t = t.model_copy(update={"entries": tuple(e for e in t.entries if e.label() != (1, 2))})
        with pytest.raises(UndecodableError):
            decode_user(build_user_view(1, caches_352, t))

    def test_decode_selected_users(self, store_252, caches_252):
        d = DemandVector(d=(1, 2, 1, 2, 2))
        decoded = decode_users(caches_252, deliver(d, store_252), users=[2, 4])
        assert sorted(decoded) == [2, 4]

    def test_subfile_bits_not_a_multiple_of_eight(self):
        params = validate_params(3, 7, 2, 13)
        store = generate_store(params, 99)
        caches = place(store)
        d = DemandVector(d=(3, 1, 2, 2, 3, 1, 1))
        decoded = decode_users(caches, deliver(d, store))
        assert decoded == {k: store.file_payload(d.of(k)) for k in range(1, 8)}
        assert all(len(p) == (7 * 13 + 7) // 8 for p in decoded.values())
