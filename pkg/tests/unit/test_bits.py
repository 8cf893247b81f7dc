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

from coded_cache import bits
from coded_cache.exception import ParameterError, SizeMismatchError


class TestPacking:
    def test_msb_first_with_zero_padding(self):
        assert bits.pack_bits("101000000001") == b"\xa0\x10"
        assert bits.pack_bits([1]) == b"\x80"

    def test_unpack_first_bits(self):
        assert bits.bits_to_str(b"\xa0\x10", 12) == "101000000001"

    def test_unpack_size_checked(self):
        with pytest.raises(SizeMismatchError):
            bits.unpack_bits(b"\x00\x00", 8)

    def test_rejects_non_binary_strings(self):
        with pytest.raises(ParameterError):
            bits.as_bits("0120")

    def test_mask_padding(self):
        assert bits.mask_padding(b"\xab\xff", 12) == b"\xab\xf0"


class TestXor:
    def test_xor_of_two(self):
        a, b = bits.pack_bits("1100"), bits.pack_bits("1010")
        assert bits.bits_to_str(bits.xor_payloads([a, b], 1), 4) == "0110"

    def test_empty_is_zero(self):
        assert bits.xor_payloads([], 3) == b"\x00\x00\x00"

    def test_sizes_must_match(self):
        with pytest.raises(SizeMismatchError):
            bits.xor_payloads([b"\x00", b"\x00\x00"], 1)

    def test_matches_integer_xor(self):
        rng = np.random.default_rng(3)
        payloads = [rng.bytes(9) for _ in range(5)]
        expected = 0
        for p in payloads:
            expected ^= int.from_bytes(p, "big")
        assert bits.xor_payloads(payloads, 9) == expected.to_bytes(9, "big")


def test_join_at_bit_granularity():
    pieces = [bits.pack_bits("101"), bits.pack_bits("011"), bits.pack_bits("110")]
    assert bits.join_payloads(pieces, 3) == bits.pack_bits("101011110")
