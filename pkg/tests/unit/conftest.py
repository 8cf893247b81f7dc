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

"""Shared fixtures for the unit tests."""

import pytest

from coded_cache.artifacts.store import generate_store
from coded_cache.core import validate_params
from coded_cache.placement import place


@pytest.fixture
def params_252():
    return validate_params(2, 5, 2, 8)


@pytest.fixture
def params_352():
    return validate_params(3, 5, 2, 8)


@pytest.fixture
def store_252(params_252):
    return generate_store(params_252, 7)


@pytest.fixture
def store_352(params_352):
    return generate_store(params_352, 7)


@pytest.fixture
def caches_252(store_252):
    return place(store_252)


@pytest.fixture
def caches_352(store_352):
    return place(store_352)
