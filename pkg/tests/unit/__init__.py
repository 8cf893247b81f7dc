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

"""Unit tests for the coded caching scheme."""

WORKED_DEMANDS = [(1, 2, 1, 2, 2), (1, 1, 2, 2, 2), (1, 2, 2, 2, 2)]

# Triples where the scheme applies, small enough to check exhaustively.
APPLICABLE = [
    (2, 3, 1),
    (2, 3, 2),
    (2, 5, 2),
    (2, 5, 4),
    (3, 5, 2),
    (3, 5, 4),
    (2, 7, 3),
    (3, 7, 2),
    (2, 9, 4),
    (4, 5, 2),
]
