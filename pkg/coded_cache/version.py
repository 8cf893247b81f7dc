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
"""Version of coded-cache."""
import pbr.version

version_info = pbr.version.VersionInfo("coded_cache")


def version_string() -> str:
    """Return the package version, or a development marker when unpackaged.

    pbr needs either installed metadata or a git checkout to compute the
    version; running from a plain source tree has neither.
    """
    try:
        return version_info.version_string()
    except Exception:  # pbr raises a bare Exception
        return "0.0.0.dev0"
