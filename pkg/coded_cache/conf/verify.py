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

"""Config options for the verification harness."""

from oslo_config import cfg

verify_group = cfg.OptGroup(
    "verify",
    title="Verification Harness Options",
    help="Options defined in this group control demand sweeps and the "
    "decodability oracle.",
)

opts = [
    cfg.IntOpt(
        "demand_budget",
        default=100000,
        min=1,
        help="Maximum number of demand vectors to check. When N^K fits in the "
        "budget every demand vector is checked, otherwise a seeded sample is.",
    ),
    cfg.BoolOpt(
        "oracle",
        default=True,
        help="Cross-check every decode against the GF(2) decodability oracle.",
    ),
    cfg.IntOpt(
        "batch_size",
        default=512,
        min=1,
        help="Number of demand vectors handled by one verification activity.",
    ),
]


def register_opts(conf: cfg.CONF):
    """Register configuration options.

    :param conf: configuration option manager
    """
    conf.register_group(verify_group)
    conf.register_opts(opts, group=verify_group)
