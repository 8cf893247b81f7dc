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

"""Config options for the caching scheme defaults."""

from oslo_config import cfg

scheme_group = cfg.OptGroup(
    "scheme",
    title="Caching Scheme Options",
    help="""Options under this group set the defaults used when building
            file stores, cache images and transcripts.""",
)

opts = [
    cfg.IntOpt(
        "subfile_bits",
        default=64,
        min=1,
        help="Size of one subfile in bits. Each file is K subfiles long.",
    ),
    cfg.IntOpt(
        "seed",
        default=0,
        min=0,
        max=2**64 - 1,
        help="Seed of the deterministic file store generator.",
    ),
    cfg.StrOpt(
        "extra_set_rule",
        default="smallest",
        choices=["smallest", "largest"],
        help="Which N-2 admissible file indices the server sends after the "
        "forced subfile at every position.",
    ),
]


def register_opts(conf: cfg.CONF):
    """Register configuration options.

    :param conf: configuration option manager
    """
    conf.register_group(scheme_group)
    conf.register_opts(opts, group=scheme_group)
