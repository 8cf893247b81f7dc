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

"""Command line surface: place, deliver, decode, verify, sweep and demo."""

import sys
from typing import Callable, Dict, List, Optional, Tuple

from oslo_config import cfg
from oslo_log import log as logging
from pydantic import ValidationError, model_validator

import coded_cache.conf
from coded_cache import bits, config, verify
from coded_cache.artifacts import binary, text
from coded_cache.artifacts.store import generate_store
from coded_cache.core import CyclicIndex, SystemParams, mod_index, validate_params
from coded_cache.decode import build_user_view, decode_user, decode_users
from coded_cache.delivery import (
    DemandVector,
    ExtraSetRule,
    build_transcript,
    deliver,
    forced_beneficiaries,
    forced_file_index,
    rate_of,
)
from coded_cache.exception import (
    ArtifactIOError,
    CodedCacheError,
    ParameterError,
    UndecodableError,
)
from coded_cache.objects import Object, format_fraction
from coded_cache.oracle import oracle_decodable
from coded_cache.placement import blocked_user, coded_file, place, users_with_access

CONF = coded_cache.conf.CONF
LOG = logging.getLogger(__name__)

SUBCOMMANDS = ("place", "deliver", "decode", "verify", "sweep", "demo")

# Demand vectors worth showing for a given (N, K, L) besides the cyclic one.
WORKED_DEMANDS: Dict[Tuple[int, int, int], List[Tuple[int, ...]]] = {
    (2, 5, 2): [(1, 2, 1, 2, 2), (1, 1, 2, 2, 2), (1, 2, 2, 2, 2)],
}

# A broadcast made with a different extra-set choice than ours; it must
# decode all the same.
FOREIGN_TRANSCRIPTS: Dict[Tuple[int, int, int], Tuple[Tuple[int, ...], List[Tuple[int, int]]]] = {
    (3, 5, 2): (
        (1, 2, 3, 1, 2),
        [(2, 1), (1, 1), (1, 3), (2, 3), (3, 2), (2, 2), (2, 4), (1, 4), (1, 5), (2, 5)],
    ),
}


def _add_system_args(parser, defaults: Tuple[Optional[int], ...] = (None, None, None)):
    N, K, L = defaults
    required = N is None
    parser.add_argument("-N", dest="files", type=int, default=N, required=required,
                        help="Number of files.")
    parser.add_argument("-K", dest="users", type=int, default=K, required=required,
                        help="Number of users, and of caches.")
    parser.add_argument("-L", dest="span", type=int, default=L, required=required,
                        help="Number of consecutive caches each user reads.")
    parser.add_argument("--subfile-bits", dest="subfile_bits", type=int,
                        help="Subfile size in bits. Defaults to [scheme] subfile_bits.")
    parser.add_argument("--seed", dest="seed", type=int,
                        help="File store seed. Defaults to [scheme] seed.")


def _add_rule_arg(parser):
    parser.add_argument("--rule", dest="rule", choices=[r.value for r in ExtraSetRule],
                        help="Extra-set choice. Defaults to [scheme] extra_set_rule.")


def _add_verify_args(parser):
    parser.add_argument("--budget", dest="budget", type=int,
                        help="Demand vectors to check. Defaults to [verify] demand_budget.")
    parser.add_argument("--no-oracle", dest="oracle", action="store_false", default=None,
                        help="Skip the GF(2) oracle cross-check.")


def add_command_parsers(subparsers):
    """Register the sub-commands on the oslo.config argument parser."""
    parser = subparsers.add_parser("place", help="Write the cache image of a seeded store.")
    _add_system_args(parser)
    parser.add_argument("--output", dest="output", required=True, help="Cache image path.")

    parser = subparsers.add_parser("deliver", help="Write the transcript for a demand vector.")
    _add_system_args(parser)
    _add_rule_arg(parser)
    parser.add_argument("--demand", dest="demand", required=True,
                        help='Comma separated demand vector, e.g. "1,2,1,2,2".')
    parser.add_argument("--output", dest="output", required=True, help="Transcript path.")

    parser = subparsers.add_parser("decode", help="Decode users from a cache image and "
                                                  "a transcript.")
    parser.add_argument("--caches", dest="caches", required=True, help="Cache image path.")
    parser.add_argument("--transcript", dest="transcript", required=True,
                        help="Transcript path.")
    parser.add_argument("--user", dest="user", type=int, help="Decode only this user.")
    parser.add_argument("--seed", dest="seed", type=int,
                        help="Seed of the store to compare against.")

    parser = subparsers.add_parser("verify", help="Verify every (or a sample of) demand "
                                                  "vector.")
    _add_system_args(parser)
    _add_rule_arg(parser)
    _add_verify_args(parser)

    parser = subparsers.add_parser("sweep", help="Verify a grid of (N, K, L) triples as CSV.")
    parser.add_argument("--grid", dest="grid", required=True,
                        help='Triples, e.g. "2,5,2;2,7,3;2,9,4".')
    parser.add_argument("--subfile-bits", dest="subfile_bits", type=int)
    parser.add_argument("--seed", dest="seed", type=int)
    parser.add_argument("--output", dest="output", help="CSV path, standard output if unset.")
    parser.add_argument("--reference", dest="reference", action="store_true",
                        help="Add the trivial point columns R0_num,R0_den.")
    _add_rule_arg(parser)
    _add_verify_args(parser)

    parser = subparsers.add_parser("demo", help="Print placement and delivery symbolically.")
    _add_system_args(parser, defaults=(2, 5, 2))
    _add_rule_arg(parser)


command_opt = cfg.SubCommandOpt(
    "command",
    title="Commands",
    help="Available commands",
    handler=add_command_parsers,
)


class CommandConfig(Object):
    """One parsed command line."""

    subcommand: str
    N: Optional[int] = None
    K: Optional[int] = None
    L: Optional[int] = None
    subfile_bits: int = 64
    seed: int = 0
    demand: Optional[str] = None
    caches: Optional[str] = None
    transcript: Optional[str] = None
    output: Optional[str] = None
    user: Optional[int] = None
    budget: int = 100000
    grid: Optional[str] = None
    rule: ExtraSetRule = ExtraSetRule.SMALLEST
    oracle: bool = True
    reference: bool = False

    @model_validator(mode="after")
    def _check(self) -> "CommandConfig":
        if self.subcommand not in SUBCOMMANDS:
            raise ValueError(f"unknown subcommand {self.subcommand}")
        paths = [p for p in (self.caches, self.transcript, self.output) if p]
        if len(set(paths)) != len(paths):
            raise ValueError(f"paths must be distinct, got {paths}")
        return self

    @classmethod
    def from_conf(cls, conf: cfg.ConfigOpts) -> "CommandConfig":
        """Combine the parsed command line with the config file defaults.

        :raises ParameterError: if the combined options are inconsistent.
        """
        command = conf.command

        def flag(name, default=None):
            value = getattr(command, name, None)
            return default if value is None else value

        try:
            return cls(
                subcommand=command.name,
                N=flag("files"),
                K=flag("users"),
                L=flag("span"),
                subfile_bits=flag("subfile_bits", conf.scheme.subfile_bits),
                seed=flag("seed", conf.scheme.seed),
                demand=flag("demand"),
                caches=flag("caches"),
                transcript=flag("transcript"),
                output=flag("output"),
                user=flag("user"),
                budget=flag("budget", conf.verify.demand_budget),
                grid=flag("grid"),
                rule=ExtraSetRule(flag("rule", conf.scheme.extra_set_rule)),
                oracle=flag("oracle", conf.verify.oracle),
                reference=flag("reference", False),
            )
        except ValidationError as e:
            raise ParameterError("; ".join(err["msg"] for err in e.errors())) from e

    def params(self) -> SystemParams:
        return validate_params(self.N, self.K, self.L, self.subfile_bits)


def _read(path: str) -> bytes:
    try:
        with open(path, "rb") as f:
            return f.read()
    except OSError as e:
        LOG.exception(f"Failed to read {path}")
        raise ArtifactIOError(path, e.strerror or str(e)) from e


def _write(path: str, data: bytes) -> None:
    try:
        with open(path, "wb") as f:
            f.write(data)
    except OSError as e:
        LOG.exception(f"Failed to write {path}")
        raise ArtifactIOError(path, e.strerror or str(e)) from e


def _place(cfg_: CommandConfig) -> int:
    params = cfg_.params()
    caches = place(generate_store(params, cfg_.seed))
    _write(cfg_.output, binary.serialize_caches(caches))
    print(f"wrote {cfg_.output}: {params.K} caches of {params.q} coded files, "
          f"M = {format_fraction(params.M)}")
    return 0


def _deliver(cfg_: CommandConfig) -> int:
    params = cfg_.params()
    demand = DemandVector.parse(cfg_.demand).check(params)
    transcript = deliver(demand, generate_store(params, cfg_.seed), cfg_.rule)
    _write(cfg_.output, binary.serialize_transcript(transcript))
    print(f"wrote {cfg_.output}: {len(transcript.entries)} subfiles for d = {demand}, "
          f"R = {format_fraction(rate_of(transcript))}")
    return 0


def _decode(cfg_: CommandConfig) -> int:
    caches = binary.deserialize_caches(_read(cfg_.caches))
    transcript = binary.deserialize_transcript(_read(cfg_.transcript))
    binary.check_consistent(caches, transcript)
    store = generate_store(caches.params, cfg_.seed)
    users = [cfg_.user] if cfg_.user is not None else range(1, caches.params.K + 1)
    status = 0
    for k in users:
        if not 1 <= k <= caches.params.K:
            raise ParameterError(f"user {k} outside [1, {caches.params.K}]")
        n = transcript.demand.of(k)
        try:
            decoded = decode_user(build_user_view(CyclicIndex(k), caches, transcript))
        except UndecodableError as e:
            print(f"user {k}: W_{n} undecodable: {e}")
            status = 1
            continue
        if decoded == store.file_payload(n):
            print(f"user {k}: W_{n} recovered bit-exactly")
        else:
            print(f"user {k}: W_{n} MISMATCH against the regenerated store")
            status = 1
    return status


def _verify(cfg_: CommandConfig) -> int:
    report = verify.verify_all_demands(
        cfg_.params(), cfg_.seed, cfg_.budget, cfg_.rule, cfg_.oracle
    )
    print(text.format_report(report), end="")
    return 0 if report.ok else 1


def _sweep(cfg_: CommandConfig) -> int:
    rows = verify.sweep(
        verify.parse_grid(cfg_.grid), cfg_.subfile_bits, cfg_.seed, cfg_.budget,
        cfg_.rule, cfg_.oracle,
    )
    csv_text = text.emit_sweep_csv(rows, reference=cfg_.reference)
    if cfg_.output:
        _write(cfg_.output, csv_text.encode())
    else:
        print(csv_text, end="")
    return 1 if any(row.status == "failed" for row in rows) else 0


def _demo(cfg_: CommandConfig) -> int:
    params = cfg_.params()
    store = generate_store(params, cfg_.seed)
    caches = place(store)
    print(f"(N,K,L) = {params.triple()}, M = (K-1)/(KL) = {format_fraction(params.M)}")
    print("Cache contents:")
    print(text.render_cache_table(caches))
    print("Coded files:")
    for j in range(1, params.K + 1):
        readers = ", ".join(f"U_{i}" for i in users_with_access(CyclicIndex(j), params))
        payload = coded_file(CyclicIndex(j), store).payload
        print(f"  F_{j} = {bits.bits_to_str(payload, params.subfile_bits)}, read by {readers}")

    cyclic = tuple(mod_index(k, params.N) for k in range(1, params.K + 1))
    demands = list(dict.fromkeys(WORKED_DEMANDS.get(params.triple(), []) + [cyclic]))
    status = 0
    for values in demands:
        demand = DemandVector(d=values)
        transcript = deliver(demand, store, cfg_.rule)
        decoded = decode_users(caches, transcript)
        ok = all(decoded[k] == store.file_payload(demand.of(k)) for k in decoded)
        status |= 0 if ok else 1
        print(f"d = {demand}: X_d = {text.render_transcript(transcript)}, "
              f"R = {format_fraction(rate_of(transcript))}, "
              f"{'all users decode' if ok else 'DECODING FAILED'}")
        for j in range(1, params.K + 1):
            n = forced_file_index(CyclicIndex(j), demand)
            served = ", ".join(f"U_{i}" for i in forced_beneficiaries(CyclicIndex(j), demand))
            print(f"  F_{j}: {text.subfile_label(n, j)} for U_{blocked_user(CyclicIndex(j), params)}"
                  + (f", also serving {served}" if served else ""))

    if params.triple() in FOREIGN_TRANSCRIPTS:
        values, labels = FOREIGN_TRANSCRIPTS[params.triple()]
        demand = DemandVector(d=values)
        transcript = build_transcript(demand, store, labels)
        decoded = decode_users(caches, transcript)
        ok = all(decoded[k] == store.file_payload(demand.of(k)) for k in decoded) and all(
            oracle_decodable(CyclicIndex(k), demand, caches, transcript)
            for k in range(1, params.K + 1)
        )
        status |= 0 if ok else 1
        print(f"d = {demand}: alternative X_d = {text.render_transcript(transcript)}, "
              f"{'all users decode' if ok else 'DECODING FAILED'}")
    return status


HANDLERS: Dict[str, Callable[[CommandConfig], int]] = {
    "place": _place,
    "deliver": _deliver,
    "decode": _decode,
    "verify": _verify,
    "sweep": _sweep,
    "demo": _demo,
}


def _fail(subcommand: str, error: CodedCacheError) -> int:
    LOG.error(f"{subcommand} failed: {error}")
    print(f"error: {error}", file=sys.stderr)
    return 2


def run(command: CommandConfig) -> int:
    """Run one command.

    :return: 0 on success, 1 when a check failed, 2 on errors.
    """
    try:
        return HANDLERS[command.subcommand](command)
    except CodedCacheError as e:
        return _fail(command.subcommand, e)


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point for the coded-cache command.

    :param argv: list of CLI arguments, program name first.
    """
    if argv is None:
        argv = sys.argv

    # CONF is process global: other entry points must not see a required
    # sub-command, so the opt only lives for the duration of this call.
    CONF.clear()
    CONF.register_cli_opt(command_opt)
    try:
        config.parse_args(argv)
        logging.setup(CONF, "coded-cache")
        try:
            command = CommandConfig.from_conf(CONF)
        except ParameterError as e:
            return _fail(CONF.command.name, e)
        return run(command)
    finally:
        CONF.clear()
        CONF.unregister_opt(command_opt)
