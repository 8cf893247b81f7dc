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

"""Errors raised by the coded caching scheme and its artifacts."""


class CodedCacheError(Exception):
    """Base class for all coded-cache errors."""

    code = "error"


class ParameterError(CodedCacheError, ValueError):
    """A system parameter or operation argument is out of range."""

    code = "params"


class SchemeInapplicableError(ParameterError):
    """The placement needs (K-1)/L to be an integer."""

    code = "KL"


class DegenerateFileCountError(ParameterError):
    """Delivery sends N-2 extra subfiles per position, so N must be at least 2."""

    code = "N"


class SizeMismatchError(CodedCacheError, ValueError):
    """A payload does not have the size the parameters call for."""

    code = "size"


class IntegrityError(CodedCacheError):
    """A transcript does not have the shape produced by delivery."""

    code = "integrity"


class UndecodableError(CodedCacheError):
    """A user cannot recover one of the subfiles of its requested file."""

    code = "undecodable"


class ArtifactIOError(CodedCacheError):
    """Reading or writing an artifact file failed."""

    code = "io"

    def __init__(self, path: str, reason: str):
        super().__init__(f"{path}: {reason}")
        self.path = path


class ParseError(CodedCacheError):
    """A serialized artifact could not be parsed."""

    code = "parse"

    def __init__(self, offset: int, reason: str):
        super().__init__(f"offset {offset}: {reason}")
        self.offset = offset
        self.reason = reason


class BadMagicError(ParseError):
    """The stream does not start with the expected magic bytes."""


class VersionMismatchError(ParseError):
    """The stream was written with an unsupported format version."""


class TruncatedStreamError(ParseError):
    """The stream ended before the structure it describes."""


class InvariantViolationError(ParseError):
    """The stream parsed but describes an impossible artifact."""
