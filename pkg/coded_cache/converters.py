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

"""Data converter using Pydantic JSON conversion."""

from typing import Any, Optional, Type

from pydantic import TypeAdapter
from pydantic_core import to_jsonable_python
from temporalio.api.common.v1 import Payload
from temporalio.converter import (
    CompositePayloadConverter,
    DataConverter,
    DefaultPayloadConverter,
    JSONPlainPayloadConverter,
)


class PydanticJSONPayloadConverter(JSONPlainPayloadConverter):
    """Pydantic JSON payload converter.

    Requests, batch results and reports are pydantic models holding exact
    rationals and enums, so both directions go through pydantic: values are
    dumped with to_jsonable_python and loaded back with a TypeAdapter for the
    type hint Temporal passes in.
    """

    def to_payload(self, value: Any) -> Optional[Payload]:
        """Convert all values with the Pydantic encoder or fail.

        This payload converter is expected to be the last in the chain, so it
        can fail if unable to convert.
        """
        return super().to_payload(to_jsonable_python(value))

    def from_payload(self, payload: Payload, type_hint: Optional[Type] = None) -> Any:
        """Validate the JSON payload against the expected type."""
        return TypeAdapter(type_hint if type_hint is not None else Any).validate_json(
            payload.data
        )


class PydanticPayloadConverter(CompositePayloadConverter):
    """Payload converter that replaces Temporal JSON conversion with Pydantic
    JSON conversion.
    """

    def __init__(self) -> None:
        super().__init__(
            *(
                c
                if not isinstance(c, JSONPlainPayloadConverter)
                else PydanticJSONPayloadConverter()
                for c in DefaultPayloadConverter.default_encoding_payload_converters
            )
        )


pydantic_data_converter = DataConverter(payload_converter_class=PydanticPayloadConverter)
