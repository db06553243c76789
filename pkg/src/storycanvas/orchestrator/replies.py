"""Structured reply contracts and strict parsing.

The text agent must answer with a bare JSON object. Real models still wrap
replies in markdown fences despite being told not to, so exactly one fence
layer is stripped before the strict parse — any deeper malformation is
rejected, not repaired.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from ..errors import ParseError, SchemaError
from ..model.cards import canonical_json

_FENCE = re.compile(r"^\s*```[a-zA-Z0-9_-]*\s*\n(.*?)\n?\s*```\s*$", re.DOTALL)

REPLY_FIELDS = ("story", "intention", "sketch_information")
SUMMARY_FIELDS = ("settings", "description", "plot")


@dataclass(frozen=True)
class TextAgentReply:
    story: str
    intention: str
    sketch_information: str

    def to_dict(self) -> dict[str, str]:
        return {
            "story": self.story,
            "intention": self.intention,
            "sketch_information": self.sketch_information,
        }

    def to_json(self) -> str:
        return canonical_json(self.to_dict())


def strip_code_fence(raw: str) -> str:
    """Remove one markdown fence layer, if the whole payload is fenced."""
    match = _FENCE.match(raw)
    return match.group(1) if match else raw


def _parse_object(raw: str, fields: tuple[str, ...]) -> dict[str, str]:
    text = strip_code_fence(raw)
    try:
        obj = json.loads(text)
    except (json.JSONDecodeError, TypeError) as exc:
        raise ParseError(f"reply is not JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ParseError(f"reply is not a JSON object: {type(obj).__name__}")
    for field in fields:
        if field not in obj:
            raise SchemaError(f"missing field: {field}", detail={"field": field})
        if not isinstance(obj[field], str):
            raise SchemaError(
                f"field {field} must be a string", detail={"field": field}
            )
    extra = set(obj) - set(fields)
    if extra:
        raise SchemaError(f"unexpected fields: {sorted(extra)}")
    return {field: obj[field] for field in fields}


def parse_text_reply(raw: str) -> TextAgentReply:
    """Parse a story reply; SchemaError names the first offending field."""
    values = _parse_object(raw, REPLY_FIELDS)
    if not values["story"].strip():
        raise SchemaError("missing field: story", detail={"field": "story"})
    return TextAgentReply(**values)


def parse_summary_reply(raw: str) -> dict[str, str]:
    """Parse a cluster-summary reply into its three sections."""
    return _parse_object(raw, SUMMARY_FIELDS)
