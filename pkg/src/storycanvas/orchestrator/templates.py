"""Prompt template library.

Templates are plain text files with named slot markers like ``{text}``.
Substitution is single-pass: a slot value containing a marker string is
inserted verbatim and never re-expanded. The slot vocabulary is closed;
templates using markers outside it are rejected at load time.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from ..errors import MissingSlot, UnknownTemplate, ValidationFailure

SLOT_PATTERN = re.compile(r"\{([a-z_]+)\}")
KNOWN_SLOTS = frozenset({"text", "previous_text", "full_text", "global_theme"})

BUILTIN_TEMPLATE_DIR = Path(__file__).parent / "templates"


@dataclass(frozen=True)
class PromptTemplate:
    id: str
    body: str
    required_slots: frozenset[str]

    @classmethod
    def from_body(cls, template_id: str, body: str) -> "PromptTemplate":
        markers = set(SLOT_PATTERN.findall(body))
        unknown = markers - KNOWN_SLOTS
        if unknown:
            raise ValidationFailure(
                f"template {template_id!r} uses unknown slots: {sorted(unknown)}"
            )
        return cls(id=template_id, body=body, required_slots=frozenset(markers))


class TemplateLibrary:
    """Versioned collection of templates loaded from a directory of .txt files."""

    def __init__(self, templates: Mapping[str, PromptTemplate], version: str = "0"):
        self._templates = dict(templates)
        self.version = version

    @classmethod
    def load_dir(cls, directory: str | Path) -> "TemplateLibrary":
        directory = Path(directory)
        if not directory.is_dir():
            raise ValidationFailure(f"template directory not found: {directory}")
        templates = {}
        for path in sorted(directory.glob("*.txt")):
            templates[path.stem] = PromptTemplate.from_body(
                path.stem, path.read_text(encoding="utf-8")
            )
        version_file = directory / "VERSION"
        version = version_file.read_text().strip() if version_file.exists() else "0"
        return cls(templates, version=version)

    @classmethod
    def builtin(cls) -> "TemplateLibrary":
        return cls.load_dir(BUILTIN_TEMPLATE_DIR)

    def ids(self) -> tuple[str, ...]:
        return tuple(sorted(self._templates))

    def get(self, template_id: str) -> PromptTemplate:
        if template_id not in self._templates:
            raise UnknownTemplate(f"unknown template: {template_id}")
        return self._templates[template_id]

    def assemble(self, template_id: str, slots: Mapping[str, str]) -> str:
        """Fill a template; raises MissingSlot for any unprovided required slot."""
        template = self.get(template_id)
        for slot in sorted(template.required_slots):
            if slot not in slots:
                raise MissingSlot(slot)
        return SLOT_PATTERN.sub(lambda m: str(slots[m.group(1)]), template.body)


def assemble_prompt(
    library: TemplateLibrary, template_id: str, slots: Mapping[str, str]
) -> str:
    return library.assemble(template_id, slots)
