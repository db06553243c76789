"""Style filter directive table.

Each filter kind carries one fixed image-style directive and one fixed
text-tone directive; these strings ARE the filter's meaning, so prompt
construction must embed them verbatim. Filters replace rather than stack:
a card holds at most one active filter.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..model.cards import FilterKind


@dataclass(frozen=True)
class FilterDirectives:
    image_style: str
    text_tone: str


FILTER_TABLE: dict[FilterKind, FilterDirectives] = {
    FilterKind.WARM: FilterDirectives(
        image_style=(
            "Warm tones (gold, amber, red, orange, yellow), high exposure, "
            "strong contrast; evoke happiness, comfort, nostalgia"
        ),
        text_tone="Emphasizes positivity, vitality, intimacy",
    ),
    FilterKind.CALM: FilterDirectives(
        image_style=(
            "Cool tones (blue, green, purple) with balanced or lower "
            "saturation; convey calmness, wisdom, introspection"
        ),
        text_tone="Reflects contemplative and stable moods",
    ),
    FilterKind.DRAMATIC: FilterDirectives(
        image_style=(
            "Deep blacks, sharp whites, directional lighting; create "
            "intensity, mystery, urgency"
        ),
        text_tone="Heightens stakes and emotional tension",
    ),
    FilterKind.DREAMY: FilterDirectives(
        image_style=(
            "Soft tones, lowered contrast, diffuse focus; suggest "
            "melancholy, intimacy, ethereality"
        ),
        text_tone="Supports subtle, nostalgic, introspective narration",
    ),
    FilterKind.MONOCHROME: FilterDirectives(
        image_style=(
            "Removal of color, emphasis on light, shadow, texture; evoke "
            "nostalgia, timelessness, artistry"
        ),
        text_tone="Adopts reflective and universal tone",
    ),
}


def directives_for(kind: FilterKind) -> FilterDirectives:
    return FILTER_TABLE[kind]
