"""The editing instruments.

Each instrument is split into a pure planning step and a realization step.
Planning validates the gesture and produces fully specified generation
requests plus the provenance edges the new cards will carry; realization
feeds the requests through a generator (the orchestrator) and assembles
cards. Realization is atomic: every provider call for the plan completes
before any card exists, so a failed sub-generation yields nothing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Callable, Mapping

from ..errors import (
    BadCropRect,
    EmptyIntent,
    EmptyRange,
    OutOfBounds,
    SameVoice,
    UnknownCard,
)
from ..model.cards import (
    Card,
    FilterKind,
    ImageAssetRef,
    InstrumentKind,
    NarrativeObject,
    Voice,
    merge_objects,
)
from ..model.provenance import ProvenanceEdge
from .collage import CollageFrame, ImageCrop
from .filters import directives_for
from .imaging import Polygon, mask_crop
from .intents import MultimodalIntent, StoryContext
from .requests import SPARK_AXES, CropRef, GenerationRequest, SourceCard

if TYPE_CHECKING:
    from ..orchestrator.replies import TextAgentReply


@dataclass(frozen=True)
class PlannedCard:
    request: GenerationRequest
    parents: tuple[str, ...]
    voice: Voice
    objects: tuple[NarrativeObject, ...]
    filter: FilterKind | None
    meta: Mapping[str, str]


@dataclass(frozen=True)
class InstrumentPlan:
    kind: InstrumentKind
    cards: tuple[PlannedCard, ...]


@dataclass(frozen=True)
class InstrumentResult:
    cards: tuple[Card, ...]
    edges: tuple[ProvenanceEdge, ...]
    node_meta: dict[str, dict[str, str]]


def _resolve(card_ids: tuple[str, ...], cards: Mapping[str, Card]) -> tuple[Card, ...]:
    resolved = []
    for cid in card_ids:
        if cid not in cards:
            raise UnknownCard(f"unknown card: {cid}")
        resolved.append(cards[cid])
    return tuple(resolved)


def _card_intent(source: Card, context: StoryContext, typed: str | None = None) -> MultimodalIntent:
    return MultimodalIntent(
        typed_text=typed,
        reference_cards=(source.id,),
        global_theme=context.global_theme,
        prior_text=context.prior_text,
    )


def plan_exact_craft(
    intent: MultimodalIntent, cards: Mapping[str, Card]
) -> InstrumentPlan:
    """One card that adheres closely to the expressed intention."""
    if intent.is_empty():
        raise EmptyIntent("intent has no text, screenshot, strokes, or references")
    refs = _resolve(intent.reference_cards, cards)
    sources = tuple(SourceCard.of(c) for c in refs)
    planned = PlannedCard(
        request=GenerationRequest(
            mode=InstrumentKind.EXACT_CRAFT.value, intent=intent, sources=sources
        ),
        parents=tuple(c.id for c in refs),
        voice=Voice.THIRD,
        objects=merge_objects([c.objects for c in refs]),
        filter=None,
        meta={"intent_hash": intent.intent_hash()},
    )
    return InstrumentPlan(kind=InstrumentKind.EXACT_CRAFT, cards=(planned,))


def plan_creative_spark(
    intent: MultimodalIntent, cards: Mapping[str, Card]
) -> InstrumentPlan:
    """Three sibling cards, one per variation axis (character, setting, object)."""
    if intent.is_empty():
        raise EmptyIntent("intent has no text, screenshot, strokes, or references")
    refs = _resolve(intent.reference_cards, cards)
    sources = tuple(SourceCard.of(c) for c in refs)
    intent_hash = intent.intent_hash()
    planned = tuple(
        PlannedCard(
            request=GenerationRequest(
                mode=InstrumentKind.CREATIVE_SPARK.value,
                intent=intent,
                sources=sources,
                variation_axis=axis,
            ),
            parents=tuple(c.id for c in refs),
            voice=Voice.THIRD,
            objects=merge_objects([c.objects for c in refs]),
            filter=None,
            meta={"intent_hash": intent_hash, "variation_axis": axis.value},
        )
        for axis in SPARK_AXES
    )
    return InstrumentPlan(kind=InstrumentKind.CREATIVE_SPARK, cards=planned)


def plan_lasso_text(
    source: Card, start: int, end: int, context: StoryContext = StoryContext()
) -> InstrumentPlan:
    """Extract a story span verbatim as the focal text of a new elaboration."""
    if start == end:
        raise EmptyRange("lasso selection is empty")
    if not (0 <= start < end <= len(source.story)):
        raise OutOfBounds(
            f"range [{start}, {end}) outside story of length {len(source.story)}"
        )
    planned = PlannedCard(
        request=GenerationRequest(
            mode=InstrumentKind.LASSO.value,
            intent=_card_intent(source, context),
            sources=(SourceCard.of(source),),
            focal_text=source.story[start:end],
        ),
        parents=(source.id,),
        voice=source.voice,
        objects=source.objects,
        filter=None,
        meta={},
    )
    return InstrumentPlan(kind=InstrumentKind.LASSO, cards=(planned,))


def plan_lasso_image(
    source: Card,
    polygon: Polygon,
    image_bytes: bytes,
    put_asset: Callable[[bytes], ImageAssetRef],
    context: StoryContext = StoryContext(),
) -> InstrumentPlan:
    """Lasso an image region: masked bounding-box crop plus the full story as context."""
    crop_bytes, bbox = mask_crop(image_bytes, polygon)
    crop_ref = put_asset(crop_bytes)
    planned = PlannedCard(
        request=GenerationRequest(
            mode=InstrumentKind.LASSO.value,
            intent=_card_intent(source, context),
            sources=(SourceCard.of(source),),
            crop=CropRef(source_card=source.id, bbox=bbox, asset_id=crop_ref.asset_id),
        ),
        parents=(source.id,),
        voice=source.voice,
        objects=source.objects,
        filter=None,
        meta={},
    )
    return InstrumentPlan(kind=InstrumentKind.LASSO, cards=(planned,))


def plan_collage(
    frame: CollageFrame,
    intent_text: str | None,
    cards: Mapping[str, Card],
    context: StoryContext = StoryContext(),
) -> InstrumentPlan:
    """Compose crops, sketches, and notes into one new card.

    Every card contributing an image crop becomes a collage parent; the
    spatial arrangement travels in the request as (y, x)-ordered placements.
    """
    crop_ids = frame.crop_card_ids()
    contributors = _resolve(crop_ids, cards)
    by_id = {c.id: c for c in contributors}
    for placement in frame.placements:
        src = placement.source
        if isinstance(src, ImageCrop):
            image = by_id[src.card_id].image
            if (
                src.rect.left + src.rect.width > image.width
                or src.rect.top + src.rect.height > image.height
            ):
                raise BadCropRect(
                    f"crop {src.rect.to_dict()} exceeds card {src.card_id} "
                    f"image {image.width}x{image.height}"
                )

    typed = (intent_text or "").strip() or None
    if typed is None and frame.note_texts():
        # Note-only frames still carry textual intent: surface it directly.
        typed = " / ".join(frame.note_texts())
    intent = MultimodalIntent(
        typed_text=typed,
        sketch_strokes=frame.sketch_strokes(),
        reference_cards=crop_ids,
        global_theme=context.global_theme,
        prior_text=context.prior_text,
    )
    planned = PlannedCard(
        request=GenerationRequest(
            mode=InstrumentKind.COLLAGE.value,
            intent=intent,
            sources=tuple(SourceCard.of(c) for c in contributors),
            placements=frame.placements,
        ),
        parents=crop_ids,
        voice=Voice.THIRD,
        objects=merge_objects([c.objects for c in contributors]),
        filter=None,
        meta={"intent_hash": intent.intent_hash()},
    )
    return InstrumentPlan(kind=InstrumentKind.COLLAGE, cards=(planned,))


def plan_filter(
    source: Card, kind: FilterKind, context: StoryContext = StoryContext()
) -> InstrumentPlan:
    """Restyle image and re-tone text together; object keywords stay put."""
    directives = directives_for(kind)
    planned = PlannedCard(
        request=GenerationRequest(
            mode=InstrumentKind.FILTER.value,
            intent=_card_intent(source, context),
            sources=(SourceCard.of(source),),
            filter_delta=directives,
            filter_kind=kind.value,
        ),
        parents=(source.id,),
        voice=source.voice,
        objects=source.objects,
        filter=kind,
        meta={},
    )
    return InstrumentPlan(kind=InstrumentKind.FILTER, cards=(planned,))


def plan_perspective_shift(
    source: Card, target: Voice, context: StoryContext = StoryContext()
) -> InstrumentPlan:
    """Re-voice narration and viewpoint; regeneration of the same voice is not a shift."""
    if target is source.voice:
        raise SameVoice(f"card already narrated in the {target.value} person")
    planned = PlannedCard(
        request=GenerationRequest(
            mode=InstrumentKind.PERSPECTIVE_SHIFT.value,
            intent=_card_intent(source, context),
            sources=(SourceCard.of(source),),
            voice_target=target,
        ),
        parents=(source.id,),
        voice=target,
        objects=source.objects,
        filter=source.filter,
        meta={},
    )
    return InstrumentPlan(kind=InstrumentKind.PERSPECTIVE_SHIFT, cards=(planned,))


def realize(
    plan: InstrumentPlan,
    generate: Callable[[GenerationRequest], tuple["TextAgentReply", ImageAssetRef]],
    new_card_id: Callable[[], str],
    timestamp: float,
) -> InstrumentResult:
    """Run a plan's requests and assemble cards, edges, and provenance metadata."""
    generated: list[tuple[PlannedCard, Any, ImageAssetRef]] = []
    for planned in plan.cards:
        reply, asset = generate(planned.request)
        generated.append((planned, reply, asset))

    cards: list[Card] = []
    edges: list[ProvenanceEdge] = []
    node_meta: dict[str, dict[str, str]] = {}
    for planned, reply, asset in generated:
        card = Card(
            id=new_card_id(),
            story=reply.story,
            image=asset,
            objects=planned.objects,
            voice=planned.voice,
            origin=plan.kind,
            created_at=timestamp,
            filter=planned.filter,
        )
        cards.append(card)
        edges.extend(
            ProvenanceEdge(parent=parent, child=card.id, kind=plan.kind)
            for parent in planned.parents
        )
        if planned.meta:
            node_meta[card.id] = dict(planned.meta)
    return InstrumentResult(cards=tuple(cards), edges=tuple(edges), node_meta=node_meta)
