from .collage import (
    CollageFrame,
    CropRect,
    ImageCrop,
    Placement,
    SketchFragment,
    TextNote,
    frame_from_dict,
)
from .engine import (
    InstrumentPlan,
    InstrumentResult,
    PlannedCard,
    plan_collage,
    plan_creative_spark,
    plan_exact_craft,
    plan_filter,
    plan_lasso_image,
    plan_lasso_text,
    plan_perspective_shift,
    realize,
)
from .filters import FILTER_TABLE, FilterDirectives, directives_for
from .intents import MultimodalIntent, StoryContext
from .requests import (
    SPARK_AXES,
    CropRef,
    GenerationRequest,
    SourceCard,
    VariationAxis,
    primary_text,
)

__all__ = [
    "CollageFrame",
    "CropRect",
    "CropRef",
    "FILTER_TABLE",
    "FilterDirectives",
    "GenerationRequest",
    "ImageCrop",
    "InstrumentPlan",
    "InstrumentResult",
    "MultimodalIntent",
    "Placement",
    "PlannedCard",
    "SPARK_AXES",
    "SketchFragment",
    "SourceCard",
    "StoryContext",
    "TextNote",
    "VariationAxis",
    "directives_for",
    "frame_from_dict",
    "plan_collage",
    "plan_creative_spark",
    "plan_exact_craft",
    "plan_filter",
    "plan_lasso_image",
    "plan_lasso_text",
    "plan_perspective_shift",
    "primary_text",
    "realize",
]
