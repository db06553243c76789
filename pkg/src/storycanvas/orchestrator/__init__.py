from .agent import ImageAgentRequest, ImageMode, Orchestrator, slots_for
from .assets import AssetStore, content_id
from .providers import (
    HttpImageProvider,
    HttpTextProvider,
    MockImageProvider,
    MockTextProvider,
    ProviderConfig,
    mock_reply,
    mock_summary,
)
from .replies import (
    REPLY_FIELDS,
    SUMMARY_FIELDS,
    TextAgentReply,
    parse_summary_reply,
    parse_text_reply,
    strip_code_fence,
)
from .templates import (
    BUILTIN_TEMPLATE_DIR,
    KNOWN_SLOTS,
    PromptTemplate,
    TemplateLibrary,
    assemble_prompt,
)

__all__ = [
    "AssetStore",
    "BUILTIN_TEMPLATE_DIR",
    "HttpImageProvider",
    "HttpTextProvider",
    "ImageAgentRequest",
    "ImageMode",
    "KNOWN_SLOTS",
    "MockImageProvider",
    "MockTextProvider",
    "Orchestrator",
    "PromptTemplate",
    "ProviderConfig",
    "REPLY_FIELDS",
    "SUMMARY_FIELDS",
    "TemplateLibrary",
    "TextAgentReply",
    "assemble_prompt",
    "content_id",
    "mock_reply",
    "mock_summary",
    "parse_summary_reply",
    "parse_text_reply",
    "slots_for",
    "strip_code_fence",
]
