"""Exception taxonomy for the whole engine.

Every error carries a stable ``code`` string that the HTTP layer puts verbatim
into its uniform ``{code, message, detail}`` error body, plus the status class
it maps to. Raising anything outside this taxonomy from a public operation is
a bug.
"""

from __future__ import annotations


class StoryCanvasError(Exception):
    code = "internal_error"
    http_status = 500

    def __init__(self, message: str = "", *, detail: object = None):
        super().__init__(message or self.code)
        self.detail = detail


class ValidationFailure(StoryCanvasError):
    code = "validation_error"
    http_status = 422


class NotFound(StoryCanvasError):
    code = "not_found"
    http_status = 404


class ProviderFailure(StoryCanvasError):
    code = "provider_error"
    http_status = 502


# --- card model / provenance ---

class UnknownCard(NotFound):
    code = "unknown_card"


class CycleError(ValidationFailure):
    code = "cycle"


class MultiParentError(ValidationFailure):
    code = "multi_parent"


class OutOfBounds(ValidationFailure):
    code = "out_of_bounds"


# --- instruments ---

class EmptyIntent(ValidationFailure):
    code = "empty_intent"


class EmptyRange(ValidationFailure):
    code = "empty_range"


class DegeneratePolygon(ValidationFailure):
    code = "degenerate_polygon"


class EmptyFrame(ValidationFailure):
    code = "empty_frame"


class BadCropRect(ValidationFailure):
    code = "bad_crop_rect"


class InvalidPlacement(ValidationFailure):
    code = "invalid_placement"


class SameVoice(ValidationFailure):
    code = "same_voice"


# --- orchestrator ---

class UnknownTemplate(NotFound):
    code = "unknown_template"


class MissingSlot(ValidationFailure):
    code = "missing_slot"

    def __init__(self, slot: str):
        super().__init__(f"missing slot: {slot}", detail={"slot": slot})
        self.slot = slot


class SchemaError(ValidationFailure):
    code = "schema_error"


class ParseError(SchemaError):
    # Retry exhaustion reports a SchemaError; non-JSON payloads are the
    # special case, hence the subclassing.
    code = "parse_error"


class ProviderError(ProviderFailure):
    code = "provider_error"


class ProviderTimeout(ProviderFailure):
    code = "provider_timeout"
    http_status = 504

    def __init__(self, message: str = "", *, elapsed: float = 0.0):
        super().__init__(message or f"provider timed out after {elapsed:.3f}s")
        self.elapsed = elapsed


class RateLimited(ProviderFailure):
    code = "rate_limited"
    http_status = 429


class ModeConstraintViolation(ValidationFailure):
    code = "mode_constraint_violation"


class UnknownAsset(NotFound):
    code = "unknown_asset"


# --- clusters / session service ---

class UnknownObject(NotFound):
    code = "unknown_object"


class UnknownSession(NotFound):
    code = "unknown_session"


class CyclicGraph(ValidationFailure):
    code = "cyclic_graph"


class SchemaVersionMismatch(ValidationFailure):
    code = "schema_version_mismatch"


class CorruptAsset(ValidationFailure):
    code = "corrupt_asset"
