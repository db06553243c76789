import json
import re
import time
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from storycanvas.errors import (
    MissingSlot,
    ModeConstraintViolation,
    ParseError,
    ProviderTimeout,
    SchemaError,
    UnknownTemplate,
    ValidationFailure,
)
from storycanvas.instruments.engine import plan_exact_craft, plan_filter, plan_lasso_text
from storycanvas.instruments.intents import MultimodalIntent
from storycanvas.model.cards import FilterKind
from storycanvas.orchestrator.agent import ImageAgentRequest, ImageMode, Orchestrator, slots_for
from storycanvas.orchestrator.assets import AssetStore
from storycanvas.orchestrator.providers import (
    MockImageProvider,
    ProviderConfig,
    mock_reply,
)
from storycanvas.orchestrator.replies import TextAgentReply, parse_text_reply
from storycanvas.orchestrator.templates import PromptTemplate, TemplateLibrary

from conftest import make_card

DATA = Path(__file__).parent / "data"


# --- template assembly ---


def library_with(body, template_id="t"):
    return TemplateLibrary({template_id: PromptTemplate.from_body(template_id, body)})


def test_builtin_story_template_substitutes_all_slots():
    library = TemplateLibrary.builtin()
    slots = {
        "text": "a key in the box",
        "previous_text": "[c1] Claire finds a box.",
        "full_text": "Chapter one.",
        "global_theme": "seaside mystery",
    }
    prompt = library.assemble("story_generation", slots)
    assert "{" not in prompt  # no residual markers of any kind
    for value in slots.values():
        assert value in prompt


def test_missing_slot_is_named():
    library = TemplateLibrary.builtin()
    with pytest.raises(MissingSlot) as err:
        library.assemble(
            "story_generation",
            {"text": "x", "previous_text": "y", "full_text": "z"},
        )
    assert err.value.slot == "global_theme"


def test_unknown_template():
    with pytest.raises(UnknownTemplate):
        TemplateLibrary.builtin().assemble("nope", {})


def test_single_pass_substitution_with_marker_in_value():
    library = library_with("A {text} B {global_theme} C")
    slots = {"text": "literal {text} inside", "global_theme": "{previous_text}"}
    result = library.assemble("t", slots)

    # independent oracle: split on markers, join with values
    def naive(body, values):
        parts = re.split(r"(\{[a-z_]+\})", body)
        return "".join(
            values[p[1:-1]] if p.startswith("{") and p.endswith("}") else p for p in parts
        )

    assert result == naive("A {text} B {global_theme} C", slots)
    assert result.count("literal {text} inside") == 1


def test_unknown_slot_marker_rejected_at_load():
    with pytest.raises(ValidationFailure):
        PromptTemplate.from_body("bad", "hello {surprise}")


def test_template_dir_loading(tmp_path):
    (tmp_path / "custom.txt").write_text("hi {text}", encoding="utf-8")
    (tmp_path / "VERSION").write_text("7\n", encoding="utf-8")
    library = TemplateLibrary.load_dir(tmp_path)
    assert library.version == "7"
    assert library.assemble("custom", {"text": "there"}) == "hi there"


# --- reply parsing: fixture corpus ---


def load_corpus():
    return json.loads((DATA / "replies" / "corpus.json").read_text(encoding="utf-8"))


@pytest.mark.parametrize("case", load_corpus(), ids=lambda c: c["name"])
def test_reply_corpus(case):
    if case["expect"] == "ok":
        reply = parse_text_reply(case["raw"])
        assert reply.to_dict() == case["parsed"]
    elif case["expect"] == "parse_error":
        with pytest.raises(ParseError):
            parse_text_reply(case["raw"])
    else:
        with pytest.raises(SchemaError) as err:
            parse_text_reply(case["raw"])
        if "field" in case:
            assert (err.value.detail or {}).get("field") == case["field"]


def test_corpus_is_large_enough():
    cases = load_corpus()
    assert len(cases) >= 30
    kinds = {c["expect"] for c in cases}
    assert kinds == {"ok", "schema_error", "parse_error"}


text_values = st.text(
    alphabet=st.characters(blacklist_categories=("Cs",)), min_size=0, max_size=80
)


@settings(max_examples=150, deadline=None)
@given(story=text_values.filter(lambda s: s.strip()), intention=text_values, sketch=text_values)
def test_parse_serialize_roundtrip(story, intention, sketch):
    reply = TextAgentReply(story=story, intention=intention, sketch_information=sketch)
    assert parse_text_reply(reply.to_json()) == reply


# --- mock text provider ---


def request_payload(typed="the box opens", objects=(("Claire", "character"),), assets=None):
    assets = assets or AssetStore()
    source = make_card(assets, card_id="A", objects=objects)
    plan = plan_exact_craft(
        MultimodalIntent(typed_text=typed, reference_cards=("A",)), {"A": source}
    )
    return plan.cards[0].request.to_dict()


def test_mock_reply_echoes_focus_and_objects():
    payload = request_payload(objects=(("Claire", "character"), ("box", "object")))
    reply = mock_reply(payload)
    assert "the box opens" in reply.story
    assert "Claire" in reply.story and "box" in reply.story
    assert reply.story.startswith("MOCK[")


def test_mock_reply_is_deterministic():
    payload = request_payload()
    assert mock_reply(payload).to_json() == mock_reply(payload).to_json()


def test_mock_reply_sketch_information():
    payload = request_payload()
    assert mock_reply(payload).sketch_information == "none"
    payload["intent"]["sketch_strokes"] = [[[0, 0], [4, 4]]]
    assert "stroke" in mock_reply(payload).sketch_information


def test_mock_reply_word_cap():
    payload = request_payload(typed="word " * 150)
    assert len(mock_reply(payload).story.split()) <= 100


def test_run_text_agent_fixed_request_byte_identical(assets, orchestrator):
    source = make_card(assets, card_id="A")
    plan = plan_lasso_text(source, 0, 6)
    one = orchestrator.run_text_agent(plan.cards[0].request)
    two = orchestrator.run_text_agent(plan.cards[0].request)
    assert one.to_json() == two.to_json()


# --- retry / timeout behavior ---


class CountingBadProvider:
    def __init__(self, raw="not json at all"):
        self.calls = 0
        self.raw = raw
        self.prompts = []

    def complete(self, prompt, payload):
        self.calls += 1
        self.prompts.append(prompt)
        return self.raw


def orchestrator_with(provider, retry_limit=1):
    assets = AssetStore()
    config = ProviderConfig(mock=True, retry_limit=retry_limit)
    return Orchestrator(config, assets, text_provider=provider)


def test_retry_exhaustion_yields_schema_error_after_two_attempts(assets):
    provider = CountingBadProvider()
    orch = orchestrator_with(provider, retry_limit=1)
    request = plan_exact_craft(MultimodalIntent(typed_text="x"), {}).cards[0].request
    with pytest.raises(SchemaError):
        orch.run_text_agent(request)
    assert provider.calls == 2
    assert provider.prompts[0] != provider.prompts[1]
    assert provider.prompts[1].endswith("Respond with valid JSON only.")


def test_retry_recovers_when_second_attempt_parses():
    class FlakyProvider:
        def __init__(self):
            self.calls = 0

        def complete(self, prompt, payload):
            self.calls += 1
            if self.calls == 1:
                return "garbage"
            return TextAgentReply("a story", "intent", "none").to_json()

    orch = orchestrator_with(FlakyProvider(), retry_limit=2)
    request = plan_exact_craft(MultimodalIntent(typed_text="x"), {}).cards[0].request
    assert orch.run_text_agent(request).story == "a story"


def test_timeout_carries_elapsed_at_least_configured():
    timeout = 0.02

    class SleepyProvider:
        def complete(self, prompt, payload):
            time.sleep(timeout * 1.5)
            raise TimeoutError("simulated provider timeout")

    assets = AssetStore()
    orch = Orchestrator(
        ProviderConfig(mock=True, timeout=timeout), assets, text_provider=SleepyProvider()
    )
    request = plan_exact_craft(MultimodalIntent(typed_text="x"), {}).cards[0].request
    with pytest.raises(ProviderTimeout) as err:
        orch.run_text_agent(request)
    assert err.value.elapsed >= timeout


# --- image agent ---


def test_sketch_scaffold_without_scaffold_rejected():
    request = ImageAgentRequest(consolidated_prompt="p", mode=ImageMode.SKETCH_SCAFFOLD)
    with pytest.raises(ModeConstraintViolation):
        request.validate()


def test_reference_anchor_without_references_rejected():
    request = ImageAgentRequest(consolidated_prompt="p", mode=ImageMode.REFERENCE_ANCHOR)
    with pytest.raises(ModeConstraintViolation):
        request.validate()


def test_mock_image_same_prompt_identical_bytes():
    provider = MockImageProvider()
    assert provider.generate("prompt A", {}) == provider.generate("prompt A", {})


def test_mock_image_prompt_changes_are_pixel_observable():
    from storycanvas.instruments.imaging import decode_png

    provider = MockImageProvider()
    prompts = [f"fixture prompt {i}" for i in range(24)]
    colors = {decode_png(provider.generate(p, {})).getpixel((0, 0)) for p in prompts}
    assert len(colors) == len(prompts)  # no collisions across the fixture set


def test_image_modes_selected_from_request(assets, orchestrator):
    # strokes -> sketch scaffold
    plan = plan_exact_craft(
        MultimodalIntent(typed_text="x", sketch_strokes=(((0.0, 0.0), (9.0, 9.0)),)), {}
    )
    reply = orchestrator.run_text_agent(plan.cards[0].request)
    image_request = orchestrator.build_image_request(plan.cards[0].request, reply)
    assert image_request.mode is ImageMode.SKETCH_SCAFFOLD
    assert image_request.scaffold is not None

    # sources -> reference anchor
    source = make_card(assets, card_id="A")
    plan = plan_filter(source, FilterKind.WARM)
    reply = orchestrator.run_text_agent(plan.cards[0].request)
    image_request = orchestrator.build_image_request(plan.cards[0].request, reply)
    assert image_request.mode is ImageMode.REFERENCE_ANCHOR
    assert image_request.references

    # nothing visual -> free
    plan = plan_exact_craft(MultimodalIntent(typed_text="pure text"), {})
    reply = orchestrator.run_text_agent(plan.cards[0].request)
    image_request = orchestrator.build_image_request(plan.cards[0].request, reply)
    assert image_request.mode is ImageMode.FREE


def test_filter_style_reaches_consolidated_prompt(assets, orchestrator):
    source = make_card(assets, card_id="A")
    plan = plan_filter(source, FilterKind.WARM)
    reply = orchestrator.run_text_agent(plan.cards[0].request)
    image_request = orchestrator.build_image_request(plan.cards[0].request, reply)
    assert "gold, amber, red, orange, yellow" in image_request.style_controls
    assert image_request.style_controls in image_request.consolidated_prompt


def test_run_image_agent_stores_content_addressed(orchestrator):
    request = ImageAgentRequest(consolidated_prompt="hello", mode=ImageMode.FREE)
    ref_one = orchestrator.run_image_agent(request)
    ref_two = orchestrator.run_image_agent(request)
    assert ref_one == ref_two
    assert ref_one.asset_id.startswith("sha256:")
    assert orchestrator.assets.get(ref_one.asset_id)


# --- slots mapping ---


def test_slots_for_maps_sources_and_context(assets):
    source = make_card(assets, card_id="A", story="Reference passage.")
    plan = plan_lasso_text(
        source,
        0,
        9,
    )
    payload = plan.cards[0].request.to_dict()
    slots = slots_for(payload)
    assert slots["text"] == "Reference"
    assert "[A] Reference passage." in slots["previous_text"]


def test_provider_config_validation():
    with pytest.raises(ValidationFailure):
        ProviderConfig(mock=False, text_endpoint="", image_endpoint="")
    with pytest.raises(ValidationFailure):
        ProviderConfig(timeout=0)
    config = ProviderConfig.from_env({"MOCK_MODE": "1"})
    assert config.mock


def test_provider_config_routing_override():
    config = ProviderConfig(
        mock=False,
        text_endpoint="http://main",
        image_endpoint="http://img",
        text_endpoint_overrides={"lasso": "http://lasso-url"},
    )
    assert config.text_endpoint_for("lasso") == "http://lasso-url"
    assert config.text_endpoint_for("filter") == "http://main"
