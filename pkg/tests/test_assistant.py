"""Assistant: system instruction content, chat round trips, history truncation."""

import itertools

import pytest

from conftest import make_recipe

from sous_chef.assistant import (
    InvalidInputError,
    ask,
    build_system_instruction,
    truncate_history,
)
from sous_chef.gateway import GatewayError, LlmGateway
from sous_chef.model import (
    ChatModality,
    ChatRole,
    ChatTurn,
    UserProfile,
    now_utc,
)
from sous_chef.perception import pantry_add


def _turn(role, content="..."):
    return ChatTurn(role=role, modality=ChatModality.TEXT, content=content,
                    timestamp=now_utc())


class TestSystemInstruction:
    def test_empty_session(self, session, profile):
        text = build_system_instruction(session, profile)
        assert "sous chef" in text.lower()
        assert "No ingredients scanned yet." in text

    def test_full_context_embedded(self, stocked_session, profile):
        offered = make_recipe(title="Tomato Omelette",
                              required=(("egg", "3"), ("tomato", "1")),
                              steps=("Dice the tomato.", "Whisk and cook."))
        other = make_recipe(title="Onion Pancakes")
        stocked_session.offered_recipes.extend([offered, other])
        stocked_session.selected_recipe = offered.id
        text = build_system_instruction(stocked_session, profile)
        for key in ("tomato", "egg", "onion", "flour", "milk"):
            assert key in text
        assert "Tomato Omelette" in text
        assert "Onion Pancakes" in text
        assert "Dice the tomato." in text  # selected recipe in full
        assert "vegetarian" in text
        assert "italian" in text
        assert "cooking level: 2" in text

    def test_language_directive_last(self, session, profile):
        profile.language = "fa"
        text = build_system_instruction(session, profile)
        assert text.splitlines()[-1] == "Answer in Persian."

    def test_pure_function_of_inputs(self, stocked_session, profile):
        first = build_system_instruction(stocked_session, profile)
        second = build_system_instruction(stocked_session, profile)
        assert first == second


class TestAsk:
    def test_round_trip_appends_two_turns(self, mock_gateway, session, profile):
        reply = ask(mock_gateway, session, profile, "What can I make?",
                    fixture_tag="suggest_reply")
        assert reply.role is ChatRole.ASSISTANT
        assert reply.content.strip()
        assert len(session.chat_history) == 2
        assert session.chat_history[0].role is ChatRole.USER
        assert session.chat_history[1] is reply

    def test_voice_and_text_paths_identical_content(self, mock_gateway, session,
                                                    profile):
        text_reply = ask(mock_gateway, session, profile, "What can I make?",
                         modality=ChatModality.TEXT, fixture_tag="suggest_reply")
        voice_reply = ask(mock_gateway, session, profile, "What can I make?",
                          modality=ChatModality.VOICE_TRANSCRIPT,
                          fixture_tag="suggest_reply")
        assert text_reply.content == voice_reply.content
        assert voice_reply.modality is ChatModality.VOICE_TRANSCRIPT
        assert session.chat_history[2].modality is ChatModality.VOICE_TRANSCRIPT

    def test_blank_input_rejected_history_unchanged(self, mock_gateway, session,
                                                    profile):
        with pytest.raises(InvalidInputError):
            ask(mock_gateway, session, profile, "   ")
        assert session.chat_history == []

    def test_gateway_failure_marks_user_turn_unanswered(self, mock_gateway, session,
                                                        profile):
        with pytest.raises(GatewayError):
            ask(mock_gateway, session, profile, "hello?", fixture_tag="no_such_reply")
        assert len(session.chat_history) == 1
        turn = session.chat_history[0]
        assert turn.role is ChatRole.USER
        assert turn.unanswered

    def test_context_includes_pantry(self, session, profile, mock_gateway):
        pantry_add(session, "saffron")
        captured = {}
        original = mock_gateway.provider.complete

        def _spy(request):
            captured["system"] = request.system_instruction
            return original(request)

        mock_gateway.provider.complete = _spy
        ask(mock_gateway, session, profile, "hi", fixture_tag="suggest_reply")
        assert "saffron" in captured["system"]


class TestTruncateHistory:
    def test_suffix_kept(self):
        history = [_turn(ChatRole.USER if i % 2 == 0 else ChatRole.ASSISTANT, str(i))
                   for i in range(10)]
        kept = truncate_history(history, 4)
        assert [t.content for t in kept] == ["6", "7", "8", "9"]
        assert kept[0].role is ChatRole.USER

    def test_short_history_unchanged(self):
        history = [_turn(ChatRole.USER), _turn(ChatRole.ASSISTANT), _turn(ChatRole.USER)]
        assert truncate_history(history, 10) == history

    def test_orphan_assistant_turn_dropped(self):
        # u a u a u with budget 2: the naive suffix [a, u] opens mid-pair.
        history = [
            _turn(ChatRole.USER, "u1"), _turn(ChatRole.ASSISTANT, "a1"),
            _turn(ChatRole.USER, "u2"), _turn(ChatRole.ASSISTANT, "a2"),
            _turn(ChatRole.USER, "u3"),
        ]
        kept = truncate_history(history, 2)
        assert [t.content for t in kept] == ["u3"]

    def test_budget_below_two_rejected(self):
        with pytest.raises(ValueError):
            truncate_history([], 1)

    def test_pair_integrity_over_enumerated_histories(self):
        # Every alternating history up to length 6, every budget up to 6:
        # the window must open on a user turn and never split a pair.
        for length in range(0, 7):
            history = [
                _turn(ChatRole.USER if i % 2 == 0 else ChatRole.ASSISTANT, str(i))
                for i in range(length)
            ]
            for budget in range(2, 7):
                kept = truncate_history(history, budget)
                assert len(kept) <= budget
                if kept:
                    assert kept[0].role is ChatRole.USER
                    assert kept == history[len(history) - len(kept):]
                for first, second in itertools.pairwise(kept):
                    if second.role is ChatRole.ASSISTANT:
                        assert first.role is ChatRole.USER
