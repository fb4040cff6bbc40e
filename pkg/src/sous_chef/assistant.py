"""The shared-context sous-chef assistant.

Text chat and the voice path are the same brain: a voice interaction arrives
here as a transcript and differs from a typed message only in the recorded
modality. Every reply is grounded in one system instruction that embeds the
live session context (pantry, offered recipes, selection) and the profile.
"""

from __future__ import annotations

from typing import Optional

from .gateway import GatewayError, LlmGateway, LlmRequest
from .model import (
    ChatModality,
    ChatRole,
    ChatTurn,
    PantrySession,
    Recipe,
    UserProfile,
    now_utc,
)
from .templates import render_prompt

DEFAULT_HISTORY_BUDGET = 20  # turns sent back to the model per ask


class InvalidInputError(ValueError):
    pass


def _recipe_full_text(recipe: Recipe) -> str:
    lines = [f"{recipe.title} ({recipe.cuisine or 'unspecified cuisine'}, "
             f"serves {recipe.servings})"]
    lines.append("Ingredients:")
    for entry in recipe.required:
        lines.append(f"  - {entry.display_name}: {entry.amount}")
    lines.append("Steps:")
    for i, step in enumerate(recipe.steps, start=1):
        lines.append(f"  {i}. {step}")
    return "\n".join(lines)


def build_system_instruction(session: PantrySession, profile: UserProfile) -> str:
    """Deterministic system prompt embedding everything the sous chef may use."""
    from .i18n import LANGUAGE_NAMES

    lines = [
        "You are a knowledgeable sous chef. You provide cooking advice, recipe "
        "suggestions, and answers to food-related questions.",
    ]
    pantry = session.pantry_keys()
    if pantry:
        lines.append("Ingredients the cook has scanned: " + ", ".join(pantry) + ".")
    else:
        lines.append("No ingredients scanned yet.")
    if session.offered_recipes:
        titles = ", ".join(r.title for r in session.offered_recipes)
        lines.append("Recipes already recommended: " + titles + ".")
    selected = (
        session.find_offered(session.selected_recipe)
        if session.selected_recipe
        else None
    )
    if selected is not None:
        lines.append("The cook is currently making this recipe:")
        lines.append(_recipe_full_text(selected))
    lines.append(
        "Cook profile: dietary restrictions: "
        + (", ".join(profile.dietary_restrictions) or "none")
        + "; allergies: "
        + (", ".join(profile.allergies) or "none")
        + "; favorite cuisines: "
        + (", ".join(profile.favorite_cuisines) or "none")
        + f"; cooking level: {profile.cooking_level} of 5."
    )
    lines.append(f"Answer in {LANGUAGE_NAMES[profile.language]}.")
    return "\n".join(lines)


def truncate_history(history, budget: int):
    """Most recent ``budget`` turns, trimmed so the window opens on a user turn.

    Leading assistant turns in the naive suffix are the tail of a split
    user/assistant pair and are dropped rather than sent contextless.
    """
    if budget < 2:
        raise ValueError("history budget must be >= 2")
    kept = list(history[-budget:])
    while kept and kept[0].role is not ChatRole.USER:
        kept.pop(0)
    return kept


def _render_history(turns) -> str:
    if not turns:
        return "(no earlier messages)"
    lines = []
    for turn in turns:
        speaker = "Cook" if turn.role is ChatRole.USER else "Sous chef"
        lines.append(f"{speaker}: {turn.content}")
    return "\n".join(lines)


def ask(gateway: LlmGateway, session: PantrySession, profile: UserProfile,
        user_text: str, modality: ChatModality = ChatModality.TEXT,
        history_budget: int = DEFAULT_HISTORY_BUDGET,
        fixture_tag: Optional[str] = None) -> ChatTurn:
    """One round trip: record the user turn, get a reply, record and return it.

    On a gateway failure the user turn stays in history marked unanswered,
    so nothing the cook said is lost and the error still propagates.
    """
    if not user_text or not user_text.strip():
        raise InvalidInputError("chat message is empty")

    prior = truncate_history(session.chat_history, history_budget)
    user_turn = ChatTurn(
        role=ChatRole.USER,
        modality=modality,
        content=user_text,
        timestamp=now_utc(),
    )
    session.chat_history.append(user_turn)

    prompt = render_prompt(
        "assistant_chat",
        {"history": _render_history(prior), "question": user_text},
    )
    request = LlmRequest(
        template_id="assistant_chat",
        system_instruction=build_system_instruction(session, profile),
        user_text=prompt,
        language=profile.language,
        fixture_tag=fixture_tag,
    )
    try:
        response = gateway.complete(request)
    except GatewayError:
        user_turn.unanswered = True
        raise

    reply = ChatTurn(
        role=ChatRole.ASSISTANT,
        modality=modality,
        content=response.raw_text.strip(),
        timestamp=now_utc(),
    )
    session.chat_history.append(reply)
    return reply
