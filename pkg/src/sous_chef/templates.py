"""Prompt templates for every model call, with deterministic rendering.

Each template is plain text with ``{placeholder}`` slots. Rendering is pure
substitution: same template and context always produce the same prompt, and
a missing placeholder is an error rather than a silent blank.
"""

from __future__ import annotations

import re

TEMPLATE_IDS = (
    "detect_ingredients",
    "generate_recipes",
    "step_feedback",
    "assistant_chat",
    "translate",
)


class TemplateError(ValueError):
    """Raised for an unknown template or an unfilled placeholder."""

    def __init__(self, message: str, placeholder: str = ""):
        super().__init__(message)
        self.placeholder = placeholder


TEMPLATES = {
    "detect_ingredients": (
        "Look at the attached photo of a kitchen counter or workspace.\n"
        "Identify every food ingredient you can see and return the coordinates of each "
        "ingredient as a JSON array. Each element must be an object with:\n"
        '  "name": the ingredient name in {language},\n'
        '  "box": [y_min, x_min, y_max, x_max] in a 0-1000 normalized frame.\n'
        "Return only ingredients, not utensils, packaging, or appliances.\n"
        "If no ingredients are visible, say so in plain text without a JSON payload."
    ),
    "generate_recipes": (
        "You are planning meals for a home cook. The cook has exactly these ingredients "
        "on hand: {ingredients}.\n"
        "Cook profile: {profile}\n"
        "Suggest the {count} best recipes that can be made using ONLY the listed "
        "ingredients. Do not introduce any ingredient that is not on the list.\n"
        "Respond in {language} with a JSON array of recipe objects, each with:\n"
        '  "title", "cuisine", "servings",\n'
        '  "required": [{{"name": ..., "amount": ...}}] clearly stating the amount needed '
        "of every ingredient,\n"
        '  "steps": ordered instructions,\n'
        '  "nutrition": {{"calories", "fat_g", "carbohydrates_g", "fiber_g", "protein_g", '
        '"vitamins"}},\n'
        '  "allergens": possible allergens in the dish.'
    ),
    "step_feedback": (
        "The cook is following the recipe \"{recipe}\" and just attempted this step:\n"
        "  {step}\n"
        "Look at the attached photo of their workspace and judge whether the step was "
        "done correctly.\n"
        "Respond in {language} with a JSON object: {{\"verdict\": \"correct\" or "
        "\"needs_adjustment\", \"explanation\": feedback on their performance}}.\n"
        "If the step needs adjustment, the explanation must say what to fix."
    ),
    "assistant_chat": (
        "Conversation so far:\n{history}\n"
        "The cook now says: {question}\n"
        "Reply as the sous chef, in plain text."
    ),
    "translate": (
        "Translate the following cooking-app text into {language}. Keep quantities, "
        "ingredient names, and formatting intact.\n"
        "Text: {text}\n"
        'Respond with a JSON object: {{"translation": the translated text}}.'
    ),
}

# Single-brace {identifier} slots; JSON braces in template bodies are doubled.
_PLACEHOLDER = re.compile(r"(?<!\{)\{([a-z_]+)\}(?!\})")


def placeholders(template_id: str) -> list:
    """Placeholder names referenced by a template body, in order of first use."""
    body = _body(template_id)
    seen = []
    for match in _PLACEHOLDER.finditer(body):
        name = match.group(1)
        if name not in seen:
            seen.append(name)
    return seen


def _body(template_id: str) -> str:
    try:
        return TEMPLATES[template_id]
    except KeyError:
        raise TemplateError(f"unknown template {template_id!r}") from None


def render_prompt(template_id: str, context: dict) -> str:
    """Substitute ``context`` into the template; every placeholder must be supplied."""
    body = _body(template_id)

    def _sub(match):
        name = match.group(1)
        if name not in context:
            raise TemplateError(
                f"template {template_id!r} is missing placeholder {name!r}",
                placeholder=name,
            )
        return str(context[name])

    rendered = _PLACEHOLDER.sub(_sub, body)
    return rendered.replace("{{", "{").replace("}}", "}")
