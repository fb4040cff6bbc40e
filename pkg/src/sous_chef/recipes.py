"""Recipe generation constrained to the pantry, plus local re-checking.

The prompt asks the model to respect the pantry, the diet, and the
allergies, but model output is unreliable: everything is re-checked here and
violators are discarded and reported, never repaired or silently kept. A
recipe reaches ``session.offered_recipes`` only after it passes both the
subset/nutrition validator and the allergen check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .extraction import extract_structured
from .gateway import LlmGateway, LlmRequest
from .model import (
    NutritionFacts,
    PantrySession,
    Recipe,
    RequiredIngredient,
    UserProfile,
    canonicalize,
    new_id,
)
from .templates import render_prompt


class EmptyPantryError(ValueError):
    pass


class RecipeNotFound(KeyError):
    def __init__(self, recipe_id: str):
        super().__init__(recipe_id)
        self.recipe_id = recipe_id

    def __str__(self):
        return f"no offered recipe with id {self.recipe_id!r}"


class RatingRangeError(ValueError):
    pass


class NoValidRecipesError(Exception):
    """Every generated recipe failed validation; per-recipe reports attached."""

    def __init__(self, discarded):
        super().__init__(
            f"all {len(discarded)} generated recipes were discarded"
        )
        self.discarded = discarded


@dataclass(frozen=True)
class StaplesPolicy:
    """Allowlist of assumed-available ingredients (salt, water, ...).

    Default is empty: the strict reading of cooking only with what was
    scanned. Real kitchens usually configure a small set.
    """

    allowed_keys: frozenset = frozenset()

    @classmethod
    def of(cls, *names: str) -> "StaplesPolicy":
        return cls(allowed_keys=frozenset(canonicalize(n) for n in names))


@dataclass
class ValidationReport:
    recipe_id: str
    missing_ingredients: list = field(default_factory=list)
    nutrition_complete: bool = True
    schema_errors: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            not self.missing_ingredients
            and self.nutrition_complete
            and not self.schema_errors
        )

    def to_dict(self) -> dict:
        return {
            "recipe_id": self.recipe_id,
            "ok": self.ok,
            "missing_ingredients": list(self.missing_ingredients),
            "nutrition_complete": self.nutrition_complete,
            "schema_errors": list(self.schema_errors),
        }


@dataclass
class AllergenHit:
    allergen: str
    matched_in: str  # "declared_allergen_list" | "ingredient_name"

    def to_dict(self) -> dict:
        return {"allergen": self.allergen, "matched_in": self.matched_in}


@dataclass
class AllergenReport:
    recipe_id: str
    hits: list = field(default_factory=list)

    @property
    def safe(self) -> bool:
        return not self.hits

    def to_dict(self) -> dict:
        return {"recipe_id": self.recipe_id, "hits": [h.to_dict() for h in self.hits]}


@dataclass
class DiscardedRecipe:
    """Why one generated recipe never reached the session."""

    title: str
    validation: ValidationReport
    allergens: AllergenReport

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "validation": self.validation.to_dict(),
            "allergens": self.allergens.to_dict(),
        }


@dataclass
class GenerationOutcome:
    accepted: list  # of Recipe, already appended to the session
    discarded: list = field(default_factory=list)  # of DiscardedRecipe

    @property
    def shortfall(self) -> int:
        return len(self.discarded)


def validate_recipe(recipe: Recipe, pantry_keys, staples: StaplesPolicy) -> ValidationReport:
    """Check the pantry-subset rule, nutrition completeness, and basic shape."""
    available = set(pantry_keys) | set(staples.allowed_keys)
    missing = []
    for key in recipe.required_keys():
        if key not in available and key not in missing:
            missing.append(key)

    schema_errors = []
    if not recipe.required:
        schema_errors.append("required ingredient list is empty")
    for entry in recipe.required:
        if not entry.amount or not entry.amount.strip():
            schema_errors.append(f"ingredient {entry.display_name!r} has no amount")
    if not recipe.steps:
        schema_errors.append("step list is empty")
    for i, step in enumerate(recipe.steps):
        if not step or not step.strip():
            schema_errors.append(f"step {i} is blank")

    return ValidationReport(
        recipe_id=recipe.id,
        missing_ingredients=missing,
        nutrition_complete=recipe.nutrition.is_complete,
        schema_errors=schema_errors,
    )


def check_allergens(recipe: Recipe, profile: UserProfile) -> AllergenReport:
    """Conservative, case-insensitive substring matching of profile allergies.

    False positives are acceptable; a missed allergen is not.
    """
    hits = []
    for allergy in profile.allergies:
        needle = allergy.strip().lower()
        if not needle:
            continue
        for declared in recipe.allergens:
            if needle in declared.lower():
                hits.append(AllergenHit(allergen=allergy, matched_in="declared_allergen_list"))
        for entry in recipe.required:
            if needle in entry.canonical_key:
                hits.append(AllergenHit(allergen=allergy, matched_in="ingredient_name"))
    return AllergenReport(recipe_id=recipe.id, hits=hits)


def decode_recipe(payload: dict) -> Recipe:
    """Build a Recipe from one wire object, tolerating optional fields."""
    required = []
    for entry in payload.get("required") or []:
        name = str(entry["name"])
        required.append(
            RequiredIngredient(
                canonical_key=canonicalize(name),
                display_name=name,
                amount=str(entry.get("amount", "")),
            )
        )
    nutrition = NutritionFacts.from_dict(payload.get("nutrition") or {})
    return Recipe(
        id=str(payload.get("id") or new_id()),
        title=str(payload["title"]),
        cuisine=str(payload.get("cuisine", "")),
        servings=int(payload.get("servings", 1)),
        required=required,
        steps=[str(s) for s in payload.get("steps") or []],
        nutrition=nutrition,
        allergens=[str(a) for a in payload.get("allergens") or []],
    )


def _profile_context(profile: UserProfile, session: PantrySession) -> str:
    parts = [
        "dietary restrictions: " + (", ".join(profile.dietary_restrictions) or "none"),
        "allergies: " + (", ".join(profile.allergies) or "none"),
        "favorite cuisines: " + (", ".join(profile.favorite_cuisines) or "none"),
        f"cooking level: {profile.cooking_level} of 5",
    ]
    ratings = [
        f"{r.title}: {r.rating}/5"
        for r in session.offered_recipes
        if r.rating is not None
    ]
    if ratings:
        parts.append("meal ratings so far: " + "; ".join(ratings))
    return "; ".join(parts)


def generate_recipes(gateway: LlmGateway, session: PantrySession, profile: UserProfile,
                     count: int, staples: StaplesPolicy = StaplesPolicy(),
                     fixture_tag: Optional[str] = None) -> GenerationOutcome:
    """Generate up to ``count`` recipes constrained to the session pantry.

    Survivors are appended to ``session.offered_recipes``; losers come back
    in ``discarded`` with full reports. Raises ``NoValidRecipesError`` when
    nothing survives so callers cannot mistake a bad batch for success.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    pantry = session.pantry_keys()
    if not pantry:
        raise EmptyPantryError("cannot generate recipes from an empty pantry")

    from .i18n import LANGUAGE_NAMES

    prompt = render_prompt(
        "generate_recipes",
        {
            "ingredients": ", ".join(pantry),
            "profile": _profile_context(profile, session),
            "count": str(count),
            "language": LANGUAGE_NAMES[profile.language],
        },
    )
    request = LlmRequest(
        template_id="generate_recipes",
        system_instruction=(
            "You are a meal planner who never uses ingredients the cook does not have."
        ),
        user_text=prompt,
        language=profile.language,
        max_output_tokens=4096,
        fixture_tag=fixture_tag,
    )
    response = gateway.complete(request)
    entries = extract_structured(response.raw_text, "recipes")

    accepted = []
    discarded = []
    for entry in entries:
        try:
            recipe = decode_recipe(entry)
        except (KeyError, TypeError, ValueError) as exc:
            placeholder = str(entry.get("title", "<untitled>")) if isinstance(entry, dict) else "<untitled>"
            report = ValidationReport(recipe_id="", schema_errors=[f"malformed recipe: {exc}"])
            discarded.append(
                DiscardedRecipe(title=placeholder, validation=report,
                                allergens=AllergenReport(recipe_id=""))
            )
            continue
        validation = validate_recipe(recipe, pantry, staples)
        allergens = check_allergens(recipe, profile)
        if validation.ok and allergens.safe:
            session.offered_recipes.append(recipe)
            accepted.append(recipe)
        else:
            discarded.append(
                DiscardedRecipe(title=recipe.title, validation=validation,
                                allergens=allergens)
            )
    if not accepted:
        raise NoValidRecipesError(discarded)
    return GenerationOutcome(accepted=accepted, discarded=discarded)


def select_recipe(session: PantrySession, recipe_id: str) -> Recipe:
    """Mark an offered recipe as the one being cooked."""
    recipe = session.find_offered(recipe_id)
    if recipe is None:
        raise RecipeNotFound(recipe_id)
    session.selected_recipe = recipe_id
    return recipe


def rate_recipe(session: PantrySession, recipe_id: str, stars: int) -> Recipe:
    """Store a 1-5 rating; ratings feed later generation prompts."""
    if isinstance(stars, bool) or not isinstance(stars, int) or not 1 <= stars <= 5:
        raise RatingRangeError(f"stars={stars!r} outside 1-5")
    recipe = session.find_offered(recipe_id)
    if recipe is None:
        raise RecipeNotFound(recipe_id)
    recipe.rating = stars
    return recipe


def shopping_list(recipe: Recipe, pantry_keys) -> list:
    """Required entries not covered by the pantry, in recipe order."""
    have = set(pantry_keys)
    return [entry for entry in recipe.required if entry.canonical_key not in have]
