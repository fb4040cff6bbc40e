"""Shared fixtures: the bundled mock provider, snapshots, and sample sessions."""

from __future__ import annotations

from pathlib import Path

import pytest

import sous_chef
from sous_chef.gateway import LlmGateway, MockLlmProvider
from sous_chef.model import (
    NutritionFacts,
    PantrySession,
    Recipe,
    RequiredIngredient,
    UserProfile,
    canonicalize,
    new_id,
    now_utc,
)
from sous_chef.perception import Snapshot

FIXTURE_DIR = Path(sous_chef.__file__).parent / "fixtures"
SNAPSHOT_DIR = FIXTURE_DIR / "snapshots"


@pytest.fixture
def mock_gateway() -> LlmGateway:
    return LlmGateway(MockLlmProvider(FIXTURE_DIR))


@pytest.fixture
def counter_snapshot() -> Snapshot:
    return Snapshot(
        data=(SNAPSHOT_DIR / "counter.png").read_bytes(),
        mime_type="image/png",
        width_px=96,
        height_px=72,
    )


@pytest.fixture
def workspace_snapshot() -> Snapshot:
    return Snapshot(
        data=(SNAPSHOT_DIR / "workspace.jpg").read_bytes(),
        mime_type="image/jpeg",
        width_px=96,
        height_px=72,
    )


@pytest.fixture
def profile() -> UserProfile:
    return UserProfile(
        id=new_id(),
        dietary_restrictions=["vegetarian"],
        allergies=[],
        favorite_cuisines=["italian"],
        cooking_level=2,
        language="en",
    )


@pytest.fixture
def session(profile) -> PantrySession:
    return PantrySession.create(profile.id)


@pytest.fixture
def stocked_session(session) -> PantrySession:
    """Session whose pantry matches the five_items fixture."""
    from sous_chef.model import Ingredient, IngredientSource

    for name in ("Tomato", "Egg", "Onion", "Flour", "Milk"):
        ing = Ingredient.from_name(name, IngredientSource.SCANNED, now_utc())
        session.ingredients[ing.canonical_key] = ing
    return session


def make_recipe(title="Test Dish", required=(("tomato", "1"),), steps=("Cook it.",),
                nutrition=None, allergens=(), recipe_id=None, servings=2) -> Recipe:
    if nutrition is None:
        nutrition = NutritionFacts(calories=200, fat_g=5, carbohydrates_g=30,
                                   fiber_g=3, protein_g=8)
    return Recipe(
        id=recipe_id or new_id(),
        title=title,
        cuisine="test",
        servings=servings,
        required=[
            RequiredIngredient(canonical_key=canonicalize(name), display_name=name,
                               amount=amount)
            for name, amount in required
        ],
        steps=list(steps),
        nutrition=nutrition,
        allergens=list(allergens),
    )
