"""Domain types shared across the service, plus ingredient-name canonicalization.

Everything here is a plain value type: no I/O, no hidden state, safe to share
between threads. Each type serializes to a snake_case JSON object via
``to_dict``/``from_dict`` and round-trips field for field.
"""

from __future__ import annotations

import re
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Optional

SUPPORTED_LANGUAGES = ("en", "es", "fr", "zh", "ja", "ar", "fa", "hi")


class InvalidNameError(ValueError):
    """Raised when an ingredient name is empty or all whitespace."""


_WS_RUN = re.compile(r"\s+")


def canonicalize(name: str) -> str:
    """Normalize an ingredient name into its pantry key.

    Lowercases, trims, and collapses internal whitespace runs to single
    spaces. Deliberately nothing else: no stemming or plural folding, so
    "tomatoes" and "tomato" stay distinct keys (manual pantry edits are the
    correction path for misreads).
    """
    if not name or not name.strip():
        raise InvalidNameError("ingredient name is empty or blank")
    return _WS_RUN.sub(" ", name.strip()).lower()


def now_utc() -> datetime:
    return datetime.now(timezone.utc)


def new_id() -> str:
    return uuid.uuid4().hex


def _encode_ts(ts: datetime) -> str:
    return ts.isoformat()


def _decode_ts(raw: str) -> datetime:
    return datetime.fromisoformat(raw)


class IngredientSource(str, Enum):
    SCANNED = "scanned"
    MANUAL = "manual"


class ChatRole(str, Enum):
    USER = "user"
    ASSISTANT = "assistant"


class ChatModality(str, Enum):
    TEXT = "text"
    VOICE_TRANSCRIPT = "voice_transcript"


class StepVerdict(str, Enum):
    CORRECT = "correct"
    NEEDS_ADJUSTMENT = "needs_adjustment"


class SurveySection(str, Enum):
    BACKGROUND = "background"
    USABILITY = "usability"


@dataclass
class Ingredient:
    """One pantry entry, keyed by its canonical name."""

    display_name: str
    canonical_key: str
    source: IngredientSource
    first_seen: datetime
    quantity: Optional[str] = None  # free-form, e.g. "2 cups"; never parsed

    def __post_init__(self):
        if self.canonical_key != canonicalize(self.display_name):
            raise ValueError(
                f"canonical_key {self.canonical_key!r} does not match "
                f"canonicalize({self.display_name!r})"
            )

    @classmethod
    def from_name(cls, name, source, first_seen, quantity=None) -> "Ingredient":
        return cls(
            display_name=name.strip(),
            canonical_key=canonicalize(name),
            source=source,
            first_seen=first_seen,
            quantity=quantity,
        )

    def to_dict(self) -> dict:
        return {
            "display_name": self.display_name,
            "canonical_key": self.canonical_key,
            "quantity": self.quantity,
            "source": self.source.value,
            "first_seen": _encode_ts(self.first_seen),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Ingredient":
        return cls(
            display_name=d["display_name"],
            canonical_key=d["canonical_key"],
            quantity=d.get("quantity"),
            source=IngredientSource(d["source"]),
            first_seen=_decode_ts(d["first_seen"]),
        )


@dataclass(frozen=True)
class NormBox:
    """Bounding box in the 0-1000 normalized frame, order [y_min, x_min, y_max, x_max].

    The model family this service targets conventionally emits that frame;
    the convention is isolated here so it can change in one place.
    """

    y_min: int
    x_min: int
    y_max: int
    x_max: int

    def __post_init__(self):
        for name in ("y_min", "x_min", "y_max", "x_max"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool):
                raise ValueError(f"{name} must be an integer, got {v!r}")
            if not 0 <= v <= 1000:
                raise ValueError(f"{name}={v} outside the 0-1000 frame")
        if not self.y_min < self.y_max:
            raise ValueError(f"y_min={self.y_min} must be < y_max={self.y_max}")
        if not self.x_min < self.x_max:
            raise ValueError(f"x_min={self.x_min} must be < x_max={self.x_max}")

    def to_dict(self) -> dict:
        return {
            "y_min": self.y_min,
            "x_min": self.x_min,
            "y_max": self.y_max,
            "x_max": self.x_max,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "NormBox":
        return cls(y_min=d["y_min"], x_min=d["x_min"], y_max=d["y_max"], x_max=d["x_max"])


@dataclass
class DetectionLabel:
    """A named ingredient with its box from one snapshot."""

    name: str
    bbox: NormBox
    confidence: Optional[float] = None

    def __post_init__(self):
        if not self.name or not self.name.strip():
            raise ValueError("detection label name is empty")
        if self.confidence is not None and not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "bbox": self.bbox.to_dict(),
            "confidence": self.confidence,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DetectionLabel":
        return cls(
            name=d["name"],
            bbox=NormBox.from_dict(d["bbox"]),
            confidence=d.get("confidence"),
        )


@dataclass
class NutritionFacts:
    """Per-recipe nutrition as reported by the model.

    The four macro fields are required on any recipe that passes validation;
    they are optional here so a half-filled payload can still be decoded and
    then rejected by the validator with a useful report.
    """

    calories: Optional[float] = None
    fat_g: Optional[float] = None
    carbohydrates_g: Optional[float] = None
    protein_g: Optional[float] = None
    fiber_g: Optional[float] = None
    vitamins: dict = field(default_factory=dict)  # vitamin name -> amount text

    def __post_init__(self):
        for name in ("calories", "fat_g", "carbohydrates_g", "protein_g", "fiber_g"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ValueError(f"{name}={v} must be >= 0")

    @property
    def is_complete(self) -> bool:
        """calories/fat/carbohydrates/protein present; fiber and vitamins optional."""
        return all(
            getattr(self, name) is not None
            for name in ("calories", "fat_g", "carbohydrates_g", "protein_g")
        )

    def to_dict(self) -> dict:
        return {
            "calories": self.calories,
            "fat_g": self.fat_g,
            "carbohydrates_g": self.carbohydrates_g,
            "fiber_g": self.fiber_g,
            "protein_g": self.protein_g,
            "vitamins": dict(self.vitamins),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "NutritionFacts":
        return cls(
            calories=d.get("calories"),
            fat_g=d.get("fat_g"),
            carbohydrates_g=d.get("carbohydrates_g"),
            fiber_g=d.get("fiber_g"),
            protein_g=d.get("protein_g"),
            vitamins=dict(d.get("vitamins") or {}),
        )


@dataclass
class RequiredIngredient:
    """One line of a recipe's ingredient list."""

    canonical_key: str
    display_name: str
    amount: str

    def to_dict(self) -> dict:
        return {
            "canonical_key": self.canonical_key,
            "display_name": self.display_name,
            "amount": self.amount,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RequiredIngredient":
        return cls(
            canonical_key=d["canonical_key"],
            display_name=d["display_name"],
            amount=d["amount"],
        )


@dataclass
class Recipe:
    """A generated recipe.

    Construction checks shape only. Business constraints (non-empty steps,
    amounts, pantry subset, complete nutrition) are the recipe validator's
    job, so a rule-breaking payload can be decoded, inspected, and reported
    rather than lost in a constructor exception.
    """

    id: str
    title: str
    cuisine: str
    servings: int
    required: list  # of RequiredIngredient
    steps: list  # of str
    nutrition: NutritionFacts
    allergens: list = field(default_factory=list)
    rating: Optional[int] = None

    def __post_init__(self):
        if not self.title or not self.title.strip():
            raise ValueError("recipe title is empty")
        if self.servings < 1:
            raise ValueError(f"servings={self.servings} must be positive")
        if self.rating is not None and not 1 <= self.rating <= 5:
            raise ValueError(f"rating={self.rating} outside 1-5")

    def required_keys(self) -> list:
        return [entry.canonical_key for entry in self.required]

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "cuisine": self.cuisine,
            "servings": self.servings,
            "required": [entry.to_dict() for entry in self.required],
            "steps": list(self.steps),
            "nutrition": self.nutrition.to_dict(),
            "allergens": list(self.allergens),
            "rating": self.rating,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Recipe":
        return cls(
            id=d["id"],
            title=d["title"],
            cuisine=d["cuisine"],
            servings=d["servings"],
            required=[RequiredIngredient.from_dict(e) for e in d["required"]],
            steps=list(d["steps"]),
            nutrition=NutritionFacts.from_dict(d["nutrition"]),
            allergens=list(d.get("allergens") or []),
            rating=d.get("rating"),
        )


@dataclass
class UserProfile:
    """Personalization settings: restrictions, allergies, cuisines, level, language."""

    id: str
    dietary_restrictions: list = field(default_factory=list)
    allergies: list = field(default_factory=list)
    favorite_cuisines: list = field(default_factory=list)
    cooking_level: int = 1
    language: str = "en"

    def __post_init__(self):
        if not 1 <= self.cooking_level <= 5:
            raise ValueError(f"cooking_level={self.cooking_level} outside 1-5")
        if self.language not in SUPPORTED_LANGUAGES:
            raise ValueError(f"unsupported language tag {self.language!r}")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "dietary_restrictions": list(self.dietary_restrictions),
            "allergies": list(self.allergies),
            "favorite_cuisines": list(self.favorite_cuisines),
            "cooking_level": self.cooking_level,
            "language": self.language,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "UserProfile":
        return cls(
            id=d["id"],
            dietary_restrictions=list(d.get("dietary_restrictions") or []),
            allergies=list(d.get("allergies") or []),
            favorite_cuisines=list(d.get("favorite_cuisines") or []),
            cooking_level=d.get("cooking_level", 1),
            language=d.get("language", "en"),
        )


@dataclass
class ChatTurn:
    """One message in the assistant conversation.

    ``unanswered`` marks a user turn whose completion failed at the provider;
    the turn stays in history so the conversation is not corrupted.
    """

    role: ChatRole
    modality: ChatModality
    content: str
    timestamp: datetime
    unanswered: bool = False

    def __post_init__(self):
        if not self.content or not self.content.strip():
            raise ValueError("chat turn content is empty")

    def to_dict(self) -> dict:
        return {
            "role": self.role.value,
            "modality": self.modality.value,
            "content": self.content,
            "timestamp": _encode_ts(self.timestamp),
            "unanswered": self.unanswered,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ChatTurn":
        return cls(
            role=ChatRole(d["role"]),
            modality=ChatModality(d["modality"]),
            content=d["content"],
            timestamp=_decode_ts(d["timestamp"]),
            unanswered=d.get("unanswered", False),
        )


@dataclass
class PantrySession:
    """One cooking session: accumulated pantry, offered recipes, chat history."""

    id: str
    profile_id: str
    created_at: datetime
    ingredients: dict = field(default_factory=dict)  # canonical_key -> Ingredient, insertion-ordered
    offered_recipes: list = field(default_factory=list)  # of Recipe
    selected_recipe: Optional[str] = None  # recipe id within offered_recipes
    chat_history: list = field(default_factory=list)  # of ChatTurn

    @classmethod
    def create(cls, profile_id: str) -> "PantrySession":
        return cls(id=new_id(), profile_id=profile_id, created_at=now_utc())

    def pantry_keys(self) -> list:
        return list(self.ingredients.keys())

    def find_offered(self, recipe_id: str) -> Optional[Recipe]:
        for recipe in self.offered_recipes:
            if recipe.id == recipe_id:
                return recipe
        return None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "profile_id": self.profile_id,
            "created_at": _encode_ts(self.created_at),
            "ingredients": [ing.to_dict() for ing in self.ingredients.values()],
            "offered_recipes": [r.to_dict() for r in self.offered_recipes],
            "selected_recipe": self.selected_recipe,
            "chat_history": [turn.to_dict() for turn in self.chat_history],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PantrySession":
        ingredients = {}
        for raw in d.get("ingredients") or []:
            ing = Ingredient.from_dict(raw)
            ingredients[ing.canonical_key] = ing
        return cls(
            id=d["id"],
            profile_id=d["profile_id"],
            created_at=_decode_ts(d["created_at"]),
            ingredients=ingredients,
            offered_recipes=[Recipe.from_dict(r) for r in d.get("offered_recipes") or []],
            selected_recipe=d.get("selected_recipe"),
            chat_history=[ChatTurn.from_dict(t) for t in d.get("chat_history") or []],
        )


@dataclass
class StepFeedback:
    """Verdict on one recipe step as seen in a workspace snapshot."""

    step_index: int
    verdict: StepVerdict
    explanation: str

    def __post_init__(self):
        if self.step_index < 0:
            raise ValueError(f"step_index={self.step_index} must be >= 0")
        if self.verdict is StepVerdict.NEEDS_ADJUSTMENT and not self.explanation.strip():
            raise ValueError("needs_adjustment feedback requires an explanation")

    def to_dict(self) -> dict:
        return {
            "step_index": self.step_index,
            "verdict": self.verdict.value,
            "explanation": self.explanation,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "StepFeedback":
        return cls(
            step_index=d["step_index"],
            verdict=StepVerdict(d["verdict"]),
            explanation=d["explanation"],
        )


@dataclass
class LikertResponse:
    """One 1-5 answer from one participant to one survey question."""

    participant_id: str
    round: int
    section: SurveySection
    question_id: str
    score: int

    def __post_init__(self):
        if self.round not in (1, 2, 3):
            raise ValueError(f"round={self.round} must be 1, 2, or 3")
        if not 1 <= self.score <= 5:
            raise ValueError(f"score={self.score} outside 1-5")

    def to_dict(self) -> dict:
        return {
            "participant_id": self.participant_id,
            "round": self.round,
            "section": self.section.value,
            "question_id": self.question_id,
            "score": self.score,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LikertResponse":
        return cls(
            participant_id=d["participant_id"],
            round=d["round"],
            section=SurveySection(d["section"]),
            question_id=d["question_id"],
            score=d["score"],
        )
