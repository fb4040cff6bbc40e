"""Snapshot-driven perception: detect ingredients, place labels, keep the pantry.

The pantry accumulates across snapshots: a scan can only grow it, and only a
manual edit can shrink it. One malformed label never sinks a scan; it is
dropped and counted so mid-cook flows degrade gracefully.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from typing import Optional

from .extraction import NoPayloadFound, extract_structured
from .gateway import LlmGateway, LlmImage, LlmRequest
from .model import (
    DetectionLabel,
    Ingredient,
    IngredientSource,
    NormBox,
    PantrySession,
    StepFeedback,
    StepVerdict,
    canonicalize,
    now_utc,
)
from .templates import render_prompt

ACCEPTED_MIME_TYPES = ("image/png", "image/jpeg")

_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"
_JPEG_MAGIC = b"\xff\xd8\xff"


class SnapshotError(ValueError):
    pass


class PantryKeyNotFound(KeyError):
    def __init__(self, canonical_key: str):
        super().__init__(canonical_key)
        self.canonical_key = canonical_key

    def __str__(self):
        return f"no pantry entry with key {self.canonical_key!r}"


class InvalidStepError(IndexError):
    pass


@dataclass
class Snapshot:
    """One captured frame, as uploaded by the client."""

    data: bytes
    mime_type: str
    width_px: int
    height_px: int
    captured_at: datetime = field(default_factory=now_utc)

    def __post_init__(self):
        if not self.data:
            raise SnapshotError("snapshot bytes are empty")
        if self.width_px <= 0 or self.height_px <= 0:
            raise SnapshotError("snapshot dimensions must be positive")
        if self.mime_type not in ACCEPTED_MIME_TYPES:
            raise SnapshotError(f"unsupported mime type {self.mime_type!r}")
        magic = _PNG_MAGIC if self.mime_type == "image/png" else _JPEG_MAGIC
        if not self.data.startswith(magic):
            raise SnapshotError(f"bytes do not look like {self.mime_type}")


@dataclass
class Viewport:
    width_px: int
    height_px: int

    def __post_init__(self):
        if self.width_px <= 0 or self.height_px <= 0:
            raise ValueError("viewport dimensions must be positive")


@dataclass
class PxRect:
    x: int
    y: int
    w: int
    h: int

    def to_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "w": self.w, "h": self.h}


@dataclass
class PxPoint:
    x: int
    y: int

    def to_dict(self) -> dict:
        return {"x": self.x, "y": self.y}


@dataclass
class LabelPlacement:
    """Where to draw one detection on a concrete viewport."""

    rect_px: PxRect
    anchor_px: PxPoint  # top-center of the rect; label text sits above the box


@dataclass
class ScanResult:
    labels: list  # of DetectionLabel
    dropped_count: int = 0
    nothing_detected: bool = False  # model replied but saw no ingredients


def detect_ingredients(gateway: LlmGateway, snapshot: Snapshot, language: str = "en",
                       fixture_tag: Optional[str] = None) -> ScanResult:
    """Ask the model for labeled ingredient coordinates in one snapshot.

    Labels that fail the box or name rules are dropped and counted, not
    fatal. A reply with no payload at all means the model saw nothing.
    """
    prompt = render_prompt("detect_ingredients", {"language": _language_name(language)})
    request = LlmRequest(
        template_id="detect_ingredients",
        system_instruction="You are a precise kitchen vision assistant.",
        user_text=prompt,
        language=language,
        image=LlmImage(snapshot.data, snapshot.mime_type,
                       snapshot.width_px, snapshot.height_px),
        fixture_tag=fixture_tag,
    )
    response = gateway.complete(request)
    try:
        entries = extract_structured(response.raw_text, "labels")
    except NoPayloadFound:
        return ScanResult(labels=[], nothing_detected=True)

    labels = []
    dropped = 0
    for entry in entries:
        try:
            labels.append(_decode_label(entry))
        except (ValueError, TypeError, KeyError):
            dropped += 1
    return ScanResult(labels=labels, dropped_count=dropped)


def _decode_label(entry: dict) -> DetectionLabel:
    name = entry["name"]
    if not isinstance(name, str):
        raise TypeError("label name must be a string")
    box = entry["box"]
    if not isinstance(box, list) or len(box) != 4:
        raise ValueError("box must be [y_min, x_min, y_max, x_max]")
    confidence = entry.get("confidence")
    if confidence is not None:
        confidence = float(confidence)
    return DetectionLabel(
        name=name,
        bbox=NormBox(y_min=box[0], x_min=box[1], y_max=box[2], x_max=box[3]),
        confidence=confidence,
    )


def _language_name(tag: str) -> str:
    # Local import: i18n depends on the gateway for dynamic translation.
    from .i18n import LANGUAGE_NAMES

    return LANGUAGE_NAMES.get(tag, tag)


def project_label(bbox: NormBox, viewport: Viewport) -> LabelPlacement:
    """Map a normalized box onto viewport pixels.

    Both corners are scaled and rounded independently, which keeps every
    rect inside the viewport by construction.
    """
    x1 = round(bbox.x_min * viewport.width_px / 1000)
    y1 = round(bbox.y_min * viewport.height_px / 1000)
    x2 = round(bbox.x_max * viewport.width_px / 1000)
    y2 = round(bbox.y_max * viewport.height_px / 1000)
    rect = PxRect(x=x1, y=y1, w=x2 - x1, h=y2 - y1)
    anchor = PxPoint(x=x1 + rect.w // 2, y=y1)
    return LabelPlacement(rect_px=rect, anchor_px=anchor)


def unproject_rect(rect: PxRect, viewport: Viewport) -> tuple:
    """Inverse of ``project_label``: back to the 0-1000 frame.

    Returns a plain (y_min, x_min, y_max, x_max) tuple; degenerate rects
    (w or h rounded to 0) cannot form a valid NormBox.
    """
    y_min = round(rect.y * 1000 / viewport.height_px)
    x_min = round(rect.x * 1000 / viewport.width_px)
    y_max = round((rect.y + rect.h) * 1000 / viewport.height_px)
    x_max = round((rect.x + rect.w) * 1000 / viewport.width_px)
    return (y_min, x_min, y_max, x_max)


def merge_into_pantry(session: PantrySession, labels,
                      seen_at: Optional[datetime] = None) -> PantrySession:
    """Fold one scan's labels into the session pantry.

    Keys already present are untouched (first_seen preserved); new keys are
    appended in label order with source=scanned. Idempotent by construction.
    """
    seen_at = seen_at or now_utc()
    for label in labels:
        key = canonicalize(label.name)
        if key in session.ingredients:
            continue
        session.ingredients[key] = Ingredient(
            display_name=label.name.strip(),
            canonical_key=key,
            source=IngredientSource.SCANNED,
            first_seen=seen_at,
        )
    return session


def pantry_add(session: PantrySession, name: str,
               seen_at: Optional[datetime] = None) -> PantrySession:
    """Manually add an ingredient the scan missed or misread. No-op if present."""
    key = canonicalize(name)
    if key not in session.ingredients:
        session.ingredients[key] = Ingredient(
            display_name=name.strip(),
            canonical_key=key,
            source=IngredientSource.MANUAL,
            first_seen=seen_at or now_utc(),
        )
    return session


def pantry_remove(session: PantrySession, canonical_key: str) -> PantrySession:
    """Remove a pantry entry by key; absent keys are an error."""
    if canonical_key not in session.ingredients:
        raise PantryKeyNotFound(canonical_key)
    del session.ingredients[canonical_key]
    return session


def verify_step(gateway: LlmGateway, snapshot: Snapshot, recipe, step_index: int,
                language: str = "en", fixture_tag: Optional[str] = None) -> StepFeedback:
    """Judge one recipe step against a workspace snapshot."""
    if not 0 <= step_index < len(recipe.steps):
        raise InvalidStepError(
            f"step_index {step_index} outside 0..{len(recipe.steps) - 1}"
        )
    prompt = render_prompt(
        "step_feedback",
        {
            "recipe": recipe.title,
            "step": recipe.steps[step_index],
            "language": _language_name(language),
        },
    )
    request = LlmRequest(
        template_id="step_feedback",
        system_instruction="You are a patient cooking instructor reviewing technique.",
        user_text=prompt,
        language=language,
        image=LlmImage(snapshot.data, snapshot.mime_type,
                       snapshot.width_px, snapshot.height_px),
        fixture_tag=fixture_tag,
    )
    response = gateway.complete(request)
    payload = extract_structured(response.raw_text, "feedback")
    return StepFeedback(
        step_index=step_index,
        verdict=StepVerdict(payload["verdict"]),
        explanation=payload["explanation"],
    )
