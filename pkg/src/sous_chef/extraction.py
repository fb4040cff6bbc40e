"""Pull a structured payload out of free-form model text and schema-check it.

Real model replies wrap their JSON in prose, code fences, or both, and love
trailing commas. The strategy, in order:

1. fenced code block, if one is present and parses;
2. first balanced top-level object/array in the text that parses.

Repair is limited to stripping trailing commas. Anything more aggressive
risks silently accepting garbage.
"""

from __future__ import annotations

import json
import re


class ExtractionError(Exception):
    pass


class NoPayloadFound(ExtractionError):
    """The text contains no parseable JSON object or array."""


class SchemaViolation(ExtractionError):
    """Payload parsed but does not fit the requested schema."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


SCHEMA_IDS = ("labels", "recipes", "feedback", "translation")

_FENCE = re.compile(r"```[a-zA-Z0-9_-]*\s*\n(.*?)```", re.DOTALL)


def _strip_trailing_commas(text: str) -> str:
    """Remove commas that directly precede a closing bracket, outside strings."""
    out = []
    in_string = False
    escaped = False
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if in_string:
            out.append(ch)
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == '"':
                in_string = False
            i += 1
            continue
        if ch == '"':
            in_string = True
            out.append(ch)
            i += 1
            continue
        if ch == ",":
            j = i + 1
            while j < n and text[j] in " \t\r\n":
                j += 1
            if j < n and text[j] in "}]":
                i += 1  # drop the comma, keep the whitespace that follows
                continue
        out.append(ch)
        i += 1
    return "".join(out)


def _try_parse(candidate: str):
    try:
        return True, json.loads(_strip_trailing_commas(candidate))
    except (json.JSONDecodeError, RecursionError):
        return False, None


def _balanced_span(text: str, start: int):
    """Extent of the bracketed span opening at ``start``, or None if unbalanced."""
    opener = text[start]
    closer = "}" if opener == "{" else "]"
    depth = 0
    in_string = False
    escaped = False
    for i in range(start, len(text)):
        ch = text[i]
        if in_string:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == '"':
                in_string = False
            continue
        if ch == '"':
            in_string = True
        elif ch in "{[":
            depth += 1
        elif ch in "}]":
            depth -= 1
            if depth == 0:
                return i + 1 if ch == closer else None
    return None


def _find_payload(raw_text: str):
    for fence in _FENCE.finditer(raw_text):
        ok, payload = _try_parse(fence.group(1).strip())
        if ok:
            return payload
    # No usable fence: scan for the first balanced object/array that parses.
    for i, ch in enumerate(raw_text):
        if ch not in "{[":
            continue
        end = _balanced_span(raw_text, i)
        if end is None:
            continue
        ok, payload = _try_parse(raw_text[i:end])
        if ok:
            return payload
    raise NoPayloadFound("no JSON object or array found in model output")


def extract_structured(raw_text: str, schema_id: str):
    """Extract and validate the first structured payload in ``raw_text``.

    Returns plain parsed data (lists/dicts/scalars) shaped per ``schema_id``;
    domain-level range checks stay with the consumers so one bad entry can be
    dropped instead of sinking the whole payload.
    """
    if schema_id not in SCHEMA_IDS:
        raise ValueError(f"unknown schema {schema_id!r}")
    payload = _find_payload(raw_text)
    return _VALIDATORS[schema_id](payload)


def _require(condition: bool, path: str, message: str):
    if not condition:
        raise SchemaViolation(path, message)


def _validate_labels(payload):
    # Entries must be objects; per-entry field checks are the scanner's
    # drop-and-count territory.
    _require(isinstance(payload, list), "labels", "expected a JSON array")
    for i, entry in enumerate(payload):
        _require(isinstance(entry, dict), f"labels[{i}]", "expected an object")
    return payload


def _validate_recipes(payload):
    _require(isinstance(payload, list), "recipes", "expected a JSON array")
    for i, entry in enumerate(payload):
        _require(isinstance(entry, dict), f"recipes[{i}]", "expected an object")
    return payload


def _validate_feedback(payload):
    _require(isinstance(payload, dict), "feedback", "expected a JSON object")
    verdict = payload.get("verdict")
    _require(
        verdict in ("correct", "needs_adjustment"),
        "feedback.verdict",
        f"expected 'correct' or 'needs_adjustment', got {verdict!r}",
    )
    explanation = payload.get("explanation")
    _require(isinstance(explanation, str), "feedback.explanation", "expected a string")
    return payload


def _validate_translation(payload):
    _require(isinstance(payload, dict), "translation", "expected a JSON object")
    text = payload.get("translation")
    _require(isinstance(text, str), "translation.translation", "expected a string")
    _require(bool(text.strip()), "translation.translation", "translated text is empty")
    return payload


_VALIDATORS = {
    "labels": _validate_labels,
    "recipes": _validate_recipes,
    "feedback": _validate_feedback,
    "translation": _validate_translation,
}
