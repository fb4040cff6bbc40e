"""Eight-language support: static catalogs plus model-backed dynamic translation.

Fixed interface text (buttons, settings) is hard-valued per language in the
bundled catalogs; anything the model generates is translated through the
gateway instead. Catalogs are immutable after load, validated for
completeness up front, and never fall back silently: a missing key is a bug,
not an English string.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .extraction import extract_structured
from .gateway import LlmGateway, LlmRequest
from .model import SUPPORTED_LANGUAGES
from .templates import render_prompt

LANGUAGE_NAMES = {
    "en": "English",
    "es": "Spanish",
    "fr": "French",
    "zh": "Chinese",
    "ja": "Japanese",
    "ar": "Arabic",
    "fa": "Persian",
    "hi": "Hindi",
}

_CATALOG_DIR = Path(__file__).parent / "catalogs"


class CatalogError(Exception):
    """Catalog files are missing, inconsistent, or malformed."""


class MissingKeyError(KeyError):
    def __init__(self, key: str, language: str):
        super().__init__(key)
        self.key = key
        self.language = language

    def __str__(self):
        return f"no catalog entry for key {self.key!r} in language {self.language!r}"


@dataclass(frozen=True)
class Catalog:
    language: str
    direction: str  # "ltr" | "rtl"; the UI applies it, the core just stores it
    strings: dict

    def to_dict(self) -> dict:
        return {
            "language": self.language,
            "direction": self.direction,
            "strings": dict(self.strings),
        }


def load_catalogs(catalog_dir=None) -> dict:
    """Load and cross-validate all eight catalogs; incomplete sets fail loudly."""
    directory = Path(catalog_dir) if catalog_dir else _CATALOG_DIR
    catalogs = {}
    for tag in SUPPORTED_LANGUAGES:
        path = directory / f"{tag}.json"
        if not path.is_file():
            raise CatalogError(f"missing catalog file for language {tag!r}: {path}")
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise CatalogError(f"catalog {path.name} is not valid JSON: {exc}") from exc
        if raw.get("language") != tag:
            raise CatalogError(f"catalog {path.name} declares language {raw.get('language')!r}")
        direction = raw.get("direction")
        if direction not in ("ltr", "rtl"):
            raise CatalogError(f"catalog {path.name} has invalid direction {direction!r}")
        strings = raw.get("strings")
        if not isinstance(strings, dict) or not strings:
            raise CatalogError(f"catalog {path.name} has no strings table")
        catalogs[tag] = Catalog(language=tag, direction=direction, strings=strings)

    reference = set(catalogs["en"].strings)
    for tag, catalog in catalogs.items():
        keys = set(catalog.strings)
        if keys != reference:
            missing = sorted(reference - keys)
            extra = sorted(keys - reference)
            raise CatalogError(
                f"catalog {tag!r} is out of sync with en: "
                f"missing {missing}, extra {extra}"
            )
        for key, value in catalog.strings.items():
            if not isinstance(value, str) or not value.strip():
                raise CatalogError(f"catalog {tag!r} has empty entry for {key!r}")
    return catalogs


_loaded: Optional[dict] = None


def _catalogs() -> dict:
    global _loaded
    if _loaded is None:
        _loaded = load_catalogs()
    return _loaded


def catalog_for(language: str) -> Catalog:
    if language not in SUPPORTED_LANGUAGES:
        raise CatalogError(f"unsupported language tag {language!r}")
    return _catalogs()[language]


def catalog_keys() -> list:
    return sorted(_catalogs()["en"].strings)


def static_string(key: str, language: str) -> str:
    """Catalog lookup for fixed interface text. Never falls back across languages."""
    catalog = catalog_for(language)
    try:
        return catalog.strings[key]
    except KeyError:
        raise MissingKeyError(key, language) from None


def localize_dynamic(gateway: LlmGateway, text: str, language: str,
                     fixture_tag: Optional[str] = None) -> str:
    """Translate model-generated text into ``language`` via the gateway.

    English input is the identity: generated content is already produced
    with a language directive, so en never needs a second round trip.
    """
    if not text or not text.strip():
        raise ValueError("cannot localize empty text")
    if language not in SUPPORTED_LANGUAGES:
        raise CatalogError(f"unsupported language tag {language!r}")
    if language == "en":
        return text
    prompt = render_prompt(
        "translate", {"text": text, "language": LANGUAGE_NAMES[language]}
    )
    request = LlmRequest(
        template_id="translate",
        system_instruction="You are a careful culinary translator.",
        user_text=prompt,
        language=language,
        fixture_tag=fixture_tag,
    )
    response = gateway.complete(request)
    payload = extract_structured(response.raw_text, "translation")
    return payload["translation"]
