"""HTTP/JSON boundary: sessions, snapshots, recipes, chat, steps, timers, i18n.

One session = one cook. Requests touching the same session are serialized by
a per-session lock; different sessions proceed concurrently. Every mutation
is journaled so a restart reconstructs the same state.
"""

from __future__ import annotations

import base64
import binascii
import json
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import assistant, i18n, perception, recipes
from .extraction import ExtractionError
from .gateway import (
    API_KEY_ENV,
    GatewayError,
    GatewayTimeout,
    LiveLlmProvider,
    LlmGateway,
    MockLlmProvider,
    ProviderRejection,
    RateLimitExhausted,
)
from .model import (
    ChatModality,
    PantrySession,
    UserProfile,
    new_id,
)
from .perception import Snapshot, Viewport
from .recipes import NoValidRecipesError, StaplesPolicy
from .store import JournalStore, Repository
from .templates import TemplateError
from .timers import TimerBank, TimerNotFound, TimerStateError

BUNDLED_FIXTURES = Path(__file__).parent / "fixtures"


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, detail=None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.detail = detail


@dataclass
class ServiceConfig:
    """Runtime configuration; see README for the JSON file format."""

    provider: str = "mock"  # "mock" | "live"
    fixture_dir: Optional[str] = None  # mock only; defaults to the bundled set
    endpoint: str = ""  # live only
    api_key: str = ""  # live only; falls back to $SOUS_CHEF_API_KEY
    staples: list = field(default_factory=list)
    store_path: str = "sous_chef_store.jsonl"
    history_budget: int = assistant.DEFAULT_HISTORY_BUDGET
    request_timeout_s: float = 60.0

    @classmethod
    def from_file(cls, path) -> "ServiceConfig":
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**raw)

    def build_provider(self):
        if self.provider == "mock":
            return MockLlmProvider(self.fixture_dir or BUNDLED_FIXTURES)
        if self.provider == "live":
            key = self.api_key or os.environ.get(API_KEY_ENV, "")
            if not self.endpoint:
                raise ValueError("live provider requires an endpoint")
            if not key:
                raise ValueError(f"live provider requires an API key (${API_KEY_ENV})")
            return LiveLlmProvider(self.endpoint, key, timeout_s=self.request_timeout_s)
        raise ValueError(f"unknown provider {self.provider!r}")


class ServiceContext:
    """Everything the handlers share: repo, gateway, timers, locks."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        self.provider = config.build_provider()
        self.gateway = LlmGateway(self.provider)
        self.repo = Repository(JournalStore(config.store_path))
        self.timers = TimerBank()
        self.staples = StaplesPolicy.of(*config.staples) if config.staples else StaplesPolicy()
        self._locks: dict = {}
        self._locks_guard = threading.Lock()

    def session_lock(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            if session_id not in self._locks:
                self._locks[session_id] = threading.Lock()
            return self._locks[session_id]

    def get_profile(self, profile_id: str) -> UserProfile:
        profile = self.repo.profiles.get(profile_id)
        if profile is None:
            raise ApiError(404, "profile_not_found", f"no profile {profile_id!r}")
        return profile

    def get_session(self, session_id: str) -> PantrySession:
        session = self.repo.sessions.get(session_id)
        if session is None:
            raise ApiError(404, "session_not_found", f"no session {session_id!r}")
        return session


def _error_body(code: str, message: str, detail=None) -> dict:
    body = {"error": {"code": code, "message": message}}
    if detail is not None:
        body["error"]["detail"] = detail
    return body


def _field(body: dict, name: str, kind, required: bool = True, default=None):
    if name not in body or body[name] is None:
        if required:
            raise ApiError(400, "missing_field", f"request body needs {name!r}")
        return default
    value = body[name]
    if kind is int and isinstance(value, bool):
        raise ApiError(400, "bad_field", f"{name!r} must be an integer")
    if not isinstance(value, kind):
        raise ApiError(400, "bad_field", f"{name!r} has the wrong type")
    return value


def _profile_from_body(body: dict, profile_id: str) -> UserProfile:
    try:
        return UserProfile(
            id=profile_id,
            dietary_restrictions=_field(body, "dietary_restrictions", list, False, []),
            allergies=_field(body, "allergies", list, False, []),
            favorite_cuisines=_field(body, "favorite_cuisines", list, False, []),
            cooking_level=_field(body, "cooking_level", int, False, 1),
            language=_field(body, "language", str, False, "en"),
        )
    except ValueError as exc:
        raise ApiError(400, "bad_profile", str(exc))


async def _snapshot_from_request(request: Request) -> tuple:
    """Decode a snapshot upload, multipart or JSON/base64, plus viewport and fixture.

    Returns (Snapshot, Viewport, fixture_tag).
    """
    content_type = request.headers.get("content-type", "")
    if content_type.startswith("multipart/form-data"):
        form = await request.form()
        upload = form.get("image")
        if upload is None:
            raise ApiError(400, "missing_field", "multipart upload needs an 'image' part")
        data = await upload.read()
        mime_type = upload.content_type or "image/png"
        fields = {key: form.get(key) for key in form}
    else:
        body = await request.json()
        b64 = _field(body, "image_b64", str)
        try:
            data = base64.b64decode(b64, validate=True)
        except (binascii.Error, ValueError):
            raise ApiError(400, "bad_field", "image_b64 is not valid base64")
        mime_type = _field(body, "mime_type", str, False, "image/png")
        fields = body

    def _int_field(name, required=True, default=None):
        value = fields.get(name)
        if value is None:
            if required:
                raise ApiError(400, "missing_field", f"request needs {name!r}")
            return default
        try:
            return int(value)
        except (TypeError, ValueError):
            raise ApiError(400, "bad_field", f"{name!r} must be an integer")

    viewport_w = _int_field("viewport_width_px")
    viewport_h = _int_field("viewport_height_px")
    image_w = _int_field("image_width_px", required=False, default=viewport_w)
    image_h = _int_field("image_height_px", required=False, default=viewport_h)
    fixture = fields.get("fixture")
    try:
        snapshot = Snapshot(data=data, mime_type=mime_type,
                            width_px=image_w, height_px=image_h)
        viewport = Viewport(width_px=viewport_w, height_px=viewport_h)
    except ValueError as exc:
        raise ApiError(400, "bad_snapshot", str(exc))
    return snapshot, viewport, fixture


def _pantry_payload(session: PantrySession) -> list:
    return [ing.to_dict() for ing in session.ingredients.values()]


def create_app(config: Optional[ServiceConfig] = None) -> FastAPI:
    config = config or ServiceConfig()
    ctx = ServiceContext(config)
    app = FastAPI(title="sous-chef", docs_url=None, redoc_url=None)
    app.state.ctx = ctx
    # The web app is served from its own origin; single-user service, no auth.
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status,
                            content=_error_body(exc.code, str(exc), exc.detail))

    @app.exception_handler(GatewayError)
    async def _gateway_error(request: Request, exc: GatewayError):
        status = 502
        code = "provider_rejection"
        if isinstance(exc, GatewayTimeout):
            status, code = 504, "provider_timeout"
        elif isinstance(exc, RateLimitExhausted):
            status, code = 503, "rate_limit_exhausted"
        return JSONResponse(
            status_code=status,
            content=_error_body(code, str(exc), {"attempts": exc.attempts}),
        )

    @app.exception_handler(ExtractionError)
    async def _extraction_error(request: Request, exc: ExtractionError):
        return JSONResponse(status_code=502,
                            content=_error_body("bad_model_output", str(exc)))

    @app.exception_handler(NoValidRecipesError)
    async def _no_valid_recipes(request: Request, exc: NoValidRecipesError):
        return JSONResponse(
            status_code=422,
            content=_error_body(
                "no_valid_recipes", str(exc),
                {"discarded": [d.to_dict() for d in exc.discarded]},
            ),
        )

    @app.exception_handler(TemplateError)
    async def _template_error(request: Request, exc: TemplateError):
        return JSONResponse(status_code=500,
                            content=_error_body("template_error", str(exc)))

    # ---- profiles ----

    @app.post("/profiles", status_code=201)
    async def create_profile(request: Request):
        body = await request.json()
        profile = _profile_from_body(body, new_id())
        ctx.repo.save_profile(profile)
        return profile.to_dict()

    @app.get("/profiles/{profile_id}")
    async def get_profile(profile_id: str):
        return ctx.get_profile(profile_id).to_dict()

    @app.put("/profiles/{profile_id}")
    async def put_profile(profile_id: str, request: Request):
        ctx.get_profile(profile_id)  # must exist
        body = await request.json()
        profile = _profile_from_body(body, profile_id)
        ctx.repo.save_profile(profile)
        return profile.to_dict()

    # ---- sessions ----

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        body = await request.json()
        profile_id = _field(body, "profile_id", str)
        ctx.get_profile(profile_id)
        session = PantrySession.create(profile_id)
        ctx.repo.save_session(session)
        return session.to_dict()

    @app.get("/sessions/{session_id}")
    async def get_session(session_id: str):
        return ctx.get_session(session_id).to_dict()

    @app.post("/sessions/{session_id}/scan")
    async def scan(session_id: str, request: Request):
        snapshot, viewport, fixture = await _snapshot_from_request(request)
        with ctx.session_lock(session_id):
            session = ctx.get_session(session_id)
            profile = ctx.get_profile(session.profile_id)
            result = perception.detect_ingredients(
                ctx.gateway, snapshot, language=profile.language, fixture_tag=fixture
            )
            perception.merge_into_pantry(session, result.labels)
            ctx.repo.save_session(session)
            labels = []
            for label in result.labels:
                placement = perception.project_label(label.bbox, viewport)
                entry = label.to_dict()
                entry["rect_px"] = placement.rect_px.to_dict()
                entry["anchor_px"] = placement.anchor_px.to_dict()
                labels.append(entry)
            return {
                "labels": labels,
                "pantry": _pantry_payload(session),
                "nothing_detected": result.nothing_detected,
                "dropped_count": result.dropped_count,
            }

    @app.post("/sessions/{session_id}/pantry")
    async def edit_pantry(session_id: str, request: Request):
        body = await request.json()
        action = _field(body, "action", str)
        with ctx.session_lock(session_id):
            session = ctx.get_session(session_id)
            if action == "add":
                name = _field(body, "name", str)
                try:
                    perception.pantry_add(session, name)
                except ValueError as exc:
                    raise ApiError(400, "bad_name", str(exc))
            elif action == "remove":
                key = _field(body, "canonical_key", str)
                try:
                    perception.pantry_remove(session, key)
                except perception.PantryKeyNotFound as exc:
                    raise ApiError(404, "ingredient_not_found", str(exc))
            else:
                raise ApiError(400, "bad_action", f"unknown pantry action {action!r}")
            ctx.repo.save_session(session)
            return {"pantry": _pantry_payload(session)}

    # ---- recipes ----

    @app.post("/sessions/{session_id}/recipes")
    async def generate(session_id: str, request: Request):
        body = await request.json()
        count = _field(body, "count", int, False, 3)
        fixture = _field(body, "fixture", str, False)
        with ctx.session_lock(session_id):
            session = ctx.get_session(session_id)
            profile = ctx.get_profile(session.profile_id)
            try:
                outcome = recipes.generate_recipes(
                    ctx.gateway, session, profile, count,
                    staples=ctx.staples, fixture_tag=fixture,
                )
            except recipes.EmptyPantryError as exc:
                raise ApiError(400, "empty_pantry", str(exc))
            except NoValidRecipesError:
                raise  # dedicated handler returns the per-recipe reports
            except ValueError as exc:
                raise ApiError(400, "bad_request", str(exc))
            ctx.repo.save_session(session)
            return {
                "accepted": [r.to_dict() for r in outcome.accepted],
                "discarded": [d.to_dict() for d in outcome.discarded],
                "shortfall": outcome.shortfall,
            }

    @app.post("/sessions/{session_id}/recipes/{recipe_id}/select")
    async def select(session_id: str, recipe_id: str):
        with ctx.session_lock(session_id):
            session = ctx.get_session(session_id)
            try:
                recipe = recipes.select_recipe(session, recipe_id)
            except recipes.RecipeNotFound as exc:
                raise ApiError(404, "recipe_not_found", str(exc))
            ctx.repo.save_session(session)
            return {"selected_recipe": recipe.id, "recipe": recipe.to_dict()}

    @app.post("/sessions/{session_id}/recipes/{recipe_id}/rate")
    async def rate(session_id: str, recipe_id: str, request: Request):
        body = await request.json()
        stars = _field(body, "stars", int)
        with ctx.session_lock(session_id):
            session = ctx.get_session(session_id)
            try:
                recipe = recipes.rate_recipe(session, recipe_id, stars)
            except recipes.RecipeNotFound as exc:
                raise ApiError(404, "recipe_not_found", str(exc))
            except recipes.RatingRangeError as exc:
                raise ApiError(400, "bad_rating", str(exc))
            ctx.repo.save_session(session)
            return {"recipe": recipe.to_dict()}

    @app.post("/sessions/{session_id}/recipes/{recipe_id}/shopping-list")
    async def shopping(session_id: str, recipe_id: str):
        with ctx.session_lock(session_id):
            session = ctx.get_session(session_id)
            recipe = session.find_offered(recipe_id)
            if recipe is None:
                raise ApiError(404, "recipe_not_found",
                               f"no offered recipe with id {recipe_id!r}")
            items = recipes.shopping_list(recipe, session.pantry_keys())
            return {"items": [entry.to_dict() for entry in items]}

    # ---- assistant ----

    @app.post("/sessions/{session_id}/chat")
    async def chat(session_id: str, request: Request):
        body = await request.json()
        text = _field(body, "text", str)
        modality_raw = _field(body, "modality", str, False, "text")
        try:
            modality = ChatModality(modality_raw)
        except ValueError:
            raise ApiError(400, "bad_modality", f"unknown modality {modality_raw!r}")
        fixture = _field(body, "fixture", str, False)
        with ctx.session_lock(session_id):
            session = ctx.get_session(session_id)
            profile = ctx.get_profile(session.profile_id)
            try:
                turn = assistant.ask(
                    ctx.gateway, session, profile, text, modality,
                    history_budget=ctx.config.history_budget, fixture_tag=fixture,
                )
            except assistant.InvalidInputError as exc:
                raise ApiError(400, "empty_message", str(exc))
            finally:
                ctx.repo.save_session(session)  # user turn persists even on failure
            return {"turn": turn.to_dict(),
                    "history_length": len(session.chat_history)}

    # ---- step check ----

    @app.post("/sessions/{session_id}/step-check")
    async def step_check(session_id: str, request: Request):
        body = await request.json()
        recipe_id = _field(body, "recipe_id", str)
        step_index = _field(body, "step_index", int)
        b64 = _field(body, "image_b64", str)
        try:
            data = base64.b64decode(b64, validate=True)
        except (binascii.Error, ValueError):
            raise ApiError(400, "bad_field", "image_b64 is not valid base64")
        mime_type = _field(body, "mime_type", str, False, "image/png")
        width = _field(body, "image_width_px", int, False, 1000)
        height = _field(body, "image_height_px", int, False, 1000)
        fixture = _field(body, "fixture", str, False)
        with ctx.session_lock(session_id):
            session = ctx.get_session(session_id)
            profile = ctx.get_profile(session.profile_id)
            recipe = session.find_offered(recipe_id)
            if recipe is None:
                raise ApiError(404, "recipe_not_found",
                               f"no offered recipe with id {recipe_id!r}")
            try:
                snapshot = Snapshot(data=data, mime_type=mime_type,
                                    width_px=width, height_px=height)
            except ValueError as exc:
                raise ApiError(400, "bad_snapshot", str(exc))
            try:
                feedback = perception.verify_step(
                    ctx.gateway, snapshot, recipe, step_index,
                    language=profile.language, fixture_tag=fixture,
                )
            except perception.InvalidStepError as exc:
                raise ApiError(400, "invalid_step", str(exc))
            return {"feedback": feedback.to_dict(), "recipe_id": recipe_id}

    # ---- timers ----

    @app.post("/sessions/{session_id}/timers", status_code=201)
    async def create_timer(session_id: str, request: Request):
        ctx.get_session(session_id)
        body = await request.json()
        label = _field(body, "label", str)
        duration_s = _field(body, "duration_s", int)
        try:
            timer = ctx.timers.create(label, duration_s)
        except ValueError as exc:
            raise ApiError(400, "bad_timer", str(exc))
        return timer.to_dict()

    @app.get("/timers/{timer_id}")
    async def poll_timer(timer_id: str):
        try:
            return ctx.timers.poll(timer_id).to_dict()
        except TimerNotFound as exc:
            raise ApiError(404, "timer_not_found", str(exc))

    @app.post("/timers/{timer_id}/pause")
    async def pause_timer(timer_id: str):
        try:
            return ctx.timers.pause(timer_id).to_dict()
        except TimerNotFound as exc:
            raise ApiError(404, "timer_not_found", str(exc))
        except TimerStateError as exc:
            raise ApiError(409, "bad_timer_state", str(exc))

    @app.post("/timers/{timer_id}/resume")
    async def resume_timer(timer_id: str):
        try:
            return ctx.timers.resume(timer_id).to_dict()
        except TimerNotFound as exc:
            raise ApiError(404, "timer_not_found", str(exc))
        except TimerStateError as exc:
            raise ApiError(409, "bad_timer_state", str(exc))

    # ---- i18n ----

    @app.get("/i18n/{language}")
    async def get_catalog(language: str):
        try:
            return i18n.catalog_for(language).to_dict()
        except i18n.CatalogError as exc:
            raise ApiError(404, "unknown_language", str(exc))

    return app
