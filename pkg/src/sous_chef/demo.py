"""Scripted end-to-end replays against an in-process, mock-backed service.

A scenario file walks the full cook loop (scan, edit, generate, select,
chat, step check, shopping list) through the real HTTP handlers with the
deterministic mock provider, printing a transcript as it goes. Referenced
fixtures are checked before any step runs, every ``expect`` block is
asserted, and a final audit re-checks the constraint invariants on whatever
reached the session.
"""

from __future__ import annotations

import base64
import json
import tempfile
import warnings
from pathlib import Path

with warnings.catch_warnings():
    # some starlette builds deprecation-warn on import regardless of env
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from . import recipes
from .model import Recipe, UserProfile
from .recipes import StaplesPolicy
from .service import BUNDLED_FIXTURES, ServiceConfig, create_app

BUNDLED_SCENARIOS = Path(__file__).parent / "scenarios"

# step op -> prompt template its fixture belongs to
_FIXTURE_TEMPLATES = {
    "scan": "detect_ingredients",
    "generate": "generate_recipes",
    "chat": "assistant_chat",
    "step_check": "step_feedback",
}

_KNOWN_OPS = (
    "scan", "pantry_add", "pantry_remove", "generate", "select",
    "chat", "step_check", "shopping_list",
)


class ScenarioError(Exception):
    """Scenario unusable before any step ran (missing file, bad shape)."""


class StepFailure(Exception):
    """A step response broke an expectation or an invariant."""


def resolve_scenario(name_or_path) -> Path:
    """Accept a bundled scenario name or a filesystem path."""
    path = Path(name_or_path)
    if path.is_file():
        return path
    bundled = BUNDLED_SCENARIOS / f"{name_or_path}.json"
    if bundled.is_file():
        return bundled
    raise ScenarioError(f"scenario {name_or_path!r} not found "
                        f"(no such file, not bundled)")


def load_scenario(path: Path) -> dict:
    try:
        scenario = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc}") from exc
    if not isinstance(scenario.get("steps"), list) or not scenario["steps"]:
        raise ScenarioError("scenario has no steps")
    for i, step in enumerate(scenario["steps"]):
        op = step.get("op")
        if op not in _KNOWN_OPS:
            raise ScenarioError(f"step {i + 1} has unknown op {op!r}")
    return scenario


def precheck_fixtures(scenario: dict, fixtures_dir: Path) -> None:
    """Every fixture and snapshot named by the scenario must exist up front."""
    missing = []
    for step in scenario["steps"]:
        template = _FIXTURE_TEMPLATES.get(step["op"])
        if template and step.get("fixture"):
            path = fixtures_dir / f"{template}__{step['fixture']}"
            if not path.is_file():
                missing.append(str(path))
        if step.get("snapshot"):
            snap = fixtures_dir / "snapshots" / step["snapshot"]
            if not snap.is_file():
                missing.append(str(snap))
    if missing:
        raise ScenarioError("missing fixtures: " + ", ".join(missing))


def _snapshot_payload(fixtures_dir: Path, name: str, viewport) -> dict:
    data = (fixtures_dir / "snapshots" / name).read_bytes()
    mime = "image/jpeg" if name.lower().endswith((".jpg", ".jpeg")) else "image/png"
    return {
        "image_b64": base64.b64encode(data).decode("ascii"),
        "mime_type": mime,
        "viewport_width_px": viewport[0],
        "viewport_height_px": viewport[1],
    }


def _expect(condition: bool, message: str):
    if not condition:
        raise StepFailure(message)


class _Runner:
    def __init__(self, client: TestClient, fixtures_dir: Path, out):
        self.client = client
        self.fixtures_dir = fixtures_dir
        self.out = out
        self.session_id = None
        self.profile = None
        self.accepted: list = []  # recipe dicts, in offer order
        self.selected_id = None

    def say(self, text: str = ""):
        self.out(text)

    def _call(self, method: str, url: str, **kwargs):
        response = self.client.request(method, url, **kwargs)
        if response.status_code >= 400:
            raise StepFailure(f"{method} {url} -> {response.status_code}: "
                              f"{response.text[:300]}")
        return response.json()

    def setup(self, scenario: dict):
        profile_body = scenario.get("profile") or {}
        created = self._call("POST", "/profiles", json=profile_body)
        self.profile = UserProfile.from_dict(created)
        session = self._call("POST", "/sessions", json={"profile_id": created["id"]})
        self.session_id = session["id"]
        self.say(f"profile {created['id'][:8]} / session {self.session_id[:8]}")

    # ---- step executors ----

    def run_step(self, number: int, step: dict):
        op = step["op"]
        handler = getattr(self, f"op_{op}")
        self.say(f"[{number}] {op}")
        handler(step)
        self.say()

    def op_scan(self, step):
        payload = _snapshot_payload(self.fixtures_dir, step["snapshot"],
                                    step.get("viewport", [390, 844]))
        payload["fixture"] = step["fixture"]
        result = self._call("POST", f"/sessions/{self.session_id}/scan", json=payload)
        names = [label["name"] for label in result["labels"]]
        self.say(f"    labels: {', '.join(names) if names else '(none)'}")
        if result["nothing_detected"]:
            self.say("    notice: nothing detected in this snapshot")
        if result["dropped_count"]:
            self.say(f"    dropped {result['dropped_count']} malformed label(s)")
        pantry = [ing["canonical_key"] for ing in result["pantry"]]
        self.say(f"    pantry: {', '.join(pantry)}")
        expect = step.get("expect", {})
        if "labels" in expect:
            _expect(len(names) == expect["labels"],
                    f"expected {expect['labels']} labels, got {len(names)}")
        if "nothing_detected" in expect:
            _expect(result["nothing_detected"] == expect["nothing_detected"],
                    "nothing_detected flag mismatch")
        if "dropped_count" in expect:
            _expect(result["dropped_count"] == expect["dropped_count"],
                    f"expected dropped_count {expect['dropped_count']}, "
                    f"got {result['dropped_count']}")

    def _edit_pantry(self, body: dict, expect: dict):
        result = self._call("POST", f"/sessions/{self.session_id}/pantry", json=body)
        pantry = [ing["canonical_key"] for ing in result["pantry"]]
        self.say(f"    pantry: {', '.join(pantry)}")
        for key in expect.get("pantry_contains", []):
            _expect(key in pantry, f"pantry should contain {key!r}")
        for key in expect.get("pantry_lacks", []):
            _expect(key not in pantry, f"pantry should not contain {key!r}")

    def op_pantry_add(self, step):
        self.say(f"    manually adding {step['name']!r}")
        self._edit_pantry({"action": "add", "name": step["name"]},
                          step.get("expect", {}))

    def op_pantry_remove(self, step):
        self.say(f"    removing {step['key']!r}")
        self._edit_pantry({"action": "remove", "canonical_key": step["key"]},
                          step.get("expect", {}))

    def op_generate(self, step):
        body = {"count": step.get("count", 3), "fixture": step["fixture"]}
        result = self._call("POST", f"/sessions/{self.session_id}/recipes", json=body)
        self.accepted.extend(result["accepted"])
        for recipe in result["accepted"]:
            keys = ", ".join(e["canonical_key"] for e in recipe["required"])
            self.say(f"    offered: {recipe['title']} (needs: {keys})")
        for discard in result["discarded"]:
            reasons = []
            validation = discard["validation"]
            if validation["missing_ingredients"]:
                reasons.append("missing " + ", ".join(validation["missing_ingredients"]))
            if not validation["nutrition_complete"]:
                reasons.append("incomplete nutrition")
            reasons.extend(validation["schema_errors"])
            for hit in discard["allergens"]["hits"]:
                reasons.append(f"allergen {hit['allergen']!r} in {hit['matched_in']}")
            self.say(f"    discarded: {discard['title']} ({'; '.join(reasons)})")
        expect = step.get("expect", {})
        if "accepted" in expect:
            _expect(len(result["accepted"]) == expect["accepted"],
                    f"expected {expect['accepted']} accepted recipes, "
                    f"got {len(result['accepted'])}")
        if "discarded" in expect:
            _expect(len(result["discarded"]) == expect["discarded"],
                    f"expected {expect['discarded']} discarded recipes, "
                    f"got {len(result['discarded'])}")
        if "discarded_titles" in expect:
            titles = {d["title"] for d in result["discarded"]}
            for title in expect["discarded_titles"]:
                _expect(title in titles, f"{title!r} should have been discarded")

    def op_select(self, step):
        index = step.get("index", 0)
        _expect(index < len(self.accepted), f"no offered recipe at index {index}")
        recipe_id = self.accepted[index]["id"]
        result = self._call(
            "POST", f"/sessions/{self.session_id}/recipes/{recipe_id}/select")
        self.selected_id = result["selected_recipe"]
        self.say(f"    selected: {result['recipe']['title']}")

    def op_chat(self, step):
        body = {
            "text": step["text"],
            "modality": step.get("modality", "text"),
            "fixture": step["fixture"],
        }
        self.say(f"    cook: {step['text']}")
        result = self._call("POST", f"/sessions/{self.session_id}/chat", json=body)
        reply = result["turn"]["content"]
        self.say(f"    sous chef: {reply}")
        if step.get("expect", {}).get("reply_nonempty"):
            _expect(bool(reply.strip()), "assistant reply is empty")

    def op_step_check(self, step):
        _expect(self.selected_id is not None, "step_check needs a selected recipe")
        payload = _snapshot_payload(self.fixtures_dir, step["snapshot"], [390, 844])
        body = {
            "recipe_id": self.selected_id,
            "step_index": step["step_index"],
            "image_b64": payload["image_b64"],
            "mime_type": payload["mime_type"],
            "fixture": step["fixture"],
        }
        result = self._call("POST", f"/sessions/{self.session_id}/step-check", json=body)
        feedback = result["feedback"]
        self.say(f"    verdict: {feedback['verdict']}")
        self.say(f"    feedback: {feedback['explanation']}")
        expect = step.get("expect", {})
        if "verdict" in expect:
            _expect(feedback["verdict"] == expect["verdict"],
                    f"expected verdict {expect['verdict']!r}, got {feedback['verdict']!r}")

    def op_shopping_list(self, step):
        _expect(self.selected_id is not None, "shopping_list needs a selected recipe")
        result = self._call(
            "POST",
            f"/sessions/{self.session_id}/recipes/{self.selected_id}/shopping-list")
        items = result["items"]
        if items:
            self.say("    shopping list:")
            for item in items:
                self.say(f"      - {item['display_name']}: {item['amount']}")
        else:
            self.say("    shopping list: nothing to buy")
        expect = step.get("expect", {})
        if "min_items" in expect:
            _expect(len(items) >= expect["min_items"],
                    f"expected at least {expect['min_items']} shopping items")
        for key in expect.get("contains", []):
            _expect(any(item["canonical_key"] == key for item in items),
                    f"shopping list should contain {key!r}")

    def final_audit(self, staples: StaplesPolicy):
        """Re-check the subset and allergen invariants on the stored session."""
        session = self._call("GET", f"/sessions/{self.session_id}")
        pantry = [ing["canonical_key"] for ing in session["ingredients"]]
        for raw in session["offered_recipes"]:
            recipe = Recipe.from_dict(raw)
            report = recipes.validate_recipe(recipe, pantry, staples)
            allergens = recipes.check_allergens(recipe, self.profile)
            # The pantry may legitimately have shrunk after the offer
            # (ingredients get used up); only nutrition/schema/allergen
            # invariants must still hold unconditionally.
            _expect(report.nutrition_complete and not report.schema_errors,
                    f"offered recipe {recipe.title!r} fails structural validation")
            _expect(allergens.safe,
                    f"offered recipe {recipe.title!r} carries an allergen hit")
        self.say(f"audit: {len(session['offered_recipes'])} offered recipes clean")


def run_demo(scenario_name, fixtures_dir=None, out=print) -> int:
    """Run one scenario. Returns a process exit code: 0 ok, 1 failed, 2 setup."""
    fixtures = Path(fixtures_dir) if fixtures_dir else BUNDLED_FIXTURES
    try:
        scenario_path = resolve_scenario(scenario_name)
        scenario = load_scenario(scenario_path)
        if not fixtures.is_dir():
            raise ScenarioError(f"fixture directory {fixtures} does not exist")
        precheck_fixtures(scenario, fixtures)
    except ScenarioError as exc:
        out(f"setup error: {exc}")
        return 2

    staples = StaplesPolicy.of(*scenario.get("staples", []))
    with tempfile.TemporaryDirectory(prefix="sous-chef-demo-") as tmp:
        config = ServiceConfig(
            provider="mock",
            fixture_dir=str(fixtures),
            staples=list(scenario.get("staples", [])),
            store_path=str(Path(tmp) / "store.jsonl"),
        )
        app = create_app(config)
        out(f"== scenario {scenario['name']} ==")
        with TestClient(app) as client:
            runner = _Runner(client, fixtures, out)
            try:
                runner.setup(scenario)
                for number, step in enumerate(scenario["steps"], start=1):
                    runner.run_step(number, step)
                runner.final_audit(staples)
            except StepFailure as exc:
                out(f"FAIL {scenario['name']}: {exc}")
                return 1
    out(f"PASS {scenario['name']} ({len(scenario['steps'])} steps)")
    return 0
