"""HTTP surface: every endpoint, response shapes, error mapping, persistence."""

import base64

import pytest
from fastapi.testclient import TestClient

from conftest import FIXTURE_DIR, SNAPSHOT_DIR

from sous_chef.service import ServiceConfig, create_app

PROFILE_BODY = {
    "dietary_restrictions": ["vegetarian"],
    "allergies": [],
    "favorite_cuisines": ["italian"],
    "cooking_level": 2,
    "language": "en",
}


@pytest.fixture
def client(tmp_path):
    config = ServiceConfig(provider="mock", fixture_dir=str(FIXTURE_DIR),
                           store_path=str(tmp_path / "store.jsonl"))
    app = create_app(config)
    with TestClient(app) as test_client:
        yield test_client


@pytest.fixture
def profile_id(client):
    return client.post("/profiles", json=PROFILE_BODY).json()["id"]


@pytest.fixture
def session_id(client, profile_id):
    return client.post("/sessions", json={"profile_id": profile_id}).json()["id"]


def _scan_body(fixture="five_items", snapshot="counter.png", viewport=(390, 844)):
    data = (SNAPSHOT_DIR / snapshot).read_bytes()
    mime = "image/jpeg" if snapshot.endswith(".jpg") else "image/png"
    return {
        "image_b64": base64.b64encode(data).decode("ascii"),
        "mime_type": mime,
        "viewport_width_px": viewport[0],
        "viewport_height_px": viewport[1],
        "fixture": fixture,
    }


def _scan(client, session_id, **kwargs):
    response = client.post(f"/sessions/{session_id}/scan", json=_scan_body(**kwargs))
    assert response.status_code == 200, response.text
    return response.json()


def _generate(client, session_id, fixture="veg_three", count=3):
    response = client.post(f"/sessions/{session_id}/recipes",
                           json={"count": count, "fixture": fixture})
    return response


class TestProfiles:
    def test_create_and_get(self, client):
        created = client.post("/profiles", json=PROFILE_BODY)
        assert created.status_code == 201
        body = created.json()
        assert set(body) == {"id", "dietary_restrictions", "allergies",
                             "favorite_cuisines", "cooking_level", "language"}
        fetched = client.get(f"/profiles/{body['id']}")
        assert fetched.status_code == 200
        assert fetched.json() == body

    def test_update(self, client, profile_id):
        updated = client.put(f"/profiles/{profile_id}",
                             json={**PROFILE_BODY, "language": "fa"})
        assert updated.status_code == 200
        assert updated.json()["language"] == "fa"

    def test_unknown_profile_404(self, client):
        assert client.get("/profiles/nope").status_code == 404

    def test_invalid_profile_400(self, client):
        bad = client.post("/profiles", json={**PROFILE_BODY, "cooking_level": 9})
        assert bad.status_code == 400
        assert bad.json()["error"]["code"] == "bad_profile"


class TestSessions:
    def test_create_requires_existing_profile(self, client):
        response = client.post("/sessions", json={"profile_id": "ghost"})
        assert response.status_code == 404

    def test_new_session_is_empty(self, client, profile_id):
        response = client.post("/sessions", json={"profile_id": profile_id})
        assert response.status_code == 201
        body = response.json()
        assert body["ingredients"] == []
        assert body["chat_history"] == []
        assert body["offered_recipes"] == []
        assert body["selected_recipe"] is None

    def test_two_sessions_distinct_ids(self, client, profile_id):
        first = client.post("/sessions", json={"profile_id": profile_id}).json()["id"]
        second = client.post("/sessions", json={"profile_id": profile_id}).json()["id"]
        assert first != second


class TestScan:
    def test_scan_returns_projected_labels_and_pantry(self, client, session_id):
        body = _scan(client, session_id)
        assert len(body["labels"]) == 5
        for label in body["labels"]:
            rect = label["rect_px"]
            assert set(rect) == {"x", "y", "w", "h"}
            assert 0 <= rect["x"] <= rect["x"] + rect["w"] <= 390
            assert 0 <= rect["y"] <= rect["y"] + rect["h"] <= 844
            anchor = label["anchor_px"]
            assert anchor["y"] == rect["y"]
        keys = [ing["canonical_key"] for ing in body["pantry"]]
        assert keys == ["tomato", "egg", "onion", "flour", "milk"]

    def test_scan_accumulates_across_snapshots(self, client, session_id):
        _scan(client, session_id)
        body = _scan(client, session_id, fixture="one_bad_box")
        keys = [ing["canonical_key"] for ing in body["pantry"]]
        assert keys == ["tomato", "egg", "onion", "flour", "milk"]
        assert body["dropped_count"] == 1

    def test_scan_multipart_upload(self, client, session_id):
        data = (SNAPSHOT_DIR / "counter.png").read_bytes()
        response = client.post(
            f"/sessions/{session_id}/scan",
            files={"image": ("counter.png", data, "image/png")},
            data={"viewport_width_px": "390", "viewport_height_px": "844",
                  "fixture": "five_items"},
        )
        assert response.status_code == 200
        assert len(response.json()["labels"]) == 5

    def test_empty_counter_warning(self, client, session_id):
        body = _scan(client, session_id, fixture="empty_counter")
        assert body["nothing_detected"] is True
        assert body["labels"] == []

    def test_bad_base64_rejected(self, client, session_id):
        bad = _scan_body()
        bad["image_b64"] = "!!!not-base64!!!"
        response = client.post(f"/sessions/{session_id}/scan", json=bad)
        assert response.status_code == 400


class TestPantryEndpoint:
    def test_add_and_remove(self, client, session_id):
        added = client.post(f"/sessions/{session_id}/pantry",
                            json={"action": "add", "name": "Basil"})
        assert added.status_code == 200
        keys = [i["canonical_key"] for i in added.json()["pantry"]]
        assert keys == ["basil"]

        removed = client.post(f"/sessions/{session_id}/pantry",
                              json={"action": "remove", "canonical_key": "basil"})
        assert removed.json()["pantry"] == []

    def test_remove_absent_404(self, client, session_id):
        response = client.post(f"/sessions/{session_id}/pantry",
                               json={"action": "remove", "canonical_key": "kale"})
        assert response.status_code == 404

    def test_unknown_action_400(self, client, session_id):
        response = client.post(f"/sessions/{session_id}/pantry",
                               json={"action": "rename"})
        assert response.status_code == 400


class TestRecipesEndpoint:
    def test_generate_select_rate_shopping(self, client, session_id):
        _scan(client, session_id)
        generated = _generate(client, session_id)
        assert generated.status_code == 200
        body = generated.json()
        assert len(body["accepted"]) == 3
        assert body["shortfall"] == 0
        recipe = body["accepted"][0]
        assert set(recipe) >= {"id", "title", "cuisine", "servings", "required",
                               "steps", "nutrition", "allergens", "rating"}

        selected = client.post(
            f"/sessions/{session_id}/recipes/{recipe['id']}/select")
        assert selected.status_code == 200
        assert selected.json()["selected_recipe"] == recipe["id"]

        rated = client.post(f"/sessions/{session_id}/recipes/{recipe['id']}/rate",
                            json={"stars": 5})
        assert rated.status_code == 200
        assert rated.json()["recipe"]["rating"] == 5

        client.post(f"/sessions/{session_id}/pantry",
                    json={"action": "remove", "canonical_key": "milk"})
        shopping = client.post(
            f"/sessions/{session_id}/recipes/{recipe['id']}/shopping-list")
        assert shopping.status_code == 200
        items = shopping.json()["items"]
        assert [i["canonical_key"] for i in items] == ["milk"]
        assert items[0]["amount"] == "2 tbsp"

    def test_generate_on_empty_pantry_400(self, client, session_id):
        response = _generate(client, session_id)
        assert response.status_code == 400
        assert response.json()["error"]["code"] == "empty_pantry"

    def test_zero_survivors_422_with_reports(self, client, session_id):
        client.post(f"/sessions/{session_id}/pantry",
                    json={"action": "add", "name": "rice"})
        response = _generate(client, session_id)
        assert response.status_code == 422
        detail = response.json()["error"]["detail"]
        assert len(detail["discarded"]) == 3

    def test_rate_bounds(self, client, session_id):
        _scan(client, session_id)
        recipe_id = _generate(client, session_id).json()["accepted"][0]["id"]
        assert client.post(f"/sessions/{session_id}/recipes/{recipe_id}/rate",
                           json={"stars": 0}).status_code == 400
        assert client.post(f"/sessions/{session_id}/recipes/ghost/rate",
                           json={"stars": 3}).status_code == 404


class TestChatAndStepCheck:
    def test_chat_round_trip(self, client, session_id):
        response = client.post(
            f"/sessions/{session_id}/chat",
            json={"text": "What can I make?", "modality": "voice_transcript",
                  "fixture": "suggest_reply"},
        )
        assert response.status_code == 200
        body = response.json()
        assert body["turn"]["role"] == "assistant"
        assert body["turn"]["modality"] == "voice_transcript"
        assert body["history_length"] == 2

    def test_blank_chat_400(self, client, session_id):
        response = client.post(f"/sessions/{session_id}/chat",
                               json={"text": "  ", "fixture": "suggest_reply"})
        assert response.status_code == 400

    def test_step_check(self, client, session_id):
        _scan(client, session_id)
        recipe_id = _generate(client, session_id).json()["accepted"][0]["id"]
        body = _scan_body(snapshot="workspace.jpg")
        response = client.post(
            f"/sessions/{session_id}/step-check",
            json={"recipe_id": recipe_id, "step_index": 0,
                  "image_b64": body["image_b64"], "mime_type": body["mime_type"],
                  "fixture": "diced_ok"},
        )
        assert response.status_code == 200
        feedback = response.json()["feedback"]
        assert feedback["verdict"] == "correct"
        assert feedback["step_index"] == 0

    def test_step_check_bad_index_400(self, client, session_id):
        _scan(client, session_id)
        recipe_id = _generate(client, session_id).json()["accepted"][0]["id"]
        body = _scan_body(snapshot="workspace.jpg")
        response = client.post(
            f"/sessions/{session_id}/step-check",
            json={"recipe_id": recipe_id, "step_index": 99,
                  "image_b64": body["image_b64"], "mime_type": body["mime_type"],
                  "fixture": "diced_ok"},
        )
        assert response.status_code == 400


class TestTimersEndpoint:
    def test_lifecycle(self, client, session_id):
        created = client.post(f"/sessions/{session_id}/timers",
                              json={"label": "pasta", "duration_s": 600})
        assert created.status_code == 201
        timer = created.json()
        assert timer["state"] == "running"
        assert timer["remaining_s"] == 600

        paused = client.post(f"/timers/{timer['id']}/pause")
        assert paused.status_code == 200
        assert paused.json()["state"] == "paused"

        resumed = client.post(f"/timers/{timer['id']}/resume")
        assert resumed.json()["state"] == "running"

        polled = client.get(f"/timers/{timer['id']}")
        assert polled.status_code == 200
        assert polled.json()["remaining_s"] <= 600

    def test_bad_transitions(self, client, session_id):
        timer = client.post(f"/sessions/{session_id}/timers",
                            json={"label": "x", "duration_s": 60}).json()
        assert client.post(f"/timers/{timer['id']}/resume").status_code == 409
        assert client.get("/timers/ghost").status_code == 404


class TestI18nEndpoint:
    def test_full_catalog_served(self, client):
        response = client.get("/i18n/ar")
        assert response.status_code == 200
        body = response.json()
        assert body["language"] == "ar"
        assert body["direction"] == "rtl"
        assert body["strings"]["scan_button"]

    def test_unknown_language_404(self, client):
        assert client.get("/i18n/de").status_code == 404


class TestPersistenceAcrossRestart:
    def test_state_survives_new_app_instance(self, tmp_path):
        store_path = str(tmp_path / "store.jsonl")
        config = ServiceConfig(provider="mock", fixture_dir=str(FIXTURE_DIR),
                               store_path=store_path)
        with TestClient(create_app(config)) as client:
            profile_id = client.post("/profiles", json=PROFILE_BODY).json()["id"]
            session_id = client.post("/sessions",
                                     json={"profile_id": profile_id}).json()["id"]
            _scan(client, session_id)
            recipe_id = _generate(client, session_id).json()["accepted"][0]["id"]
            client.post(f"/sessions/{session_id}/recipes/{recipe_id}/rate",
                        json={"stars": 4})
            before = client.get(f"/sessions/{session_id}").json()

        with TestClient(create_app(config)) as reopened:
            after = reopened.get(f"/sessions/{session_id}").json()
            assert after == before
            assert after["offered_recipes"][0]["rating"] == 4
            assert reopened.get(f"/profiles/{profile_id}").status_code == 200
