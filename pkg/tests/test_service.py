import json

import pytest
from fastapi.testclient import TestClient

from tandem.service import canonical_view_json, create_app, fnv1a64


@pytest.fixture(scope="module")
def client():
    app = create_app(("gridworld",))
    with TestClient(app) as c:
        c.app = app
        yield c


def new_session(client, **overrides):
    body = {"preset": "gridworld", "alpha": 0.0, "seed": 11}
    body.update(overrides)
    response = client.post("/sessions", json=body)
    assert response.status_code == 200
    return response.json()


class TestPresets:
    def test_catalog(self, client):
        payload = client.get("/presets").json()
        assert payload["protocol_version"] == 1
        assert [p["name"] for p in payload["presets"]] == ["gridworld"]

    def test_unknown_preset_lists_catalog(self, client):
        response = client.post("/sessions", json={"preset": "moonbase"})
        assert response.status_code == 404
        assert response.json()["detail"]["presets"] == ["gridworld"]


class TestSessionFlow:
    def test_initial_view(self, client):
        view = new_session(client)
        assert view["turn"] == "human"
        assert view["status"] == "active"
        assert view["board"]["kind"] == "grid"
        assert len(view["board"]["tiles"]) == 9
        assert view["legal_moves"], "human to move implies legal moves"
        assert view["view_checksum"]

    def test_move_applies_human_and_robot(self, client):
        view = new_session(client)
        edge = view["legal_moves"][0]["edge"]
        after = client.post(f"/sessions/{view['session_id']}/moves", json={"edge": edge}).json()
        assert after["turn"] == "human"
        assert after["metrics"]["moves"] == 2
        assert after["last_robot_move"] is not None

    def test_illegal_move_rejected_without_state_change(self, client):
        view = new_session(client)
        sid = view["session_id"]
        before = client.get(f"/sessions/{sid}").json()
        response = client.post(f"/sessions/{sid}/moves", json={"edge": "0->424242"})
        assert response.status_code == 400
        assert "legal_moves" in response.json()["detail"]
        after = client.get(f"/sessions/{sid}").json()
        assert after["view_checksum"] == before["view_checksum"]

    def test_replay_same_seed_same_views(self, client):
        first = new_session(client, seed=77)
        second = new_session(client, seed=77)
        sequence = [m["edge"] for m in first["legal_moves"][:1]]
        a = client.post(f"/sessions/{first['session_id']}/moves", json={"edge": sequence[0]}).json()
        b = client.post(f"/sessions/{second['session_id']}/moves", json={"edge": sequence[0]}).json()
        assert a["view_checksum"] == b["view_checksum"]
        assert a["board"] == b["board"]

    def test_record_endpoint(self, client):
        view = new_session(client)
        edge = view["legal_moves"][0]["edge"]
        client.post(f"/sessions/{view['session_id']}/moves", json={"edge": edge})
        text = client.get(f"/sessions/{view['session_id']}/record").text
        lines = [json.loads(line) for line in text.splitlines()]
        assert lines[0]["type"] == "meta"
        assert [l["type"] for l in lines[1:]] == ["move", "move"]

    def test_unknown_session(self, client):
        assert client.get("/sessions/nope").status_code == 404

    def test_busy_session_rejected(self, client):
        view = new_session(client)
        slot = client.app.state.slots[view["session_id"]]
        edge = view["legal_moves"][0]["edge"]
        with slot.lock:
            response = client.post(
                f"/sessions/{view['session_id']}/moves", json={"edge": edge}
            )
        assert response.status_code == 409

    def test_stale_session_expires(self, client):
        view = new_session(client)
        slot = client.app.state.slots[view["session_id"]]
        slot.last_access -= 31 * 60
        assert client.get(f"/sessions/{view['session_id']}").status_code == 410
        assert client.get(f"/sessions/{view['session_id']}").status_code == 404


class TestChecksum:
    def test_reference_value_stability(self):
        assert fnv1a64("") == "cbf29ce484222325"
        assert fnv1a64("tandem") == fnv1a64("tandem")
        assert fnv1a64("a") != fnv1a64("b")

    def test_view_checksum_covers_core_fields(self, client):
        view = new_session(client)
        core = {
            "status": view["status"],
            "turn": view["turn"],
            "board": view["board"],
            "legal_moves": view["legal_moves"],
            "feedback": view["feedback"],
            "metrics": view["metrics"],
        }
        assert view["view_checksum"] == fnv1a64(canonical_view_json(core))

    def test_canonical_json_renders_integral_floats_like_javascript(self):
        text = canonical_view_json({"f": 1.0, "g": 0.5, "n": [2.0, 0.25], "z": 0.0})
        assert text == '{"f":1,"g":0.5,"n":[2,0.25],"z":0}'
