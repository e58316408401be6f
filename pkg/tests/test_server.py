"""Session protocol over a live HTTP server."""

import json
import random
import threading
import urllib.error
import urllib.request

import pytest

from hmiforge.feature_model import Configuration
from hmiforge.generator import generate
from hmiforge.runtime import render_view, run_trace
from hmiforge.server import SessionApp, make_server


@pytest.fixture(scope="module")
def base_url(demo_models):
    fm, hm, manifest, _ = demo_models
    app = SessionApp(fm, hm, manifest)
    httpd = make_server(app, "127.0.0.1", 0)
    port = httpd.server_address[1]
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{port}"
    httpd.shutdown()
    httpd.server_close()


def request(base_url, method, path, body=None):
    data = json.dumps(body).encode() if body is not None else None
    req = urllib.request.Request(
        base_url + path,
        data=data,
        method=method,
        headers={"Content-Type": "application/json"} if data else {},
    )
    try:
        with urllib.request.urlopen(req) as resp:
            return resp.status, json.loads(resp.read().decode())
    except urllib.error.HTTPError as e:
        return e.code, json.loads(e.read().decode())


class TestProtocol:
    def test_feature_model_endpoint(self, base_url):
        status, body = request(base_url, "GET", "/api/featuremodel")
        assert status == 200
        assert body["root"] == "Car"
        names = {f["name"] for f in body["features"]}
        assert {"Car", "Climate", "Media", "Phone", "Radio", "CD"} == names
        assert body["constraints"] == [
            {"kind": "requires", "lhs": "Phone", "rhs": "Media"}
        ]

    def test_validate_valid(self, base_url):
        status, body = request(
            base_url, "POST", "/api/validate", {"select": ["Car", "Climate"]}
        )
        assert status == 200
        assert body == {"valid": True, "violations": []}

    def test_validate_invalid_is_200(self, base_url):
        status, body = request(base_url, "POST", "/api/validate", {"select": ["Car"]})
        assert status == 200
        assert body["valid"] is False
        assert body["violations"][0]["code"] == "E_MANDATORY_MISSING"

    def test_session_walkthrough(self, base_url):
        status, body = request(
            base_url, "POST", "/api/sessions", {"select": ["Car", "Climate"]}
        )
        assert status == 201
        sid = body["sessionId"]
        assert body["view"]["title"] == "Main"

        status, body = request(
            base_url, "POST", f"/api/sessions/{sid}/input", {"event": "down"}
        )
        assert status == 200
        assert body["transition"] == "cursor:1"
        status, body = request(
            base_url, "POST", f"/api/sessions/{sid}/input", {"event": "select"}
        )
        assert body["transition"] == "action:reset_clock"
        assert body["effects"] == [{"statusbox": "Clock", "value": "00:00"}]

        status, body = request(base_url, "GET", f"/api/sessions/{sid}/view")
        assert status == 200
        assert any(l["text"] == "Clock: 00:00" for l in body["view"]["lines"])

        status, _ = request(base_url, "DELETE", f"/api/sessions/{sid}")
        assert status == 200
        status, _ = request(base_url, "GET", f"/api/sessions/{sid}/view")
        assert status == 404

    def test_generation_failure_is_422(self, base_url):
        status, body = request(base_url, "POST", "/api/sessions", {"select": ["Car"]})
        assert status == 422
        codes = {d["code"] for d in body["diagnostics"]}
        assert "E_INVALID_CONFIGURATION" in codes

    def test_bad_event_rejected(self, base_url):
        _, body = request(
            base_url, "POST", "/api/sessions", {"select": ["Car", "Climate"]}
        )
        sid = body["sessionId"]
        status, _ = request(
            base_url, "POST", f"/api/sessions/{sid}/input", {"event": "left"}
        )
        assert status == 400

    def test_unknown_route_404(self, base_url):
        status, _ = request(base_url, "GET", "/api/bogus")
        assert status == 404


class TestProtocolEquivalence:
    def test_served_equals_headless(self, base_url, demo_models):
        fm, hm, manifest, _ = demo_models
        select = ["Car", "Climate", "Media", "Radio", "Phone"]
        cfg = Configuration(frozenset(select), name="session")
        program = generate(fm, hm, manifest, cfg).program
        rng = random.Random(99)
        for _ in range(20):
            trace = [
                rng.choice(["up", "down", "select", "back"])
                for _ in range(rng.randint(0, 40))
            ]
            final, _ = run_trace(program, trace)
            expected = render_view(final, program)

            _, body = request(base_url, "POST", "/api/sessions", {"select": select})
            sid = body["sessionId"]
            for ev in trace:
                status, _ = request(
                    base_url, "POST", f"/api/sessions/{sid}/input", {"event": ev}
                )
                assert status == 200
            _, body = request(base_url, "GET", f"/api/sessions/{sid}/view")
            assert json.dumps(body["view"], sort_keys=True) == json.dumps(
                expected, sort_keys=True
            )
            request(base_url, "DELETE", f"/api/sessions/{sid}")
