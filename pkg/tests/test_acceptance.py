"""Acceptance suite: one test per acceptance criterion, exact tolerances.

Each test prints a single PASS line once its criterion holds; run with
`pytest -s tests/test_acceptance.py` to see them.
"""

import json
import random
import socket
import subprocess
import sys
import time
import urllib.error
import urllib.request

import pytest

from hmiforge import feature_model as fmod
from hmiforge import menu_model as mmod
from hmiforge.cli import main
from hmiforge.feature_model import (
    Configuration,
    enumerate_configurations,
    eval_feature_expr,
)
from hmiforge.generator import generate
from hmiforge.pipeline import PipelineInputs, run_pipeline
from hmiforge.runtime import check_state, init_session, render_view, run_trace, step

from conftest import DEMO, GOLDEN
from oracle import all_valid_subsets
from randgen import (
    random_consistent_triple,
    random_feature_model,
    random_hmi_and_manifest_text,
    random_program,
)

EVENTS = ["up", "down", "select", "back"]


def ok(name):
    print(f"\nACCEPTANCE PASS: {name}")


def test_configuration_semantics_oracle():
    """enumerate_configurations equals exhaustive brute force through an
    independently coded rule checker; 200 random models, exact equality."""
    rng = random.Random(20260823)
    for _ in range(200):
        fm = random_feature_model(rng, max_features=12)
        ours = [sorted(c.selected) for c in enumerate_configurations(fm)]
        assert ours == all_valid_subsets(fm)
    ok("configuration-semantics oracle (200 models, exact)")


def test_hand_derived_counts(capsys, tmp_path):
    """M1 -> 2, M2 -> 3, M3 -> 3 reproduced by `config count`."""
    cases = [
        ("featuremodel M1 { root A feature A { mandatory B optional C } }", "2"),
        ("featuremodel M2 { root A feature A { xor { X, Y, Z } } }", "3"),
        (
            "featuremodel M3 { root A feature A { optional B optional C } "
            "C requires B }",
            "3",
        ),
    ]
    for i, (text, expected) in enumerate(cases):
        path = tmp_path / f"m{i}.fm"
        path.write_text(text)
        assert main(["config", "count", "--fm", str(path)]) == 0
        assert capsys.readouterr().out.strip() == expected
    ok("hand-derived counts M1=2 M2=3 M3=3 via config count")


def test_generator_determinism(tmp_path, capsys):
    """Three repeated generate runs are byte-identical and match the
    hand-executed golden file."""
    outputs = []
    for i in range(3):
        out = tmp_path / f"run{i}.json"
        code = main(
            [
                "generate",
                "--fm", str(DEMO / "comfort.fm"),
                "--hmi", str(DEMO / "mainunit.hmi"),
                "--handlers", str(DEMO / "handlers.manifest"),
                "--cfg", str(DEMO / "base.cfg"),
                "--out", str(out),
            ]
        )
        assert code == 0
        outputs.append(out.read_bytes())
    capsys.readouterr()
    assert outputs[0] == outputs[1] == outputs[2]
    assert outputs[0] == (GOLDEN / "base.program.json").read_bytes()
    ok("generator determinism (3 runs byte-identical, golden match)")


def test_prune_soundness_and_completeness():
    """200 random (model, valid configuration) pairs: exact partition of
    elements, and no survivor with a false original presence condition."""
    rng = random.Random(424242)
    for _ in range(200):
        fm, hm, manifest, configs = random_consistent_triple(rng)
        cfg = rng.choice(configs)
        result = generate(fm, hm, manifest, cfg)
        assert result.ok, [d.render() for d in result.diagnostics]
        program, report = result.program, result.report

        assert len(hm.menus) == len(program.screens) + report.pruned_menus
        assert len(hm.dialogs) == len(program.dialogs) + report.pruned_dialogs
        total = sum(len(m.entries) for m in hm.menus.values())
        surviving = sum(len(s.entries) for s in program.screens.values())
        assert total == surviving + report.pruned_entries

        for name in program.screens:
            p = hm.menus[name].presence
            assert p is None or eval_feature_expr(p, cfg)
        for name in program.dialogs:
            p = hm.dialogs[name].presence
            assert p is None or eval_feature_expr(p, cfg)
        for name, screen in program.screens.items():
            originals = hm.menus[name].entries
            oi = 0
            for e in screen.entries:
                while originals[oi].label != e.label:
                    oi += 1
                p = originals[oi].presence
                assert p is None or eval_feature_expr(p, cfg)
                oi += 1
    ok("prune soundness/completeness (200 pairs, exact partition)")


def _pipeline_errors(fm_text, hmi_text, manifest_text, tmp_path):
    (tmp_path / "m.fm").write_text(fm_text)
    (tmp_path / "m.hmi").write_text(hmi_text)
    (tmp_path / "m.manifest").write_text(manifest_text)
    result = run_pipeline(
        PipelineInputs(
            str(tmp_path / "m.fm"),
            str(tmp_path / "m.hmi"),
            str(tmp_path / "m.manifest"),
        ),
        through="crosscheck",
    )
    return [d for d in result.diagnostics if d.is_error]


def test_cross_check_mutation_suite(tmp_path):
    """Deleting any single handler, feature, or declared target yields
    exactly the expected error code at the right span."""
    fm_text = (DEMO / "comfort.fm").read_text()
    hmi_text = (DEMO / "mainunit.hmi").read_text()
    manifest_text = (DEMO / "handlers.manifest").read_text()
    hmi_lines = hmi_text.splitlines()

    # baseline is clean
    assert _pipeline_errors(fm_text, hmi_text, manifest_text, tmp_path) == []

    # 1. delete each handler -> exactly one E_UNKNOWN_ACTION at the
    # referencing entry/button
    handlers = [
        "reset_clock", "temp_up", "temp_down", "tune_radio", "play_cd", "start_call",
    ]
    for name in handlers:
        mutated = "\n".join(
            line for line in manifest_text.splitlines() if f"action {name} " not in line
        )
        errors = _pipeline_errors(fm_text, hmi_text, mutated, tmp_path)
        assert len(errors) == 1, (name, [e.render() for e in errors])
        assert errors[0].code == "E_UNKNOWN_ACTION"
        span = errors[0].span
        assert span.file.endswith("m.hmi")
        assert f"action {name}" in hmi_lines[span.start_line - 1]

    # 2. delete feature Phone (and its constraint) -> every error is
    # E_UNKNOWN_FEATURE_REF, at the two presence conditions naming Phone
    mutated_fm = "\n".join(
        line
        for line in fm_text.splitlines()
        if "optional Phone" not in line and "Phone requires" not in line
    )
    errors = _pipeline_errors(mutated_fm, hmi_text, manifest_text, tmp_path)
    assert errors and {e.code for e in errors} == {"E_UNKNOWN_FEATURE_REF"}
    for e in errors:
        assert "when Phone" in hmi_lines[e.span.start_line - 1]

    # misspelled feature in a presence condition, same code
    errors = _pipeline_errors(
        fm_text,
        hmi_text.replace("when Phone", "when Telefon"),
        manifest_text,
        tmp_path,
    )
    assert errors and {e.code for e in errors} == {"E_UNKNOWN_FEATURE_REF"}

    # 3. delete declared targets -> exactly one E_UNRESOLVED_TARGET at the
    # referencing entry
    def delete_block(text, header):
        out, skipping, depth = [], False, 0
        for line in text.splitlines():
            if not skipping and line.lstrip().startswith(header):
                skipping = True
            if skipping:
                depth += line.count("{") - line.count("}")
                if depth == 0:
                    skipping = False
                continue
            out.append(line)
        return "\n".join(out)

    for header, refline in [
        ("menu ClimateMenu", '"Climate" -> menu ClimateMenu'),
        ("dialog CallDialog", '"Phone" when Phone -> dialog CallDialog'),
    ]:
        mutated = delete_block(hmi_text, header)
        errors = _pipeline_errors(fm_text, mutated, manifest_text, tmp_path)
        assert len(errors) == 1, (header, [e.render() for e in errors])
        assert errors[0].code == "E_UNRESOLVED_TARGET"
        assert refline in hmi_lines[errors[0].span.start_line - 1]
    ok("cross-check mutation suite (exact code at the right span)")


def test_simulator_fuzz_safety():
    """10,000 random traces of length <= 100 over 50 random programs:
    no invariant violation, final step_count == trace length."""
    rng = random.Random(777)
    programs = [random_program(rng) for _ in range(50)]
    for program in programs:
        for _ in range(200):
            state = init_session(program)
            n = rng.randint(0, 100)
            for _ in range(n):
                outcome = step(state, rng.choice(EVENTS), program)
                check_state(outcome.state, program)
                changed = {
                    k
                    for k in outcome.state.status
                    if outcome.state.status[k] != state.status[k]
                }
                assert changed <= {e.statusbox for e in outcome.effects}
                state = outcome.state
            assert state.step_count == n
    ok("simulator fuzz safety (50 programs x 200 traces)")


def test_round_trips():
    """parse∘pretty_print identity on 500 random models of each DSL."""
    rng = random.Random(31337)
    for _ in range(500):
        fm = random_feature_model(rng)
        again, diags = fmod.parse_feature_model(fmod.pretty_print(fm))
        assert not diags and again == fm
    for _ in range(500):
        fm = random_feature_model(rng, 6)
        text, _ = random_hmi_and_manifest_text(rng, fm)
        hm, diags = mmod.parse_hmi_model(text)
        assert not diags
        again, diags = mmod.parse_hmi_model(mmod.pretty_print(hm))
        assert not diags and again == hm
    ok("round trips (500 random models per DSL, exact)")


def _free_port():
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


def _http(base, method, path, body=None):
    data = json.dumps(body).encode() if body is not None else None
    req = urllib.request.Request(base + path, data=data, method=method)
    try:
        with urllib.request.urlopen(req, timeout=10) as resp:
            return resp.status, json.loads(resp.read().decode())
    except urllib.error.HTTPError as e:
        return e.code, json.loads(e.read().decode())


@pytest.fixture
def served():
    port = _free_port()
    proc = subprocess.Popen(
        [
            sys.executable, "-m", "hmiforge.cli", "serve",
            "--fm", str(DEMO / "comfort.fm"),
            "--hmi", str(DEMO / "mainunit.hmi"),
            "--handlers", str(DEMO / "handlers.manifest"),
            "--port", str(port),
        ],
        stdout=subprocess.DEVNULL,
        stderr=subprocess.DEVNULL,
    )
    base = f"http://127.0.0.1:{port}"
    for _ in range(100):
        try:
            _http(base, "GET", "/api/featuremodel")
            break
        except OSError:
            time.sleep(0.05)
    else:
        proc.kill()
        pytest.fail("serve did not come up")
    yield base
    proc.terminate()
    proc.wait(timeout=10)


def test_protocol_equivalence(served, demo_models):
    """20 random traces: the served session's final view equals headless
    run_trace + render_view, exact JSON equality."""
    fm, hm, manifest, _ = demo_models
    select = ["Car", "Climate", "Media", "CD", "Phone"]
    cfg = Configuration(frozenset(select), name="session")
    program = generate(fm, hm, manifest, cfg).program
    rng = random.Random(5150)
    for _ in range(20):
        trace = [rng.choice(EVENTS) for _ in range(rng.randint(0, 60))]
        final, _ = run_trace(program, trace)
        expected = render_view(final, program)

        status, body = _http(served, "POST", "/api/sessions", {"select": select})
        assert status == 201
        sid = body["sessionId"]
        for ev in trace:
            status, _ = _http(
                served, "POST", f"/api/sessions/{sid}/input", {"event": ev}
            )
            assert status == 200
        _, body = _http(served, "GET", f"/api/sessions/{sid}/view")
        assert json.dumps(body["view"], sort_keys=True) == json.dumps(
            expected, sort_keys=True
        )
        _http(served, "DELETE", f"/api/sessions/{sid}")
    ok("protocol equivalence (served == headless, 20 traces)")
