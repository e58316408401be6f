from pathlib import Path

import pytest

from hmiforge import feature_model as fmod
from hmiforge import generator as gen
from hmiforge import menu_model as mmod

ROOT = Path(__file__).resolve().parents[1]
DEMO = ROOT / "demo"
GOLDEN = Path(__file__).resolve().parent / "golden"

M1_TEXT = "featuremodel M1 { root A feature A { mandatory B optional C } }"
M2_TEXT = "featuremodel M2 { root A feature A { xor { X, Y, Z } } }"
M3_TEXT = "featuremodel M3 { root A feature A { optional B optional C } C requires B }"


def parse_fm(text: str) -> fmod.FeatureModel:
    fm, diags = fmod.parse_feature_model(text)
    assert fm is not None, [d.render() for d in diags]
    return fm


@pytest.fixture
def m1():
    return parse_fm(M1_TEXT)


@pytest.fixture
def m2():
    return parse_fm(M2_TEXT)


@pytest.fixture
def m3():
    return parse_fm(M3_TEXT)


@pytest.fixture(scope="session")
def demo_paths():
    return {
        "fm": str(DEMO / "comfort.fm"),
        "hmi": str(DEMO / "mainunit.hmi"),
        "handlers": str(DEMO / "handlers.manifest"),
        "cfg": str(DEMO / "base.cfg"),
        "cfg_radio": str(DEMO / "radio.cfg"),
    }


@pytest.fixture(scope="session")
def demo_models(demo_paths):
    fm, d1 = fmod.parse_feature_model(
        Path(demo_paths["fm"]).read_text(), demo_paths["fm"]
    )
    hm, d2 = mmod.parse_hmi_model(
        Path(demo_paths["hmi"]).read_text(), demo_paths["hmi"]
    )
    manifest, d3 = gen.parse_handler_manifest(
        Path(demo_paths["handlers"]).read_text(), demo_paths["handlers"]
    )
    cfg, d4 = fmod.parse_configuration(
        Path(demo_paths["cfg"]).read_text(), demo_paths["cfg"]
    )
    assert not (d1 or d2 or d3 or d4)
    return fm, hm, manifest, cfg
