import sys
from datetime import datetime, timezone
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from condlens import data_path
from condlens.demo import generate_demo
from condlens.lexicons import (
    load_body_lexicon,
    load_condition_catalog,
    load_emotion_lexicon,
    load_terminology,
)
from condlens.pipeline import PipelineConfig, run_score

NOW = datetime(2017, 3, 1, tzinfo=timezone.utc)


@pytest.fixture(scope="session")
def terminology():
    return load_terminology(data_path("terminology.tsv"))


@pytest.fixture(scope="session")
def catalog(terminology):
    return load_condition_catalog(data_path("conditions.json"), terminology)


@pytest.fixture(scope="session")
def emolex():
    return load_emotion_lexicon(data_path("emolex.tsv"))


@pytest.fixture(scope="session")
def body_lexicon():
    return load_body_lexicon(data_path("body.tsv"))


@pytest.fixture(scope="session")
def demo_workdir(tmp_path_factory):
    """Small demo dataset shared by api/cli tests (fast to build)."""
    root = tmp_path_factory.mktemp("demo_small")
    generate_demo(root, seed=7, n_posts=390, n_rx_rows=24_000)
    return root


@pytest.fixture(scope="session")
def demo_bundle(demo_workdir, tmp_path_factory):
    out = tmp_path_factory.mktemp("bundles") / "bundle"
    config = PipelineConfig.from_file(demo_workdir / "config.json")
    run_score(config, out)
    return out
