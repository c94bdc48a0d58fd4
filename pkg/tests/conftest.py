import csv
from datetime import date
from pathlib import Path

import pytest

from phishlens.dataset import LabeledUrl, load_matrix
from phishlens.ml import TrainConfig, save_model, train
from phishlens.pipeline import ExtractConfig, extract_all
from phishlens.synthetic import synthesize_rows

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"

PINNED_NOW = date(2025, 6, 1)


def make_extract_config(**overrides) -> ExtractConfig:
    cfg = ExtractConfig(
        offline=True,
        evidence_dir=FIXTURES / "snapshots",
        whois_dir=FIXTURES / "whois",
        rank_snapshot=FIXTURES / "rank.csv",
        now=PINNED_NOW,
        parallelism=1,
    )
    for key, value in overrides.items():
        setattr(cfg, key, value)
    return cfg


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def corpus_items() -> list[LabeledUrl]:
    with open(FIXTURES / "corpus.csv", newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader)
        return [LabeledUrl(url=row[0], label=int(row[1]), source=row[2]) for row in reader]


@pytest.fixture(scope="session")
def golden_rows():
    return load_matrix(FIXTURES / "golden_matrix.csv")


@pytest.fixture(scope="session")
def extracted(corpus_items):
    return extract_all(corpus_items, make_extract_config())


@pytest.fixture(scope="session")
def combined_rows(golden_rows):
    return golden_rows + synthesize_rows(600, seed=7)


@pytest.fixture(scope="session")
def forest_model(combined_rows):
    return train(combined_rows, TrainConfig(model_kind="random_forest", seed=13))


@pytest.fixture(scope="session")
def forest_model_file(forest_model, tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("model") / "forest.model.json"
    save_model(forest_model, path)
    return path
