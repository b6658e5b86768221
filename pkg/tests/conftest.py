"""Shared fixtures: the kitchen and pantry scenes, gold set, replay client and configs."""
from __future__ import annotations

from pathlib import Path

import pytest
import yaml

from src.config import FIXTURES, RunConfig, load_config
from src.evaluation import GoldSet, load_gold
from src.graph import NeighborGraph, build_graph
from src.llm import ReplayClient
from src.world import SceneModel, load_scene

GOLDEN = Path(__file__).parent / "golden"
TRANSCRIPT = FIXTURES / "recorded.transcript"


def golden(name: str) -> str:
    return (GOLDEN / name).read_text(encoding="utf-8")


def box_scene(objects: list[dict], facing=(0, -1, 0), counter_height: float = 0.9) -> SceneModel:
    """Scene from (id, category, position) dicts, each wrapped in a small box."""
    return load_scene(
        {
            "name": "test",
            "counter_height": counter_height,
            "viewpoints": [{"name": "Front", "position": [0, 10, 1], "facing": list(facing)}],
            "objects": [
                {
                    "id": o["id"],
                    "category": o["category"],
                    "position": list(o["position"]),
                    "bbox": {
                        "min": [c - o.get("half", 0.2) for c in o["position"]],
                        "max": [c + o.get("half", 0.2) for c in o["position"]],
                    },
                    "facts": o.get("facts", {}),
                }
                for o in objects
            ],
        }
    )


@pytest.fixture(scope="session")
def kitchen() -> SceneModel:
    return load_scene(FIXTURES / "kitchen_scene.json")


@pytest.fixture(scope="session")
def kitchen_graph(kitchen) -> NeighborGraph:
    return build_graph(kitchen)


@pytest.fixture(scope="session")
def pantry() -> SceneModel:
    return load_scene(FIXTURES / "pantry_scene.json")


@pytest.fixture(scope="session")
def gold() -> GoldSet:
    return load_gold(FIXTURES / "gold_set.yaml")


@pytest.fixture
def replay_client() -> ReplayClient:
    return ReplayClient(TRANSCRIPT)


@pytest.fixture
def config_file(tmp_path) -> Path:
    """A config pointing every path at the fixtures and writing under tmp_path/out."""
    path = tmp_path / "groundkit.yaml"
    data = {
        "scene": str(FIXTURES / "kitchen_scene.json"),
        "gold": str(FIXTURES / "gold_set.yaml"),
        "transcript": str(TRANSCRIPT),
        "out_dir": str(tmp_path / "out"),
        "confirmation": "assume-no",
        "storage": {"scene": str(FIXTURES / "pantry_scene.json")},
        "kitchen": {"inventory": str(FIXTURES / "kitchen_inventory.yaml")},
    }
    path.write_text(yaml.safe_dump(data), encoding="utf-8")
    return path


@pytest.fixture
def run_config(config_file) -> RunConfig:
    return load_config(config_file)
