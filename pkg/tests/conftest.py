"""Shared fixtures: each shipped scenario is simulated once per session."""

import pathlib

import pytest

from facadesim.config import load_config
from facadesim.mission import run_mission

CONFIG_DIR = pathlib.Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture(scope="session")
def config_dir():
    return CONFIG_DIR


@pytest.fixture(scope="session")
def default_run():
    cfg = load_config(CONFIG_DIR / "default.yaml")
    return cfg, run_mission(cfg)


@pytest.fixture(scope="session")
def obstacle_run():
    cfg = load_config(CONFIG_DIR / "obstacle_course.yaml")
    return cfg, run_mission(cfg)


@pytest.fixture(scope="session")
def coverage_run():
    cfg = load_config(CONFIG_DIR / "coverage_4decals.yaml")
    return cfg, run_mission(cfg, inspection_only=True)
