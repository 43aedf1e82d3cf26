"""Scenario config loading, validation, overrides, round-trips."""

import math
from pathlib import Path

import pytest

from facadesim.config import (
    MissionParams,
    ScenarioConfig,
    apply_overrides,
    config_from_dict,
    config_to_dict,
    load_config,
    load_raw,
    save_config,
)
from facadesim.errors import InvalidScenario
from facadesim.world import BuildingSpec, FaultDecal, Obstacle

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


def small_config(**kw):
    base = dict(building=BuildingSpec(10.0, 6.0, 5.0),
                home=(9.0, 0.0, 0.0))
    base.update(kw)
    return ScenarioConfig(**base)


# -- shipped scenarios ------------------------------------------------------------

@pytest.mark.parametrize("name", ["default", "obstacle_course",
                                  "coverage_4decals"])
def test_shipped_scenarios_load_and_validate(name):
    cfg = load_config(CONFIG_DIR / f"{name}.yaml")
    cfg.validate()
    assert cfg.name == name


@pytest.mark.parametrize("name", ["default", "obstacle_course",
                                  "coverage_4decals"])
def test_shipped_scenarios_round_trip(name, tmp_path):
    cfg = load_config(CONFIG_DIR / f"{name}.yaml")
    out = tmp_path / "copy.yaml"
    save_config(cfg, out)
    assert load_config(out) == cfg


def test_constructed_round_trip():
    cfg = small_config(
        name="rt", seed=42,
        decals=(FaultDecal(0, "east", (0.5, 1.5), (0.3, 0.4)),),
        obstacles=(Obstacle(5, (8.0, 2.0), 0.4, 3.0),),
        alpha=1.0, kalman_r_std=0.01,
        mission=MissionParams(hold_s=2.0, watchdog_s=30.0))
    assert config_from_dict(config_to_dict(cfg)) == cfg


# -- structural errors --------------------------------------------------------------

def test_unknown_key_is_named():
    data = config_to_dict(small_config())
    data["vheicle"] = {"v_max": 1.0}
    with pytest.raises(InvalidScenario, match="vheicle"):
        config_from_dict(data)


def test_nested_unknown_key_reports_path():
    data = config_to_dict(small_config())
    data["vehicle"]["vmax"] = 1.0
    with pytest.raises(InvalidScenario, match="vehicle"):
        config_from_dict(data)


def test_bad_value_reports_where():
    data = config_to_dict(small_config())
    data["building"]["length"] = -5.0
    with pytest.raises(InvalidScenario, match="building"):
        config_from_dict(data)


def test_missing_building_rejected():
    with pytest.raises(InvalidScenario):
        config_from_dict({"name": "x"})


# -- validate() ---------------------------------------------------------------------

def test_home_inside_footprint_rejected():
    with pytest.raises(ValueError, match="home"):
        small_config(home=(1.0, 0.0, 0.0)).validate()


def test_alpha_range_enforced():
    with pytest.raises(ValueError, match="alpha"):
        small_config(alpha=1.5).validate()
    small_config(alpha=1.0).validate()
    small_config(alpha=0.0).validate()


def test_kalman_diagonals_non_negative():
    with pytest.raises(ValueError):
        small_config(kalman_q_diag=(-1e-9, 0.0, 0.0)).validate()
    with pytest.raises(ValueError):
        small_config(kalman_p0_diag=(0.0, -1.0, 0.0)).validate()
    with pytest.raises(ValueError):
        small_config(kalman_r_std=-0.1).validate()


def test_scan_limits_checked():
    with pytest.raises(ValueError, match="scan_n_bins"):
        small_config(scan_n_bins=1).validate()
    with pytest.raises(ValueError, match="scan_range_max"):
        small_config(scan_range_max=2.0).validate()


def test_camera_degrees_converted():
    cam = small_config(camera_hfov_deg=80.0, camera_vfov_deg=50.0).camera()
    assert cam.hfov == pytest.approx(math.radians(80.0))
    assert cam.vfov == pytest.approx(math.radians(50.0))


def test_kalman_r_defaults_to_accel_noise():
    cfg = small_config()
    assert cfg.kalman().R[0][0] == pytest.approx(
        cfg.sensors.accel_noise_std ** 2)
    explicit = small_config(kalman_r_std=0.5)
    assert explicit.kalman().R[1][1] == pytest.approx(0.25)
    # zero noise floors at 1e-6 so the update stays well posed
    floored = small_config(kalman_r_std=0.0)
    assert floored.kalman().R[0][0] == pytest.approx(1e-12)


# -- file I/O ------------------------------------------------------------------------

def test_load_raw_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_raw(tmp_path / "absent.yaml")


def test_load_raw_rejects_bad_yaml(tmp_path):
    p = tmp_path / "broken.yaml"
    p.write_text("building: {length: 5.0\n")
    with pytest.raises(InvalidScenario):
        load_raw(p)


def test_load_raw_rejects_non_mapping(tmp_path):
    p = tmp_path / "list.yaml"
    p.write_text("- 1\n- 2\n")
    with pytest.raises(InvalidScenario):
        load_raw(p)


# -- overrides -----------------------------------------------------------------------

def test_overrides_set_nested_values():
    data = config_to_dict(small_config())
    apply_overrides(data, ["vehicle.v_max=1.25", "seed=9",
                           "building.length=14"])
    cfg = config_from_dict(data)
    assert cfg.vehicle.v_max == 1.25
    assert cfg.seed == 9
    assert cfg.building.length == 14.0


def test_overrides_parse_yaml_values():
    data = config_to_dict(small_config())
    apply_overrides(data, ["home=[9.5, 0, 0]", "name=probe",
                           "kalman_r_std=null"])
    cfg = config_from_dict(data)
    assert cfg.home == (9.5, 0.0, 0.0)
    assert cfg.name == "probe"
    assert cfg.kalman_r_std is None


def test_overrides_create_missing_sections():
    data = {"building": {"length": 10.0, "width": 6.0, "height": 5.0}}
    apply_overrides(data, ["mission.hold_s=2.5"])
    cfg = config_from_dict(data)
    assert cfg.mission.hold_s == 2.5


def test_overrides_require_key_value_shape():
    with pytest.raises(InvalidScenario, match="key=value"):
        apply_overrides({}, ["vehicle.v_max"])


def test_mission_params_validation():
    with pytest.raises(ValueError):
        MissionParams(dt=0.0)
    with pytest.raises(ValueError):
        MissionParams(arrival_tol=-1.0)
    with pytest.raises(ValueError):
        MissionParams(capture_interval_s=0.0)
    with pytest.raises(ValueError):
        MissionParams(watchdog_s=0.0)
