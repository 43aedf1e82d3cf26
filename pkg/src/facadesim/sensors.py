"""Inertial and magnetic sensor models.

Accelerometers report specific force (gravity shows up as +g on body z at
rest), gyros report body rates, and the magnetometer reports a unit vector
toward magnetic north (world +x) in the body frame.  Biases are constant per
run; noise is white Gaussian drawn from a per-instrument seeded stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import Vec3, quat_rotate_inverse
from .vehicle import G_VEC, TrueState

MAG_WORLD: Vec3 = (1.0, 0.0, 0.0)

_CHUNK = 4096  # samples per noise draw; 9 normals per sample


@dataclass(frozen=True)
class SensorParams:
    gyro_noise_std: float = 0.005    # [rad/s] per axis
    accel_noise_std: float = 0.05    # [m/s^2] per axis
    mag_noise_std: float = 0.005     # per axis, on a unit vector
    gyro_bias: Vec3 = (0.0, 0.0, 0.01)   # [rad/s]
    accel_bias: Vec3 = (0.02, 0.0, 0.0)  # [m/s^2]

    def __post_init__(self) -> None:
        for name in ("gyro_noise_std", "accel_noise_std", "mag_noise_std"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be non-negative")


@dataclass(frozen=True)
class ImuSample:
    gyro: Vec3    # [rad/s] body frame
    accel: Vec3   # [m/s^2] specific force, body frame
    mag: Vec3     # unit vector, body frame
    time: float


class Imu:
    """One IMU + magnetometer unit with its own noise stream.

    Instruments sharing a seed but differing in imu_id produce independent
    noise while sharing the configured bias vectors.  Each sample consumes
    exactly nine standard normals in the order gyro xyz, accel xyz, mag xyz,
    which pins the output for a given (seed, imu_id, call sequence).
    """

    def __init__(self, params: SensorParams, seed: int, imu_id: int = 0):
        self.params = params
        self._rng = np.random.default_rng(
            np.random.SeedSequence(seed, spawn_key=(imu_id,)))
        self._buf: list[float] = []
        self._pos = 0

    def measure(self, state: TrueState) -> ImuSample:
        if self._pos >= len(self._buf):
            self._buf = self._rng.standard_normal(9 * _CHUNK).tolist()
            self._pos = 0
        n = self._buf
        i = self._pos
        self._pos = i + 9
        p = self.params

        wx, wy, wz = state.angular_rate
        bgx, bgy, bgz = p.gyro_bias
        sg = p.gyro_noise_std
        gyro = (wx + bgx + sg * n[i], wy + bgy + sg * n[i + 1],
                wz + bgz + sg * n[i + 2])

        aw = state.accel_world
        f_world = (aw[0] - G_VEC[0], aw[1] - G_VEC[1], aw[2] - G_VEC[2])
        fx, fy, fz = quat_rotate_inverse(state.attitude, f_world)
        bax, bay, baz = p.accel_bias
        sa = p.accel_noise_std
        accel = (fx + bax + sa * n[i + 3], fy + bay + sa * n[i + 4],
                 fz + baz + sa * n[i + 5])

        mx, my, mz = quat_rotate_inverse(state.attitude, MAG_WORLD)
        sm = p.mag_noise_std
        mx += sm * n[i + 6]
        my += sm * n[i + 7]
        mz += sm * n[i + 8]
        norm = math.sqrt(mx * mx + my * my + mz * mz)
        if norm > 1e-9:
            mx, my, mz = mx / norm, my / norm, mz / norm
        mag = (mx, my, mz)

        return ImuSample(gyro=gyro, accel=accel, mag=mag, time=state.time)
