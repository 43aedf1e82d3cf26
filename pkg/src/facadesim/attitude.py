"""Complementary attitude filter.

Gyro integration gives smooth short-term attitude but drifts; accelerometer
tilt and tilt-compensated magnetometer heading are noisy but drift-free.  Each
Euler angle is blended per step with weight alpha on the gyro path.  When a
reference direction is unobservable (near free-fall, or magnetic field nearly
vertical) that angle falls back to pure gyro for the step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import GravityUnobservable, MagneticDegeneracy
from .geometry import Quat, Vec3, euler_from_quat, quat_from_euler, wrap_angle
from .sensors import ImuSample
from .vehicle import GRAVITY


@dataclass(frozen=True)
class ComplementaryGain:
    alpha: float = 0.98

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")


@dataclass(frozen=True)
class AttitudeEstimate:
    roll: float
    pitch: float
    yaw: float
    quat: Quat
    time: float

    @staticmethod
    def level(yaw: float = 0.0, time: float = 0.0) -> "AttitudeEstimate":
        yaw = wrap_angle(yaw)
        return AttitudeEstimate(0.0, 0.0, yaw, quat_from_euler(0.0, 0.0, yaw),
                                time)


def accel_roll_pitch(accel: Vec3) -> tuple[float, float]:
    """Tilt from specific force; valid only when gravity dominates."""
    ax, ay, az = accel
    if math.sqrt(ax * ax + ay * ay + az * az) <= 0.1 * GRAVITY:
        raise GravityUnobservable(
            "specific force too small to indicate the vertical")
    roll = math.atan2(ay, az)
    pitch = math.atan2(-ax, math.sqrt(ay * ay + az * az))
    return roll, pitch


def mag_yaw(mag: Vec3, roll: float, pitch: float) -> float:
    """Heading from the field direction after undoing roll and pitch."""
    mx, my, mz = mag
    sr, cr = math.sin(roll), math.cos(roll)
    sp, cp = math.sin(pitch), math.cos(pitch)
    # m' = Ry(pitch) * Rx(roll) * m leaves only the -yaw rotation applied
    hx = cp * mx + sp * sr * my + sp * cr * mz
    hy = cr * my - sr * mz
    if math.sqrt(hx * hx + hy * hy) < 1e-6:
        raise MagneticDegeneracy("field has no horizontal component here")
    return math.atan2(-hy, hx)


def _gyro_euler_rates(gyro: Vec3, roll: float, pitch: float) -> Vec3:
    p, q, r = gyro
    sr, cr = math.sin(roll), math.cos(roll)
    sp, cp = math.sin(pitch), math.cos(pitch)
    if abs(cp) < 1e-9:  # gimbal lock: yaw/roll rates undefined
        cp = 1e-9 if cp >= 0.0 else -1e-9
    tp = sp / cp
    droll = p + (q * sr + r * cr) * tp
    dpitch = q * cr - r * sr
    dyaw = (q * sr + r * cr) / cp
    return droll, dpitch, dyaw


def _blend(gyro_angle: float, meas_angle: float, alpha: float) -> float:
    return wrap_angle(gyro_angle +
                      (1.0 - alpha) * wrap_angle(meas_angle - gyro_angle))


def complementary_step(prev: AttitudeEstimate, imu: ImuSample,
                       gain: ComplementaryGain, dt: float) -> AttitudeEstimate:
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    droll, dpitch, dyaw = _gyro_euler_rates(imu.gyro, prev.roll, prev.pitch)
    g_roll = wrap_angle(prev.roll + droll * dt)
    g_pitch = prev.pitch + dpitch * dt
    g_yaw = wrap_angle(prev.yaw + dyaw * dt)

    alpha_rp = gain.alpha
    try:
        m_roll, m_pitch = accel_roll_pitch(imu.accel)
    except GravityUnobservable:
        m_roll, m_pitch = g_roll, g_pitch
        alpha_rp = 1.0

    alpha_y = gain.alpha
    try:
        m_yaw = mag_yaw(imu.mag, m_roll, m_pitch)
    except MagneticDegeneracy:
        m_yaw = g_yaw
        alpha_y = 1.0

    roll = _blend(g_roll, m_roll, alpha_rp)
    pitch = _blend(g_pitch, m_pitch, alpha_rp)
    yaw = _blend(g_yaw, m_yaw, alpha_y)

    quat = quat_from_euler(roll, pitch, yaw)
    roll, pitch, yaw = euler_from_quat(quat)  # canonical ranges
    return AttitudeEstimate(roll, pitch, yaw, quat, prev.time + dt)
