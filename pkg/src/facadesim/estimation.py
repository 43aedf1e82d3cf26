"""Position estimation from two IMUs, no external position fix.

Each world axis runs an independent 3-state Kalman filter over
[position, velocity, acceleration].  Both IMUs measure only the acceleration
component (H rows [0,0,1]), so position is observable solely through the
kinematic coupling in F: drift is bounded by the filter but not eliminated.
A naive dead-reckoning pipeline (raw gyro attitude, double-integrated
acceleration) is kept alongside as the uncorrected baseline.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .attitude import AttitudeEstimate, ComplementaryGain, complementary_step
from .errors import InvalidScenario
from .geometry import (
    Quat,
    Vec3,
    quat_from_rotvec,
    quat_multiply,
    quat_normalize,
    quat_rotate,
)
from .sensors import ImuSample
from .vehicle import G_VEC

Mat3 = tuple[Vec3, Vec3, Vec3]


def diag3(a: float, b: float, c: float) -> Mat3:
    return ((a, 0.0, 0.0), (0.0, b, 0.0), (0.0, 0.0, c))


def _check_symmetric(m, name: str, tol: float = 1e-9) -> None:
    n = len(m)
    for i in range(n):
        if len(m[i]) != n:
            raise ValueError(f"{name} must be {n}x{n}")
        if m[i][i] < 0.0:
            raise ValueError(f"{name} diagonal must be non-negative")
        for j in range(i):
            if abs(m[i][j] - m[j][i]) > tol:
                raise ValueError(f"{name} must be symmetric")


@dataclass(frozen=True)
class KalmanConfig:
    """Per-axis filter tuning; shared by all three world axes."""

    Q: Mat3 = field(default_factory=lambda: diag3(1e-6, 1e-4, 1e-2))
    R: tuple[tuple[float, float], tuple[float, float]] = ((0.0025, 0.0),
                                                          (0.0, 0.0025))
    x0: Vec3 = (0.0, 0.0, 0.0)
    P0: Mat3 = field(default_factory=lambda: diag3(1e-4, 1e-4, 1e-2))

    def __post_init__(self) -> None:
        _check_symmetric(self.Q, "Q")
        _check_symmetric(self.R, "R")
        _check_symmetric(self.P0, "P0")

    @staticmethod
    def for_accel_noise(accel_noise_std: float) -> "KalmanConfig":
        r = max(accel_noise_std, 1e-6) ** 2
        return KalmanConfig(R=((r, 0.0), (0.0, r)))


@dataclass(frozen=True)
class KalmanState:
    x: Vec3   # [position, velocity, acceleration] on one world axis
    P: Mat3
    time: float = 0.0


def world_accel(imu: ImuSample, att: AttitudeEstimate) -> Vec3:
    """Specific force rotated to world with gravity added back."""
    ax, ay, az = quat_rotate(att.quat, imu.accel)
    return (ax + G_VEC[0], ay + G_VEC[1], az + G_VEC[2])


def kalman_predict(state: KalmanState, cfg: KalmanConfig,
                   dt: float) -> KalmanState:
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    d = dt
    h = 0.5 * dt * dt
    x0, x1, x2 = state.x
    x = (x0 + d * x1 + h * x2, x1 + d * x2, x2)

    r0, r1, r2 = state.P
    # A = F P, then P' = A F^T + Q, expanded for F = [[1,d,h],[0,1,d],[0,0,1]]
    a0 = (r0[0] + d * r1[0] + h * r2[0],
          r0[1] + d * r1[1] + h * r2[1],
          r0[2] + d * r1[2] + h * r2[2])
    a1 = (r1[0] + d * r2[0], r1[1] + d * r2[1], r1[2] + d * r2[2])
    a2 = r2
    q0, q1, q2 = cfg.Q
    p = tuple(
        (a[0] + d * a[1] + h * a[2] + q[0],
         a[1] + d * a[2] + q[1],
         a[2] + q[2])
        for a, q in ((a0, q0), (a1, q1), (a2, q2)))
    return KalmanState(x=x, P=p, time=state.time + dt)


def kalman_update(state: KalmanState, z: tuple[float, float],
                  cfg: KalmanConfig) -> KalmanState:
    """Fuse the two accelerometer readings for this axis."""
    p = state.P
    p22 = p[2][2]
    r = cfg.R
    s00 = p22 + r[0][0]
    s01 = p22 + r[0][1]
    s10 = p22 + r[1][0]
    s11 = p22 + r[1][1]
    det = s00 * s11 - s01 * s10
    if abs(det) < 1e-30:
        raise InvalidScenario("measurement covariance is singular; "
                              "R must make H P H^T + R invertible")
    # column sums of S^-1; K[i][j] = P[i][2] * c[j]
    c0 = (s11 - s10) / det
    c1 = (s00 - s01) / det

    x0, x1, x2 = state.x
    y0 = z[0] - x2
    y1 = z[1] - x2
    u = c0 * y0 + c1 * y1
    x = (x0 + p[0][2] * u, x1 + p[1][2] * u, x2 + p[2][2] * u)

    # (I - K H) P = P - kappa (x) P[2,:], kappa_i = K[i][0] + K[i][1]
    cc = c0 + c1
    k0 = p[0][2] * cc
    k1 = p[1][2] * cc
    k2 = p[2][2] * cc
    row2 = p[2]
    raw = tuple(
        (p[i][0] - k * row2[0], p[i][1] - k * row2[1], p[i][2] - k * row2[2])
        for i, k in ((0, k0), (1, k1), (2, k2)))
    sym = tuple(
        tuple(0.5 * (raw[i][j] + raw[j][i]) for j in range(3))
        for i in range(3))
    return KalmanState(x=x, P=sym, time=state.time)


def dead_reckon(accel_stream, dt: float) -> list[Vec3]:
    """Trapezoidal double integration of world accelerations from the origin."""
    stream = list(accel_stream)
    if not stream:
        raise ValueError("accel_stream must be nonempty")
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    trace = [(0.0, 0.0, 0.0)]
    vx = vy = vz = 0.0
    px = py = pz = 0.0
    prev = stream[0]
    for a in stream[1:]:
        nvx = vx + 0.5 * (prev[0] + a[0]) * dt
        nvy = vy + 0.5 * (prev[1] + a[1]) * dt
        nvz = vz + 0.5 * (prev[2] + a[2]) * dt
        px += 0.5 * (vx + nvx) * dt
        py += 0.5 * (vy + nvy) * dt
        pz += 0.5 * (vz + nvz) * dt
        vx, vy, vz = nvx, nvy, nvz
        trace.append((px, py, pz))
        prev = a
    return trace


@dataclass(frozen=True)
class EstimatedState:
    position: Vec3
    velocity: Vec3
    attitude: AttitudeEstimate
    time: float


class InertialEstimator:
    """Complementary attitude + three per-axis Kalman filters.

    Attitude comes from IMU 1 alone; both IMUs contribute world-frame
    acceleration measurements to every axis filter.
    """

    def __init__(self, cfg: KalmanConfig, gain: ComplementaryGain,
                 initial_position: Vec3, initial_yaw: float = 0.0,
                 dt: float = 0.01):
        if dt <= 0.0:
            raise ValueError(f"dt must be positive, got {dt}")
        self.cfg = cfg
        self.gain = gain
        self.dt = dt
        self.attitude = AttitudeEstimate.level(initial_yaw)
        self.axes = [
            KalmanState(x=(initial_position[i] + cfg.x0[0], cfg.x0[1],
                           cfg.x0[2]), P=cfg.P0)
            for i in range(3)
        ]

    def step(self, imu1: ImuSample, imu2: ImuSample) -> EstimatedState:
        self.attitude = complementary_step(self.attitude, imu1, self.gain,
                                           self.dt)
        a1 = world_accel(imu1, self.attitude)
        a2 = world_accel(imu2, self.attitude)
        for i in range(3):
            st = kalman_predict(self.axes[i], self.cfg, self.dt)
            self.axes[i] = kalman_update(st, (a1[i], a2[i]), self.cfg)
        return self.state()

    def state(self) -> EstimatedState:
        ax, ay, az = self.axes
        return EstimatedState(
            position=(ax.x[0], ay.x[0], az.x[0]),
            velocity=(ax.x[1], ay.x[1], az.x[1]),
            attitude=self.attitude,
            time=self.attitude.time,
        )


class DeadReckoner:
    """Uncorrected baseline: raw gyro attitude, double-integrated accel."""

    def __init__(self, initial_position: Vec3, initial_attitude: Quat,
                 dt: float = 0.01):
        if dt <= 0.0:
            raise ValueError(f"dt must be positive, got {dt}")
        self.dt = dt
        self.quat = initial_attitude
        self.position = initial_position
        self.velocity: Vec3 = (0.0, 0.0, 0.0)
        self._prev_accel: Vec3 | None = None

    def step(self, imu: ImuSample) -> Vec3:
        gx, gy, gz = imu.gyro
        dq = quat_from_rotvec((gx * self.dt, gy * self.dt, gz * self.dt))
        self.quat = quat_normalize(quat_multiply(self.quat, dq))
        fx, fy, fz = quat_rotate(self.quat, imu.accel)
        a = (fx + G_VEC[0], fy + G_VEC[1], fz + G_VEC[2])
        prev = self._prev_accel
        if prev is None:
            self._prev_accel = a
            return self.position
        vx = self.velocity[0] + 0.5 * (prev[0] + a[0]) * self.dt
        vy = self.velocity[1] + 0.5 * (prev[1] + a[1]) * self.dt
        vz = self.velocity[2] + 0.5 * (prev[2] + a[2]) * self.dt
        self.position = (
            self.position[0] + 0.5 * (self.velocity[0] + vx) * self.dt,
            self.position[1] + 0.5 * (self.velocity[1] + vy) * self.dt,
            self.position[2] + 0.5 * (self.velocity[2] + vz) * self.dt,
        )
        self.velocity = (vx, vy, vz)
        self._prev_accel = a
        return self.position
