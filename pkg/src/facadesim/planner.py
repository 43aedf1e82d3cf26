"""Path planning: layered perimeter rings plus straight return legs.

The inspection path is an axis-aligned rectangular ring offset from the
building footprint, repeated at increasing altitudes, traversed
counter-clockwise from the point nearest home.  Every waypoint keeps the
camera pointed at the nearest point of the footprint, so a view ray cast
along the yaw always hits the building.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import Rect, Vec3, v_dist, wrap_angle
from .world import BuildingSpec


@dataclass(frozen=True)
class PlanParams:
    standoff: float = 3.0           # lateral distance ring-to-facade [m]
    buffer: float = 1.0             # avoidance mask inflation [m]
    layer_height: float = 3.0       # vertical spacing between rings [m]
    first_layer_alt: float = 1.5    # altitude of the lowest ring [m]
    waypoint_spacing: float = 2.0   # max gap between ring waypoints [m]

    def __post_init__(self) -> None:
        if self.standoff <= 0:
            raise ValueError("standoff must be positive")
        if self.buffer < 0:
            raise ValueError("buffer must be non-negative")
        if self.layer_height <= 0:
            raise ValueError("layer_height must be positive")
        if self.first_layer_alt <= 0:
            raise ValueError("first_layer_alt must be positive")
        if self.waypoint_spacing <= 0:
            raise ValueError("waypoint_spacing must be positive")


@dataclass(frozen=True)
class Waypoint:
    position: Vec3
    yaw: float
    layer: int   # ring index; -1 on the return-home leg


WaypointPath = tuple[Waypoint, ...]


def facing_yaw(footprint: Rect, x: float, y: float) -> float:
    """Yaw whose view ray from (x, y) hits the footprint."""
    nx, ny = footprint.nearest_point(x, y)
    if abs(nx - x) < 1e-12 and abs(ny - y) < 1e-12:
        # on or inside the footprint: face its center
        nx, ny = footprint.cx, footprint.cy
        if abs(nx - x) < 1e-12 and abs(ny - y) < 1e-12:
            return 0.0
    return math.atan2(ny - y, nx - x)


def layer_altitudes(building: BuildingSpec, params: PlanParams) -> list[float]:
    alts = []
    z = params.first_layer_alt
    while z < building.height:
        alts.append(z)
        z += params.layer_height
    return alts


def _ring_points(footprint: Rect, standoff: float,
                 spacing: float) -> list[tuple[float, float]]:
    """Counter-clockwise loop over the offset rectangle, corners included."""
    xmin = footprint.cx - footprint.hx - standoff
    xmax = footprint.cx + footprint.hx + standoff
    ymin = footprint.cy - footprint.hy - standoff
    ymax = footprint.cy + footprint.hy + standoff
    corners = [(xmax, ymin), (xmax, ymax), (xmin, ymax), (xmin, ymin)]
    pts: list[tuple[float, float]] = []
    for i in range(4):
        ax, ay = corners[i]
        bx, by = corners[(i + 1) % 4]
        edge_len = abs(bx - ax) + abs(by - ay)
        n_seg = max(1, math.ceil(edge_len / spacing - 1e-9))
        for k in range(n_seg):
            f = k / n_seg
            pts.append((ax + f * (bx - ax), ay + f * (by - ay)))
    return pts


def generate_perimeter_path(building: BuildingSpec, params: PlanParams,
                            home: Vec3) -> WaypointPath:
    """Entry climb, stacked rings with climbs between, return-home leg."""
    alts = layer_altitudes(building, params)
    if not alts:
        raise ValueError("building shorter than the first layer altitude")
    fp = building.footprint()
    ring = _ring_points(fp, params.standoff, params.waypoint_spacing)

    hx, hy = home[0], home[1]
    start = min(range(len(ring)),
                key=lambda i: (ring[i][0] - hx) ** 2 + (ring[i][1] - hy) ** 2)
    loop = ring[start:] + ring[:start]
    loop.append(loop[0])

    path: list[Waypoint] = []
    home_yaw = facing_yaw(fp, hx, hy)
    path.append(Waypoint((hx, hy, alts[0]), home_yaw, 0))
    # each closed loop ends where it began, so the hop to the next layer's
    # first waypoint is a vertical climb in place
    for k, z in enumerate(alts):
        for x, y in loop:
            path.append(Waypoint((x, y, z), facing_yaw(fp, x, y), k))
    z_top = alts[-1]
    path.append(Waypoint((hx, hy, z_top), home_yaw, -1))
    path.append(Waypoint((hx, hy, 0.0), home_yaw, -1))
    return tuple(path)


def avoidance_polygon(building: BuildingSpec, params: PlanParams) -> Rect:
    """Laser returns with hit points inside this rectangle are ignored."""
    return building.footprint().expanded(params.buffer)


def plan_return_path(start: Vec3, fault_position: Vec3,
                     fault_yaw: float) -> WaypointPath:
    """Climb to the fault altitude, then fly straight to the capture pose."""
    yaw = wrap_angle(fault_yaw)
    target = Waypoint(fault_position, yaw, -1)
    if v_dist(start, fault_position) < 1e-9:
        return (target,)
    climb = (start[0], start[1], fault_position[2])
    if v_dist(climb, fault_position) < 1e-9:
        return (Waypoint(climb, yaw, -1),)
    return (Waypoint(climb, yaw, -1), target)


def path_length(path: WaypointPath, start: Vec3 | None = None) -> float:
    total = 0.0
    prev = start
    for wp in path:
        if prev is not None:
            total += v_dist(prev, wp.position)
        prev = wp.position
    return total
