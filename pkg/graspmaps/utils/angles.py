from __future__ import annotations

import math

HALF_PI = math.pi / 2

# how far grasp_angle_to_degrees walks from degrees(theta), in ulps
DEGREE_SEARCH_ULPS = 64


def normalize_angle(theta: float) -> float:
    """Wrap a grasp angle into [-pi/2, pi/2). Grasps are pi-periodic."""
    if -HALF_PI <= theta < HALF_PI:
        return theta
    wrapped = math.fmod(theta + HALF_PI, math.pi)
    if wrapped < 0:
        wrapped += math.pi
    out = wrapped - HALF_PI
    # fmod/add can round up onto the open end
    if out >= HALF_PI:
        out -= math.pi
    return out


def normalize_degrees(theta_deg: float) -> float:
    """Wrap degrees into [-90, 90)."""
    if -90.0 <= theta_deg < 90.0:
        return theta_deg
    wrapped = math.fmod(theta_deg + 90.0, 180.0)
    if wrapped < 0:
        wrapped += 180.0
    out = wrapped - 90.0
    if out >= 90.0:
        out -= 180.0
    return out


def degrees_to_grasp_angle(theta_deg: float) -> float:
    """
    Degrees are wrapped before conversion, so every parsed angle is
    radians() of some in-range float and grasp_angle_to_degrees can find it again.
    """
    return normalize_angle(math.radians(normalize_degrees(theta_deg)))


def grasp_angle_to_degrees(theta: float) -> float:
    """
    A degree value that degrees_to_grasp_angle maps back to exactly `theta`.
    Walks outward from math.degrees(theta) one ulp at a time; angles that no
    float in reach converts to exactly (only possible for angles not read from
    degrees) fall back to math.degrees(theta).
    """
    start = math.degrees(theta)
    if degrees_to_grasp_angle(start) == theta:
        return start
    up = down = start
    for _ in range(DEGREE_SEARCH_ULPS):
        up = math.nextafter(up, math.inf)
        if degrees_to_grasp_angle(up) == theta:
            return up
        down = math.nextafter(down, -math.inf)
        if degrees_to_grasp_angle(down) == theta:
            return down
    return start
