import math

import pytest

from discplan.geometry import Point, Polygon


def square(side: float, origin=(0.0, 0.0)) -> Polygon:
    x0, y0 = origin
    return Polygon((Point(x0, y0), Point(x0 + side, y0),
                    Point(x0 + side, y0 + side), Point(x0, y0 + side)))


def l_shape() -> Polygon:
    """L with a single reflex vertex at (6, 4)."""
    return Polygon((Point(0, 0), Point(10, 0), Point(10, 4), Point(6, 4),
                    Point(6, 10), Point(0, 10)))


def dumbbell(width: float, bulb: float = 6.0, corridor_len: float = 4.0) -> Polygon:
    """Two square bulbs joined by a corridor of the given width."""
    lo = bulb / 2 - width / 2
    hi = bulb / 2 + width / 2
    xr = bulb + corridor_len
    return Polygon((
        Point(0, 0), Point(bulb, 0), Point(bulb, lo), Point(xr, lo),
        Point(xr, 0), Point(xr + bulb, 0), Point(xr + bulb, bulb),
        Point(xr, bulb), Point(xr, hi), Point(bulb, hi), Point(bulb, bulb),
        Point(0, bulb),
    ))


def slot_scene_polygon() -> Polygon:
    """Two chambers joined by a slot too narrow to pass but short enough
    that collision discs reach through it."""
    return Polygon((
        Point(-7, -3.5), Point(0, -3.5), Point(0, -0.75), Point(0.2, -0.75),
        Point(0.2, -3.5), Point(7.2, -3.5), Point(7.2, 3.5), Point(0.2, 3.5),
        Point(0.2, 0.75), Point(0, 0.75), Point(0, 3.5), Point(-7, 3.5),
    ))


@pytest.fixture(scope="session")
def square6() -> Polygon:
    return square(6.0)


@pytest.fixture(scope="session")
def lshape() -> Polygon:
    return l_shape()


@pytest.fixture(scope="session")
def dumbbell_narrow() -> Polygon:
    return dumbbell(1.9)


@pytest.fixture(scope="session")
def dumbbell_wide() -> Polygon:
    return dumbbell(2.5)
