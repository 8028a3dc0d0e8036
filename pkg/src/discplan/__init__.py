"""Motion planning for unlabeled unit-disc robots in a simple polygon."""

from .geometry import Arc, Point, Polygon, Segment

__all__ = ["Arc", "Point", "Polygon", "Segment"]
