"""Constructive open regions of R^n with exact membership.

A region is a tree of primitives (:class:`Ball`, :class:`PointObstacle`,
:class:`HalfSpace`, :class:`All`) and combinators (:class:`Union`,
:class:`Intersection`, :class:`Complement`) wrapped in a :class:`Region`
that carries the ambient dimension.  Balls are open and half-spaces are the
open sets ``{a.w > b}``; a :class:`PointObstacle` stands for the single point
itself, so the usual punctured space is ``Complement(PointObstacle(p))``.

JSON form::

    {"dimension": n, "region": <node>}

    <node> = {"all": true} | {"ball": {"center": [...], "radius": r}}
           | {"point": [...]} | {"halfspace": {"normal": [...], "offset": b}}
           | {"union": [<node>, ...]} | {"intersection": [<node>, ...]}
           | {"complement": <node>}
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class UnsupportedRegion(ValueError):
    """The region's complement is not a finite union of supported obstacles."""


@dataclass(frozen=True)
class Ball:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))
        if not self.radius > 0:
            raise ValueError("ball radius must be positive")

    def contains_many(self, W):
        d = W - self.center
        return np.sum(d * d, axis=-1) < self.radius ** 2


@dataclass(frozen=True)
class PointObstacle:
    location: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "location", np.asarray(self.location, dtype=float))

    def contains_many(self, W):
        return np.all(W == self.location, axis=-1)


@dataclass(frozen=True)
class HalfSpace:
    normal: np.ndarray
    offset: float

    def __post_init__(self):
        object.__setattr__(self, "normal", np.asarray(self.normal, dtype=float))
        if not np.any(self.normal != 0):
            raise ValueError("half-space normal must be nonzero")

    def contains_many(self, W):
        return W @ self.normal > self.offset


@dataclass(frozen=True)
class All:
    def contains_many(self, W):
        return np.ones(W.shape[:-1], dtype=bool)


@dataclass(frozen=True)
class Union:
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))

    def contains_many(self, W):
        out = np.zeros(W.shape[:-1], dtype=bool)
        for c in self.children:
            out |= c.contains_many(W)
        return out


@dataclass(frozen=True)
class Intersection:
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))

    def contains_many(self, W):
        out = np.ones(W.shape[:-1], dtype=bool)
        for c in self.children:
            out &= c.contains_many(W)
        return out


@dataclass(frozen=True)
class Complement:
    child: object

    def contains_many(self, W):
        return ~self.child.contains_many(W)


# Obstacles: closed pieces of R^n \ U.

@dataclass(frozen=True)
class ClosedBall:
    """Closed ball; radius 0 is a single point."""

    center: np.ndarray
    radius: float = 0.0


@dataclass(frozen=True)
class ClosedHalfSpace:
    """``{w : normal . w <= offset}``."""

    normal: np.ndarray
    offset: float


@dataclass(frozen=True)
class BallExterior:
    """``{w : |w - center| >= radius}``, the complement of an open ball."""

    center: np.ndarray
    radius: float


def _iter_vectors(node):
    if isinstance(node, Ball):
        yield node.center
    elif isinstance(node, PointObstacle):
        yield node.location
    elif isinstance(node, HalfSpace):
        yield node.normal
    elif isinstance(node, (Union, Intersection)):
        for c in node.children:
            yield from _iter_vectors(c)
    elif isinstance(node, Complement):
        yield from _iter_vectors(node.child)


@dataclass(frozen=True)
class Region:
    dimension: int
    root: object = field(default_factory=All)

    def __post_init__(self):
        if self.dimension < 2:
            raise ValueError("regions live in R^n with n >= 2")
        for v in _iter_vectors(self.root):
            if v.shape != (self.dimension,):
                raise ValueError(
                    f"primitive vector of length {v.size} in a region of dimension {self.dimension}"
                )

    def contains(self, w) -> bool:
        w = np.asarray(w, dtype=float)
        if w.shape != (self.dimension,):
            raise ValueError(f"expected a point of R^{self.dimension}")
        return bool(self.root.contains_many(w[None, :])[0])

    def contains_many(self, W) -> np.ndarray:
        W = np.asarray(W, dtype=float)
        return self.root.contains_many(W)

    def obstacles(self) -> list:
        """The complement as a list of closed obstacles.

        Raises :class:`UnsupportedRegion` when the complement is not a finite
        union of points, closed balls, closed half-spaces and ball exteriors.
        """
        return _complement_of(self.root)


def _complement_of(node) -> list:
    if isinstance(node, All):
        return []
    if isinstance(node, HalfSpace):
        return [ClosedHalfSpace(node.normal, float(node.offset))]
    if isinstance(node, Ball):
        return [BallExterior(node.center, float(node.radius))]
    if isinstance(node, Intersection):
        out = []
        for c in node.children:
            out.extend(_complement_of(c))
        return out
    if isinstance(node, Complement):
        return _closed_pieces(node.child)
    if isinstance(node, Union) and len(node.children) == 1:
        return _complement_of(node.children[0])
    raise UnsupportedRegion(
        f"cannot express the complement of {type(node).__name__} as a finite union of obstacles"
    )


def _closed_pieces(node) -> list:
    """``node`` itself (the obstacle set) as a finite union of closed pieces.

    An open ball removed from U leaves its closure as the obstacle, since U
    must be open.
    """
    if isinstance(node, PointObstacle):
        return [ClosedBall(node.location, 0.0)]
    if isinstance(node, Ball):
        return [ClosedBall(node.center, float(node.radius))]
    if isinstance(node, HalfSpace):
        # closure of {a.w > b} is {-a.w <= -b}
        return [ClosedHalfSpace(-node.normal, -float(node.offset))]
    if isinstance(node, Union):
        out = []
        for c in node.children:
            out.extend(_closed_pieces(c))
        return out
    if isinstance(node, Complement):
        return _complement_of(node.child)
    raise UnsupportedRegion(
        f"cannot express {type(node).__name__} as a finite union of closed obstacles"
    )


# JSON

def node_from_json(obj, dimension: int):
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ValueError(f"region node must be a single-key object, got {obj!r}")
    (key, val), = obj.items()
    if key == "all":
        return All()
    if key == "ball":
        return Ball(np.asarray(val["center"], dtype=float), float(val["radius"]))
    if key == "point":
        return PointObstacle(np.asarray(val, dtype=float))
    if key == "halfspace":
        return HalfSpace(np.asarray(val["normal"], dtype=float), float(val["offset"]))
    if key == "union":
        return Union(tuple(node_from_json(c, dimension) for c in val))
    if key == "intersection":
        return Intersection(tuple(node_from_json(c, dimension) for c in val))
    if key == "complement":
        return Complement(node_from_json(val, dimension))
    raise ValueError(f"unknown region node {key!r}")


def node_to_json(node):
    if isinstance(node, All):
        return {"all": True}
    if isinstance(node, Ball):
        return {"ball": {"center": node.center.tolist(), "radius": float(node.radius)}}
    if isinstance(node, PointObstacle):
        return {"point": node.location.tolist()}
    if isinstance(node, HalfSpace):
        return {"halfspace": {"normal": node.normal.tolist(), "offset": float(node.offset)}}
    if isinstance(node, Union):
        return {"union": [node_to_json(c) for c in node.children]}
    if isinstance(node, Intersection):
        return {"intersection": [node_to_json(c) for c in node.children]}
    if isinstance(node, Complement):
        return {"complement": node_to_json(node.child)}
    raise TypeError(f"not a region node: {node!r}")


def region_from_json(obj) -> Region:
    n = int(obj["dimension"])
    return Region(n, node_from_json(obj["region"], n))


def region_to_json(region: Region) -> dict:
    return {"dimension": region.dimension, "region": node_to_json(region.root)}


def punctured(n: int, *points) -> Region:
    """R^n minus finitely many points (the origin when none are given)."""
    pts = points or (np.zeros(n),)
    return Region(n, Intersection(tuple(Complement(PointObstacle(p)) for p in pts)))


def minus_balls(n: int, centers, radii) -> Region:
    return Region(
        n,
        Intersection(tuple(Complement(Ball(c, r)) for c, r in zip(centers, radii))),
    )
