"""Point types: sites of a model space, tree ends, and boundary cylinders.

Kept in their own module so that :mod:`pnaive.hypspace` and
:mod:`pnaive.models` can both use them without an import cycle.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Tuple

from .errors import DomainError, ModelMismatch


class Site:
    """A point of a model space.

    For tree models ``coords`` is the vertex address: the sequence of edge
    labels on the path from the basepoint. For the half-plane model it is a
    coordinate pair ``(x, y)`` with ``y > 0``.
    """

    __slots__ = ("model", "coords")

    def __init__(self, model, coords: Tuple[Any, ...]):
        self.model = model
        self.coords = tuple(coords)

    def _check(self, other: "Site"):
        if self.model.key != other.model.key:
            raise ModelMismatch(f"sites from {self.model.key} and {other.model.key}")

    def __eq__(self, other):
        if not isinstance(other, Site):
            return NotImplemented
        return self.model.key == other.model.key and self.coords == other.coords

    def __hash__(self):
        return hash((self.model.key, self.coords))

    def __len__(self):
        # depth below the basepoint (tree models)
        return len(self.coords)

    def __lt__(self, other):
        return (len(self.coords), self.model.letter_key_seq(self.coords)) < (
            len(other.coords),
            other.model.letter_key_seq(other.coords),
        )

    def __repr__(self):
        return f"Site({self.model.format_address(self.coords)})"


def _primitive(period: tuple) -> tuple:
    n = len(period)
    for d in range(1, n + 1):
        if n % d == 0 and period[:d] * (n // d) == period:
            return period[:d]
    return period


@dataclass(frozen=True)
class EndPoint:
    """An eventually periodic ray ``prefix . period . period ...`` from the basepoint.

    Instances are always canonical (shortest prefix, primitive period), so
    dataclass equality is equality of ends.
    """

    prefix: Tuple[Any, ...]
    period: Tuple[Any, ...]

    @classmethod
    def make(cls, prefix, period) -> "EndPoint":
        prefix, period = tuple(prefix), tuple(period)
        if not period:
            raise DomainError("an end needs a nonempty period")
        period = _primitive(period)
        while prefix and prefix[-1] == period[-1]:
            prefix = prefix[:-1]
            period = (period[-1],) + period[:-1]
        return cls(prefix, period)

    def head(self, depth: int) -> Tuple[Any, ...]:
        """First ``depth`` labels of the ray."""
        out = list(self.prefix[:depth])
        i = 0
        while len(out) < depth:
            out.append(self.period[i % len(self.period)])
            i += 1
        return tuple(out)

    def cylinder(self, depth: int) -> "Cylinder":
        return Cylinder(self.head(depth))


@dataclass(frozen=True, order=True)
class Cylinder:
    """The open set of ends whose ray starts with ``prefix``."""

    prefix: Tuple[Any, ...]

    @property
    def depth(self) -> int:
        return len(self.prefix)

    def __contains__(self, end: EndPoint) -> bool:
        return end.head(len(self.prefix)) == self.prefix

    def contains_cylinder(self, other: "Cylinder") -> bool:
        return other.prefix[: len(self.prefix)] == self.prefix

    def meets(self, other: "Cylinder") -> bool:
        return self.contains_cylinder(other) or other.contains_cylinder(self)
