"""Point sets in F_{q^2} x F_{q^2} and spreads of V(4, q)."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import FieldMismatch, PreconditionViolated
from .gfcore import FieldTable, field_from_descriptor


def half_order(field: FieldTable) -> int:
    """q for the field F_{q^2}."""
    if field.s % 2:
        raise PreconditionViolated(f"F_{field.order} is not a quadratic extension")
    return field.p ** (field.s // 2)


class PointSet:
    """A subset of F_{q^2} x F_{q^2} stored as a (q^2, q^2) membership table.

    Row index is the code of the first coordinate, column index the code of
    the second.
    """

    def __init__(self, field: FieldTable, bits: np.ndarray):
        half_order(field)
        bits = np.asarray(bits, dtype=bool)
        if bits.shape != (field.order, field.order):
            raise ValueError(f"bit table must be {field.order}x{field.order}")
        self.field = field
        self.bits = bits
        self.bits.setflags(write=False)

    @classmethod
    def empty(cls, field: FieldTable) -> "PointSet":
        return cls(field, np.zeros((field.order, field.order), dtype=bool))

    @classmethod
    def from_codes(cls, field: FieldTable, xs, ys) -> "PointSet":
        bits = np.zeros((field.order, field.order), dtype=bool)
        bits[np.asarray(xs, dtype=np.int64).ravel(), np.asarray(ys, dtype=np.int64).ravel()] = True
        return cls(field, bits)

    @classmethod
    def full_nonzero(cls, field: FieldTable) -> "PointSet":
        bits = np.ones((field.order, field.order), dtype=bool)
        bits[0, 0] = False
        return cls(field, bits)

    @property
    def card(self) -> int:
        return int(self.bits.sum())

    def __len__(self) -> int:
        return self.card

    def points(self) -> np.ndarray:
        """(card, 2) array of (code_x, code_y), lexicographically sorted."""
        return np.argwhere(self.bits)

    def __contains__(self, pt) -> bool:
        x, y = pt
        return bool(self.bits[int(x), int(y)])

    def _same(self, other: "PointSet") -> None:
        if self.field != other.field:
            raise FieldMismatch("point sets live over different fields")

    def __or__(self, other: "PointSet") -> "PointSet":
        self._same(other)
        return PointSet(self.field, self.bits | other.bits)

    def __and__(self, other: "PointSet") -> "PointSet":
        self._same(other)
        return PointSet(self.field, self.bits & other.bits)

    def __sub__(self, other: "PointSet") -> "PointSet":
        self._same(other)
        return PointSet(self.field, self.bits & ~other.bits)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PointSet)
            and self.field == other.field
            and bool(np.array_equal(self.bits, other.bits))
        )

    def __hash__(self):
        return hash((self.field, self.bits.tobytes()))

    def isdisjoint(self, other: "PointSet") -> bool:
        self._same(other)
        return not np.any(self.bits & other.bits)

    def with_origin(self) -> "PointSet":
        bits = self.bits.copy()
        bits[0, 0] = True
        return PointSet(self.field, bits)

    def flipped(self, x: int, y: int) -> "PointSet":
        bits = self.bits.copy()
        bits[x, y] = not bits[x, y]
        return PointSet(self.field, bits)

    def image(self, fx, fy) -> "PointSet":
        """Image under (x, y) -> (fx(x), fy(y)) for code maps fx, fy (arrays or callables)."""
        pts = self.points()
        xs = fx(pts[:, 0]) if callable(fx) else np.asarray(fx)[pts[:, 0]]
        ys = fy(pts[:, 1]) if callable(fy) else np.asarray(fy)[pts[:, 1]]
        return PointSet.from_codes(self.field, xs, ys)

    def scaled(self, lam: int) -> "PointSet":
        f = self.field
        return self.image(lambda u: f.mul(u, lam), lambda u: f.mul(u, lam))

    def is_fq_closed(self) -> bool:
        """True iff lambda * E = E for every lambda in F_q^*."""
        f = self.field
        q = half_order(f)
        # F_q^* is generated by omega^(q+1)
        return self.scaled(int(f.elem(q + 1))) == self

    def to_dict(self, construction: str = "", params: dict | None = None) -> dict:
        return {
            "field": self.field.descriptor(),
            "construction": construction,
            "params": params or {},
            "card": self.card,
            "points": self.points().tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PointSet":
        field = field_from_descriptor(d["field"])
        pts = np.asarray(d["points"], dtype=np.int64).reshape(-1, 2)
        ps = cls.from_codes(field, pts[:, 0], pts[:, 1])
        if "card" in d and int(d["card"]) != ps.card:
            raise ValueError(f"card {d['card']} does not match {ps.card} listed points")
        return ps

    def __repr__(self):
        return f"PointSet(q^2={self.field.order}, card={self.card})"


INFINITY = None


@dataclass
class Spread:
    """q^2 + 1 two-dimensional F_q-subspaces given by slopes.

    ``kind`` is ``"slope"`` (K_y = {(x, x y)}) or ``"twisted"``
    (K_y = {(x, y x^q)}); the slope ``None`` denotes K_inf = {(0, x)}.
    """

    field: FieldTable
    kind: str
    slopes: list = dc_field(default_factory=list)

    def __post_init__(self):
        if self.kind not in ("slope", "twisted"):
            raise ValueError(f"unknown spread kind {self.kind!r}")
        if not self.slopes:
            self.slopes = list(range(self.field.order)) + [INFINITY]

    def member(self, y) -> PointSet:
        f = self.field
        xs = np.arange(f.order, dtype=np.int64)
        if y is INFINITY:
            return PointSet.from_codes(f, np.zeros_like(xs), xs)
        if self.kind == "slope":
            return PointSet.from_codes(f, xs, f.mul(xs, y))
        q = half_order(f)
        return PointSet.from_codes(f, xs, f.mul(f.power(xs, q), y))

    def members(self) -> list[PointSet]:
        return [self.member(y) for y in self.slopes]

    def union(self, slopes) -> PointSet:
        bits = np.zeros((self.field.order, self.field.order), dtype=bool)
        for y in slopes:
            bits |= self.member(y).bits
        return PointSet(self.field, bits)

    def to_dict(self, half_assignment=None) -> dict:
        d = {"field": self.field.descriptor(), "kind": self.kind, "slopes": list(self.slopes)}
        if half_assignment is not None:
            d["half_assignment"] = [list(h) for h in half_assignment]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Spread":
        field = field_from_descriptor(d["field"])
        slopes = [None if y is None else int(y) for y in d["slopes"]]
        return cls(field, d["kind"], slopes)


@dataclass
class Bundle:
    """Four candidate sets, a spread, and the split of the spread into halves.

    ``halves[0]`` should cover C0 u C2 u {0}, ``halves[1]`` C1 u C3 u {0}.
    """

    sets: tuple
    spread: Spread
    halves: tuple
    construction: str = ""
    params: dict = dc_field(default_factory=dict)

    def __iter__(self):
        return iter((*self.sets, self.spread))
