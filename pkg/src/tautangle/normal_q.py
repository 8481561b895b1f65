"""
Normal surface coordinates, matching equations and the Euler functional.

Standard coordinates hold 7 numbers per tetrahedron: four triangles
(indexed by the vertex they cut off) then three quadrilaterals.  Quad
``(t, p)`` is the quadrilateral disjoint from both edges of pair ``p``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from math import gcd
from typing import Sequence

from .exact_arith import RatMatrix, format_rational, to_rational
from .triangulation import EDGES, PAIRS, Triangulation, pair_of


@dataclass(frozen=True)
class NormalVector:
    """A formal normal class: entries may be negative or fractional."""

    tri: tuple[Fraction, ...]
    quad: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.tri) % 4 or len(self.quad) % 3 or len(self.tri) // 4 != len(self.quad) // 3:
            raise ValueError("need 4 triangle and 3 quad coordinates per tetrahedron")

    @property
    def k(self) -> int:
        return len(self.quad) // 3

    @classmethod
    def zero(cls, k: int) -> NormalVector:
        return cls((Fraction(0),) * (4 * k), (Fraction(0),) * (3 * k))

    @classmethod
    def from_standard(cls, coords: Sequence) -> NormalVector:
        if len(coords) % 7:
            raise ValueError("standard coordinates come in blocks of 7")
        k = len(coords) // 7
        vals = [to_rational(x) for x in coords]
        return cls(
            tuple(vals[7 * t + v] for t in range(k) for v in range(4)),
            tuple(vals[7 * t + 4 + p] for t in range(k) for p in range(3)),
        )

    def standard(self) -> list[Fraction]:
        out = []
        for t in range(self.k):
            out.extend(self.tri[4 * t:4 * t + 4])
            out.extend(self.quad[3 * t:3 * t + 3])
        return out

    def q_vector(self) -> tuple[Fraction, ...]:
        return self.quad

    def __add__(self, other: NormalVector) -> NormalVector:
        return NormalVector(
            tuple(a + b for a, b in zip(self.tri, other.tri)),
            tuple(a + b for a, b in zip(self.quad, other.quad)),
        )

    def scale(self, c) -> NormalVector:
        c = to_rational(c)
        return NormalVector(tuple(c * a for a in self.tri), tuple(c * a for a in self.quad))

    def __neg__(self) -> NormalVector:
        return self.scale(-1)

    def to_json(self) -> dict:
        k = self.k
        return {
            "tri": [[format_rational(x) for x in self.tri[4 * t:4 * t + 4]] for t in range(k)],
            "quad": [[format_rational(x) for x in self.quad[3 * t:3 * t + 3]] for t in range(k)],
        }

    @classmethod
    def from_json(cls, data: dict) -> NormalVector:
        try:
            tri = [to_rational(x) for row in data["tri"] for x in _row(row, 4)]
            quad = [to_rational(x) for row in data["quad"] for x in _row(row, 3)]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed normal vector JSON: {exc}") from exc
        return cls(tuple(tri), tuple(quad))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))


def _row(row, n):
    if not isinstance(row, list) or len(row) != n:
        raise ValueError(f"expected a row of {n} entries, got {row!r}")
    return row


def tri_index(t: int, v: int) -> int:
    return 7 * t + v


def quad_index(t: int, p: int) -> int:
    return 7 * t + 4 + p


@lru_cache(maxsize=512)
def matching_matrix(T: Triangulation) -> RatMatrix:
    """The 6k × 7k matching equations in standard coordinates.

    One row per glued face pair and per arc type, the arc type named by the
    face vertex it cuts off.  Columns follow :meth:`NormalVector.standard`.
    """
    rows = []
    for t, f in T.faces():
        u, g, p = T.gluing(t, f)
        for v in range(4):
            if v == f:
                continue
            row = [0] * (7 * T.k)
            row[tri_index(t, v)] += 1
            row[quad_index(t, pair_of(v, f))] += 1
            row[tri_index(u, p(v))] -= 1
            row[quad_index(u, pair_of(p(v), g))] -= 1
            rows.append(row)
    return RatMatrix.from_rows(rows, 7 * T.k)


def is_in_kernel(T: Triangulation, v: NormalVector) -> bool:
    return all(x == 0 for x in matching_matrix(T).matvec(v.standard()))


@dataclass(frozen=True)
class CanonicalBasis:
    d: tuple[NormalVector, ...]
    e: tuple[NormalVector, ...]

    def vectors(self) -> list[NormalVector]:
        return [*self.d, *self.e]

    def combine(self, n: Sequence, m: Sequence) -> NormalVector:
        """``Σ n_i d_i + Σ m_j e_j``."""
        k = len(self.d)
        if len(n) != k or len(m) != len(self.e):
            raise ValueError("coefficient vectors have the wrong length")
        tri = [Fraction(0)] * (4 * k)
        quad = [Fraction(0)] * (3 * k)
        for c, vec in zip([*n, *m], self.vectors()):
            c = to_rational(c)
            if not c:
                continue
            for i, x in enumerate(vec.tri):
                if x:
                    tri[i] += c * x
            for i, x in enumerate(vec.quad):
                if x:
                    quad[i] += c * x
        return NormalVector(tuple(tri), tuple(quad))


@lru_cache(maxsize=512)
def canonical_basis(T: Triangulation) -> CanonicalBasis:
    """Tetrahedral solutions ``d_i`` and edge solutions ``e_E``.

    Coefficients accumulate per edge slot, so a tetrahedron meeting an edge
    class several times contributes several times.
    """
    k = T.k
    d = []
    for i in range(k):
        tri = [Fraction(0)] * (4 * k)
        quad = [Fraction(0)] * (3 * k)
        for v in range(4):
            tri[4 * i + v] = Fraction(-1)
        for p in range(3):
            quad[3 * i + p] = Fraction(1)
        d.append(NormalVector(tuple(tri), tuple(quad)))
    e = []
    for ec in T.edge_classes:
        tri = [Fraction(0)] * (4 * k)
        quad = [Fraction(0)] * (3 * k)
        for t, (a, b) in ec.slots:
            quad[3 * t + pair_of(a, b)] += 1
            tri[4 * t + a] -= 1
            tri[4 * t + b] -= 1
        e.append(NormalVector(tuple(tri), tuple(quad)))
    return CanonicalBasis(tuple(d), tuple(e))


def _inv_degrees(T: Triangulation) -> list[list[Fraction]]:
    """``1/deg`` for each of the six edge slots of each tetrahedron."""
    degs = [ec.degree for ec in T.edge_classes]
    return [[Fraction(1, degs[T.edge_index(t, a, b)]) for a, b in EDGES] for t in range(T.k)]


def disk_euler_weights(T: Triangulation) -> tuple[list[Fraction], list[Fraction]]:
    """Euler contribution of each normal triangle and each quadrilateral.

    Triangle at vertex v: ``Σ 1/deg`` over its three edges minus 1/2.
    Quadrilateral: ``Σ 1/deg`` over the four edges it meets minus 1.
    """
    inv = _inv_degrees(T)
    tri_w = []
    quad_w = []
    for t in range(T.k):
        row = inv[t]
        for v in range(4):
            tri_w.append(sum((row[i] for i, e in enumerate(EDGES) if v in e), Fraction(0)) - Fraction(1, 2))
        for p in range(3):
            quad_w.append(sum((row[i] for i, e in enumerate(EDGES) if e not in PAIRS[p]), Fraction(0)) - 1)
    return tri_w, quad_w


def chi_star(T: Triangulation, v: NormalVector) -> Fraction:
    """The linear Euler functional χ* evaluated on a (formal) normal class."""
    if v.k != T.k:
        raise ValueError("vector and triangulation disagree on k")
    tri_w, quad_w = disk_euler_weights(T)
    total = Fraction(0)
    for x, w in zip(v.tri, tri_w):
        if x:
            total += x * w
    for x, w in zip(v.quad, quad_w):
        if x:
            total += x * w
    return total


def chi_angles(T: Triangulation, v: NormalVector, angles: Sequence[Fraction]) -> Fraction:
    """Gauss–Bonnet evaluation of χ* from dihedral angles (units of π).

    Each normal disk contributes ``(corner-angle sum − (sides − 2)) / 2``.
    Agrees with :func:`chi_star` on the matching kernel whenever ``angles``
    solves the angle equations; other assignments are rejected.
    """
    from .angle_solver import build_system

    angles = [to_rational(a) for a in angles]
    S = build_system(T)
    if len(angles) != 3 * T.k or S.A.matvec(angles) != list(S.b):
        raise ValueError("angle assignment does not satisfy the angle equations")
    total = Fraction(0)
    for t in range(T.k):
        a = angles[3 * t:3 * t + 3]
        for w in range(4):
            x = v.tri[4 * t + w]
            if x:
                corner = sum((a[pair_of(w, o)] for o in range(4) if o != w), Fraction(0))
                total += x * (corner - 1) / 2
        for p in range(3):
            x = v.quad[3 * t + p]
            if x:
                corner = sum((a[pair_of(*e)] for e in EDGES if e not in PAIRS[p]), Fraction(0))
                total += x * (corner - 2) / 2
    return total


@dataclass(frozen=True)
class AlmostNormalPieces:
    copies: int
    gon_sides: int


def almost_normal_pieces(p: int, q: int) -> AlmostNormalPieces:
    """Resolve ``p`` and ``q`` crossing π-quads of one tetrahedron.

    Coprime counts give a single ``4(p+q-1)``-gon; otherwise ``gcd(p, q)``
    copies of the reduced polygon.  A single quad type stays a quad, and
    ``(1, 1)`` resolves to one quadrilateral with all corner angles zero.
    """
    if p < 0 or q < 0:
        raise ValueError("counts must be non-negative")
    if p == 0 and q == 0:
        raise ValueError("need at least one quadrilateral")
    if p == 0 or q == 0:
        return AlmostNormalPieces(p + q, 4)
    n = gcd(p, q)
    return AlmostNormalPieces(n, 4 * (p // n + q // n - 1))
