"""
Layered ideal triangulations of once-punctured torus bundles.

The fibre is ℝ²∖ℤ² / ℤ².  A triangulation of it is recorded by a matrix
``P ∈ SL(2, ℤ)``: its edges are the slopes ``P·(1,0)``, ``P·(0,1)`` and
``P·(1,1)``, and its two triangles are ``P·{0, (1,0), (1,1)}`` and
``P·{0, (0,1), (1,1)}`` up to lattice translation.  Reading the word left
to right, letter ``R`` flips ``P·(0,1)`` to ``P·(2,1)`` and letter ``L``
flips ``P·(1,0)`` to ``P·(1,2)``; afterwards ``P`` is multiplied by the
letter, so the final triangulation is the image of the first one under the
monodromy and the top is glued to the bottom by it.

Every layered tetrahedron is labeled with its bottom diagonal ``{0, 1}``
and its top diagonal ``{2, 3}``, so the fibration taut structure puts π on
pair 0 everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .angle_solver import TautStructure, is_taut
from .triangulation import EdgeClass, Perm4, Triangulation

Matrix = tuple[tuple[int, int], tuple[int, int]]
Point = tuple[int, int]

R: Matrix = ((1, 1), (0, 1))
L: Matrix = ((1, 0), (1, 1))
IDENTITY: Matrix = ((1, 0), (0, 1))


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    return (
        (A[0][0] * B[0][0] + A[0][1] * B[1][0], A[0][0] * B[0][1] + A[0][1] * B[1][1]),
        (A[1][0] * B[0][0] + A[1][1] * B[1][0], A[1][0] * B[0][1] + A[1][1] * B[1][1]),
    )


def apply(A: Matrix, v: Point) -> Point:
    return (A[0][0] * v[0] + A[0][1] * v[1], A[1][0] * v[0] + A[1][1] * v[1])


@dataclass(frozen=True)
class MonodromyWord:
    letters: str
    insertions: tuple[int, ...] = ()

    def __post_init__(self):
        letters = self.letters.upper()
        if not letters:
            raise ValueError("monodromy word must be non-empty")
        if set(letters) - {"R", "L"}:
            raise ValueError(f"monodromy word may only use R and L, got {self.letters!r}")
        ins = tuple(sorted(int(i) for i in self.insertions))
        for i in ins:
            if not 0 <= i <= len(letters):
                raise ValueError(f"insertion position {i} outside 0..{len(letters)}")
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "insertions", ins)

    @classmethod
    def parse(cls, word: str, insertions: Iterable[int] = ()) -> MonodromyWord:
        return cls(word, tuple(insertions))


@dataclass(frozen=True)
class MonodromyInfo:
    matrix: Matrix
    trace: int

    @property
    def pseudo_anosov(self) -> bool:
        return abs(self.trace) > 2


def monodromy_matrix(word: MonodromyWord | str) -> MonodromyInfo:
    """Product of ``R = [[1,1],[0,1]]`` and ``L = [[1,0],[1,1]]`` along the word."""
    if isinstance(word, str):
        word = MonodromyWord(word)
    M = IDENTITY
    for ch in word.letters:
        M = mat_mul(M, R if ch == "R" else L)
    return MonodromyInfo(M, M[0][0] + M[1][1])


def _canon(points: Iterable[Point]) -> tuple[tuple[Point, ...], Point]:
    """Translate a lattice triangle so its smallest point is the origin."""
    pts = sorted(points)
    base = pts[0]
    return tuple((x - base[0], y - base[1]) for x, y in pts), base


def _neg(v: Point) -> Point:
    return (-v[0], -v[1])


class _Layering:
    """Stacks tetrahedra on the fibre, tracking the exposed top triangles."""

    def __init__(self):
        self.nbr: list[list[int | None]] = []
        self.perm: list[list[Perm4 | None]] = []
        # canonical triangle -> (tet, face, {canonical point: vertex label})
        self.top: dict[tuple[Point, ...], tuple[int, int, dict[Point, int]]] = {}
        self.bottom: dict[tuple[Point, ...], tuple[int, int, dict[Point, int]]] = {}

    def _glue(self, t: int, f: int, u: int, g: int, vmap: dict[int, int]) -> None:
        img = [0] * 4
        img[f] = g
        for a, b in vmap.items():
            img[a] = b
        p = Perm4(img)
        self.nbr[t][f], self.perm[t][f] = u, p
        self.nbr[u][g], self.perm[u][g] = t, p.inverse()

    def layer(self, P: Matrix, slope: Point) -> None:
        """Add a tetrahedron flipping the edge of slope ``slope``.

        ``P`` is any frame of the current fibre triangulation.
        """
        tri_a = [apply(P, v) for v in ((0, 0), (1, 0), (1, 1))]
        tri_b = [apply(P, v) for v in ((0, 0), (0, 1), (1, 1))]
        # Translate the second triangle so both share a segment of that slope.
        seg_a = _segment(tri_a, slope)
        seg_b = _segment(tri_b, slope)
        shift = (seg_a[0][0] - seg_b[0][0], seg_a[0][1] - seg_b[0][1])
        if {(x + shift[0], y + shift[1]) for x, y in seg_b} != set(seg_a):
            shift = (seg_a[0][0] - seg_b[1][0], seg_a[0][1] - seg_b[1][1])
        tri_b = [(x + shift[0], y + shift[1]) for x, y in tri_b]
        shared = set(tri_a) & set(tri_b)
        assert len(shared) == 2
        lo, hi = sorted(shared)
        apex_a = next(v for v in tri_a if v not in shared)
        apex_b = next(v for v in tri_b if v not in shared)
        label = {lo: 0, hi: 1, apex_a: 2, apex_b: 3}

        t = len(self.nbr)
        self.nbr.append([None] * 4)
        self.perm.append([None] * 4)
        bottoms = [tri_a, tri_b]
        tops = [[lo, apex_a, apex_b], [hi, apex_a, apex_b]]
        for tri in bottoms:
            key, base = _canon(tri)
            f = next(label[v] for v in label if v not in tri)
            local = {(x - base[0], y - base[1]): label[(x, y)] for x, y in tri}
            if key in self.top:
                u, g, umap = self.top.pop(key)
                self._glue(t, f, u, g, {local[pt]: umap[pt] for pt in key})
            else:
                self.bottom[key] = (t, f, local)
        for tri in tops:
            key, base = _canon(tri)
            f = next(label[v] for v in label if v not in tri)
            self.top[key] = (t, f, {(x - base[0], y - base[1]): label[(x, y)] for x, y in tri})

    def close(self, monodromy: Matrix) -> Triangulation:
        """Glue the remaining top triangles to the bottom ones via the monodromy."""
        for key, (t, f, bmap) in list(self.bottom.items()):
            image = [apply(monodromy, pt) for pt in key]
            tkey, base = _canon(image)
            u, g, umap = self.top.pop(tkey)
            vmap = {}
            for pt, img in zip(key, image):
                vmap[bmap[pt]] = umap[(img[0] - base[0], img[1] - base[1])]
            self._glue(t, f, u, g, vmap)
        assert not self.top
        return Triangulation(self.nbr, self.perm)


def _segment(tri: Sequence[Point], slope: Point) -> tuple[Point, Point]:
    for i in range(3):
        for j in range(3):
            if i != j:
                d = (tri[j][0] - tri[i][0], tri[j][1] - tri[i][1])
                if d == slope or d == _neg(slope):
                    return tri[i], tri[j]
    raise AssertionError(f"slope {slope} is not an edge of {tri}")


_FLIPS = {"R": (0, 1), "L": (1, 0)}


def _slope(v: Point) -> Point:
    """Unoriented slope: first nonzero coordinate made positive."""
    return v if v[0] > 0 or (v[0] == 0 and v[1] > 0) else _neg(v)


def _edges(P: Matrix) -> list[Point]:
    return [_slope(apply(P, v)) for v in ((1, 0), (0, 1), (1, 1))]


def _flip_frame(P: Matrix, slope: Point) -> Matrix:
    """A frame of the triangulation obtained by flipping ``slope`` in ``P``."""
    u, v = [e for e in _edges(P) if e != _slope(slope)]
    for a, b in ((u, v), (v, u), (u, _neg(v)), (_neg(v), u)):
        Q = ((a[0], b[0]), (a[1], b[1]))
        if Q[0][0] * Q[1][1] - Q[0][1] * Q[1][0] == 1 and _slope(apply(Q, (1, 1))) != _slope(slope):
            return Q
    raise AssertionError("no frame after flip")


@dataclass(frozen=True)
class LayeredBundle:
    triangulation: Triangulation
    taut: TautStructure
    word: MonodromyWord


def build_layered(word: MonodromyWord | str, insertions: Iterable[int] = ()) -> LayeredBundle:
    """Layered triangulation of the bundle with monodromy ``word``.

    One tetrahedron per letter.  Each insertion position ``i`` adds a
    cancelling pair just after the ``i``-th letter: a flip immediately
    undone, which creates a degree-2 edge.  The pair flips whichever edge
    of the current fibre triangulation was neither just created nor is about
    to be flipped, so no other edge drops to degree 2.

    Raises ``ValueError`` if the result is not a valid ideal triangulation,
    which happens for words using a single letter.
    """
    if isinstance(word, str):
        word = MonodromyWord(word, tuple(insertions))
    elif insertions:
        word = MonodromyWord(word.letters, word.insertions + tuple(insertions))
    letters = word.letters
    n = len(letters)
    mono = monodromy_matrix(word).matrix
    build = _Layering()
    P = IDENTITY
    # Slope created most recently; cyclically, the last letter's new edge.
    last = (1, 1)
    for pos in range(n + 1):
        for _ in range(word.insertions.count(pos)):
            upcoming = _slope(apply(P, _FLIPS[letters[pos % n]]))
            z = next(e for e in _edges(P) if e not in (_slope(last), upcoming))
            build.layer(P, z)
            Q = _flip_frame(P, z)
            build.layer(Q, next(e for e in _edges(Q) if e not in _edges(P)))
            last = z
        if pos < n:
            ch = letters[pos]
            build.layer(P, apply(P, _FLIPS[ch]))
            P = mat_mul(P, R if ch == "R" else L)
            last = apply(P, (1, 1))
    T = build.close(mono)
    T.validate()
    taut = TautStructure((0,) * T.k)
    if not is_taut(T, taut):
        raise AssertionError("fibration structure failed the taut check")
    return LayeredBundle(T, taut, word)


def degree2_report(T: Triangulation) -> list[EdgeClass]:
    """Edge classes of degree exactly 2."""
    return [ec for ec in T.edge_classes if ec.degree == 2]
