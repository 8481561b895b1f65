"""
Ideal triangulations given as face-pairing tables.

Conventions used throughout the package:

* face ``f`` of a tetrahedron is the face opposite vertex ``f``;
* a gluing ``(t, f) -> (u, g, p)`` is a :class:`Perm4` ``p`` acting on
  vertex labels of ``t`` with ``p(f) == g``;
* opposite edge pairs are indexed ``0 = {01|23}``, ``1 = {02|13}``,
  ``2 = {03|12}``.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import permutations
from typing import Iterable, Sequence

EDGES: tuple[tuple[int, int], ...] = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
EDGE_INDEX = {e: i for i, e in enumerate(EDGES)} | {(b, a): i for i, (a, b) in enumerate(EDGES)}
PAIRS: tuple[tuple[tuple[int, int], tuple[int, int]], ...] = (
    ((0, 1), (2, 3)),
    ((0, 2), (1, 3)),
    ((0, 3), (1, 2)),
)


def pair_of(a: int, b: int) -> int:
    """Index of the opposite-edge pair containing edge ``{a, b}``."""
    if a == b:
        raise ValueError("an edge needs two distinct vertices")
    lo, hi = min(a, b), max(a, b)
    for p, (e1, e2) in enumerate(PAIRS):
        if (lo, hi) in (e1, e2):
            return p
    raise ValueError(f"not an edge: {a}, {b}")


class Perm4:
    """A permutation of ``{0, 1, 2, 3}``, stored as its image tuple."""

    __slots__ = ("image",)

    def __init__(self, image: Iterable[int]):
        image = tuple(image)
        if sorted(image) != [0, 1, 2, 3]:
            raise ValueError(f"not a permutation of 0..3: {image}")
        object.__setattr__(self, "image", image)

    def __setattr__(self, name, value):
        raise AttributeError("Perm4 is immutable")

    def __call__(self, i: int) -> int:
        return self.image[i]

    def __mul__(self, other: Perm4) -> Perm4:
        """Composition: ``(self * other)(i) == self(other(i))``."""
        return Perm4(self.image[other.image[i]] for i in range(4))

    def inverse(self) -> Perm4:
        inv = [0] * 4
        for i, x in enumerate(self.image):
            inv[x] = i
        return Perm4(inv)

    def sign(self) -> int:
        s = 1
        im = self.image
        for i in range(4):
            for j in range(i + 1, 4):
                if im[i] > im[j]:
                    s = -s
        return s

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Perm4) and self.image == other.image

    def __lt__(self, other: Perm4) -> bool:
        return self.image < other.image

    def __hash__(self) -> int:
        return hash(self.image)

    def __repr__(self) -> str:
        return f"Perm4({''.join(map(str, self.image))})"


IDENTITY = Perm4((0, 1, 2, 3))
ALL_PERMS: tuple[Perm4, ...] = tuple(Perm4(p) for p in permutations(range(4)))


class TriangulationError(ValueError):
    """Raised for gluing tables that do not describe a valid ideal triangulation.

    ``problems`` is a list of ``(kind, cell, message)`` triples.
    """

    def __init__(self, problems: list[tuple[str, object, str]]):
        self.problems = problems
        super().__init__("; ".join(msg for _, _, msg in problems))


@dataclass(frozen=True)
class EdgeClass:
    id: int
    slots: tuple[tuple[int, tuple[int, int]], ...]

    @property
    def degree(self) -> int:
        return len(self.slots)


@dataclass(frozen=True)
class CuspLink:
    id: int
    corners: tuple[tuple[int, int], ...]
    euler_char: int
    orientable: bool


@dataclass(frozen=True)
class ValidationReport:
    k: int
    edge_classes: tuple[EdgeClass, ...]
    cusp_links: tuple[CuspLink, ...]
    orientable: bool

    @property
    def degrees(self) -> list[int]:
        return [e.degree for e in self.edge_classes]

    @property
    def cusp_count(self) -> int:
        return len(self.cusp_links)

    def to_json(self) -> dict:
        return {
            "valid": True,
            "k": self.k,
            "edgeClasses": [[[t, list(e)] for t, e in ec.slots] for ec in self.edge_classes],
            "degrees": self.degrees,
            "cuspCount": self.cusp_count,
            "cuspLinks": [
                {
                    "corners": [list(c) for c in link.corners],
                    "eulerChar": link.euler_char,
                    "orientable": link.orientable,
                }
                for link in self.cusp_links
            ],
            "orientable": self.orientable,
        }


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # Smallest index as root keeps class ids canonical.
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


class Triangulation:
    """An ideal triangulation: ``k`` tetrahedra and their face pairings.

    Construction checks only the table's shape.  Call :meth:`validate` (or
    use :func:`validate`) before asking for edge classes or cusps.
    """

    def __init__(self, nbr: Sequence[Sequence[int]], perm: Sequence[Sequence[Perm4 | Sequence[int]]]):
        if len(nbr) != len(perm):
            raise ValueError("nbr and perm lists differ in length")
        if not nbr:
            raise ValueError("a triangulation needs at least one tetrahedron")
        k = len(nbr)
        self._nbr = tuple(tuple(int(x) for x in row) for row in nbr)
        self._perm = tuple(tuple(p if isinstance(p, Perm4) else Perm4(p) for p in row) for row in perm)
        for t in range(k):
            if len(self._nbr[t]) != 4 or len(self._perm[t]) != 4:
                raise ValueError(f"tetrahedron {t} needs four face entries")
            for f in range(4):
                if not 0 <= self._nbr[t][f] < k:
                    raise ValueError(f"tetrahedron {t} face {f} points at missing tetrahedron {self._nbr[t][f]}")

    @property
    def k(self) -> int:
        return len(self._nbr)

    def gluing(self, t: int, f: int) -> tuple[int, int, Perm4]:
        p = self._perm[t][f]
        return self._nbr[t][f], p(f), p

    def faces(self) -> list[tuple[int, int]]:
        """One representative ``(t, f)`` per glued face pair, smallest first."""
        out = []
        for t in range(self.k):
            for f in range(4):
                u, g, _ = self.gluing(t, f)
                if (t, f) <= (u, g):
                    out.append((t, f))
        return out

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "tets": [
                {"nbr": list(self._nbr[t]), "perm": [list(p.image) for p in self._perm[t]]}
                for t in range(self.k)
            ]
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, data: dict) -> Triangulation:
        try:
            tets = data["tets"]
            nbr = [tet["nbr"] for tet in tets]
            perm = [tet["perm"] for tet in tets]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed triangulation JSON: {exc}") from exc
        for row in nbr:
            if not isinstance(row, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in row):
                raise ValueError("nbr entries must be lists of integers")
        return cls(nbr, perm)

    @classmethod
    def loads(cls, text: str) -> Triangulation:
        return cls.from_json(json.loads(text))

    def table(self) -> tuple:
        return tuple((self._nbr[t], tuple(p.image for p in self._perm[t])) for t in range(self.k))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Triangulation) and self.table() == other.table()

    def __hash__(self) -> int:
        return hash(self.table())

    def __repr__(self) -> str:
        return f"Triangulation(k={self.k})"

    # -- derived combinatorics ---------------------------------------------

    def _structural_problems(self) -> list[tuple[str, object, str]]:
        problems = []
        for t in range(self.k):
            for f in range(4):
                u, g, p = self.gluing(t, f)
                if (u, g) == (t, f):
                    problems.append(("involution", (t, f), f"face ({t},{f}) is glued to itself"))
                    continue
                v, h, q = self.gluing(u, g)
                if (v, h) != (t, f) or q != p.inverse():
                    problems.append(
                        ("involution", (t, f), f"gluing ({t},{f})->({u},{g}) is not matched by ({u},{g})->({t},{f})")
                    )
        return problems

    @cached_property
    def _directed_edges(self) -> _UnionFind:
        # Directed edge (t, a, b) indexed as 16t + 4a + b.
        uf = _UnionFind(16 * self.k)
        for t in range(self.k):
            for f in range(4):
                u, _, p = self.gluing(t, f)
                for a in range(4):
                    for b in range(4):
                        if a != b and f not in (a, b):
                            uf.union(16 * t + 4 * a + b, 16 * u + 4 * p(a) + p(b))
        return uf

    @cached_property
    def edge_classes(self) -> tuple[EdgeClass, ...]:
        uf = _UnionFind(6 * self.k)
        for t in range(self.k):
            for f in range(4):
                u, _, p = self.gluing(t, f)
                for i, (a, b) in enumerate(EDGES):
                    if f not in (a, b):
                        uf.union(6 * t + i, 6 * u + EDGE_INDEX[(p(a), p(b))])
        groups: dict[int, list[int]] = {}
        for s in range(6 * self.k):
            groups.setdefault(uf.find(s), []).append(s)
        ordered = sorted(groups.values(), key=min)
        return tuple(
            EdgeClass(i, tuple((s // 6, EDGES[s % 6]) for s in sorted(slots))) for i, slots in enumerate(ordered)
        )

    @cached_property
    def _slot_class(self) -> tuple[int, ...]:
        out = [0] * (6 * self.k)
        for ec in self.edge_classes:
            for t, e in ec.slots:
                out[6 * t + EDGE_INDEX[e]] = ec.id
        return tuple(out)

    def edge_index(self, t: int, a: int, b: int) -> int:
        """Id of the edge class containing slot ``(t, {a, b})``."""
        return self._slot_class[6 * t + EDGE_INDEX[(a, b)]]

    def edge_of(self, t: int, pair: Iterable[int]) -> EdgeClass:
        a, b = sorted(pair)
        return self.edge_classes[self.edge_index(t, a, b)]

    @cached_property
    def cusp_links(self) -> tuple[CuspLink, ...]:
        k = self.k
        uf = _UnionFind(4 * k)
        for t in range(k):
            for f in range(4):
                u, _, p = self.gluing(t, f)
                for v in range(4):
                    if v != f:
                        uf.union(4 * t + v, 4 * u + p(v))
        groups: dict[int, list[int]] = {}
        for c in range(4 * k):
            groups.setdefault(uf.find(c), []).append(c)
        dirs = self._directed_edges
        links = []
        for i, cells in enumerate(sorted(groups.values(), key=min)):
            faces = len(cells)
            link_vertices = {dirs.find(16 * (c // 4) + 4 * (c % 4) + w) for c in cells for w in range(4) if w != c % 4}
            euler = len(link_vertices) - (3 * faces) // 2 + faces
            links.append(
                CuspLink(
                    i,
                    tuple((c // 4, c % 4) for c in sorted(cells)),
                    euler,
                    self._orientable_on(set(cells)),
                )
            )
        return tuple(links)

    def _orientable_on(self, corners: set[int]) -> bool:
        # Sign propagation across gluings: s(u) = -sign(p) * s(t).
        sign: dict[int, int] = {}
        for start in sorted(corners):
            if start in sign:
                continue
            sign[start] = 1
            queue = deque([start])
            while queue:
                c = queue.popleft()
                t, v = divmod(c, 4)
                for f in range(4):
                    if f == v:
                        continue
                    u, _, p = self.gluing(t, f)
                    d = 4 * u + p(v)
                    want = -p.sign() * sign[c]
                    if d in sign:
                        if sign[d] != want:
                            return False
                    else:
                        sign[d] = want
                        queue.append(d)
        return True

    @cached_property
    def orientable(self) -> bool:
        sign = [0] * self.k
        sign[0] = 1
        queue = deque([0])
        while queue:
            t = queue.popleft()
            for f in range(4):
                u, _, p = self.gluing(t, f)
                want = -p.sign() * sign[t]
                if sign[u] == 0:
                    sign[u] = want
                    queue.append(u)
                elif sign[u] != want:
                    return False
        return True

    def _connected(self) -> bool:
        seen = {0}
        queue = deque([0])
        while queue:
            t = queue.popleft()
            for u in self._nbr[t]:
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        return len(seen) == self.k

    def validate(self) -> ValidationReport:
        problems = self._structural_problems()
        if problems:
            raise TriangulationError(problems)
        if not self._connected():
            raise TriangulationError([("connectivity", None, "gluing table is not connected")])
        dirs = self._directed_edges
        for t in range(self.k):
            for a, b in EDGES:
                if dirs.find(16 * t + 4 * a + b) == dirs.find(16 * t + 4 * b + a):
                    problems.append(
                        ("edge", (t, (a, b)), f"edge ({t},{{{a},{b}}}) is identified with itself in reverse")
                    )
        for link in self.cusp_links:
            if link.euler_char != 0:
                problems.append(
                    (
                        "cusp",
                        link.corners[0],
                        f"cusp link {link.id} through corner {link.corners[0]} has Euler characteristic {link.euler_char}",
                    )
                )
        if len(self.edge_classes) != self.k:
            problems.append(
                ("edges", None, f"{len(self.edge_classes)} edge classes for {self.k} tetrahedra")
            )
        if problems:
            raise TriangulationError(problems)
        return ValidationReport(self.k, self.edge_classes, self.cusp_links, self.orientable)

    # -- relabeling ----------------------------------------------------------

    def relabel(self, tet_order: Sequence[int], vertex_maps: Sequence[Perm4]) -> Triangulation:
        """Renumber tetrahedra and vertices.

        Old tetrahedron ``tet_order[i]`` becomes new tetrahedron ``i``, with
        old vertex ``v`` becoming ``vertex_maps[tet_order[i]](v)``.
        """
        new_index = {old: new for new, old in enumerate(tet_order)}
        if sorted(new_index) != list(range(self.k)):
            raise ValueError("tet_order must be a permutation of the tetrahedra")
        nbr = [[0] * 4 for _ in range(self.k)]
        perm: list[list[Perm4]] = [[IDENTITY] * 4 for _ in range(self.k)]
        for old in range(self.k):
            s = vertex_maps[old]
            for f in range(4):
                u, _, p = self.gluing(old, f)
                nf = s(f)
                nbr[new_index[old]][nf] = new_index[u]
                perm[new_index[old]][nf] = vertex_maps[u] * p * s.inverse()
        return Triangulation(nbr, perm)

    def canonical_table(self) -> tuple:
        """Isomorphism-invariant gluing table.

        Every (start tetrahedron, start labeling) pair determines a unique
        breadth-first relabeling; the lexicographically smallest resulting
        table is returned.  Two connected triangulations are combinatorially
        isomorphic exactly when their canonical tables agree.
        """
        best = None
        for start in range(self.k):
            for sigma in ALL_PERMS:
                table = self._bfs_table(start, sigma, best)
                if table is not None and (best is None or table < best):
                    best = table
        return best

    def _bfs_table(self, start: int, sigma: Perm4, bound) -> tuple | None:
        index = {start: 0}
        maps = {start: sigma}
        order = [start]
        rows = []
        i = 0
        while i < len(order):
            t = order[i]
            s = maps[t]
            sinv = s.inverse()
            for nf in range(4):
                f = sinv(nf)
                u, _, p = self.gluing(t, f)
                if u not in index:
                    index[u] = len(order)
                    order.append(u)
                    maps[u] = s * p.inverse()
                q = maps[u] * p * sinv
                rows.append((index[u], q.image))
            i += 1
            if bound is not None and tuple(rows) > bound[: len(rows)]:
                return None
        return tuple(rows)

    def is_isomorphic(self, other: Triangulation) -> bool:
        return self.k == other.k and self.canonical_table() == other.canonical_table()


def validate(T: Triangulation) -> ValidationReport:
    return T.validate()


def edge_of(T: Triangulation, t: int, pair: Iterable[int]) -> EdgeClass:
    return T.edge_of(t, pair)


def _rebuild(
    T: Triangulation,
    removed: set[int],
    new_count: int,
    translate: dict[tuple[int, int], tuple[int, int, Perm4]],
    internal: list[tuple[int, int, int, Perm4]],
) -> Triangulation:
    """Replace tetrahedra ``removed`` by ``new_count`` fresh ones.

    ``translate`` maps each outer face ``(old tet, old face)`` of the removed
    region to ``(new local index, new face, old-to-new vertex map)``.
    ``internal`` lists gluings ``(i, f, j, p)`` among the new tetrahedra.
    Survivors keep their order; new tetrahedra are appended.
    """
    survivors = [t for t in range(T.k) if t not in removed]
    renum = {t: i for i, t in enumerate(survivors)}
    base = len(survivors)
    k = base + new_count
    nbr: list[list[int | None]] = [[None] * 4 for _ in range(k)]
    perm: list[list[Perm4 | None]] = [[None] * 4 for _ in range(k)]

    def target(u: int, g: int) -> tuple[int, int, Perm4]:
        # New location of old face (u, g) plus the old-to-new map on u.
        if u in removed:
            i, h, mu = translate[(u, g)]
            return base + i, h, mu
        return renum[u], g, IDENTITY

    for t in survivors:
        for f in range(4):
            u, g, p = T.gluing(t, f)
            nu, _, mu = target(u, g)
            nbr[renum[t]][f] = nu
            perm[renum[t]][f] = mu * p
    for (t, f), (i, h, mu) in translate.items():
        u, g, p = T.gluing(t, f)
        nu, _, mu2 = target(u, g)
        nbr[base + i][h] = nu
        perm[base + i][h] = mu2 * p * mu.inverse()
    for i, f, j, p in internal:
        nbr[base + i][f] = base + j
        perm[base + i][f] = p
        nbr[base + j][p(f)] = base + i
        perm[base + j][p(f)] = p.inverse()
    if any(x is None for row in nbr for x in row):
        raise AssertionError("move left a face unglued")
    return Triangulation(nbr, perm)


def pachner_23(T: Triangulation, t: int, f: int) -> Triangulation:
    """Replace the two tetrahedra meeting at face ``(t, f)`` by three.

    The new tetrahedra are appended after the survivors, in the order of the
    common-face vertices ``a0 < a1 < a2`` of ``t``.  New tetrahedron ``i``
    has vertices ``0 = apex of t``, ``1 = apex of the neighbour``, ``2, 3 =``
    the two face vertices other than ``a_i`` in increasing order, so the new
    degree-3 edge is ``{0, 1}`` in each of them.
    """
    u, g, p = T.gluing(t, f)
    if u == t:
        raise ValueError(f"face ({t},{f}) is glued to its own tetrahedron; 2-3 move not defined here")
    face = [v for v in range(4) if v != f]
    translate: dict[tuple[int, int], tuple[int, int, Perm4]] = {}
    for i, ai in enumerate(face):
        aj, al = [v for v in face if v != ai]
        # Old vertex of t -> new label; the new tetrahedron's face 1 is t's face ai.
        mu = [0] * 4
        mu[f], mu[ai], mu[aj], mu[al] = 0, 1, 2, 3
        translate[(t, ai)] = (i, 1, Perm4(mu))
        nu = [0] * 4
        nu[p(ai)], nu[g], nu[p(aj)], nu[p(al)] = 0, 1, 2, 3
        translate[(u, p(ai))] = (i, 0, Perm4(nu))
    internal = []
    for i, ai in enumerate(face):
        for j, aj in enumerate(face):
            if i >= j:
                continue
            al = next(v for v in face if v not in (ai, aj))
            labels_i = {"T": 0, "B": 1, **{v: 2 + n for n, v in enumerate(sorted(set(face) - {ai}))}}
            labels_j = {"T": 0, "B": 1, **{v: 2 + n for n, v in enumerate(sorted(set(face) - {aj}))}}
            # Common face {T, B, al}: opposite aj in tet i, opposite ai in tet j.
            q = [0] * 4
            q[labels_i["T"]] = labels_j["T"]
            q[labels_i["B"]] = labels_j["B"]
            q[labels_i[al]] = labels_j[al]
            q[labels_i[aj]] = labels_j[ai]
            internal.append((i, labels_i[aj], j, Perm4(q)))
    return _rebuild(T, {t, u}, 3, translate, internal)


def degree3_walk(T: Triangulation, edge: EdgeClass) -> list[tuple[int, int, int, int, int]]:
    """Walk once around a degree-3 edge.

    Returns ``[(tet, a, b, e_cur, e_next), ...]`` for the three tetrahedra in
    cyclic order: ``a, b`` are the edge's endpoint labels (consistently
    oriented) and ``e_cur, e_next`` the labels of consecutive equator
    vertices.  Raises ``ValueError`` if the edge is not a degree-3 edge
    through three distinct tetrahedra.
    """
    if edge.degree != 3:
        raise ValueError(f"edge {edge.id} has degree {edge.degree}, 3-2 move needs degree 3")
    tets = [t for t, _ in edge.slots]
    if len(set(tets)) != 3:
        raise ValueError(f"edge {edge.id} meets a tetrahedron more than once")
    t0, (a, b) = edge.slots[0]
    c, d = [v for v in range(4) if v not in (a, b)]
    walk = []
    t, e_cur, e_next = t0, c, d
    for _ in range(3):
        walk.append((t, a, b, e_cur, e_next))
        # Cross the face containing a, b, e_next (opposite e_cur).
        u, _, p = T.gluing(t, e_cur)
        t, a, b, e_cur, e_next = u, p(a), p(b), p(e_next), p(e_cur)
    if (t, a, b, e_cur, e_next) != walk[0]:
        raise ValueError(f"edge {edge.id} does not close up consistently around three tetrahedra")
    return walk


def pachner_32(T: Triangulation, edge: EdgeClass | int) -> Triangulation:
    """Replace the three tetrahedra around a degree-3 edge by two.

    The two new tetrahedra are appended after the survivors: the first holds
    endpoint ``a`` of the edge, the second endpoint ``b``; in both, label 3
    is that endpoint and labels ``0, 1, 2`` are the equator vertices in walk
    order.  They are glued along face 3 by the identity.
    """
    if isinstance(edge, int):
        edge = T.edge_classes[edge]
    walk = degree3_walk(T, edge)
    translate: dict[tuple[int, int], tuple[int, int, Perm4]] = {}
    for i, (t, a, b, ec, en) in enumerate(walk):
        # Face b of t (contains a) goes to the top tetrahedron 0; face a to 1.
        top = [0] * 4
        top[a], top[ec], top[en], top[b] = 3, i, (i + 1) % 3, (i + 2) % 3
        translate[(t, b)] = (0, (i + 2) % 3, Perm4(top))
        bot = [0] * 4
        bot[b], bot[ec], bot[en], bot[a] = 3, i, (i + 1) % 3, (i + 2) % 3
        translate[(t, a)] = (1, (i + 2) % 3, Perm4(bot))
    return _rebuild(T, {w[0] for w in walk}, 2, translate, [(0, 3, 1, IDENTITY)])


def degree3_edges(T: Triangulation) -> list[EdgeClass]:
    """Edge classes eligible for a 3-2 move."""
    out = []
    for ec in T.edge_classes:
        try:
            degree3_walk(T, ec)
        except ValueError:
            continue
        out.append(ec)
    return out


def eligible_23_faces(T: Triangulation) -> list[tuple[int, int]]:
    """Face representatives joining two distinct tetrahedra."""
    return [(t, f) for t, f in T.faces() if T.gluing(t, f)[0] != t]
