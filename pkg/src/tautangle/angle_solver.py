"""
Taut structures, the angle equations, and obstruction certificates.

Angles are measured in units of π, so the angle equations read
``(tetrahedron rows) = 1`` and ``(edge rows) = 2``.  Column ``3t + p``
is the dihedral angle shared by the two edges of pair ``p`` in
tetrahedron ``t``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Sequence

from .exact_arith import LPResult, LPStatus, RatMatrix, format_rational, integer_normalize, lp_max_min_slack, rank
from .normal_q import canonical_basis
from .triangulation import EDGES, PAIRS, Triangulation, pair_of, pachner_23


class CertificateError(RuntimeError):
    """An extracted certificate failed independent verification."""


@dataclass(frozen=True)
class AngleSystem:
    A: RatMatrix
    b: tuple[Fraction, ...]
    row_meaning: tuple[tuple[str, int], ...]

    @property
    def k(self) -> int:
        return self.A.cols // 3


@lru_cache(maxsize=512)
def build_system(T: Triangulation) -> AngleSystem:
    """The 2k × 3k angle equations: k tetrahedron rows, then k edge rows."""
    k = T.k
    edges = T.edge_classes
    rows = []
    for t in range(k):
        row = [0] * (3 * k)
        row[3 * t:3 * t + 3] = [1, 1, 1]
        rows.append(row)
    for ec in edges:
        row = [0] * (3 * k)
        for t, (a, b) in ec.slots:
            row[3 * t + pair_of(a, b)] += 1
        rows.append(row)
    A = RatMatrix.from_rows(rows, 3 * k)
    b = (Fraction(1),) * k + (Fraction(2),) * len(edges)
    meaning = tuple(("tet", t) for t in range(k)) + tuple(("edge", ec.id) for ec in edges)
    S = AngleSystem(A, b, meaning)
    basis = canonical_basis(T)
    for i, vec in enumerate(basis.vectors()):
        if tuple(A.row(i)) != vec.quad:
            raise AssertionError(f"angle row {i} differs from its basis vector")
    return S


def angle_space_dimension(S: AngleSystem) -> int:
    """Dimension of the affine solution space of the angle equations."""
    return S.A.cols - rank(S.A)


@dataclass(frozen=True, order=True)
class TautStructure:
    """For each tetrahedron, the index of the opposite pair carrying angle π."""

    pi_pair: tuple[int, ...]

    def angles(self) -> tuple[Fraction, ...]:
        out = []
        for p in self.pi_pair:
            out.extend(Fraction(1) if q == p else Fraction(0) for q in range(3))
        return tuple(out)


def is_taut(T: Triangulation, taut: TautStructure) -> bool:
    if len(taut.pi_pair) != T.k or any(p not in (0, 1, 2) for p in taut.pi_pair):
        return False
    return is_semi_angle(taut.angles(), build_system(T))


def enumerate_taut(T: Triangulation) -> list[TautStructure]:
    """All taut structures, in lexicographic order of their π-pairs.

    Backtracks over tetrahedra in index order, tracking for every edge class
    how many π-slots it already has and how many of its slots are still
    undecided; a branch dies once an edge overshoots 2 or can no longer
    reach it.
    """
    k = T.k
    n_edges = len(T.edge_classes)
    # For tetrahedron t and pair p: edge ids of the two edges in the pair.
    pair_edges = [
        [[T.edge_index(t, *e) for e in PAIRS[p]] for p in range(3)] for t in range(k)
    ]
    remaining = [0] * n_edges
    for t in range(k):
        for a, b in EDGES:
            remaining[T.edge_index(t, a, b)] += 1
    pi_count = [0] * n_edges
    choice = [0] * k
    out: list[TautStructure] = []

    def rec(t: int) -> None:
        if t == k:
            if all(c == 2 for c in pi_count):
                out.append(TautStructure(tuple(choice)))
            return
        touched = [T.edge_index(t, a, b) for a, b in EDGES]
        for e in touched:
            remaining[e] -= 1
        for p in range(3):
            hit = pair_edges[t][p]
            for e in hit:
                pi_count[e] += 1
            if all(pi_count[e] <= 2 and pi_count[e] + remaining[e] >= 2 for e in set(touched)):
                choice[t] = p
                rec(t + 1)
            for e in hit:
                pi_count[e] -= 1
        for e in touched:
            remaining[e] += 1

    rec(0)
    return out


def enumerate_taut_brute(T: Triangulation) -> list[TautStructure]:
    """Exhaustive 3^k scan; the oracle for :func:`enumerate_taut`."""
    S = build_system(T)
    return [
        TautStructure(c) for c in product(range(3), repeat=T.k) if is_semi_angle(TautStructure(c).angles(), S)
    ]


def is_semi_angle(a: Sequence[Fraction], S: AngleSystem) -> bool:
    a = list(a)
    return len(a) == S.A.cols and all(x >= 0 for x in a) and S.A.matvec(a) == list(S.b)


def is_angle_structure(a: Sequence[Fraction], S: AngleSystem) -> bool:
    return is_semi_angle(a, S) and all(x > 0 for x in a)


@dataclass(frozen=True)
class Certificate:
    """Multipliers of the angle equations forming a branched normal class.

    ``n`` weights tetrahedron rows, ``m`` edge rows; ``q`` is the resulting
    quad vector ``Aᵀ·(n, m)``.
    """

    n: tuple[int, ...]
    m: tuple[int, ...]
    q: tuple[int, ...]

    def to_json(self) -> dict:
        k = len(self.n)
        return {
            "n": list(self.n),
            "m": list(self.m),
            "q": [list(self.q[3 * t:3 * t + 3]) for t in range(k)],
        }

    @classmethod
    def from_multipliers(cls, T: Triangulation, n: Sequence[int], m: Sequence[int]) -> Certificate:
        q = canonical_basis(T).combine(n, m).quad
        return cls(tuple(int(x) for x in n), tuple(int(x) for x in m), tuple(int(x) for x in q))


@dataclass(frozen=True)
class CertificateCheck:
    ok: bool
    reason: str = "ok"

    def __bool__(self) -> bool:
        return self.ok


def verify_certificate(T: Triangulation, cert: Certificate, taut: TautStructure | None = None) -> CertificateCheck:
    """Check a certificate without any linear programming.

    Recomputes ``Σ n_i d_i + Σ m_j e_j`` from the canonical basis and checks
    that its quad part matches ``cert.q``, is non-negative and nonzero, and
    that ``Σn + 2Σm = 0``.  With a taut structure, additionally rejects any
    supported quadrilateral whose four corner angles are all zero.
    """
    k = T.k
    if len(cert.n) != k or len(cert.m) != len(T.edge_classes) or len(cert.q) != 3 * k:
        return CertificateCheck(False, "shape")
    q = canonical_basis(T).combine(cert.n, cert.m).quad
    if tuple(q) != tuple(Fraction(x) for x in cert.q):
        return CertificateCheck(False, "q-mismatch")
    if any(x < 0 for x in q):
        return CertificateCheck(False, "negative-quad")
    if all(x == 0 for x in q):
        return CertificateCheck(False, "zero-class")
    if sum(cert.n) + 2 * sum(cert.m) != 0:
        return CertificateCheck(False, "euler-nonzero")
    if taut is not None:
        if not is_taut(T, taut):
            return CertificateCheck(False, "taut-invalid")
        for t in range(k):
            # The quad disjoint from the π pair meets only zero-angle edges.
            if q[3 * t + taut.pi_pair[t]] != 0:
                return CertificateCheck(False, "zero-angle-quad")
    return CertificateCheck(True)


class AngleStatus(enum.Enum):
    ANGLE_STRUCTURE = "AngleStructure"
    NO_ANGLE_STRUCTURE = "NoAngleStructure"
    NO_SEMI_ANGLE = "NoSemiAngle"


EXIT_CODES = {
    AngleStatus.ANGLE_STRUCTURE: 0,
    AngleStatus.NO_ANGLE_STRUCTURE: 3,
    AngleStatus.NO_SEMI_ANGLE: 4,
}


@dataclass(frozen=True)
class AngleResult:
    status: AngleStatus
    epsilon: Fraction | None
    witness: tuple[Fraction, ...] | None = None
    certificate: Certificate | None = None
    dimension: int | None = None
    lp: LPResult | None = field(default=None, compare=False, repr=False)

    def to_json(self) -> dict:
        if self.status is AngleStatus.ANGLE_STRUCTURE:
            w = self.witness
            return {
                "status": self.status.value,
                "witness": [[format_rational(x) for x in w[3 * t:3 * t + 3]] for t in range(len(w) // 3)],
            }
        if self.status is AngleStatus.NO_ANGLE_STRUCTURE:
            return {"status": self.status.value, "cert": self.certificate.to_json()}
        return {"status": self.status.value}


def extract_certificate(T: Triangulation, S: AngleSystem, dual: Sequence[Fraction]) -> Certificate:
    """Scale an LP dual with zero objective into an integer certificate."""
    ints = integer_normalize(dual, sign="keep")
    k = T.k
    cert = Certificate.from_multipliers(T, ints[:k], ints[k:])
    check = verify_certificate(T, cert)
    if not check:
        raise CertificateError(f"extracted certificate failed verification: {check.reason}")
    return cert


def solve_angle(T: Triangulation) -> AngleResult:
    """Decide whether ``T`` admits an angle structure.

    Maximizes the smallest angle over the angle equations.  A positive
    optimum yields a witness; an optimum of exactly zero yields a verified
    certificate from the dual; no non-negative solution means no semi-angle
    structure at all.
    """
    S = build_system(T)
    res = lp_max_min_slack(S.A, S.b)
    dim = angle_space_dimension(S)
    if res.status is LPStatus.INFEASIBLE:
        return AngleResult(AngleStatus.NO_SEMI_ANGLE, None, dimension=dim, lp=res)
    if res.status is LPStatus.UNBOUNDED:
        raise AssertionError("angle equations cannot be unbounded")
    if res.objective > 0:
        if not is_angle_structure(res.primal, S):
            raise AssertionError("LP witness is not an angle structure")
        return AngleResult(AngleStatus.ANGLE_STRUCTURE, res.objective, res.primal, dimension=dim, lp=res)
    cert = extract_certificate(T, S, res.dual)
    return AngleResult(AngleStatus.NO_ANGLE_STRUCTURE, res.objective, certificate=cert, dimension=dim, lp=res)


def corner_sums(taut: TautStructure) -> tuple[list[Fraction], list[Fraction]]:
    """Corner-angle sums (units of π) of every triangle and quadrilateral."""
    angles = taut.angles()
    k = len(taut.pi_pair)
    tri, quad = [], []
    for t in range(k):
        a = angles[3 * t:3 * t + 3]
        for w in range(4):
            tri.append(sum((a[pair_of(w, o)] for o in range(4) if o != w), Fraction(0)))
        for p in range(3):
            quad.append(sum((a[pair_of(*e)] for e in EDGES if e not in PAIRS[p]), Fraction(0)))
    return tri, quad


def pi_face_edge(taut_pair: int, apex: int) -> tuple[int, int]:
    """The edge of pair ``taut_pair`` lying in the face opposite ``apex``."""
    e1, e2 = PAIRS[taut_pair]
    return e2 if apex in e1 else e1


def taut_transport_23(T: Triangulation, taut: TautStructure, t: int, f: int) -> TautStructure | None:
    """Carry a taut structure across the 2-3 move at face ``(t, f)``.

    Returns ``None`` when both tetrahedra put their π angle on the same edge
    of the common face.  Otherwise the survivors keep their π pairs and the
    three new tetrahedra (see :func:`~tautangle.triangulation.pachner_23`
    for their labeling) get the unique compatible choice.
    """
    if not is_taut(T, taut):
        raise ValueError("not a taut structure on this triangulation")
    u, g, p = T.gluing(t, f)
    if u == t:
        raise ValueError(f"face ({t},{f}) is not eligible for a 2-3 move")
    face = [v for v in range(4) if v != f]
    pinv = p.inverse()
    # Face vertex of t opposite each tetrahedron's π edge within the face.
    e_t = pi_face_edge(taut.pi_pair[t], f)
    e_u = pi_face_edge(taut.pi_pair[u], g)
    x = next(v for v in face if v not in e_t)
    y = next(v for v in face if v not in (pinv(e_u[0]), pinv(e_u[1])))
    if x == y:
        return None
    new = []
    for i, ai in enumerate(face):
        if ai in (x, y):
            new.append(0)
            continue
        # This tetrahedron holds a_x and a_y: π on the pair {T, a_x} | {B, a_y}.
        labels = {v: 2 + n for n, v in enumerate(sorted(set(face) - {ai}))}
        new.append(pair_of(0, labels[x]))
    survivors = [taut.pi_pair[s] for s in range(T.k) if s not in (t, u)]
    out = TautStructure(tuple(survivors + new))
    if not is_taut(pachner_23(T, t, f), out):
        raise AssertionError("transported structure is not taut")
    return out
