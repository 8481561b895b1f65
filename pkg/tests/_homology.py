"""First homology of an ideal triangulation from its dual spine.

Used as an independent oracle: the spine has one vertex per tetrahedron, one
edge per face pair and one 2-cell per edge class, and H1 is read off the
Smith normal form of the abelianized edge relations.
"""

from __future__ import annotations

import sympy
from sympy.matrices.normalforms import smith_normal_form

from tautangle.triangulation import Triangulation


def _tree_faces(T: Triangulation) -> set[tuple[int, int]]:
    seen = {0}
    tree = set()
    stack = [0]
    while stack:
        t = stack.pop()
        for f in range(4):
            u, g, _ = T.gluing(t, f)
            if u not in seen:
                seen.add(u)
                tree.add(min((t, f), (u, g)))
                stack.append(u)
    return tree


def _walk(T: Triangulation, t: int, a: int, b: int) -> list[tuple[int, int]]:
    """Faces crossed going once around the edge ``(t, {a, b})``."""
    c = next(v for v in range(4) if v not in (a, b))
    start = (t, a, b, c)
    crossings = []
    state = start
    while True:
        t, a, b, exit_ = state
        crossings.append((t, exit_))
        u, g, p = T.gluing(t, exit_)
        na, nb = p(a), p(b)
        nxt = next(v for v in range(4) if v not in (na, nb, g))
        state = (u, na, nb, nxt)
        if state == start or state == (start[0], start[2], start[1], start[3]):
            return crossings


def h1_invariants(T: Triangulation) -> list[int]:
    """Invariant factors of H1, with 0 standing for a copy of ℤ."""
    reps = T.faces()
    tree = _tree_faces(T)
    gens = [fc for fc in reps if fc not in tree]
    index = {fc: i for i, fc in enumerate(gens)}
    rows = []
    for ec in T.edge_classes:
        t, (a, b) = ec.slots[0]
        row = [0] * len(gens)
        for t, f in _walk(T, t, a, b):
            u, g, _ = T.gluing(t, f)
            if (t, f) in index:
                row[index[(t, f)]] += 1
            elif (u, g) in index:
                row[index[(u, g)]] -= 1
        rows.append(row)
    if not gens:
        return []
    M = sympy.Matrix(rows) if rows else sympy.zeros(1, len(gens))
    snf = smith_normal_form(M, domain=sympy.ZZ)
    diag = [abs(int(snf[i, i])) for i in range(min(snf.shape))]
    diag += [0] * (len(gens) - len(diag))
    return sorted(d for d in diag if d != 1)


def bundle_h1(matrix) -> list[int]:
    """H1 of a punctured-torus bundle: ℤ plus the cokernel of ``M - I``."""
    M = sympy.Matrix(matrix) - sympy.eye(2)
    snf = smith_normal_form(M, domain=sympy.ZZ)
    diag = [abs(int(snf[i, i])) for i in range(2)]
    return sorted([0] + [d for d in diag if d != 1])
