"""
Exact rational linear algebra and a two-phase simplex solver.

All arithmetic goes through :class:`fractions.Fraction`; nothing in this
module ever touches a float.  The solver uses Bland's smallest-index rule,
so it terminates on the heavily degenerate systems that come out of taut
triangulations, and it reports equality-row dual multipliers that can be
checked by substitution.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Rational = Fraction


def to_rational(value: int | str | Fraction) -> Fraction:
    """Coerce an int, a ``"p/q"`` string or a Fraction to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(ch.isspace() for ch in text) or "." in text or "e" in text.lower():
            raise ValueError(f"malformed rational {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_rational(value: Fraction | int) -> str:
    """Serialize as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def integer_normalize(vec: Sequence[Fraction], *, sign: str = "first") -> list[int]:
    """Scale a rational vector to coprime integers.

    With ``sign="first"`` the first nonzero entry is made positive; with
    ``sign="keep"`` only positive scaling is used, so the direction of the
    vector is preserved.  The zero vector maps to all zeros.
    """
    if sign not in ("first", "keep"):
        raise ValueError(f"unknown sign convention {sign!r}")
    fracs = [Fraction(x) for x in vec]
    lcm = 1
    for x in fracs:
        lcm = lcm * x.denominator // gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in fracs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g == 0:
        return ints
    ints = [v // g for v in ints]
    if sign == "first":
        lead = next(v for v in ints if v != 0)
        if lead < 0:
            ints = [-v for v in ints]
    return ints


_SMALL = {i: Fraction(i) for i in range(-16, 17)}


def _frac(x: Fraction | int) -> Fraction:
    if type(x) is Fraction:
        return x
    return _SMALL.get(x) if type(x) is int and -16 <= x <= 16 else Fraction(x)


class RatMatrix:
    """Dense immutable matrix of Fractions, stored row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable[Fraction | int]):
        data = tuple(map(_frac, entries))
        if rows < 0 or cols < 0 or len(data) != rows * cols:
            raise ValueError(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(data)}")
        self.rows = rows
        self.cols = cols
        self.entries = data

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Fraction | int]], cols: int | None = None) -> RatMatrix:
        if cols is None:
            if not rows:
                raise ValueError("cannot infer column count of an empty matrix")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, (x for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> RatMatrix:
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> RatMatrix:
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    def __getitem__(self, idx: tuple[int, int]) -> Fraction:
        i, j = idx
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(idx)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return self.entries[j::self.cols] if self.cols else ()

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> RatMatrix:
        return RatMatrix(self.cols, self.rows, (self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def matvec(self, vec: Sequence[Fraction | int]) -> list[Fraction]:
        if len(vec) != self.cols:
            raise ValueError(f"vector of length {len(vec)} against {self.cols} columns")
        out = []
        for i in range(self.rows):
            acc = Fraction(0)
            for a, x in zip(self.row(i), vec):
                if a and x:
                    acc += a * x
            out.append(acc)
        return out

    def rmatvec(self, vec: Sequence[Fraction | int]) -> list[Fraction]:
        """Return ``Mᵀ·vec``."""
        if len(vec) != self.rows:
            raise ValueError(f"vector of length {len(vec)} against {self.rows} rows")
        out = [Fraction(0)] * self.cols
        for i, y in enumerate(vec):
            if not y:
                continue
            for j, a in enumerate(self.row(i)):
                if a:
                    out[j] += a * y
        return out

    def __matmul__(self, other: RatMatrix) -> RatMatrix:
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        cols = [other.column(j) for j in range(other.cols)]
        return RatMatrix(
            self.rows,
            other.cols,
            (sum((a * b for a, b in zip(self.row(i), c)), Fraction(0)) for i in range(self.rows) for c in cols),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(x) for x in self.row(i)) for i in range(self.rows))
        return f"RatMatrix({self.rows}x{self.cols}: [{body}])"


def row_echelon(M: RatMatrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and the pivot columns."""
    R = M.to_rows()
    pivots: list[int] = []
    r = 0
    for c in range(M.cols):
        if r == M.rows:
            break
        pr = next((i for i in range(r, M.rows) if R[i][c] != 0), None)
        if pr is None:
            continue
        R[r], R[pr] = R[pr], R[r]
        prow = R[r]
        inv = 1 / prow[c]
        if inv != 1:
            prow[:] = [x * inv for x in prow]
        nz = [j for j, x in enumerate(prow) if x]
        for i in range(M.rows):
            row = R[i]
            f = row[c]
            if i != r and f:
                for j in nz:
                    row[j] -= f * prow[j]
        pivots.append(c)
        r += 1
    return R, pivots


def rank(M: RatMatrix) -> int:
    """Rank by fraction-free elimination on integer-scaled rows."""
    rows = []
    for i in range(M.rows):
        row = M.row(i)
        den = 1
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
        ints = [int(x * den) for x in row]
        if any(ints):
            rows.append(ints)
    r = 0
    for c in range(M.cols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        prow = rows[r]
        p = prow[c]
        for i in range(r + 1, len(rows)):
            f = rows[i][c]
            if f:
                new = [p * a - f * b for a, b in zip(rows[i], prow)]
                g = 0
                for x in new:
                    g = gcd(g, x)
                rows[i] = [x // g for x in new] if g > 1 else new
        r += 1
    return r


def nullspace(M: RatMatrix) -> list[list[Fraction]]:
    """A basis of ``{x : M·x = 0}``, one vector per free column."""
    R, pivots = row_echelon(M)
    free = [c for c in range(M.cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * M.cols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -R[i][f]
        basis.append(v)
    return basis


def solve_square(M: RatMatrix, rhs: Sequence[Fraction]) -> list[Fraction]:
    """Solve ``M·x = rhs`` for nonsingular square ``M``."""
    n = M.rows
    if M.cols != n or len(rhs) != n:
        raise ValueError("solve_square needs a square system")
    aug = RatMatrix(n, n + 1, (x for i in range(n) for x in (*M.row(i), rhs[i])))
    R, pivots = row_echelon(aug)
    if pivots != list(range(n)):
        raise ValueError("singular matrix")
    return [R[i][n] for i in range(n)]


class LPStatus(enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


@dataclass(frozen=True)
class LPResult:
    """Outcome of :func:`lp_max_min_slack`.

    ``primal`` is the original variable vector x and ``objective`` is
    ε* = min_j x_j at the optimum.  ``dual`` holds one multiplier per
    equality row with ``Aᵀ·dual ≥ 0``, ``Σ(Aᵀ·dual) ≥ 1`` and
    ``b·dual = objective``.  For an infeasible system ``dual`` is a Farkas
    ray instead: ``Aᵀ·dual ≥ 0`` and ``b·dual < 0``.  When unbounded,
    ``primal`` is feasible and ``ray`` is a direction with ``A·ray = 0``
    and every entry positive.
    """

    status: LPStatus
    objective: Fraction | None
    primal: tuple[Fraction, ...]
    dual: tuple[Fraction, ...]
    ray: tuple[Fraction, ...] = ()

    @property
    def optimal(self) -> bool:
        return self.status is LPStatus.OPTIMAL


def _pivot(tab: list[list[Fraction]], rhs: list[Fraction], r: int, j: int) -> None:
    prow = tab[r]
    inv = 1 / prow[j]
    if inv != 1:
        prow[:] = [x * inv for x in prow]
        rhs[r] *= inv
    nz = [c for c, x in enumerate(prow) if x]
    br = rhs[r]
    for i, row in enumerate(tab):
        if i == r:
            continue
        f = row[j]
        if not f:
            continue
        for c in nz:
            row[c] -= f * prow[c]
        rhs[i] -= f * br


def _run_simplex(
    tab: list[list[Fraction]],
    rhs: list[Fraction],
    basis: list[int],
    d: list[Fraction],
    z: Fraction,
    key: list[int],
) -> tuple[bool, Fraction]:
    """Maximize from a feasible basis with Bland's rule.

    ``d`` holds reduced costs (updated in place), ``z`` the objective value.
    ``key`` gives the Bland ordering index of each basis entry.  Returns
    ``(entering, z)`` where ``entering`` is None at an optimum and otherwise
    the column that can grow without bound.
    """
    n = len(d)
    while True:
        j = next((c for c in range(n) if d[c] > 0), None)
        if j is None:
            return None, z
        best = None
        for i, row in enumerate(tab):
            a = row[j]
            if a > 0:
                ratio = rhs[i] / a
                cand = (ratio, key[i])
                if best is None or cand < best[0]:
                    best = (cand, i)
        if best is None:
            return j, z
        r = best[1]
        _pivot(tab, rhs, r, j)
        f = d[j]
        prow = tab[r]
        for c, x in enumerate(prow):
            if x:
                d[c] -= f * x
        z += f * rhs[r]
        basis[r] = j
        key[r] = j


def _standard_form_max(
    M: list[list[Fraction]], b: list[Fraction], c: list[Fraction]
) -> tuple[LPStatus, list[Fraction], list[Fraction], Fraction | None]:
    """Maximize ``c·w`` s.t. ``M·w = b``, ``w ≥ 0``.

    Returns ``(status, w, y, value)`` with ``y`` an equality-row dual
    (optimal dual, or Farkas ray when infeasible) or, when unbounded, an
    improving direction in ``w``-space.
    """
    m = len(M)
    n = len(c)
    tab = [[Fraction(x) for x in row] for row in M]
    rhs = [Fraction(x) for x in b]
    flip = [False] * m
    for i in range(m):
        if rhs[i] < 0:
            tab[i] = [-x for x in tab[i]]
            rhs[i] = -rhs[i]
            flip[i] = True

    # Artificial variable i is basis entry -1-i; Bland key n+i.
    basis = [-1 - i for i in range(m)]
    key = [n + i for i in range(m)]
    d = [sum((tab[i][j] for i in range(m)), Fraction(0)) for j in range(n)]
    z = -sum(rhs, Fraction(0))
    _run_simplex(tab, rhs, basis, d, z, key)
    phase1 = -sum((rhs[i] for i in range(m) if basis[i] < 0), Fraction(0))

    if phase1 < 0:
        # Farkas ray from the phase-one dual: y = c_B B^{-1} with c = -1 on
        # artificials.  Recover it from the original rows of the final basis.
        y = _phase_one_ray(M, b, tab, basis, flip)
        return LPStatus.INFEASIBLE, [], y, None

    # Drive zero-level artificials out of the basis; drop redundant rows.
    keep = list(range(m))
    for i in range(m):
        if basis[i] >= 0:
            continue
        j = next((c for c in range(n) if tab[i][c] != 0 and c not in basis), None)
        if j is None:
            keep.remove(i)
            continue
        _pivot(tab, rhs, i, j)
        basis[i] = j
        key[i] = j
    tab = [tab[i] for i in keep]
    rhs = [rhs[i] for i in keep]
    basis = [basis[i] for i in keep]
    key = [key[i] for i in keep]

    d = [Fraction(x) for x in c]
    z = Fraction(0)
    for i, bj in enumerate(basis):
        cb = c[bj]
        if cb:
            for col, x in enumerate(tab[i]):
                if x:
                    d[col] -= cb * x
            z += cb * rhs[i]
    entering, z = _run_simplex(tab, rhs, basis, d, z, key)

    w = [Fraction(0)] * n
    for i, bj in enumerate(basis):
        w[bj] = rhs[i]
    if entering is not None:
        ray = [Fraction(0)] * n
        ray[entering] = Fraction(1)
        for i, bj in enumerate(basis):
            ray[bj] = -tab[i][entering]
        return LPStatus.UNBOUNDED, w, ray, None

    # Dual: solve B^T y_keep = c_B over the original (unflipped) kept rows.
    B = RatMatrix(len(keep), len(keep), (M[keep[i]][basis[j]] for j in range(len(keep)) for i in range(len(keep))))
    y_keep = solve_square(B, [Fraction(c[bj]) for bj in basis]) if keep else []
    y = [Fraction(0)] * m
    for i, yi in zip(keep, y_keep):
        y[i] = yi
    return LPStatus.OPTIMAL, w, y, z


def _phase_one_ray(M, b, tab, basis, flip) -> list[Fraction]:
    """Farkas ray y with ``Mᵀy ≥ 0`` and ``b·y < 0`` after a failed phase one."""
    m = len(M)
    n = len(M[0]) if m else 0
    # Restrict to rows of a square basis: choose the structural basic
    # columns plus, for each artificial still basic, its own unit column.
    cols = []
    for i, bj in enumerate(basis):
        cols.append(("s", bj) if bj >= 0 else ("a", -1 - bj))
    # Phase-one costs: -1 on artificials, 0 on structurals, in the flipped system.
    B = RatMatrix(
        m,
        m,
        (
            (M[i][idx] * (-1 if flip[i] else 1) if kind == "s" else (1 if i == idx else 0))
            for i in range(m)
            for kind, idx in cols
        ),
    )
    cb = [Fraction(-1) if kind == "a" else Fraction(0) for kind, _ in cols]
    u = solve_square(B.transpose(), cb)
    # u is the dual of max -Σa s.t. M'w + a = b' (M' = flipped); it satisfies
    # M'ᵀu ≥ 0 and b'·u = phase-one value < 0.  Undo the flips.
    y = [(-ui if flip[i] else ui) for i, ui in enumerate(u)]
    assert all(v >= 0 for v in RatMatrix.from_rows(M, n).rmatvec(y)) if n else True
    return y


def lp_max_min_slack(A: RatMatrix, b: Sequence[Fraction | int]) -> LPResult:
    """Maximize ε subject to ``A·x = b`` and ``x_j ≥ ε ≥ 0`` for every j.

    Solved in standard form through the substitution ``x = s + ε·1`` with
    ``s ≥ 0``: columns ``[A | A·1]``, objective ε.  ``Infeasible`` means no
    non-negative solution of ``A·x = b`` exists.
    """
    b = [to_rational(v) for v in b]
    if len(b) != A.rows:
        raise ValueError(f"right-hand side has {len(b)} entries for {A.rows} rows")
    n = A.cols
    rows = A.to_rows()
    M = [row + [sum(row, Fraction(0))] for row in rows]
    cost = [Fraction(0)] * n + [Fraction(1)]
    status, w, y, value = _standard_form_max(M, b, cost)
    if status is LPStatus.INFEASIBLE:
        return LPResult(status, None, (), tuple(y))
    eps = w[n]
    x = tuple(w[j] + eps for j in range(n))
    if status is LPStatus.UNBOUNDED:
        ray = tuple(y[j] + y[n] for j in range(n))
        return LPResult(status, None, x, (), ray)
    return LPResult(status, value, x, tuple(y))


def check_lp_certificate(A: RatMatrix, b: Sequence[Fraction | int], result: LPResult) -> bool:
    """Verify an LP result by substitution alone.

    Optimal: primal feasibility, ``min x = objective``, dual feasibility and
    strong duality.  Infeasible: a valid Farkas ray.  Unbounded: a feasible
    point and a strictly positive direction in the kernel of ``A``.
    """
    b = [to_rational(v) for v in b]
    if result.status is LPStatus.OPTIMAL:
        x, y = list(result.primal), list(result.dual)
        if A.matvec(x) != b:
            return False
        if not x or min(x) != result.objective or result.objective < 0:
            return False
        aty = A.rmatvec(y)
        if any(v < 0 for v in aty) or sum(aty, Fraction(0)) < 1:
            return False
        return sum((bi * yi for bi, yi in zip(b, y)), Fraction(0)) == result.objective
    if result.status is LPStatus.INFEASIBLE:
        y = list(result.dual)
        aty = A.rmatvec(y)
        return all(v >= 0 for v in aty) and sum((bi * yi for bi, yi in zip(b, y)), Fraction(0)) < 0
    x, ray = list(result.primal), list(result.ray)
    if A.matvec(x) != b or not x or min(x) < 0:
        return False
    return len(ray) == len(x) and min(ray) > 0 and not any(A.matvec(ray))
