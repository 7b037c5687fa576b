"""Cayley schemes as dense color matrices.

Convention: ``colors[u, v] = i`` iff ``v = x u`` for some ``x`` in basic set
``i``, i.e. the class of ``v u^-1``.  This is the relation ``{(a, xa)}``:
the second coordinate is the first one multiplied on the left.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .groups import FiniteGroup
from .srings import SRing


class SchemeError(ValueError):
    """Violated scheme axiom (diagonal, surjectivity, transpose closure)."""


class NotCoherent(SchemeError):
    """Intersection numbers depend on the chosen pair.

    ``pairs`` holds two pairs of color ``k`` with different counts of
    ``h`` such that ``color(f, h) = i`` and ``color(h, g) = j``.
    """

    def __init__(self, i: int, j: int, k: int, pairs):
        self.i, self.j, self.k, self.pairs = i, j, k, pairs
        super().__init__(f"intersection number for colors ({i}, {j}) differs on color {k}: pairs {pairs[0]} and {pairs[1]}")


@dataclass(frozen=True, eq=False)
class CayleyScheme:
    group: FiniteGroup
    colors: np.ndarray = field(repr=False)
    num_colors: int

    @property
    def degree(self) -> int:
        return int(self.colors.shape[0])

    def color(self, u: int, v: int) -> int:
        return int(self.colors[u, v])

    def dump(self) -> str:
        return "\n".join(" ".join(map(str, row)) for row in self.colors.tolist()) + "\n"


def to_scheme(S: SRing) -> CayleyScheme:
    G = S.group
    # colors[u, v] = class of v * u^-1
    vu = G.table[:, G.inverse]  # vu[v, u] = v * u^-1
    colors = S.partition.class_of[vu.T]
    return CayleyScheme(G, colors, S.rank)


def from_colors(G: FiniteGroup, colors) -> CayleyScheme:
    arr = np.asarray(colors, dtype=np.int64)
    return CayleyScheme(G, arr, int(arr.max()) + 1)


def transpose_map(C: CayleyScheme) -> list[int]:
    """``i -> i*`` with ``color(v, u) = i*`` whenever ``color(u, v) = i``."""
    M = C.colors
    n = C.degree
    if M.shape != (n, n):
        raise SchemeError("color matrix must be square")
    diag = np.diag(M)
    if (diag != 0).any() or ((M == 0) & ~np.eye(n, dtype=bool)).any():
        raise SchemeError("color 0 must be exactly the diagonal")
    if set(np.unique(M).tolist()) != set(range(C.num_colors)):
        raise SchemeError("colors are not surjective onto 0..r-1")
    star = [-1] * C.num_colors
    for i in range(C.num_colors):
        ts = np.unique(M.T[M == i])
        if ts.size != 1:
            raise SchemeError(f"transpose of color {i} is not a single color")
        star[i] = int(ts[0])
    return star


def verify_scheme(C: CayleyScheme) -> np.ndarray:
    """Check the scheme axioms and return the intersection tensor ``q[i][j][k]``."""
    transpose_map(C)
    r = C.num_colors
    M = C.colors
    onehot = np.stack([(M == i) for i in range(r)]).astype(np.float64)
    q = np.zeros((r, r, r), dtype=np.int64)
    # representative pair of each color
    reps = [tuple(int(v) for v in np.argwhere(M == k)[0]) for k in range(r)]
    for i in range(r):
        # counts[j, f, g] = #{h : color(f,h)=i, color(h,g)=j}; values <= n, exact in float64
        counts = np.rint(np.matmul(onehot[i], onehot)).astype(np.int64)
        for j in range(r):
            cnt = counts[j]
            expect = np.array([cnt[reps[k]] for k in range(r)], dtype=np.int64)
            bad = np.argwhere(cnt != expect[M])
            if bad.size:
                f, g = (int(v) for v in bad[0])
                k = int(M[f, g])
                raise NotCoherent(i, j, k, (reps[k], (f, g)))
            q[i, j] = expect
    return q


def neighborhood(C: CayleyScheme, v: int, i: int) -> set[int]:
    return set(np.flatnonzero(C.colors[v] == i).tolist())
