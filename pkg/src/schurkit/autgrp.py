"""Permutation groups and automorphism search for Cayley schemes.

Permutations are tuples of images: ``p[x]`` is the image of ``x``.  Products
are read left to right, ``mul(p, q)`` applies ``p`` first.

Groups keep a stabilizer chain built by the deterministic Schreier-Sims
algorithm.  Scheme automorphisms are found by individualization and color
refinement along a first path, testing coset representatives level by level
from the deepest one up, with the right regular representation as the seed
group.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .groups import FiniteGroup
from .schemes import CayleyScheme

Perm = tuple[int, ...]


def identity(n: int) -> Perm:
    return tuple(range(n))


def mul(p: Perm, q: Perm) -> Perm:
    return tuple(q[x] for x in p)


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for x, y in enumerate(p):
        out[y] = x
    return tuple(out)


def is_identity(p: Perm) -> bool:
    return all(x == y for x, y in enumerate(p))


def check_perm(p) -> Perm:
    p = tuple(int(x) for x in p)
    if sorted(p) != list(range(len(p))):
        raise ValueError("not a permutation")
    return p


def format_perm(p: Perm) -> str:
    return " ".join(map(str, p))


def parse_perm(line: str) -> Perm:
    return check_perm(line.split())


def _first_moved(p: Perm) -> int:
    return next(x for x, y in enumerate(p) if x != y)


@dataclass
class StabilizerChain:
    base: list[int]
    strong: list[list[Perm]]
    transversals: list[dict[int, Perm]]

    def order(self) -> int:
        return math.prod(len(t) for t in self.transversals)

    def strip(self, g: Perm, start: int = 0) -> tuple[Perm, int]:
        for level in range(start, len(self.base)):
            beta = g[self.base[level]]
            u = self.transversals[level].get(beta)
            if u is None:
                return g, level
            g = mul(g, inverse(u))
        return g, len(self.base)


def _transversal(point: int, gens: list[Perm]) -> dict[int, Perm]:
    n = len(gens[0]) if gens else 0
    trans = {point: identity(n) if n else ()}
    queue = [point]
    for x in queue:
        for s in gens:
            y = s[x]
            if y not in trans:
                trans[y] = mul(trans[x], s)
                queue.append(y)
    return trans


def schreier_sims(gens: list[Perm], degree: int, base_prefix=()) -> StabilizerChain:
    base = list(base_prefix)
    strong = [g for g in gens if not is_identity(g)]
    for g in strong:
        if all(g[b] == b for b in base):
            base.append(_first_moved(g))
    S = [[g for g in strong if all(g[b] == b for b in base[:i])] for i in range(len(base))]
    T = [_transversal(base[i], S[i]) if S[i] else {base[i]: identity(degree)} for i in range(len(base))]
    chain = StabilizerChain(base, S, T)

    i = len(base) - 1
    while i >= 0:
        restart = False
        for beta, u in list(T[i].items()):
            for s in S[i]:
                h = mul(mul(u, s), inverse(T[i][s[beta]]))
                if is_identity(h):
                    continue
                res, j = chain.strip(h, i + 1)
                if j == len(base) and is_identity(res):
                    continue
                if j == len(base):
                    base.append(_first_moved(res))
                    S.append([])
                    T.append({})
                for level in range(i + 1, j + 1):
                    S[level].append(res)
                    T[level] = _transversal(base[level], S[level])
                i = j
                restart = True
                break
            if restart:
                break
        if not restart:
            i -= 1
    return chain


class PermGroup:
    """A permutation group on ``0..degree-1`` given by generators."""

    def __init__(self, degree: int, generators=(), base_prefix=()):
        self.degree = degree
        self.generators: list[Perm] = []
        seen = set()
        for g in generators:
            g = check_perm(g)
            if len(g) != degree:
                raise ValueError("generator degree mismatch")
            if not is_identity(g) and g not in seen:
                seen.add(g)
                self.generators.append(g)
        self._base_prefix = tuple(base_prefix)
        self._chain: StabilizerChain | None = None

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, order={self.order()})"

    @classmethod
    def symmetric(cls, n: int) -> PermGroup:
        if n < 2:
            return cls(n)
        cycle = tuple(range(1, n)) + (0,)
        swap = (1, 0) + tuple(range(2, n))
        return cls(n, [cycle, swap])

    @property
    def chain(self) -> StabilizerChain:
        if self._chain is None:
            self._chain = schreier_sims(self.generators, self.degree, self._base_prefix)
        return self._chain

    def order(self) -> int:
        return self.chain.order()

    def contains(self, g) -> bool:
        g = tuple(g)
        if len(g) != self.degree:
            return False
        res, level = self.chain.strip(g)
        return level == len(self.chain.base) and is_identity(res)

    def contains_group(self, other: PermGroup) -> bool:
        return all(self.contains(g) for g in other.generators)

    def orbit(self, x: int) -> list[int]:
        return sorted(_orbit(x, self.generators))

    def orbits(self) -> list[tuple[int, ...]]:
        return orbits(self)

    def stabilizer(self, x: int) -> PermGroup:
        return stabilizer(self, x)

    def elements(self):
        """All elements; only sensible for small groups."""
        chain = self.chain

        def rec(level, acc):
            if level == len(chain.base):
                yield acc
                return
            for u in chain.transversals[level].values():
                yield from rec(level + 1, mul(u, acc))

        yield from rec(0, identity(self.degree))


def _orbit(x: int, gens: list[Perm]) -> set[int]:
    orb = {x}
    queue = [x]
    for y in queue:
        for g in gens:
            z = g[y]
            if z not in orb:
                orb.add(z)
                queue.append(z)
    return orb


def orbits(P: PermGroup) -> list[tuple[int, ...]]:
    """Orbit partition, each orbit sorted, orbits ordered by smallest point."""
    seen: set[int] = set()
    out = []
    for x in range(P.degree):
        if x not in seen:
            orb = _orbit(x, P.generators)
            seen |= orb
            out.append(tuple(sorted(orb)))
    return out


def stabilizer(P: PermGroup, x: int) -> PermGroup:
    chain = schreier_sims(P.generators, P.degree, (x,))
    gens = chain.strong[1] if len(chain.base) > 1 else []
    return PermGroup(P.degree, gens)


def is_block_system(P: PermGroup, blocks) -> bool:
    """True iff every generator maps each block onto a block."""
    block_of = np.full(P.degree, -1, dtype=np.int64)
    for k, b in enumerate(blocks):
        b = list(b)
        if not b or (block_of[b] >= 0).any():
            raise ValueError("blocks must be disjoint and non-empty")
        block_of[b] = k
    if (block_of < 0).any():
        raise ValueError("blocks do not cover the point set")
    for g in P.generators:
        ga = np.asarray(g)
        for b in blocks:
            images = block_of[ga[list(b)]]
            if (images != images[0]).any():
                return False
    return True


def right_translations(G: FiniteGroup) -> PermGroup:
    """The right regular representation ``x -> x g``."""
    gens = [tuple(G.table[:, g].tolist()) for g in G.generators()]
    return PermGroup(G.order, gens)


# automorphism search


class _Refiner:
    def __init__(self, colors: np.ndarray, num_colors: int):
        self.M = colors
        self.r = num_colors
        self.n = colors.shape[0]
        self._weights: dict[int, np.ndarray] = {}

    def _weight_table(self, k: int) -> np.ndarray:
        # fixed pseudo-random weights per (color, cell) key; int64 sums wrap deterministically
        if k not in self._weights:
            rng = np.random.default_rng(k)
            self._weights[k] = rng.integers(-(2**62), 2**62, size=(self.r * k, 2), dtype=np.int64)
        return self._weights[k]

    def refine(self, cells: list[list[int]]) -> tuple[list[list[int]], bytes]:
        """Color refinement to an equitable partition.

        A vertex's signature is the multiset of (edge color, cell of target)
        pairs, hashed with weights that depend only on the pair.  Split
        cells are ordered by hash, so the result does not depend on vertex
        labels.  Returns the cells and a hash invariant of the partition.
        """
        n, M = self.n, self.M
        while True:
            k = len(cells)
            if k == n:
                return cells, b""
            cell_of = np.empty(n, dtype=np.int64)
            for idx, c in enumerate(cells):
                cell_of[c] = idx
            weights = self._weight_table(k)
            keys = M * k + cell_of[None, :]
            with np.errstate(over="ignore"):
                sig = weights[keys].sum(axis=1)
            _, sig_id = np.unique(sig, axis=0, return_inverse=True)
            sig_id = sig_id.ravel()
            new_cells = []
            changed = False
            for c in cells:
                if len(c) == 1:
                    new_cells.append(c)
                    continue
                ids = sig_id[c]
                if (ids == ids[0]).all():
                    new_cells.append(c)
                    continue
                changed = True
                for v in np.unique(ids):
                    new_cells.append([x for x, i in zip(c, ids) if i == v])
            if not changed:
                firsts = [c[0] for c in cells]
                inv = np.asarray([len(c) for c in cells], dtype=np.int64).tobytes() + sig[firsts].tobytes()
                return cells, inv
            cells = new_cells


def _target_cell(cells: list[list[int]]) -> int | None:
    best = None
    for idx, c in enumerate(cells):
        if len(c) > 1 and (best is None or len(c) < len(cells[best])):
            best = idx
    return best


def _individualize(cells: list[list[int]], t: int, v: int) -> list[list[int]]:
    rest = [x for x in cells[t] if x != v]
    return cells[:t] + [[v], rest] + cells[t + 1 :]


def is_automorphism(C: CayleyScheme, g) -> bool:
    g = np.asarray(g)
    return bool(np.array_equal(C.colors[np.ix_(g, g)], C.colors))


class _Search:
    def __init__(self, C: CayleyScheme):
        self.C = C
        self.n = C.degree
        self.refiner = _Refiner(C.colors, C.num_colors)
        self.nodes = 0
        # first path: (cells, target cell, chosen vertex), invariants by depth
        self.path: list[tuple[list[list[int]], int, int]] = []
        cells, inv = self.refiner.refine([list(range(self.n))])
        self.invariants = [inv]
        while (t := _target_cell(cells)) is not None:
            v = min(cells[t])
            self.path.append((cells, t, v))
            cells, inv = self.refiner.refine(_individualize(cells, t, v))
            self.invariants.append(inv)
        self.leaf = [c[0] for c in cells]

    def _child(self, cells, depth, w):
        t = self.path[depth][1]
        child, inv = self.refiner.refine(_individualize(cells, t, w))
        self.nodes += 1
        target = self.path[depth + 1][0] if depth + 1 < len(self.path) else None
        if inv != self.invariants[depth + 1]:
            return None
        if target is not None and len(child) != len(target):
            return None
        return child

    def _dfs(self, cells, depth) -> Perm | None:
        if depth == len(self.path):
            g = [0] * self.n
            for pos, v in enumerate(self.leaf):
                g[v] = cells[pos][0]
            g = tuple(g)
            return g if is_automorphism(self.C, g) else None
        t = self.path[depth][1]
        for w in sorted(cells[t]):
            child = self._child(cells, depth, w)
            if child is not None:
                found = self._dfs(child, depth + 1)
                if found is not None:
                    return found
        return None

    def find_mapping(self, depth: int, w: int) -> Perm | None:
        """An automorphism fixing the path prefix and sending its vertex at
        ``depth`` to ``w``, or None."""
        cells = self.path[depth][0]
        child = self._child(cells, depth, w)
        if child is None:
            return None
        return self._dfs(child, depth + 1)


def scheme_automorphisms(C: CayleyScheme, parallel: bool = False, max_workers: int | None = None) -> PermGroup:
    """Full color-preserving automorphism group of a Cayley scheme."""
    search = _Search(C)
    seeds = right_translations(C.group).generators
    found: list[Perm] = []
    chosen = [v for _, _, v in search.path]
    pool = ThreadPoolExecutor(max_workers=max_workers) if parallel else None
    try:
        for depth in range(len(search.path) - 1, -1, -1):
            prefix = chosen[:depth]
            gens = [g for g in seeds + found if all(g[x] == x for x in prefix)]
            cells, t, v = search.path[depth]
            orb = _orbit(v, gens)
            candidates = [w for w in sorted(cells[t]) if w not in orb]
            if pool is not None and len(candidates) > 1:
                results = list(pool.map(lambda w: search.find_mapping(depth, w), candidates))
            else:
                results = None
            for idx, w in enumerate(candidates):
                if w in orb:
                    continue
                g = results[idx] if results is not None else search.find_mapping(depth, w)
                if g is not None:
                    found.append(g)
                    gens.append(g)
                    orb = _orbit(v, gens)
    finally:
        if pool is not None:
            pool.shutdown()

    for g in found:
        if not is_automorphism(C, g):
            raise AssertionError("search produced a non-automorphism")
    group = PermGroup(C.degree, seeds + found)
    if not group.contains_group(right_translations(C.group)):
        raise AssertionError("automorphism group misses the right translations")
    return group

