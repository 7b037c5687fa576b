"""Partitions of a group, S-ring verification and structure constants.

Group-ring vectors are plain ``int64`` numpy arrays indexed by element.  All
arithmetic is exact; products that could leave the int64 range raise
``OverflowError`` instead of wrapping.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np

from .groups import FiniteGroup, GroupError, Subgroup, is_normal, quotient

_INT64_LIMIT = 2**62


class PartitionError(ValueError):
    """The raw sets are not a valid S-ring partition."""


class NotClosed(ValueError):
    """A product of class sums is not a combination of class sums.

    ``x`` and ``y`` are two elements of class ``k`` whose coefficients in
    ``xi_i * xi_j`` differ (``cx`` versus ``cy``).
    """

    def __init__(self, i: int, j: int, k: int, x: int, y: int, cx: int, cy: int):
        self.i, self.j, self.k = i, j, k
        self.x, self.y, self.cx, self.cy = x, y, cx, cy
        super().__init__(
            f"product of classes {i} and {j} is not constant on class {k}: "
            f"element {x} has coefficient {cx}, element {y} has {cy}"
        )


@dataclass(frozen=True, eq=False)
class Partition:
    group: FiniteGroup
    classes: tuple[tuple[int, ...], ...]
    labels: tuple[str | None, ...]
    class_of: np.ndarray = field(repr=False)
    star: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.classes)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.classes)

    def label(self, i: int) -> str:
        return self.labels[i] or f"X{i}"

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def as_sets(self) -> set[frozenset[int]]:
        return {frozenset(c) for c in self.classes}

    def union(self, indices) -> tuple[int, ...]:
        return tuple(sorted(x for i in indices for x in self.classes[i]))


def verify_partition(G: FiniteGroup, raw, labels=None) -> Partition:
    """Check S-ring conditions (1) and (2) and move ``{e}`` to the front."""
    classes = [tuple(sorted(set(int(x) for x in c))) for c in raw]
    labels = list(labels) if labels is not None else [None] * len(classes)
    if len(labels) != len(classes):
        raise PartitionError("one label per class is required")
    if any(len(c) == 0 for c in classes):
        raise PartitionError("empty class")
    class_of = np.full(G.order, -1, dtype=np.int64)
    for k, c in enumerate(classes):
        if min(c) < 0 or max(c) >= G.order:
            raise PartitionError(f"class {k} contains an element outside the group")
        if (class_of[list(c)] >= 0).any():
            raise PartitionError(f"class {k} overlaps an earlier class")
        class_of[list(c)] = k
    if (class_of < 0).any():
        missing = int(np.flatnonzero(class_of < 0)[0])
        raise PartitionError(f"sets do not cover the group (element {missing} missing)")
    k0 = int(class_of[0])
    if classes[k0] != (0,):
        raise PartitionError("the identity is not a singleton class")
    order = [k0] + [k for k in range(len(classes)) if k != k0]
    classes = [classes[k] for k in order]
    labels = [labels[k] for k in order]
    for k, c in enumerate(classes):
        class_of[list(c)] = k

    star = []
    for k, c in enumerate(classes):
        inv = tuple(sorted(G.inverse[list(c)].tolist()))
        k_star = int(class_of[inv[0]])
        if classes[k_star] != inv:
            raise PartitionError(f"class {k} ({labels[k] or k}) is not inverse-closed: its inverse set is not a class")
        star.append(k_star)
    return Partition(G, tuple(classes), tuple(labels), class_of, tuple(star))


def class_sum(P: Partition, i: int) -> np.ndarray:
    if not 0 <= i < P.rank:
        raise IndexError(f"class index {i} out of range 0..{P.rank - 1}")
    v = np.zeros(P.group.order, dtype=np.int64)
    v[list(P.classes[i])] = 1
    return v


def ring_mul(G: FiniteGroup, u, v) -> np.ndarray:
    """Product in ZG: ``w[g] = sum over xy = g of u[x] v[y]``."""
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    if int(np.abs(u).sum()) * int(np.abs(v).sum()) >= _INT64_LIMIT:
        raise OverflowError("group ring product may exceed the int64 range")
    w = np.zeros(G.order, dtype=np.int64)
    for x in np.flatnonzero(u):
        # y -> xy is a bijection, so no index repeats within one row
        w[G.table[x]] += u[x] * v
    return w


@dataclass(frozen=True, eq=False)
class SRing:
    partition: Partition
    constants: np.ndarray = field(repr=False)

    @property
    def group(self) -> FiniteGroup:
        return self.partition.group

    @property
    def rank(self) -> int:
        return self.partition.rank

    def product(self, i: int, j: int) -> dict[int, int]:
        """Nonzero ``k -> p[i][j][k]`` for ``xi_i * xi_j``."""
        row = self.constants[i, j]
        return {int(k): int(row[k]) for k in np.flatnonzero(row)}

    def __repr__(self) -> str:
        return f"SRing({self.group!r}, rank={self.rank})"


def _class_product(G: FiniteGroup, ci, cj) -> np.ndarray:
    return np.bincount(G.table[np.ix_(ci, cj)].ravel(), minlength=G.order).astype(np.int64)


def structure_constants(G: FiniteGroup, P: Partition) -> SRing:
    """Decompose every product of class sums; raise ``NotClosed`` otherwise."""
    r = P.rank
    p = np.zeros((r, r, r), dtype=np.int64)
    cls = [np.array(c) for c in P.classes]
    firsts = np.array([c[0] for c in P.classes])
    for i in range(r):
        for j in range(r):
            w = _class_product(G, cls[i], cls[j])
            coeff = w[firsts]
            bad = np.flatnonzero(w != coeff[P.class_of])
            if bad.size:
                y = int(bad[0])
                k = int(P.class_of[y])
                x = P.classes[k][0]
                raise NotClosed(i, j, k, x, y, int(w[x]), int(w[y]))
            p[i, j] = coeff
    return SRing(P, p)


def make_sring(G: FiniteGroup, raw, labels=None) -> SRing:
    return structure_constants(G, verify_partition(G, raw, labels))


def check_tensor_invariants(S: SRing) -> None:
    """Assert the identity-column, size-sum and transpose identities."""
    p = S.constants
    sizes = np.array(S.partition.sizes)
    star = np.array(S.partition.star)
    r = S.rank
    expected0 = np.zeros((r, r), dtype=np.int64)
    expected0[np.arange(r), star] = sizes
    if not np.array_equal(p[:, :, 0], expected0):
        raise AssertionError("p[i][j][0] != |X_i| [j = i*]")
    if not np.array_equal(p @ sizes, np.outer(sizes, sizes)):
        raise AssertionError("sum_k p[i][j][k] |X_k| != |X_i| |X_j|")
    # p[i][j][k] = p[j*][i*][k*]
    if not np.array_equal(p, p[np.ix_(star, star, star)].transpose(1, 0, 2)):
        raise AssertionError("p[i][j][k] != p[j*][i*][k*]")


def is_commutative(S: SRing) -> bool:
    return bool(np.array_equal(S.constants, S.constants.transpose(1, 0, 2)))


def _product_support(S: SRing, idx: frozenset[int]) -> frozenset[int]:
    sub = np.array(sorted(idx))
    block = S.constants[np.ix_(sub, sub)]
    return frozenset(np.flatnonzero(block.any(axis=(0, 1))).tolist())


def _closure(S: SRing, idx) -> frozenset[int]:
    cur = frozenset(idx) | {0}
    while True:
        nxt = cur | _product_support(S, cur)
        if nxt == cur:
            return cur
        cur = nxt


def a_subgroup_classes(S: SRing) -> list[frozenset[int]]:
    """Class-index sets of all A-subgroups, smallest first.

    Starts from the subgroups generated by single basic sets and closes
    the family under joins.
    """
    found = {_closure(S, {i}) for i in range(S.rank)}
    frontier = set(found)
    while frontier:
        new = set()
        for x in frontier:
            for y in list(found):
                z = _closure(S, x | y)
                if z not in found:
                    new.add(z)
        found |= new
        frontier = new
    return sorted(found, key=lambda s: (len(S.partition.union(s)), sorted(s)))


def a_subgroups(S: SRing) -> list[Subgroup]:
    return [Subgroup(S.group, S.partition.union(idx)) for idx in a_subgroup_classes(S)]


def is_a_subgroup(S: SRing, H: Subgroup) -> bool:
    members = set(H.members)
    ks = {int(S.partition.class_of[x]) for x in members}
    return len(members) == sum(S.partition.sizes[k] for k in ks) and set(S.partition.union(ks)) == members


def quotient_sring(S: SRing, U: Subgroup, L: Subgroup) -> SRing:
    """The S-ring over the section ``U/L`` spanned by images of basic sets in U."""
    G = S.group
    for name, H in (("U", U), ("L", L)):
        if not is_a_subgroup(S, H):
            raise GroupError(f"{name} is not an A-subgroup")
    if not is_normal(G, L, within=U):
        raise GroupError("L is not normal in U")
    q = quotient(G, U, L)
    images: dict[tuple[int, ...], list[str]] = {}
    ordered: list[tuple[int, ...]] = []
    uset = set(U.members)
    for k, cls in enumerate(S.partition.classes):
        if not set(cls) <= uset:
            continue
        img = tuple(sorted(set(q.projection[list(cls)].tolist())))
        if img not in images:
            images[img] = []
            ordered.append(img)
        images[img].append(S.partition.label(k))
    seen: set[int] = set()
    for img in ordered:
        if seen & set(img):
            raise PartitionError("images of basic sets overlap without coinciding")
        seen |= set(img)
    labels = ["=".join(f"pi({lab})" for lab in images[img]) for img in ordered]
    return make_sring(q.target, ordered, labels)


def full_group_ring(G: FiniteGroup) -> SRing:
    return make_sring(G, [[x] for x in range(G.order)])


def trivial_sring(G: FiniteGroup) -> SRing:
    raw = [[0]] + ([list(range(1, G.order))] if G.order > 1 else [])
    return make_sring(G, raw)


# text formats


def read_partition(G: FiniteGroup, text: str) -> Partition:
    """Parse the partition file format: one basic set per line,
    optional ``label:`` prefix, ``#`` comment lines."""
    raw, labels = [], []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        label = None
        if ":" in line:
            label, line = (s.strip() for s in line.split(":", 1))
        tokens = line.split()
        if not tokens:
            raise PartitionError(f"line {lineno}: empty basic set")
        try:
            raw.append([G.parse(tok) for tok in tokens])
        except GroupError as exc:
            raise PartitionError(f"line {lineno}: {exc}") from exc
        labels.append(label or None)
    return verify_partition(G, raw, labels)


def load_partition(G: FiniteGroup, path: str | Path) -> Partition:
    return read_partition(G, Path(path).read_text(encoding="utf-8"))


def format_partition(P: Partition) -> str:
    lines = [f"# {P.group.spec()}"]
    for k, cls in enumerate(P.classes):
        body = " ".join(P.group.format(x) for x in cls)
        lines.append(f"{P.labels[k]}: {body}" if P.labels[k] else body)
    return "\n".join(lines) + "\n"


def format_constants(S: SRing) -> str:
    """Machine report: ``i j : k1:c1 k2:c2 ...`` per ordered pair."""
    lines = []
    for i in range(S.rank):
        for j in range(S.rank):
            terms = " ".join(f"{k}:{c}" for k, c in S.product(i, j).items())
            lines.append(f"{i} {j} : {terms}")
    return "\n".join(lines) + "\n"


def parse_constants(text: str) -> dict[tuple[int, int], dict[int, int]]:
    out = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        head, _, tail = line.partition(":")
        i, j = (int(v) for v in head.split())
        out[i, j] = {int(k): int(c) for k, c in (t.split(":") for t in tail.split())}
    return out


def noncommuting_pair(S: SRing) -> tuple[int, int] | None:
    for i, j in combinations(range(S.rank), 2):
        if not np.array_equal(S.constants[i, j], S.constants[j, i]):
            return i, j
    return None
