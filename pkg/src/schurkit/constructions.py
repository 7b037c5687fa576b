"""The two non-schurian S-rings over ``M_27`` and ``M_{3^n}`` (n >= 4).

Basic sets are emitted in a fixed order: ``Z_0..Z_5``, then ``X_k, Y_k``
interleaved by ``k``, then ``T_j`` with ``j`` ascending.
"""

from __future__ import annotations

from dataclasses import dataclass

from .groups import DEFAULT_ORDER_CAP, FiniteGroup, GroupError, mk_metacyclic, subgroup_generated
from .srings import Partition, verify_partition


@dataclass(frozen=True)
class PaperFamily:
    name: str
    n: int
    expected_class_count: int


def m3n_ranges(n: int) -> tuple[list[int], list[int]]:
    """Index ranges ``(ks, js)`` for the ``X_k, Y_k`` and ``T_j`` sets."""
    ks = list(range(1, (3 ** (n - 3) - 1) // 2 + 1))
    # j = 1 is excluded: aH and a^-1 H are already split into Z_4 and Z_5
    js = [j for j in range(2, (3 ** (n - 2) - 1) // 2 + 1) if j % 3]
    return ks, js


def family(name: str, n: int = 3) -> PaperFamily:
    if name == "m27":
        return PaperFamily("m27", 3, 4)
    if name == "m3n":
        if n < 4:
            raise GroupError("m3n needs n >= 4; use the m27 family for n = 3")
        ks, js = m3n_ranges(n)
        return PaperFamily("m3n", n, 6 + 2 * len(ks) + len(js))
    raise GroupError(f"unknown family {name!r}")


_Z2_M27 = ["a1", "a3", "a6", "a8", "a4b2", "a7b1", "a8b1", "a8b2"]


def m27_partition(cap: int = DEFAULT_ORDER_CAP) -> tuple[FiniteGroup, Partition]:
    G = mk_metacyclic(3, 3, cap=cap)
    U = subgroup_generated(G, [G.parse("a3b1")])
    z1 = [x for x in U.members if x != 0]
    z2 = [G.parse(t) for t in _Z2_M27]
    used = {0, *z1, *z2}
    z3 = [x for x in range(G.order) if x not in used]
    P = verify_partition(G, [[0], z1, z2, z3], ["Z_0", "Z_1", "Z_2", "Z_3"])
    return G, P


def m3n_subgroups(G: FiniteGroup) -> dict[str, tuple[int, ...]]:
    """The named subgroups ``A, B, C, H`` of ``M_{3^n}``."""
    n = G.params["n"]
    c = G.element(3 ** (n - 2), 0)
    b = G.element(0, 1)
    a = G.element(1, 0)
    return {
        "A": subgroup_generated(G, [a]).members,
        "B": subgroup_generated(G, [b]).members,
        "C": subgroup_generated(G, [c]).members,
        "H": subgroup_generated(G, [c, b]).members,
    }


def m3n_partition(n: int, cap: int = DEFAULT_ORDER_CAP) -> tuple[FiniteGroup, Partition]:
    if n < 4:
        raise GroupError("m3n_partition needs n >= 4; use m27_partition for n = 3")
    G = mk_metacyclic(3, n, cap=cap)
    mul = G.product
    m = 3 ** (n - 2)
    a = G.element(1, 0)
    a_inv = G.inv(a)
    b, b2 = G.element(0, 1), G.element(0, 2)
    c, c2 = G.element(m, 0), G.element(2 * m, 0)
    sub = m3n_subgroups(G)
    C, H = sub["C"], sub["H"]

    def coset(g, S):
        return {G.mul(g, x) for x in S}

    def apow(i):
        return G.element(i, 0)

    z4 = {mul(a, y) for y in (0, mul(c, b), mul(c2, b2))} | {mul(a_inv, y) for y in (0, mul(c2, b), mul(c, b2))}
    z5 = (coset(a, H) | coset(a_inv, H)) - z4
    classes = [
        [0],
        [b, b2],
        [c, c2],
        sorted(set(H) - {0, b, b2, c, c2}),
        sorted(z4),
        sorted(z5),
    ]
    labels = [f"Z_{i}" for i in range(6)]
    ks, js = m3n_ranges(n)
    for k in ks:
        xk = coset(apow(3 * k), C) | coset(apow(-3 * k), C)
        yk = (coset(apow(3 * k), H) | coset(apow(-3 * k), H)) - xk
        classes += [sorted(xk), sorted(yk)]
        labels += [f"X_{k}", f"Y_{k}"]
    for j in js:
        classes.append(sorted(coset(apow(j), H) | coset(apow(-j), H)))
        labels.append(f"T_{j}")
    P = verify_partition(G, classes, labels)
    if sum(P.sizes) != G.order or P.rank != family("m3n", n).expected_class_count:
        raise GroupError("basic sets do not partition the group")
    return G, P


def paper_partition(name: str, n: int = 3, cap: int = DEFAULT_ORDER_CAP) -> tuple[FiniteGroup, Partition]:
    if name == "m27":
        return m27_partition(cap=cap)
    if name == "m3n":
        return m3n_partition(n, cap=cap)
    raise GroupError(f"unknown family {name!r}")
