from __future__ import annotations

import math
import random
from itertools import permutations

import numpy as np
import pytest

from schurkit.autgrp import PermGroup, right_translations
from schurkit.constructions import m27_partition, m3n_partition
from schurkit.groups import mk_cyclic, mk_from_table
from schurkit.srings import structure_constants


def compose(p, q):
    """Apply p, then q."""
    return tuple(q[x] for x in p)


def table_from_perms(gens):
    """Cayley table of the permutation group generated by ``gens``, identity first."""
    n = len(gens[0])
    ident = tuple(range(n))
    elems = [ident]
    index = {ident: 0}
    for x in elems:
        for g in gens:
            y = compose(x, g)
            if y not in index:
                index[y] = len(elems)
                elems.append(y)
    return [[index[compose(x, y)] for y in elems] for x in elems]


def direct_product_table(m1, m2):
    order = m1 * m2
    return [[((x // m2 + y // m2) % m1) * m2 + (x % m2 + y % m2) % m2 for y in range(order)] for x in range(order)]


def quaternion_table():
    """Q8 from 2x2 Gaussian-integer matrices."""
    one = np.eye(2, dtype=complex)
    i = np.array([[1j, 0], [0, -1j]])
    j = np.array([[0, 1], [-1, 0]], dtype=complex)
    k = i @ j
    elems = [one, -one, i, -i, j, -j, k, -k]

    def find(m):
        return next(t for t, e in enumerate(elems) if np.array_equal(e, m))

    return [[find(x @ y) for y in elems] for x in elems]


def small_groups(max_order=8):
    """Fixture groups: cyclic groups plus the small non-cyclic ones."""
    groups = {f"C{m}": mk_cyclic(m) for m in range(1, max_order + 1)}
    groups["K4"] = mk_from_table(direct_product_table(2, 2))
    groups["S3"] = mk_from_table(table_from_perms([(1, 2, 0), (1, 0, 2)]))
    groups["D4"] = mk_from_table(table_from_perms([(1, 2, 3, 0), (0, 3, 2, 1)]))
    groups["Q8"] = mk_from_table(quaternion_table())
    groups["C2xC4"] = mk_from_table(direct_product_table(2, 4))
    groups["C2xC2xC2"] = mk_from_table(table_from_perms([(1, 0, 2, 3, 4, 5), (0, 1, 3, 2, 4, 5), (0, 1, 2, 3, 5, 4)]))
    return {k: g for k, g in groups.items() if g.order <= max_order}


def medium_groups():
    """Groups of order 9..24 for the round-trip property."""
    groups = {f"C{m}": mk_cyclic(m) for m in (9, 10, 12, 15, 16, 18, 20, 24)}
    groups["C3xC3"] = mk_from_table(direct_product_table(3, 3))
    groups["A4"] = mk_from_table(table_from_perms([(1, 2, 0, 3), (1, 0, 3, 2)]))
    groups["D6"] = mk_from_table(table_from_perms([(1, 2, 3, 4, 5, 0), (0, 5, 4, 3, 2, 1)]))
    groups["S4"] = mk_from_table(table_from_perms([(1, 2, 3, 0), (1, 0, 2, 3)]))
    groups["D10"] = mk_from_table(table_from_perms([tuple((x + 1) % 10 for x in range(10)), tuple((-x) % 10 for x in range(10))]))
    groups["C2xC6"] = mk_from_table(direct_product_table(2, 6))
    return groups


def brute_force_aut_order(colors) -> int:
    """Count color-preserving permutations by enumerating all of them."""
    M = np.asarray(colors)
    n = M.shape[0]
    perms = np.array(list(permutations(range(n))), dtype=np.int64).reshape(-1, n)
    images = M[perms[:, :, None], perms[:, None, :]]
    return int((images == M[None]).all(axis=(1, 2)).sum())


def brute_force_orbits(n, gens):
    """Orbits by closing the generated group element set (tiny groups only)."""
    ident = tuple(range(n))
    elems = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in elems:
                    elems.add(y)
                    new.append(y)
        frontier = new
    return elems


def random_overgroup(G, rng: random.Random) -> PermGroup:
    """G_right plus one or two random extra permutations.

    The extras are drawn from inner automorphisms, power maps, left
    translations and arbitrary permutations fixing the identity.
    """
    n = G.order
    T, inv = G.table, G.inverse
    extras = []
    for _ in range(rng.choice([1, 1, 2])):
        kind = rng.choice(["inner", "power", "left", "swap", "random"])
        if kind == "inner":
            g = rng.randrange(n)
            extras.append(tuple(int(T[T[inv[g], x], g]) for x in range(n)))
        elif kind == "power":
            ks = [k for k in range(2, max(n, 3)) if math.gcd(k, n) == 1]
            k = rng.choice(ks) if ks else 1
            img = []
            for x in range(n):
                y = 0
                for _ in range(k):
                    y = int(T[y, x])
                img.append(y)
            extras.append(tuple(img))
        elif kind == "left":
            g = rng.randrange(n)
            extras.append(tuple(int(T[g, x]) for x in range(n)))
        elif kind == "swap" and n > 2:
            x, y = rng.sample(range(1, n), 2)
            img = list(range(n))
            img[x], img[y] = y, x
            extras.append(tuple(img))
        else:
            rest = list(range(1, n))
            rng.shuffle(rest)
            extras.append(tuple([0] + rest))
    gens = right_translations(G).generators + [e for e in extras if len(set(e)) == n]
    return PermGroup(n, gens)


@pytest.fixture(scope="session")
def m27():
    G, P = m27_partition()
    return structure_constants(G, P)


@pytest.fixture(scope="session")
def m81():
    G, P = m3n_partition(4)
    return structure_constants(G, P)


@pytest.fixture(scope="session")
def m243():
    G, P = m3n_partition(5)
    return structure_constants(G, P)
