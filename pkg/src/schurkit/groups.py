"""Finite groups on dense element indices.

Every group stores its carrier as the integers ``0..order-1`` with index 0
the identity.  Products and inverses live in numpy arrays, so the rest of the
package can use fancy indexing instead of Python-level loops.

Metacyclic groups ``M_{p^n} = <a, b | a^{p^(n-1)} = b^p = e, b^-1 a b = a^t>``
with ``t = p^(n-2) + 1`` are built from the normal form ``a^i b^j``.  Moving
``b`` to the right of ``a`` uses ``b a = a^s b`` where ``s`` is the inverse of
``t`` modulo ``p^(n-1)``, which gives

    (a^i1 b^j1)(a^i2 b^j2) = a^(i1 + i2 * s^j1) b^(j1 + j2).

The law is checked against the presentation when the group is built.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

DEFAULT_ORDER_CAP = 2187
EXHAUSTIVE_ASSOC_LIMIT = 729
_ASSOC_SAMPLES = 20000


class GroupError(ValueError):
    """Raised for invalid group constructions, tokens and subgroup requests."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group with a materialized multiplication table.

    ``table[x, y]`` is the index of ``x*y`` and ``inverse[x]`` the index of
    ``x^-1``.  ``kind`` is one of ``"metacyclic"``, ``"cyclic"``, ``"table"``
    and ``params`` holds the constructor arguments.
    """

    kind: str
    params: dict
    table: np.ndarray = field(repr=False)
    inverse: np.ndarray = field(repr=False)

    @property
    def order(self) -> int:
        return int(self.table.shape[0])

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"FiniteGroup({self.spec()!r}, order={self.order})"

    def spec(self) -> str:
        if self.kind == "metacyclic":
            return f"metacyclic:p={self.params['p']},n={self.params['n']}"
        if self.kind == "cyclic":
            return f"cyclic:m={self.params['m']}"
        return f"table:{self.params.get('source', '<memory>')}"

    def mul(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    def inv(self, x: int) -> int:
        return int(self.inverse[x])

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.inv(x), -k
        result = 0
        for _ in range(k):
            result = self.mul(result, x)
        return result

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != 0:
            y = self.mul(y, x)
            k += 1
        return k

    def product(self, *xs: int) -> int:
        result = 0
        for x in xs:
            result = self.mul(result, x)
        return result

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def generators(self) -> list[int]:
        """A small generating set, deterministic for a given group."""
        if self.order == 1:
            return []
        if self.kind == "metacyclic":
            return [self.element(1, 0), self.element(0, 1)]
        if self.kind == "cyclic":
            return [1]
        gens: list[int] = []
        span: set[int] = {0}
        for x in range(1, self.order):
            if x not in span:
                gens.append(x)
                span = set(subgroup_generated(self, gens).members)
                if len(span) == self.order:
                    break
        return gens

    # metacyclic normal form helpers

    def element(self, i: int, j: int = 0) -> int:
        """Index of ``a^i b^j`` in a metacyclic group."""
        if self.kind != "metacyclic":
            raise GroupError("a^i b^j normal form needs a metacyclic group")
        ma, p = self.params["a_order"], self.params["p"]
        return (j % p) * ma + (i % ma)

    def exponents(self, x: int) -> tuple[int, int]:
        """``(i, j)`` with ``x = a^i b^j`` for a metacyclic group."""
        if self.kind != "metacyclic":
            raise GroupError("a^i b^j normal form needs a metacyclic group")
        ma = self.params["a_order"]
        return x % ma, x // ma

    # tokens

    def parse(self, token: str) -> int:
        return parse_element(self, token)

    def format(self, x: int) -> str:
        return format_element(self, x)


def _check_cap(order: int, cap: int) -> None:
    if order > cap:
        raise GroupError(f"group order {order} exceeds the order cap {cap}")


def _inverse_from_table(table: np.ndarray) -> np.ndarray:
    rows, cols = np.nonzero(table == 0)
    inverse = np.full(table.shape[0], -1, dtype=np.int64)
    inverse[rows] = cols
    return inverse


def check_group_axioms(table: np.ndarray, seed: int = 0) -> None:
    """Validate identity, inverses and associativity of a Cayley table.

    Associativity is exhaustive up to ``EXHAUSTIVE_ASSOC_LIMIT`` elements
    and sampled above that.
    """
    order = table.shape[0]
    if table.shape != (order, order):
        raise GroupError("table must be square")
    if table.min() < 0 or table.max() >= order:
        raise GroupError("table entries must be element indices")
    ident = np.arange(order)
    if not (np.array_equal(table[0], ident) and np.array_equal(table[:, 0], ident)):
        raise GroupError("index 0 is not a two-sided identity")
    for row in table:
        if len(np.unique(row)) != order:
            raise GroupError("table rows are not permutations (missing inverses)")
    inverse = _inverse_from_table(table)
    if (inverse < 0).any() or not np.array_equal(table[inverse, ident], np.zeros(order, dtype=table.dtype)):
        raise GroupError("missing two-sided inverses")
    if order <= EXHAUSTIVE_ASSOC_LIMIT:
        for x in range(order):
            # (x y) z versus x (y z) for all y, z
            if not np.array_equal(table[table[x]], table[x][table]):
                raise GroupError(f"table is not associative (first factor {x})")
    else:
        rng = np.random.default_rng(seed)
        x, y, z = rng.integers(0, order, size=(3, _ASSOC_SAMPLES))
        if not np.array_equal(table[table[x, y], z], table[x, table[y, z]]):
            raise GroupError("table is not associative")


def mk_metacyclic(p: int, n: int, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """The metacyclic group ``M_{p^n}`` of order ``p^n``, ``n >= 3``."""
    if not is_prime(p):
        raise GroupError(f"p={p} is not prime")
    if n < 3:
        raise GroupError(f"n={n} must be at least 3")
    _check_cap(p**n, cap)
    ma = p ** (n - 1)
    t = p ** (n - 2) + 1
    s = pow(t, -1, ma)
    # s^j mod p^(n-1) for j = 0..p-1
    spow = np.array([pow(s, j, ma) for j in range(p)], dtype=np.int64)

    idx = np.arange(p**n, dtype=np.int64)
    i, j = idx % ma, idx // ma
    ii = (i[:, None] + i[None, :] * spow[j][:, None]) % ma
    jj = (j[:, None] + j[None, :]) % p
    table = jj * ma + ii

    group = FiniteGroup(
        "metacyclic",
        {"p": p, "n": n, "a_order": ma, "t": t, "s": s},
        table,
        _inverse_from_table(table),
    )
    _validate_metacyclic(group)
    return group


def _validate_metacyclic(G: FiniteGroup) -> None:
    p, ma, t = G.params["p"], G.params["a_order"], G.params["t"]
    if pow(t, p, ma) != 1:
        raise GroupError("t^p != 1 mod p^(n-1); relation b^p = e is inconsistent")
    a, b = G.element(1, 0), G.element(0, 1)
    if G.power(a, ma) != 0 or G.element_order(a) != ma:
        raise GroupError("a does not have order p^(n-1)")
    if G.power(b, p) != 0 or G.element_order(b) != p:
        raise GroupError("b does not have order p")
    if G.product(G.inv(b), a, b) != G.power(a, t):
        raise GroupError("conjugation relation b^-1 a b = a^t fails")
    check_group_axioms(G.table)


def mk_cyclic(m: int, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    if m < 1:
        raise GroupError("cyclic group order must be positive")
    _check_cap(m, cap)
    idx = np.arange(m, dtype=np.int64)
    table = (idx[:, None] + idx[None, :]) % m
    return FiniteGroup("cyclic", {"m": m}, table, (-idx) % m)


def mk_from_table(table, cap: int = DEFAULT_ORDER_CAP, source: str | None = None) -> FiniteGroup:
    """Build a group from an explicit Cayley table after full validation."""
    arr = np.asarray(table, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise GroupError("table must be a non-empty square matrix")
    _check_cap(arr.shape[0], cap)
    check_group_axioms(arr)
    params = {"source": source} if source else {}
    return FiniteGroup("table", params, arr, _inverse_from_table(arr))


def read_table(path: str | Path, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append([int(tok) for tok in line.split()])
    if any(len(r) != len(rows) for r in rows):
        raise GroupError(f"{path}: table is not square")
    return mk_from_table(rows, cap=cap, source=str(path))


_SPEC_RE = re.compile(r"^(metacyclic|cyclic|table):(.+)$")


def parse_group_spec(spec: str, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Parse ``metacyclic:p=3,n=4``, ``cyclic:m=5`` or ``table:<path>``."""
    m = _SPEC_RE.match(spec.strip())
    if not m:
        raise GroupError(f"bad group spec {spec!r}")
    kind, rest = m.groups()
    if kind == "table":
        return read_table(rest, cap=cap)
    try:
        args = dict(item.split("=", 1) for item in rest.split(","))
        args = {k.strip(): int(v) for k, v in args.items()}
    except ValueError as exc:
        raise GroupError(f"bad group spec {spec!r}") from exc
    expected = {"metacyclic": {"p", "n"}, "cyclic": {"m"}}[kind]
    if set(args) != expected:
        raise GroupError(f"{kind} spec needs parameters {sorted(expected)}")
    if kind == "metacyclic":
        return mk_metacyclic(args["p"], args["n"], cap=cap)
    return mk_cyclic(args["m"], cap=cap)


_META_TOKEN = re.compile(r"^(?:a(-?\d+))?(?:b(-?\d+))?$")
_CYCLIC_TOKEN = re.compile(r"^x(-?\d+)$")
_TABLE_TOKEN = re.compile(r"^g?(\d+)$")


def parse_element(G: FiniteGroup, token: str) -> int:
    """Element index from a token such as ``e``, ``a3b2``, ``x4`` or ``g7``."""
    token = token.strip()
    if token == "e":
        return 0
    if G.kind == "metacyclic":
        m = _META_TOKEN.match(token)
        if not m or token == "":
            raise GroupError(f"malformed element token {token!r} for {G.spec()}")
        i, j = (int(v) if v is not None else 0 for v in m.groups())
        return G.element(i, j)
    if G.kind == "cyclic":
        m = _CYCLIC_TOKEN.match(token)
        if not m:
            raise GroupError(f"malformed element token {token!r} for {G.spec()}")
        return int(m.group(1)) % G.order
    m = _TABLE_TOKEN.match(token)
    if not m or int(m.group(1)) >= G.order:
        raise GroupError(f"malformed element token {token!r} for table group")
    return int(m.group(1))


def format_element(G: FiniteGroup, x: int) -> str:
    if x == 0:
        return "e"
    if G.kind == "metacyclic":
        i, j = G.exponents(x)
        return (f"a{i}" if i else "") + (f"b{j}" if j else "")
    if G.kind == "cyclic":
        return f"x{x}"
    return f"g{x}"


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    members: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return x in self._set

    def __len__(self) -> int:
        return len(self.members)

    @property
    def _set(self) -> frozenset[int]:
        return frozenset(self.members)

    def __eq__(self, other) -> bool:
        return isinstance(other, Subgroup) and self.parent is other.parent and self.members == other.members

    def __hash__(self) -> int:
        return hash(self.members)


def subgroup_generated(G: FiniteGroup, gens) -> Subgroup:
    members = {0}
    frontier = [0]
    gens = sorted(set(int(g) for g in gens))
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = G.mul(x, g)
                if y not in members:
                    members.add(y)
                    new.append(y)
        frontier = new
    return Subgroup(G, tuple(sorted(members)))


def as_subgroup(G: FiniteGroup, elements) -> Subgroup:
    """Wrap an element set as a Subgroup, checking closure."""
    members = tuple(sorted(set(int(x) for x in elements)))
    mset = set(members)
    if 0 not in mset:
        raise GroupError("subgroup must contain the identity")
    sub = np.array(members)
    if not set(G.table[np.ix_(sub, sub)].ravel().tolist()) <= mset:
        raise GroupError("element set is not closed under multiplication")
    return Subgroup(G, members)


def left_cosets(G: FiniteGroup, H: Subgroup, within: Subgroup | None = None) -> list[tuple[int, ...]]:
    """Left cosets ``xH``, ordered by smallest element, each sorted."""
    points = within.members if within is not None else range(G.order)
    h = np.array(H.members)
    seen: set[int] = set()
    cosets = []
    for x in points:
        if x in seen:
            continue
        coset = tuple(sorted(G.table[x, h].tolist()))
        seen.update(coset)
        cosets.append(coset)
    return cosets


def right_cosets(G: FiniteGroup, H: Subgroup) -> list[tuple[int, ...]]:
    """Right cosets ``Hx``; these are the classes of the relation R(H)."""
    h = np.array(H.members)
    seen: set[int] = set()
    cosets = []
    for x in range(G.order):
        if x in seen:
            continue
        coset = tuple(sorted(G.table[h, x].tolist()))
        seen.update(coset)
        cosets.append(coset)
    return cosets


def is_normal(G: FiniteGroup, H: Subgroup, within: Subgroup | None = None) -> bool:
    """True if ``x^-1 H x = H`` for every x in ``within`` (default all of G)."""
    points = within.members if within is not None else range(G.order)
    h = np.array(H.members)
    hs = set(H.members)
    for x in points:
        conj = G.table[G.table[G.inverse[x], h], x]
        if not set(conj.tolist()) <= hs:
            return False
    return True


@dataclass(frozen=True, eq=False)
class QuotientMap:
    """Canonical projection ``U -> U/L`` onto a group on cosets.

    ``projection[x]`` is the coset index of ``x`` for ``x`` in ``U`` and -1
    elsewhere.  Coset 0 is ``L`` itself.
    """

    source: FiniteGroup
    upper: Subgroup
    modulus: Subgroup
    target: FiniteGroup
    projection: np.ndarray
    cosets: tuple[tuple[int, ...], ...]

    def __call__(self, x: int) -> int:
        y = int(self.projection[x])
        if y < 0:
            raise GroupError(f"element {x} is outside the upper subgroup")
        return y


def quotient(G: FiniteGroup, U: Subgroup, L: Subgroup) -> QuotientMap:
    if not set(L.members) <= set(U.members):
        raise GroupError("L is not contained in U")
    if not is_normal(G, L, within=U):
        raise GroupError("L is not normal in U")
    cosets = left_cosets(G, L, within=U)
    projection = np.full(G.order, -1, dtype=np.int64)
    for k, coset in enumerate(cosets):
        projection[list(coset)] = k
    reps = np.array([c[0] for c in cosets])
    table = projection[G.table[np.ix_(reps, reps)]]
    target = FiniteGroup("table", {"source": f"quotient of {G.spec()}"}, table, _inverse_from_table(table))
    check_group_axioms(table)
    return QuotientMap(G, U, L, target, projection, tuple(cosets))
