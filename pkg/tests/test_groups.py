import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schurkit.groups import (
    GroupError,
    Subgroup,
    format_element,
    is_normal,
    left_cosets,
    mk_cyclic,
    mk_from_table,
    mk_metacyclic,
    parse_element,
    parse_group_spec,
    quotient,
    read_table,
    right_cosets,
    subgroup_generated,
)

from .conftest import direct_product_table


@pytest.fixture(scope="module")
def m27g():
    return mk_metacyclic(3, 3)


@pytest.fixture(scope="module")
def m81g():
    return mk_metacyclic(3, 4)


def test_m27_conjugation_relation(m27g):
    G = m27g
    a, b = G.parse("a1"), G.parse("b1")
    assert G.order == 27
    assert G.product(G.inv(b), a, b) == G.parse("a4")


def test_m81_defining_relations(m81g):
    G = m81g
    a, b = G.parse("a1"), G.parse("b1")
    assert G.power(a, 27) == 0 and G.power(a, 9) != 0
    assert G.power(b, 3) == 0


def test_m81_b_a_binv(m81g):
    G = m81g
    # brute-force the inverse of 1 + 3^(n-2) modulo 3^(n-1)
    s = next(s for s in range(27) if (10 * s) % 27 == 1)
    assert s == 19
    a, b = G.parse("a1"), G.parse("b1")
    c = G.power(a, 9)
    assert G.product(b, a, G.inv(b)) == G.product(a, c, c) == G.power(a, s)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_metacyclic_t_power_is_one(n):
    G = mk_metacyclic(3, n)
    t, ma = G.params["t"], G.params["a_order"]
    assert pow(t, 3, ma) == 1


def test_metacyclic_other_primes():
    G = mk_metacyclic(5, 3)
    a, b = G.parse("a1"), G.parse("b1")
    assert G.order == 125
    assert G.product(G.inv(b), a, b) == G.power(a, 6)


@pytest.mark.parametrize("p,n", [(4, 3), (3, 2), (3, 8), (1, 3)])
def test_metacyclic_rejects(p, n):
    with pytest.raises(GroupError):
        mk_metacyclic(p, n)


def test_cap_override():
    with pytest.raises(GroupError):
        mk_metacyclic(3, 4, cap=27)
    with pytest.raises(GroupError):
        mk_cyclic(30, cap=20)


def test_metacyclic_element_order_layout(m27g):
    # canonical ordering sorts by (j, i)
    assert [m27g.exponents(x) for x in range(11)] == [(i, 0) for i in range(9)] + [(0, 1), (1, 1)]


def test_cyclic_groups():
    assert mk_cyclic(1).order == 1
    C3 = mk_cyclic(3)
    assert C3.power(1, 3) == 0
    C4 = mk_cyclic(4)
    assert [C4.element_order(x) for x in range(4)] == [1, 4, 2, 4]
    assert C4.element_order(C4.power(1, 2)) == 2


def test_from_table():
    assert mk_from_table([[0]]).order == 1
    K4 = mk_from_table(direct_product_table(2, 2))
    assert K4.order == 4
    assert all(K4.element_order(x) <= 2 for x in range(4))


@pytest.mark.parametrize(
    "table",
    [
        [[1, 0], [0, 1]],  # row 0 is not the identity row
        [[0, 1, 2], [1, 1, 0], [2, 0, 1]],  # repeated entry
        [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 1, 0], [3, 2, 0, 1]][:3],  # not square
    ],
)
def test_from_table_rejects(table):
    with pytest.raises(GroupError):
        mk_from_table(table)


def test_from_table_rejects_nonassociative():
    # a Latin square with identity 0 that is not a group (order 5 loop)
    loop = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(GroupError, match="associative"):
        mk_from_table(loop)


def test_read_table(tmp_path):
    path = tmp_path / "k4.txt"
    path.write_text("\n".join(" ".join(map(str, r)) for r in direct_product_table(2, 2)) + "\n")
    assert read_table(path).order == 4
    assert parse_group_spec(f"table:{path}").order == 4


def test_group_specs():
    assert parse_group_spec("metacyclic:p=3,n=3").order == 27
    assert parse_group_spec("cyclic:m=7").order == 7
    for bad in ("metacyclic:p=3", "dihedral:n=4", "cyclic:m=x", "cyclic"):
        with pytest.raises(GroupError):
            parse_group_spec(bad)


def test_parse_and_format(m27g, m81g):
    assert parse_element(m27g, "e") == 0
    x = parse_element(m27g, "a3b1")
    assert m27g.exponents(x) == (3, 1)
    assert format_element(m81g, parse_element(m81g, "a30b1")) == "a3b1"
    assert format_element(m81g, parse_element(m81g, "a-1")) == "a26"
    assert format_element(m27g, parse_element(m27g, "b2")) == "b2"
    C5 = mk_cyclic(5)
    assert parse_element(C5, "x7") == 2 and format_element(C5, 2) == "x2"


@pytest.mark.parametrize("tok", ["a", "c1", "x1", "a1b", "1", "a1 b1"])
def test_parse_rejects(m27g, tok):
    with pytest.raises(GroupError):
        parse_element(m27g, tok)


def test_parse_rejects_wrong_kind():
    with pytest.raises(GroupError):
        parse_element(mk_cyclic(4), "a1")


@given(st.integers(-200, 200), st.integers(-10, 10))
def test_token_round_trip(i, j):
    G = mk_metacyclic(3, 4)
    x = G.parse(f"a{i}b{j}")
    assert G.exponents(x) == (i % 27, j % 3)
    assert G.parse(G.format(x)) == x


def test_subgroup_generated(m27g, m81g):
    assert subgroup_generated(m27g, []).members == (0,)
    U = subgroup_generated(m27g, [m27g.parse("a3b1")])
    assert set(U.members) == {m27g.parse(t) for t in ("e", "a3b1", "a6b2")}
    H = subgroup_generated(m81g, [m81g.parse("a9"), m81g.parse("b1")])
    assert H.order == 9


def test_cosets_and_normality(m27g, m81g):
    U = subgroup_generated(m27g, [m27g.parse("a3b1")])
    cosets = left_cosets(m27g, U)
    assert len(cosets) == 9 and all(len(c) == 3 for c in cosets)
    assert sorted(x for c in cosets for x in c) == list(range(27))
    # oracle: conjugation scan
    conj_closed = all(
        m27g.product(m27g.inv(g), u, g) in U for g in range(27) for u in U.members
    )
    assert is_normal(m27g, U) == conj_closed
    H = subgroup_generated(m81g, [m81g.parse("a9"), m81g.parse("b1")])
    assert is_normal(m81g, H)
    # H is normal, so left and right cosets agree
    assert sorted(left_cosets(m81g, H)) == sorted(right_cosets(m81g, H))


@pytest.mark.parametrize("n", [4, 5])
def test_quotient_by_h_is_cyclic(n):
    G = mk_metacyclic(3, n)
    m = 3 ** (n - 2)
    H = subgroup_generated(G, [G.parse(f"a{m}"), G.parse("b1")])
    q = quotient(G, Subgroup(G, tuple(range(G.order))), H)
    assert q.target.order == m
    aH = q(G.parse("a1"))
    assert q.target.element_order(aH) == m
    # a^i H and a^-i H are inverse cosets, i = 1..(m-1)/2
    for i in range(1, (m - 1) // 2 + 1):
        assert q(G.parse(f"a{-i}")) == q.target.inv(q(G.parse(f"a{i}")))


def test_quotient_errors(m27g):
    U = subgroup_generated(m27g, [m27g.parse("a3b1")])
    whole = Subgroup(m27g, tuple(range(27)))
    if not is_normal(m27g, U):
        with pytest.raises(GroupError, match="normal"):
            quotient(m27g, whole, U)
    A = subgroup_generated(m27g, [m27g.parse("a1")])
    with pytest.raises(GroupError, match="contained"):
        quotient(m27g, U, A)


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_projection_is_homomorphism(data):
    G = mk_metacyclic(3, 4)
    H = subgroup_generated(G, [G.parse("a9"), G.parse("b1")])
    q = quotient(G, Subgroup(G, tuple(range(81))), H)
    x = data.draw(st.integers(0, 80))
    y = data.draw(st.integers(0, 80))
    assert q(G.mul(x, y)) == q.target.mul(q(x), q(y))
    # fibers are exactly left cosets
    assert set(q.cosets[q(x)]) == {G.mul(x, h) for h in H.members}


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_group_axioms_exhaustive(n):
    G = mk_metacyclic(3, n)
    T = G.table
    idx = np.arange(G.order)
    assert np.array_equal(T[0], idx) and np.array_equal(T[:, 0], idx)
    assert (T[idx, G.inverse] == 0).all() and (T[G.inverse, idx] == 0).all()
    for x in range(G.order):
        assert np.array_equal(T[T[x]], T[x][T])


def test_group_axioms_sampled_at_cap():
    G = mk_metacyclic(3, 7)
    rng = np.random.default_rng(1)
    x, y, z = rng.integers(0, G.order, size=(3, 5000))
    T = G.table
    assert np.array_equal(T[T[x, y], z], T[x, T[y, z]])
