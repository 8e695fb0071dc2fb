import pytest

from kuengine.chart import (
    Chart,
    PEdge,
    RealizedWindow,
    Tower,
    direct_sum,
    dualize,
    parse_monomial,
    realize,
)
from kuengine.monomial import Monomial


def chain_chart(p, length):
    """length towers of height 1 at the same degree joined in a p-chain,
    filtrations 0,1,2,..."""
    g = Monomial.gen(p, "z", 2)  # any generator; degree only matters
    towers = [Tower(i, g, base_s=i, height=1) for i in range(length)]
    edges = [PEdge((i, 0), ((i + 1, 0),)) for i in range(length - 1)]
    return Chart(p, towers, edges)


def test_group_chain():
    c = chain_chart(2, 3)
    n = c.towers[0].gen_degree
    assert c.group_at(n) == [3]  # Z/p^3
    assert c.dims_at(n) == 3
    c2 = Chart(2, [Tower(0, Monomial.gen(2, "z", 2)), Tower(1, Monomial.gen(2, "z", 2), 1)])
    assert c2.group_at(c2.towers[0].gen_degree) == [1, 1]


def test_tower_dots_and_length():
    p = 3
    t = Tower(0, Monomial.gen(p, "z", 1), 0, 3)  # degree 20, height 3
    c = Chart(p, [t])
    assert c.dots_at(20) == [(0, 0)]
    assert c.dots_at(16) == [(0, 1)]
    assert c.dots_at(12) == [(0, 2)]
    assert c.dots_at(8) == []
    assert c.group_at(16) == [1]
    # total F_p length equals dot count
    assert sum(c.group_at(16)) == len(c.dots_at(16))


def test_edge_validation():
    p = 2
    g = Monomial.gen(p, "z", 2)
    with pytest.raises(ValueError):
        # target at same filtration
        Chart(p, [Tower(0, g), Tower(1, g)], [PEdge((0, 0), ((1, 0),))])
    g2 = Monomial.gen(p, "z", 3)
    with pytest.raises(ValueError):
        # degree mismatch
        Chart(p, [Tower(0, g), Tower(1, g2, 1)], [PEdge((0, 0), ((1, 0),))])


def test_tensor_and_sum():
    p = 2
    c = chain_chart(p, 2)
    m = Monomial.gen(p, "y", 2)
    shifted = c.tensor_monomial(m)
    assert shifted.towers[0].gen_degree == c.towers[0].gen_degree + 8
    assert len(shifted.edges) == len(c.edges)
    s = direct_sum([c, shifted])
    assert len(s.towers) == 4
    n = c.towers[0].gen_degree
    assert s.dims_at(n) == c.dims_at(n) + shifted.dims_at(n)


def test_json_roundtrip():
    p = 2
    c = chain_chart(p, 3)
    c = Chart(
        p,
        c.towers + [Tower(3, Monomial.gen(p, "y", 1, 3) * Monomial.gen(p, "q"), 0, None)],
        c.edges,
    )
    c2 = Chart.from_json(c.to_json())
    assert c.to_json() == c2.to_json()


def test_parse_monomial():
    p = 2
    for text in ("1", "q", "y1^3", "y3 z3 z4", "q y1^3 z[2,5]", "z2^2 z5"):
        m = parse_monomial(p, text)
        assert m.render() == text


def test_rank_invariant_and_dual():
    p = 2
    # single tower of height 3: groups Z/2 at deg, deg-2, deg-4
    t = Tower(0, Monomial.gen(p, "z", 2, 2), 0, 3)  # degree 36
    c = Chart(p, [t])
    w = realize(c, (28, 40))
    assert w.group_at(36) == [1]
    assert w.rank_invariant(36, 0, 0) == 1
    assert w.rank_invariant(36, 1, 0) == 0  # p kills Z/p
    assert w.rank_invariant(36, 0, 1) == 1  # v: dot -> dot is onto Z/p
    assert w.rank_invariant(32, 0, 1) == 0  # falls off the tower top
    d = dualize(c, (-40, -28))
    assert d.group_at(-36) == [1]
    # dual of dual agrees with primal on rank invariants
    dd = d.dualize()
    for n in (36, 34, 32):
        for a in (0, 1):
            for b in (0, 1):
                if 28 <= n - 2 * (p - 1) * b <= 40:
                    assert dd.rank_invariant(n, a, b) == w.rank_invariant(n, a, b)


def test_dual_window_bounds():
    p = 2
    c = chain_chart(p, 2)
    w = RealizedWindow(c, 0, 10)
    with pytest.raises(ValueError):
        w.group_at(50)
