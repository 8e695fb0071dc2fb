"""Core chart recursion, assemblies, and their frozen small cases.

Expected groups below were computed by hand from the recursive description
(tower generators/heights plus the two glue rules) before the code existed.
"""

import pytest

from kuengine.chart import realize
from kuengine.modules import (
    assoc_graded_dims,
    build_A,
    build_B,
    build_S,
    even_part,
    full_chart,
    ku_group_at,
    ku_homology_group_at,
    odd_part,
)
from kuengine.monomial import z_decompose


def towers_by_gen(chart):
    return {t.gen.render(): t for t in chart.towers}


# -- B_k ------------------------------------------------------------------


def test_B2_p2_single_tower():
    b2 = build_B(2, 2)
    assert len(b2.towers) == 1
    (t,) = b2.towers
    assert t.gen.render() == "z2"
    assert t.gen_degree == 18
    assert t.height == 2
    assert b2.edges == []


def test_B_empty_below_k0():
    assert build_B(2, 1).towers == []
    assert build_B(3, 0).towers == []
    with pytest.raises(ValueError):
        build_B(3, -1)


def test_B3_p2_structure_and_groups():
    b3 = build_B(2, 3)
    gens = towers_by_gen(b3)
    assert set(gens) == {"z[2,3]", "z3", "y2 z2"}
    assert gens["z[2,3]"].height == 2 and gens["z[2,3]"].gen_degree == 36
    assert gens["z3"].height == 5 and gens["z3"].gen_degree == 34
    assert gens["y2 z2"].height == 2 and gens["y2 z2"].gen_degree == 26
    # p . z3 = v z[2,3] (h0), p . y2z2 = v^4 z3 (exotic), nothing else
    assert len(b3.edges) == 2
    expected = {
        36: [1],
        34: [2],
        32: [1],
        30: [1],
        28: [1],
        26: [2],
        24: [1],
    }
    for n, exps in expected.items():
        assert b3.group_at(n) == exps, n
    assert b3.group_at(22) == []
    assert b3.group_at(38) == []


def test_two_target_edge_in_B5_and_A5():
    # the dot y3 z3 z4 at degree 116 supports p . x = v y3 z2^2 z4 + v^8 z4^2
    for chart in (build_B(2, 5), build_A(2, 5)):
        gens = towers_by_gen(chart)
        src = gens["y3 z3 z4"]
        assert src.gen_degree == 116
        e = chart.edge_at((src.id, 0))
        assert e is not None and e.kind == "exotic"
        tgt = {(chart.tower(tid).gen.render(), a) for tid, a in e.dst}
        assert tgt == {("y3 z2^2 z4", 1), ("z[4,5]", 8)}


# -- A_k ------------------------------------------------------------------


def test_A1_p2():
    a1 = build_A(2, 1)
    dots = set()
    for n in range(0, 20):
        for tid, a in a1.dots_at(n):
            dots.add((n, a1.dot_filtration((tid, a))))
    assert dots == {(8, 0), (10, 0), (8, 1)}
    assert len(a1.edges) == 1
    assert a1.group_at(8) == [2]
    assert a1.group_at(10) == [1]


def test_A1_p3_exotic_jump():
    a1 = build_A(3, 1)
    gens = towers_by_gen(a1)
    assert gens["z1"].height == 3
    assert gens["y0^2 z0"].gen_degree == 12
    e = a1.edge_at((gens["y0^2 z0"].id, 0))
    assert e is not None
    assert {(a1.tower(t).gen.render(), a) for t, a in e.dst} == {("z1", 2)}
    assert a1.group_at(12) == [2]  # Z/9


def test_A2_p2_z8_chain():
    a2 = build_A(2, 2)
    # y1y0z0 -> v y1z1 -> v^3 z2 gives Z/8 in degree 12
    assert a2.group_at(12) == [3]
    assert a2.group_at(18) == [1]
    assert a2.group_at(16) == [1]
    assert a2.group_at(14) == [2]


def test_A5_p2_criterion_group():
    a5 = build_A(2, 5)
    assert a5.group_at(82) == [3, 1]


def test_height_law():
    # every tower is controlled by the leading index i of its z-part:
    # height p^i - i along the B-branches, p^i for the single-z towers of A_k
    for p in (2, 3):
        for k in range(1, 7):
            for t in build_B(p, k).towers:
                i = z_decompose(t.gen)[0]
                assert t.height == p**i - i, (p, k, t.gen.render())
            for t in build_A(p, k).towers:
                i = z_decompose(t.gen)[0]
                total = sum(e for _, e in t.gen.zs)
                want = p**i if total == 1 else p**i - i
                assert t.height == want, (p, k, t.gen.render())


# -- S_{k,l} --------------------------------------------------------------


def test_S58_p2():
    s = build_S(2, 5, 8)
    assert [t.gen_degree for t in s.towers] == [1038, 1036, 1034]
    assert all(t.height == 6 for t in s.towers)
    assert s.group_at(1038) == [1]
    assert s.group_at(1036) == [2]
    assert s.group_at(1034) == [3]
    assert s.group_at(1032) == [3]  # chain saturates at three towers


def test_S_bounds():
    with pytest.raises(ValueError):
        build_S(2, 3, 3)
    s = build_S(3, 1, 2)
    assert len(s.towers) == 1 and s.towers[0].height == 2


# -- assemblies -----------------------------------------------------------


def test_even_part_small_window_p2():
    ch = even_part(2, 18)
    by_deg = {}
    for n in range(0, 19, 2):
        for tid, a in ch.dots_at(n):
            by_deg.setdefault(n, []).append((ch.tower(tid).gen.render(), a))
    assert ("y0 z0", 0) in by_deg[8]
    assert ("z1", 0) in by_deg[10]
    assert ("y0 y1 z0", 0) in by_deg[12]
    assert ("z2", 0) in by_deg[18]  # the height-4 core tower
    assert ("y2 z1", 0) in by_deg[18]
    assert by_deg.get(2) is None and by_deg.get(4) is None and by_deg.get(6) is None


def test_ku_groups_p2_low_degrees():
    assert ku_group_at(2, 0) == []
    for n in range(1, 8):
        assert ku_group_at(2, n) == []
    assert ku_group_at(2, 8) == [2]
    assert ku_group_at(2, 10) == [1]
    assert ku_group_at(2, 12) == [3]
    assert ku_group_at(2, 18) == [1, 1]
    # odd degrees are empty until v q z2 at 25
    for n in range(1, 25, 2):
        assert ku_group_at(2, n) == []
    assert ku_group_at(2, 25) == [1]
    assert ku_group_at(2, 27) == [1]


def test_odd_part_towers_p2():
    ch = odd_part(2, 30)
    gens = towers_by_gen(ch)
    assert "q z2" in gens
    t = gens["q z2"]
    assert t.gen_degree == 27 and t.height == 2
    assert all(t.gen_degree % 2 == 1 for t in ch.towers)


def test_ku_homology_shift():
    for n in (4, 8, 10, 23):
        assert ku_homology_group_at(2, n) == ku_group_at(2, n + 4)
    assert ku_homology_group_at(2, 4) == [2]


def test_cutoff_independence():
    for n in (8, 12, 18, 25, 34):
        assert ku_group_at(2, n, cutoff=60) == ku_group_at(2, n, cutoff=200)
    with pytest.raises(ValueError):
        ku_group_at(2, 80, cutoff=60)


def test_assoc_graded_matches_dot_count():
    for p in (2, 3):
        big = full_chart(p, 60)
        for n in range(0, 61):
            assert assoc_graded_dims(p, n, cutoff=60) == big.dims_at(n), (p, n)


def test_B2_B3_self_duality_palindrome():
    # Sigma^D dual(B_k) has the same rank invariants as B_k itself,
    # D = 2(p^{k+1} + p^k + (k+1)p - k + 1)
    p = 2
    for k, dd in ((2, 34), (3, 60)):
        chart = build_B(p, k)
        lo, hi = chart.min_dot_degree(), chart.max_dot_degree()
        pad = 2 * (p - 1) * p**k
        win = realize(chart, (lo - pad, hi + pad))
        for m in range(lo, hi + 1):
            for a in range(0, k + 2):
                for b in range(0, p**k + 1):
                    m2 = dd + 2 * (p - 1) * b - m
                    assert win.rank_invariant(m, a, b) == win.rank_invariant(
                        m2, a, b
                    ), (k, m, a, b)
