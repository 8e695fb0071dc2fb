from collections import Counter

import pytest

from kuengine.modules import build_A, build_B, build_S
from kuengine.render import (
    ChartDocument,
    DocDot,
    DocLine,
    document_from_chart,
    document_from_einfty,
    document_overlay,
    render_svg,
    render_tikz,
)

# Hand-extracted (codegree, filtration) positions of the solid dots in the
# reference rendering of the k = 5 even block at p = 2, drawn over the window
# [68, 136].  The drawing truncates the top z5 tower at the picture edge --
# solid through (78, 26), then a dashed continuation with a single marker dot
# at (68, 28) standing in for the real dots at (76,27)..(68,31).
FIGURE_K5_DOTS = [
    (68, 0), (68, 1), (68, 3), (68, 7), (68, 15), (68, 28), (70, 0),
    (70, 2), (70, 6), (70, 14), (72, 1), (72, 5), (72, 13), (74, 0),
    (74, 4), (74, 12), (76, 3), (76, 11), (78, 2), (78, 10), (78, 26),
    (80, 1), (80, 9), (80, 25), (82, 0), (82, 1), (82, 8), (82, 24),
    (84, 0), (84, 7), (84, 23), (86, 6), (86, 22), (88, 5), (88, 21),
    (90, 1), (90, 4), (90, 20), (92, 0), (92, 3), (92, 4), (92, 19),
    (94, 2), (94, 3), (94, 18), (96, 1), (96, 2), (96, 17), (98, 0),
    (98, 1), (98, 16), (100, 0), (100, 1), (100, 15), (102, 0), (102, 14),
    (104, 13), (106, 1), (106, 12), (108, 0), (108, 4), (108, 11), (110, 3),
    (110, 10), (110, 11), (112, 2), (112, 9), (112, 10), (114, 1), (114, 8),
    (114, 9), (116, 0), (116, 1), (116, 7), (116, 8), (118, 0), (118, 6),
    (118, 7), (120, 5), (120, 6), (122, 4), (122, 5), (124, 1), (124, 3),
    (124, 4), (126, 0), (126, 2), (126, 3), (126, 4), (128, 1), (128, 2),
    (128, 3), (130, 0), (130, 1), (130, 2), (132, 0), (132, 1), (134, 0),
    (134, 1), (136, 0),
]


def positions(doc):
    return Counter((d.degree, d.filtration) for d in doc.dots)


def test_a1_document_is_the_three_dot_chart():
    doc = document_from_chart(build_A(2, 1))
    assert [(d.degree, d.filtration, d.label) for d in doc.dots] == [
        (8, 0, "y0 z0"),
        (8, 1, "v z1"),
        (10, 0, "z1"),
    ]
    assert [(l.kind, l.src, l.dst) for l in doc.lines] == [
        ("exotic", 0, 1),
        ("v", 2, 1),
    ]


def test_s58_document_has_three_height_six_towers():
    doc = document_from_chart(build_S(2, 5, 8))
    assert len(doc.dots) == 18
    by_base = Counter(d.label.split(" ")[-1] for d in doc.dots)
    assert sorted(by_base.values()) == [6, 6, 6]
    # v-lines chain each tower (3 * 5); h0 steps between consecutive towers
    # at matching levels (2 * 5)
    assert Counter(l.kind for l in doc.lines) == {"v": 15, "h0": 10}
    for l in doc.lines:
        if l.kind == "h0":
            assert doc.dots[l.dst].filtration == doc.dots[l.src].filtration + 1


def test_b5_and_a5_match_the_reference_rendering():
    fig = Counter(FIGURE_K5_DOTS)
    b5 = positions(document_from_chart(build_B(2, 5), (68, 136)))
    # every solid dot of the k=5 module appears in the drawing
    assert not b5 - fig
    a5 = positions(document_from_chart(build_A(2, 5), (68, 136)))
    marker = Counter({(68, 28): 1})
    truncated_tail = Counter({(76, 27): 1, (74, 28): 1, (72, 29): 1, (70, 30): 1, (68, 31): 1})
    assert a5 == fig - marker + truncated_tail


def test_overlay_flags_exactly_the_a_minus_b_dots():
    doc = document_overlay(build_B(2, 5), build_A(2, 5))
    flagged = positions_with_flag(doc, True)
    plain = positions_with_flag(doc, False)
    b5 = positions(document_from_chart(build_B(2, 5), doc.window))
    a5 = positions(document_from_chart(build_A(2, 5), doc.window))
    assert plain == b5
    assert flagged == a5 - b5


def positions_with_flag(doc, flag):
    return Counter(
        (d.degree, d.filtration) for d in doc.dots if d.overlay is flag
    )


@pytest.mark.parametrize("p,hi,s_max", [(2, 40, 10), (3, 60, 8)])
def test_einfty_document_line_geometry(p, hi, s_max):
    doc = document_from_einfty(p, 0, hi, s_max)
    w = 2 * (p - 1)
    seen = set()
    for l in doc.lines:
        a, b = doc.dots[l.src], doc.dots[l.dst]
        if l.kind == "v":
            assert (b.degree, b.filtration) == (a.degree - w, a.filtration + 1)
        elif l.kind == "h0":
            assert (b.degree, b.filtration) == (a.degree, a.filtration + 1)
        else:
            assert l.kind.startswith("differential(")
            r = int(l.kind[len("differential(") : -1])
            assert r >= 2
            assert (b.degree, b.filtration) == (a.degree + 1, a.filtration + r)
            seen.add(r)
    assert seen, "window contains no differentials?"
    # labels are unique on the E2 page
    labels = [d.label for d in doc.dots]
    assert len(set(labels)) == len(labels)


def test_document_roundtrip_and_canonical_order():
    doc = document_from_einfty(2, 0, 30, 8)
    text = doc.to_json()
    again = ChartDocument.from_json(text)
    assert again.to_json() == text
    keys = [d.key for d in doc.dots]
    assert keys == sorted(keys)
    lkeys = [l.key for l in doc.lines]
    assert lkeys == sorted(lkeys)


def test_document_validation():
    dot = DocDot(10, 0, "x")
    with pytest.raises(ValueError):
        ChartDocument(2, (0, 20), "nonsense", [dot], [])
    with pytest.raises(ValueError):
        ChartDocument(2, (0, 5), "closed-form", [dot], [])  # dot outside window
    with pytest.raises(ValueError):
        ChartDocument(2, (0, 20), "closed-form", [dot], [DocLine("v", 0, 1)])
    with pytest.raises(ValueError):
        ChartDocument(2, (0, 20), "closed-form", [dot], [DocLine("d3", 0, 0)])


def test_renders_are_deterministic_and_right_to_left():
    doc = document_from_chart(build_A(2, 5))
    svg1, svg2 = render_svg(doc), render_svg(document_from_chart(build_A(2, 5)))
    assert svg1 == svg2
    tikz = render_tikz(doc)
    assert tikz == render_tikz(document_from_chart(build_A(2, 5)))
    # codegree 136 dot sits at tikz x = 0 (left edge), codegree 68 at x = 68
    assert "\\fill (0,0) circle" in tikz
    assert "\\node[font=\\tiny, below] at (0,-.4) {$136$};" in tikz
    assert "\\node[font=\\tiny, below] at (68,-.4) {$68$};" in tikz
    # overlay dots render open / dashed
    ov = render_tikz(document_overlay(build_B(2, 5), build_A(2, 5)))
    assert "circle (3.2pt);" in ov and "\\draw (" in ov


def test_svg_contains_dots_and_kind_colors():
    doc = document_from_chart(build_A(2, 1))
    svg = render_svg(doc)
    assert svg.count("<circle") == 3
    assert "#cc0000" in svg  # the exotic extension
    e = render_svg(document_from_einfty(2, 0, 20, 6))
    assert "marker-end" in e  # differential arrows
