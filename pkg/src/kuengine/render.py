"""Serialization-ready chart documents and their SVG/TikZ renderings.

A ChartDocument flattens a chart into a list of dots (codegree, filtration,
label) plus a list of lines referencing dots by index.  Line kinds:

    "v"                diagonal v-multiplication within a tower
    "h0"               p-multiplication visible in filtration (vertical)
    "exotic"           p-multiplication with a filtration jump (curved)
    "differential(r)"  a d_r arrow on the E2 overlay

Documents come from two sources: the closed-form ku charts ("closed-form")
and the Adams E2 window with its replayed differentials ("einfty-overlay").

Rendering follows the chart conventions used throughout: codegrees increase
from right to left, filtration increases bottom to top.  Everything is
deterministic -- dots sorted by (degree, filtration, label), lines by (kind,
endpoints), no timestamps -- so identical inputs give byte-identical output,
and to_json/from_json are mutually inverse on canonical documents.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .adams import classify, dot_label, e2_window
from .chart import Chart

_KIND = re.compile(r"v|h0|exotic|differential\((\d+)\)")

SOURCES = ("closed-form", "einfty-overlay")


@dataclass(frozen=True)
class DocDot:
    degree: int
    filtration: int
    label: str
    overlay: bool = False

    @property
    def key(self) -> tuple:
        return (self.degree, self.filtration, self.label, self.overlay)


@dataclass(frozen=True)
class DocLine:
    kind: str
    src: int
    dst: int

    @property
    def key(self) -> tuple:
        return (self.kind, self.src, self.dst)


@dataclass
class ChartDocument:
    prime: int
    window: tuple[int, int]
    source: str
    dots: list[DocDot] = field(default_factory=list)
    lines: list[DocLine] = field(default_factory=list)

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValueError(f"unknown source {self.source!r}")
        lo, hi = self.window
        if lo > hi:
            raise ValueError("empty window")
        for l in self.lines:
            for end in (l.src, l.dst):
                if not (0 <= end < len(self.dots)):
                    raise ValueError(f"line endpoint {end} references no dot")
        # canonicalize: sort dots, remap and sort line endpoints
        order = sorted(range(len(self.dots)), key=lambda i: self.dots[i].key)
        remap = {old: new for new, old in enumerate(order)}
        self.dots = [self.dots[i] for i in order]
        self.lines = sorted(
            (DocLine(l.kind, remap[l.src], remap[l.dst]) for l in self.lines),
            key=lambda l: l.key,
        )
        self.validate()

    def validate(self) -> None:
        lo, hi = self.window
        for d in self.dots:
            if not (lo <= d.degree <= hi):
                raise ValueError(f"dot {d} outside window [{lo}, {hi}]")
        for l in self.lines:
            if not _KIND.fullmatch(l.kind):
                raise ValueError(f"unknown line kind {l.kind!r}")
            for end in (l.src, l.dst):
                if not (0 <= end < len(self.dots)):
                    raise ValueError(f"line endpoint {end} references no dot")

    # -- JSON -------------------------------------------------------------
    def to_json(self) -> str:
        doc = {
            "schema_version": 1,
            "prime": self.prime,
            "window": list(self.window),
            "source": self.source,
            "dots": [
                {
                    "degree": d.degree,
                    "filtration": d.filtration,
                    "label": d.label,
                    **({"overlay": True} if d.overlay else {}),
                }
                for d in self.dots
            ],
            "lines": [
                {"kind": l.kind, "src": l.src, "dst": l.dst} for l in self.lines
            ],
        }
        return json.dumps(doc, indent=1, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "ChartDocument":
        doc = json.loads(text)
        return ChartDocument(
            doc["prime"],
            tuple(doc["window"]),
            doc["source"],
            [
                DocDot(
                    d["degree"],
                    d["filtration"],
                    d["label"],
                    d.get("overlay", False),
                )
                for d in doc["dots"]
            ],
            [DocLine(l["kind"], l["src"], l["dst"]) for l in doc["lines"]],
        )


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


def _chart_dots_and_lines(chart: Chart, lo: int, hi: int):
    """Window dots of a closed-form chart, with v-lines and p-edge lines."""
    step = 2 * (chart.p - 1)
    index: dict[tuple[int, int], int] = {}
    dots: list[DocDot] = []
    for t in chart.towers:
        if t.height is None:
            raise ValueError(f"tower {t.gen.render()} is unbounded; cut it first")
        for a in range(t.height):
            n = t.gen_degree - step * a
            if not (lo <= n <= hi):
                continue
            gen = t.gen.render()
            label = gen if a == 0 else (f"v {gen}" if a == 1 else f"v^{a} {gen}")
            index[(t.id, a)] = len(dots)
            dots.append(DocDot(n, t.base_s + a, label))
    lines = [
        DocLine("v", index[(t.id, a)], index[(t.id, a + 1)])
        for t in chart.towers
        for a in range(t.height - 1)
        if (t.id, a) in index and (t.id, a + 1) in index
    ]
    for e in chart.edges:
        if e.src not in index:
            continue
        for d in e.dst:
            if d in index:
                lines.append(DocLine(e.kind, index[e.src], index[d]))
    return dots, lines


def document_from_chart(
    chart: Chart, window: tuple[int, int] | None = None
) -> ChartDocument:
    """Closed-form document: tower dots, v-lines, and p-edge lines (h0 or
    exotic).  Lines with an endpoint outside the window are dropped."""
    if window is None:
        lo, hi = chart.min_dot_degree(), chart.max_dot_degree()
        if lo is None:
            lo = hi = 0
    else:
        lo, hi = window
    dots, lines = _chart_dots_and_lines(chart, lo, hi)
    return ChartDocument(chart.p, (lo, hi), "closed-form", dots, lines)


def document_overlay(
    base: Chart, ambient: Chart, window: tuple[int, int] | None = None
) -> ChartDocument:
    """Document of the ambient chart with everything outside the base chart
    flagged as overlay (rendered dashed/open): the A-minus-B view."""
    if window is None:
        lo, hi = ambient.min_dot_degree(), ambient.max_dot_degree()
        if lo is None:
            lo = hi = 0
    else:
        lo, hi = window
    base_dots, _ = _chart_dots_and_lines(base, lo, hi)
    base_keys = {(d.degree, d.filtration, d.label) for d in base_dots}
    dots, lines = _chart_dots_and_lines(ambient, lo, hi)
    flagged = [
        DocDot(d.degree, d.filtration, d.label, (d.degree, d.filtration, d.label) not in base_keys)
        for d in dots
    ]
    return ChartDocument(ambient.p, (lo, hi), "closed-form", flagged, lines)


def document_from_einfty(
    p: int, n_lo: int, n_hi: int, s_max: int
) -> ChartDocument:
    """E2 window with every replayed differential drawn as an arrow: the
    dots that carry no arrow tail or head are exactly E-infinity."""
    page = e2_window(p, n_lo, n_hi, s_max)
    w = page.w
    index: dict[tuple, int] = {}
    dots: list[DocDot] = []

    def dot_at(key, a: int) -> int | None:
        tw = page.towers[key]
        n, s = tw.n0 - w * a, tw.s0 + a
        if not (n_lo <= n <= n_hi and 0 <= s <= s_max):
            return None
        if (key, a) not in index:
            index[(key, a)] = len(dots)
            dots.append(DocDot(n, s, dot_label(p, key, a)))
        return index[(key, a)]

    for key, tw in page.towers.items():
        # first dot with codegree <= n_hi: a >= ceil((n0 - n_hi) / w)
        a = max(0, -((n_hi - tw.n0) // w))
        while True:
            h = page.heights[key]
            if h is not None and a >= h:
                break
            n, s = tw.n0 - w * a, tw.s0 + a
            if n < n_lo or s > s_max:
                break
            if n <= n_hi:
                dot_at(key, a)
            a += 1

    lines: list[DocLine] = []
    for (key, a), i in list(index.items()):
        nxt = page.v_op(key, a)
        if nxt is not None and (nxt in index):
            lines.append(DocLine("v", i, index[nxt]))
        h0 = page.h0_op(key, a)
        if h0 is not None and (h0 in index):
            lines.append(DocLine("h0", i, index[h0]))
    for key in page.towers:
        f = classify(p, key)
        if f.role != "source" or f.partner not in page.towers:
            continue
        a = 0
        while (key, a) in index:
            tgt = (f.partner, f.e0 + a)
            if tgt in index:
                lines.append(
                    DocLine(f"differential({f.r})", index[(key, a)], index[tgt])
                )
            a += 1
    return ChartDocument(p, (n_lo, n_hi), "einfty-overlay", dots, lines)


# ---------------------------------------------------------------------------
# SVG
# ---------------------------------------------------------------------------

_CELL = 16
_MARGIN = 34
_COLOR = {"v": "#000000", "h0": "#000000", "exotic": "#cc0000"}
_DIFF_COLOR = "#1144bb"


def _fmt(x: float) -> str:
    return f"{x:.1f}".rstrip("0").rstrip(".")


def render_svg(doc: ChartDocument) -> str:
    """Deterministic standalone SVG.  Codegrees increase right-to-left:
    the window's top degree sits at the left edge."""
    lo, hi = doc.window
    s_top = max((d.filtration for d in doc.dots), default=0)
    width = 2 * _MARGIN + (hi - lo) * _CELL
    height = 2 * _MARGIN + max(s_top, 1) * _CELL

    def x(n: int) -> float:
        return _MARGIN + (hi - n) * _CELL

    def y(s: int) -> float:
        return height - _MARGIN - s * _CELL

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        "<defs><marker id='arrow' viewBox='0 0 10 10' refX='9' refY='5' "
        "markerWidth='6' markerHeight='6' orient='auto-start-reverse'>"
        "<path d='M 0 0 L 10 5 L 0 10 z' fill='#1144bb'/></marker></defs>",
        f'<rect width="{width}" height="{height}" fill="#ffffff"/>',
        f'<text x="{_MARGIN}" y="{_MARGIN // 2}" font-size="11" '
        f'font-family="monospace">p={doc.prime} window=[{lo},{hi}] '
        f"source={doc.source}</text>",
    ]
    axis_y = height - _MARGIN + 8
    tick = 2 * doc.prime
    first = lo + (-lo) % tick
    for n in range(first, hi + 1, tick):
        out.append(
            f'<text x="{_fmt(x(n))}" y="{axis_y + 10}" font-size="9" '
            f'font-family="monospace" text-anchor="middle">{n}</text>'
        )
        out.append(
            f'<line x1="{_fmt(x(n))}" y1="{axis_y}" x2="{_fmt(x(n))}" '
            f'y2="{axis_y - 4}" stroke="#888888" stroke-width="1"/>'
        )
    for l in doc.lines:
        a, b = doc.dots[l.src], doc.dots[l.dst]
        x1, y1 = x(a.degree), y(a.filtration)
        x2, y2 = x(b.degree), y(b.filtration)
        dashed = ' stroke-dasharray="4 3"' if (a.overlay or b.overlay) else ""
        if l.kind.startswith("differential"):
            out.append(
                f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" '
                f'y2="{_fmt(y2)}" stroke="{_DIFF_COLOR}" stroke-width="1.2" '
                f'marker-end="url(#arrow)"{dashed}/>'
            )
        elif l.kind == "exotic":
            cx = (x1 + x2) / 2 + 0.55 * _CELL
            cy = (y1 + y2) / 2
            out.append(
                f'<path d="M {_fmt(x1)} {_fmt(y1)} Q {_fmt(cx)} {_fmt(cy)} '
                f'{_fmt(x2)} {_fmt(y2)}" fill="none" '
                f'stroke="{_COLOR["exotic"]}" stroke-width="1.2"{dashed}/>'
            )
        else:
            out.append(
                f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" '
                f'y2="{_fmt(y2)}" stroke="{_COLOR[l.kind]}" '
                f'stroke-width="1.2"{dashed}/>'
            )
    for d in doc.dots:
        cx, cy = x(d.degree), y(d.filtration)
        fill = "#ffffff" if d.overlay else "#000000"
        out.append(
            f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="3" fill="{fill}" '
            f'stroke="#000000" stroke-width="1"><title>{d.label} '
            f"({d.degree}, {d.filtration})</title></circle>"
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# TikZ
# ---------------------------------------------------------------------------


def render_tikz(doc: ChartDocument) -> str:
    """Deterministic tikzpicture body (same layout conventions as the SVG,
    in chart cells: x = hi - degree, y = filtration)."""
    lo, hi = doc.window
    out = [
        f"% chart document: p={doc.prime} window=[{lo},{hi}] source={doc.source}",
        "\\begin{tikzpicture}[scale=.45]",
    ]
    tick = 2 * doc.prime
    first = lo + (-lo) % tick
    for n in range(first, hi + 1, tick):
        out.append(
            "\\node[font=\\tiny, below] at (%d,-.4) {$%d$};" % (hi - n, n)
        )
    for l in doc.lines:
        a, b = doc.dots[l.src], doc.dots[l.dst]
        pa = "(%d,%d)" % (hi - a.degree, a.filtration)
        pb = "(%d,%d)" % (hi - b.degree, b.filtration)
        dashed = a.overlay or b.overlay
        opts = ["dashed"] if dashed else []
        if l.kind.startswith("differential"):
            opts += ["->", "blue"]
            out.append("\\draw[%s] %s -- %s;" % (",".join(opts), pa, pb))
        elif l.kind == "exotic":
            opts += ["red"]
            out.append(
                "\\draw[%s] %s to[bend right=35] %s;" % (",".join(opts), pa, pb)
            )
        else:
            out.append(
                "\\draw%s %s -- %s;"
                % ("[%s]" % ",".join(opts) if opts else "", pa, pb)
            )
    for d in doc.dots:
        pos = "(%d,%d)" % (hi - d.degree, d.filtration)
        if d.overlay:
            out.append("\\draw %s circle (3.2pt);" % pos)
        else:
            out.append("\\fill %s circle (3.2pt);" % pos)
    out.append("\\end{tikzpicture}")
    return "\n".join(out) + "\n"
