"""Chart data structure: towers of v-divided classes joined by p-action
edges, plus the machinery that turns a degree slice of a chart into an
explicit finite abelian p-group with v-action.

Conventions (cohomological):
  * a tower with generator monomial g, base filtration s0 and height h has
    dots (tower, a) for 0 <= a < h; dot degree = |g| - 2(p-1)a, dot
    filtration = s0 + a; v sends (tower, a) to (tower, a+1) (0 at the top);
  * a p-edge says p.(source dot) = sum of its target dots (all unit
    coefficients; targets share the source's degree and sit in strictly
    higher filtration);
  * dots without an edge satisfy p.(dot) = 0.

group_at never reads filtrations: they are chart metadata for rendering and
for E-infinity comparison.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .linalg import group_exponents, cokernel_exponents
from .monomial import Monomial

UNBOUNDED = None


@dataclass(frozen=True)
class Tower:
    id: int
    gen: Monomial
    base_s: int = 0
    height: int | None = 1  # None = unbounded

    @property
    def gen_degree(self) -> int:
        return self.gen.degree

    def dot_exists(self, a: int) -> bool:
        return a >= 0 and (self.height is None or a < self.height)


@dataclass(frozen=True)
class PEdge:
    src: tuple[int, int]  # (tower id, a)
    dst: tuple[tuple[int, int], ...]  # 1 or 2 targets
    kind: str = "h0"  # {"h0", "exotic"}: rendering annotation only


@dataclass
class Chart:
    p: int
    towers: list[Tower] = field(default_factory=list)
    edges: list[PEdge] = field(default_factory=list)

    def __post_init__(self):
        self._by_id = {t.id: t for t in self.towers}
        if len(self._by_id) != len(self.towers):
            raise ValueError("duplicate tower ids")
        self._edge_by_src = {}
        for e in self.edges:
            if e.src in self._edge_by_src:
                raise ValueError(f"two edges from the same dot {e.src}")
            self._edge_by_src[e.src] = e
        self.validate()

    # -- basic access --------------------------------------------------------
    def tower(self, tid: int) -> Tower:
        return self._by_id[tid]

    def edge_at(self, dot: tuple[int, int]) -> PEdge | None:
        return self._edge_by_src.get(dot)

    def dot_degree(self, dot: tuple[int, int]) -> int:
        t = self.tower(dot[0])
        return t.gen_degree - 2 * (self.p - 1) * dot[1]

    def dot_filtration(self, dot: tuple[int, int]) -> int:
        t = self.tower(dot[0])
        return t.base_s + dot[1]

    def validate(self) -> None:
        for e in self.edges:
            if not (1 <= len(e.dst) <= 2):
                raise ValueError("edges carry 1 or 2 targets")
            st, sa = e.src
            if not self.tower(st).dot_exists(sa):
                raise ValueError(f"edge source dot missing: {e}")
            sdeg = self.dot_degree(e.src)
            sfil = self.dot_filtration(e.src)
            for d in e.dst:
                if not self.tower(d[0]).dot_exists(d[1]):
                    raise ValueError(f"edge target dot missing: {e}")
                if self.dot_degree(d) != sdeg:
                    raise ValueError(f"edge changes degree: {e}")
                if self.dot_filtration(d) <= sfil:
                    raise ValueError(f"edge target must raise filtration: {e}")

    # -- dots and groups ------------------------------------------------------
    def dots_at(self, n: int) -> list[tuple[int, int]]:
        out = []
        step = 2 * (self.p - 1)
        for t in self.towers:
            diff = t.gen_degree - n
            if diff < 0 or diff % step:
                continue
            a = diff // step
            if t.dot_exists(a):
                out.append((t.id, a))
        return out

    def min_dot_degree(self) -> int | None:
        """Smallest degree carrying a dot (None for an empty chart)."""
        best = None
        step = 2 * (self.p - 1)
        for t in self.towers:
            if t.height is None:
                raise ValueError("unbounded tower has no minimal dot degree")
            d = t.gen_degree - step * (t.height - 1)
            best = d if best is None else min(best, d)
        return best

    def max_dot_degree(self) -> int | None:
        best = None
        for t in self.towers:
            best = t.gen_degree if best is None else max(best, t.gen_degree)
        return best

    def relation_rows(
        self, dots: Sequence[tuple[int, int]]
    ) -> list[list[int]]:
        """One relation per dot: p.dot - sum(edge targets)."""
        index = {d: i for i, d in enumerate(dots)}
        rows = []
        for d in dots:
            row = [0] * len(dots)
            row[index[d]] = self.p
            e = self.edge_at(d)
            if e is not None:
                for tgt in e.dst:
                    row[index[tgt]] -= 1
            rows.append(row)
        return rows

    def group_at(self, n: int) -> list[int]:
        """Canonical exponent list [e_1 >= e_2 >= ...] with the degree-n
        component isomorphic to the direct sum of Z/p^{e_i}."""
        dots = self.dots_at(n)
        return group_exponents(self.relation_rows(dots), len(dots), self.p)

    def dims_at(self, n: int) -> int:
        """F_p-dimension of dots in degree n (composition length)."""
        return len(self.dots_at(n))

    # -- combinators -----------------------------------------------------------
    def tensor_monomial(self, m: Monomial) -> "Chart":
        if m.p != self.p:
            raise ValueError("mixed primes")
        return Chart(
            self.p,
            [replace(t, gen=t.gen * m) for t in self.towers],
            list(self.edges),
        )

    # -- JSON ------------------------------------------------------------------
    def to_json(self) -> str:
        doc = {
            "schema_version": 1,
            "prime": self.p,
            "towers": [
                {
                    "id": t.id,
                    "gen": t.gen.render(),
                    "base_s": t.base_s,
                    "height": t.height if t.height is not None else "unbounded",
                }
                for t in sorted(self.towers, key=lambda t: t.id)
            ],
            "edges": [
                {
                    "src": list(e.src),
                    "dst": [list(d) for d in e.dst],
                    "kind": e.kind,
                }
                for e in sorted(self.edges, key=lambda e: e.src)
            ],
        }
        return json.dumps(doc, indent=1, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "Chart":
        doc = json.loads(text)
        p = doc["prime"]
        towers = [
            Tower(
                t["id"],
                parse_monomial(p, t["gen"]),
                t["base_s"],
                None if t["height"] == "unbounded" else t["height"],
            )
            for t in doc["towers"]
        ]
        edges = [
            PEdge(
                tuple(e["src"]),
                tuple(tuple(d) for d in e["dst"]),
                e["kind"],
            )
            for e in doc["edges"]
        ]
        return Chart(p, towers, edges)


def direct_sum(charts: Iterable[Chart]) -> Chart:
    charts = list(charts)
    if not charts:
        raise ValueError("direct_sum needs at least one chart (prime unknown)")
    p = charts[0].p
    towers: list[Tower] = []
    edges: list[PEdge] = []
    offset = 0
    for c in charts:
        if c.p != p:
            raise ValueError("mixed primes")
        remap = {}
        for t in c.towers:
            remap[t.id] = offset
            towers.append(replace(t, id=offset))
            offset += 1
        for e in c.edges:
            edges.append(
                PEdge(
                    (remap[e.src[0]], e.src[1]),
                    tuple((remap[d[0]], d[1]) for d in e.dst),
                    e.kind,
                )
            )
    return Chart(p, towers, edges)


def empty_chart(p: int) -> Chart:
    return Chart(p, [], [])


# -- realized windows and duality ---------------------------------------------


class RealizedWindow:
    """A degree-window slice of a chart, or of its Pontryagin dual, exposing
    explicit groups and the rank invariants of the maps x -> p^a v^b x.

    The dual is realized through the primal presentation: the degree-n
    component of the dual is the dual group of the primal degree -n
    component, and p^a v^b on the dual has image of the same order as
    p^a v^b mapping primal degree -n+2(p-1)b to -n (transposed actions).
    """

    def __init__(self, chart: Chart, lo: int, hi: int, dual: bool = False):
        if lo > hi:
            raise ValueError("empty window")
        self.chart = chart
        self.lo = lo
        self.hi = hi
        self.dual = dual
        self._order_cache: dict[tuple, int] = {}

    def _primal_degree(self, n: int) -> int:
        return -n if self.dual else n

    def _check(self, n: int) -> None:
        if not (self.lo <= n <= self.hi):
            raise ValueError(f"degree {n} outside window [{self.lo}, {self.hi}]")

    def group_at(self, n: int) -> list[int]:
        self._check(n)
        return self.chart.group_at(self._primal_degree(n))

    def dualize(self) -> "RealizedWindow":
        return RealizedWindow(self.chart, -self.hi, -self.lo, not self.dual)

    # -- rank invariant -------------------------------------------------------
    def _log_order(self, rows: list[list[int]], ncols: int) -> int:
        return sum(cokernel_exponents(rows, ncols, self.chart.p))

    def rank_invariant(self, n: int, a: int, b: int) -> int:
        """log_p of the order of the image of p^a v^b from degree n to
        degree n - 2(p-1)b of the realized module."""
        self._check(n)
        self._check(n - 2 * (self.chart.p - 1) * b)
        if self.dual:
            # transposed map: same image order as the primal map into -n
            src = -n + 2 * (self.chart.p - 1) * b
            return self._primal_rank(src, a, b)
        return self._primal_rank(n, a, b)

    def _primal_rank(self, n: int, a: int, b: int) -> int:
        key = (n, a, b)
        if key in self._order_cache:
            return self._order_cache[key]
        c = self.chart
        tgt_n = n - 2 * (c.p - 1) * b
        src_dots = c.dots_at(n)
        tgt_dots = c.dots_at(tgt_n)
        index = {d: i for i, d in enumerate(tgt_dots)}
        rel = c.relation_rows(tgt_dots)
        images = []
        scale = c.p**a
        for t, alpha in src_dots:
            row = [0] * len(tgt_dots)
            shifted = (t, alpha + b)
            if shifted in index:
                row[index[shifted]] = scale
            images.append(row)
        full = self._log_order(rel, len(tgt_dots))
        quot = self._log_order(rel + images, len(tgt_dots))
        val = full - quot
        self._order_cache[key] = val
        return val


def dualize(chart: Chart, window: tuple[int, int]) -> RealizedWindow:
    """Pontryagin dual of the chart realized on the given (dual-side) degree
    window."""
    lo, hi = window
    return RealizedWindow(chart, lo, hi, dual=True)


def realize(chart: Chart, window: tuple[int, int]) -> RealizedWindow:
    lo, hi = window
    return RealizedWindow(chart, lo, hi, dual=False)


# -- monomial text grammar ------------------------------------------------------

_TOKEN = re.compile(r"q|y(\d+)(?:\^(\d+))?|z(\d+)(?:\^(\d+))?|z\[(\d+),(\d+)\]|1")


def parse_monomial(p: int, text: str) -> Monomial:
    """Inverse of Monomial.render for the documented grammar."""
    from .monomial import z_comp

    m = Monomial.one(p)
    for tok in text.split():
        mt = _TOKEN.fullmatch(tok)
        if not mt:
            raise ValueError(f"bad monomial token {tok!r}")
        if tok == "1":
            continue
        if tok == "q":
            m = m * Monomial.gen(p, "q")
        elif mt.group(1) is not None:
            m = m * Monomial.gen(p, "y", int(mt.group(1)), int(mt.group(2) or 1))
        elif mt.group(3) is not None:
            m = m * Monomial.gen(p, "z", int(mt.group(3)), int(mt.group(4) or 1))
        else:
            m = m * z_comp(p, int(mt.group(5)), int(mt.group(6)))
    return m
