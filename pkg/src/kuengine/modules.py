"""Closed-form construction of the answer charts.

Core charts (recursive):

    B_k  built from  z_{k-1}^{p-1} B_{k-1},  TP_{p^k-k}[v] z_k,  y_{k-1}^{p-1} B_{k-1}
    A_k  built from  z_{k-1}^{p-1} B_{k-1},  TP_{p^k}[v]   z_k,  y_{k-1}^{p-1} A_{k-1}

with B_{k0-1} = 0 (k0 = 2 at p = 2, else 1) and A_0 = <z_0>, glued by

    rule1 (k >= 2):  p . v^a z_k      = v^(a+1) (z_{k-1}^p ...)   [h0 edges]
    rule2 (k >= 1):  p . (y-copy top) = v^(p^(k-1)(p-1)) z_k      [exotic]

rule2 targets are appended to whatever edge the y-copy's top tower already
inherited, which is how the two-target extensions arise.  S_{k,l} is the
finite chain chart of composite classes z[i,l].

even_part / odd_part assemble the full even- and odd-degree answer as a
direct sum of monomial multiples of the cores; ku_group_at slices it into
explicit groups, and assoc_graded_dims provides the independent
associated-graded dimension count used as a cross-check.
"""

from __future__ import annotations

from dataclasses import replace
from functools import lru_cache

from .chart import Chart, PEdge, Tower, direct_sum, empty_chart, realize
from .monomial import (
    Monomial,
    enumerate_family,
    k0,
    q_degree,
    y_degree,
    z_comp,
    z_degree,
)
from .padic import nu


class CoreChart:
    """A chart together with its handle: the id of the level-k z-tower that
    glue edges attach to (None for an empty chart)."""

    def __init__(self, chart: Chart, handle: int | None):
        self.chart = chart
        self.handle = handle


def _reindexed(parts: list[Chart]) -> tuple[list[Tower], list[PEdge], list[int]]:
    towers: list[Tower] = []
    edges: list[PEdge] = []
    offsets: list[int] = []
    off = 0
    for c in parts:
        offsets.append(off)
        remap = {}
        for t in c.towers:
            remap[t.id] = off
            towers.append(replace(t, id=off))
            off += 1
        for e in c.edges:
            edges.append(
                PEdge(
                    (remap[e.src[0]], e.src[1]),
                    tuple((remap[d[0]], d[1]) for d in e.dst),
                    e.kind,
                )
            )
    return towers, edges, offsets


def _glue(
    p: int,
    k: int,
    zcopy: CoreChart | None,
    new_height: int,
    ycopy: CoreChart | None,
) -> CoreChart:
    """Shared assembly for build_A/build_B: [z-copy] + new z_k tower +
    [y-copy] with rule1/rule2 edges."""
    parts: list[Chart] = []
    if zcopy is not None:
        parts.append(zcopy.chart)
    ztower_chart = Chart(p, [Tower(0, Monomial.gen(p, "z", k), 0, new_height)])
    parts.append(ztower_chart)
    if ycopy is not None:
        parts.append(ycopy.chart)
    towers, edges, offsets = _reindexed(parts)
    new_id = offsets[0] if zcopy is None else offsets[1]
    edge_by_src = {e.src: e for e in edges}

    # rule1: p . v^a z_k = v^(a+1) on the z-copy's handle tower (k >= 2)
    if zcopy is not None and zcopy.handle is not None and k >= 2:
        handle_id = offsets[0] + zcopy.handle
        handle_h = next(t.height for t in towers if t.id == handle_id)
        for a in range(new_height):
            if handle_h is not None and a + 1 >= handle_h:
                break
            edge_by_src[(new_id, a)] = PEdge((new_id, a), ((handle_id, a + 1),), "h0")

    # rule2: p . (y-copy handle dot a) gains target v^(p^(k-1)(p-1)+a) z_k
    if ycopy is not None and ycopy.handle is not None:
        y_part_index = len(parts) - 1
        yh_id = offsets[y_part_index] + ycopy.handle
        yh_height = next(t.height for t in towers if t.id == yh_id)
        shift = p ** (k - 1) * (p - 1)
        for a in range(yh_height):
            tgt_a = shift + a
            if tgt_a >= new_height:
                continue
            src = (yh_id, a)
            old = edge_by_src.get(src)
            if old is None:
                edge_by_src[src] = PEdge(src, ((new_id, tgt_a),), "exotic")
            else:
                edge_by_src[src] = PEdge(
                    src, old.dst + ((new_id, tgt_a),), "exotic"
                )

    return CoreChart(Chart(p, towers, sorted(edge_by_src.values(), key=lambda e: e.src)), new_id)


@lru_cache(maxsize=None)
def _build_B(p: int, k: int) -> CoreChart:
    if k < k0(p):
        return CoreChart(empty_chart(p), None)
    sub = _build_B(p, k - 1)
    zc = yc = None
    if sub.handle is not None:
        zc = CoreChart(
            sub.chart.tensor_monomial(Monomial.gen(p, "z", k - 1, p - 1)), sub.handle
        )
        yc = CoreChart(
            sub.chart.tensor_monomial(Monomial.gen(p, "y", k - 1, p - 1)), sub.handle
        )
    return _glue(p, k, zc, p**k - k, yc)


@lru_cache(maxsize=None)
def _build_A(p: int, k: int) -> CoreChart:
    if k < 0:
        raise ValueError("A_k needs k >= 0")
    if k == 0:
        c = Chart(p, [Tower(0, Monomial.gen(p, "z", 0), 0, 1)])
        return CoreChart(c, 0)
    subB = _build_B(p, k - 1)
    zc = None
    if subB.handle is not None:
        zc = CoreChart(
            subB.chart.tensor_monomial(Monomial.gen(p, "z", k - 1, p - 1)),
            subB.handle,
        )
    subA = _build_A(p, k - 1)
    yc = CoreChart(
        subA.chart.tensor_monomial(Monomial.gen(p, "y", k - 1, p - 1)), subA.handle
    )
    return _glue(p, k, zc, p**k, yc)


def build_B(p: int, k: int) -> Chart:
    """The chart B_k (empty for k < k0; B_2 at p=2 is a single height-2
    tower on z_2)."""
    if k < k0(p) - 1:
        raise ValueError(f"B_k defined for k >= {k0(p) - 1}")
    return _build_B(p, k).chart

def build_A(p: int, k: int) -> Chart:
    """The chart A_k (A_0 is the single dot z_0)."""
    return _build_A(p, k).chart


def build_S(p: int, k: int, ell: int) -> Chart:
    """S_{k,l}: towers of height k+1 on the composite classes z[i,l] for
    k0 <= i <= l-k-1+k0, chained by p . z[i,l] = v z[i-1,l], with the
    bottom class z[k0,l] satisfying p . z[k0,l] = 0."""
    if not (1 <= k < ell):
        raise ValueError("build_S needs 1 <= k < ell")
    lo = k0(p)
    hi = ell - k - 1 + lo
    towers = []
    edges = []
    for t, i in enumerate(range(lo, hi + 1)):
        towers.append(Tower(t, z_comp(p, i, ell), 0, k + 1))
    for t, i in enumerate(range(lo, hi + 1)):
        if i == lo:
            continue
        for a in range(k + 1):
            if a + 1 < k + 1:
                edges.append(PEdge((t, a), ((t - 1, a + 1),), "h0"))
    return Chart(p, towers, edges)


# -- assemblies ----------------------------------------------------------------


@lru_cache(maxsize=None)
def _core_min_degree(p: int, kind: str, k: int) -> int | None:
    core = _build_A(p, k).chart if kind == "A" else _build_B(p, k).chart
    if not core.towers:
        return None
    return core.min_dot_degree()


@lru_cache(maxsize=None)
def even_part(p: int, cutoff: int) -> Chart:
    """Direct sum over k >= 1 and multiplier monomials M of M.A_k (M with no
    z-factors) and M.B_k (M with z-factors), keeping summands whose minimum
    dot degree is <= cutoff."""
    parts: list[Chart] = []
    k = 1
    while True:
        min_a = _core_min_degree(p, "A", k)
        if min_a is None or min_a > cutoff:
            break
        core_a = _build_A(p, k).chart
        for m in enumerate_family(p, "MkA", k, cutoff - min_a):
            parts.append(core_a.tensor_monomial(m))
        min_b = _core_min_degree(p, "B", k)
        if min_b is not None and min_b <= cutoff:
            core_b = _build_B(p, k).chart
            for m in enumerate_family(p, "MkB", k, cutoff - min_b):
                parts.append(core_b.tensor_monomial(m))
        k += 1
    if not parts:
        return empty_chart(p)
    return direct_sum(parts)


@lru_cache(maxsize=None)
def odd_part(p: int, cutoff: int) -> Chart:
    """Direct sum over i >= 1, l >= nu(i)+2 of q y_1^(i-1) m . S_{nu(i)+1, l}
    with m running over TP_{p-1}[z_l] x Lambda_{l+1}, keeping summands whose
    minimum dot degree is <= cutoff."""
    parts: list[Chart] = []
    qd = q_degree(p)
    i = 1
    while qd + y_degree(p, 1) * (i - 1) <= cutoff:
        v = nu(p, i)
        k = v + 1
        ell = v + 2
        while True:
            s_core = build_S(p, k, ell)
            s_min = s_core.min_dot_degree()
            base = Monomial.gen(p, "q") * Monomial.gen(p, "y", 1, i - 1)
            head = base.degree + s_min
            if head > cutoff:
                break
            room = cutoff - head
            for e in range(p - 1):
                ze = Monomial.gen(p, "z", ell, e) if e else Monomial.one(p)
                if ze.degree > room:
                    break
                for lam in enumerate_family(p, "Lambda", ell + 1, room - ze.degree):
                    parts.append(s_core.tensor_monomial(base * ze * lam))
            ell += 1
        i += 1
    if not parts:
        return empty_chart(p)
    return direct_sum(parts)


def _round_up(n: int, step: int = 50) -> int:
    return max(step, ((n + step - 1) // step) * step)


@lru_cache(maxsize=None)
def full_chart(p: int, cutoff: int) -> Chart:
    return direct_sum([even_part(p, cutoff), odd_part(p, cutoff)])


def ku_group_at(p: int, n: int, cutoff: int | None = None) -> list[int]:
    """Exponents of ku^n as a finite abelian p-group (trivial/free summand
    excluded; see the Margolis oracle for its per-degree count).  Any cutoff
    >= n gives the same answer: summands built later have no dots this low."""
    if n < 0:
        return []
    d = cutoff if cutoff is not None else _round_up(n)
    if d < n:
        raise ValueError("cutoff below requested degree")
    return full_chart(p, d).group_at(n)


def ku_homology_group_at(p: int, n: int, cutoff: int | None = None) -> list[int]:
    """ku_n = dual of ku^(n+2p); finite groups are self-dual, so the
    exponent list is ku_group_at(n + 2p)."""
    return ku_group_at(p, n + 2 * p, cutoff)


# -- associated-graded cross-check ----------------------------------------------


@lru_cache(maxsize=None)
def assoc_graded_chart(p: int, cutoff: int) -> Chart:
    """Edge-free chart of the three associated-graded lines:

      (line 1)  P[y_1] y_0^{p-1} z_0  and  TP_{p^t}[v] P[y_t] z_t   (t >= 1)
      (line 2)  TP_{p^t-t}[v] P[y_t] z_t LambdaBar_t               (t >= k0)
      (line 3)  TP_{nu(i)+2}[v] q y_1^{i-1} z[k0+l, l+nu(i)+2] Lambda_{l+nu(i)+2}
                                                                    (i >= 1, l >= 0)
    """
    towers: list[Tower] = []

    def add(gen: Monomial, height: int) -> None:
        if gen.degree - 2 * (p - 1) * (height - 1) <= cutoff:
            towers.append(Tower(len(towers), gen, 0, height))

    step = 2 * (p - 1)
    # line 1
    b = 0
    while 4 * p + 2 * p * b <= cutoff:
        add(
            Monomial.gen(p, "y", 1, b) * Monomial.gen(p, "y", 0, p - 1) * Monomial.gen(p, "z", 0),
            1,
        )
        b += 1
    t = 1
    while True:
        h = p**t
        slack = step * (h - 1)
        if z_degree(p, t) - slack > cutoff:
            break
        e = 0
        while z_degree(p, t) + y_degree(p, t) * e - slack <= cutoff:
            add(Monomial.gen(p, "y", t, e) * Monomial.gen(p, "z", t), h)
            e += 1
        t += 1
    # line 2
    t = k0(p)
    while True:
        h = p**t - t
        slack = step * (h - 1)
        if 2 * z_degree(p, t) - slack > cutoff:
            break
        for lam in enumerate_family(p, "LambdaBar", t, cutoff + slack - z_degree(p, t)):
            e = 0
            while z_degree(p, t) + lam.degree + y_degree(p, t) * e - slack <= cutoff:
                add(Monomial.gen(p, "y", t, e) * Monomial.gen(p, "z", t) * lam, h)
                e += 1
        t += 1
    # line 3
    qd = q_degree(p)
    i = 1
    while qd + y_degree(p, 1) * (i - 1) <= cutoff:
        v = nu(p, i)
        h = v + 2
        slack = step * (h - 1)
        base = Monomial.gen(p, "q") * Monomial.gen(p, "y", 1, i - 1)
        ell = 0
        while True:
            comp = z_comp(p, k0(p) + ell, ell + v + 2)
            if base.degree + comp.degree - slack > cutoff:
                break
            room = cutoff + slack - base.degree - comp.degree
            for lam in enumerate_family(p, "Lambda", ell + v + 2, room):
                add(base * comp * lam, h)
            ell += 1
        i += 1
    return Chart(p, towers, [])


def assoc_graded_dims(p: int, n: int, cutoff: int | None = None) -> int:
    d = cutoff if cutoff is not None else _round_up(n)
    return assoc_graded_chart(p, d).dims_at(n)


# -- self-duality of the B_k ------------------------------------------------------


def duality_audit(p: int, k_max: int = 4) -> dict:
    """Check the self-duality of each B_k through its rank invariants.

    The Pontryagin dual of B_k is a regraded copy of B_k itself: negating
    degrees and suspending by sigma = 2(p^{k+1} + p^k + (k+1)p - k + 1)
    carries one onto the other.  Taking orders of images of p^a v^b on both
    sides turns this into a palindrome identity on the primal module,

        rank(n, a, b) = rank(sigma - n + 2(p-1)b, a, b),

    where rank(n, a, b) = log_p |im(p^a v^b : B_k^n -> B_k^{n-2(p-1)b})|.
    (Dualizing transposes the action, so the image orders of p^a v^b out of
    the dual's degree n match those into the primal's degree -n; regrading
    by n -> sigma - n turns that matching into the reflection above.)

    Checked for k0 <= k <= k_max over every degree in the support band,
    with 0 <= a <= k+2 and 0 <= b <= p^k.
    """
    step = 2 * (p - 1)
    rows = []
    for k in range(k0(p), k_max + 1):
        c = build_B(p, k)
        sigma = 2 * (p ** (k + 1) + p**k + (k + 1) * p - k + 1)
        lo, hi = c.min_dot_degree(), c.max_dot_degree()
        a_max, b_max = k + 2, p**k
        pad = step * b_max
        win = realize(
            c, (min(lo, sigma - hi - pad) - pad, max(hi, sigma - lo + pad) + pad)
        )
        dims = {n: c.dims_at(n) for n in range(win.lo, win.hi + 1)}
        checked = 0
        mismatches = []
        for n in range(lo, hi + 1):
            for b in range(b_max + 1):
                m = sigma - n + step * b
                if not (dims.get(n, 0) or dims.get(m, 0)):
                    continue
                for a in range(a_max + 1):
                    lhs = win.rank_invariant(n, a, b)
                    rhs = win.rank_invariant(m, a, b)
                    checked += 1
                    if lhs != rhs:
                        mismatches.append(
                            {"n": n, "a": a, "b": b, "lhs": lhs, "rhs": rhs}
                        )
        rows.append(
            {
                "k": k,
                "sigma": sigma,
                "support": [lo, hi],
                "checked": checked,
                "mismatches": mismatches,
                "pass": not mismatches,
            }
        )
    failures = [row for row in rows if not row["pass"]]
    return {
        "p": p,
        "k_max": k_max,
        "checked": sum(row["checked"] for row in rows),
        "rows": rows,
        "failures": failures,
        "ok": not failures,
    }
