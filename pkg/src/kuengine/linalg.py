"""Exact linear algebra over F_p and over the p-local integers.

Three jobs only:

* gf_rank: ranks of (possibly large, dense) matrices over F_p, used by the
  Margolis/Ext oracles.  p = 2 gets a bit-packed XOR path; odd primes use
  vectorized modular elimination.

* gf_rank_sparse: the same rank from a (row, col, coeff) triple list, with
  word-packed elimination planes for p = 2 and p = 3.  This is the path the
  brute-force Ext calculator takes: its boundary matrices are large but
  very sparse, and packing 64 columns per machine word keeps the whole
  window in the "minutes" regime.

* cokernel_exponents: the p-exponents e_i of a finite cokernel
  Z_(p)^ncols / rowspan, used to turn chart presentations into explicit
  abelian p-groups.  Entries are tiny ({0, +-1, +-p} in practice), so the
  elimination tracks valuations by repeatedly stripping unit pivots and
  dividing the remainder by p; arithmetic runs modulo a power of p large
  enough that no information is lost for a finite cokernel.
"""

from __future__ import annotations

import numpy as np


def gf_rank(mat: np.ndarray, p: int) -> int:
    """Rank over F_p of an integer matrix (any dtype; reduced mod p here)."""
    if mat.size == 0:
        return 0
    if p == 2:
        return _gf2_rank_bitpacked(mat)
    a = np.ascontiguousarray(mat % p, dtype=np.int64)
    rows, cols = a.shape
    rank = 0
    for c in range(cols):
        piv = None
        for r in range(rank, rows):
            if a[r, c] % p:
                piv = r
                break
        if piv is None:
            continue
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, c]), p - 2, p)
        a[rank, c:] = (a[rank, c:] * inv) % p
        col = a[rank + 1 :, c].copy()
        nz = np.nonzero(col)[0]
        if nz.size:
            a[rank + 1 + nz, c:] = (
                a[rank + 1 + nz, c:] - np.outer(col[nz], a[rank, c:])
            ) % p
        rank += 1
        if rank == rows:
            break
    return rank


def _gf2_rank_bitpacked(mat: np.ndarray) -> int:
    rows = []
    ncols = mat.shape[1]
    for r in range(mat.shape[0]):
        bits = 0
        row = mat[r]
        for c in np.nonzero(row % 2)[0]:
            bits |= 1 << int(c)
        if bits:
            rows.append(bits)
    rank = 0
    pivots: dict[int, int] = {}
    for row in rows:
        while row:
            lead = row.bit_length() - 1
            if lead in pivots:
                row ^= pivots[lead]
            else:
                pivots[lead] = row
                rank += 1
                break
    return rank


def gf_rank_sparse(
    entries: list[tuple[int, int, int]], nrows: int, ncols: int, p: int
) -> int:
    """Rank over F_p of the nrows x ncols matrix with the given
    (row, col, coeff) entries (duplicates accumulate)."""
    if nrows == 0 or ncols == 0 or not entries:
        return 0
    if p == 2:
        return _rank2_packed(entries, nrows, ncols)
    if p == 3:
        return _rank3_packed(entries, nrows, ncols)
    mat = np.zeros((nrows, ncols), dtype=np.int64)
    for r, c, v in entries:
        mat[r, c] += v
    return gf_rank(mat, p)


def _rank2_packed(entries, nrows, ncols):
    words = (ncols + 63) >> 6
    m = np.zeros((nrows, words), dtype=np.uint64)
    for r, c, v in entries:
        if v & 1:
            m[r, c >> 6] ^= np.uint64(1 << (c & 63))
    one = np.uint64(1)
    rank = 0
    for c in range(ncols):
        if rank == nrows:
            break
        w, b = c >> 6, np.uint64(c & 63)
        nz = np.nonzero((m[rank:, w] >> b) & one)[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            m[[rank, piv]] = m[[piv, rank]]
        sel = rank + 1 + np.nonzero((m[rank + 1 :, w] >> b) & one)[0]
        if sel.size:
            m[sel] ^= m[rank]
        rank += 1
    return rank


def _rank3_packed(entries, nrows, ncols):
    # Digits of F_3 live in two bit planes: lo marks value 1, hi marks 2.
    # Plane-swapping negates; bitwise sum-mod-3 follows the truth table below.
    acc: dict[tuple[int, int], int] = {}
    for r, c, v in entries:
        acc[(r, c)] = (acc.get((r, c), 0) + v) % 3
    words = (ncols + 63) >> 6
    lo = np.zeros((nrows, words), dtype=np.uint64)
    hi = np.zeros((nrows, words), dtype=np.uint64)
    for (r, c), v in acc.items():
        if v == 1:
            lo[r, c >> 6] |= np.uint64(1 << (c & 63))
        elif v == 2:
            hi[r, c >> 6] |= np.uint64(1 << (c & 63))
    one = np.uint64(1)
    rank = 0
    for c in range(ncols):
        if rank == nrows:
            break
        w, b = c >> 6, np.uint64(c & 63)
        nz = np.nonzero(((lo[rank:, w] | hi[rank:, w]) >> b) & one)[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            lo[[rank, piv]] = lo[[piv, rank]]
            hi[[rank, piv]] = hi[[piv, rank]]
        if (hi[rank, w] >> b) & one:
            lo[rank], hi[rank] = hi[rank].copy(), lo[rank].copy()
        plo, phi = lo[rank].copy(), hi[rank].copy()
        sel1 = rank + 1 + np.nonzero((lo[rank + 1 :, w] >> b) & one)[0]
        sel2 = rank + 1 + np.nonzero((hi[rank + 1 :, w] >> b) & one)[0]
        # value-1 rows subtract the pivot (add twice it: planes swapped);
        # value-2 rows subtract it twice (add it once: planes as-is).
        for sel, blo, bhi in ((sel1, phi, plo), (sel2, plo, phi)):
            if sel.size == 0:
                continue
            alo, ahi = lo[sel], hi[sel]
            lo[sel] = (alo & ~blo & ~bhi) | (blo & ~alo & ~ahi) | (ahi & bhi)
            hi[sel] = (ahi & ~blo & ~bhi) | (bhi & ~alo & ~ahi) | (alo & blo)
        rank += 1
    return rank


def cokernel_exponents(rows: list[list[int]], ncols: int, p: int) -> list[int]:
    """Exponents e >= 0 (one per column) with coker = direct sum of Z/p^e,
    sorted descending.  Raises ArithmeticError if the cokernel is infinite
    (some column never meets a pivot)."""
    if ncols == 0:
        return []
    budget = ncols + 2
    mod = p**budget
    work = [[x % mod for x in row] for row in rows if any(x % mod for x in row)]
    exps: list[int] = []
    offset = 0
    cols = ncols
    while cols:
        piv = None
        for ri, row in enumerate(work):
            for ci, x in enumerate(row):
                if x % p:
                    piv = (ri, ci)
                    break
            if piv:
                break
        if piv is None:
            if not work:
                raise ArithmeticError("infinite cokernel: relations ran out")
            # every entry divisible by p: strip one factor from the matrix
            offset += 1
            mod //= p
            if mod <= 1:
                raise ArithmeticError("valuation budget exhausted")
            work = [
                [(x // p) % mod for x in row]
                for row in work
                if any((x // p) % mod for x in row)
            ]
            continue
        ri, ci = piv
        prow = work.pop(ri)
        uinv = pow(prow[ci], -1, mod)
        prow = [(x * uinv) % mod for x in prow]
        for row in work:
            f = row[ci]
            if f:
                for j in range(cols):
                    row[j] = (row[j] - f * prow[j]) % mod
        for row in work:
            del row[ci]
        work = [row for row in work if any(row)]
        exps.append(offset)
        cols -= 1
    return sorted(exps, reverse=True)


def group_exponents(rows: list[list[int]], ncols: int, p: int) -> list[int]:
    """Like cokernel_exponents but dropping the trivial (e = 0) factors:
    the canonical descending exponent list of a finite abelian p-group."""
    return [e for e in cokernel_exponents(rows, ncols, p) if e > 0]
