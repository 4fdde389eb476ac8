"""c-DDT measurement engine: entries, row spectra, uniformity, sweeps.

The bivariate c-derivative of F = (G, H) at c = (c1, c2), a = (a1, a2) is

    D1 = G(x+a1, y+a2) - c1*G(x,y) + t*c2*H(x,y)
    D2 = H(x+a1, y+a2) - (c1-c2)*H(x,y) - c2*G(x,y)

and the DDT entry at (a, b) counts domain points with (D1, D2) = b.  The
engine iterates the domain once per (c, a) and buckets the derivative, which
is O(q^2) per row instead of solving systems; rows are processed in blocks
as numpy arrays.  Univariate functions use Definition-style F(z+a) - c*F(z).

Every sweep asserts row mass conservation (each row sums to the domain size).
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .gf import CduError, FieldCtx
from .quadext import BivElem, QuadExtCtx
from .funcs import (BIV, G_PLUS_BETA_H, FuncSpec, PairTables, UniTable,
                    DomainMismatch, tables_for, univariate_lift)


@dataclass(frozen=True)
class CParam:
    """The multiplier c: a pair (c1, c2) over F_q or a scalar over F_{q^2}."""

    kind: str
    c1: int = 0
    c2: int = 0
    c: int = 0

    @staticmethod
    def biv(c1, c2):
        return CParam("biv", c1=int(c1), c2=int(c2))

    @staticmethod
    def uni(c):
        return CParam("uni", c=int(c))

    @property
    def is_identity(self):
        """True for c = (1,0) resp. c = 1, which switches the a-quantifier."""
        if self.kind == "biv":
            return self.c1 == 1 and self.c2 == 0
        return self.c == 1


@dataclass
class CDdtReport:
    """Uniformity, full entry spectrum and a witness for one (function, c)."""

    c: CParam
    uniformity: int
    spectrum: dict
    witness: tuple  # (a index, b index) in domain/codomain encoding
    classification: str


def classify(uniformity):
    if uniformity == 1:
        return "PcN"
    if uniformity == 2:
        return "APcN"
    return f"(c,{uniformity})"


# ---------------------------------------------------------------------------
# shift machinery: index arrays for point + a over each domain shape
# ---------------------------------------------------------------------------

class _Shifts:
    """Produces [block, N] index arrays of point+a for a range of a."""

    def __init__(self, field: FieldCtx, pair: bool):
        self.pair = pair
        self.field = field
        q = field.q
        self.n = q * q if pair else q
        self._table = None
        if field.p != 2 and field._add_table is not None:
            if pair:
                add = field._add_table
                a1 = (add.astype(np.int64) * q)
                # broadcast to axes [ax, ay, x, y], then flatten to [a_pt, pt]
                t = a1[:, None, :, None] + add[None, :, None, :].astype(np.int64)
                self._table = t.reshape(self.n, self.n).astype(np.int32)
            else:
                self._table = field._add_table

    def block(self, a0, a1):
        if self._table is not None:
            return self._table[a0:a1]
        a = np.arange(a0, a1, dtype=np.int32)
        pts = np.arange(self.n, dtype=np.int32)
        if self.field.p == 2:
            # index addition is XOR, and pair bit fields align with x*q+y
            return np.bitwise_xor.outer(a, pts)
        if self.pair:
            q = self.field.q
            hi = self.field.add_vec(a[:, None] // q, pts[None, :] // q)
            lo = self.field.add_vec(a[:, None] % q, pts[None, :] % q)
            return (hi.astype(np.int64) * q + lo).astype(np.int32)
        return self.field.add_vec(a[:, None], pts[None, :])


_shift_cache = {}


def _shifts_for(field, pair):
    key = (field, pair)
    out = _shift_cache.get(key)
    if out is None:
        out = _Shifts(field, pair)
        _shift_cache[key] = out
    return out


def _block_size(n):
    return max(1, min(n, (1 << 22) // n))


# ---------------------------------------------------------------------------
# core histogram passes
# ---------------------------------------------------------------------------

def _scan_rows(shifts, n_b, rows_fn, skip_a0):
    """Shared row loop: max entry, spectrum, lexicographically first witness."""
    n = shifts.n
    best = (-1, -1, -1)
    spectrum = np.zeros(n + 1, dtype=np.int64)
    blk = _block_size(n)
    for a0 in range(0, n, blk):
        a1 = min(n, a0 + blk)
        bins = rows_fn(a0, a1)
        if not (bins.sum(axis=1) == n).all():
            raise CduError("row mass conservation violated (engine bug)")
        start = 1 if (skip_a0 and a0 == 0) else 0
        sub = bins[start:]
        if sub.size == 0:
            continue
        spectrum += np.bincount(sub.ravel(), minlength=n + 1)
        bm = int(sub.max())
        if bm > best[0]:
            flat = int(np.argmax(sub == bm))
            best = (bm, a0 + start + flat // n_b, flat % n_b)
    return best, {int(v): int(c) for v, c in enumerate(spectrum) if c}


def _pair_rows_fn(qctx, tabs, c1, c2):
    base = qctx.base
    field = qctx.base if tabs.domain == BIV else qctx.ext
    shifts = _shifts_for(field, pair=(tabs.domain == BIV))
    q = base.q
    gt, ht = tabs.g, tabs.h
    u = base.add_vec(base.mul_row(base.neg(c1))[gt],
                     base.mul_row(base.mul(qctx.t, c2))[ht])
    v = base.add_vec(base.mul_row(base.neg(base.sub(c1, c2)))[ht],
                     base.mul_row(base.neg(c2))[gt])
    n_b = q * q

    def rows(a0, a1):
        sh = shifts.block(a0, a1)
        d1 = base.add_vec(gt[sh], u[None, :])
        d2 = base.add_vec(ht[sh], v[None, :])
        out = d1.astype(np.int64) * q + d2
        off = np.arange(a1 - a0, dtype=np.int64)[:, None] * n_b
        return np.bincount((out + off).ravel(),
                           minlength=(a1 - a0) * n_b).reshape(a1 - a0, n_b)

    return shifts, n_b, rows


def _uni_rows_fn(field, table, c):
    shifts = _shifts_for(field, pair=False)
    u = field.mul_row(field.neg(c))[table]
    n_b = field.q

    def rows(a0, a1):
        sh = shifts.block(a0, a1)
        d = field.add_vec(table[sh], u[None, :]).astype(np.int64)
        off = np.arange(a1 - a0, dtype=np.int64)[:, None] * n_b
        return np.bincount((d + off).ravel(),
                           minlength=(a1 - a0) * n_b).reshape(a1 - a0, n_b)

    return shifts, n_b, rows


def pair_report(qctx, tabs: PairTables, c: CParam) -> CDdtReport:
    shifts, n_b, rows = _pair_rows_fn(qctx, tabs, c.c1, c.c2)
    best, spectrum = _scan_rows(shifts, n_b, rows, c.is_identity)
    return CDdtReport(c, best[0], spectrum, (best[1], best[2]),
                      classify(best[0]))


def uni_report(field, table, c: CParam) -> CDdtReport:
    shifts, n_b, rows = _uni_rows_fn(field, table, c.c)
    best, spectrum = _scan_rows(shifts, n_b, rows, c.is_identity)
    return CDdtReport(c, best[0], spectrum, (best[1], best[2]),
                      classify(best[0]))


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def c_derivative(spec: FuncSpec, qctx: QuadExtCtx, c: CParam, a, point):
    """One c-derivative value; shapes follow the spec's domain."""
    tabs = tables_for(spec, qctx)
    base = qctx.base
    if isinstance(tabs, UniTable):
        f = tabs.f
        z, av = point.idx, a.idx
        ext = qctx.ext
        return ext.elem(ext.sub(int(f[ext.add(z, av)]),
                                ext.mul(c.c, int(f[z]))))
    if tabs.domain == BIV:
        if not isinstance(point, BivElem) or not isinstance(a, BivElem):
            raise DomainMismatch("bivariate derivative expects BivElem a and point")
        pt = qctx.pt(point.x.idx, point.y.idx)
        sh = qctx.pt(base.add(point.x.idx, a.x.idx),
                     base.add(point.y.idx, a.y.idx))
    else:
        pt = point.idx
        sh = qctx.ext.add(point.idx, a.idx)
    g, h = int(tabs.g[pt]), int(tabs.h[pt])
    d1 = base.add(base.sub(int(tabs.g[sh]), base.mul(c.c1, g)),
                  base.mul(qctx.t, base.mul(c.c2, h)))
    d2 = base.sub(base.sub(int(tabs.h[sh]), base.mul(base.sub(c.c1, c.c2), h)),
                  base.mul(c.c2, g))
    return qctx.biv(d1, d2)


def c_row_spectrum(spec: FuncSpec, qctx: QuadExtCtx, c: CParam, a_index):
    """Histogram over the codomain for one (c, a); a_index is the domain index."""
    tabs = tables_for(spec, qctx)
    if isinstance(tabs, UniTable):
        _, _, rows = _uni_rows_fn(qctx.ext, tabs.f, c.c)
    else:
        _, _, rows = _pair_rows_fn(qctx, tabs, c.c1, c.c2)
    return rows(a_index, a_index + 1)[0]


def c_uniformity(spec: FuncSpec, qctx: QuadExtCtx, c: CParam) -> CDdtReport:
    tabs = tables_for(spec, qctx)
    if isinstance(tabs, UniTable):
        return uni_report(qctx.ext, tabs.f, c)
    return pair_report(qctx, tabs, c)


def sweep(spec: FuncSpec, qctx: QuadExtCtx, c_list, threads=1):
    """One report per c, in the order given; parallel over c when threads > 1."""
    tabs = tables_for(spec, qctx)  # shared read-only by workers

    def one(c):
        if isinstance(tabs, UniTable):
            return uni_report(qctx.ext, tabs.f, c)
        return pair_report(qctx, tabs, c)

    if threads <= 1:
        return [one(c) for c in c_list]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, c_list))


# ---------------------------------------------------------------------------
# c-set selectors
# ---------------------------------------------------------------------------

def c_all_biv(q, include_identity=False):
    out = [CParam.biv(c1, c2) for c1 in range(q) for c2 in range(q)]
    if include_identity:
        return out
    return [c for c in out if not c.is_identity]


def c_line_biv(q):
    """F_q x {0} minus the identity (1, 0)."""
    return [CParam.biv(c1, 0) for c1 in range(q) if c1 != 1]


def c_sample_biv(q, n, seed):
    pool = c_all_biv(q)
    rng = random.Random(seed)
    return rng.sample(pool, min(n, len(pool)))


def c_all_uni(big_q):
    return [CParam.uni(c) for c in range(big_q) if c != 1]


# ---------------------------------------------------------------------------
# bivariate <-> univariate consistency
# ---------------------------------------------------------------------------

@dataclass
class EquivalenceRow:
    c1: int
    c2: int
    biv_uniformity: int
    uni_uniformity: int
    match: bool


@dataclass
class EquivalenceReport:
    ordering: str
    rows: list
    all_match: bool


def equivalence_check(spec: FuncSpec, qctx: QuadExtCtx,
                      ordering=G_PLUS_BETA_H) -> EquivalenceReport:
    """Compare bivariate uniformity against the lifted univariate one per c.

    The univariate side runs at c = phi(c1, c2); a and b sweep the whole
    extension field, i.e. the images of all pairs under phi.
    """
    if spec.domain != BIV:
        raise DomainMismatch("equivalence_check needs a bivariate spec")
    tabs = tables_for(spec, qctx)
    lift = univariate_lift(spec, qctx, ordering)
    ltab = tables_for(lift, qctx).f
    q = qctx.base.q
    rows = []
    ok = True
    for c1 in range(q):
        for c2 in range(q):
            b = pair_report(qctx, tabs, CParam.biv(c1, c2))
            ce = int(qctx.phi_table[qctx.pt(c1, c2)])
            u = uni_report(qctx.ext, ltab, CParam.uni(ce))
            match = b.uniformity == u.uniformity
            ok = ok and match
            rows.append(EquivalenceRow(c1, c2, b.uniformity, u.uniformity, match))
    return EquivalenceReport(ordering, rows, ok)
