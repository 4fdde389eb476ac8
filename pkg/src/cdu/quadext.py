"""Pairing F_q x F_q with F_{q^2} through a root beta of x^2 + x + t.

The parameter t makes x^2 + x + t irreducible over F_q (trace condition in
even characteristic, non-square discriminant in odd characteristic).  With
beta a root in F_{q^2}, the map phi(x, y) = x + beta*y identifies pairs with
extension elements, and pair multiplication

    (x1, y1) * (x2, y2) = (x1*x2 - t*y1*y2, x1*y2 + x2*y1 - y1*y2)

agrees with the F_{q^2} product transported through phi.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .gf import (NSQ, CduError, FieldCtx, FieldElem, make_field)


class InvalidT(CduError):
    pass


class NoRootFound(CduError):
    pass


def t_condition_holds(base, t):
    """Whether x^2 + x + t is irreducible over the base field."""
    if base.p == 2:
        return base.trace1(t) == 1
    disc = base.sub(1, base.mul(4 % base.p, t))
    return base.is_square(disc) == NSQ


def select_t(base, override=None):
    """Pick t: the override if valid, else the first valid power of the primitive."""
    if override is not None:
        if not t_condition_holds(base, override):
            raise InvalidT(
                f"t = {base.elem_str(override)} fails the irreducibility condition")
        return override
    qm1 = base.q - 1
    for j in range(1, max(qm1, 1) + 1):
        t = int(base.antilog_table[j % max(qm1, 1)]) if qm1 else 1
        if t_condition_holds(base, t):
            return t
    raise InvalidT("no valid t exists (cannot happen for a genuine field)")


@dataclass(frozen=True)
class BivElem:
    """A point (x, y) of F_q x F_q; both coordinates share one context."""

    x: FieldElem
    y: FieldElem

    def __post_init__(self):
        if self.x.ctx is not self.y.ctx:
            raise CduError("BivElem coordinates from different contexts")

    def __repr__(self):
        return f"({self.x},{self.y})"


class QuadExtCtx:
    """The paired model: base F_q, ext F_{q^2}, t, beta, embedding and phi tables.

    Immutable after construction.  ``conjugate_beta=True`` selects the other
    root of x^2 + x + t; all reported uniformities must be independent of
    that choice (checked by a dedicated test).
    """

    def __init__(self, base: FieldCtx, t=None, conjugate_beta=False):
        self.base = base
        self.t = select_t(base, t)
        self.ext = make_field(base.p, 2 * base.m)
        self._build_embedding()
        self.t_ext = int(self.embed[self.t])
        self._find_beta(conjugate_beta)
        self._build_phi_tables()
        self._verify()

    def _build_embedding(self):
        base, ext = self.base, self.ext
        q, Q = base.q, ext.q
        step = (Q - 1) // (q - 1) if q > 2 else (Q - 1)
        target = base.min_poly(base.primitive)
        img = None
        if q == 2:
            img = 1  # F_2 embeds trivially
        else:
            for j in range(1, q):
                if gcd(j, q - 1) != 1:
                    continue
                cand = int(ext.antilog_table[(j * step) % (Q - 1)])
                if ext.min_poly(cand) == target:
                    img = cand
                    break
        if img is None:
            raise NoRootFound("no embedding of the base primitive found")
        embed = np.zeros(q, dtype=np.int32)
        cur = 1
        for i in range(q - 1):
            embed[int(base.antilog_table[i])] = cur
            cur = ext.mul(cur, img)
        self.embed = embed
        unembed = np.full(Q, -1, dtype=np.int32)
        unembed[embed] = np.arange(q, dtype=np.int32)
        self.unembed = unembed

    def _find_beta(self, conjugate_beta):
        ext = self.ext
        z = np.arange(ext.q, dtype=np.int32)
        vals = ext.add_vec(ext.add_vec(ext.mul_vec(z, z), z),
                           np.int32(self.t_ext))
        roots = np.flatnonzero(vals == 0)
        if len(roots) != 2:
            raise NoRootFound(
                f"x^2+x+t has {len(roots)} roots in the extension, expected 2")
        lo, hi = int(roots[0]), int(roots[1])
        self.beta = hi if conjugate_beta else lo
        self.beta_bar = lo if conjugate_beta else hi
        self.conjugate_beta = bool(conjugate_beta)

    def _build_phi_tables(self):
        base, ext = self.base, self.ext
        q = base.q
        mb = ext.mul_vec(np.int32(self.beta), self.embed)
        phi = ext.add_vec(self.embed[:, None], mb[None, :])  # [x, y]
        self.phi_table = phi.reshape(q * q).astype(np.int32)

        # independent inverse via Galois conjugation, Eq.-style formulas
        z = np.arange(ext.q, dtype=np.int32)
        zbar = ext.frobenius_vec(z, base.m)
        dinv = ext.inv(ext.sub(self.beta_bar, self.beta))
        xs = ext.mul_vec(
            ext.sub_vec(ext.mul_vec(np.int32(self.beta_bar), z),
                        ext.mul_vec(np.int32(self.beta), zbar)),
            np.int32(dinv))
        ys = ext.mul_vec(ext.sub_vec(z, zbar), np.int32(ext.neg(dinv)))
        xb = self.unembed[xs]
        yb = self.unembed[ys]
        if (xb < 0).any() or (yb < 0).any():
            raise NoRootFound("phi inverse left the embedded base field")
        self.phi_inv_table = (xb.astype(np.int64) * q + yb).astype(np.int32)

    def _verify(self):
        base, ext = self.base, self.ext
        assert self.unembed[self.beta] < 0, "beta lies in the embedded base field"
        b2 = ext.mul(self.beta, self.beta)
        assert ext.add(ext.add(b2, self.beta), self.t_ext) == 0
        assert ext.add(self.beta, self.beta_bar) == ext.neg(1)
        assert ext.mul(self.beta, self.beta_bar) == self.t_ext
        rt = self.phi_inv_table[self.phi_table]
        assert (rt == np.arange(base.q * base.q, dtype=np.int32)).all()
        rt2 = self.phi_table[self.phi_inv_table]
        assert (rt2 == np.arange(ext.q, dtype=np.int32)).all()
        # embedding respects both field operations
        q = base.q
        u = np.repeat(np.arange(q, dtype=np.int32), q)
        v = np.tile(np.arange(q, dtype=np.int32), q)
        assert (self.embed[base.add_vec(u, v)]
                == ext.add_vec(self.embed[u], self.embed[v])).all()
        assert (self.embed[base.mul_vec(u, v)]
                == ext.mul_vec(self.embed[u], self.embed[v])).all()

    # -- point helpers ---------------------------------------------------------

    def pt(self, xi, yi):
        """Pack coordinate indices into the flat point index x*q + y."""
        return xi * self.base.q + yi

    def pt_split(self, pt):
        return pt // self.base.q, pt % self.base.q

    def biv(self, xi, yi):
        return BivElem(self.base.elem(xi), self.base.elem(yi))

    # -- the correspondence ------------------------------------------------------

    def phi(self, v: BivElem) -> FieldElem:
        return self.ext.elem(int(self.phi_table[self.pt(v.x.idx, v.y.idx)]))

    def phi_inv(self, z: FieldElem) -> BivElem:
        pt = int(self.phi_inv_table[z.idx])
        return self.biv(*self.pt_split(pt))

    def biv_mul(self, u: BivElem, v: BivElem) -> BivElem:
        base = self.base
        x1, y1, x2, y2 = u.x.idx, u.y.idx, v.x.idx, v.y.idx
        g = base.sub(base.mul(x1, x2), base.mul(self.t, base.mul(y1, y2)))
        h = base.sub(base.add(base.mul(x1, y2), base.mul(x2, y1)),
                     base.mul(y1, y2))
        return self.biv(g, h)

    def biv_add(self, u: BivElem, v: BivElem) -> BivElem:
        base = self.base
        return self.biv(base.add(u.x.idx, v.x.idx), base.add(u.y.idx, v.y.idx))

    def check_nonvanishing(self, c1, c2):
        """t*c2^2 + (1-c1)*c2 + (1-c1)^2 != 0; false exactly at c = (1,0)."""
        base = self.base
        one_c1 = base.sub(1, c1)
        expr = base.add(
            base.add(base.mul(self.t, base.mul(c2, c2)), base.mul(one_c1, c2)),
            base.mul(one_c1, one_c1))
        return expr != 0

    def c_str(self, c1, c2):
        return f"({self.base.elem_str(c1)},{self.base.elem_str(c2)})"

    def __repr__(self):
        return (f"QuadExtCtx(q={self.base.q}, t={self.base.elem_str(self.t)}, "
                f"beta={self.ext.elem_str(self.beta, 'W')})")


_qext_cache = {}


def make_quadext(base, t=None, conjugate_beta=False):
    """Build (or fetch a cached) QuadExtCtx over the given base field."""
    t = select_t(base, t)
    key = (base, t, bool(conjugate_beta))
    ctx = _qext_cache.get(key)
    if ctx is None:
        ctx = QuadExtCtx(base, t, conjugate_beta)
        _qext_cache[key] = ctx
    return ctx
