"""Construction catalog: parametrized function families and their value tables.

Every family is materialized as value tables (at most q^2 entries), trading
memory for uniform O(1) evaluation inside sweeps.  Three shapes exist:

  biv   F_q x F_q -> F_q x F_q      tables (g, h) indexed by pt = x*q + y
  ext   F_{q^2}   -> F_q x F_q      tables (g, h) indexed by the ext element
  uni   F_{q^2}   -> F_{q^2}        one table (used for lifted functions)

Inverses follow the 0 -> 0 convention: y^-1 is y^(q-2) and gamma/x is
gamma * x^(q^2-2), so every family is total on its domain.

Spec strings (the CLI mini-language):

  genlinh{L=x;h=inv}                   (L(x), h(y)+L(x))
  genlingold{L=x;k=2;alpha=w^1}        (L(x), y^(p^k+1)+alpha*y+L(x))
  sumprod{i=0;j=1;alpha=1}             (x+y, x^(p^i)*y+alpha*x*y^(p^j))
  goldpair{k=2;gamma=w^5;L=x}          (x^(p^k+1)+gamma*y^(p^k+1), L(x+y))
  prodlin{gammas=4:1,2:1;L=x}          (xy, sum gamma_i*(xy)^(p^i) + L(x+y))
  splitgh{g=...;h1=...;h2=...;L1=...;L2=...;gamma1=...;gamma2=...}
  traceinv{gamma=W^3}                  z -> (Tr(z), Tr(gamma/z))
  tracext{H=gold;k=1;gamma=W^1}        z -> (Tr(z), Tr(gamma*z^(p^k+1)))
  tracext{H=norm}                      z -> (Tr(z), z^(q+1))
  normfirst{H=tr5}                     z -> (z^(q+1), Tr(z^5))
  identity                             (x, y)

Linearized polynomials are sums of terms "x", "x^E" or "<el>*x^E" where every
exponent E must be a power of p.  Elements are "0", "w^k" (base field), "W^k"
(extension field) or a decimal prime-subfield literal.  Inner functions for h
slots: "inv", "id", "gold:<k>", "pow:<e>", "lin:<linpoly>".
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf import CduError, FieldCtx
from .quadext import BivElem, QuadExtCtx

BIV = "biv"
EXT = "ext"
UNI = "uni"

G_PLUS_BETA_H = "G+bH"
H_PLUS_BETA_G = "H+bG"


class DomainMismatch(CduError):
    pass


class InvalidParams(CduError):
    pass


class SpecParseError(CduError):
    pass


# ---------------------------------------------------------------------------
# linearized polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinearizedPoly:
    """L(x) = sum of coeff * x^(p^i), held as ((coeff index, i), ...)."""

    terms: tuple

    def table(self, ctx: FieldCtx):
        xs = np.arange(ctx.q, dtype=np.int32)
        acc = np.zeros(ctx.q, dtype=np.int32)
        for coeff, i in self.terms:
            term = ctx.pow_vec(xs, ctx.p ** (i % ctx.m))
            if coeff != 1:
                acc = ctx.add_vec(acc, ctx.mul_vec(np.int32(coeff), term))
            else:
                acc = ctx.add_vec(acc, term)
        return acc


@dataclass(frozen=True)
class LinPolyProps:
    kernel_size: int
    is_permutation: bool


def linpoly_props(L: LinearizedPoly, ctx: FieldCtx) -> LinPolyProps:
    """Kernel size s (by exhaustive scan) and permutation flag; image size is q/s."""
    tab = L.table(ctx)
    s = int(np.count_nonzero(tab == 0))
    assert s >= 1 and ctx.q % s == 0
    return LinPolyProps(kernel_size=s, is_permutation=(s == 1))


def parse_linpoly(s, ctx: FieldCtx) -> LinearizedPoly:
    """Parse "x", "x^3+x", "w^3*x^9+x", ... exponents must be powers of p."""
    terms = []
    for raw in s.split("+"):
        raw = raw.strip()
        if not raw:
            raise SpecParseError(f"empty term in linearized polynomial {s!r}")
        coeff = 1
        if "*" in raw:
            cs, raw = raw.split("*", 1)
            coeff = ctx.parse_elem(cs)
        raw = raw.strip()
        if raw == "x":
            e = 1
        elif raw.startswith("x^"):
            e = int(raw[2:])
        else:
            raise SpecParseError(f"bad linearized term {raw!r} in {s!r}")
        i = 0
        pe = 1
        while pe < e:
            pe *= ctx.p
            i += 1
        if pe != e:
            raise InvalidParams(
                f"exponent {e} in {s!r} is not a power of p={ctx.p}")
        terms.append((coeff, i))
    return LinearizedPoly(tuple(terms))


# ---------------------------------------------------------------------------
# inner univariate building blocks (for h slots)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InnerFunc:
    """Total univariate map of F_q: inverse, Gold, power, linearized or table."""

    tag: str
    k: int = 0
    e: int = 0
    lin: str = ""
    table: tuple = ()

    def table_over(self, ctx: FieldCtx):
        xs = np.arange(ctx.q, dtype=np.int32)
        if self.tag == "inv":
            return ctx.pow_vec(xs, ctx.q - 2)
        if self.tag == "id":
            return xs.copy()
        if self.tag == "gold":
            return ctx.pow_vec(xs, ctx.p ** self.k + 1)
        if self.tag == "pow":
            return ctx.pow_vec(xs, self.e)
        if self.tag == "lin":
            return parse_linpoly(self.lin, ctx).table(ctx)
        if self.tag == "table":
            tab = np.asarray(self.table, dtype=np.int32)
            if len(tab) != ctx.q:
                raise InvalidParams("inner table has wrong length")
            return tab
        raise InvalidParams(f"unknown inner function {self.tag!r}")


def parse_inner(s) -> InnerFunc:
    s = s.strip()
    if s in ("inv", "id"):
        return InnerFunc(tag=s)
    if s.startswith("gold:"):
        return InnerFunc(tag="gold", k=int(s[5:]))
    if s.startswith("pow:"):
        return InnerFunc(tag="pow", e=int(s[4:]))
    if s.startswith("lin:"):
        return InnerFunc(tag="lin", lin=s[4:])
    raise SpecParseError(f"unknown inner function spec {s!r}")


# ---------------------------------------------------------------------------
# function specs
# ---------------------------------------------------------------------------

FAMILIES = ("genlinh", "genlingold", "sumprod", "goldpair", "prodlin",
            "splitgh", "traceinv", "tracext", "normfirst", "identity",
            "genericbiv", "genericuni")

_EXT_FAMILIES = ("traceinv", "tracext", "normfirst")


@dataclass(frozen=True)
class FuncSpec:
    """A construction-family descriptor, evaluable at any point of its domain."""

    family: str
    params: tuple = ()

    def param(self, name, default=None):
        for k, v in self.params:
            if k == name:
                return v
        return default

    @property
    def domain(self):
        if self.family in _EXT_FAMILIES:
            return EXT
        if self.family == "genericuni":
            return UNI
        return BIV

    def to_string(self):
        if not self.params:
            return self.family
        body = ";".join(f"{k}={v}" for k, v in self.params
                        if k not in ("table", "gtable", "htable"))
        return f"{self.family}{{{body}}}" if body else self.family

    def __repr__(self):
        return self.to_string()


def func_spec(family, **params):
    if family not in FAMILIES:
        raise SpecParseError(f"unknown family {family!r}")
    return FuncSpec(family, tuple(sorted(params.items())))


def parse_func_spec(s) -> FuncSpec:
    """Parse one construction string, e.g. ``genlinh{L=x;h=inv}``."""
    s = s.strip()
    if "{" not in s:
        if s not in FAMILIES:
            raise SpecParseError(f"unknown family {s!r} (position 0)")
        return FuncSpec(s)
    if not s.endswith("}"):
        raise SpecParseError(f"missing closing brace in {s!r} (position {len(s)})")
    head, body = s[:-1].split("{", 1)
    if head not in FAMILIES:
        raise SpecParseError(f"unknown family {head!r} (position 0)")
    params = {}
    pos = len(head) + 1
    for part in body.split(";"):
        if not part:
            pos += 1
            continue
        if "=" not in part:
            raise SpecParseError(f"expected key=value at position {pos} in {s!r}")
        k, v = part.split("=", 1)
        params[k.strip()] = v.strip()
        pos += len(part) + 1
    return func_spec(head, **params)


# ---------------------------------------------------------------------------
# table construction
# ---------------------------------------------------------------------------

@dataclass
class PairTables:
    """Value tables of a function with pair output (g, h), values in [0, q)."""

    domain: str
    g: np.ndarray
    h: np.ndarray


@dataclass
class UniTable:
    """Value table of a univariate function of the extension field."""

    f: np.ndarray


def _parse_int(spec, name, required=True):
    v = spec.param(name)
    if v is None:
        if required:
            raise InvalidParams(f"{spec.family} needs parameter {name}")
        return None
    return int(v)


def _parse_base_elem(spec, name, ctx, required=True):
    v = spec.param(name)
    if v is None:
        if required:
            raise InvalidParams(f"{spec.family} needs parameter {name}")
        return None
    if isinstance(v, int):
        if not 0 <= v < ctx.q:
            raise InvalidParams(f"{name}={v} is not an element index of F_{ctx.q}")
        return v
    return ctx.parse_elem(str(v))


def _linpoly(spec, name, ctx) -> LinearizedPoly:
    v = spec.param(name)
    if v is None:
        raise InvalidParams(f"{spec.family} needs parameter {name}")
    if isinstance(v, LinearizedPoly):
        return v
    return parse_linpoly(str(v), ctx)


def _inner(spec, name) -> InnerFunc:
    v = spec.param(name)
    if v is None:
        raise InvalidParams(f"{spec.family} needs parameter {name}")
    if isinstance(v, InnerFunc):
        return v
    return parse_inner(str(v))


def _trace_to_base(qctx, vals):
    """Tr^n_m of extension elements, mapped back to base-field indices."""
    ext = qctx.ext
    tr = ext.add_vec(vals, ext.frobenius_vec(vals, qctx.base.m))
    out = qctx.unembed[tr]
    assert (out >= 0).all()
    return out.astype(np.int32)


def build_tables(spec: FuncSpec, qctx: QuadExtCtx):
    """Materialize the value table(s) of a spec over the given contexts."""
    base, ext = qctx.base, qctx.ext
    q = base.q
    fam = spec.family

    if spec.domain == BIV:
        X = np.repeat(np.arange(q, dtype=np.int32), q)
        Y = np.tile(np.arange(q, dtype=np.int32), q)

        if fam == "identity":
            return PairTables(BIV, X.copy(), Y.copy())
        if fam == "genericbiv":
            g = np.asarray(spec.param("gtable"), dtype=np.int32)
            h = np.asarray(spec.param("htable"), dtype=np.int32)
            if len(g) != q * q or len(h) != q * q:
                raise InvalidParams("generic bivariate tables must have q^2 entries")
            return PairTables(BIV, g, h)
        if fam == "genlinh":
            Lt = _linpoly(spec, "L", base).table(base)
            ht = _inner(spec, "h").table_over(base)
            g = Lt[X]
            return PairTables(BIV, g, base.add_vec(ht[Y], g))
        if fam == "genlingold":
            k = _parse_int(spec, "k")
            if not 0 < k < base.m:
                raise InvalidParams(f"genlingold needs 0 < k < m, got k={k}")
            alpha = _parse_base_elem(spec, "alpha", base)
            Lt = _linpoly(spec, "L", base).table(base)
            g = Lt[X]
            hy = base.pow_vec(np.arange(q, dtype=np.int32), base.p ** k + 1)
            if alpha:
                hy = base.add_vec(hy, base.mul_row(alpha))
            return PairTables(BIV, g, base.add_vec(hy[Y], g))
        if fam == "sumprod":
            i = _parse_int(spec, "i")
            j = _parse_int(spec, "j")
            alpha = _parse_base_elem(spec, "alpha", base)
            if alpha == 0:
                raise InvalidParams("sumprod needs alpha != 0")
            if not (0 <= i < base.m and 0 <= j < base.m):
                raise InvalidParams("sumprod exponents must satisfy 0 <= i,j < m")
            g = base.add_vec(X, Y)
            h = base.add_vec(
                base.mul_vec(base.frobenius_vec(X, i), Y),
                base.mul_vec(np.int32(alpha),
                             base.mul_vec(X, base.frobenius_vec(Y, j))))
            return PairTables(BIV, g, h)
        if fam == "goldpair":
            k = _parse_int(spec, "k")
            gamma = _parse_base_elem(spec, "gamma", base)
            if gamma == base.neg(1):
                raise InvalidParams("goldpair needs gamma != -1")
            L = _linpoly(spec, "L", base)
            if not linpoly_props(L, base).is_permutation:
                raise InvalidParams("goldpair needs a linearized permutation L")
            e = base.p ** k + 1
            pk = base.pow_vec(np.arange(q, dtype=np.int32), e)
            g = base.add_vec(pk[X], base.mul_vec(np.int32(gamma), pk[Y]))
            return PairTables(BIV, g, L.table(base)[base.add_vec(X, Y)])
        if fam == "prodlin":
            L = _linpoly(spec, "L", base)
            if not linpoly_props(L, base).is_permutation:
                raise InvalidParams("prodlin needs a linearized permutation L")
            gammas = spec.param("gammas", "")
            xy = base.mul_vec(X, Y)
            h = L.table(base)[base.add_vec(X, Y)]
            if isinstance(gammas, str):
                pairs = [term.split(":") for term in gammas.split(",") if term]
                gl = [(int(i), base.parse_elem(c)) for i, c in pairs]
            else:
                gl = [(int(i), _coerce_elem(base, c)) for i, c in gammas]
            for i, coeff in gl:
                if not 1 <= i <= base.m:
                    raise InvalidParams("prodlin exponent indices must be in 1..m")
                term = base.pow_vec(xy, base.p ** (i % base.m))
                h = base.add_vec(h, base.mul_vec(np.int32(coeff), term))
            return PairTables(BIV, xy, h)
        if fam == "splitgh":
            g1 = _parse_base_elem(spec, "gamma1", base)
            g2 = _parse_base_elem(spec, "gamma2", base)
            if g2 == 0:
                raise InvalidParams("splitgh needs gamma2 != 0")
            gt = _inner(spec, "g").table_over(base)
            h1 = _inner(spec, "h1").table_over(base)
            h2 = _inner(spec, "h2").table_over(base)
            L1 = _linpoly(spec, "L1", base).table(base)
            L2 = _linpoly(spec, "L2", base).table(base)
            h = base.add_vec(
                base.add_vec(base.mul_vec(h1[X], L1[Y]),
                             base.mul_vec(np.int32(g1), h2[X])),
                base.mul_vec(np.int32(g2), L2[Y]))
            return PairTables(BIV, gt[X], h)
        raise InvalidParams(f"unhandled bivariate family {fam!r}")

    if spec.domain == EXT:
        Z = np.arange(ext.q, dtype=np.int32)
        tr = _trace_to_base(qctx, Z)
        if fam == "traceinv":
            gamma = ext.parse_elem(str(spec.param("gamma")), letter="W")
            if qctx.unembed[gamma] >= 0:
                raise InvalidParams("traceinv needs gamma outside F_q")
            inv = ext.pow_vec(Z, ext.q - 2)
            h = _trace_to_base(qctx, ext.mul_vec(np.int32(gamma), inv))
            return PairTables(EXT, tr, h)
        if fam == "tracext":
            variant = str(spec.param("H"))
            if variant == "gold":
                k = _parse_int(spec, "k")
                gamma = ext.parse_elem(str(spec.param("gamma")), letter="W")
                if ext.add(ext.frobenius(gamma, base.m), gamma) == 0:
                    raise InvalidParams("tracext gold needs Tr(gamma) != 0")
                h = _trace_to_base(
                    qctx, ext.mul_vec(np.int32(gamma),
                                      ext.pow_vec(Z, base.p ** k + 1)))
            elif variant == "norm":
                h = qctx.unembed[ext.pow_vec(Z, q + 1)].astype(np.int32)
            else:
                raise InvalidParams(f"tracext H must be gold or norm, got {variant!r}")
            return PairTables(EXT, tr, h)
        if fam == "normfirst":
            variant = str(spec.param("H"))
            if not variant.startswith("tr"):
                raise InvalidParams(f"normfirst H must look like tr<e>, got {variant!r}")
            e = int(variant[2:])
            g = qctx.unembed[ext.pow_vec(Z, q + 1)].astype(np.int32)
            h = _trace_to_base(qctx, ext.pow_vec(Z, e))
            return PairTables(EXT, g, h)
        raise InvalidParams(f"unhandled extension-domain family {fam!r}")

    # univariate
    tab = np.asarray(spec.param("table"), dtype=np.int32)
    if len(tab) != ext.q:
        raise InvalidParams("generic univariate table must have q^2 entries")
    return UniTable(tab)


def _coerce_elem(ctx, v):
    return v if isinstance(v, int) else ctx.parse_elem(str(v))


_table_cache = {}


def tables_for(spec: FuncSpec, qctx: QuadExtCtx):
    key = (spec, id(qctx))
    out = _table_cache.get(key)
    if out is None:
        out = build_tables(spec, qctx)
        _table_cache[key] = out
    return out


# ---------------------------------------------------------------------------
# evaluation and the univariate lift
# ---------------------------------------------------------------------------

def eval_func(spec: FuncSpec, qctx: QuadExtCtx, point):
    """Evaluate one point.  biv: BivElem -> BivElem; ext: FieldElem -> BivElem;
    uni: FieldElem -> FieldElem."""
    tabs = tables_for(spec, qctx)
    if spec.domain == BIV:
        if not isinstance(point, BivElem):
            raise DomainMismatch("bivariate spec expects a BivElem point")
        pt = qctx.pt(point.x.idx, point.y.idx)
        return qctx.biv(int(tabs.g[pt]), int(tabs.h[pt]))
    if spec.domain == EXT:
        if not (hasattr(point, "ctx") and point.ctx is qctx.ext):
            raise DomainMismatch("extension-domain spec expects an ext FieldElem")
        return qctx.biv(int(tabs.g[point.idx]), int(tabs.h[point.idx]))
    if not (hasattr(point, "ctx") and point.ctx is qctx.ext):
        raise DomainMismatch("univariate spec expects an ext FieldElem")
    return qctx.ext.elem(int(tabs.f[point.idx]))


def univariate_lift(spec: FuncSpec, qctx: QuadExtCtx,
                    ordering=G_PLUS_BETA_H) -> FuncSpec:
    """The correspondence z -> phi(F(phi^-1(z))) as a univariate value table.

    ``ordering`` selects which coordinate multiplies beta: the default
    G+bH pairs phi(g, h) = g + beta*h, which is the identification under
    which the bivariate differential system is exactly c*(lifted F).
    """
    if spec.domain != BIV:
        raise DomainMismatch("univariate_lift needs a bivariate spec")
    tabs = tables_for(spec, qctx)
    q = qctx.base.q
    pts = qctx.phi_inv_table  # z -> pt
    if ordering == G_PLUS_BETA_H:
        lifted = qctx.phi_table[tabs.g[pts] * q + tabs.h[pts]]
    elif ordering == H_PLUS_BETA_G:
        lifted = qctx.phi_table[tabs.h[pts] * q + tabs.g[pts]]
    else:
        raise InvalidParams(f"unknown ordering {ordering!r}")
    return func_spec("genericuni", table=tuple(int(v) for v in lifted),
                     ordering=ordering)
