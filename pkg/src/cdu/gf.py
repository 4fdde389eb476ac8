"""Finite field construction and table-based arithmetic.

Fields F_{p^m} with q = p^m <= 2^16.  An element is an integer index in
[0, q) encoding its coefficient vector in base p, constant term least
significant, so index 0 is the additive identity and index 1 the
multiplicative identity.  All arithmetic goes through log/antilog tables,
which lets bulk operations run on whole numpy arrays of indices; that is
what makes full DDT sweeps affordable.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

MAX_FIELD_ORDER = 1 << 16

# classification constants for is_square
SQ = "SQ"
NSQ = "NSQ"
ZERO = "ZERO"


class CduError(Exception):
    """Base class for all library errors."""


class CompositeCharacteristic(CduError):
    pass


class FieldTooLarge(CduError):
    pass


class ReducibleModulus(CduError):
    pass


class DivisionByZero(CduError):
    pass


class ContextMismatch(CduError):
    pass


class NonDivisorSubfield(CduError):
    pass


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# dense polynomial helpers over F_p (coefficient lists, constant term first)
# ---------------------------------------------------------------------------

def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pmod(a, f, p):
    # f monic
    a = list(a)
    df = len(f) - 1
    for i in range(len(a) - 1, df - 1, -1):
        c = a[i] % p
        if c:
            for j in range(df + 1):
                a[i - df + j] = (a[i - df + j] - c * f[j]) % p
    return _ptrim(a[:df])


def _ppowmod(a, e, f, p):
    result = [1]
    base = _pmod(a, f, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), f, p)
        base = _pmod(_pmul(base, base, p), f, p)
        e >>= 1
    return result


def _psub(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i in range(n):
        ai = a[i] if i < len(a) else 0
        bi = b[i] if i < len(b) else 0
        out[i] = (ai - bi) % p
    return _ptrim(out)


def _pgcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        # make b monic before reducing
        lead = b[-1]
        if lead != 1:
            inv = pow(lead, p - 2, p)
            b = [(c * inv) % p for c in b]
        a, b = b, _pmod(a, b, p)
    return a


def is_irreducible(coeffs, p):
    """Rabin test for a monic polynomial over F_p (constant term first).

    Also rejects a zero constant term: 0 must not be a root, which for
    degree 1 selects x+1 rather than x (higher degrees force it anyway).
    """
    f = list(coeffs)
    m = len(f) - 1
    if m < 1 or f[-1] % p != 1:
        return False
    if f[0] % p == 0:
        return False
    x = _pmod([0, 1], f, p)
    frob = {0: x}
    cur = x
    for d in range(1, m + 1):
        cur = _ppowmod(cur, p, f, p)
        frob[d] = cur
    if frob[m] != x:
        return False
    for r in _prime_factors(m):
        g = _pgcd(_psub(frob[m // r], x, p), f, p)
        if len(g) - 1 > 0:
            return False
    return True


def default_modulus(p, m):
    """Lexicographically smallest monic irreducible of degree m over F_p.

    Low-degree coefficients are compared first, i.e. candidates are tried
    in order of their base-p integer encoding.
    """
    for n in range(p ** m):
        coeffs = []
        v = n
        for _ in range(m):
            coeffs.append(v % p)
            v //= p
        coeffs.append(1)
        if is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise ReducibleModulus(f"no irreducible polynomial of degree {m} over F_{p}")


# ---------------------------------------------------------------------------
# field context
# ---------------------------------------------------------------------------

_ADD_TABLE_MAX = 4096  # full addition table only for small odd-char fields


class FieldCtx:
    """Immutable description of F_{p^m}: modulus, primitive element, op tables.

    Safe to share across threads once constructed; every operation is a pure
    function of (ctx, inputs).
    """

    def __init__(self, p, m, modulus=None):
        if not _is_prime(p):
            raise CompositeCharacteristic(f"characteristic {p} is not prime")
        if m < 1:
            raise CduError(f"extension degree must be >= 1, got {m}")
        q = p ** m
        if q > MAX_FIELD_ORDER:
            raise FieldTooLarge(f"q = {p}^{m} = {q} exceeds {MAX_FIELD_ORDER}")
        if modulus is None:
            modulus = default_modulus(p, m)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != m + 1 or modulus[-1] != 1:
                raise ReducibleModulus(
                    f"modulus must be monic of degree {m}, got {modulus}")
            if not is_irreducible(modulus, p):
                raise ReducibleModulus(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.m = m
        self.q = q
        self.modulus = tuple(modulus)

        if p == 2:
            self._modmask = sum(c << i for i, c in enumerate(modulus))
        self._ppows = [p ** i for i in range(m + 1)]

        self._build_log_tables()
        self._build_aux_tables()

    # -- bootstrap multiplication on raw indices (python ints) --------------

    def _mul_raw(self, a, b):
        if a == 0 or b == 0:
            return 0
        p, m = self.p, self.m
        if p == 2:
            r = 0
            while b:
                if b & 1:
                    r ^= a
                b >>= 1
                a <<= 1
                if a >> m & 1:
                    a ^= self._modmask
            return r
        da = self._digits(a)
        db = self._digits(b)
        prod = [0] * (2 * m - 1)
        for i, ai in enumerate(da):
            if ai:
                for j, bj in enumerate(db):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        red = _pmod(prod, list(self.modulus), p)
        return self._undigits(red)

    def _digits(self, idx):
        out = []
        p = self.p
        for _ in range(self.m):
            out.append(idx % p)
            idx //= p
        return out

    def _undigits(self, digits):
        v = 0
        for i, d in enumerate(digits):
            v += (d % self.p) * self._ppows[i]
        return v

    # -- table construction --------------------------------------------------

    def _build_log_tables(self):
        q = self.q
        qm1 = q - 1
        antilog = None
        primitive = None
        for g in range(1, q):
            chain = [1]
            cur = 1
            while True:
                cur = self._mul_raw(cur, g)
                if cur == 1:
                    break
                chain.append(cur)
            if len(chain) == qm1:
                primitive = g
                antilog = chain
                break
        if primitive is None:
            raise CduError("no primitive element found (modulus not irreducible?)")
        self.primitive = primitive
        self.antilog_table = np.asarray(antilog, dtype=np.int32)
        # log with a sentinel for 0 so products involving 0 fall in the
        # zero-padded tail of the doubled antilog table
        Z = 2 * qm1
        log = np.full(q, Z, dtype=np.int64)
        log[self.antilog_table] = np.arange(qm1, dtype=np.int64)
        self.log_table = log
        exp2 = np.zeros(4 * qm1 + 1, dtype=np.int32)
        idx = np.arange(2 * qm1 - 1)
        exp2[: 2 * qm1 - 1] = self.antilog_table[idx % qm1]
        self._exp2 = exp2
        self._Z = Z

    def _build_aux_tables(self):
        p, m, q = self.p, self.m, self.q
        idx = np.arange(q, dtype=np.int32)
        if p == 2:
            self.neg_table = idx.copy()
            self._add_table = None
            self._digit_table = None
        else:
            digits = np.zeros((q, m), dtype=np.int64)
            v = idx.astype(np.int64)
            for i in range(m):
                digits[:, i] = v % p
                v //= p
            self._digit_table = digits
            pw = np.asarray(self._ppows[:m], dtype=np.int64)
            self.neg_table = (((-digits) % p) @ pw).astype(np.int32)
            if q <= _ADD_TABLE_MAX:
                s = (digits[:, None, :] + digits[None, :, :]) % p
                self._add_table = (s @ pw).astype(np.int32)
            else:
                self._add_table = None
        qm1 = q - 1
        self.inv_table = np.zeros(q, dtype=np.int32)
        self.inv_table[self.antilog_table] = self.antilog_table[
            (-np.arange(qm1)) % qm1]
        # absolute trace to F_p; prime-subfield elements are the constant
        # polynomials, so the result is directly an index < p
        tr = idx.copy()
        f = idx.copy()
        for _ in range(m - 1):
            f = self.pow_vec(f, p)
            tr = self.add_vec(tr, f)
        assert int(tr.max(initial=0)) < p
        self.trace1_table = tr

    # -- scalar arithmetic on indices ---------------------------------------

    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        if self._add_table is not None:
            return int(self._add_table[a, b])
        da, db = self._digits(a), self._digits(b)
        return self._undigits([x + y for x, y in zip(da, db)])

    def neg(self, a):
        return int(self.neg_table[a])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        qm1 = self.q - 1
        return int(self.antilog_table[(int(self.log_table[a]) + int(self.log_table[b])) % qm1])

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of 0")
        return int(self.inv_table[a])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        """a^e with exponent reduced mod q-1 for nonzero base; 0^0 = 1."""
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise DivisionByZero("negative power of 0")
            return 0
        qm1 = self.q - 1
        return int(self.antilog_table[(int(self.log_table[a]) * e) % qm1])

    # -- vector arithmetic on numpy index arrays -----------------------------

    def add_vec(self, u, v):
        if self.p == 2:
            return np.bitwise_xor(u, v)
        if self._add_table is not None:
            return self._add_table[u, v]
        s = (self._digit_table[u] + self._digit_table[v]) % self.p
        pw = np.asarray(self._ppows[: self.m], dtype=np.int64)
        return (s @ pw).astype(np.int32)

    def sub_vec(self, u, v):
        return self.add_vec(u, self.neg_table[v])

    def neg_vec(self, u):
        return self.neg_table[u]

    def mul_vec(self, u, v):
        return self._exp2[self.log_table[u] + self.log_table[v]]

    def pow_vec(self, u, e):
        """Elementwise u^e for a fixed integer exponent e >= 0."""
        if e == 0:
            return np.ones_like(u)
        qm1 = self.q - 1
        u = np.asarray(u)
        out = np.zeros(u.shape, dtype=np.int32)
        nz = u != 0
        out[nz] = self.antilog_table[(self.log_table[u[nz]] * (e % qm1)) % qm1]
        return out

    def mul_row(self, s):
        """Lookup table v -> s*v over the whole field."""
        return self.mul_vec(np.int32(s), np.arange(self.q, dtype=np.int32))

    # -- structure maps -------------------------------------------------------

    def frobenius(self, x, e):
        """x^(p^e); e is taken mod m, so frobenius(x, m) is the identity."""
        return self.pow(x, self.p ** (e % self.m))

    def frobenius_vec(self, u, e):
        return self.pow_vec(u, self.p ** (e % self.m))

    def trace_rel(self, l, x):
        """Relative trace to F_{p^l}: sum of x^(p^(l*i)), i < m/l."""
        if self.m % l != 0:
            raise NonDivisorSubfield(f"{l} does not divide {self.m}")
        acc = x
        cur = x
        for _ in range(self.m // l - 1):
            cur = self.pow(cur, self.p ** l)
            acc = self.add(acc, cur)
        return acc

    def trace_rel_vec(self, l, u):
        if self.m % l != 0:
            raise NonDivisorSubfield(f"{l} does not divide {self.m}")
        acc = np.asarray(u).copy()
        cur = u
        for _ in range(self.m // l - 1):
            cur = self.pow_vec(cur, self.p ** l)
            acc = self.add_vec(acc, cur)
        return acc

    def trace1(self, x):
        """Absolute trace to F_p, returned as an index < p."""
        return int(self.trace1_table[x])

    def in_subfield(self, x, d):
        """True iff x lies in the subfield F_{p^d} (requires d | m)."""
        if self.m % d != 0:
            raise NonDivisorSubfield(f"{d} does not divide {self.m}")
        if x == 0:
            return True
        step = (self.q - 1) // (self.p ** d - 1)
        return int(self.log_table[x]) % step == 0

    def is_square(self, x):
        """SQ / NSQ / ZERO classification; every nonzero element is SQ for p=2."""
        if x == 0:
            return ZERO
        if self.p == 2:
            return SQ
        return SQ if int(self.log_table[x]) % 2 == 0 else NSQ

    def min_poly(self, x):
        """Minimal polynomial of x over F_p, constant term first."""
        orbit = [x]
        cur = self.pow(x, self.p)
        while cur != x:
            orbit.append(cur)
            cur = self.pow(cur, self.p)
        poly = [1]  # product of (X - conjugate), coefficients as field indices
        for r in orbit:
            nr = self.neg(r)
            nxt = [0] * (len(poly) + 1)
            for i, c in enumerate(poly):
                nxt[i + 1] = self.add(nxt[i + 1], c)
                nxt[i] = self.add(nxt[i], self.mul(c, nr))
            poly = nxt
        for c in poly:
            assert c < self.p, "minimal polynomial has non-prime-subfield coefficient"
        return tuple(poly)

    def element_order(self, x):
        if x == 0:
            raise DivisionByZero("0 has no multiplicative order")
        qm1 = self.q - 1
        return qm1 // gcd(qm1, int(self.log_table[x]))

    # -- formatting -----------------------------------------------------------

    def elem_str(self, x, letter="w"):
        if x == 0:
            return "0"
        return f"{letter}^{int(self.log_table[x])}"

    def parse_elem(self, s, letter="w"):
        """Parse "0", "w^k" (any case) or a decimal prime-subfield literal."""
        s = s.strip()
        if s == "0":
            return 0
        low = s.lower()
        if low.startswith(letter.lower() + "^"):
            k = int(s[len(letter) + 1:])
            return int(self.antilog_table[k % (self.q - 1)])
        if s.isdigit():
            return int(s) % self.p
        raise CduError(f"cannot parse field element {s!r}")

    def modulus_str(self):
        return ",".join(str(c) for c in self.modulus)

    def elem(self, x):
        return FieldElem(int(x), self)

    def __repr__(self):
        return f"FieldCtx(p={self.p}, m={self.m}, modulus={self.modulus_str()})"

    def __eq__(self, other):
        return (isinstance(other, FieldCtx)
                and (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus))

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))


def parse_modulus(s):
    """Parse the CLI serialization "1,1,0,0,1" (constant term first)."""
    return tuple(int(c) for c in s.split(","))


_field_cache = {}


def make_field(p, m, modulus=None):
    """Build (or fetch a cached) FieldCtx; the default modulus is deterministic."""
    key = (p, m, tuple(modulus) if modulus is not None else None)
    ctx = _field_cache.get(key)
    if ctx is None:
        ctx = FieldCtx(p, m, modulus)
        _field_cache[key] = ctx
    return ctx


@dataclass(frozen=True)
class FieldElem:
    """One field element: an index plus its owning context."""

    idx: int
    ctx: FieldCtx

    def _check(self, other):
        if not isinstance(other, FieldElem) or other.ctx is not self.ctx:
            raise ContextMismatch("operands belong to different field contexts")
        return other

    def __add__(self, other):
        return FieldElem(self.ctx.add(self.idx, self._check(other).idx), self.ctx)

    def __sub__(self, other):
        return FieldElem(self.ctx.sub(self.idx, self._check(other).idx), self.ctx)

    def __mul__(self, other):
        return FieldElem(self.ctx.mul(self.idx, self._check(other).idx), self.ctx)

    def __truediv__(self, other):
        return FieldElem(self.ctx.div(self.idx, self._check(other).idx), self.ctx)

    def __neg__(self):
        return FieldElem(self.ctx.neg(self.idx), self.ctx)

    def __pow__(self, e):
        return FieldElem(self.ctx.pow(self.idx, e), self.ctx)

    def __bool__(self):
        return self.idx != 0

    def __repr__(self):
        return self.ctx.elem_str(self.idx)
