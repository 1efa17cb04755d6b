"""Exact arithmetic in small finite fields F_q (q = p^d) and in A = F_q[t].

Field elements are integer codes in ``range(q)``: the base-p digits of a code
are the coordinates on the power basis 1, u, ..., u^(d-1) of F_p[u]/(f(u)).
All element arithmetic is table-driven; the constructor enforces that the
field is small enough for the exhaustive irreducibility check, which is the
intended scale of the whole package.

Polynomials in t carry their coefficients as tuples of codes, lowest degree
first, with no trailing zeros.  The degree of the zero polynomial is the
sentinel ``NEG_INF`` which compares below every integer; this convention is
load-bearing: it puts the zero polynomial inside every index set
``{eps : deg(eps) < k}``, including k = 0... see ``enumerate_polys``.
"""

from __future__ import annotations

import itertools
import struct

from .errors import (
    DivisionByZeroError,
    EnumerationCapExceededError,
    ZeroInverseError,
)

NEG_INF = float("-inf")

DEFAULT_ENUM_CAP = 10 ** 6

# d * p^d above this bound makes the exhaustive irreducibility check (and
# everything downstream) unreasonable; reject at construction time.
_FIELD_SIZE_CAP = 10 ** 6

_PACK_MIN_OPS = 64  # below this a naive convolution beats packing overhead


def is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# ---------------------------------------------------------------------------
# F_p[u] helpers used only to validate the field modulus.  Coefficient lists
# of ints mod p, lowest degree first, trailing zeros stripped.

def _fp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mod(a, b, p):
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    lb_inv = pow(lb, -1, p)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] % p
        if c == 0:
            continue
        factor = (c * lb_inv) % p
        for j in range(db + 1):
            a[i - db + j] = (a[i - db + j] - factor * b[j]) % p
    return _fp_trim([c % p for c in a[:db]])


def _fp_is_irreducible(f, p):
    """Exhaustive check: no monic divisor of degree 1..deg(f)//2 over F_p."""
    d = len(f) - 1
    if d == 1:
        return True
    for deg in range(1, d // 2 + 1):
        for tail in itertools.product(range(p), repeat=deg):
            g = list(tail) + [1]
            if not _fp_mod(f, g, p):
                return False
    return True


class FieldCtx:
    """The finite field F_q = F_p[u]/(f(u)), q = p^d, with arithmetic tables.

    Instances are interned by :func:`field`; identity comparison is the
    intended notion of context equality.
    """

    def __init__(self, p, d=1, modulus=None):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if d < 1:
            raise ValueError("extension degree must be >= 1")
        if d * p ** d > _FIELD_SIZE_CAP:
            raise ValueError(f"field F_{p}^{d} too large for exhaustive checks")
        if modulus is None:
            if d != 1:
                raise ValueError("an irreducible modulus is required for d > 1")
            modulus = (0, 1)  # f(u) = u, i.e. F_p itself
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != d + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree d")
        if not _fp_is_irreducible(list(modulus), p):
            raise ValueError("modulus is reducible over F_p")
        self.p = p
        self.d = d
        self.q = p ** d
        self.modulus = modulus
        self._build_tables()

    # -- table construction -------------------------------------------------

    def _build_tables(self):
        p, d, q = self.p, self.d, self.q
        self._add = add = [0] * (q * q)
        self._mul = mul = [0] * (q * q)
        self._neg = neg = [0] * q
        self._inv = inv = [None] * q

        def dec(c):
            out = []
            for _ in range(d):
                c, r = divmod(c, p)
                out.append(r)
            return out

        def enc(coords):
            c = 0
            for x in reversed(coords):
                c = c * p + x
            return c

        self._dec_table = [tuple(dec(c)) for c in range(q)]
        red = list(self.modulus[:-1])  # u^d = -red (monic modulus)
        for a in range(q):
            ca = self._dec_table[a]
            for b in range(q):
                cb = self._dec_table[b]
                add[a * q + b] = enc([(x + y) % p for x, y in zip(ca, cb)])
                prod = [0] * (2 * d - 1)
                for i, x in enumerate(ca):
                    if x:
                        for j, y in enumerate(cb):
                            prod[i + j] = (prod[i + j] + x * y) % p
                for i in range(2 * d - 2, d - 1, -1):
                    c = prod[i]
                    if c:
                        prod[i] = 0
                        for j in range(d):
                            prod[i - d + j] = (prod[i - d + j] - c * red[j]) % p
                mul[a * q + b] = enc(prod[:d])
            neg[a] = enc([(-x) % p for x in ca])
        for a in range(1, q):
            for b in range(1, q):
                if mul[a * q + b] == 1:
                    inv[a] = b
                    break
        frob1 = [self.pow_c(a, p) for a in range(q)]
        self._frob = [list(range(q))]
        for _ in range(1, d):
            self._frob.append([frob1[c] for c in self._frob[-1]])
        self._frob1 = frob1

    # -- element (code) arithmetic ------------------------------------------

    def add_c(self, a, b):
        return self._add[a * self.q + b]

    def sub_c(self, a, b):
        return self._add[a * self.q + self._neg[b]]

    def mul_c(self, a, b):
        return self._mul[a * self.q + b]

    def neg_c(self, a):
        return self._neg[a]

    def inv_c(self, a):
        if a == 0:
            raise ZeroInverseError("inverse of zero in F_q")
        return self._inv[a]

    def pow_c(self, a, n):
        if n < 0:
            a, n = self.inv_c(a), -n
        r = 1
        while n:
            if n & 1:
                r = self._mul[r * self.q + a]
            a = self._mul[a * self.q + a]
            n >>= 1
        return r

    def frob_c(self, a, i):
        """a^(p^i); periodic in i with period d."""
        return self._frob[i % self.d][a]

    def enc(self, coords):
        c = 0
        for x in reversed(list(coords)):
            c = c * self.p + x % self.p
        return c

    def dec(self, code):
        return self._dec_table[code]

    # -- vector kernels ------------------------------------------------------
    # These operate on plain lists of codes; they are the hot paths shared by
    # polynomial and truncated-Laurent multiplication.

    def vec_add(self, xs, ys):
        if len(xs) < len(ys):
            xs, ys = ys, xs
        add, q = self._add, self.q
        out = list(xs)
        for i, y in enumerate(ys):
            out[i] = add[out[i] * q + y]
        return out

    def vec_neg(self, xs):
        neg = self._neg
        return [neg[x] for x in xs]

    def vec_scale(self, s, xs):
        if s == 0:
            return [0] * len(xs)
        if s == 1:
            return list(xs)
        mul, q = self._mul, self.q
        return [mul[s * q + x] for x in xs]

    def vec_frob(self, xs, i):
        tab = self._frob[i % self.d]
        return [tab[x] for x in xs]

    def convolve(self, xs, ys):
        """Cauchy product of two code vectors."""
        if not xs or not ys:
            return []
        if (self.d == 1 and self.p < 256
                and len(xs) * len(ys) >= _PACK_MIN_OPS
                and min(len(xs), len(ys)) * (self.p - 1) ** 2 < 2 ** 32):
            return self._convolve_packed(xs, ys)
        mul, add, q = self._mul, self._add, self.q
        out = [0] * (len(xs) + len(ys) - 1)
        for i, x in enumerate(xs):
            if x == 0:
                continue
            row = x * q
            for j, y in enumerate(ys):
                if y:
                    k = i + j
                    out[k] = add[out[k] * q + mul[row + y]]
        return out

    def _convolve_packed(self, xs, ys):
        # Kronecker substitution: pack codes into 32-bit slots of a big int,
        # multiply once in C, then read the slots back mod p.  Valid for
        # d == 1 where code arithmetic is integer arithmetic mod p; slot
        # sums stay below 2^32 at this package's scale.
        p = self.p
        n = len(xs) + len(ys) - 1
        bx = bytearray(4 * len(xs))
        bx[0::4] = bytes(xs)
        by = bytearray(4 * len(ys))
        by[0::4] = bytes(ys)
        prod = int.from_bytes(bytes(bx), "little") * int.from_bytes(bytes(by), "little")
        raw = prod.to_bytes(4 * n + 4, "little")
        slots = struct.unpack_from("<%dI" % n, raw)
        if p == 2:
            return [s & 1 for s in slots]
        return [s % p for s in slots]

    def __repr__(self):
        if self.d == 1:
            return f"F_{self.p}"
        return f"F_{self.q} (p={self.p}, modulus={list(self.modulus)})"

    def to_json(self):
        return {"p": self.p, "d": self.d, "q": self.q,
                "modulus": list(self.modulus)}


# interned contexts: identity of FieldCtx objects is context equality
_FIELD_CACHE = {}


def field(p, d=1, modulus=None):
    key = (p, d, tuple(c % p for c in modulus) if modulus is not None else None)
    ctx = _FIELD_CACHE.get(key)
    if ctx is None:
        ctx = FieldCtx(p, d, modulus)
        _FIELD_CACHE[key] = ctx
    return ctx


class FqElem:
    """An element of F_q: a context plus an integer code."""

    __slots__ = ("ctx", "code")

    def __init__(self, ctx, code):
        self.ctx = ctx
        self.code = code

    @classmethod
    def from_coeffs(cls, ctx, coords):
        return cls(ctx, ctx.enc(coords))

    @property
    def coeffs(self):
        return self.ctx.dec(self.code)

    def is_zero(self):
        return self.code == 0

    def inverse(self):
        return FqElem(self.ctx, self.ctx.inv_c(self.code))

    def frobenius(self, i):
        return FqElem(self.ctx, self.ctx.frob_c(self.code, i))

    def __add__(self, other):
        return FqElem(self.ctx, self.ctx.add_c(self.code, other.code))

    def __sub__(self, other):
        return FqElem(self.ctx, self.ctx.sub_c(self.code, other.code))

    def __neg__(self):
        return FqElem(self.ctx, self.ctx.neg_c(self.code))

    def __mul__(self, other):
        return FqElem(self.ctx, self.ctx.mul_c(self.code, other.code))

    def __truediv__(self, other):
        return FqElem(self.ctx, self.ctx.mul_c(self.code, self.ctx.inv_c(other.code)))

    def __pow__(self, n):
        return FqElem(self.ctx, self.ctx.pow_c(self.code, n))

    def __eq__(self, other):
        return (isinstance(other, FqElem) and self.ctx is other.ctx
                and self.code == other.code)

    def __hash__(self):
        return hash((id(self.ctx), self.code))

    def __repr__(self):
        if self.ctx.d == 1:
            return str(self.code)
        coords = self.coeffs
        terms = []
        for i in range(self.ctx.d - 1, -1, -1):
            c = coords[i]
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                head = "" if c == 1 else str(c)
                terms.append(f"{head}u" if i == 1 else f"{head}u^{i}")
        return "+".join(terms) if terms else "0"


def ff_inv(a: FqElem) -> FqElem:
    """Multiplicative inverse in F_q; raises ZeroInverseError on 0."""
    return a.inverse()


def frobenius(a: FqElem, i: int) -> FqElem:
    """The i-fold Frobenius a -> a^(p^i)."""
    return a.frobenius(i)


class PolyA:
    """Element of A = F_q[t]: codes lowest degree first, no trailing zeros."""

    __slots__ = ("ctx", "codes")

    def __init__(self, ctx, codes):
        codes = list(codes)
        while codes and codes[-1] == 0:
            codes.pop()
        self.ctx = ctx
        self.codes = tuple(codes)

    @classmethod
    def from_coeffs(cls, ctx, coeffs):
        """coeffs: sequence of FqElem, coordinate tuples, or bare integers
        (bare integers land in the prime subfield, reduced mod p)."""
        codes = []
        for c in coeffs:
            if isinstance(c, FqElem):
                codes.append(c.code)
            elif isinstance(c, (list, tuple)):
                codes.append(ctx.enc(c))
            else:
                # bare integers are reduced mod p into the prime subfield
                codes.append(ctx.enc([int(c)]))
        return cls(ctx, codes)

    @classmethod
    def zero(cls, ctx):
        return cls(ctx, ())

    @classmethod
    def one(cls, ctx):
        return cls(ctx, (1,))

    @classmethod
    def t(cls, ctx):
        return cls(ctx, (0, 1))

    @classmethod
    def monomial(cls, ctx, k, coeff=1):
        code = coeff.code if isinstance(coeff, FqElem) else coeff
        return cls(ctx, [0] * k + [code])

    @property
    def degree(self):
        return len(self.codes) - 1 if self.codes else NEG_INF

    def is_zero(self):
        return not self.codes

    def is_monic(self):
        return bool(self.codes) and self.codes[-1] == 1

    def coeff(self, i):
        code = self.codes[i] if 0 <= i < len(self.codes) else 0
        return FqElem(self.ctx, code)

    def __add__(self, other):
        return PolyA(self.ctx, self.ctx.vec_add(list(self.codes), list(other.codes)))

    def __neg__(self):
        return PolyA(self.ctx, self.ctx.vec_neg(list(self.codes)))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return PolyA(self.ctx, self.ctx.convolve(list(self.codes), list(other.codes)))

    def scale(self, s):
        code = s.code if isinstance(s, FqElem) else s
        return PolyA(self.ctx, self.ctx.vec_scale(code, list(self.codes)))

    def __pow__(self, n):
        r = PolyA.one(self.ctx)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def divrem(self, other):
        """(quotient, remainder) with deg(remainder) < deg(other)."""
        if other.is_zero():
            raise DivisionByZeroError("division by the zero polynomial")
        ctx = self.ctx
        rem = list(self.codes)
        db = len(other.codes) - 1
        if len(rem) - 1 < db:
            return PolyA.zero(ctx), self
        lead_inv = ctx.inv_c(other.codes[-1])
        quot = [0] * (len(rem) - db)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            f = ctx.mul_c(c, lead_inv)
            quot[i - db] = f
            for j, bc in enumerate(other.codes):
                if bc:
                    rem[i - db + j] = ctx.sub_c(rem[i - db + j], ctx.mul_c(f, bc))
        return PolyA(ctx, quot), PolyA(ctx, rem)

    def evaluate(self, x: FqElem) -> FqElem:
        acc = 0
        ctx = self.ctx
        for c in reversed(self.codes):
            acc = ctx.add_c(ctx.mul_c(acc, x.code), c)
        return FqElem(ctx, acc)

    def __eq__(self, other):
        return (isinstance(other, PolyA) and self.ctx is other.ctx
                and self.codes == other.codes)

    def __hash__(self):
        return hash((id(self.ctx), self.codes))

    def __repr__(self):
        return format_poly(self)

    def to_json(self):
        return {"coeffs": [list(self.ctx.dec(c)) for c in self.codes]}

    @classmethod
    def from_json(cls, ctx, obj):
        return cls(ctx, [ctx.enc(c) for c in obj["coeffs"]])


def poly_divrem(a: PolyA, b: PolyA):
    return a.divrem(b)


def format_poly(poly: PolyA) -> str:
    ctx = poly.ctx
    if poly.is_zero():
        return "0"
    terms = []
    for k in range(len(poly.codes) - 1, -1, -1):
        code = poly.codes[k]
        if code == 0:
            continue
        if ctx.d == 1:
            head = "" if (code == 1 and k > 0) else str(code)
        else:
            txt = repr(FqElem(ctx, code))
            head = "" if (code == 1 and k > 0) else (
                f"({txt})*" if ("+" in txt and k > 0) else (txt + "*" if k > 0 else txt))
        if k == 0:
            terms.append(head)
        elif k == 1:
            terms.append(f"{head}t")
        else:
            terms.append(f"{head}t^{k}")
    return "+".join(terms)


def enumerate_polys(ctx, max_deg, monic_only, cap=DEFAULT_ENUM_CAP):
    """All monic polynomials of degree exactly max_deg, or all polynomials of
    degree < max_deg (including zero: deg 0 = NEG_INF < max_deg).

    Either branch yields exactly q^max_deg pairwise distinct polynomials.
    """
    q = ctx.q
    if q ** (max_deg + 1) > cap:
        raise EnumerationCapExceededError(
            f"q^(max_deg+1) = {q ** (max_deg + 1)} exceeds cap {cap}")
    out = []
    if monic_only:
        for tail in itertools.product(range(q), repeat=max_deg):
            out.append(PolyA(ctx, list(tail) + [1]))
    else:
        for tail in itertools.product(range(q), repeat=max_deg):
            out.append(PolyA(ctx, tail))
    return out
