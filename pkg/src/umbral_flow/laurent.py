"""Precision-tracked Laurent series in F = F_q((1/t)).

A value is stored as (v, codes, prec): the series sum_{i>=v} c_i s^i in the
uniformizer s = 1/t, where codes holds c_v ... c_{v+len-1} and every
coefficient at exponents beyond the stored window but below ``prec`` is an
exact zero.  ``prec`` is the absolute precision: coefficients at exponents
>= prec are unknown.  ``prec`` may be ``INF`` for exact values (embedded
polynomials, exact zero), which is how exactness propagates through the
Carlitz products.

The non-Archimedean norm is never materialized: |x| = q^(-v) is carried by
the integer valuation alone, so every norm comparison in the package is an
integer comparison.  Membership tests: x in O_F iff v >= 0; x in O_F^x iff
v == 0; |x| < 1 iff v >= 1.

Three states:

* exact zero          -- no codes, prec == INF, valuation() == INF
* zero at precision   -- no codes, finite prec; the valuation is unknown
                         (only >= prec is known) and valuation() raises
* nonzero             -- codes[0] != 0, codes[-1] != 0, v + len(codes) <= prec
"""

from __future__ import annotations

import math

from .errors import PrecisionLossError, ZeroInverseError
from .fq import FqElem, PolyA

INF = math.inf

DEFAULT_PREC = 64


class LaurentF:
    """One element of F_q((1/t)) known to absolute precision ``prec``."""

    __slots__ = ("ctx", "v", "codes", "prec")

    def __init__(self, ctx, v, codes, prec):
        # normalize: strip zero edges, drop coefficients at/above prec
        codes = list(codes)
        n = len(codes)
        i = 0
        while i < n and codes[i] == 0:
            i += 1
        if i:
            v += i
            codes = codes[i:]
        if prec != INF and codes and v + len(codes) > prec:
            codes = codes[:max(0, prec - v)]
        while codes and codes[-1] == 0:
            codes.pop()
        if not codes:
            v = 0
        self.ctx = ctx
        self.v = v
        self.codes = tuple(codes)
        self.prec = prec

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, ctx):
        return cls(ctx, 0, (), INF)

    @classmethod
    def one(cls, ctx, prec=INF):
        return cls(ctx, 0, (1,), prec)

    @classmethod
    def from_poly(cls, poly: PolyA, prec=INF):
        """Embed a polynomial in t: degree n lands at valuation -n, exactly."""
        return cls(poly.ctx, -poly.degree if poly.codes else 0,
                   tuple(reversed(poly.codes)), prec)

    @classmethod
    def t_power(cls, ctx, n, prec=INF):
        """t^n (so valuation -n); n may be negative."""
        return cls(ctx, -n, (1,), prec)

    @classmethod
    def from_codes(cls, ctx, v, codes, prec=DEFAULT_PREC):
        return cls(ctx, v, codes, prec)

    @classmethod
    def zero_at(cls, ctx, prec):
        """Known to vanish below ``prec``, unknown beyond."""
        return cls(ctx, 0, (), prec)

    # -- state predicates ----------------------------------------------------

    def is_exact_zero(self):
        return not self.codes and self.prec == INF

    def is_zero_at_prec(self):
        """True when no nonzero coefficient is stored (exact or not)."""
        return not self.codes

    def valuation(self):
        """The valuation; INF for exact zero.

        Raises PrecisionLossError for a value that is zero at stored
        precision without being exactly zero: its valuation is unknown.
        """
        if self.codes:
            return self.v
        if self.prec == INF:
            return INF
        raise PrecisionLossError(
            f"valuation unknown: zero at precision {self.prec}")

    def val_lower_bound(self):
        """A sound lower bound on the valuation, never raising."""
        if self.codes:
            return self.v
        return self.prec

    def in_integer_ring(self):
        return self.val_lower_bound() >= 0

    def is_unit_norm(self):
        return bool(self.codes) and self.v == 0

    def coeff_at(self, i):
        """Coefficient of s^i as FqElem; raises past stored precision."""
        if self.prec != INF and i >= self.prec:
            raise PrecisionLossError(f"coefficient at {i} beyond precision")
        j = i - self.v
        code = self.codes[j] if 0 <= j < len(self.codes) else 0
        return FqElem(self.ctx, code)

    # -- ring operations -----------------------------------------------------

    def __add__(self, other):
        if not self.codes and self.prec == INF:
            return other
        if not other.codes and other.prec == INF:
            return self
        prec = min(self.prec, other.prec)
        if not self.codes or not other.codes:
            # a zero-at-precision operand only caps the precision
            nz = self if self.codes else other
            return LaurentF(self.ctx, nz.v, nz.codes, prec)
        v = min(self.v, other.v)
        n = max(self.v + len(self.codes), other.v + len(other.codes)) - v
        out = [0] * n
        out[self.v - v:self.v - v + len(self.codes)] = self.codes
        ctx = self.ctx
        add, q = ctx._add, ctx.q
        base = other.v - v
        for j, c in enumerate(other.codes):
            if c:
                k = base + j
                out[k] = add[out[k] * q + c]
        return LaurentF(ctx, v, out, prec)

    def __neg__(self):
        return LaurentF(self.ctx, self.v, self.ctx.vec_neg(list(self.codes)),
                        self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        ctx = self.ctx
        prec = min(self.prec + other.val_lower_bound(),
                   other.prec + self.val_lower_bound())
        if not self.codes or not other.codes:
            return LaurentF(ctx, 0, (), prec)
        return LaurentF(ctx, self.v + other.v,
                        ctx.convolve(list(self.codes), list(other.codes)), prec)

    def scale(self, s):
        code = s.code if isinstance(s, FqElem) else s
        if code == 0:
            return LaurentF.zero(self.ctx) if self.prec == INF \
                else LaurentF.zero_at(self.ctx, self.prec)
        return LaurentF(self.ctx, self.v,
                        self.ctx.vec_scale(code, list(self.codes)), self.prec)

    def shift(self, k):
        """Multiply by s^k = t^(-k), exactly."""
        return LaurentF(self.ctx, self.v + k, self.codes,
                        self.prec if self.prec == INF else self.prec + k)

    def inv(self, prec=None):
        """Multiplicative inverse.

        Result precision is prec(x) - 2 v(x); for exact inputs (infinite
        precision) the target must be supplied via ``prec``.
        """
        if not self.codes:
            raise ZeroInverseError("inverse of (effective) zero in F")
        if len(self.codes) == 1 and self.prec == INF:
            # exact monomials invert exactly; extra precision is always sound
            inv0 = self.ctx.inv_c(self.codes[0])
            return LaurentF(self.ctx, -self.v, (inv0,), INF)
        out_prec = self.prec - 2 * self.v if self.prec != INF else INF
        if prec is not None:
            out_prec = min(out_prec, prec)
        if out_prec == INF:
            raise ZeroInverseError(
                "inverse of an exact value needs an explicit target precision")
        length = out_prec + self.v  # number of coefficients from -v upward
        if length <= 0:
            return LaurentF.zero_at(self.ctx, out_prec)
        codes = _series_inv(self.ctx, list(self.codes), length)
        return LaurentF(self.ctx, -self.v, codes, out_prec)

    def __pow__(self, n):
        if n < 0:
            raise ValueError("use inv() for negative powers")
        if n == 0:
            return LaurentF.one(self.ctx)
        r = None
        b = self
        while n:
            if n & 1:
                r = b if r is None else r * b
            n >>= 1
            if n:
                b = b * b
        return r

    def frob_power(self, i):
        """x^(p^i), computed coefficientwise; exact precision gain p^i."""
        if i == 0 or not self.codes:
            if not self.codes and self.prec != INF:
                return LaurentF.zero_at(self.ctx, self.prec * self.ctx.p ** i)
            return self
        e = self.ctx.p ** i
        out = [0] * ((len(self.codes) - 1) * e + 1)
        tab = self.ctx.vec_frob(list(self.codes), i)
        for j, c in enumerate(tab):
            out[j * e] = c
        prec = self.prec if self.prec == INF else self.prec * e
        return LaurentF(self.ctx, self.v * e, out, prec)

    def q_power(self, k):
        """x^(q^k) via k*d Frobenius steps."""
        return self.frob_power(self.ctx.d * k)

    def truncate(self, prec):
        if prec >= self.prec:
            return self
        return LaurentF(self.ctx, self.v, self.codes, prec)

    # -- comparisons ---------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, LaurentF) and self.ctx is other.ctx
                and self.v == other.v and self.codes == other.codes
                and self.prec == other.prec)

    def __hash__(self):
        return hash((id(self.ctx), self.v, self.codes, self.prec))

    def __repr__(self):
        terms = []
        for j, c in enumerate(self.codes[:12]):
            if c == 0:
                continue
            e = -(self.v + j)
            coef = "" if c == 1 and e != 0 else repr(FqElem(self.ctx, c))
            if e == 0:
                terms.append(coef or "1")
            elif e == 1:
                terms.append(f"{coef}t")
            else:
                terms.append(f"{coef}t^{e}")
        if len(self.codes) > 12:
            terms.append("...")
        body = " + ".join(terms) if terms else "0"
        if self.prec == INF:
            return body
        return f"{body} + O(t^{-self.prec})"

    def to_json(self):
        return {"v": self.v,
                "coeffs": [list(self.ctx.dec(c)) for c in self.codes],
                "prec": None if self.prec == INF else self.prec,
                "zero": self.is_exact_zero()}

    @classmethod
    def from_json(cls, ctx, obj):
        prec = INF if obj.get("prec") is None else obj["prec"]
        return cls(ctx, obj["v"], [ctx.enc(c) for c in obj["coeffs"]], prec)


def _series_inv(ctx, codes, length):
    """Inverse of a unit power series in s given by codes (codes[0] != 0),
    to ``length`` coefficients, by Newton iteration (valid in any
    characteristic in the form g <- g + g*(1 - a*g))."""
    c0_inv = ctx.inv_c(codes[0])
    g = [c0_inv]
    while len(g) < length:
        m = min(2 * len(g), length)
        a = codes[:m] if m <= len(codes) else codes + [0] * (m - len(codes))
        ag = ctx.convolve(a, g)[:m]
        # e = 1 - a*g
        e = ctx.vec_neg(ag)
        e[0] = ctx.add_c(e[0], 1)
        corr = ctx.convolve(g, e)[:m]
        g = ctx.vec_add(g + [0] * (m - len(g)), corr)
    return g[:length]


def agreement_valuation(x: LaurentF, y: LaurentF):
    """Lower bound on v(x - y): INF means identical as exact values."""
    return (x - y).val_lower_bound()


def eq_to_prec(x: LaurentF, y: LaurentF, prec) -> bool:
    return agreement_valuation(x, y) >= prec
