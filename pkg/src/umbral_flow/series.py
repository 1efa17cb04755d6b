"""Truncated power series over F = F_q((1/t)) and additive series.

``TruncSeries`` holds the first M coefficients of an element of F[[T]]; all
operations are exact on that window.  ``sup_valuation`` is the integer form
of coefficient boundedness: a lower bound on the valuation of every
coefficient, so "the series is bounded by c" reads sup_valuation >= -log_q c.

``AdditiveSeries`` is a separate carrier for series with terms only at
p-power exponents, H(T) = sum_i h_i T^(p^i).  Keeping it structural makes
additivity unviolable and composition a small skew product instead of a
general series composition.  An additive series is either ``exact`` (it IS
the finite additive polynomial its coefficients spell) or a truncation of an
unknown longer series; compositions and conversions track the difference.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import (
    CompositionConstantTermError,
    NotAGeneratorError,
    TruncationMismatchError,
)
from .laurent import INF, LaurentF


@lru_cache(maxsize=None)
def binom_mod_p(n, k, p):
    """C(n, k) mod p by Lucas' digitwise rule; never touches big factorials."""
    if k < 0 or k > n:
        return 0
    r = 1
    while k:
        n, nd = divmod(n, p)
        k, kd = divmod(k, p)
        if kd > nd:
            return 0
        if nd and kd:
            num = 1
            den = 1
            for i in range(kd):
                num = num * (nd - i) % p
                den = den * (i + 1) % p
            r = r * num * pow(den, -1, p) % p
    return r


class TruncSeries:
    """A_0 + a_1 T + ... + a_(M-1) T^(M-1) + O(T^M) with LaurentF coefficients."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx, coeffs):
        self.ctx = ctx
        self.coeffs = tuple(coeffs)

    @property
    def trunc(self):
        return len(self.coeffs)

    @classmethod
    def zero(cls, ctx, trunc):
        z = LaurentF.zero(ctx)
        return cls(ctx, (z,) * trunc)

    @classmethod
    def monomial(cls, ctx, j, trunc, coeff=None):
        """coeff * T^j, exact (all other coefficients are exact zeros)."""
        z = LaurentF.zero(ctx)
        c = LaurentF.one(ctx) if coeff is None else coeff
        coeffs = [z] * trunc
        if j < trunc:
            coeffs[j] = c
        return cls(ctx, coeffs)

    @classmethod
    def from_coeffs(cls, ctx, coeffs, trunc=None):
        coeffs = list(coeffs)
        if trunc is not None:
            z = LaurentF.zero(ctx)
            coeffs = (coeffs + [z] * trunc)[:trunc]
        return cls(ctx, coeffs)

    def coeff(self, j):
        return self.coeffs[j]

    def pad(self, trunc):
        """Extend with exact zeros: asserts the caller knows the tail is zero."""
        if trunc <= self.trunc:
            return self
        z = LaurentF.zero(self.ctx)
        return TruncSeries(self.ctx, self.coeffs + (z,) * (trunc - self.trunc))

    def slice(self, trunc):
        return TruncSeries(self.ctx, self.coeffs[:trunc])

    def sup_valuation(self):
        """min_j of a sound lower bound on v(a_j); INF when all exact zeros."""
        return min((c.val_lower_bound() for c in self.coeffs), default=INF)

    def is_zero(self):
        return all(c.is_exact_zero() for c in self.coeffs)

    def __add__(self, other):
        n = min(self.trunc, other.trunc)
        return TruncSeries(self.ctx,
                           [self.coeffs[j] + other.coeffs[j] for j in range(n)])

    def __neg__(self):
        return TruncSeries(self.ctx, [-c for c in self.coeffs])

    def __sub__(self, other):
        n = min(self.trunc, other.trunc)
        return TruncSeries(self.ctx,
                           [self.coeffs[j] - other.coeffs[j] for j in range(n)])

    def scale(self, c: LaurentF):
        return TruncSeries(self.ctx, [c * a for a in self.coeffs])

    def __mul__(self, other):
        n = min(self.trunc, other.trunc)
        z = LaurentF.zero(self.ctx)
        out = [z] * n
        for i, a in enumerate(self.coeffs[:n]):
            if a.is_exact_zero():
                continue
            for j in range(n - i):
                b = other.coeffs[j]
                if b.is_exact_zero():
                    continue
                out[i + j] = out[i + j] + a * b
        return TruncSeries(self.ctx, out)

    def __pow__(self, n):
        if n == 0:
            return TruncSeries.monomial(self.ctx, 0, self.trunc)
        r = None
        b = self
        while n:
            if n & 1:
                r = b if r is None else r * b
            n >>= 1
            if n:
                b = b * b
        return r

    def __eq__(self, other):
        return (isinstance(other, TruncSeries) and self.ctx is other.ctx
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((id(self.ctx), self.coeffs))

    def __repr__(self):
        parts = []
        for j, c in enumerate(self.coeffs[:8]):
            if not c.is_zero_at_prec():
                parts.append(f"({c!r})T^{j}" if j else f"({c!r})")
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O(T^{self.trunc})"

    def to_json(self):
        return {"trunc": self.trunc, "coeffs": [c.to_json() for c in self.coeffs]}

    @classmethod
    def from_json(cls, ctx, obj):
        coeffs = [LaurentF.from_json(ctx, c) for c in obj["coeffs"]]
        return cls(ctx, coeffs[:obj["trunc"]])


def hasse_derivative(P: TruncSeries, k: int) -> TruncSeries:
    """k-th Hasse derivative: T^n -> C(n, k) T^(n-k); truncation shrinks by k."""
    if k == 0:
        return P
    ctx = P.ctx
    p = ctx.p
    n = max(P.trunc - k, 0)
    out = []
    for j in range(n):
        b = binom_mod_p(j + k, k, p)
        a = P.coeffs[j + k]
        out.append(a.scale(b) if b != 1 else a)
    return TruncSeries(ctx, out)


def taylor_shift(P: TruncSeries, c: LaurentF) -> TruncSeries:
    """The coefficient window of P(T + c): exact binomial re-expansion.

    Independent of the flow machinery on purpose: this is the oracle that
    flow results are compared against.
    """
    ctx = P.ctx
    p = ctx.p
    M = P.trunc
    zero = LaurentF.zero(ctx)
    out = []
    for j in range(M):
        acc = zero
        cpow = None
        for k in range(M - j):
            a = P.coeffs[j + k]
            if k == 0:
                term_c = None
            else:
                cpow = c if cpow is None else cpow * c
                term_c = cpow
            if a.is_exact_zero():
                continue
            b = binom_mod_p(j + k, k, p)
            if b == 0:
                continue
            term = a if b == 1 else a.scale(b)
            if term_c is not None:
                term = term * term_c
            acc = acc + term
        out.append(acc)
    return TruncSeries(ctx, out)


def series_mul(P: TruncSeries, Q: TruncSeries) -> TruncSeries:
    return P * Q


def series_pow(P: TruncSeries, k: int) -> TruncSeries:
    return P ** k


def series_compose(P: TruncSeries, Q: TruncSeries) -> TruncSeries:
    """P(Q(T)) on the common window; Q must have exact zero constant term."""
    q0 = Q.coeffs[0] if Q.trunc else None
    if q0 is None or not q0.is_exact_zero():
        raise CompositionConstantTermError("composition needs Q(0) = 0 exactly")
    n = min(P.trunc, Q.trunc)
    Qs = Q.slice(n)
    acc = TruncSeries.monomial(P.ctx, 0, n, P.coeffs[n - 1]) if n else \
        TruncSeries.zero(P.ctx, 0)
    for j in range(n - 2, -1, -1):
        acc = acc * Qs
        acc = TruncSeries(P.ctx,
                          (acc.coeffs[0] + P.coeffs[j],) + acc.coeffs[1:])
    return acc


class AdditiveSeries:
    """H(T) = sum_i h_i T^(p^i), stored as the list h_0 ... h_(m-1).

    ``exact`` declares the series to BE this additive polynomial; otherwise
    the coefficients beyond p^(m-1) are unknown (truncated at exponent p^m).
    """

    __slots__ = ("ctx", "pcoeffs", "exact")

    def __init__(self, ctx, pcoeffs, exact=True):
        self.ctx = ctx
        self.pcoeffs = tuple(pcoeffs)
        self.exact = exact

    @property
    def length(self):
        return len(self.pcoeffs)

    @classmethod
    def identity(cls, ctx):
        return cls(ctx, (LaurentF.one(ctx),), exact=True)

    @classmethod
    def linear(cls, gamma: LaurentF, length=1):
        z = LaurentF.zero(gamma.ctx)
        return cls(gamma.ctx, (gamma,) + (z,) * (length - 1), exact=True)

    def coeff(self, i):
        return self.pcoeffs[i]

    def truncate(self, m):
        if m >= self.length:
            return self
        return AdditiveSeries(self.ctx, self.pcoeffs[:m], exact=False)

    def is_generator(self):
        """(ok, reason): unit linear coefficient plus bounded coefficients.

        Boundedness is automatic at finite truncation; the only way to fail
        it here is a coefficient whose valuation is unknown (precision loss).
        """
        h0 = self.pcoeffs[0] if self.pcoeffs else None
        if h0 is None or h0.is_zero_at_prec():
            return False, "linear coefficient is zero (or zero at precision)"
        if h0.v != 0:
            return False, f"linear coefficient has valuation {h0.v}, not 0"
        return True, "ok"

    def as_function(self, x: LaurentF) -> LaurentF:
        """Evaluate H at a field value: sum h_i x^(p^i)."""
        acc = LaurentF.zero(self.ctx)
        for i, h in enumerate(self.pcoeffs):
            if h.is_exact_zero():
                continue
            acc = acc + h * x.frob_power(i)
        return acc

    def compose(self, other: "AdditiveSeries") -> "AdditiveSeries":
        """H(G(T)): skew product c_k = sum_{i+j=k} h_i * g_j^(p^i)."""
        ctx = self.ctx
        if self.exact and other.exact:
            n = self.length + other.length - 1
            exact = True
        else:
            n = min(self.length if not self.exact else INF,
                    other.length if not other.exact else INF)
            n = int(n)
            exact = False
        z = LaurentF.zero(ctx)
        out = [z] * n
        for i, h in enumerate(self.pcoeffs):
            if h.is_exact_zero():
                continue
            for j, g in enumerate(other.pcoeffs):
                k = i + j
                if k >= n:
                    break
                if g.is_exact_zero():
                    continue
                out[k] = out[k] + h * g.frob_power(i)
        return AdditiveSeries(ctx, out, exact=exact)

    def inverse(self, length=None) -> "AdditiveSeries":
        """Composition inverse, solved triangularly; needs a generator.

        For an exact H any length can be requested; a truncated H only
        determines its inverse to its own length.
        """
        ok, reason = self.is_generator()
        if not ok:
            raise NotAGeneratorError(reason)
        if length is None:
            length = self.length
        if not self.exact and length > self.length:
            raise TruncationMismatchError(
                "inverse beyond the stored truncation of a non-exact series")
        ctx = self.ctx
        h0 = self.pcoeffs[0]
        exact_unit = h0.prec == INF and len(h0.codes) == 1
        h0_inv = h0.inv() if (h0.prec != INF or exact_unit) \
            else h0.inv(prec=_EXACT_INV_PREC)
        cs = [h0_inv]
        z = LaurentF.zero(ctx)
        for k in range(1, length):
            acc = z
            for i in range(1, min(k, self.length - 1) + 1):
                h = self.pcoeffs[i]
                if h.is_exact_zero():
                    continue
                acc = acc + h * cs[k - i].frob_power(i)
            cs.append(-(h0_inv * acc))
        exact = self.exact and self.length == 1
        return AdditiveSeries(ctx, cs, exact=exact)

    def to_trunc_series(self, trunc) -> TruncSeries:
        """Materialize as a TruncSeries of the given truncation.

        Errors if a stored term would be dropped (p^(m-1) >= trunc) or, for
        non-exact series, if the truncation is not covered (p^m < trunc).
        """
        p = self.ctx.p
        m = self.length
        if m and p ** (m - 1) >= trunc:
            raise TruncationMismatchError(
                f"stored term T^(p^{m - 1}) does not fit below T^{trunc}")
        if not self.exact and p ** m < trunc:
            raise TruncationMismatchError(
                f"p-power truncation p^{m} does not cover T^{trunc}")
        z = LaurentF.zero(self.ctx)
        coeffs = [z] * trunc
        e = 1
        for h in self.pcoeffs:
            coeffs[e] = h
            e *= p
        return TruncSeries(self.ctx, coeffs)

    def __eq__(self, other):
        return (isinstance(other, AdditiveSeries) and self.ctx is other.ctx
                and self.pcoeffs == other.pcoeffs and self.exact == other.exact)

    def __hash__(self):
        return hash((id(self.ctx), self.pcoeffs, self.exact))

    def __repr__(self):
        p = self.ctx.p
        parts = []
        for i, h in enumerate(self.pcoeffs):
            if not h.is_zero_at_prec():
                parts.append(f"({h!r})T^{p ** i}" if i else f"({h!r})T")
        tag = "" if self.exact else f" + O(T^{p ** self.length})"
        return (" + ".join(parts) if parts else "0") + tag

    def to_json(self):
        return {"pcoeffs": [h.to_json() for h in self.pcoeffs],
                "exact": self.exact}

    @classmethod
    def from_json(cls, ctx, obj):
        return cls(ctx, [LaurentF.from_json(ctx, h) for h in obj["pcoeffs"]],
                   exact=obj.get("exact", True))


_EXACT_INV_PREC = 4 * 64  # fallback precision when inverting exact unit coeffs


def additive_compose(H: AdditiveSeries, G: AdditiveSeries) -> AdditiveSeries:
    return H.compose(G)


def additive_inverse(H: AdditiveSeries, length=None) -> AdditiveSeries:
    return H.inverse(length)


def is_generator(H: AdditiveSeries):
    return H.is_generator()


def series_agreement_valuation(P: TruncSeries, Q: TruncSeries, upto=None):
    """min over shared coefficients of a lower bound on v(P_h - Q_h)."""
    n = min(P.trunc, Q.trunc)
    if upto is not None:
        n = min(n, upto)
    return min(((P.coeffs[h] - Q.coeffs[h]).val_lower_bound()
                for h in range(n)), default=INF)
