"""Carlitz-module quantities: the factorials D_k, the additive polynomials
e_k(x), and the truncated Carlitz exponential.

D_k and e_k are computed by direct enumeration products over all monic
polynomials of degree k (resp. all polynomials of degree < k).  That is the
defining formula; the classical recursions are used only as oracles in the
test suite.  The index set {eps : deg(eps) < k} contains the zero polynomial
for every k >= 1 and is {0} for k = 0 (deg(0) = NEG_INF), which forces
e_0(x) = x.
"""

from __future__ import annotations

import threading

from .errors import (
    NoConvergenceDetectedError,
    OutsideConvergenceDomainError,
)
from .fq import DEFAULT_ENUM_CAP, PolyA, enumerate_polys
from .laurent import INF, LaurentF

DEFAULT_WINDOW = 3
DEFAULT_KMAX = 64


class CarlitzCtx:
    """Field context plus caches for D_k and their Laurent inverses."""

    def __init__(self, field_ctx, cap=DEFAULT_ENUM_CAP,
                 window=DEFAULT_WINDOW, k_max=DEFAULT_KMAX):
        self.field = field_ctx
        self.cap = cap
        self.window = window
        self.k_max = k_max
        self._dk = [PolyA.one(field_ctx)]  # D_0 = 1, the empty product
        self._dk_inv = {}
        self._lock = threading.Lock()

    def dk(self, k: int) -> PolyA:
        """Product of all monic polynomials of degree k; monic of degree k*q^k."""
        with self._lock:
            while len(self._dk) <= k:
                j = len(self._dk)
                prod = PolyA.one(self.field)
                for g in enumerate_polys(self.field, j, True, cap=self.cap):
                    prod = prod * g
                self._dk.append(prod)
            return self._dk[k]

    def dk_inv(self, k: int, prec: int) -> LaurentF:
        """1/D_k as a Laurent value accurate to at least ``prec``."""
        key = (k, prec)
        with self._lock:
            got = self._dk_inv.get(key)
        if got is not None:
            return got
        val = LaurentF.from_poly(self.dk(k)).inv(prec=prec)
        with self._lock:
            self._dk_inv[key] = val
        return val

    def ek(self, k: int, x: LaurentF) -> LaurentF:
        """e_k(x) = prod over deg(eps) < k of (x + eps); e_0(x) = x."""
        prod = None
        for eps in enumerate_polys(self.field, k, False, cap=self.cap):
            factor = x + LaurentF.from_poly(eps)
            prod = factor if prod is None else prod * factor
            if prod.is_exact_zero():
                return prod
        return prod

    def exp_sum(self, x: LaurentF, prec: int, window=None, k_max=None) -> LaurentF:
        """sum_k x^(q^k) / D_k, stopped once ``window`` consecutive terms sit
        at valuation >= prec.  No domain restriction: term valuations
        q^k (v(x) + k) eventually increase for every x, so the window rule
        is a sound stopping criterion even when |x| >= 1.
        """
        window = self.window if window is None else window
        k_max = self.k_max if k_max is None else k_max
        if x.is_exact_zero():
            return x
        q = self.field.q
        acc = LaurentF.zero(self.field)
        quiet = 0
        vx = x.val_lower_bound()
        for k in range(k_max + 1):
            # 1/D_k accurate enough that the whole term is accurate to prec
            need = max(prec, prec - q ** k * vx) + 8
            term = x.q_power(k) * self.dk_inv(k, need)
            acc = acc + term
            if term.val_lower_bound() >= prec:
                quiet += 1
                if quiet >= window:
                    return acc
            else:
                quiet = 0
        raise NoConvergenceDetectedError(
            f"carlitz exponential did not settle below 2^-{prec} by k={k_max}")

    def exp(self, x: LaurentF, prec: int) -> LaurentF:
        """The Carlitz exponential on the open unit ball, |x| < 1.

        Outside that ball |e_C(x)| < 1 fails and the flow use-cases break;
        callers that need the entire-function sum use exp_sum directly.
        """
        if x.val_lower_bound() < 1:
            raise OutsideConvergenceDomainError(
                f"carlitz_exp needs v(x) >= 1, got {x.val_lower_bound()}")
        return self.exp_sum(x, prec)

    def exp_at_one(self, prec: int) -> LaurentF:
        """e_C(1) = sum_k 1/D_k by direct summation (|1| = 1 is outside the
        unit ball, so this is not a carlitz_exp call)."""
        return self.exp_sum(LaurentF.one(self.field), prec)


def carlitz_dk(cctx: CarlitzCtx, k: int) -> PolyA:
    return cctx.dk(k)


def carlitz_ek(cctx: CarlitzCtx, k: int, x: LaurentF) -> LaurentF:
    return cctx.ek(k, x)


def carlitz_exp(cctx: CarlitzCtx, x: LaurentF, prec: int) -> LaurentF:
    return cctx.exp(x, prec)
