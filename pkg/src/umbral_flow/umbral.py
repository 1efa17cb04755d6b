"""Umbral maps as moment sequences, and the flow operators they induce.

An umbral map is represented extensionally: all anybody can ask of it is its
moment sequence F_k(x), so that is the interface.  The k = 0 moment is 1 for
every map and every x.  Flow application is the finite triangular sum

    (flow P)_h = sum_{k < M-h} C(k+h, h) a_{k+h} F_k(x)

over the coefficient window of P; for maps whose moments are powers of the
first one this provably coincides with a Taylor shift, which the test suites
check against as an independent oracle (taylor_shift never goes through
moments).

Admissibility (F_k(x) -> 0) is only semi-decidable at finite precision, so
the heuristic verdict is labeled "apparently"; the maps with an exact rule
(powers of a first moment: |F_1(x)| < 1; twisted: everywhere) bypass the
window scan.
"""

from __future__ import annotations

from dataclasses import dataclass

from .carlitz import CarlitzCtx
from .errors import PreconditionFailedError
from .laurent import INF, LaurentF
from .series import TruncSeries, binom_mod_p


@dataclass(frozen=True)
class AdmissibilityParams:
    k_max: int = 32
    window: int = 3
    prec: int = 64

    def __post_init__(self):
        if not self.k_max >= self.window >= 1:
            raise ValueError("need k_max >= window >= 1")


@dataclass(frozen=True)
class AdmissibilityVerdict:
    apparently_admissible: bool
    rule: str
    witness_k: int | None = None


class UmbralMap:
    """Base: a family of moments F_k(x) over a Carlitz context."""

    name = "abstract"
    #: moments are literal powers of the first moment, by construction
    structurally_geometric = False

    def __init__(self, cctx: CarlitzCtx, prec: int):
        self.cctx = cctx
        self.ctx = cctx.field
        self.prec = prec

    def moment(self, x: LaurentF, k: int) -> LaurentF:
        raise NotImplementedError

    def first_moment(self, x: LaurentF) -> LaurentF:
        return self.moment(x, 1)

    def admissibility_rule(self, x: LaurentF):
        """Exact admissibility verdict, or None when only the scan applies."""
        return None

    def __repr__(self):
        return f"<{self.name} umbral map, prec={self.prec}>"


class _PowerMomentMap(UmbralMap):
    """Moments F_k(x) = g(x)^k for a scalar function g; caches the powers."""

    structurally_geometric = True

    def __init__(self, cctx, prec):
        super().__init__(cctx, prec)
        self._powers = {}

    def _base(self, x: LaurentF) -> LaurentF:
        raise NotImplementedError

    def moment(self, x, k):
        if k == 0:
            return LaurentF.one(self.ctx)
        pows = self._powers.get(x)
        if pows is None:
            pows = [LaurentF.one(self.ctx), self._base(x)]
            self._powers[x] = pows
        while len(pows) <= k:
            pows.append(pows[-1] * pows[1])
        return pows[k]

    def admissibility_rule(self, x):
        g = self.moment(x, 1)
        ok = g.val_lower_bound() >= 1
        return AdmissibilityVerdict(ok, f"|{self.name}_1(x)| < 1 test",
                                    None if ok else 1)


class AdditiveMap(_PowerMomentMap):
    """S_k(x) = x^k."""

    name = "additive"

    def _base(self, x):
        return x


class NaiveMap(_PowerMomentMap):
    """N_k(x) = e_C(x)^k, the Carlitz exponential's geometric map."""

    name = "naive"

    def _base(self, x):
        return self.cctx.exp(x, self.prec)


class ScalarFn:
    name = "abstract"

    def __call__(self, x: LaurentF) -> LaurentF:
        raise NotImplementedError


class IdentityFn(ScalarFn):
    name = "identity"

    def __call__(self, x):
        return x


class CarlitzExpFn(ScalarFn):
    name = "carlitz-exp"

    def __init__(self, cctx: CarlitzCtx, prec: int):
        self.cctx = cctx
        self.prec = prec

    def __call__(self, x):
        return self.cctx.exp(x, self.prec)


class PolyFn(ScalarFn):
    """Evaluate a fixed polynomial g in A at x."""

    name = "poly"

    def __init__(self, poly):
        self.poly = poly

    def __call__(self, x):
        acc = LaurentF.zero(x.ctx)
        for k in range(len(self.poly.codes) - 1, -1, -1):
            acc = acc * x
            code = self.poly.codes[k]
            if code:
                acc = acc + LaurentF(x.ctx, 0, (code,), INF)
        return acc


class GeometricMap(_PowerMomentMap):
    """F_k(x) = Gamma(x)^k for a supplied scalar function Gamma."""

    def __init__(self, cctx, prec, fn: ScalarFn):
        super().__init__(cctx, prec)
        self.fn = fn
        self.name = f"geometric:{fn.name}"

    def _base(self, x):
        return self.fn(x)


class TwistedMap(UmbralMap):
    """T_n(x) = prod over the q-adic digits n = sum eps_k q^k of
    (e_k(x)/D_k)^eps_k; admissible on all of F."""

    name = "twisted"

    def __init__(self, cctx, prec, inv_prec_pad: int = 32):
        super().__init__(cctx, prec)
        self._basis = {}    # x -> list of e_k(x)/D_k
        self._moments = {}  # x -> {n: T_n(x)}
        self._inv_prec = prec + inv_prec_pad

    def basis_value(self, x: LaurentF, k: int) -> LaurentF:
        vals = self._basis.setdefault(x, [])
        while len(vals) <= k:
            j = len(vals)
            ekx = self.cctx.ek(j, x)
            if ekx.is_exact_zero():
                vals.append(ekx)
            else:
                need = self._inv_prec - min(0, ekx.val_lower_bound())
                vals.append(ekx * self.cctx.dk_inv(j, need))
        return vals[k]

    def moment(self, x, n):
        if n == 0:
            return LaurentF.one(self.ctx)
        cache = self._moments.setdefault(x, {})
        got = cache.get(n)
        if got is not None:
            return got
        q = self.ctx.q
        val = LaurentF.one(self.ctx)
        m, k = n, 0
        while m:
            m, digit = divmod(m, q)
            if digit:
                val = val * self.basis_value(x, k) ** digit
            k += 1
        cache[n] = val
        return val

    def admissibility_rule(self, x):
        return AdmissibilityVerdict(True, "twisted maps are admissible everywhere")


def admissible_heuristic(umap: UmbralMap, x: LaurentF,
                         params: AdmissibilityParams | None = None
                         ) -> AdmissibilityVerdict:
    """Exact rule when the map has one, else a windowed decay scan."""
    exact = umap.admissibility_rule(x)
    if exact is not None:
        return exact
    # moments decaying at unit rate need k about prec before they clear the
    # bar, so the default scan depth follows the precision
    params = params or AdmissibilityParams(k_max=max(32, umap.prec + 8),
                                           prec=umap.prec)
    quiet = 0
    last_bad = None
    for k in range(1, params.k_max + 1):
        if umap.moment(x, k).val_lower_bound() >= params.prec:
            quiet += 1
            if quiet >= params.window:
                return AdmissibilityVerdict(True, "windowed decay scan")
        else:
            quiet = 0
            last_bad = k
    return AdmissibilityVerdict(False, "windowed decay scan", last_bad)


def flow_coefficient(umap: UmbralMap, x: LaurentF, P: TruncSeries,
                     h: int) -> LaurentF:
    """eps_h = sum_{k < M-h} C(k+h, h) a_{k+h} F_k(x), an exact finite sum."""
    ctx = P.ctx
    p = ctx.p
    acc = LaurentF.zero(ctx)
    for k in range(P.trunc - h):
        a = P.coeffs[k + h]
        if a.is_exact_zero():
            continue
        b = binom_mod_p(k + h, h, p)
        if b == 0:
            continue
        term = a if b == 1 else a.scale(b)
        if k:
            term = term * umap.moment(x, k)
        acc = acc + term
    return acc


def apply_flow(umap: UmbralMap, x: LaurentF, P: TruncSeries,
               require_admissible: bool = True,
               params: AdmissibilityParams | None = None) -> TruncSeries:
    """Apply the flow operator of ``umap`` at x to P, on P's window."""
    if require_admissible:
        verdict = admissible_heuristic(umap, x, params)
        if not verdict.apparently_admissible:
            raise PreconditionFailedError(
                f"x not apparently admissible for {umap.name}: {verdict}")
    return TruncSeries(P.ctx, [flow_coefficient(umap, x, P, h)
                               for h in range(P.trunc)])


def umbral_eval(coeffs, umap: UmbralMap, x: LaurentF) -> LaurentF:
    """eval of sum_m q_m F(x)^m for a finite coefficient list.

    The list is summed in full (a finite sum is exact; stopping early on a
    valuation window would be unsound when term valuations are not
    monotone).  Accepts a TruncSeries or any sequence of LaurentF.
    """
    if isinstance(coeffs, TruncSeries):
        coeffs = coeffs.coeffs
    acc = None
    ctx = umap.ctx
    for m, c in enumerate(coeffs):
        if c.is_exact_zero():
            continue
        if m:
            fm = umap.moment(x, m)
            if fm.is_exact_zero():
                continue
            term = c * fm
        else:
            term = c
        acc = term if acc is None else acc + term
    return acc if acc is not None else LaurentF.zero(ctx)
