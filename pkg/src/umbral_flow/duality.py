"""Additive isomorphisms of the series algebra, dual umbral maps, and the
machine checks for the duality diagram, binomial preservation, and the
geometric criterion.

The isomorphism phi sends P to P(H(T)) for a generator H: an additive series
with unit-norm linear coefficient.  A *truncated* generator is itself a
perfectly good exact generator (a finite additive polynomial), and every
check here treats it that way: with H an exact polynomial and the basis
series T^j exact, both sides of the duality square are finite computations,
so the only approximation anywhere is the working precision of dual moments.
Checks therefore compare at full Laurent precision rather than inheriting
noise from the T-truncation; the reported window stays at the configured
truncation M.

Dual moments follow the composition-inverse formula: the k-th moment of the
dual of F under phi is eval((H^(-1))(F(x))^k), computed as the coefficient
sum of (H^(-1))^k against the inner map's moments out to ``eval_len`` terms.
Precision of a dual moment is capped at ``eval_len`` since the dropped tail
is only heuristically small; every acceptance configuration keeps
``eval_len`` above its target precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import (
    NotAGeneratorError,
    PreconditionFailedError,
    TruncationMismatchError,
)
from .laurent import INF, LaurentF
from .series import (
    AdditiveSeries,
    TruncSeries,
    additive_compose,
    additive_inverse,
    series_compose,
    taylor_shift,
    binom_mod_p,
)
from .umbral import (
    UmbralMap,
    admissible_heuristic,
    apply_flow,
    flow_coefficient,
    umbral_eval,
)


class AdditiveIso:
    """phi: P -> P(H(T)) for a generator H, with cached inverse data."""

    def __init__(self, H: AdditiveSeries):
        ok, reason = H.is_generator()
        if not ok:
            raise NotAGeneratorError(reason)
        self.H = H
        self._inv = None
        self._gen_ts = {}
        self._gen_powers = {}
        self._hinv_ts = {}
        self._hinv_powers = {}

    @classmethod
    def from_inverse(cls, Hinv_given: AdditiveSeries) -> "AdditiveIso":
        """Build the iso whose inverse generator IS the given series.

        The generator becomes the composition inverse of ``Hinv_given`` on
        its stored range, declared exact: the iso is generated by that
        additive polynomial, and re-inverting it reproduces the given
        coefficients on the same range (triangular determinacy).
        """
        G = additive_inverse(Hinv_given, length=Hinv_given.length)
        G = AdditiveSeries(G.ctx, G.pcoeffs, exact=True)
        return cls(G)

    @property
    def ctx(self):
        return self.H.ctx

    def degree_bound(self, j: int) -> int:
        """deg(H^j) for an exact generator polynomial."""
        p = self.ctx.p
        return j * p ** (self.H.length - 1)

    def generator_ts(self, trunc: int) -> TruncSeries:
        got = self._gen_ts.get(trunc)
        if got is None:
            got = self.H.to_trunc_series(trunc)
            self._gen_ts[trunc] = got
        return got

    def gen_power(self, j: int, trunc: int) -> TruncSeries:
        """H^j mod T^trunc, grown incrementally and cached per truncation."""
        powers = self._gen_powers.setdefault(
            trunc, [TruncSeries.monomial(self.ctx, 0, trunc)])
        while len(powers) <= j:
            powers.append(powers[-1] * self.generator_ts(trunc))
        return powers[j]

    def inverse(self, length=None) -> AdditiveSeries:
        """H^(-1) to the requested p-power length (prefix-stable)."""
        if length is None:
            length = self.H.length
        if self._inv is None or self._inv.length < length:
            self._inv = additive_inverse(self.H, length=length)
        return self._inv if self._inv.length == length else \
            AdditiveSeries(self.ctx, self._inv.pcoeffs[:length],
                           exact=False)

    def inverse_ts(self, trunc: int) -> TruncSeries:
        got = self._hinv_ts.get(trunc)
        if got is None:
            p = self.ctx.p
            m = 0
            while p ** m < trunc:
                m += 1
            got = self.inverse(max(m, 1)).to_trunc_series(trunc)
            self._hinv_ts[trunc] = got
        return got

    def hinv_power(self, k: int, trunc: int) -> TruncSeries:
        powers = self._hinv_powers.setdefault(
            trunc, [TruncSeries.monomial(self.ctx, 0, trunc)])
        while len(powers) <= k:
            powers.append(powers[-1] * self.inverse_ts(trunc))
        return powers[k]

    def inverse_iso(self, length=None) -> "AdditiveIso":
        """The iso generated by the composition inverse of H truncated to
        ``length`` and declared exact on that range.  Pick the length long
        enough for the consumer: a dual-of-dual round trip deviates from the
        identity only past p^length."""
        inv = self.inverse(length if length is not None else self.H.length)
        return AdditiveIso(AdditiveSeries(self.ctx, inv.pcoeffs, exact=True))

    def apply(self, P: TruncSeries) -> TruncSeries:
        """phi(P) = P(H(T)) on P's own window."""
        return series_compose(P, self.generator_ts(P.trunc))

    def __repr__(self):
        return f"<additive iso, H = {self.H!r}>"


def apply_iso(iso: AdditiveIso, P: TruncSeries) -> TruncSeries:
    return iso.apply(P)


def compose_isos(a: AdditiveIso, b: AdditiveIso) -> AdditiveIso:
    """The iso c with phi_c = phi_b o phi_a, i.e. generator H_a o H_b;
    iterating duals through a then b equals one dual through c."""
    return AdditiveIso(additive_compose(a.H, b.H))


class DualMap(UmbralMap):
    """Moments eval((H^(-1))(F(x))^k) of the dual of ``inner`` under ``iso``."""

    structurally_geometric = False

    def __init__(self, inner: UmbralMap, iso: AdditiveIso, prec=None,
                 eval_len=None):
        prec = inner.prec if prec is None else prec
        super().__init__(inner.cctx, prec)
        self.inner = inner
        self.iso = iso
        self.eval_len = (prec + 16) if eval_len is None else eval_len
        self.name = f"dual({inner.name})"
        self._moments = {}

    def moment(self, x, k):
        if k == 0:
            return LaurentF.one(self.ctx)
        if k >= self.eval_len:
            # (H^(-1))^k starts at T^k, past every term we evaluate
            return LaurentF.zero_at(self.ctx, self.eval_len)
        cache = self._moments.setdefault(x, {})
        got = cache.get(k)
        if got is None:
            R = self.iso.hinv_power(k, self.eval_len)
            got = umbral_eval(R, self.inner, x).truncate(self.eval_len)
            cache[k] = got
        return got


def dual_moment(inner: UmbralMap, iso: AdditiveIso, x: LaurentF, k: int,
                prec=None, eval_len=None) -> LaurentF:
    return DualMap(inner, iso, prec=prec, eval_len=eval_len).moment(x, k)


class PerturbedMap(UmbralMap):
    """One moment of a base map shifted by a fixed value; everything else
    delegates.  Used for the contrapositive direction of the duality check."""

    def __init__(self, base: UmbralMap, k_star: int, delta: LaurentF):
        super().__init__(base.cctx, base.prec)
        self.base = base
        self.k_star = k_star
        self.delta = delta
        self.name = f"{base.name}+bump@{k_star}"

    def moment(self, x, k):
        got = self.base.moment(x, k)
        if k == self.k_star:
            got = got + self.delta
        return got


@dataclass
class DualityReport:
    """Outcome of one verification check; ``passed`` iff no failure survived."""

    claim: str
    params: dict
    trials: int = 0
    failures: list = dc_field(default_factory=list)
    min_agreement_valuation: object = INF
    notes: list = dc_field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def record(self, agreement, target, where):
        self.min_agreement_valuation = min(self.min_agreement_valuation,
                                           agreement)
        if agreement < target:
            self.failures.append(dict(where, discrepancy_valuation=agreement))

    def to_json(self):
        mav = self.min_agreement_valuation
        return {
            "claim": self.claim,
            "params": self.params,
            "trials": self.trials,
            "failures": self.failures,
            "min_agreement_valuation": None if mav == INF else mav,
            "passed": self.passed,
            "notes": self.notes,
        }


def merge_reports(reports, claim=None, params=None):
    out = DualityReport(claim or (reports[0].claim if reports else "empty"),
                        params or (reports[0].params if reports else {}))
    for r in reports:
        out.trials += r.trials
        out.failures.extend(r.failures)
        out.min_agreement_valuation = min(out.min_agreement_valuation,
                                          r.min_agreement_valuation)
        out.notes.extend(r.notes)
    return out


def _key_of(x: LaurentF):
    """Compact JSON-able tag for a sample point, for failure records."""
    return {"v": x.v, "codes": list(x.codes[:8])}


def check_duality_diagram(inner: UmbralMap, iso: AdditiveIso, x: LaurentF,
                          basis: int, trunc: int, prec: int,
                          dual_map: UmbralMap | None = None,
                          require_admissible: bool = True) -> DualityReport:
    """Compare phi(flow_inner(x) P) with flow_dual(x)(phi P) for P = T^j.

    With an exact generator polynomial both sides are complete finite sums:
    phi(P) is materialized out to its true degree so the dual flow's
    coefficient sums never silently truncate, and the comparison is reported
    on the T^h window h < trunc.
    """
    dual = dual_map if dual_map is not None else DualMap(inner, iso, prec=prec)
    rep = DualityReport("duality-diagram", {
        "inner": inner.name, "dual": dual.name, "basis": basis,
        "trunc": trunc, "prec": prec, "exact_generator": iso.H.exact,
    })
    if require_admissible:
        for m in (inner, dual):
            verdict = admissible_heuristic(m, x)
            if not verdict.apparently_admissible:
                raise PreconditionFailedError(
                    f"x not apparently admissible for {m.name}")
    H_ts = iso.generator_ts(trunc)
    for j in range(basis):
        P = TruncSeries.monomial(inner.ctx, j, trunc)
        flowed = apply_flow(inner, x, P, require_admissible=False)
        lhs = series_compose(flowed, H_ts)
        if iso.H.exact:
            big = max(iso.degree_bound(j) + 1, trunc)
        else:
            big = trunc
            if inner.ctx.p ** iso.H.length < trunc:
                raise TruncationMismatchError(
                    "truncated generator does not cover the window")
        Q = iso.gen_power(j, big)
        for h in range(trunc):
            rhs_h = flow_coefficient(dual, x, Q, h)
            agreement = (lhs.coeffs[h] - rhs_h).val_lower_bound()
            rep.record(agreement, prec,
                       {"x": _key_of(x), "basis_j": j, "coefficient": h})
        rep.trials += 1
    return rep


def is_geometric_at(umap: UmbralMap, x: LaurentF, k_max: int, prec: int):
    """(verdict, first failing k): moments vs powers of the first moment."""
    first = umap.moment(x, 1)
    power = first
    for k in range(2, k_max + 1):
        power = power * first
        if (umap.moment(x, k) - power).val_lower_bound() < prec:
            return False, k
    return True, None


def check_geometric_criterion(inner: UmbralMap, iso: AdditiveIso,
                              x: LaurentF, basis: int, prec: int,
                              k_max: int, strict: bool = False
                              ) -> DualityReport:
    """Both flows of the dual map, against the geometricity of the inner map.

    The report passes iff the biconditional holds: the single-moment flow
    e^(F1 D) and the dual flow agree (to prec, over the monomial basis)
    exactly when the inner map is geometric at x.  Admissibility of x for
    inner, dual, and |dual_1(x)| < 1 are recorded; with ``strict`` a failed
    precondition raises instead.
    """
    dual = DualMap(inner, iso, prec=prec)
    f1 = dual.moment(x, 1)
    pre = {
        "inner_admissible": admissible_heuristic(inner, x).apparently_admissible,
        "dual_admissible": admissible_heuristic(dual, x).apparently_admissible,
        "dual_first_moment_small": bool(f1.val_lower_bound() >= 1),
    }
    if strict and not all(pre.values()):
        raise PreconditionFailedError(f"geometric-criterion preconditions: {pre}")
    rep = DualityReport("geometric-criterion", {
        "inner": inner.name, "basis": basis, "prec": prec, "k_max": k_max,
    })
    rep.notes.append(pre)
    flows_agree = True
    witness = None
    for j in range(basis):
        P = TruncSeries.monomial(inner.ctx, j, j + 1)
        shifted = taylor_shift(P, f1)
        for h in range(j + 1):
            rhs_h = flow_coefficient(dual, x, P, h)
            agreement = (shifted.coeffs[h] - rhs_h).val_lower_bound()
            if agreement < prec and flows_agree:
                flows_agree = False
                witness = {"basis_j": j, "coefficient": h,
                           "discrepancy_valuation": agreement}
    geometric, bad_k = is_geometric_at(inner, x, k_max, prec)
    rep.trials = 1
    rep.notes.append({"flows_agree": flows_agree, "flow_witness": witness,
                      "inner_geometric": geometric, "geometric_witness_k": bad_k})
    if flows_agree != geometric:
        rep.failures.append({"x": _key_of(x), "flows_agree": flows_agree,
                             "inner_geometric": geometric})
    return rep


def check_binomial(umap: UmbralMap, x: LaurentF, y: LaurentF, n_max: int,
                   prec: int, require_admissible: bool = True
                   ) -> DualityReport:
    """F_n(x+y) = sum_k C(n,k) F_k(x) F_{n-k}(y) for n <= n_max."""
    if require_admissible:
        for pt in (x, y, x + y):
            if not admissible_heuristic(umap, pt).apparently_admissible:
                raise PreconditionFailedError(
                    f"binomial check point not apparently admissible for {umap.name}")
    rep = DualityReport("binomial", {"map": umap.name, "n_max": n_max,
                                     "prec": prec})
    p = umap.ctx.p
    s = x + y
    for n in range(n_max + 1):
        lhs = umap.moment(s, n)
        acc = LaurentF.zero(umap.ctx)
        for k in range(n + 1):
            b = binom_mod_p(n, k, p)
            if b == 0:
                continue
            term = umap.moment(x, k) * umap.moment(y, n - k)
            acc = acc + (term if b == 1 else term.scale(b))
        agreement = (lhs - acc).val_lower_bound()
        rep.record(agreement, prec, {"x": _key_of(x), "y": _key_of(y), "n": n})
        rep.trials += 1
    return rep
