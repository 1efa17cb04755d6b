import random

import pytest

from umbral_flow.errors import PreconditionFailedError
from umbral_flow.fq import PolyA
from umbral_flow.laurent import INF, LaurentF, agreement_valuation
from umbral_flow.series import (
    TruncSeries,
    binom_mod_p,
    series_agreement_valuation,
    taylor_shift,
)
from umbral_flow.umbral import (
    AdditiveMap,
    AdmissibilityParams,
    CarlitzExpFn,
    GeometricMap,
    IdentityFn,
    NaiveMap,
    PolyFn,
    TwistedMap,
    admissible_heuristic,
    apply_flow,
    flow_coefficient,
    umbral_eval,
)

N = 48
M = 12


def _rand_series(ctx, rng, trunc=M, prec=N):
    coeffs = []
    for _ in range(trunc):
        if rng.random() < 0.2:
            coeffs.append(LaurentF.zero(ctx))
        else:
            coeffs.append(LaurentF(ctx, rng.randint(0, 5),
                                   [rng.randrange(1, ctx.q)] +
                                   [rng.randrange(ctx.q) for _ in range(8)],
                                   prec))
    return TruncSeries(ctx, coeffs)


def _unit_x(ctx, rng, prec=N):
    return LaurentF(ctx, 1, [rng.randrange(1, ctx.q)] +
                    [rng.randrange(ctx.q) for _ in range(prec - 2)], prec)


def test_zeroth_moment_is_one(cc2):
    rng = random.Random(1)
    maps = [AdditiveMap(cc2, N), NaiveMap(cc2, N), TwistedMap(cc2, N),
            GeometricMap(cc2, N, IdentityFn())]
    one = LaurentF.one(cc2.field)
    for umap in maps:
        x = _unit_x(cc2.field, rng)
        assert (umap.moment(x, 0) - one).is_exact_zero()


def test_additive_moments_are_powers(cc2):
    S = AdditiveMap(cc2, N)
    x = LaurentF.from_poly(PolyA.t(cc2.field) ** 2)
    assert (S.moment(x, 3) - x * x * x).is_exact_zero()


def test_twisted_moment_digit_example(cc2):
    # n = 2 has digits (0, 1) base 2: T_2(x) = e_1(x)/D_1 = (x^2+x)/(t^2+t)
    T = TwistedMap(cc2, N)
    x = LaurentF.from_poly(PolyA.t(cc2.field) ** 3)
    d1_inv = LaurentF.from_poly(cc2.dk(1)).inv(prec=N + 40)
    expect = (x * x + x) * d1_inv
    got = T.moment(x, 2)
    assert agreement_valuation(got, expect) >= N


def test_twisted_moment_at_one_vanishes(cc2):
    # e_1(1) = 1*(1+1) = 0, so every n with a digit above position 0 dies
    T = TwistedMap(cc2, N)
    one = LaurentF.one(cc2.field)
    assert T.moment(one, 2).is_exact_zero()
    assert T.moment(one, 5).is_exact_zero()
    assert (T.moment(one, 1) - one).is_exact_zero()


def test_twisted_moments_vanish_beyond_degree_support(cc2):
    T = TwistedMap(cc2, N)
    x = LaurentF.from_poly(PolyA.t(cc2.field))  # degree 1
    for n in (4, 5, 9, 12):  # any digit at position >= 2
        assert T.moment(x, n).is_exact_zero()
    assert not T.moment(x, 3).is_zero_at_prec()


def test_geometric_map_structural_powers(cc2):
    G = GeometricMap(cc2, N, PolyFn(PolyA.t(cc2.field)))
    rng = random.Random(5)
    x = _unit_x(cc2.field, rng)
    g1 = G.moment(x, 1)
    for k in (2, 3, 5):
        d = G.moment(x, k) - g1 ** k
        assert d.is_zero_at_prec() and d.val_lower_bound() >= N


def test_naive_matches_carlitz_exp_powers(cc2):
    NM = NaiveMap(cc2, N)
    rng = random.Random(6)
    x = _unit_x(cc2.field, rng)
    e = cc2.exp(x, N)
    assert agreement_valuation(NM.moment(x, 2), e * e) >= N


def test_admissibility_exact_rules(cc2):
    S = AdditiveMap(cc2, N)
    s = LaurentF.t_power(cc2.field, -1, prec=N)  # 1/t
    t = LaurentF.from_poly(PolyA.t(cc2.field))
    assert admissible_heuristic(S, s).apparently_admissible
    v = admissible_heuristic(S, t)
    assert not v.apparently_admissible
    T = TwistedMap(cc2, N)
    one = LaurentF.one(cc2.field)
    assert admissible_heuristic(T, one).apparently_admissible
    assert admissible_heuristic(T, t).apparently_admissible


def test_admissibility_windowed_scan(cc2):
    # force the generic scan with a map that has no exact rule
    class Decaying(AdditiveMap):
        def admissibility_rule(self, x):
            return None

    D = Decaying(cc2, 24)
    rng = random.Random(7)
    x = _unit_x(cc2.field, rng, prec=32)
    verdict = admissible_heuristic(D, x, AdmissibilityParams(40, 3, 24))
    assert verdict.apparently_admissible
    t = LaurentF.from_poly(PolyA.t(cc2.field), prec=64)
    verdict = admissible_heuristic(D, t, AdmissibilityParams(12, 3, 24))
    assert not verdict.apparently_admissible
    assert verdict.witness_k is not None


def test_flow_coefficient_examples(cc2):
    S = AdditiveMap(cc2, N)
    rng = random.Random(8)
    x = _unit_x(cc2.field, rng)
    P2 = TruncSeries.monomial(cc2.field, 2, M)
    # h=1: C(2,1) = 0 mod 2
    assert flow_coefficient(S, x, P2, 1).is_zero_at_prec()
    # h=0: the x^2 term
    assert agreement_valuation(flow_coefficient(S, x, P2, 0), x * x) >= N
    # h >= trunc: empty sum
    assert flow_coefficient(S, x, P2, M).is_exact_zero()


def test_apply_flow_taylor_equivalence(cc2):
    rng = random.Random(9)
    S = AdditiveMap(cc2, N)
    for _ in range(25):
        P = _rand_series(cc2.field, rng)
        x = _unit_x(cc2.field, rng)
        assert series_agreement_valuation(
            apply_flow(S, x, P), taylor_shift(P, x)) >= N


def test_apply_flow_identity_when_moments_vanish(cc2):
    S = AdditiveMap(cc2, N)
    z = LaurentF.zero(cc2.field)
    rng = random.Random(10)
    P = _rand_series(cc2.field, rng)
    out = apply_flow(S, z, P)
    assert out == P  # moments of 0 vanish for k >= 1; identity flow


def test_naive_flow_is_shift_by_exp(cc2):
    rng = random.Random(11)
    NM = NaiveMap(cc2, N)
    for _ in range(10):
        P = _rand_series(cc2.field, rng)
        x = _unit_x(cc2.field, rng)
        assert series_agreement_valuation(
            apply_flow(NM, x, P), taylor_shift(P, cc2.exp(x, N))) >= N


def test_flow_requires_admissibility(cc2):
    S = AdditiveMap(cc2, N)
    t = LaurentF.from_poly(PolyA.t(cc2.field))
    P = TruncSeries.monomial(cc2.field, 1, M)
    with pytest.raises(PreconditionFailedError):
        apply_flow(S, t, P)
    out = apply_flow(S, t, P, require_admissible=False)
    assert agreement_valuation(out.coeffs[0], t) == INF


def test_flow_double_sum_brute_force(cc2):
    # re-sum eval(P(T + F(x))) as sum_k a_k sum_m C(k,m) F_m(x) T^(k-m)
    rng = random.Random(12)
    S = AdditiveMap(cc2, N)
    T = TwistedMap(cc2, N)
    p = cc2.field.p
    for umap in (S, T):
        for _ in range(6):
            trunc = 8
            P = _rand_series(cc2.field, rng, trunc=trunc)
            x = (_unit_x(cc2.field, rng) if umap is S
                 else LaurentF.from_poly(PolyA.t(cc2.field)))
            flowed = apply_flow(umap, x, P)
            z = LaurentF.zero(cc2.field)
            acc = [z] * trunc
            for k in range(trunc):
                a = P.coeffs[k]
                if a.is_exact_zero():
                    continue
                for m in range(k + 1):
                    b = binom_mod_p(k, m, p)
                    if b == 0:
                        continue
                    term = a.scale(b) * umap.moment(x, m)
                    acc[k - m] = acc[k - m] + term
            brute = TruncSeries(cc2.field, acc)
            assert series_agreement_valuation(flowed, brute) >= N - 8


def test_flow_boundedness_inequality(cc2):
    rng = random.Random(13)
    maps = [AdditiveMap(cc2, N), NaiveMap(cc2, N), TwistedMap(cc2, N)]
    for umap in maps:
        for _ in range(15):
            P = _rand_series(cc2.field, rng, prec=N + 64)
            x = _unit_x(cc2.field, rng, prec=N + 64)
            flowed = apply_flow(umap, x, P)
            bound = P.sup_valuation() + min(
                umap.moment(x, k).val_lower_bound() for k in range(M))
            assert flowed.sup_valuation() >= bound


def test_twisted_flow_composes_additively(cc2):
    rng = random.Random(14)
    T = TwistedMap(cc2, N, inv_prec_pad=64)
    ctx = cc2.field
    for _ in range(8):
        P = _rand_series(ctx, rng, prec=N + 64)
        x = LaurentF.from_poly(PolyA(ctx, [rng.randrange(2) for _ in range(3)]))
        y = LaurentF.from_poly(PolyA(ctx, [rng.randrange(2) for _ in range(3)]))
        lhs = apply_flow(T, x + y, P)
        rhs = apply_flow(T, x, apply_flow(T, y, P))
        assert series_agreement_valuation(lhs, rhs) >= N


def test_twisted_binomial_small(cc2):
    T = TwistedMap(cc2, N, inv_prec_pad=64)
    ctx = cc2.field
    p = ctx.p
    t = PolyA.t(ctx)
    x = LaurentF.from_poly(t)
    y = LaurentF.from_poly(t + PolyA.one(ctx))
    s = x + y
    for n in range(9):
        lhs = T.moment(s, n)
        acc = LaurentF.zero(ctx)
        for k in range(n + 1):
            b = binom_mod_p(n, k, p)
            if b:
                acc = acc + (T.moment(x, k) * T.moment(y, n - k)).scale(b)
        assert agreement_valuation(lhs, acc) >= N


def test_umbral_eval_examples(cc2):
    S = AdditiveMap(cc2, N)
    rng = random.Random(15)
    x = _unit_x(cc2.field, rng)
    one = LaurentF.one(cc2.field)
    # 1 + T evaluates to 1 + x
    Q = TruncSeries.from_coeffs(cc2.field, [one, one], trunc=4)
    assert agreement_valuation(umbral_eval(Q, S, x), one + x) >= N
    # T^k evaluates to the k-th moment
    for k in (2, 5):
        Tk = TruncSeries.monomial(cc2.field, k, 8)
        assert umbral_eval(Tk, S, x) == S.moment(x, k)


def test_umbral_eval_geometric_collapses(cc2):
    # for a geometric map, eval(Q(F(x))) = Q(F_1(x))
    G = GeometricMap(cc2, N, CarlitzExpFn(cc2, N))
    rng = random.Random(16)
    x = _unit_x(cc2.field, rng)
    Q = _rand_series(cc2.field, rng, trunc=8)
    g1 = G.moment(x, 1)
    direct = umbral_eval(Q, G, x)
    horner = LaurentF.zero(cc2.field)
    for c in reversed(Q.coeffs):
        horner = horner * g1 + c
    assert agreement_valuation(direct, horner) >= N


def test_umbral_eval_power_collapses_for_geometric(cc2):
    # eval of a power of an admissible series equals the power of its eval
    # when the map is geometric; the two routes differ only past the window
    from umbral_flow.series import series_pow

    G = GeometricMap(cc2, N, IdentityFn())
    rng = random.Random(17)
    x = _unit_x(cc2.field, rng)
    Q = _rand_series(cc2.field, rng, trunc=6)
    Qpad = TruncSeries(cc2.field, Q.coeffs +
                       (LaurentF.zero(cc2.field),) * 14)
    # Q^k fits inside the padded window, so both routes are exact
    for k in (2, 3):
        lhs = umbral_eval(series_pow(Qpad, k), G, x)
        rhs = umbral_eval(Q, G, x) ** k
        assert agreement_valuation(lhs, rhs) >= N
