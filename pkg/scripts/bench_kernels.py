#!/usr/bin/env python3
"""Time the hot kernels: coefficient convolution, series products, flow
application, and one duality-diagram pass.

The packed convolution path (Kronecker substitution into one big-int
multiply) kicks in for d = 1; compare against --naive to see the gap.
"""

import argparse
import random
import sys
import time

from umbral_flow import fq
from umbral_flow.carlitz import CarlitzCtx
from umbral_flow.config import Config
from umbral_flow.duality import check_duality_diagram
from umbral_flow.umbral import AdditiveMap, TwistedMap, apply_flow
from umbral_flow.verify import Sampler, ec_iso


def bench(label, fn, reps):
    t0 = time.time()
    for _ in range(reps):
        fn()
    dt = (time.time() - t0) / reps
    print(f"{label:42s} {dt * 1e6:10.1f} us/op  ({reps} reps)")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--naive", action="store_true",
                    help="disable the packed convolution path")
    ap.add_argument("--p", type=int, default=2)
    args = ap.parse_args()

    if args.naive:
        fq._PACK_MIN_OPS = 10 ** 18  # force the table loop

    ctx = fq.field(args.p)
    rng = random.Random(0)
    q = ctx.q

    for n in (32, 64, 256, 1024):
        xs = [rng.randrange(q) for _ in range(n)]
        ys = [rng.randrange(q) for _ in range(n)]
        reps = max(2, 20000 // n)
        bench(f"convolve {n}x{n}", lambda: ctx.convolve(xs, ys), reps)

    cfg = Config(p=args.p, trials=1)
    cctx = CarlitzCtx(ctx)
    smp = Sampler(ctx, rng, cfg.prec)
    P = smp.bounded_series(cfg.trunc)
    x = smp.unit_ball()
    S = AdditiveMap(cctx, cfg.prec)
    T = TwistedMap(cctx, cfg.prec)
    bench("series product (M=16)", lambda: P * P, 50)
    bench("additive flow (M=16)", lambda: apply_flow(S, x, P), 50)
    bench("twisted flow (M=16)",
          lambda: apply_flow(T, smp.unit_ball(), P), 10)

    iso = ec_iso(cctx, 4, cfg.prec + 32)
    bench("duality diagram, one x (J=12, M=16)",
          lambda: check_duality_diagram(S, iso, smp.unit_ball(),
                                        cfg.basis, cfg.trunc, cfg.prec), 3)
    return 0


if __name__ == "__main__":
    sys.exit(main())
