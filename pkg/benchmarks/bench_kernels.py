"""Compare the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--batch 2048] [--repeat 5]

Prints best-of-N timings for each kernel and checks that both backends
return identical results on the same inputs.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from nildegen import _kernels_py
from nildegen.algebra import derivation_equations
from nildegen.catalog import catalog_get
from nildegen.conditions import PRIME, _integer_tensor

try:
    from nildegen import _kernels as _compiled
except ImportError:
    _compiled = None


def _best(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _rank_input(name: str):
    A = catalog_get(name)
    rows = derivation_equations(A)
    return [{c: int(v.real) for c, v in r.items()} for r in rows], A.dim * A.dim


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--batch", type=int, default=2048)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    backends = [("python", _kernels_py)]
    if _compiled is not None:
        backends.append(("cython", _compiled))
    else:
        print("compiled extension not built; timing the fallback only")

    rng = np.random.default_rng(args.seed)
    P = rng.integers(-2, 3, size=(args.batch, 5, 5)).astype(np.int64)
    c, _ = _integer_tensor(catalog_get("mu11"))
    rows, ncols = _rank_input("mu11")

    results = {}
    print(f"{'kernel':18s}" + "".join(f"{name:>12s}" for name, _ in backends) + "   speedup")
    for kernel in ("adjugate_batch", "rebase_modp", "int_rank"):
        times = []
        outs = []
        for _, mod in backends:
            if kernel == "adjugate_batch":
                fn = lambda m=mod: m.adjugate_batch(P)
            elif kernel == "rebase_modp":
                dets, adj = mod.adjugate_batch(P)
                fn = lambda m=mod, adj=adj: m.rebase_modp(P, adj, c, PRIME)
            else:
                fn = lambda m=mod: [m.int_rank(rows, ncols) for _ in range(50)]
            outs.append(fn())
            times.append(_best(fn, args.repeat))
        results[kernel] = times
        speed = f"{times[0] / times[-1]:8.1f}x" if len(times) > 1 else ""
        print(f"{kernel:18s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times) + f"  {speed}")
        if len(outs) > 1:
            a, b = outs
            same = all(np.array_equal(x, y) for x, y in zip(a, b)) if isinstance(a, tuple) else np.array_equal(np.asarray(a), np.asarray(b))
            if not same:
                raise SystemExit(f"backends disagree on {kernel}")
    print(f"batch {args.batch}, best of {args.repeat}; int_rank timed over 50 calls")


if __name__ == "__main__":
    main()
