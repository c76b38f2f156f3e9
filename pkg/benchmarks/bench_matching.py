"""Compare the compiled and pure-Python blossom backends.

Times ``min_weight_perfect_matching`` on the syndrome weight matrices that
the decoder actually builds (IID noise, Manhattan weights), and checks that
both backends return the same matching.

    python3 benchmarks/bench_matching.py --L 16 24 --p 0.1 --repeats 20
"""

import argparse
import time

import numpy as np

from toricbath import lattice, matching
from toricbath.decoder import weights_manhattan
from toricbath.noise import IID, sample


def syndromes(L, p, count, seed):
    c = lattice.CodeParams(L)
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        s = lattice.syndrome_of(sample(IID(p), c, rng), c)
        if len(s):
            out.append(weights_manhattan(s, c))
    return out


def time_backend(backend, weights):
    start = time.perf_counter()
    results = [matching.min_weight_perfect_matching(w, backend=backend) for w in weights]
    return time.perf_counter() - start, results


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--L", type=int, nargs="+", default=[8, 16, 24])
    ap.add_argument("--p", type=float, default=0.1)
    ap.add_argument("--repeats", type=int, default=20)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    backends = matching.available_backends()
    print(f"backends available: {', '.join(backends)}")
    print(f"{'L':>4} {'anyons':>7} " + " ".join(f"{b + ' ms':>12}" for b in backends) + "  speedup")
    for L in args.L:
        weights = syndromes(L, args.p, args.repeats, args.seed)
        mean_n = np.mean([w.shape[0] for w in weights])
        timings = {}
        answers = {}
        for b in backends:
            elapsed, answers[b] = time_backend(b, weights)
            timings[b] = 1e3 * elapsed / len(weights)
        if len(backends) > 1:
            ref = answers[backends[0]]
            for b in backends[1:]:
                same = all(matching.matching_weight(w, x) == matching.matching_weight(w, y)
                           for w, x, y in zip(weights, ref, answers[b]))
                if not same:
                    raise SystemExit(f"backends disagree on optimal weight at L={L}")
        speed = timings.get("python", float("nan")) / timings.get("ext", float("nan"))
        print(f"{L:>4} {mean_n:>7.1f} " + " ".join(f"{timings[b]:>12.3f}" for b in backends)
              + f"  {speed:7.1f}x")


if __name__ == "__main__":
    main()
