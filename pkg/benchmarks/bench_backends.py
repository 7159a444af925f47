"""Benchmark: compiled resampling kernel vs the pure-Python loop.

Runs the same seeded workloads through both backends, checks the outputs
agree bit for bit, and prints wall-clock times and the speedup.

    python3 benchmarks/bench_backends.py [--runs N]
"""

import argparse
import time

from lllab.apps import goodness_instance
from lllab.backend import compiled, fast_run, has_kernel
from lllab.graphs import random_regular_bipartite
from lllab.instance import Instance, Variable, predicate_event


def cyclic_hypergraph(k, n):
    variables = [Variable(i, 2) for i in range(n)]
    events = [predicate_event(i, tuple((i + j) % n for j in range(k)),
                              "monochromatic") for i in range(n)]
    return Instance(variables, events)


def bench(name, inst, runs, max_steps=10 ** 5, exact_rounds=-1):
    compiled(inst)
    timings = {}
    results = {}
    for backend in ("cython", "python"):
        if backend == "cython" and not has_kernel():
            continue
        t0 = time.perf_counter()
        out = []
        for seed in range(runs):
            res = fast_run(inst, seed, max_steps=max_steps,
                           exact_rounds=exact_rounds, force_backend=backend)
            out.append((tuple(res.f), tuple(res.t), res.steps, res.status))
        timings[backend] = time.perf_counter() - t0
        results[backend] = out
    if len(results) == 2:
        assert results["cython"] == results["python"], f"{name}: backends disagree"
    line = f"{name:34s}"
    for backend in ("cython", "python"):
        if backend in timings:
            line += f"  {backend}: {timings[backend]:8.3f}s"
    if len(timings) == 2:
        line += f"  speedup: {timings['python'] / timings['cython']:6.1f}x"
    print(line)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--runs", type=int, default=200)
    args = parser.parse_args()
    print(f"kernel available: {has_kernel()}  (runs per workload: {args.runs})")
    bench("2-coloring, 1k vertices", cyclic_hypergraph(6, 1000), args.runs)
    bench("2-coloring, 10k vertices", cyclic_hypergraph(6, 10 ** 4),
          max(args.runs // 10, 5))
    bench("truncated 2 rounds, 10k vertices", cyclic_hypergraph(6, 10 ** 4),
          max(args.runs // 10, 5), exact_rounds=2)
    bench("goodness events, 2k vertices",
          goodness_instance(random_regular_bipartite(1000, 8, seed=1), 0.05),
          max(args.runs // 20, 3), max_steps=200)


if __name__ == "__main__":
    main()
