"""Compare the compiled and pure-Python join kernels on two workloads.

    python benchmarks/bench_kernel.py [--repeat 3]

Workloads: transitive closure of a random graph, and the equality rules on
sameAs cliques of random spanning trees. Both kernels must produce the same
model; the script reports the best wall time of each and the speed-up.
"""

import argparse
import random
import time

from rl2datalog.datalog import Atom, Const, Program, Rule, Var, pos
from rl2datalog.engine import kernel, materialize
from rl2datalog.sameas import EqualityConfig, equality_rules
from rl2datalog.terms import Iri


def closure_program(n_nodes: int, n_edges: int, seed: int) -> Program:
    rng = random.Random(seed)
    X, Y, Z = Var("X"), Var("Y"), Var("Z")
    rules = [Rule(Atom("path", (X, Y)), (pos("edge", X, Y),)),
             Rule(Atom("path", (X, Z)), (pos("path", X, Y), pos("edge", Y, Z)))]
    node = [Const(Iri(f"http://bench.example/n{i}")) for i in range(n_nodes)]
    facts = {Atom("edge", (node[rng.randrange(n_nodes)], node[rng.randrange(n_nodes)]))
             for _ in range(n_edges)}
    return Program(rules, sorted(facts, key=str))


def clique_program(n_cliques: int, size: int, n: int, seed: int) -> Program:
    rng = random.Random(seed)
    facts = []
    for c in range(n_cliques):
        members = [Const(Iri(f"http://bench.example/c{c}/m{i}")) for i in range(size)]
        rng.shuffle(members)
        for i in range(1, size):
            facts.append(Atom("sameAs", (members[rng.randrange(i)], members[i])))
    return Program(equality_rules(EqualityConfig(n)), facts)


def timed(program: Program, backend: str, repeat: int):
    best, model = float("inf"), None
    with kernel.backend(backend):
        for _ in range(repeat):
            t0 = time.perf_counter()
            model = materialize(program)
            best = min(best, time.perf_counter() - t0)
    return best, model


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    workloads = {
        "transitive closure (300 nodes, 600 edges)": closure_program(300, 600, args.seed),
        "equality rules N=2 (40 cliques x 50)": clique_program(40, 50, 2, args.seed),
    }
    backends = ["python"] + (["cython"] if kernel.CompiledPlan is not None else [])
    if len(backends) == 1:
        print("compiled kernel not built; timing the pure-Python kernel only")
    print(f"{'workload':45} " + " ".join(f"{b:>10}" for b in backends) + "   speed-up")
    for name, program in workloads.items():
        times, models = [], []
        for b in backends:
            t, m = timed(program, b, args.repeat)
            times.append(t)
            models.append(m)
        assert all(m == models[0] for m in models), "kernels disagree"
        speedup = f"{times[0] / times[-1]:9.2f}x" if len(times) > 1 else ""
        print(f"{name:45} " + " ".join(f"{t:9.3f}s" for t in times) + "  " + speedup)


if __name__ == "__main__":
    main()
