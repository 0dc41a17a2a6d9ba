"""Regenerate the headline constructions and solve them exactly.

Prints, for each family, the verdicts that make it interesting: the grid
where splitting the cops loses, the mirrored base where two cops beat two
individually hard layers, the matching-split cycle needing |V|/2 cops, and
the slices construction whose layers are cheap but whose game is not.

Run:  python scripts/solve_constructions.py
"""

import time

from mlcr.core import AllocationPlan
from mlcr.generators import gen_cycle_matchings, gen_grid, gen_min_counterexample, gen_slices
from mlcr.solver import decide_allocated, multilayer_cop_number, single_layer_cop_number


def stamp(label, fn):
    t0 = time.perf_counter()
    result = fn()
    print(f"{label}: {result}   [{time.perf_counter() - t0:.2f}s]")


def main():
    for n in (4, 5):
        g, _ = gen_grid(n)
        for alloc in ((2, 0), (0, 2), (1, 1)):
            stamp(
                f"grid n={n} alloc={alloc}",
                lambda g=g, alloc=alloc: decide_allocated(g, AllocationPlan(alloc)).winner.value,
            )

    g, _ = gen_min_counterexample()
    stamp("mirror multi-layer cop number", lambda: multilayer_cop_number(g, 2))
    for i in (0, 1):
        stamp(
            f"mirror layer {i + 1} alone",
            lambda i=i: single_layer_cop_number(g.layers[i], g.n, 3),
        )

    for half in (3, 4):
        gc, _ = gen_cycle_matchings(half)
        stamp(f"cycle 2n={2 * half} cop number", lambda gc=gc, half=half: multilayer_cop_number(gc, half))

    gs, _ = gen_slices(2)
    for i in (0, 1):
        stamp(
            f"slices k=2 layer {i + 1} alone",
            lambda i=i: single_layer_cop_number(gs.layers[i], gs.n, 2),
        )
    for alloc in ((1, 0), (0, 1)):
        stamp(
            f"slices k=2 one cop alloc={alloc}",
            lambda alloc=alloc: decide_allocated(gs, AllocationPlan(alloc)).winner.value,
        )


if __name__ == "__main__":
    main()
