"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Both backends run the same workloads; the table reports the best of
``--repeat`` runs for each and the speedup of the compiled one.
"""

import argparse
import random
import sys
import timeit

from directed_ramsey import kernels
from directed_ramsey.artifacts import load_artifact
from directed_ramsey.catalog import build_catalog
from directed_ramsey.tournament import Tournament, h_tournament


def workloads():
    fig2 = load_artifact("FIG2_33").tournament
    qr23 = load_artifact("QR23").tournament
    st13 = build_catalog(13, 5).entries[0]
    rng = random.Random(0)
    rand20 = [Tournament.from_upper_bits(20, rng.getrandbits(190)) for _ in range(20)]
    h6 = h_tournament(6)

    # one-vertex extension of ST_12 style: pairs to the new vertex are open
    st12 = build_catalog(12, 5).entries[0]
    ext_rows = list(st12.out_rows) + [0]
    ext_pairs = [(i, 12) for i in range(12)]

    return {
        "max_transitive FIG2_33": lambda m: m.max_transitive(list(fig2.out_rows), 33),
        "max_transitive QR23": lambda m: m.max_transitive(list(qr23.out_rows), 23),
        "witness TT6 in FIG2_33": lambda m: m.transitive_witness(list(fig2.out_rows), 33, 6),
        "embed H6 in FIG2_33": lambda m: m.embed(list(fig2.out_rows), 33, list(h6.out_rows), 6),
        "complete ST12 + 1 (k=5)": lambda m: m.complete(ext_rows, 13, 5, ext_pairs),
        "canonical QR23": lambda m: m.canonical_labeling(list(qr23.out_rows), 23),
        "canonical ST13": lambda m: m.canonical_labeling(list(st13.out_rows), 13),
        "canonical 20 random n=20": lambda m: [m.canonical_labeling(list(t.out_rows), 20) for t in rand20],
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled extension not built; only the Python backend is available", file=sys.stderr)
    names = [b for b in ("python", "cython") if b in backends]
    print(f"{'workload':28s}" + "".join(f"{n:>12s}" for n in names) + ("     speedup" if len(names) == 2 else ""))
    for label, fn in workloads().items():
        times = []
        for name in names:
            mod = backends[name]
            times.append(min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat)))
        row = f"{label:28s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
