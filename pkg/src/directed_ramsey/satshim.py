"""Minimal DIMACS solver executable backed by pysat.

Usage: ``python -m directed_ramsey.satshim [--engine NAME] FILE.cnf``

Prints the usual competition output (``s SATISFIABLE`` / ``s UNSATISFIABLE``
and ``v`` model lines) and exits 10 / 20. This lets the batch runner treat
an in-Python solver exactly like an external binary such as ``cadical``.
"""

import argparse
import sys


def _model_lines(model, width=20):
    lits = list(model) + [0]
    for start in range(0, len(lits), width):
        yield "v " + " ".join(str(x) for x in lits[start:start + width])


def main(argv=None):
    parser = argparse.ArgumentParser(prog="satshim")
    parser.add_argument("cnf")
    parser.add_argument("--engine", default="cadical195")
    args = parser.parse_args(argv)

    from pysat.formula import CNF
    from pysat.solvers import Solver

    formula = CNF(from_file=args.cnf)
    print(f"c satshim engine={args.engine} vars={formula.nv} clauses={len(formula.clauses)}")
    sys.stdout.flush()
    with Solver(name=args.engine, bootstrap_with=formula.clauses) as solver:
        sat = solver.solve()
        if sat:
            model = solver.get_model() or []
            seen = {abs(x) for x in model}
            # pad variables the engine never saw (e.g. absent from all clauses)
            model = list(model) + [-v for v in range(1, formula.nv + 1) if v not in seen]
            model.sort(key=abs)
            print("s SATISFIABLE")
            for line in _model_lines(model):
                print(line)
            return 10
    print("s UNSATISFIABLE")
    return 20


if __name__ == "__main__":
    sys.exit(main())
