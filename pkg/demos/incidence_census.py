"""Solve every circular incidence diagram with f, m <= 2 over F_2 and
tabulate the degree of the field needed for a solution."""
import collections
import itertools

from fcrystals.arith import FieldTower
from fcrystals.incidence import CircularDiagram, check_lines, solve_lines


def _mul(A, B):
    m = len(A)
    return [[sum(A[i][k] * B[k][j] for k in range(m)) % 2 for j in range(m)] for i in range(m)]


def orpheus_pairs(m):
    mats = [[list(bits[i * m:(i + 1) * m]) for i in range(m)]
            for bits in itertools.product((0, 1), repeat=m * m)]
    zero = [[0] * m for _ in range(m)]
    return [(A, B) for A in mats for B in mats if _mul(A, B) == zero and _mul(B, A) == zero]


def main():
    F = FieldTower(2)
    for f in (1, 2):
        for m in (1, 2):
            degrees = collections.Counter()
            steps = collections.Counter()
            pairs = orpheus_pairs(m)
            for choice in itertools.product(pairs, repeat=f):
                for pw in itertools.product((0, 1), repeat=2 * f):
                    D = CircularDiagram.from_matrices(
                        F, [(A, pw[2 * i], B, pw[2 * i + 1]) for i, (A, B) in enumerate(choice)])
                    sol = solve_lines(D)
                    assert check_lines(D, sol.lines, sol.field)
                    degrees[sol.field.m] += 1
                    steps[sol.transcript[0]["step"]] += 1
            print(f"f={f} m={m}: degrees {dict(sorted(degrees.items()))}  first step {dict(steps)}")


if __name__ == "__main__":
    main()
