"""For each Newton vector below, build a lattice M with inv(M, FM) = mu for
every dominant mu above it in a small window, and print the census."""
from fractions import Fraction

from fcrystals.coweight import dominance_leq, dominant_integral_vectors
from fcrystals.isocrystal import standard_isocrystal, twist_apply
from fcrystals.lattice import relative_position
from fcrystals.mazur import construct_lattice

NUS = [["1/2", "1/2"], ["1/2", "1/2", 0], ["2/3", "2/3", "2/3"], ["3/2", "3/2", 1]]


def main(w=2):
    for nu in NUS:
        tot = sum(Fraction(x) for x in nu)
        mus = [m for m in dominant_integral_vectors(len(nu), -w, w + 1, total=tot)
               if dominance_leq(nu, m)]
        print(f"nu = ({', '.join(map(str, nu))})")
        for mu in mus:
            M = construct_lattice(nu, list(mu))
            X = standard_isocrystal(nu, M.field)
            got = relative_position(M, twist_apply(X, M, 1))
            print(f"  mu = {tuple(int(x) for x in mu)}  field degree {M.field.m}  "
                  f"check {'ok' if tuple(got) == tuple(mu) else 'FAILED'}")


if __name__ == "__main__":
    main()
