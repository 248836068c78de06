"""Count chains built in X(omega_r, b) for GL_3 over all r, all types, and
all Newton vectors of weight r; print which (nu, r) are empty."""
import itertools

from fcrystals.chains import Empty, build_chain, chain_membership
from fcrystals.coweight import newton_vectors
from fcrystals.isocrystal import standard_isocrystal
from fcrystals.arith import FieldTower


def main(n=3):
    F = FieldTower(2)
    types = [I for k in range(1, n + 1) for I in itertools.combinations(range(n), k)]
    for r in range(n + 1):
        for nu in newton_vectors(n, n, -1, 2, total=r):
            X = standard_isocrystal(nu, F)
            res = [build_chain(X, r, I) for I in types]
            if isinstance(res[0], Empty):
                print(f"r={r} nu={nu}: empty ({res[0].reason})")
                continue
            ok = all(chain_membership(C, X, r) for C in res)
            print(f"r={r} nu={nu}: {len(res)} chains, all verified: {ok}")


if __name__ == "__main__":
    main()
