import itertools
import random

import pytest

from fcrystals import fflinalg as ff
from fcrystals.arith import FieldTower
from fcrystals.config import SearchConfig
from fcrystals.incidence import (CircularDiagram, IncidenceError, SemilinearMap,
                                 canonical_witness, check_lines, in_U_r,
                                 semilinear_eigenline, solve_lines, validate)

from oracles import all_lines, incident_tuples, orpheus_pairs_f2

F2 = FieldTower(2)
F3 = FieldTower(3)
F4 = FieldTower(2, 1, 2)


def _zero(m):
    return [[0] * m for _ in range(m)]


def _brute(D, G):
    DG = D.embed(G)
    maps = [(DG.phi[i].A, DG.phi[i].k, DG.psi[i].A, DG.psi[i].k) for i in range(D.f)]
    return incident_tuples(G, maps, D.m)


def test_validate_examples():
    D = CircularDiagram.from_matrices(F2, [(_zero(2), 1, _zero(2), -1)] * 3)
    assert tuple(validate(D)) == (0, 0, 0)
    for r in [(1, 2), (2, 0, 1), (1, 1, 1, 1)]:
        assert tuple(validate(canonical_witness(F2, r, m=2))) == r
    N = [[0, 1], [0, 0]]
    I = [[1, 0], [0, 1]]
    D = CircularDiagram.from_matrices(F2, [(_zero(2), 1, _zero(2), -1), (N, 1, I, -1)])
    with pytest.raises(IncidenceError) as err:
        validate(D)
    assert err.value.index == 1


def test_in_U_r_examples():
    for r in [(1,), (1, 2), (2, 1, 1), (0, 1)]:
        assert in_U_r(canonical_witness(F2, r, m=2))
    D = CircularDiagram.from_matrices(F2, [(_zero(2), 1, _zero(2), -1)] * 2)
    assert not in_U_r(D)
    # Phi nilpotent on its image: ranks fine, second open condition fails
    N = [[0, 1], [0, 0]]
    D = CircularDiagram.from_matrices(F2, [(N, 1, N, -1)])
    assert tuple(validate(D)) == (1,)
    assert not in_U_r(D)


def _rand_gl(F, m, rng):
    while True:
        g = [[rng.randrange(F.size) for _ in range(m)] for _ in range(m)]
        if ff.rank(F, g) == m:
            return g


def test_in_U_r_basis_change_invariance():
    """phi_i -> g_i phi_i g_{i-1}^{-1}, psi_i -> g_{i-1} psi_i g_i^{-1} (with twists)."""
    rng = random.Random(4)
    F = F4
    for _ in range(60):
        f, m = rng.randint(1, 3), rng.randint(1, 3)
        r = tuple(rng.randint(0, m) for _ in range(f))
        D = canonical_witness(F, r, m=m, sigmas=[rng.randint(-1, 2) for _ in range(f)],
                              taus=[rng.randint(-1, 2) for _ in range(f)])
        if rng.random() < 0.5:
            # break an open condition sometimes
            D.psi[0] = SemilinearMap(_zero(m), D.psi[0].k, F)
        gs = [SemilinearMap(_rand_gl(F, m, rng), 0, F) for _ in range(f)]
        phi = [gs[i].compose(D.phi[i]).compose(gs[(i - 1) % f].inverse()) for i in range(f)]
        psi = [gs[(i - 1) % f].compose(D.psi[i]).compose(gs[i].inverse()) for i in range(f)]
        D2 = CircularDiagram(phi, psi)
        assert tuple(validate(D2)) == tuple(validate(D))
        assert in_U_r(D2) == in_U_r(D)


def test_solve_lines_examples():
    D = CircularDiagram.from_matrices(F2, [(_zero(2), 1, _zero(2), -1)])
    L = solve_lines(D)
    assert L.lines == [[1, 0]] and L.field is F2
    D = canonical_witness(F2, (1, 2, 1), m=2)
    L = solve_lines(D)
    assert any(rec["step"] == "Phi eigenline" for rec in L.transcript)
    assert check_lines(D, L.lines, L.field)


def test_solve_lines_matches_brute_force_random():
    rng = random.Random(9)
    pairs = orpheus_pairs_f2(2)
    for _ in range(300):
        f = rng.randint(1, 2)
        maps = []
        for _ in range(f):
            A, B = rng.choice(pairs)
            maps.append((A, rng.randint(0, 1), B, rng.randint(0, 1)))
        D = CircularDiagram.from_matrices(F2, maps)
        L = solve_lines(D)
        assert tuple(tuple(v) for v in L.lines) in _brute(D, L.field)
        # no solution over smaller fields
        for d in range(1, L.field.m):
            assert not _brute(D, FieldTower(2, 1, d))


def test_mirror_reduction_is_used_and_sound():
    I = [[1, 0], [0, 1]]
    A = [[0, 1], [1, 1]]
    D = CircularDiagram.from_matrices(F2, [(A, 1, _zero(2), -1), (I, 0, _zero(2), 0)])
    L = solve_lines(D)
    assert check_lines(D, L.lines, L.field)
    assert tuple(tuple(v) for v in L.lines) in _brute(D, L.field)


def test_psi_reduction_soundness():
    """With psi_1 bijective (f = 2), solutions correspond to lines l_1 with
    phi_0 l_1 in psi_1 l_1 and psi_0 psi_1 l_1 in l_1, via l_0 = psi_1 l_1."""
    rng = random.Random(2)
    pairs = [(A, B) for A, B in orpheus_pairs_f2(2)]
    bij = [(A, B) for A, B in pairs if ff.rank(F2, B) == 2]
    checked = 0
    for _ in range(80):
        A1, B1 = rng.choice(bij)
        A0, B0 = rng.choice(pairs)
        s = [rng.randint(0, 1) for _ in range(4)]
        D = CircularDiagram.from_matrices(F2, [(A0, s[0], B0, s[1]), (A1, s[2], B1, s[3])])
        G = F4
        DG = D.embed(G)
        red = set()
        for l1 in all_lines(G, 2):
            l0 = ff.normalize_line(G, DG.psi[1](l1))
            if ff.parallel(G, l0, DG.phi[0](l1)) and ff.parallel(G, l1, DG.psi[0](l0)):
                red.add((tuple(l0), tuple(l1)))
        assert red == set(_brute(D, G))
        L = solve_lines(D)
        assert any(rec["step"] == "psi reduction" for rec in L.transcript)
        checked += 1
    assert checked == 80


def test_semilinear_eigenline_examples():
    line, G = semilinear_eigenline([[1, 0], [0, 1]], 1, F2)
    assert line == [1, 0] and G is F2
    line, G = semilinear_eigenline([[0, 1], [1, 0]], 0, F2)
    assert line == [1, 1]


def test_semilinear_eigenline_fixed_vector_needs_quadratic_extension():
    """c sigma(x) = x with c = -1 in F_3: x^2 = -1 has no root in F_3."""
    assert not [x for x in range(1, 3) if F3.mul(2, F3.frob(x, 1)) == x]
    line, G = semilinear_eigenline([[2]], 1, F3, fixed_vector=True)
    assert G.size == 9
    c = F3.embed(2, G)
    assert [x for x in G.nonzero() if G.mul(c, G.frob(x, 1)) == x]


def test_canonical_witness_phi_path_small():
    for f in (1, 2, 3):
        for m in (1, 2):
            for r in itertools.product(range(1, m + 1), repeat=f):
                L = solve_lines(canonical_witness(F2, r, m=m))
                assert L.transcript[0]["step"] == "Phi eigenline"


def test_budget_error():
    from fcrystals.config import BudgetExhausted
    with pytest.raises(BudgetExhausted):
        semilinear_eigenline([[0, 1], [1, 1]], 0, F2, SearchConfig(m_max=1))
