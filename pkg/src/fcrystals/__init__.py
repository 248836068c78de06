"""F-crystals, lattice chains and their combinatorics over F_q((t))."""
from .arith import FieldTower, LaurentPoly
from .config import BudgetExhausted, SearchConfig
from .coweight import (Coweight, GSpCoweight, dominance_leq, is_minuscule,
                       is_minuscule_weight_r, minimal_dominant_above, omega)
from .lattice import (Lattice, LatticeChain, SymplecticForm, chain_validate, dual,
                      relative_position, standard_chain)
from .isocrystal import (Isocrystal, newton_point, standard_isocrystal,
                         standard_symplectic_isocrystal)
from .mazur import (construct_lattice, construct_lattice_gsp, enumerate_hodge_set,
                    hodge, in_b_g_mu, mazur_check)
from .incidence import CircularDiagram, SemilinearMap, semilinear_eigenline, solve_lines
from .chains import Empty, build_chain, chain_membership, extend_chain, stable_line
from .weyl import ExtAffineWeylElem, adm_set, bruhat_leq, perm_set_by_chains
from .resscalars import (GradedChain, GradedCoweight, GradedIsocrystal, GradedLattice, graded_chain_extend,
                         interpolate_chain, regrade, ungrade, witness_graded)

__version__ = "0.1.0"
