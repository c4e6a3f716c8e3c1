"""Exact computations around Fox calculus, Magnus expansions, free Lie rings,
the Andreadakis filtration, congruence subgroups and their mod-p analogues."""

__version__ = "0.1.0"

from .words import (Word, Endomorphism, DarkTable, WordSyntaxError, parse_word, parse_endomorphism,
                    multiply, inverse, commutator, conjugate, apply, compose, dark_table, verify_dark)
from .groupring import (GroupRingElement, JacobianMatrix, parse_element, fox_derivative, jacobian,
                        verify_chain_rule, augment)
from .tensor import (TensorPoly, CyclicClassVector, magnus, valuation, graded_component, contract,
                     cyclic_project, in_bracket_subspace, bryant_matrix_test, necklace_count)
from .lie import (LyndonBasis, LieElement, Derivation, lyndon_basis, lie_embed, lie_decompose,
                  restricted_decompose, bracket, derivation_bracket, derivation_p_power)
from .lattice import (hnf, snf, lattice_equal, lattice_contains, quotient_structure, left_kernel,
                      rank_mod_p)
from .filtration import (GradedAutClass, JLattice, ia_generators, is_automorphism_mod_gamma,
                         andreadakis_depth, johnson, trace_fox, trace_algebraic, frakJ_lattice,
                         ker_trace_lattice, verify_stable_surjectivity)
from .congruence import (CongruenceMatrix, GradedSymbol, depth, symbol, verify_bracket_compat,
                         verify_det_tr_square, elementary_witness, verify_lie_ring)
from .restricted import (gamma_p_degree, verify_gamma_p_product_formula, andreadakis_p_depth,
                         johnson_p, trace_p, nontame_witness, verify_p_concentration)

__all__ = [name for name, obj in list(globals().items())
           if not name.startswith("_") and getattr(obj, "__module__", "").startswith("andreadakis")]
