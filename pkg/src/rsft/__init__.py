"""Exact-arithmetic kernel for the algebra of rational symplectic field
theory: graded Poisson brackets on p/q/t-variables, symmetric-coalgebra
coderivations, potentials and their induced morphisms, Maurer-Cartan
twisting, linearization, and bounded torsion/order searches."""

from .coalgebra import (TensorWord, arrow_apply, check_commutator_lemma,
                        check_master, coderivation, contact_differential,
                        exp_word, homology_window, word_degree, word_power)
from .core import (AlgElement, INHOMOGENEOUS, bracket, identity_potential,
                   rename_sides, restrict_to_lagrangian, substitute)
from .context import ContextFile, load_context, parse_context
from .errors import RsftError
from .expr import format_element, format_tensor_word, parse_element, parse_word
from .invariants import (SearchBounds, SearchResult, check_order_homotopy,
                         monotonicity_harness, order, order_proof_chain,
                         torsion, torsion_by_level, torsion_tilde)
from .linearize import (Augmentation, LinearizedMorphism, augmentation_twist,
                        augmentation_twist_series, augmented_mc_linear_part,
                        check_bilie_relations, check_hat, m_operation)
from .mctwist import (exp_mc, exponential_product_check, is_maurer_cartan,
                      psi_map, pushforward_mc, split_potential,
                      twist_coderivation, twist_hamiltonian, twisted_morphism)
from .morphism import (MorphismHandle, Potential, apply_morphism,
                       check_chain_map, compose, constraint_expansion,
                       left_action, phi_component, right_action, siegel_map)
from .scalars import NovikovPoly
from .tables import Generator, GeneratorTable

__version__ = "0.1.0"
