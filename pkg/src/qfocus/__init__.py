"""Finite-instance construction of quantum theory from focused parameters and group actions."""

from .groups import (FiniteGroup, GroupAction, Measure, NotAGroup, NotAnAction, Partition, build_action,
                     generated_subgroup, invariant_measure, is_permissible, maximal_permissible_subgroup,
                     orbits, verify_group)
from .focusing import (FocusedParameter, find_transition, focused_parameter, is_function_of,
                       is_maximal_accessible, reduce_to_orbit, value_orbits, verify_coupling)
from .quantum_space import (ParametricSpace, QuantumSpace, UnitaryFamily, build_coupled_representation,
                            build_parametric_space, build_quantum_space, interpret_state, isotypic_projectors,
                            regular_representation, transport_check)
from .measurement import (DensityOperator, EffectOperator, LikelihoodTable, born_transition_matrix, build_povm,
                          collapse, density_from_prior, predictive_distribution, recover_from_density)
from .dynamics import Hamiltonian, Lattice, evolve_state, heisenberg_operator, propagator, translation_generator
from .inference import (FiniteModel, brute_force_best_equivariant, is_equivariant, location_model,
                        pitman_estimator, posterior, risk)
from .models import cube_model, spin_operator, spin_states, su2_from_rotation
from .report import ScenarioReport
from .scenarios import SCENARIOS, Direction, run_scenario

__version__ = "0.1.0"

__all__ = [
    "FiniteGroup",
    "GroupAction",
    "Measure",
    "NotAGroup",
    "NotAnAction",
    "Partition",
    "build_action",
    "generated_subgroup",
    "invariant_measure",
    "is_permissible",
    "maximal_permissible_subgroup",
    "orbits",
    "verify_group",
    "FocusedParameter",
    "find_transition",
    "focused_parameter",
    "is_function_of",
    "is_maximal_accessible",
    "reduce_to_orbit",
    "value_orbits",
    "verify_coupling",
    "ParametricSpace",
    "QuantumSpace",
    "UnitaryFamily",
    "build_coupled_representation",
    "build_parametric_space",
    "build_quantum_space",
    "interpret_state",
    "isotypic_projectors",
    "regular_representation",
    "transport_check",
    "DensityOperator",
    "EffectOperator",
    "LikelihoodTable",
    "born_transition_matrix",
    "build_povm",
    "collapse",
    "density_from_prior",
    "predictive_distribution",
    "recover_from_density",
    "Hamiltonian",
    "Lattice",
    "evolve_state",
    "heisenberg_operator",
    "propagator",
    "translation_generator",
    "FiniteModel",
    "brute_force_best_equivariant",
    "is_equivariant",
    "location_model",
    "pitman_estimator",
    "posterior",
    "risk",
    "cube_model",
    "spin_operator",
    "spin_states",
    "su2_from_rotation",
    "ScenarioReport",
    "SCENARIOS",
    "Direction",
    "run_scenario",
]
