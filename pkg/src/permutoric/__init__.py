"""Exact toric ideals of Minkowski sums of unit simplices.

Construct generalized permutohedra from subset families, building sets or
y-parameters; enumerate their lattice points; compute the toric ideal two
independent ways (variable elimination and the Segre/Cayley contraction
pipeline); and machine-verify integer decomposition, squarefree initial
ideals and quadratic generation on concrete instances.
"""

from .core import (
    BlockOrder,
    Grevlex,
    ImageOrder,
    Lex,
    MarkedOrder,
    MonomialOrder,
    Polynomial,
    VariableIndex,
    compare,
    sort_tuple,
)
from .groebner import (
    BudgetExceeded,
    GroebnerBasis,
    MarkedElement,
    MonomialIdeal,
    align_variables,
    buchberger,
    confluence_audit,
    ideal_equal,
    initial_ideal,
    is_squarefree,
    minimal_generator_degrees,
    normal_form,
    s_polynomial,
    toric_ideal_elimination,
)
from .nested import (
    SegreIndex,
    canonical_tuple,
    contraction_order,
    even_cycle_gb,
    exchange_reduce,
    gamma_generators,
    lift,
    nested_configuration,
    project_out_J,
    segre_sorting_gb,
    shibuta_gb,
    shibuta_pipeline,
)
from .polytopes import (
    BuildingSet,
    Graph,
    GuardExceeded,
    LatticePointSet,
    SubsetFamily,
    YParameters,
    ZParameters,
    building_set_check,
    cayley_sum_points,
    dilate_family,
    edge_polytope_points,
    family_from_y,
    family_graph,
    graphical_building_set,
    minkowski_distinct_points,
    minkowski_lattice_points,
    named_family,
    y_to_z,
    z_lattice_points,
)
from .verify import (
    VerificationReport,
    cross_check_prop63,
    idp_check,
    idp_check_raw,
    placing_triangulation,
    unimodular_triangulation_probe,
    verify_theorem_main,
)

__version__ = "0.1.0"
