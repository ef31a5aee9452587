"""Finite-level Kummer theory toolkit.

Matrix groups over Z/NZ, Cartan subgroups and their normalisers, group
cohomology H^1, Howell-form submodules under matrix action, arboreal
(translation-by-torsion) groups with their l-adic and adelic failures, and
calculators for every effective constant in the surrounding theory, plus
brute-force verification suites for each checkable statement.
"""

__version__ = "0.1.0"

from .bounds import (
    CurveArithInputs,
    GrowthTower,
    a_ell,
    b_ell,
    c_total,
    detect_growth_parameter,
    maximal_growth_consequences,
    petsche_bounds,
    t0_set,
    tilde_n_bound,
    universal_m,
)
from .cohomology import (
    CohomologyResult,
    GModule,
    fixed_points,
    h1,
    h1_cyclic_oracle,
    hom_invariants,
    sah_annihilator_check,
)
from .kummer import (
    ArborealGroup,
    close_arboreal,
    cm_counterexample,
    failures,
    fiber_at_reduced_level,
    hn_stability_check,
    kummer_fiber,
    lemma_ab_check,
    remark_nm_check,
    semidirect_inv,
    semidirect_mul,
    torsion_projection,
    total_failure_identity_check,
)
from .linalg import HowellModule
from .matgroups import (
    CartanData,
    MatGroup,
    abelianisation,
    cartan,
    cartan_normaliser,
    close_group,
    contains_nontrivial_homothety,
    d_subgroup,
    derived_subgroup,
    gl2_group,
    group_exponent,
    kernel_of_reduction,
    matrix_algebra,
    nonsplit_cartan_modp,
    power_subgroup,
    reduce_level,
    scalars_in,
    sl2_group,
)
from .modulegen import (
    commutator_module,
    contains_scaled_lattice,
    irreducible_mod_ell,
    min_vector_valuation,
    module_generated,
    verify_grouptheory_prop,
)
from .residues import (
    Modulus,
    Residue,
    crt_join,
    crt_split,
    mth_root_in_unit_group,
    padic_exp,
    padic_log,
    teichmuller,
    vl,
)
from .suites import SuiteReport, run_suite, suite_names
