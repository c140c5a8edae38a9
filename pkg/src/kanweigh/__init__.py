"""kanweigh: exact enriched-category constructions over finite sets.

Finite categories and set-valued functors with fully validated laws; weighted
limits and colimits by the category-of-elements reduction; ends, coends and
the profunctor algebra with right liftings/extensions and a constructive
adjointness decision; Karoubi envelope and the Isbell adjunction; bounded
closure and saturation of weight classes. Every nontrivial verdict carries a
replayable certificate.
"""
from .core import (
    EquivalenceCertificate,
    FinCat,
    Functor,
    ProductCat,
    compose_functors,
    equivalence_certificate,
    fincat,
    functor,
    identity_functor,
    iso_categories,
    iso_objects,
    opposite,
    product,
)
from .errors import (
    InternalCheckError,
    KanweighError,
    ResourceCapError,
    ShapeMismatchError,
    ValidationError,
)
from .setfun import (
    CoendData,
    ColimitData,
    EndData,
    LimitData,
    NatTrans,
    SetFunctor,
    coend,
    conical_colimit,
    conical_limit,
    elements,
    end,
    enumerate_set_functors,
    fun_set,
    nat_set,
    nat_trans,
    natiso,
    nt_compose,
    nt_identity,
    nt_inverse,
    set_functor,
    yoneda,
)
from .weighted import (
    ComparisonVerdict,
    FlatnessVerdict,
    PresheafDiagram,
    TargetFunctor,
    Weight,
    WeightedResult,
    commutation_search,
    commutes_at,
    evaluation_target,
    hom_target,
    identity_target,
    is_flat_finlim,
    nat_hom_target,
    presheaf_diagram,
    preserves,
    weighted_colimit,
    weighted_limit,
    yoneda_diagram,
)
from .promod import (
    AdjointnessResult,
    Composite,
    HomLike,
    ModMor,
    Module,
    check_adjunction,
    compose_modules,
    functor_modules,
    has_left_adjoint,
    has_right_adjoint,
    hom_module,
    mod_mor,
    mod_morphisms,
    module,
    module_from_carrier,
    module_iso,
    module_of_copresheaf,
    module_of_presheaf,
    nat_trans_modules,
    rext,
    rlift,
    transpose_module,
)
from .cauchy_isbell import (
    CauchyResult,
    IsbellCheck,
    ProjectivityVerdict,
    RetractWitness,
    cauchy_completion,
    coyoneda,
    default_sample_grid,
    isbell_adjunction_check,
    isbell_counit,
    isbell_o,
    isbell_spec,
    isbell_unit,
    is_small_projective,
    retract_search,
)
from .closure import (
    AtomVerdict,
    ClosureElement,
    ClosureRun,
    MemberVerdict,
    atom_check,
    closure_iterate,
    find_reflection,
    lan_extend,
    replay_witness,
    saturation_member,
)

__version__ = "0.1.0"
