"""Core net-scale objects: spaces and maps, measures, kernels"""

from .errors import (
    KernelError,
    MassBoundError,
    ProblemFormatError,
    ResolutionError,
    SectionError,
    SpaceMismatchError,
    SurjectivityError,
    UnknownGalleryError,
)
from .spaces import (
    GALLERY_MAPS,
    GALLERY_SPACES,
    NetMap,
    NetPoint,
    NetSpace,
    build_discrete_map,
    build_gallery_map,
    build_gallery_space,
    dyadic_branches,
    fiber,
    fiber_ids,
    openness_defect,
    refine_gallery_map,
    surjectivity_defect,
    transport_subset,
)
from .measures import (
    DiscreteMeasure,
    bl_distance,
    convex_combination,
    dirac,
    integrate,
    measure_of,
    pushforward,
    support,
    zero_measure,
)
from .kernels import (
    GridFunction,
    Kernel,
    KernelCertificate,
    apply_operator,
    bimodularity_defect,
    bump_family,
    canonical_kernel,
    convex_combination_kernel,
    is_extremal_candidate,
    kernel_from_operator,
    kernel_from_section,
    kernel_from_selection,
    mass_function,
    multiplicativity_defect,
    reweight_kernel,
    sup_bl_distance,
    union_of_supports,
    validate_kernel,
)
