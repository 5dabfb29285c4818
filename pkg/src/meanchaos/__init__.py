"""Numerical reproduction of Cesàro-mean chaos for weighted shifts and translation semigroups."""
from .errors import CapabilityError, DomainError, QuadratureError
from .logcore import LogReal, log_add, log_mul, log_sum
from .weights import (AnchorProfile, BlockHalvesTwos, Constant, ExplicitList, Harmonic,
                      TbilcamiProfile, build_tbilcami, cum_log, log_weight, verify_tbilcami)
from .shiftops import (BilateralBackward, BilateralForward, DirectSumWithIdentity, Identity,
                       PairVec, SparseVec, UnilateralBackward, UnilateralForward, apply,
                       operator_norm, orbit_norm, orbit_norm_series, special_block_vector,
                       vector_norm)
from .cesaro import (Explicit, GeometricGrid, TbilcamiDips, TbilcamiHills, cesaro_mean,
                     cesaro_sum, cesaro_trace, window_mean)
from .chaostats import (ClassifyParams, classify_pair, density_estimate, distributional_profile)
from .detect import (acb_probe, ami_probe, construct_irregular_vector, mlycc_witness_search,
                     verify_certificate)
from .semigroup import (MultiplicativeTranslation, StepFunction, Translation, cesaro_integral,
                        parse_step, sandwich_check, semigroup_norm)
from .gallery import gallery_list, gallery_run, hypercyclicity_indicator

__version__ = "0.1.0"
