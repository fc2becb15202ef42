"""Application suites built on the operator calculus."""

from .additive import (
    CDReport,
    HPInstance,
    HPReport,
    cd_check,
    cns_witness,
    hp_basic,
    hp_verify,
    multiplicative_subgroup,
    sumset,
)
from .bounds import BoundReport, GammaResult, capset_bound, count_monomials, gamma, kakeya_bounds, sumfree_bound
from .capset import (
    SumFreeFamily,
    canonical_order,
    capset_verify,
    extreme_supports,
    find_3ap,
    sumfree_brute,
    sumfree_verify,
)
from .kakeya import (
    directions,
    kakeya_mult_span_check,
    kakeya_span_check,
    kakeya_verify,
    min_kakeya_size,
)
