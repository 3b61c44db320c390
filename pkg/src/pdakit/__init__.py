"""Placement delivery arrays for coded caching.

Build base PDAs, combine them through unions of Cartesian-product cache
configurations, compare closed-form scheme parameters and simulate the
resulting caching protocol.
"""

from .constructors import (
    UnionIndex,
    build_cache_config_array,
    cartesian_power,
    cartesian_product,
    construct_pm,
    construct_pmt,
    g2_base_pda,
    mn_pda,
    pmt_cell,
    transform_to_base,
    transpose_pda,
    union_params,
)
from .core import (
    STAR,
    BasePda,
    PdaArray,
    PdaParams,
    find_star_rows,
    is_isomorphic,
    relabel_symbols,
    verify_base_pda,
    verify_pda,
)
from .errors import *  # noqa: F401,F403
from .io import PdaDocument, format_grid, parse, parse_grid, serialize
from .schemes import (
    SCHEME_NAMES,
    SchemeParams,
    SchemeSpec,
    baseline_params,
    compare_ratios,
    scheme_a_params,
    scheme_b_params,
    scheme_build,
    scheme_c_params,
)
from .simulator import FileLibrary, deliver, place, sweep_demands

__version__ = "0.1.0"
