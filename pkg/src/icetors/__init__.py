"""Torsion classes, ICE-closed subcategories and windowed aisles over
finite-dimensional path algebras with monomial relations, computed exactly
over a prime field."""

from .catalog import IndCatalog, enumerate_indecomposables
from .complexes import ChainMap, Complex, HomSpace, cohomology, derived_hom_dim, mapping_cone, minimize
from .derived import (
    WindowedAisle, brute_preaisle_scan, coaisle, coaisle_remark_search, heart_cohomology, mu,
    right_approximation, theta, tilted_scenario, verify_t_structure,
)
from .errors import (
    CapExceededError, ContractError, FalsificationError, IceTorsError, IncompleteCatalogError,
    PreconditionError, SchemaError, UnsupportedAlgebraError, UsageError, WindowTooSmallError,
)
from .iceseq import (
    IceSequence, ice_sequences, is_ice, is_narrow, mmi_from_seq, mmi_roundtrip, narrow_iff_ice_scan,
    seq_from_mmi,
)
from .lattice import (
    Interval, TorsLattice, enumerate_mmi_sequences, enumerate_tors, hasse_dot, interval_tors_iso_check,
    star, wide_intervals,
)
from .quiver import BoundQuiverAlgebra, build_algebra, builtin, load_algebra
from .reps import Representation, RepMorphism, ext1_dim, hom_dim
from .subcat import Fac, Subcat, alpha, calculus, ice_closed_subcats, wide_subcats

__version__ = "0.1.0"
