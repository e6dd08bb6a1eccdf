//! Exact closure invariants of monomial ideals.

pub mod closure;
pub mod cover;
pub mod error;
pub mod linalg;
pub mod monomial;
pub mod newton;
pub mod poly;
pub mod reduction;
pub mod relative;
pub mod rrs;
pub mod univariate;

pub use closure::{i_greater, in_i_greater, in_integral_closure, integral_closure, vbar, Vbar};
pub use error::{Error, Result};
pub use monomial::{minimal_generators, ExponentVector, IdealOrder, MonomialIdeal};
pub use newton::{newton_polyhedron, np_membership, rees_valuations, Facet, NewtonPolyhedron, ReesValuation};
pub use poly::Poly;
pub use rrs::{bounded_search, construct_from_igt, derivative_chain_check, verify, EquationWindow, RrsSystem, SearchOutcome};
pub use univariate::UniPoly;
pub use cover::{root_multiplicity, unique_deep_root_check, zz_membership, MonicHypersurface};
pub use reduction::{
    classify_reductions, core_via_colon, dim_i_mod_igt, intersect_star_two, is_reduction_monomial, is_reduction_parameter,
    multiplicity, reduction_from_igt, star_of_min_reduction, PolyIdeal, ReductionClass, StarIdeal, TruncatedQuotient,
};
pub use relative::{
    basic_facts_check, delta_pair_of_ideal, pullback_order, refute_star_membership, relative_membership, sigma1_check, ArcPair,
    ArcSampler, LocalArc, Refutation, SubmodulePair, TruncatedSeries,
};
