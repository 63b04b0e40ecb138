//! Finite operations and the constructions of absorption theory on special trees.

pub mod absorption;
pub mod extend;
mod optable;
pub mod pointing;
pub mod polymer;
pub mod sets;

pub use absorption::{
    find_singleton_absorber, preceq_violations, relatively_absorption_free, singleton_absorbs_via_polymer,
    verify_absorption, verify_preceq_absorption, AbsorptionCertificate,
};
pub use extend::{build_pointing_for_af, build_pointing_for_neighborhood, extend_binary, extend_wnu, Neighborhood};
pub use optable::{OperationExpr, OperationTable, DEFAULT_ARITY_BUDGET};
pub use pointing::{compose_pointing, trivial_pointing, verify_weak_pointing, WeakPointingCertificate};
pub use polymer::{binary_polymer, closure, expr_polymer, is_special, make_special, star, SpecialWnu};
pub use sets::{s_set, SSet, Term};
