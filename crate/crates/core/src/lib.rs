//! Exact cyclic sieving computations for generalised non-crossing partitions
//! of well-generated complex reflection groups.
//!
//! Layers, bottom up: [`cyclo`] (cyclotomic fields, factored q-integers),
//! [`groups`] (catalog and enumeration), [`abslen`] (reflection length,
//! Coxeter elements, parabolic types), [`ncp`] (NC^m enumeration and
//! q-Fuß–Catalan evaluation), [`sieve`] (the two cyclic actions and CSP
//! checks) and [`kernel`] (twisted equations and decomposition numbers).

pub mod abslen;
pub mod cases;
pub mod catalog;
pub mod cyclo;
pub mod error;
pub mod groups;
pub mod kernel;
pub mod linalg;
pub mod ncp;
pub mod sieve;

pub use abslen::{coxeter_element, length_table, leq_t, parabolic_type, LengthTable, ParabolicType};
pub use catalog::{load_catalog, CatalogEntry};
pub use cyclo::{Cyclotomic, QFactored, RootValue};
pub use error::{CatalogError, CycloError, GroupError, KernelError, NcpError, SieveError};
pub use ncp::{cat_at_root, enumerate_ncm, fuss_catalan, qcatalan, Interval, NcpTuple, RootEval};
pub use sieve::{csp_verify, fix_count, phi_apply, psi_apply, reduction_plan, CoxeterPowers, CspReport, Mode, ReductionPlan};
pub use kernel::{
    count_by_type, decomposition_number, derive_n_values, fix_polynomial, solve_twisted, FixParts, FixPolynomial, NValues,
    Relation, TwistedSystem, TypedInterval,
};
pub use groups::{build_group, BuildConfig, Elem, ReflectionGroup};
