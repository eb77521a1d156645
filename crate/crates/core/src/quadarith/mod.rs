//! Binary quadratic forms, class groups, ideals, representation numbers and
//! Heegner representatives for imaginary quadratic fields.

mod cache;
mod classgroup;
mod form;
mod heegner;
mod ideal;
mod rho;

pub use cache::{ClassGroupCache, ClassGroupRecord};
pub use classgroup::{ClassGroup, ClassIndex};
pub use form::{compose_forms, reduce_form, reduced_forms, BinaryQF, Discriminant, Splitting};
pub use heegner::{check_heegner_data, heegner_reps, heegner_reps_with, HeegnerRep};
pub use ideal::{FractionalIdealRep, KElt};
pub use rho::{prime_ideal_class, rho, rho_all, rho_genus};

/// Class group for a fundamental discriminant from the process-wide cache.
pub fn class_group(d: i64) -> crate::error::Result<std::sync::Arc<ClassGroup>> {
    ClassGroupCache::global().get(d)
}
