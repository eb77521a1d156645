//! The valuation engine: Heegner divisors, term enumeration, per-class
//! valuations of CM values, the level-1 specialization and exact q-series.

mod divisor;
mod profile;
mod qseries;
mod terms;

pub use divisor::HeegnerDivisor;
pub use profile::{gz_dorman_level1, valuations, ValuationProfile};
pub use qseries::{
    borcherds_exponents, borcherds_series, content_primes, fourier_content, BorcherdsExponents,
    ExactQSeries,
};
pub use terms::{enumerate_terms, Term};
