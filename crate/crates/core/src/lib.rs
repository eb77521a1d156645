//! Exact valuations of CM values of modular functions on `Γ0(N)` with
//! Heegner divisor, and a high-precision analytic engine that checks them.
//!
//! * [`quadarith`]: forms, class groups, ideals, `ρ(n, [𝔟])`, Heegner forms.
//! * [`localsym`]: Hilbert symbols, `Diff(m)`, `ν_p`, `o(m)`, `p₀`/`κ_p`.
//! * [`speccycles`]: special-cycle multiplicities and lattice counts.
//! * [`cmval`]: the valuation engine and exact q-series.
//! * [`analytic`]: ball arithmetic, eta/theta/j, Borcherds products,
//!   conjugate values and class polynomials.
//! * [`pipeline`]: the end-to-end verification run used by the CLI.

pub mod analytic;
pub mod arith;
pub mod cmval;
pub mod error;
pub mod localsym;
pub mod pipeline;
pub mod quadarith;
pub mod speccycles;

pub use error::{Error, Result};
