use serde::Serialize;

use crate::arith::Rat;
use crate::error::{Error, Result};
use crate::quadarith::{Discriminant, FractionalIdealRep, KElt};

/// `μ = (n + r√D)/(2√D)`, a class in `𝔡⁻¹𝔫/𝔫` for `𝔫 = (N, (ρ+√D)/2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MuElement {
    pub n: i64,
    pub r: i64,
    #[serde(skip)]
    pub disc: Discriminant,
    #[serde(skip)]
    pub level: u64,
}

impl MuElement {
    pub fn new(n: i64, r: i64, disc: Discriminant, level: u64) -> Self {
        Self { n, r, disc, level }
    }

    /// `μ = r/2 + (n/(2D))·√D`.
    pub fn to_kelt(&self) -> KElt {
        let d = self.disc.value();
        KElt::new(
            Rat::new(self.r.into(), 2.into()),
            Rat::new(self.n.into(), (2 * d).into()),
            d,
        )
    }

    /// `Q(μ) = N(μ)/N = (n² − r²D)/(4|D|N)`.
    pub fn q(&self) -> Rat {
        let (n, r, d) = (self.n as i128, self.r as i128, self.disc.value() as i128);
        let num = n * n - r * r * d;
        let den = 4 * (-d) * self.level as i128;
        Rat::new(num.into(), den.into())
    }
}

/// `Q(μ) = N(μ)/N(𝔞)`.
pub fn q_mu(mu: &KElt, ideal: &FractionalIdealRep) -> Rat {
    mu.norm() / ideal.norm()
}

/// Checks `μ ∈ 𝔡⁻¹𝔞`, i.e. `√D·μ ∈ 𝔞`.
pub fn check_mu(mu: &KElt, ideal: &FractionalIdealRep) -> Result<()> {
    if mu.disc != ideal.disc() {
        return Err(Error::Invalid(
            "mu and ideal have different discriminants".into(),
        ));
    }
    if !ideal.contains(&mu.mul(&KElt::sqrt_disc(mu.disc))) {
        return Err(Error::Invalid(format!(
            "mu = {mu} is not in the inverse different times {ideal}"
        )));
    }
    Ok(())
}

pub(crate) fn is_integral_sum(m: &Rat, q: &Rat) -> bool {
    (m + q).is_integer()
}
