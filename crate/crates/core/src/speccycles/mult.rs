use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{fmt_rational, ord_rat, rat_int, Rat};
use crate::error::{Error, Result};
use crate::localsym::{diff_set, nu_p, o_m};
use crate::quadarith::{rho, rho_genus, ClassGroup, ClassIndex, FractionalIdealRep, KElt};

use super::mu::{check_mu, is_integral_sum, q_mu};
use super::setup::CycleSetup;

/// `2^{o−1}` as an exact rational.
pub(crate) fn two_pow_o_minus_1(o: u32) -> Rat {
    Rat::new(BigInt::one() << o, BigInt::from(2))
}

/// `m|D|/p`.
fn rho_argument(m: &Rat, disc: i64, p: u64) -> Rat {
    m * rat_int(disc.abs()) / rat_int(p as i64)
}

/// The prime of `Diff(m)` when the cycle can be nonzero, else `None`.
///
/// Both vanishing conditions are checked: `|Diff(m)| = 1` and
/// `m + Q(μ) ∈ Z`.
pub fn support_prime(m: &Rat, ideal: &FractionalIdealRep, mu: &KElt) -> Result<Option<u64>> {
    check_mu(mu, ideal)?;
    let disc = crate::quadarith::Discriminant::fundamental(ideal.disc())?;
    let diff = diff_set(m, &ideal.norm(), disc)?;
    let Some(p) = diff.single() else {
        return Ok(None);
    };
    if !is_integral_sum(m, &q_mu(mu, ideal)) {
        return Ok(None);
    }
    Ok(Some(p))
}

fn require_prime_disc(cg: &ClassGroup) -> Result<()> {
    let d = cg.disc();
    if !d.is_prime_discriminant() || d.value().rem_euclid(4) != 1 {
        return Err(Error::Unsupported(format!(
            "the prime-discriminant formula needs D = -l with l prime, l = 3 mod 4; got {d}"
        )));
    }
    Ok(())
}

/// Multiplicity at `𝔓₀^{σ(𝔟)}` where `𝔓₀` is the prime fixed by complex
/// conjugation: `2^{o(m)−1} ν_p(m) ρ(m|D|/p, [𝔞𝔟⁻²])`.
pub fn cycle_multiplicity_prime_disc(
    cg: &ClassGroup,
    m: &Rat,
    ideal: &FractionalIdealRep,
    mu: &KElt,
    b: ClassIndex,
) -> Result<Rat> {
    require_prime_disc(cg)?;
    let Some(p) = support_prime(m, ideal, mu)? else {
        return Ok(Rat::zero());
    };
    let disc = cg.disc();
    let target = cg.mul(ideal.class(cg)?, cg.inv(cg.mul(b, b)));
    let count = rho(cg, &rho_argument(m, disc.value(), p), target);
    Ok(two_pow_o_minus_1(o_m(m, disc)) * nu_p(m, p, disc)? * rat_int(count as i64))
}

/// Multiplicity at `𝔣^{σ(𝔠)}` for the prime `𝔣` of the genus field below
/// `𝔓₀`: `2^{o(m)−1} ν_p(m) ρ(m|D|/p, [𝔠]⁻²[𝔠₀𝔞])`.
///
/// Requires odd `D` and `|Diff(m)| = 1`; returns 0 when `m + Q(μ) ∉ Z`.
pub fn cycle_multiplicity_genus(
    cg: &ClassGroup,
    m: &Rat,
    ideal: &FractionalIdealRep,
    mu: &KElt,
    c: ClassIndex,
) -> Result<Rat> {
    let disc = cg.disc();
    if !disc.is_odd() {
        return Err(Error::Unsupported(format!(
            "genus formula needs odd D, got {disc}"
        )));
    }
    check_mu(mu, ideal)?;
    let diff = diff_set(m, &ideal.norm(), disc)?;
    let Some(p) = diff.single() else {
        return Err(Error::Invalid(format!(
            "Diff({}) = {:?} is not a single prime",
            fmt_rational(m),
            diff.primes
        )));
    };
    if !is_integral_sum(m, &q_mu(mu, ideal)) {
        return Ok(Rat::zero());
    }
    let setup = CycleSetup::new(cg, p)?;
    genus_value(cg, &setup, m, ideal, c)
}

fn genus_value(
    cg: &ClassGroup,
    setup: &CycleSetup,
    m: &Rat,
    ideal: &FractionalIdealRep,
    c: ClassIndex,
) -> Result<Rat> {
    let disc = cg.disc();
    let base = cg.mul(setup.c0_class, ideal.class(cg)?);
    let target = cg.mul(cg.inv(cg.mul(c, c)), base);
    let count = rho(cg, &rho_argument(m, disc.value(), setup.p()), target);
    Ok(two_pow_o_minus_1(o_m(m, disc)) * nu_p(m, setup.p(), disc)? * rat_int(count as i64))
}

/// Which formula produced a [`CycleMultiplicity`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    /// Labels `σ(𝔟)` relative to the conjugation-fixed prime of `H`.
    PrimeDisc,
    /// Labels `σ(𝔠)` relative to `𝔣` in the genus field.
    Genus,
}

/// All per-class multiplicities of `Z(m, 𝔞, μ)` above its support prime.
#[derive(Clone, Debug)]
pub struct CycleMultiplicity {
    pub m: Rat,
    pub ideal: FractionalIdealRep,
    pub mu: KElt,
    pub p: Option<u64>,
    pub backend: Backend,
    pub per_class: Vec<Rat>,
}

/// Evaluates every class label, choosing the prime-discriminant formula when
/// `D = −l` and the genus formula otherwise.
pub fn cycle_multiplicities(
    cg: &ClassGroup,
    m: &Rat,
    ideal: &FractionalIdealRep,
    mu: &KElt,
) -> Result<CycleMultiplicity> {
    let backend = if require_prime_disc(cg).is_ok() {
        Backend::PrimeDisc
    } else if cg.disc().is_odd() {
        Backend::Genus
    } else {
        return Err(Error::Unsupported(format!(
            "even discriminant {}",
            cg.disc()
        )));
    };
    let p = support_prime(m, ideal, mu)?;
    let per_class = match (p, backend) {
        (None, _) => vec![Rat::zero(); cg.h()],
        (Some(_), Backend::PrimeDisc) => (0..cg.h())
            .map(|b| cycle_multiplicity_prime_disc(cg, m, ideal, mu, b))
            .collect::<Result<_>>()?,
        (Some(p), Backend::Genus) => {
            let setup = CycleSetup::new(cg, p)?;
            (0..cg.h())
                .map(|c| genus_value(cg, &setup, m, ideal, c))
                .collect::<Result<_>>()?
        }
    };
    Ok(CycleMultiplicity {
        m: m.clone(),
        ideal: ideal.clone(),
        mu: mu.clone(),
        p,
        backend,
        per_class,
    })
}

/// Arakelov degree as `(p, coefficient of log p)` pairs; empty unless
/// `Diff(m) = {p}` and `m + Q(μ) ∈ Z`.
///
/// The coefficient is `2^{o(m)−1}(ord_p(m)+1) ρ(m|D|/p, genus of [𝔠₀𝔞])`.
pub fn arakelov_degree(
    cg: &ClassGroup,
    m: &Rat,
    ideal: &FractionalIdealRep,
    mu: &KElt,
) -> Result<Vec<(u64, Rat)>> {
    let Some(p) = support_prime(m, ideal, mu)? else {
        return Ok(Vec::new());
    };
    let disc = cg.disc();
    let setup = CycleSetup::new(cg, p)?;
    let cls = cg.mul(setup.c0_class, ideal.class(cg)?);
    let count = rho_genus(cg, &rho_argument(m, disc.value(), p), cg.genus_vector(cls))?;
    let coeff =
        two_pow_o_minus_1(o_m(m, disc)) * rat_int(ord_rat(m, p) + 1) * rat_int(count as i64);
    Ok(vec![(p, coeff)])
}

#[derive(Debug, Serialize)]
pub struct RhoEntry {
    pub label: String,
    pub rho_class: String,
    pub rho_n: String,
    pub rho: u64,
    pub multiplicity: String,
}

/// Debug report for one cycle; rationals are `"p/q"` strings.
#[derive(Debug, Serialize)]
pub struct CycleReport {
    pub m: String,
    pub ideal: [String; 3],
    pub mu: Option<(i64, i64)>,
    pub diff: Vec<u64>,
    pub integral: bool,
    pub p: Option<u64>,
    pub nu_p: Option<String>,
    pub o: u32,
    pub backend: Backend,
    pub c0: Option<String>,
    pub ramification: Option<u32>,
    pub classes: Vec<RhoEntry>,
}

/// Explains every ingredient of [`cycle_multiplicities`].
/// `mu_nr` is echoed as `(n, r)` when `μ` came from a term enumeration.
pub fn debug_report(
    cg: &ClassGroup,
    m: &Rat,
    ideal: &FractionalIdealRep,
    mu: &KElt,
    mu_nr: Option<(i64, i64)>,
) -> Result<CycleReport> {
    let disc = cg.disc();
    let res = cycle_multiplicities(cg, m, ideal, mu)?;
    let diff = diff_set(m, &ideal.norm(), disc)?;
    let integral = is_integral_sum(m, &q_mu(mu, ideal));
    let setup = match res.p {
        Some(p) => Some(CycleSetup::new(cg, p)?),
        None => None,
    };
    let nu = match res.p {
        Some(p) => Some(fmt_rational(&nu_p(m, p, disc)?)),
        None => None,
    };
    let mut classes = Vec::with_capacity(cg.h());
    let base = ideal.class(cg)?;
    for c in 0..cg.h() {
        let (target, n) = match (&setup, res.backend) {
            (Some(s), Backend::Genus) => (
                cg.mul(cg.inv(cg.mul(c, c)), cg.mul(s.c0_class, base)),
                rho_argument(m, disc.value(), s.p()),
            ),
            (Some(s), Backend::PrimeDisc) => (
                cg.mul(base, cg.inv(cg.mul(c, c))),
                rho_argument(m, disc.value(), s.p()),
            ),
            (None, _) => (base, Rat::zero()),
        };
        classes.push(RhoEntry {
            label: cg.label(c),
            rho_class: cg.label(target),
            rho_n: fmt_rational(&n),
            rho: rho(cg, &n, target),
            multiplicity: fmt_rational(&res.per_class[c]),
        });
    }
    Ok(CycleReport {
        m: fmt_rational(m),
        ideal: [
            fmt_rational(ideal.scale()),
            ideal.a().to_string(),
            ideal.b().to_string(),
        ],
        mu: mu_nr,
        diff: diff.primes,
        integral,
        p: res.p,
        nu_p: nu,
        o: o_m(m, disc),
        backend: res.backend,
        c0: setup.as_ref().map(|s| s.c0.to_string()),
        ramification: setup.as_ref().map(|s| s.ramification),
        classes,
    })
}
