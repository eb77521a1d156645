use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arith::{fmt_rational, gcd, parse_rational, rat_int, Rat};
use crate::error::{Error, Result};
use crate::localsym::{diff_set, nu_p, o_m};
use crate::quadarith::{rho_all, ClassGroup, FractionalIdealRep, Splitting};
use crate::speccycles::{cycle_multiplicities, Backend, CycleSetup};

use super::divisor::HeegnerDivisor;
use super::terms::enumerate_terms;

/// Per-prime, per-class valuations of a CM value.
///
/// With the prime-discriminant backend the labels are Artin classes `σ(𝔟)`
/// relative to the conjugation-fixed prime above `p`, so label 0 is that
/// prime. With the genus backend they are `σ(𝔠)` relative to `𝔣`, and each
/// prime of the genus field appears under `|Cl[2]|` labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuationProfile {
    pub disc: i64,
    pub rho: i64,
    pub level: u64,
    pub backend: Backend,
    pub labels: Vec<String>,
    /// Primes with at least one nonzero entry.
    pub per_prime: BTreeMap<u64, Vec<Rat>>,
    /// `|Cl[2]|` for the genus backend, 1 otherwise.
    pub label_multiplicity: usize,
}

impl ValuationProfile {
    pub fn zero(cg: &ClassGroup, level: u64, rho: i64, backend: Backend) -> Self {
        Self {
            disc: cg.disc().value(),
            rho,
            level,
            backend,
            labels: cg.labels(),
            per_prime: BTreeMap::new(),
            label_multiplicity: match backend {
                Backend::PrimeDisc => 1,
                Backend::Genus => cg.two_torsion().len(),
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        self.per_prime.is_empty()
    }

    fn accumulate(&mut self, p: u64, values: &[Rat], weight: &Rat) {
        let h = self.labels.len();
        let row = self
            .per_prime
            .entry(p)
            .or_insert_with(|| vec![Rat::zero(); h]);
        for (acc, v) in row.iter_mut().zip(values) {
            *acc += v * weight;
        }
    }

    fn prune(&mut self) {
        self.per_prime
            .retain(|_, row| row.iter().any(|v| !v.is_zero()));
    }

    /// Residue degree of the primes of H (or of the genus field) above `p`
    /// over Q: 2 for inert, 1 for ramified `p`.
    pub fn residue_degree(&self, p: u64) -> u32 {
        let d =
            crate::quadarith::Discriminant::fundamental(self.disc).expect("profile discriminant");
        match d.splitting(p) {
            Splitting::Inert => 2,
            _ => 1,
        }
    }

    /// `Σ_label ord·f(𝔓|p)` for each prime, divided by the label
    /// multiplicity: the exponent of `p` in the absolute norm.
    pub fn norm_exponents(&self) -> BTreeMap<u64, Rat> {
        self.per_prime
            .iter()
            .map(|(&p, row)| {
                let s: Rat = row.iter().sum();
                let f = rat_int(self.residue_degree(p) as i64);
                (p, s * f / rat_int(self.label_multiplicity as i64))
            })
            .collect()
    }

    /// `Σ_p e_p log p` with `e_p` from [`Self::norm_exponents`].
    pub fn log_norm(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.norm_exponents()
            .iter()
            .map(|(&p, e)| e.to_f64().expect("finite exponent") * (p as f64).ln())
            .sum()
    }

    /// Entrywise sum of two profiles of the same point.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.disc, self.rho, self.level, self.backend)
            != (other.disc, other.rho, other.level, other.backend)
        {
            return Err(Error::Invalid(
                "profiles of different Heegner points".into(),
            ));
        }
        let mut out = self.clone();
        for (&p, row) in &other.per_prime {
            out.accumulate(p, row, &rat_int(1));
        }
        out.prune();
        Ok(out)
    }

    /// `{"D", "primes": [{"by_class": [{"label", "ord"}], "p"}], "rho"}` with
    /// sorted keys and `"p/q"` rationals.
    pub fn to_json(&self) -> Value {
        let primes: Vec<Value> = self
            .per_prime
            .iter()
            .map(|(p, row)| {
                let by_class: Vec<Value> = self
                    .labels
                    .iter()
                    .zip(row)
                    .map(|(l, v)| json!({"label": l, "ord": fmt_rational(v)}))
                    .collect();
                json!({"p": p, "by_class": by_class})
            })
            .collect();
        json!({"D": self.disc, "rho": self.rho, "primes": primes})
    }

    /// Parses the JSON written by [`Self::to_json`] against a class group.
    pub fn from_json(v: &Value, cg: &ClassGroup, level: u64, backend: Backend) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("profile JSON: {what}"));
        let disc = v["D"].as_i64().ok_or_else(|| bad("D"))?;
        if disc != cg.disc().value() {
            return Err(bad("D does not match the class group"));
        }
        let rho = v["rho"].as_i64().ok_or_else(|| bad("rho"))?;
        let mut out = Self::zero(cg, level, rho, backend);
        for entry in v["primes"].as_array().ok_or_else(|| bad("primes"))? {
            let p = entry["p"].as_u64().ok_or_else(|| bad("p"))?;
            let mut row = vec![Rat::zero(); out.labels.len()];
            for c in entry["by_class"]
                .as_array()
                .ok_or_else(|| bad("by_class"))?
            {
                let label = c["label"].as_str().ok_or_else(|| bad("label"))?;
                let idx = out
                    .labels
                    .iter()
                    .position(|l| l == label)
                    .ok_or_else(|| bad("unknown label"))?;
                row[idx] = parse_rational(c["ord"].as_str().ok_or_else(|| bad("ord"))?)?;
            }
            out.per_prime.insert(p, row);
        }
        out.prune();
        Ok(out)
    }
}

/// `ord_𝔓 f(z_{D,ρ}) = w_k Σ_{(d,r)} c(d, r) Σ_n Z(m, 𝔫, μ)_𝔓` for every
/// prime `𝔓` of H, grouped by rational prime.
///
/// Terms are evaluated in parallel and summed in enumeration order.
pub fn valuations(
    cg: &ClassGroup,
    level: u64,
    rho: i64,
    divisor: &HeegnerDivisor,
) -> Result<ValuationProfile> {
    let terms = enumerate_terms(cg, level, rho, divisor)?;
    let disc = cg.disc();
    let ideal = FractionalIdealRep::new(rat_int(1), level as i64, rho, disc.value())?;
    let results: Vec<_> = terms
        .par_iter()
        .map(|t| cycle_multiplicities(cg, &t.m, &ideal, &t.mu.to_kelt()))
        .collect::<Result<_>>()?;
    let backend = if disc.is_prime_discriminant() && disc.value().rem_euclid(4) == 1 {
        Backend::PrimeDisc
    } else {
        Backend::Genus
    };
    let mut profile = ValuationProfile::zero(cg, level, rho, backend);
    let wk = rat_int(disc.unit_count() as i64);
    for (t, res) in terms.iter().zip(&results) {
        if let Some(p) = res.p {
            profile.accumulate(p, &res.per_class, &(&wk * &t.c));
        }
    }
    profile.prune();
    Ok(profile)
}

/// Level-1 valuation of `Ψ(z_{D,ρ}, d) = Π_Q (j(z) − j(α_Q))^{1/w_d}` at the
/// primes `𝔣^{σ(𝔠)}` of the genus field:
/// `(w_k/4) Σ_n 2^{o(m)} ν̄_p(m) ρ(m|D|/p, [𝔠]⁻²[𝔠₀])`, `m = (Dd − n²)/(4|D|)`,
/// over `n ≡ d (mod 2)`, `n² < Dd`.
pub fn gz_dorman_level1(cg: &ClassGroup, rho: i64, d: i64) -> Result<ValuationProfile> {
    let disc = cg.disc();
    if !disc.is_odd() {
        return Err(Error::Unsupported(format!(
            "discriminant {disc} must be odd"
        )));
    }
    if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(Error::Invalid(format!(
            "{d} is not a negative discriminant"
        )));
    }
    if gcd(d, disc.value()) != 1 {
        return Err(Error::Invalid(format!("gcd({d}, {disc}) > 1")));
    }
    crate::quadarith::check_heegner_data(cg, 1, rho)?;
    let dd = d as i128 * disc.value() as i128;
    let dabs = disc.abs() as i128;
    let mut setups: BTreeMap<u64, CycleSetup> = BTreeMap::new();
    let mut profile = ValuationProfile::zero(cg, 1, rho, Backend::Genus);
    let weight = Rat::new((disc.unit_count() as i64).into(), 4.into());
    let bound = crate::arith::isqrt(dd as u128) as i128;
    let start = -bound + (d as i128 - (-bound)).rem_euclid(2);
    for n in (start..=bound).step_by(2) {
        if n * n >= dd {
            continue;
        }
        let m = Rat::new((dd - n * n).into(), (4 * dabs).into());
        let diff = diff_set(&m, &rat_int(1), disc)?;
        let Some(p) = diff.single() else { continue };
        if let std::collections::btree_map::Entry::Vacant(e) = setups.entry(p) {
            e.insert(CycleSetup::new(cg, p)?);
        }
        let setup = &setups[&p];
        let nu = nu_p(&m, p, disc)?;
        let two_o = rat_int(1i64 << o_m(&m, disc));
        let counts = rho_all(cg, &Rat::new((dd - n * n).into(), (4 * p as i128).into()));
        let row: Vec<Rat> = (0..cg.h())
            .map(|c| {
                let target = cg.mul(cg.inv(cg.mul(c, c)), setup.c0_class);
                &two_o * &nu * rat_int(counts[target] as i64)
            })
            .collect();
        profile.accumulate(p, &row, &weight);
    }
    profile.prune();
    Ok(profile)
}
