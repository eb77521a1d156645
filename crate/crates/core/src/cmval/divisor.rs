use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{fmt_rational, is_squarefree, parse_rational, Rat};
use crate::error::{Error, Result};

/// A finite rational combination `Σ c(d, r) Z(d, r)` of Heegner divisors
/// on `X₀(N)`, keyed by integer `d < 0` and `r ∈ (−N, N]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeegnerDivisor {
    level: u64,
    coeffs: BTreeMap<(i64, i64), Rat>,
}

#[derive(Serialize, Deserialize)]
struct DivisorFile {
    #[serde(rename = "N")]
    level: u64,
    coeffs: Vec<CoeffEntry>,
}

#[derive(Serialize, Deserialize)]
struct CoeffEntry {
    d: i64,
    r: i64,
    c: String,
}

impl HeegnerDivisor {
    pub fn new(level: u64) -> Result<Self> {
        if level == 0 || !is_squarefree(level) {
            return Err(Error::Invalid(format!(
                "level {level} must be positive and squarefree"
            )));
        }
        Ok(Self {
            level,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    /// `r` reduced into `(−N, N]`.
    pub fn normalize_r(&self, r: i64) -> i64 {
        let n = self.level as i64;
        let r = r.rem_euclid(2 * n);
        if r > n {
            r - 2 * n
        } else {
            r
        }
    }

    /// Adds `c·Z(d, r)`. Zero coefficients are dropped.
    pub fn add_term(&mut self, d: i64, r: i64, c: Rat) -> Result<()> {
        let n = self.level as i128;
        if d >= 0 {
            return Err(Error::Invalid(format!(
                "Heegner divisor index d = {d} must be negative"
            )));
        }
        if (d as i128 - (r as i128) * (r as i128)).rem_euclid(4 * n) != 0 {
            return Err(Error::Congruence(format!(
                "d = {d} is not congruent to r^2 = {r}^2 mod {}",
                4 * n
            )));
        }
        let key = (d, self.normalize_r(r));
        let v = self.coeffs.entry(key).or_insert_with(Rat::zero);
        *v += c;
        if v.is_zero() {
            self.coeffs.remove(&key);
        }
        Ok(())
    }

    pub fn with_term(mut self, d: i64, r: i64, c: Rat) -> Result<Self> {
        self.add_term(d, r, c)?;
        Ok(self)
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, i64, &Rat)> {
        self.coeffs.iter().map(|(&(d, r), c)| (d, r, c))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.level != other.level {
            return Err(Error::Invalid(format!(
                "cannot add divisors of levels {} and {}",
                self.level, other.level
            )));
        }
        let mut out = self.clone();
        for (d, r, c) in other.iter() {
            out.add_term(d, r, c.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, k: &Rat) -> Self {
        let mut out = Self {
            level: self.level,
            coeffs: BTreeMap::new(),
        };
        if !k.is_zero() {
            out.coeffs = self.coeffs.iter().map(|(key, c)| (*key, c * k)).collect();
        }
        out
    }

    /// Every key `(d, r)` replaced by `(d, −r)`.
    pub fn negate_r(&self) -> Self {
        let mut out = Self {
            level: self.level,
            coeffs: BTreeMap::new(),
        };
        for (d, r, c) in self.iter() {
            out.add_term(d, -r, c.clone())
                .expect("negation preserves d = r^2 mod 4N");
        }
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: DivisorFile = serde_json::from_str(text)?;
        let mut out = Self::new(file.level)?;
        for e in file.coeffs {
            out.add_term(e.d, e.r, parse_rational(&e.c)?)?;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        let file = DivisorFile {
            level: self.level,
            coeffs: self
                .iter()
                .map(|(d, r, c)| CoeffEntry {
                    d,
                    r,
                    c: fmt_rational(c),
                })
                .collect(),
        };
        serde_json::to_string(&file).expect("divisor serializes")
    }
}
