use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rug::{Float, Integer};
use serde_json::{json, Value};

use crate::arith::{fmt_rational, parse_rational, Rat};
use crate::cmval::{borcherds_exponents, borcherds_series, BorcherdsExponents, ExactQSeries};
use crate::error::{Error, Result};

use super::ball::{exp_bound, BigComplex, PrecisionContext};
use super::modular::{imag_lower, ln_q_upper};

/// `e(ρ_f z) Π_{n≥1} (1 − e(nz))^{c(n)}` with a tabulated exponent function.
///
/// Exponents past the table are assumed to obey `|c(n)| ≤ C e^{bn}`. With a
/// principal part of order `q^{−m₀}` the natural rate is `b = 2π√(m₀/N)`, so
/// the product converges for `Im z > √(m₀/N)`. `C` is taken as twice the
/// largest `|c(n)| e^{−bn}` seen in the table.
#[derive(Clone, Debug, PartialEq)]
pub struct BorcherdsInput {
    pub level: u64,
    pub weyl: Rat,
    pub exponents: Vec<BigInt>,
    pub principal_order: Rat,
    growth: f64,
    growth_const: f64,
}

impl BorcherdsInput {
    pub fn new(
        level: u64,
        weyl: Rat,
        exponents: Vec<BigInt>,
        principal_order: Rat,
    ) -> Result<Self> {
        if level == 0 {
            return Err(Error::Invalid("level must be positive".into()));
        }
        if principal_order.is_negative() {
            return Err(Error::Invalid("principal order must be nonnegative".into()));
        }
        let m0 = principal_order.to_f64().unwrap_or(f64::INFINITY);
        let growth = 2.0 * PI * (m0 / level as f64).sqrt();
        let mut c = 0f64;
        for (i, e) in exponents.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            let ln_abs = big_ln_abs(e);
            c = c.max(ln_abs - growth * (i + 1) as f64);
        }
        let growth_const = if exponents.iter().all(Zero::is_zero) {
            0.0
        } else {
            2.0 * c.exp()
        };
        Ok(Self {
            level,
            weyl,
            exponents,
            principal_order,
            growth,
            growth_const,
        })
    }

    /// The constant function 1.
    pub fn trivial(level: u64) -> Self {
        Self::new(level, Rat::zero(), Vec::new(), Rat::zero()).expect("trivial input")
    }

    /// Exponents read off a normalized exact expansion `q^v + …`.
    pub fn from_series(series: &ExactQSeries, level: u64, principal_order: Rat) -> Result<Self> {
        let b = borcherds_exponents(series)?;
        if !b.lead.is_one() {
            return Err(Error::Invalid(format!(
                "leading coefficient {} is not 1",
                b.lead
            )));
        }
        Self::new(
            level,
            Rat::from_integer(b.weyl.into()),
            b.exponents,
            principal_order,
        )
    }

    /// Product expansion through the length of the table.
    pub fn to_series(&self) -> Result<ExactQSeries> {
        if !self.weyl.is_integer() {
            return Err(Error::Unsupported(
                "exact expansion needs an integral Weyl vector".into(),
            ));
        }
        Ok(borcherds_series(&BorcherdsExponents {
            weyl: self
                .weyl
                .to_integer()
                .to_i64()
                .ok_or_else(|| Error::Overflow("Weyl vector".into()))?,
            lead: Rat::one(),
            exponents: self.exponents.clone(),
        }))
    }

    /// Products converge for `Im z` above this bound.
    pub fn convergence_bound(&self) -> f64 {
        self.growth / (2.0 * PI)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "N": self.level,
            "weyl": fmt_rational(&self.weyl),
            "principal_order": fmt_rational(&self.principal_order),
            "exponents": self.exponents.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("Borcherds table: {what}"));
        let level = v["N"].as_u64().ok_or_else(|| bad("N"))?;
        let weyl = parse_rational(v["weyl"].as_str().ok_or_else(|| bad("weyl"))?)?;
        let m0 = parse_rational(
            v["principal_order"]
                .as_str()
                .ok_or_else(|| bad("principal_order"))?,
        )?;
        let exps = v["exponents"]
            .as_array()
            .ok_or_else(|| bad("exponents"))?
            .iter()
            .map(|e| match e {
                Value::String(s) => s.parse::<BigInt>().map_err(|_| bad("exponent")),
                Value::Number(n) => n.to_string().parse::<BigInt>().map_err(|_| bad("exponent")),
                _ => Err(bad("exponent")),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(level, weyl, exps, m0)
    }
}

fn big_ln_abs(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        x.abs().to_f64().expect("finite").ln()
    } else {
        let shift = bits - 900;
        (x.abs() >> shift).to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
    }
}

fn to_rug(x: &BigInt) -> Integer {
    Integer::from_str_radix(&x.to_str_radix(16), 16).expect("hex digits")
}

/// Evaluates the product with a rigorous bound under the growth hypothesis.
pub fn borcherds_eval(
    input: &BorcherdsInput,
    z: &BigComplex,
    ctx: &PrecisionContext,
) -> Result<BigComplex> {
    let prec = ctx.prec_bits();
    let z = z.to_prec(prec);
    let y = imag_lower(&z)?;
    let lq = ln_q_upper(y);
    let rate = input.growth + lq;
    if rate >= 0.0 {
        return Err(Error::Domain(format!(
            "Im(z) = {y} is below the convergence bound {}; move z by Γ0(N) or use a quotient model",
            input.convergence_bound()
        )));
    }
    // Σ_{n>K} |c(n) log(1 − qⁿ)| ≤ C e^{rate·(K+1)}/((1 − e^{rate})(1 − |q|)).
    let ln_tail = |k: usize| {
        input.growth_const.ln() + rate * (k + 1) as f64
            - (-rate.exp()).ln_1p()
            - (-lq.exp()).ln_1p()
    };
    let tol = ctx.ln_tail_tol();
    let mut k = 0usize;
    while ln_tail(k) > tol {
        k += 1;
        if k > input.exponents.len() {
            return Err(Error::Precision(format!(
                "exponent table of length {} is too short for Im(z) = {y}",
                input.exponents.len()
            )));
        }
    }
    let q = z.e();
    let mut qn = BigComplex::from_int(prec, 1);
    let mut log = BigComplex::from_int(prec, 0);
    for c in input.exponents.iter().take(k) {
        qn = qn.mul(&q);
        if c.is_zero() {
            continue;
        }
        // c(n) amplifies the absolute rounding error of 1 − qⁿ; carry its
        // bit length as guard bits.
        let hi = prec + c.bits() as u32 + 16;
        let one_hi = BigComplex::from_int(hi, 1);
        let term = one_hi.sub(&qn.to_prec(hi)).ln()?;
        let term = term
            .mul_float(&Float::with_val(hi, to_rug(c)))
            .to_prec(prec);
        log = log.add(&term);
    }
    let log = log.with_extra_radius(if input.growth_const == 0.0 {
        0.0
    } else {
        exp_bound(ln_tail(k))
    });
    let numer = input
        .weyl
        .numer()
        .to_i64()
        .ok_or_else(|| Error::Overflow("Weyl vector".into()))?;
    let denom = input
        .weyl
        .denom()
        .to_i64()
        .ok_or_else(|| Error::Overflow("Weyl vector".into()))?;
    let lead = z.mul_int(numer).div_int(denom).e();
    Ok(lead.mul(&log.exp()))
}
