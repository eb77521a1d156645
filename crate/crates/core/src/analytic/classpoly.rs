use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use rug::Float;
use serde_json::{json, Value};

use crate::arith::{big, fmt_rational, ord_int};
use crate::cmval::ValuationProfile;
use crate::error::{Error, Result};
use crate::quadarith::{heegner_reps_with, BinaryQF, ClassGroup, ClassIndex};

use super::ball::{BigComplex, PrecisionContext};
use super::borcherds::{borcherds_eval, BorcherdsInput};
use super::modular::{hauptmodul47, j_invariant};

/// A modular function with a known evaluator.
#[derive(Clone, Debug)]
pub enum Model {
    /// The Hauptmodul of `X₀⁺(47)`.
    Hauptmodul47,
    /// Klein's `j` on `X₀(1)`.
    J,
    Borcherds(BorcherdsInput),
}

impl Model {
    pub fn level(&self) -> u64 {
        match self {
            Model::Hauptmodul47 => 47,
            Model::J => 1,
            Model::Borcherds(b) => b.level,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Model::Hauptmodul47 => "hauptmodul47",
            Model::J => "j",
            Model::Borcherds(_) => "borcherds-table",
        }
    }

    pub fn eval(&self, z: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
        match self {
            Model::Hauptmodul47 => hauptmodul47(z, ctx),
            Model::J => j_invariant(z, ctx),
            Model::Borcherds(b) => borcherds_eval(b, z, ctx),
        }
    }
}

/// `f(α_Q)` at one Heegner representative.
#[derive(Clone, Debug)]
pub struct ConjugateValue {
    pub class: ClassIndex,
    pub label: String,
    pub form: BinaryQF,
    pub value: BigComplex,
}

/// The root `α_Q = (−b + √D)/(2a)` of `Q = [a, b, c]` in the upper half-plane.
pub fn heegner_point(form: &BinaryQF, prec: u32) -> BigComplex {
    BigComplex::quadratic(prec, -form.b, 1, form.disc(), 2 * form.a)
}

/// Values of `model` at the `h` Heegner representatives of `(D, N, ρ)`, in
/// class order. Points are evaluated in parallel.
pub fn conjugate_values(
    model: &Model,
    cg: &ClassGroup,
    rho: i64,
    ctx: &PrecisionContext,
) -> Result<Vec<ConjugateValue>> {
    conjugate_values_with(model, cg, rho, ctx, 0)
}

/// [`conjugate_values`] over an alternative transversal.
pub fn conjugate_values_with(
    model: &Model,
    cg: &ClassGroup,
    rho: i64,
    ctx: &PrecisionContext,
    variant: usize,
) -> Result<Vec<ConjugateValue>> {
    let reps = heegner_reps_with(cg, model.level(), rho, variant)?;
    reps.par_iter()
        .map(|r| {
            let z = heegner_point(&r.form, ctx.prec_bits());
            Ok(ConjugateValue {
                class: r.class,
                label: cg.label(r.class),
                form: r.form,
                value: model.eval(&z, ctx)?,
            })
        })
        .collect()
}

/// Classes whose Heegner value is real for a function on `X₀⁺(N)` with real
/// coefficients: `c ↦ c⁻¹·[Q₀]` is complex conjugation followed by the
/// Fricke involution, where `Q₀ = [N, ρ, (ρ² − D)/4N]`. Its fixed points are
/// the square roots of `[Q₀]`; there is exactly one when `h` is odd.
pub fn conjugation_fixed_classes(cg: &ClassGroup, level: u64, rho: i64) -> Result<Vec<ClassIndex>> {
    crate::quadarith::check_heegner_data(cg, level, rho)?;
    let q0 = BinaryQF::from_abd(level as i64, rho, cg.disc().value())?;
    Ok(cg.square_roots(cg.class_of(&q0)?))
}

/// A polynomial with integer coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly(pub Vec<BigInt>);

impl IntPoly {
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self(coeffs.iter().map(|&c| big(c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn constant_term(&self) -> &BigInt {
        &self.0[0]
    }

    /// Coefficients as decimal strings, highest degree first.
    pub fn to_json(&self) -> Value {
        json!(self
            .0
            .iter()
            .rev()
            .map(|c| c.to_string())
            .collect::<Vec<_>>())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            let show = !a.is_one() || i == 0;
            if show {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A class polynomial recovered by rounding, with its certificate.
#[derive(Clone, Debug)]
pub struct ClassPolynomial {
    pub poly: IntPoly,
    /// Largest distance from a coefficient ball to its rounded integer.
    pub max_residual: f64,
    pub prec_bits: u32,
}

/// Largest rounding residual accepted.
pub const MAX_RESIDUAL: f64 = 1e-6;

/// `Π (x − v)` rounded to integers. Each coefficient ball must have radius
/// below 1/4 and lie within [`MAX_RESIDUAL`] of its integer; otherwise the
/// precision is reported as insufficient.
pub fn class_polynomial(values: &[BigComplex]) -> Result<ClassPolynomial> {
    if values.is_empty() {
        return Err(Error::Invalid("no values".into()));
    }
    let prec = values.iter().map(|v| v.prec()).max().unwrap_or(64);
    let mut coeffs = vec![BigComplex::from_int(prec, 1)];
    for v in values {
        let mut next = vec![BigComplex::from_int(prec, 0); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c);
            next[i] = next[i].sub(&c.mul(v));
        }
        coeffs = next;
    }
    let mut out = Vec::with_capacity(coeffs.len());
    let mut worst = 0f64;
    for (i, c) in coeffs.iter().enumerate() {
        if c.rad() >= 0.25 {
            return Err(Error::Precision(format!(
                "coefficient of x^{i} has radius {:e}",
                c.rad()
            )));
        }
        let (n, d) = c.nearest_integer();
        if d > MAX_RESIDUAL {
            return Err(Error::Precision(format!(
                "coefficient of x^{i} is {:e} away from an integer; rerun with a larger --prec-bits",
                d
            )));
        }
        worst = worst.max(d);
        out.push(n);
    }
    Ok(ClassPolynomial {
        poly: IntPoly(out),
        max_residual: worst,
        prec_bits: prec,
    })
}

/// Starting precision: `20 + 10h + size` digits, where `size` estimates the
/// decimal length of the largest elementary symmetric function.
pub fn precision_policy(h: usize, magnitudes: &[f64]) -> Result<PrecisionContext> {
    let size: f64 = magnitudes.iter().map(|m| m.max(1.0).log10()).sum();
    PrecisionContext::for_digits(20 + 10 * h as u32 + size.ceil() as u32)
}

/// Runs `eval` at `start`, doubling the precision on failure up to three
/// times, then re-derives the polynomial at twice the successful precision
/// and requires agreement.
pub fn class_polynomial_verified(
    eval: impl Fn(&PrecisionContext) -> Result<Vec<BigComplex>>,
    start: PrecisionContext,
) -> Result<ClassPolynomial> {
    let mut ctx = start;
    let mut last = None;
    for _ in 0..=3 {
        let attempt = eval(&ctx).and_then(|v| class_polynomial(&v)).and_then(|p| {
            let again = class_polynomial(&eval(&ctx.doubled()?)?)?;
            if again.poly != p.poly {
                return Err(Error::Precision(format!(
                    "polynomials at {} and {} bits differ",
                    ctx.prec_bits(),
                    again.prec_bits
                )));
            }
            Ok(p)
        });
        match attempt {
            Ok(p) => return Ok(p),
            Err(Error::Precision(msg)) => {
                last = Some(msg);
                ctx = ctx.doubled()?;
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::Precision(format!(
        "class polynomial not certified after 3 retries ({})",
        last.unwrap_or_default()
    )))
}

/// Per-prime comparison between the valuation profile and the constant term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeNorm {
    pub p: u64,
    /// `Σ_label ord·f(𝔓|p)` from the exact engine.
    pub algebraic: i64,
    /// `ord_p |c₀|^{2h/deg}` from the polynomial.
    pub analytic: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormCheck {
    pub primes: Vec<PrimeNorm>,
    pub algebraic_norm: BigInt,
    pub analytic_norm: BigInt,
    /// Part of `|c₀|^{2h/deg}` not explained by any prime of the profile.
    pub cofactor: BigInt,
    pub pass: bool,
}

impl NormCheck {
    pub fn to_json(&self) -> Value {
        json!({
            "pass": self.pass,
            "algebraic_norm": self.algebraic_norm.to_string(),
            "analytic_norm": self.analytic_norm.to_string(),
            "cofactor": self.cofactor.to_string(),
            "primes": self.primes.iter().map(|p| json!({"p": p.p, "algebraic": p.algebraic, "analytic": p.analytic})).collect::<Vec<_>>(),
        })
    }
}

/// Compares `Π_p p^{Σ ord·f(𝔓|p)}` with `|N_{H/Q}(f(z))| = |c₀|^{2h/deg}`
/// as exact integers.
pub fn norm_crosscheck(profile: &ValuationProfile, poly: &IntPoly) -> Result<NormCheck> {
    let h = profile.labels.len();
    let deg = poly.degree();
    if deg == 0 || !(2 * h).is_multiple_of(deg) {
        return Err(Error::Invalid(format!(
            "degree {deg} does not divide [H:Q] = {}",
            2 * h
        )));
    }
    let c0 = poly.constant_term().abs();
    if c0.is_zero() {
        return Err(Error::Invalid(
            "constant term 0: the CM value vanishes".into(),
        ));
    }
    let mult = (2 * h / deg) as u32;
    let analytic_norm = c0.pow(mult);
    let mut exps: BTreeMap<u64, i64> = BTreeMap::new();
    for (p, e) in profile.norm_exponents() {
        if !e.is_integer() {
            return Err(Error::Invalid(format!(
                "exponent {} at p = {p} is not integral",
                fmt_rational(&e)
            )));
        }
        exps.insert(
            p,
            e.to_integer()
                .to_i64()
                .ok_or_else(|| Error::Overflow("norm exponent".into()))?,
        );
    }
    let mut rest = analytic_norm.clone();
    let mut primes = Vec::new();
    let mut algebraic_norm = BigInt::one();
    let mut all_primes: Vec<u64> = exps.keys().copied().collect();
    // Primes of the constant term that the profile misses.
    if let Some(small) = c0.to_u64() {
        all_primes.extend(crate::arith::prime_divisors(small));
    }
    all_primes.sort_unstable();
    all_primes.dedup();
    let mut pass = true;
    for p in all_primes {
        let alg = exps.get(&p).copied().unwrap_or(0);
        let ana = ord_int(&analytic_norm, p) as i64;
        rest /= big(p as i64).pow(ana as u32);
        if alg < 0 {
            pass = false;
        } else {
            algebraic_norm *= big(p as i64).pow(alg as u32);
        }
        pass &= alg == ana;
        primes.push(PrimeNorm {
            p,
            algebraic: alg,
            analytic: ana,
        });
    }
    pass &= rest.is_one();
    Ok(NormCheck {
        primes,
        algebraic_norm,
        analytic_norm,
        cofactor: rest,
        pass,
    })
}

/// `log|N_{H/Q} Ψ(z_D, d)| = (4/w_d) Σ_{Q ∈ Cl_D} Σ_{Q′ ∈ Cl_d} log|j(α_Q) − j(α_{Q′})|`
/// with an error bound.
pub fn gz_log_norm(
    cg_big: &ClassGroup,
    cg_small: &ClassGroup,
    ctx: &PrecisionContext,
) -> Result<(Float, f64)> {
    let prec = ctx.prec_bits();
    let jd: Vec<BigComplex> = cg_small
        .forms()
        .par_iter()
        .map(|f| j_invariant(&heegner_point(f, prec), ctx))
        .collect::<Result<_>>()?;
    let parts: Vec<(Float, f64)> = cg_big
        .forms()
        .par_iter()
        .map(|f| {
            let jz = j_invariant(&heegner_point(f, prec), ctx)?;
            let mut s = Float::new(prec);
            let mut e = 0f64;
            for v in &jd {
                let (l, err) = jz.sub(v).ln_abs()?;
                s += l;
                e += err;
            }
            Ok((s, e))
        })
        .collect::<Result<_>>()?;
    let wd = cg_small.disc().unit_count() as i64;
    let mut total = Float::new(prec);
    let mut err = 0f64;
    for (s, e) in parts {
        total += s;
        err += e;
    }
    let total = total * 4 / wd;
    Ok((total, super::ball::up(err * 4.0 / wd as f64 + 1e-300)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadarith::Discriminant;

    fn cg(d: i64) -> ClassGroup {
        ClassGroup::new(Discriminant::fundamental(d).unwrap()).unwrap()
    }

    #[test]
    fn poly_display() {
        assert_eq!(
            IntPoly::from_i64(&[-1, 2, -1, 1]).to_string(),
            "x^3 - x^2 + 2x - 1"
        );
        assert_eq!(
            IntPoly::from_i64(&[-4, 2, -3, 1]).to_string(),
            "x^3 - 3x^2 + 2x - 4"
        );
        assert_eq!(IntPoly::from_i64(&[-1, 1]).to_string(), "x - 1");
    }

    #[test]
    fn single_value() {
        let v = BigComplex::from_int(128, 1).with_extra_radius(1e-30);
        let p = class_polynomial(&[v]).unwrap();
        assert_eq!(p.poly, IntPoly::from_i64(&[-1, 1]));
        let bad = BigComplex::from_f64(128, 0.5, 0.0);
        assert!(matches!(class_polynomial(&[bad]), Err(Error::Precision(_))));
    }

    #[test]
    fn orbit_23() {
        let ctx = PrecisionContext::new(256).unwrap();
        let vals = conjugate_values(&Model::Hauptmodul47, &cg(-23), 27, &ctx).unwrap();
        let p =
            class_polynomial(&vals.iter().map(|v| v.value.clone()).collect::<Vec<_>>()).unwrap();
        assert_eq!(p.poly, IntPoly::from_i64(&[-1, 2, -1, 1]));
        // [47, 27, 4] reduces to [2, −1, 3], whose square root is [2, 1, 3].
        let fixed = conjugation_fixed_classes(&cg(-23), 47, 27).unwrap();
        assert_eq!(fixed.len(), 1);
        assert_eq!(cg(-23).label(fixed[0]), "[2,1,3]");
        for v in &vals {
            assert_eq!(
                v.value.imag_abs_upper() < 1e-20,
                v.class == fixed[0],
                "{}",
                v.label
            );
        }
    }

    #[test]
    fn level_one_j() {
        // h(−7) = 1 and j((1 + √−7)/2) = −3375.
        let ctx = PrecisionContext::new(128).unwrap();
        let vals = conjugate_values(&Model::J, &cg(-7), 1, &ctx).unwrap();
        let p = class_polynomial(&[vals[0].value.clone()]).unwrap();
        assert_eq!(p.poly, IntPoly::from_i64(&[3375, 1]));
    }

    #[test]
    fn gz_norm_small() {
        // Ψ(z_{−7}, −3) = j^{1/3} = −15 has norm 225.
        let ctx = PrecisionContext::new(128).unwrap();
        let (l, e) = gz_log_norm(&cg(-7), &cg(-3), &ctx).unwrap();
        assert!((l.to_f64() - 225f64.ln()).abs() < 1e-12);
        assert!(e < 1e-20);
    }
}
