//! Eta, theta, `E₄`, `j` and the level-47 Hauptmodul evaluated by direct
//! q-series with explicit truncation tails.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadarith::BinaryQF;

use super::ball::{exp_bound, BigComplex, PrecisionContext};

/// Points with smaller imaginary part are rejected.
pub const MIN_IMAG: f64 = 1e-3;

/// Lower bound for `Im z` over the ball; errors below [`MIN_IMAG`].
pub(crate) fn imag_lower(z: &BigComplex) -> Result<f64> {
    let y = z.imag().to_f64() * (1.0 - 4.0 * f64::EPSILON) - z.rad();
    if y.is_nan() || y < MIN_IMAG {
        return Err(Error::Domain(format!(
            "Im(z) = {} is below {MIN_IMAG}",
            z.imag().to_f64()
        )));
    }
    Ok(y)
}

/// `ln` of an upper bound for `|e(z)|` given `Im z ≥ y`.
pub(crate) fn ln_q_upper(y: f64) -> f64 {
    -2.0 * PI * y * (1.0 - 1e-12)
}

fn terms_for(ctx: &PrecisionContext, ln_tail: impl Fn(usize) -> f64) -> Result<usize> {
    let tol = ctx.ln_tail_tol();
    let mut t = 1usize;
    while ln_tail(t) > tol {
        t = (t * 5 / 4).max(t + 1);
        if t > ctx.max_terms() {
            return Err(Error::Precision(format!(
                "q-series needs more than {} terms; raise the truncation limit",
                ctx.max_terms()
            )));
        }
    }
    Ok(t)
}

/// `Σ_{n<T} c_n qⁿ` by Horner's rule.
pub(crate) fn horner(q: &BigComplex, coeffs: &[i64]) -> BigComplex {
    let prec = q.prec();
    let mut acc = BigComplex::from_int(prec, 0);
    for &c in coeffs.iter().rev() {
        acc = acc.mul(q).add(&BigComplex::from_int(prec, c));
    }
    acc
}

/// Dedekind eta `q^{1/24} Π (1 − qⁿ)` via the pentagonal number series.
pub fn eta(z: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    let z = z.to_prec(ctx.prec_bits());
    let y = imag_lower(&z)?;
    let lq = ln_q_upper(y);
    // Remaining exponents are distinct integers ≥ T.
    let t = terms_for(ctx, |t| t as f64 * lq - (-lq.exp()).ln_1p())?;
    let mut coeffs = vec![0i64; t];
    for k in 0i64.. {
        let e1 = (k * (3 * k - 1) / 2) as usize;
        if e1 >= t {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        coeffs[e1] += sign;
        let e2 = (k * (3 * k + 1) / 2) as usize;
        if k > 0 && e2 < t {
            coeffs[e2] += sign;
        }
    }
    let q = z.e();
    let tail = exp_bound(t as f64 * lq - (-lq.exp()).ln_1p());
    let series = horner(&q, &coeffs).with_extra_radius(tail);
    Ok(z.div_int(24).e().mul(&series))
}

/// `θ_Q(z) = Σ_{(x,y) ∈ Z²} q^{Q(x,y)}` for a positive definite form.
pub fn theta_form(form: &BinaryQF, z: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    if form.a <= 0 || form.disc() >= 0 {
        return Err(Error::Invalid(format!(
            "theta series needs a positive definite form, got {form}"
        )));
    }
    let z = z.to_prec(ctx.prec_bits());
    let y = imag_lower(&z)?;
    let lq = ln_q_upper(y);
    let qa = lq.exp();
    let dabs = -form.disc() as f64;
    let (a, c) = (form.a as f64, form.c as f64);
    // #{Q ≤ n} ≤ K(n + 1), since Q ≥ |D|y²/(4a) and Q ≥ |D|x²/(4c).
    let k = (2.0 * (4.0 * c / dabs).sqrt() + 1.0) * (2.0 * (4.0 * a / dabs).sqrt() + 1.0);
    let ln_tail = |t: usize| {
        let t = t as f64;
        k.ln() + t * lq + ((t + 1.0) / (1.0 - qa) + qa / ((1.0 - qa) * (1.0 - qa))).ln()
    };
    let t = terms_for(ctx, ln_tail)?;
    let tt = t as i128;
    let ybound = ((4.0 * a * t as f64 / dabs).sqrt()).ceil() as i64 + 1;
    let xbound = ((4.0 * c * t as f64 / dabs).sqrt()).ceil() as i64 + 1;
    let mut coeffs = vec![0i64; t];
    for yy in -ybound..=ybound {
        for xx in -xbound..=xbound {
            let v = form.eval(xx, yy);
            if v < tt {
                coeffs[v as usize] += 1;
            }
        }
    }
    let q = z.e();
    Ok(horner(&q, &coeffs).with_extra_radius(exp_bound(ln_tail(t))))
}

/// `E₄ = 1 + 240 Σ σ₃(n) qⁿ`.
pub fn e4(z: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    let z = z.to_prec(ctx.prec_bits());
    let y = imag_lower(&z)?;
    let lq = ln_q_upper(y);
    // 240 σ₃(n) ≤ 240 ζ(3) n³ < 289 n³; the ratio of consecutive bounds is
    // at most q(1 + 1/T)³.
    let ln_tail = |t: usize| {
        let tf = t as f64;
        let ratio = lq + 3.0 * (1.0 / tf).ln_1p();
        if ratio >= 0.0 {
            return f64::INFINITY;
        }
        289f64.ln() + 3.0 * tf.ln() + tf * lq - (-ratio.exp()).ln_1p()
    };
    let t = terms_for(ctx, ln_tail)?;
    let mut sigma3 = vec![0i64; t];
    for d in 1..t {
        let d3 = (d as i64).pow(3);
        for m in (d..t).step_by(d) {
            sigma3[m] += d3;
        }
    }
    let coeffs: Vec<i64> = (0..t)
        .map(|n| if n == 0 { 1 } else { 240 * sigma3[n] })
        .collect();
    let q = z.e();
    Ok(horner(&q, &coeffs).with_extra_radius(exp_bound(ln_tail(t))))
}

/// `j = E₄³/η²⁴`.
pub fn j_invariant(z: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    let e = e4(z, ctx)?;
    let d = eta(z, ctx)?.pow_u(24);
    e.pow_u(3).div(&d)
}

/// `Ψ = (θ_{[1,1,12]} − θ_{[2,−1,6]})/(2η(z)η(47z)) + 1`, the Hauptmodul of
/// `X₀⁺(47)` with expansion `q⁻¹ + 1 + q + 2q² + …`.
pub fn hauptmodul47(z: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    let z = z.to_prec(ctx.prec_bits());
    let t1 = theta_form(&BinaryQF::new(1, 1, 12), &z, ctx)?;
    let t2 = theta_form(&BinaryQF::new(2, -1, 6), &z, ctx)?;
    let den = eta(&z, ctx)?.mul(&eta(&z.mul_int(47), ctx)?).mul_int(2);
    let one = BigComplex::from_int(ctx.prec_bits(), 1);
    Ok(t1
        .sub(&t2)
        .div(&den)
        .map_err(|_| Error::Precision("eta product vanishes within the error radius".into()))?
        .add(&one))
}
