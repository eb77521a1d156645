//! End-to-end verification: exact valuations, conjugate Heegner values,
//! the class polynomial and the norm cross-check for one Heegner point.

use num_traits::{One, Signed};
use serde_json::{json, Value};

use crate::analytic::{
    class_polynomial_verified, conjugate_values, conjugation_fixed_classes, heegner_point,
    norm_crosscheck, precision_policy, BorcherdsInput, ClassPolynomial, ConjugateValue, Model,
    NormCheck, PrecisionContext,
};
use crate::cmval::{valuations, HeegnerDivisor, ValuationProfile};
use crate::error::{Error, Result};
use crate::quadarith::ClassGroup;

#[derive(Clone, Debug)]
pub struct VerifyRequest {
    pub level: u64,
    pub rho: i64,
    pub divisor: HeegnerDivisor,
    pub model: Model,
    /// Lower bound for the working precision; the policy may raise it.
    pub ctx: PrecisionContext,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub profile: ValuationProfile,
    pub model: &'static str,
    pub values: Vec<ConjugateValue>,
    pub polynomial: ClassPolynomial,
    pub norm: NormCheck,
    pub fixed_labels: Vec<String>,
    pub checks: Vec<Check>,
    /// Zero profile and constant term `±1`.
    pub unit: bool,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// The conjugates whose balls meet the real axis.
    pub fn real_values(&self) -> Vec<&ConjugateValue> {
        self.values
            .iter()
            .filter(|v| {
                let im = v.value.imag().to_f64().abs();
                im <= v.value.rad()
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let digits = 30;
        let values: Vec<Value> = self
            .values
            .iter()
            .map(|v| {
                let (re, im) = v.value.to_decimal(digits);
                json!({
                    "label": v.label,
                    "form": v.form.label(),
                    "re": re,
                    "im": im,
                    "radius": format!("{:e}", v.value.rad()),
                })
            })
            .collect();
        json!({
            "D": self.profile.disc,
            "N": self.profile.level,
            "rho": self.profile.rho,
            "model": self.model,
            "profile": self.profile.to_json(),
            "values": values,
            "polynomial": {
                "coefficients": self.polynomial.poly.to_json(),
                "display": self.polynomial.poly.to_string(),
                "max_residual": format!("{:e}", self.polynomial.max_residual),
                "prec_bits": self.polynomial.prec_bits,
            },
            "norm_check": self.norm.to_json(),
            "conjugation_fixed": self.fixed_labels,
            "checks": self.checks.iter().map(|c| json!({"name": c.name, "pass": c.pass, "detail": c.detail})).collect::<Vec<_>>(),
            "unit": self.unit,
            "pass": self.passed(),
        })
    }
}

/// Runs the exact engine and the analytic engine on the same Heegner point
/// and compares the embedding-invariant data.
///
/// An empty divisor has the constant function 1 as its Borcherds product,
/// which replaces the requested model.
pub fn verify(cg: &ClassGroup, req: &VerifyRequest) -> Result<VerifyReport> {
    if req.model.level() != req.level {
        return Err(Error::Invalid(format!(
            "model {} has level {} but the request has level {}",
            req.model.name(),
            req.model.level(),
            req.level
        )));
    }
    let profile = valuations(cg, req.level, req.rho, &req.divisor)?;
    let model = if req.divisor.is_empty() {
        Model::Borcherds(BorcherdsInput::trivial(req.level))
    } else {
        req.model.clone()
    };
    let eval = |ctx: &PrecisionContext| -> Result<Vec<_>> {
        Ok(conjugate_values(&model, cg, req.rho, ctx)?
            .into_iter()
            .map(|v| v.value)
            .collect())
    };
    let rough = PrecisionContext::new(64)?.with_max_terms(req.ctx.max_terms());
    let magnitudes: Vec<f64> = eval(&rough)?.iter().map(|v| v.abs_upper()).collect();
    let policy = precision_policy(cg.h(), &magnitudes)?.with_max_terms(req.ctx.max_terms());
    let start = if policy.prec_bits() > req.ctx.prec_bits() {
        policy
    } else {
        req.ctx
    };
    let polynomial = class_polynomial_verified(eval, start)?;
    let final_ctx =
        PrecisionContext::new(polynomial.prec_bits)?.with_max_terms(req.ctx.max_terms());
    let values = conjugate_values(&model, cg, req.rho, &final_ctx)?;
    let norm = norm_crosscheck(&profile, &polynomial.poly)?;

    let fixed = conjugation_fixed_classes(cg, req.level, req.rho)?;
    let mut checks = vec![
        Check {
            name: "class_polynomial",
            pass: true,
            detail: format!(
                "{} (residual {:e})",
                polynomial.poly, polynomial.max_residual
            ),
        },
        Check {
            name: "norm",
            pass: norm.pass,
            detail: format!(
                "algebraic {} vs analytic {}",
                norm.algebraic_norm, norm.analytic_norm
            ),
        },
    ];
    for &c in &fixed {
        let v = values
            .iter()
            .find(|v| v.class == c)
            .expect("every class has a value");
        let real = v.value.imag().to_f64().abs() <= v.value.rad();
        checks.push(Check {
            name: "conjugation_fixed_real",
            pass: real,
            detail: format!(
                "value at {} has imaginary part {:e}",
                v.label,
                v.value.imag().to_f64()
            ),
        });
    }
    // Only h points are evaluated; the other h conjugates are f(−z̄) = conj f(z),
    // which needs real Fourier coefficients.
    let probe = values.last().expect("h ≥ 1");
    let mirrored = model.eval(
        &heegner_point(&probe.form.opposite(), final_ctx.prec_bits()),
        &final_ctx,
    )?;
    checks.push(Check {
        name: "real_coefficients",
        pass: mirrored.overlaps(&probe.value.conj()),
        detail: format!("f(-conj z) = conj f(z) at {}", probe.label),
    });
    let unit = profile.is_zero() && polynomial.poly.constant_term().abs().is_one();
    Ok(VerifyReport {
        profile,
        model: model.name(),
        values,
        polynomial,
        norm,
        fixed_labels: fixed.iter().map(|&c| cg.label(c)).collect(),
        checks,
        unit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::quadarith::Discriminant;

    fn div47() -> HeegnerDivisor {
        HeegnerDivisor::new(47)
            .unwrap()
            .with_term(-11, 41, rat(1, 2))
            .unwrap()
            .with_term(-11, -41, rat(1, 2))
            .unwrap()
    }

    fn run(d: i64, rho: i64, divisor: HeegnerDivisor) -> VerifyReport {
        let cg = ClassGroup::new(Discriminant::fundamental(d).unwrap()).unwrap();
        let req = VerifyRequest {
            level: 47,
            rho,
            divisor,
            model: Model::Hauptmodul47,
            ctx: PrecisionContext::new(128).unwrap(),
        };
        verify(&cg, &req).unwrap()
    }

    #[test]
    fn case_107() {
        let r = run(-107, 9, div47());
        assert!(r.passed(), "{:#}", r.to_json());
        assert_eq!(r.polynomial.poly.to_string(), "x^3 - 3x^2 + 2x - 4");
        assert_eq!(r.norm.analytic_norm, 16.into());
        assert_eq!(r.fixed_labels, vec!["[1,1,27]".to_string()]);
        assert!(!r.unit);
    }

    #[test]
    fn unit_23_and_empty_divisor() {
        let r = run(-23, 27, div47());
        assert!(r.passed() && r.unit);
        assert_eq!(r.polynomial.poly.to_string(), "x^3 - x^2 + 2x - 1");
        let e = run(-23, 27, HeegnerDivisor::new(47).unwrap());
        assert!(e.passed() && e.unit);
        assert_eq!(e.model, "borcherds-table");
        assert!(e.values.iter().all(|v| v
            .value
            .overlaps(&crate::analytic::BigComplex::from_int(64, 1))));
    }
}
