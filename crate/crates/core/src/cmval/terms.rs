use crate::arith::{isqrt, Rat};
use crate::error::{Error, Result};
use crate::quadarith::{check_heegner_data, ClassGroup};
use crate::speccycles::MuElement;

/// One summand `c(d, r)·Z(m, 𝔫, μ)` of the valuation formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub d: i64,
    pub r: i64,
    pub n: i64,
    pub m: Rat,
    pub mu: MuElement,
    pub c: Rat,
}

/// All `(d, r, n)` with `c(d, r) ≠ 0`, `n ≡ ρr (mod 2N)` and `n² < dD`, in
/// divisor order then increasing `n`. `m = (dD − n²)/(4N|D|)`.
///
/// `n² = dD` means the divisor meets the Heegner point and is an error.
pub fn enumerate_terms(
    cg: &ClassGroup,
    level: u64,
    rho: i64,
    divisor: &super::HeegnerDivisor,
) -> Result<Vec<Term>> {
    let disc = cg.disc();
    if !disc.is_odd() {
        return Err(Error::Unsupported(format!(
            "discriminant {disc} must be odd"
        )));
    }
    if divisor.level() != level {
        return Err(Error::Invalid(format!(
            "divisor has level {} but the Heegner point has level {level}",
            divisor.level()
        )));
    }
    check_heegner_data(cg, level, rho)?;
    let big_d = disc.value() as i128;
    let modulus = 2 * level as i128;
    let mut out = Vec::new();
    for (d, r, c) in divisor.iter() {
        let dd = d as i128 * big_d;
        let bound = isqrt(dd as u128) as i128;
        let target = (rho as i128 * r as i128).rem_euclid(modulus);
        // Smallest n ≥ −bound in the residue class.
        let mut n = -bound + (target - (-bound)).rem_euclid(modulus);
        while n <= bound {
            if n * n == dd {
                return Err(Error::ImproperIntersection { d, r, n: n as i64 });
            }
            let m = Rat::new((dd - n * n).into(), (4 * level as i128 * -big_d).into());
            out.push(Term {
                d,
                r,
                n: n as i64,
                m,
                mu: MuElement::new(n as i64, r, disc, level),
                c: c.clone(),
            });
            n += modulus;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::cmval::HeegnerDivisor;
    use crate::quadarith::Discriminant;

    fn cg(d: i64) -> ClassGroup {
        ClassGroup::new(Discriminant::fundamental(d).unwrap()).unwrap()
    }

    fn div47() -> HeegnerDivisor {
        HeegnerDivisor::new(47)
            .unwrap()
            .with_term(-11, 41, rat(1, 2))
            .unwrap()
            .with_term(-11, -41, rat(1, 2))
            .unwrap()
    }

    #[test]
    fn worked_examples() {
        let t = enumerate_terms(&cg(-107), 47, 9, &div47()).unwrap();
        let got: Vec<(i64, i64, Rat)> = t.iter().map(|t| (t.r, t.n, t.m.clone())).collect();
        assert_eq!(got, vec![(-41, 7, rat(6, 107)), (41, -7, rat(6, 107))]);
        assert!(enumerate_terms(&cg(-23), 47, 27, &div47())
            .unwrap()
            .is_empty());
        let empty = HeegnerDivisor::new(47).unwrap();
        assert!(enumerate_terms(&cg(-107), 47, 9, &empty)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn improper_intersection() {
        // d = D puts the Heegner point on the divisor: n = ρr with r = ρ.
        let div = HeegnerDivisor::new(47)
            .unwrap()
            .with_term(-107, 9, rat(1, 1))
            .unwrap();
        let err = enumerate_terms(&cg(-107), 47, 9, &div).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn level_mismatch_and_even_disc() {
        let div = HeegnerDivisor::new(1).unwrap();
        assert!(enumerate_terms(&cg(-107), 47, 9, &div).is_err());
        assert!(enumerate_terms(&cg(-4), 1, 0, &div).is_err());
    }
}
