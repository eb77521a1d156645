use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{disc_sqrt_mod, is_square, isqrt, prime_divisors, rat_int, Rat};
use crate::error::{Error, Result};
use crate::quadarith::{FractionalIdealRep, KElt};

use super::setup::CycleSetup;

fn different(disc: i64) -> Result<FractionalIdealRep> {
    FractionalIdealRep::principal(&KElt::sqrt_disc(disc))
}

/// Checks `λ ∈ 𝔡⁻¹𝔠_𝔞` and `N(λ) ≡ −κ_p (mod N(𝔠₀))`.
pub fn check_lambda(lambda: &KElt, ideal: &FractionalIdealRep, setup: &CycleSetup) -> Result<()> {
    let ca = setup.c_of(ideal)?;
    if !ca.contains(&lambda.mul(&KElt::sqrt_disc(ideal.disc()))) {
        return Err(Error::Invalid(format!(
            "lambda = {lambda} is not in the inverse different times c_a"
        )));
    }
    if !norm_congruence(lambda, setup) {
        return Err(Error::Congruence(format!(
            "N(lambda) is not congruent to -{} mod N(c0)",
            setup.kappa()
        )));
    }
    Ok(())
}

/// `(N(λ) + κ_p)/N(𝔠₀) ∈ Z`. For ramified `p` this forces `λ` to be
/// integral at `𝔭`.
fn norm_congruence(lambda: &KElt, setup: &CycleSetup) -> bool {
    ((lambda.norm() + rat_int(setup.kappa() as i64)) / setup.c0.norm()).is_integer()
}

/// Residues `λ ∈ 𝔡⁻¹𝔠_𝔞/𝔠_𝔞` satisfying the norm congruence that generate
/// the quotient at every prime `𝔮 | 𝔡` other than the prime above a ramified
/// `p`, one representative each. At that prime the congruence forces the
/// component to vanish. With `t` primes dividing D there are `2^t` of them
/// for inert `p` and `2^{t−1}` for ramified `p`.
pub fn lambda_candidates(ideal: &FractionalIdealRep, setup: &CycleSetup) -> Result<Vec<KElt>> {
    let disc = ideal.disc();
    let ca = setup.c_of(ideal)?;
    let lat = ca.div(&different(disc)?)?;
    let mut sub = Vec::new();
    for q in prime_divisors(disc.unsigned_abs()) {
        if q == setup.p() {
            continue;
        }
        let b = disc_sqrt_mod(disc, q).expect("ramified prime");
        sub.push(lat.mul(&FractionalIdealRep::new(rat_int(1), q as i64, b, disc)?)?);
    }
    let [e1, e2] = lat.basis();
    let n = disc.unsigned_abs() as i64;
    let mut out: Vec<KElt> = Vec::new();
    for u in 0..n {
        for v in 0..n {
            let lam = e1.scale(&rat_int(u)).add(&e2.scale(&rat_int(v)));
            if sub.iter().any(|s| s.contains(&lam)) {
                continue;
            }
            if !norm_congruence(&lam, setup) {
                continue;
            }
            if out.iter().all(|o| !ca.contains(&o.sub(&lam))) {
                out.push(lam);
            }
        }
    }
    Ok(out)
}

/// `ρ₀(n, 𝔞, μ) = #{x ∈ 𝔠₀⁻¹𝔞̄ : N(x) = n, λx + μ ∈ 𝔞}` for the supplied `λ`.
pub fn rho0(
    n: &Rat,
    ideal: &FractionalIdealRep,
    mu: &KElt,
    lambda: &KElt,
    setup: &CycleSetup,
) -> Result<u64> {
    check_lambda(lambda, ideal, setup)?;
    if !n.is_positive() {
        return Ok(0);
    }
    let disc = ideal.disc();
    let lat = setup.c0.inverse().mul(&ideal.conj())?;
    let q = lat.scale().clone();
    let (a, b) = (lat.a() as i128, lat.b() as i128);
    // N(q(sA + t(B+√D)/2)) = q²·A·F(s, t) with F = [A, B, (B²−D)/(4A)].
    let k = n / (&q * &q * rat_int(a as i64));
    if !k.is_integer() {
        return Ok(0);
    }
    let k = k
        .to_integer()
        .to_i128()
        .ok_or_else(|| Error::Overflow(format!("norm {n} too large for lattice enumeration")))?;
    let dabs = -(disc as i128);
    let four_ak = 4 * a * k;
    let mut count = 0u64;
    let mut t: i128 = 0;
    while dabs * t * t <= four_ak {
        for t in if t == 0 { vec![0] } else { vec![t, -t] } {
            let rem = four_ak - dabs * t * t;
            if !is_square(rem) {
                continue;
            }
            let sq = isqrt(rem as u128) as i128;
            for u in if sq == 0 { vec![0] } else { vec![sq, -sq] } {
                // 2As + Bt = u.
                if (u - b * t).rem_euclid(2 * a) != 0 {
                    continue;
                }
                let x = KElt::half(to_i64(u)?, to_i64(t)?, disc).scale(&q);
                if ideal.contains(&lambda.mul(&x).add(mu)) {
                    count += 1;
                }
            }
        }
        t += 1;
    }
    debug_assert!(!k.is_zero() || count <= 1);
    Ok(count)
}

fn to_i64(x: i128) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow(format!("{x} exceeds 64 bits")))
}
