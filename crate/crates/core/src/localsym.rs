//! Hilbert symbols over Q, the set `Diff(m)`, `ν_p`, `o(m)` and the
//! auxiliary prime `p₀` with its constant `κ_p`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{
    big_to_u64, is_prime, kronecker, ord_int, ord_rat, prime_divisors, rat_int, Rat,
};
use crate::error::{Error, Result};
use crate::quadarith::{Discriminant, Splitting};

/// A place of Q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Infinity,
    Prime(u64),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => f.write_str("inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// `a = p/q` has the same square class as `p·q`.
fn clear(a: &Rat) -> BigInt {
    a.numer() * a.denom()
}

fn mod_small(x: &BigInt, m: u64) -> u64 {
    x.mod_floor(&BigInt::from(m))
        .to_u64()
        .expect("residue fits")
}

/// Splits `x = p^e·u` with `p ∤ u`.
fn split_off(x: &BigInt, p: u64) -> (u32, BigInt) {
    let e = ord_int(x, p);
    (e, x / BigInt::from(p).pow(e))
}

/// The Hilbert symbol `(a, b)_v`.
pub fn hilbert_symbol(a: &Rat, b: &Rat, place: Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Invalid("Hilbert symbol of zero".into()));
    }
    let (a, b) = (clear(a), clear(b));
    Ok(match place {
        Place::Infinity => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => {
            let (alpha, u) = split_off(&a, 2);
            let (beta, v) = split_off(&b, 2);
            let (u, v) = (mod_small(&u, 8), mod_small(&v, 8));
            let eps = |x: u64| ((x - 1) / 2) % 2;
            let omega = |x: u64| ((x * x - 1) / 8) % 2;
            let e = eps(u) * eps(v) + alpha as u64 * omega(v) + beta as u64 * omega(u);
            if e.is_multiple_of(2) {
                1
            } else {
                -1
            }
        }
        Place::Prime(p) => {
            let (alpha, u) = split_off(&a, p);
            let (beta, v) = split_off(&b, p);
            let mut s: i32 = 1;
            if alpha % 2 == 1 && beta % 2 == 1 && p % 4 == 3 {
                s = -s;
            }
            if beta % 2 == 1 {
                s *= kronecker(mod_small(&u, p) as i64, p);
            }
            if alpha % 2 == 1 {
                s *= kronecker(mod_small(&v, p) as i64, p);
            }
            s as i8
        }
    })
}

/// Places where `(a, b)_v` can be `−1`: `∞`, `2` and the primes of `ab`.
pub fn relevant_places(a: &Rat, b: &Rat) -> Result<Vec<Place>> {
    let n = (clear(a) * clear(b)).abs() * 2;
    let mut out = vec![Place::Infinity];
    out.extend(
        prime_divisors(big_to_u64(&n)?)
            .into_iter()
            .map(Place::Prime),
    );
    Ok(out)
}

/// The set `Diff(m) = {p < ∞ : (−m·scale, D)_p = −1}` for `scale = N(𝔞)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffResult {
    pub m: Rat,
    pub scale: Rat,
    pub disc: Discriminant,
    pub primes: Vec<u64>,
}

impl DiffResult {
    pub fn single(&self) -> Option<u64> {
        match self.primes.as_slice() {
            [p] => Some(*p),
            _ => None,
        }
    }
}

pub fn diff_set(m: &Rat, scale: &Rat, disc: Discriminant) -> Result<DiffResult> {
    if !m.is_positive() || !scale.is_positive() {
        return Err(Error::Invalid(format!(
            "Diff needs m > 0 and scale > 0, got m = {m}, scale = {scale}"
        )));
    }
    let x = -(m * scale);
    let d = rat_int(disc.value());
    let mut primes = Vec::new();
    for place in relevant_places(&x, &d)? {
        if let Place::Prime(p) = place {
            if hilbert_symbol(&x, &d, place)? == -1 {
                primes.push(p);
            }
        }
    }
    Ok(DiffResult {
        m: m.clone(),
        scale: scale.clone(),
        disc,
        primes,
    })
}

/// `ν_p(m)`: `(ord_p(m)+1)/2` for inert `p`, `ord_p(m|D|)` for ramified `p`.
pub fn nu_p(m: &Rat, p: u64, disc: Discriminant) -> Result<Rat> {
    if m.is_zero() {
        return Err(Error::Invalid("nu_p of zero".into()));
    }
    match disc.splitting(p) {
        Splitting::Split => Err(Error::SplitPrime { p, d: disc.value() }),
        Splitting::Inert => Ok(Rat::new((ord_rat(m, p) + 1).into(), 2.into())),
        Splitting::Ramified => Ok(rat_int(
            ord_rat(m, p) + ord_int(&BigInt::from(disc.value()), p) as i64,
        )),
    }
}

/// `o(m)`: the number of primes `ℓ | D` with `ord_ℓ(m|D|) > 0`.
pub fn o_m(m: &Rat, disc: Discriminant) -> u32 {
    disc.ramified_primes()
        .into_iter()
        .filter(|&l| ord_rat(m, l) + ord_int(&BigInt::from(disc.value()), l) as i64 > 0)
        .count() as u32
}

/// The auxiliary prime attached to a non-split prime `p`.
///
/// `p₀` is the smallest prime not dividing `2pD` such that the symbol
/// `(D, −p·p₀)_v` (inert `p`) or `(D, −p₀)_v` (ramified `p`) is `−1`
/// exactly at `v ∈ {p, ∞}`. Then `κ_p = p·p₀` or `p₀`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AuxPrime {
    pub p: u64,
    pub p0: u64,
    pub kappa: u64,
    pub ramified: bool,
}

pub fn aux_prime(p: u64, disc: Discriminant) -> Result<AuxPrime> {
    if !is_prime(p) {
        return Err(Error::Invalid(format!("{p} is not prime")));
    }
    let ramified = match disc.splitting(p) {
        Splitting::Split => return Err(Error::SplitPrime { p, d: disc.value() }),
        Splitting::Inert => false,
        Splitting::Ramified => true,
    };
    let d = rat_int(disc.value());
    let mut p0 = 3u64;
    loop {
        if is_prime(p0) && p0 != p && disc.value() % p0 as i64 != 0 {
            let kappa = if ramified { p0 } else { p * p0 };
            let x = rat_int(-(kappa as i64));
            let mut ok = true;
            for place in relevant_places(&d, &x)? {
                let want = if place == Place::Infinity || place == Place::Prime(p) {
                    -1
                } else {
                    1
                };
                if hilbert_symbol(&d, &x, place)? != want {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(AuxPrime {
                    p,
                    p0,
                    kappa,
                    ramified,
                });
            }
        }
        p0 += 2;
    }
}
