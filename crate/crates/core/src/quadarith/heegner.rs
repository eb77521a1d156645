use crate::arith::{crt, gcd, is_squarefree};
use crate::error::{Error, Result};

use super::classgroup::{ClassGroup, ClassIndex};
use super::form::BinaryQF;

/// A Heegner form `[aN, b, c]` with `b ≡ ρ (mod 2N)`, tagged with the class
/// it represents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeegnerRep {
    pub class: ClassIndex,
    pub form: BinaryQF,
}

pub fn check_heegner_data(cg: &ClassGroup, n: u64, rho: i64) -> Result<()> {
    let d = cg.disc().value() as i128;
    if n == 0 || !is_squarefree(n) {
        return Err(Error::Invalid(format!(
            "level {n} must be positive and squarefree"
        )));
    }
    let r = rho as i128;
    if (r * r - d).rem_euclid(4 * n as i128) != 0 {
        return Err(Error::Congruence(format!(
            "rho^2 = {rho}^2 is not congruent to {d} mod {}",
            4 * n
        )));
    }
    Ok(())
}

/// The form in the class of `f` obtained from the primitive representation
/// `(x, y)`; its leading coefficient is `f(x, y)`.
fn move_to(f: &BinaryQF, x: i64, y: i64) -> BinaryQF {
    let (_, s, t) = crate::arith::xgcd(x as i128, y as i128);
    // x·s + y·t = 1, so [[x, −t], [y, s]] has determinant 1.
    f.act([[x, -(t as i64)], [y, s as i64]])
}

/// A form in the class of `f` whose leading coefficient is coprime to `n`,
/// chosen with minimal leading coefficient (ties broken by `(y, x)`).
/// `skip` selects the `skip`-th larger value, giving a different transversal.
fn coprime_rep(f: &BinaryQF, n: u64, skip: usize) -> BinaryQF {
    let mut cands: Vec<(i128, i64, i64)> = Vec::new();
    let bound = 12 + 4 * skip as i64;
    for x in -bound..=bound {
        for y in 0..=bound {
            if gcd(x, y) != 1 || (y == 0 && x != 1) {
                continue;
            }
            let v = f.eval(x, y);
            if gcd(v as i64, n as i64) == 1 {
                cands.push((v, y, x));
            }
        }
    }
    cands.sort();
    cands.dedup_by_key(|c| c.0);
    let (_, y, x) = cands[skip.min(cands.len() - 1)];
    move_to(f, x, y)
}

/// `[AN, B, C]` from `[A, b1, ·]` (gcd(A, N) = 1) and `[N, ρ, ·]` by
/// Dirichlet composition: `B ≡ b1 (mod 2A)`, `B ≡ ρ (mod 2N)`.
fn compose_with_level(f: &BinaryQF, n: u64, rho: i64) -> BinaryQF {
    let (a, n) = (f.a as i128, n as i128);
    let (b, m) = crt(f.b as i128, 2 * a, rho as i128, 2 * n).expect("compatible parities");
    let an = a * n;
    // Representative in (−AN, AN].
    let b = if b > an { b - m } else { b };
    BinaryQF::from_abd(an as i64, b as i64, f.disc()).expect("Dirichlet composition is integral")
}

/// Heegner representatives, one per ideal class, ordered by class index.
///
/// The representative for class `c` lies in the form class `c⁻¹·[𝔫]`
/// where `𝔫 = NZ + ((−ρ+√D)/2)Z`; for the principal class it is exactly
/// `[N, ρ, (ρ² − D)/(4N)]` with `ρ` moved into `(−N, N]`.
pub fn heegner_reps(cg: &ClassGroup, n: u64, rho: i64) -> Result<Vec<HeegnerRep>> {
    heegner_reps_with(cg, n, rho, 0)
}

/// Same as [`heegner_reps`] with a different transversal for `variant > 0`.
pub fn heegner_reps_with(
    cg: &ClassGroup,
    n: u64,
    rho: i64,
    variant: usize,
) -> Result<Vec<HeegnerRep>> {
    check_heegner_data(cg, n, rho)?;
    let mut out = Vec::with_capacity(cg.h());
    for c in 0..cg.h() {
        let f = cg.form(cg.inv(c));
        let skip = if c == cg.identity() { 0 } else { variant };
        let g = coprime_rep(&f, n, skip);
        let form = compose_with_level(&g, n, rho);
        out.push(HeegnerRep { class: c, form });
    }
    Ok(out)
}
