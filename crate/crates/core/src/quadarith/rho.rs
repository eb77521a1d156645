use crate::arith::{disc_sqrt_mod, factor, rat_to_u64, Rat};
use crate::error::{Error, Result};

use super::classgroup::{ClassGroup, ClassIndex};
use super::form::{BinaryQF, Splitting};

/// Class of the prime ideal `pZ + ((b+√D)/2)Z` with the smallest
/// `b ∈ [0, 2p)`; `None` when `p` is inert.
pub fn prime_ideal_class(cg: &ClassGroup, p: u64) -> Option<ClassIndex> {
    let d = cg.disc().value();
    let b = disc_sqrt_mod(d, p)?;
    let f = BinaryQF::from_abd(p as i64, -b, d).ok()?;
    cg.class_of(&f).ok()
}

/// Number of integral ideals of norm `n` in each class.
///
/// Non-integral or non-positive `n` gives all zeros.
pub fn rho_all(cg: &ClassGroup, n: &Rat) -> Vec<u64> {
    let h = cg.h();
    let mut counts = vec![0u64; h];
    let Some(n) = rat_to_u64(n) else {
        return counts;
    };
    counts[cg.identity()] = 1;
    for (p, e) in factor(n) {
        // Distribution of ideal classes of norm p^e.
        let mut local = vec![0u64; h];
        match cg.disc().splitting(p) {
            Splitting::Inert => {
                if e % 2 == 1 {
                    return vec![0; h];
                }
                local[cg.identity()] = 1;
            }
            Splitting::Ramified => {
                let c = prime_ideal_class(cg, p).expect("ramified prime has an ideal");
                local[cg.pow(c, e as i64)] = 1;
            }
            Splitting::Split => {
                let c = prime_ideal_class(cg, p).expect("split prime has an ideal");
                let cbar = cg.inv(c);
                for i in 0..=e as i64 {
                    local[cg.mul(cg.pow(c, i), cg.pow(cbar, e as i64 - i))] += 1;
                }
            }
        }
        let mut next = vec![0u64; h];
        for (x, &cx) in counts.iter().enumerate().filter(|(_, c)| **c > 0) {
            for (y, &cy) in local.iter().enumerate().filter(|(_, c)| **c > 0) {
                next[cg.mul(x, y)] += cx * cy;
            }
        }
        counts = next;
    }
    counts
}

/// `ρ(n, [𝔟])`: integral ideals of norm `n` in the class `cls`.
pub fn rho(cg: &ClassGroup, n: &Rat, cls: ClassIndex) -> u64 {
    rho_all(cg, n)[cls]
}

/// Sum of `ρ(n, ·)` over the classes whose genus characters equal `genus`.
pub fn rho_genus(cg: &ClassGroup, n: &Rat, genus: &[i8]) -> Result<u64> {
    let classes: Vec<ClassIndex> = (0..cg.h())
        .filter(|&c| cg.genus_vector(c) == genus)
        .collect();
    if classes.is_empty() {
        return Err(Error::Invalid(format!(
            "character vector {genus:?} is not the genus of any class of discriminant {}",
            cg.disc()
        )));
    }
    let all = rho_all(cg, n);
    Ok(classes.iter().map(|&c| all[c]).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};
    use crate::quadarith::form::Discriminant;

    fn cg(d: i64) -> ClassGroup {
        ClassGroup::new(Discriminant::fundamental(d).unwrap()).unwrap()
    }

    #[test]
    fn norm_three_for_107() {
        let g = cg(-107);
        assert_eq!(rho_all(&g, &rat_int(3)), vec![0, 1, 1]);
        assert_eq!(rho_genus(&g, &rat_int(3), g.genus_vector(0)).unwrap(), 2);
    }

    #[test]
    fn degenerate_arguments() {
        let g = cg(-23);
        assert_eq!(rho_all(&g, &rat(1, 2)), vec![0, 0, 0]);
        assert_eq!(rho_all(&g, &rat_int(0)), vec![0, 0, 0]);
        assert_eq!(rho_all(&g, &rat_int(-3)), vec![0, 0, 0]);
        assert_eq!(rho_all(&g, &rat_int(1)), vec![1, 0, 0]);
        assert_eq!(rho_all(&g, &rat_int(2)).iter().sum::<u64>(), 2);
        // 5 is inert in Q(√−23).
        assert_eq!(rho_all(&g, &rat_int(5)), vec![0, 0, 0]);
        assert_eq!(rho_all(&g, &rat_int(25)), vec![1, 0, 0]);
        assert_eq!(rho_all(&g, &rat_int(23)), vec![1, 0, 0]);
    }

    #[test]
    fn bad_genus_vector() {
        let g = cg(-84);
        assert!(rho_genus(&g, &rat_int(1), &[1, 1]).is_err());
        assert!(rho_genus(&g, &rat_int(1), &[-1, -1, -1]).is_err());
    }
}
