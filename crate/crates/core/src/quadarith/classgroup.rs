use std::collections::HashMap;

use crate::arith::rat_int;
use crate::error::{Error, Result};
use crate::localsym::{hilbert_symbol, Place};

use super::form::{compose_forms, reduce_form, reduced_forms, BinaryQF, Discriminant};

/// Index of an ideal class; the position of its reduced form in
/// [`ClassGroup::forms`].
pub type ClassIndex = usize;

/// The form class group of a fundamental discriminant.
///
/// Classes are indexed by the lexicographic order of their reduced forms.
/// The ideal class of `aZ + ((−b+√D)/2)Z` is the class of `[a, b, c]`.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    disc: Discriminant,
    forms: Vec<BinaryQF>,
    index: HashMap<BinaryQF, ClassIndex>,
    table: Vec<Vec<ClassIndex>>,
    inverse: Vec<ClassIndex>,
    identity: ClassIndex,
    genus_primes: Vec<u64>,
    genus: Vec<Vec<i8>>,
}

impl ClassGroup {
    pub fn new(disc: Discriminant) -> Result<Self> {
        if !disc.is_fundamental() {
            return Err(Error::NotFundamental(disc.value()));
        }
        Self::from_forms(disc, reduced_forms(disc.value()))
    }

    /// Builds the group from a list of reduced forms, recomputing every
    /// derived table. Used when loading cached records.
    pub(crate) fn from_forms(disc: Discriminant, forms: Vec<BinaryQF>) -> Result<Self> {
        let expect = reduced_forms(disc.value());
        if forms != expect {
            return Err(Error::Invalid(format!(
                "form list does not match the reduced forms of discriminant {disc}"
            )));
        }
        let index: HashMap<_, _> = forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        let h = forms.len();
        let mut table = vec![vec![0; h]; h];
        for i in 0..h {
            for j in i..h {
                let k = index[&compose_forms(&forms[i], &forms[j])];
                table[i][j] = k;
                table[j][i] = k;
            }
        }
        let inverse = forms
            .iter()
            .map(|f| index[&reduce_form(&f.opposite()).expect("reduced forms are definite")])
            .collect();
        // The principal form has a = 1 and sorts first.
        let identity = 0;
        debug_assert_eq!(forms[identity].a, 1);
        let genus_primes = disc.ramified_primes();
        let d = rat_int(disc.value());
        let genus = forms
            .iter()
            .map(|f| {
                genus_primes
                    .iter()
                    .map(|&l| {
                        hilbert_symbol(&d, &rat_int(f.a), Place::Prime(l))
                            .expect("nonzero arguments")
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            disc,
            forms,
            index,
            table,
            inverse,
            identity,
            genus_primes,
            genus,
        })
    }

    pub fn disc(&self) -> Discriminant {
        self.disc
    }

    pub fn h(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[BinaryQF] {
        &self.forms
    }

    pub fn form(&self, c: ClassIndex) -> BinaryQF {
        self.forms[c]
    }

    pub fn label(&self, c: ClassIndex) -> String {
        self.forms[c].label()
    }

    pub fn labels(&self) -> Vec<String> {
        self.forms.iter().map(|f| f.label()).collect()
    }

    pub fn identity(&self) -> ClassIndex {
        self.identity
    }

    pub fn mul(&self, x: ClassIndex, y: ClassIndex) -> ClassIndex {
        self.table[x][y]
    }

    pub fn inv(&self, x: ClassIndex) -> ClassIndex {
        self.inverse[x]
    }

    pub fn pow(&self, x: ClassIndex, e: i64) -> ClassIndex {
        let base = if e < 0 { self.inv(x) } else { x };
        let mut acc = self.identity;
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    /// Class of an arbitrary positive definite form of this discriminant.
    pub fn class_of(&self, f: &BinaryQF) -> Result<ClassIndex> {
        if f.disc() != self.disc.value() {
            return Err(Error::Form {
                a: f.a,
                b: f.b,
                c: f.c,
                why: "discriminant mismatch",
            });
        }
        let r = reduce_form(f)?;
        self.index.get(&r).copied().ok_or(Error::Form {
            a: f.a,
            b: f.b,
            c: f.c,
            why: "form is not primitive",
        })
    }

    pub fn two_torsion(&self) -> Vec<ClassIndex> {
        (0..self.h()).filter(|&c| self.inverse[c] == c).collect()
    }

    /// All `y` with `y² = x`.
    pub fn square_roots(&self, x: ClassIndex) -> Vec<ClassIndex> {
        (0..self.h()).filter(|&y| self.mul(y, y) == x).collect()
    }

    pub fn order(&self, x: ClassIndex) -> usize {
        let mut acc = x;
        let mut n = 1;
        while acc != self.identity {
            acc = self.mul(acc, x);
            n += 1;
        }
        n
    }

    /// Primes indexing the genus characters.
    pub fn genus_primes(&self) -> &[u64] {
        &self.genus_primes
    }

    /// Values `(D, a)_ℓ` of the genus characters on a class.
    pub fn genus_vector(&self, c: ClassIndex) -> &[i8] {
        &self.genus[c]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cg(d: i64) -> ClassGroup {
        ClassGroup::new(Discriminant::fundamental(d).unwrap()).unwrap()
    }

    #[test]
    fn small_groups() {
        assert_eq!(cg(-23).h(), 3);
        assert_eq!(cg(-107).h(), 3);
        let g3 = cg(-3);
        assert_eq!((g3.h(), g3.disc().unit_count()), (1, 6));
        assert_eq!(cg(-4).h(), 1);
        assert_eq!(cg(-84).h(), 4);
        assert_eq!(cg(-84).two_torsion().len(), 4);
        assert!(ClassGroup::new(Discriminant::new(-12).unwrap()).is_err());
    }

    #[test]
    fn cyclic_of_order_three() {
        let g = cg(-23);
        let c = 1;
        assert_eq!(g.order(c), 3);
        assert_eq!(g.mul(c, c), g.inv(c));
        assert_eq!(g.label(g.inv(1)), "[2,1,3]");
    }

    #[test]
    fn genus_characters_separate_genera() {
        // D = −84 = −4·3·7 has four genera of one class each.
        let g = cg(-84);
        let mut seen: Vec<_> = (0..g.h()).map(|c| g.genus_vector(c).to_vec()).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 4);
        for c in 0..g.h() {
            let prod: i8 = g.genus_vector(c).iter().product();
            assert_eq!(prod, 1, "product of genus characters is trivial");
        }
    }
}
