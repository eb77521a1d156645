use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{fmt_rational, Rat};
use crate::error::{Error, Result};

use super::classgroup::{ClassGroup, ClassIndex};
use super::form::BinaryQF;

/// An element `x + y√D` of the imaginary quadratic field `Q(√D)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KElt {
    pub x: Rat,
    pub y: Rat,
    pub disc: i64,
}

impl KElt {
    pub fn new(x: Rat, y: Rat, disc: i64) -> Self {
        Self { x, y, disc }
    }

    pub fn from_int(n: i64, disc: i64) -> Self {
        Self::new(Rat::from_integer(n.into()), Rat::zero(), disc)
    }

    pub fn from_rat(x: Rat, disc: i64) -> Self {
        Self::new(x, Rat::zero(), disc)
    }

    /// `(u + v√D)/2`.
    pub fn half(u: i64, v: i64, disc: i64) -> Self {
        let two = BigInt::from(2);
        Self::new(
            Rat::new(u.into(), two.clone()),
            Rat::new(v.into(), two),
            disc,
        )
    }

    pub fn sqrt_disc(disc: i64) -> Self {
        Self::new(Rat::zero(), Rat::one(), disc)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.x.clone(), -self.y.clone(), self.disc)
    }

    pub fn norm(&self) -> Rat {
        &self.x * &self.x - Rat::from_integer(self.disc.into()) * &self.y * &self.y
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.x + &o.x, &self.y + &o.y, self.disc)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&self.x - &o.x, &self.y - &o.y, self.disc)
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.x.clone(), -self.y.clone(), self.disc)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let d = Rat::from_integer(self.disc.into());
        Self::new(
            &self.x * &o.x + d * &self.y * &o.y,
            &self.x * &o.y + &self.y * &o.x,
            self.disc,
        )
    }

    pub fn scale(&self, q: &Rat) -> Self {
        Self::new(&self.x * q, &self.y * q, self.disc)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Invalid("inverse of zero".into()));
        }
        Ok(self.conj().scale(&self.norm().recip()))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// `(2x, 2y)`: coordinates with respect to `(1/2, √D/2)`.
    fn half_coords(&self) -> (Rat, Rat) {
        let two = Rat::from_integer(2.into());
        (&self.x * &two, &self.y * &two)
    }
}

impl fmt::Display for KElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {}*sqrt({})",
            fmt_rational(&self.x),
            fmt_rational(&self.y),
            self.disc
        )
    }
}

/// The fractional ideal `q·(aZ + ((b+√D)/2)Z)` of the maximal order.
///
/// Invariants: `q > 0`, `a > 0`, `b² ≡ D (mod 4a)`, `b ∈ (−a, a]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FractionalIdealRep {
    scale: Rat,
    a: i64,
    b: i64,
    disc: i64,
}

type Vec2 = (BigInt, BigInt);

impl FractionalIdealRep {
    pub fn new(scale: Rat, a: i64, b: i64, disc: i64) -> Result<Self> {
        if !scale.is_positive() || a <= 0 {
            return Err(Error::Invalid(format!(
                "ideal needs positive scale and a, got q = {scale}, a = {a}"
            )));
        }
        let four_a = 4 * a as i128;
        if (b as i128 * b as i128 - disc as i128).rem_euclid(four_a) != 0 {
            return Err(Error::Congruence(format!(
                "b^2 = {b}^2 is not congruent to {disc} mod 4*{a}"
            )));
        }
        let b = (b as i128
            - (2 * a as i128) * ((b as i128 + a as i128 - 1).div_euclid(2 * a as i128)))
            as i64;
        Ok(Self { scale, a, b, disc })
    }

    pub fn unit(disc: i64) -> Self {
        Self::new(Rat::one(), 1, disc.rem_euclid(2), disc).expect("unit ideal")
    }

    /// The integral ideal `aZ + ((−b+√D)/2)Z` attached to `[a, b, c]`.
    pub fn from_form(f: &BinaryQF) -> Result<Self> {
        Self::new(Rat::one(), f.a, -f.b, f.disc())
    }

    /// The form `[a, −b, c]` of the primitive part.
    pub fn to_form(&self) -> BinaryQF {
        BinaryQF::from_abd(self.a, -self.b, self.disc).expect("ideal invariant")
    }

    pub fn class(&self, cg: &ClassGroup) -> Result<ClassIndex> {
        cg.class_of(&self.to_form())
    }

    pub fn scale(&self) -> &Rat {
        &self.scale
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn norm(&self) -> Rat {
        &self.scale * &self.scale * Rat::from_integer(self.a.into())
    }

    pub fn is_integral(&self) -> bool {
        self.basis().iter().all(|e| {
            let (u, v) = e.half_coords();
            u.is_integer()
                && v.is_integer()
                && (u.to_integer() - v.to_integer() * self.disc).is_even()
        })
    }

    /// Z-basis `q·a`, `q·(b+√D)/2`.
    pub fn basis(&self) -> [KElt; 2] {
        [
            KElt::from_rat(&self.scale * Rat::from_integer(self.a.into()), self.disc),
            KElt::half(self.b, 1, self.disc).scale(&self.scale),
        ]
    }

    pub fn conj(&self) -> Self {
        Self::new(self.scale.clone(), self.a, -self.b, self.disc).expect("conjugate ideal")
    }

    pub fn inverse(&self) -> Self {
        let s = (&self.scale * Rat::from_integer(self.a.into())).recip();
        Self::new(s, self.a, -self.b, self.disc).expect("inverse ideal")
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        let g1 = self.unit_basis_coords();
        let g2 = o.unit_basis_coords();
        let d = BigInt::from(self.disc);
        let mut gens = Vec::with_capacity(4);
        for (x1, y1) in &g1 {
            for (x2, y2) in &g2 {
                // ((x1 + y1√D)/2)((x2 + y2√D)/2) = (X + Y√D)/2.
                let x = (x1 * x2 + y1 * y2 * &d) / 2;
                let y = (x1 * y2 + x2 * y1) / 2;
                gens.push((x, y));
            }
        }
        Self::from_lattice(&self.scale * &o.scale, gens, self.disc)
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.mul(&o.inverse())
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::unit(self.disc);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    /// The principal ideal `αO`.
    pub fn principal(alpha: &KElt) -> Result<Self> {
        if alpha.is_zero() {
            return Err(Error::Invalid("principal ideal of zero".into()));
        }
        Self::unit(alpha.disc).mul_elt(alpha)
    }

    pub fn mul_elt(&self, alpha: &KElt) -> Result<Self> {
        if alpha.is_zero() {
            return Err(Error::Invalid("ideal times zero".into()));
        }
        let gens: Vec<KElt> = self.basis().iter().map(|e| e.mul(alpha)).collect();
        Self::from_elements(&gens, self.disc)
    }

    /// The ideal generated over Z by the given elements, which must span a
    /// rank-2 lattice stable under the maximal order.
    pub fn from_elements(gens: &[KElt], disc: i64) -> Result<Self> {
        let coords: Vec<(Rat, Rat)> = gens.iter().map(|g| g.half_coords()).collect();
        let mut den = BigInt::one();
        for (u, v) in &coords {
            den = den.lcm(u.denom()).lcm(v.denom());
        }
        let gens: Vec<Vec2> = coords
            .iter()
            .map(|(u, v)| {
                let u = u * Rat::from_integer(den.clone());
                let v = v * Rat::from_integer(den.clone());
                (u.to_integer(), v.to_integer())
            })
            .collect();
        Self::from_lattice(BigRational::new(BigInt::one(), den), gens, disc)
    }

    pub fn contains(&self, z: &KElt) -> bool {
        let w = z.scale(&self.scale.recip());
        let (u, v) = w.half_coords();
        if !u.is_integer() || !v.is_integer() {
            return false;
        }
        // w = s·a + t·(b+√D)/2 with t = v and s = (u − t b)/(2a).
        let (u, t) = (u.to_integer(), v.to_integer());
        (u - t * BigInt::from(self.b)).is_multiple_of(&BigInt::from(2 * self.a))
    }

    /// `o ⊆ self`.
    pub fn contains_ideal(&self, o: &Self) -> bool {
        o.basis().iter().all(|e| self.contains(e))
    }

    fn check_same(&self, o: &Self) -> Result<()> {
        if self.disc != o.disc {
            return Err(Error::Invalid(format!(
                "ideals of discriminants {} and {}",
                self.disc, o.disc
            )));
        }
        Ok(())
    }

    /// Basis of the primitive part in half coordinates.
    fn unit_basis_coords(&self) -> [Vec2; 2] {
        [
            (BigInt::from(2 * self.a), BigInt::zero()),
            (BigInt::from(self.b), BigInt::one()),
        ]
    }

    /// Interprets `scale · span(gens)` (half coordinates) as an ideal.
    fn from_lattice(scale: Rat, gens: Vec<Vec2>, disc: i64) -> Result<Self> {
        let ((x1, _), (x2, y2)) = hnf(gens)?;
        // Lattice = y2·(aZ + ((b+√D)/2)Z) with b = x2/y2, 2a·y2 = x1.
        if !x2.is_multiple_of(&y2) || !x1.is_multiple_of(&(&y2 * BigInt::from(2))) {
            return Err(Error::Invalid(
                "lattice is not an ideal of the maximal order".into(),
            ));
        }
        let b = (&x2 / &y2)
            .to_i64()
            .ok_or_else(|| Error::Overflow("ideal b".into()))?;
        let a = (&x1 / (&y2 * BigInt::from(2)))
            .to_i64()
            .ok_or_else(|| Error::Overflow("ideal a".into()))?;
        Self::new(scale * Rat::from_integer(y2), a, b, disc)
            .map_err(|_| Error::Invalid("lattice is not an ideal of the maximal order".into()))
    }
}

/// Hermite normal form of a rank-2 lattice in Z²: `(x1, 0), (x2, y2)` with
/// `x1, y2 > 0` and `0 ≤ x2 < x1`.
fn hnf(mut gens: Vec<Vec2>) -> Result<(Vec2, Vec2)> {
    // Collapse second coordinates onto one vector with y = gcd.
    let mut pivot: Option<Vec2> = None;
    let mut rest: Vec<BigInt> = Vec::new();
    for (x, y) in gens.drain(..) {
        if y.is_zero() {
            rest.push(x);
            continue;
        }
        match pivot.take() {
            None => pivot = Some((x, y)),
            Some((px, py)) => {
                let e = py.extended_gcd(&y);
                let (g, s, t) = (e.gcd, e.x, e.y);
                let new_pivot = (&s * &px + &t * &x, g.clone());
                // (y/g)·pivot − (py/g)·v has zero second coordinate.
                let kill = (&y / &g) * &px - (&py / &g) * &x;
                rest.push(kill);
                pivot = Some(new_pivot);
            }
        }
    }
    let (mut x2, mut y2) = pivot.ok_or_else(|| Error::Invalid("degenerate lattice".into()))?;
    let mut x1 = BigInt::zero();
    for r in rest {
        x1 = x1.gcd(&r);
    }
    if x1.is_zero() {
        return Err(Error::Invalid("degenerate lattice".into()));
    }
    if y2.is_negative() {
        y2 = -y2;
        x2 = -x2;
    }
    x2 = x2.mod_floor(&x1);
    Ok(((x1, BigInt::zero()), (x2, y2)))
}

impl fmt::Display for FractionalIdealRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}*({}Z + (({}+sqrt({}))/2)Z)",
            fmt_rational(&self.scale),
            self.a,
            self.b,
            self.disc
        )
    }
}
