use std::fmt;

use num_bigint::BigInt;
use num_traits::Num;
use rug::float::{Constant, Round};
use rug::{Complex, Float};

use crate::error::{Error, Result};

/// Working precision and target accuracy of an analytic evaluation.
///
/// Invariant: `prec_bits ≥ 64` and `prec_bits ≥ 2·target_bits()`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionContext {
    prec_bits: u32,
    target_digits: u32,
    max_terms: usize,
}

const LOG2_10: f64 = std::f64::consts::LOG2_10;

impl PrecisionContext {
    pub const MAX_BITS: u32 = 1 << 16;
    pub const DEFAULT_MAX_TERMS: usize = 200_000;

    pub fn new(prec_bits: u32) -> Result<Self> {
        if !(64..=Self::MAX_BITS).contains(&prec_bits) {
            return Err(Error::Invalid(format!(
                "precision must lie in [64, {}] bits, got {prec_bits}",
                Self::MAX_BITS
            )));
        }
        let target_digits = ((prec_bits / 2) as f64 / LOG2_10).floor() as u32;
        Ok(Self {
            prec_bits,
            target_digits,
            max_terms: Self::DEFAULT_MAX_TERMS,
        })
    }

    /// Smallest context whose target is at least `digits` decimal digits.
    pub fn for_digits(digits: u32) -> Result<Self> {
        let bits = (2.0 * digits as f64 * LOG2_10).ceil() as u32 + 2;
        Self::new(bits.max(64))
    }

    pub fn with_max_terms(mut self, n: usize) -> Self {
        self.max_terms = n;
        self
    }

    pub fn prec_bits(&self) -> u32 {
        self.prec_bits
    }

    pub fn target_digits(&self) -> u32 {
        self.target_digits
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    /// Same context at twice the working precision.
    pub fn doubled(&self) -> Result<Self> {
        Ok(Self::new(self.prec_bits * 2)?.with_max_terms(self.max_terms))
    }

    /// `ln` of the tolerance for truncation tails: `2^{−prec−8}`.
    pub(crate) fn ln_tail_tol(&self) -> f64 {
        -((self.prec_bits + 8) as f64) * std::f64::consts::LN_2
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.prec_bits, Constant::Pi)
    }
}

/// Inflates a nonnegative bound to absorb f64 rounding.
pub(crate) fn up(x: f64) -> f64 {
    if x.is_nan() {
        return f64::INFINITY;
    }
    x * (1.0 + 4.0 * f64::EPSILON) + f64::MIN_POSITIVE
}

/// Upper bound for `exp(x)` as an f64, saturating at the smallest normal.
pub(crate) fn exp_bound(x: f64) -> f64 {
    if x < -700.0 {
        f64::MIN_POSITIVE
    } else {
        up(x.exp())
    }
}

/// A complex ball: midpoint plus an outward-rounded error radius.
///
/// The radius is an f64 and is never below the smallest normal f64, so
/// precisions far beyond 1000 bits gain nothing in certified accuracy.
#[derive(Clone, Debug)]
pub struct BigComplex {
    mid: Complex,
    rad: f64,
}

impl BigComplex {
    pub fn new(mid: Complex, rad: f64) -> Self {
        assert!(rad >= 0.0, "radius must be nonnegative");
        Self { mid, rad }
    }

    pub fn exact(mid: Complex) -> Self {
        Self { mid, rad: 0.0 }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Self::exact(Complex::with_val(prec, (re, im)))
    }

    pub fn from_int(prec: u32, n: i64) -> Self {
        Self::exact(Complex::with_val(prec, (n, 0)))
    }

    pub fn from_floats(re: Float, im: Float) -> Self {
        let prec = re.prec().max(im.prec());
        let mut b = Self::exact(Complex::with_val(prec, (re, im)));
        b.rad = b.eps();
        b
    }

    /// `(u + v√D)/w` for integers with `D < 0`.
    pub fn quadratic(prec: u32, u: i64, v: i64, disc: i64, w: i64) -> Self {
        let s = Float::with_val(prec, -disc).sqrt() * v / w;
        let re = Float::with_val(prec, u) / w;
        Self::from_floats(re, s)
    }

    /// The same ball with its midpoint rounded to `prec` bits.
    pub fn to_prec(&self, prec: u32) -> Self {
        Self::finish(Complex::with_val(prec, &self.mid), self.rad)
    }

    pub fn mid(&self) -> &Complex {
        &self.mid
    }

    pub fn rad(&self) -> f64 {
        self.rad
    }

    pub fn prec(&self) -> u32 {
        self.mid.prec().0.max(self.mid.prec().1)
    }

    pub fn real(&self) -> &Float {
        self.mid.real()
    }

    pub fn imag(&self) -> &Float {
        self.mid.imag()
    }

    /// Upper bound for `|mid|`.
    pub fn mid_abs_up(&self) -> f64 {
        let a = Float::with_val(self.prec(), self.mid.abs_ref());
        up(a.to_f64_round(Round::Up))
    }

    /// Lower bound for `|mid| − rad`; may be negative.
    pub fn abs_lower(&self) -> f64 {
        let a = Float::with_val(self.prec(), self.mid.abs_ref());
        let lo = a.to_f64_round(Round::Down) * (1.0 - 4.0 * f64::EPSILON);
        lo - self.rad
    }

    /// Upper bound for every `|z|` in the ball.
    pub fn abs_upper(&self) -> f64 {
        up(self.mid_abs_up() + self.rad)
    }

    /// Rounding error of the midpoint of a correctly rounded operation.
    fn eps(&self) -> f64 {
        let e = -(self.prec() as i32) + 2;
        let m = self.mid_abs_up();
        if m == 0.0 {
            0.0
        } else {
            up(m * 2f64.powi(e.max(-1070)))
        }
    }

    fn finish(mid: Complex, rad: f64) -> Self {
        let mut b = Self { mid, rad: 0.0 };
        b.rad = up(rad + b.eps());
        b
    }

    pub fn with_extra_radius(mut self, r: f64) -> Self {
        self.rad = up(self.rad + r);
        self
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::finish(
            Complex::with_val(self.prec(), &self.mid + &o.mid),
            self.rad + o.rad,
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::finish(
            Complex::with_val(self.prec(), &self.mid - &o.mid),
            self.rad + o.rad,
        )
    }

    pub fn neg(&self) -> Self {
        Self {
            mid: Complex::with_val(self.prec(), -&self.mid),
            rad: self.rad,
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            mid: Complex::with_val(self.prec(), self.mid.conj_ref()),
            rad: self.rad,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let r = self.mid_abs_up() * o.rad + o.mid_abs_up() * self.rad + self.rad * o.rad;
        Self::finish(Complex::with_val(self.prec(), &self.mid * &o.mid), up(r))
    }

    pub fn mul_int(&self, k: i64) -> Self {
        Self::finish(
            Complex::with_val(self.prec(), &self.mid * k),
            self.rad * (k.unsigned_abs() as f64),
        )
    }

    pub fn div_int(&self, k: i64) -> Self {
        assert!(k != 0, "division by zero");
        Self::finish(
            Complex::with_val(self.prec(), &self.mid / k),
            self.rad / (k.unsigned_abs() as f64),
        )
    }

    pub fn mul_float(&self, x: &Float) -> Self {
        let ax = up(Float::with_val(53, x.abs_ref()).to_f64_round(Round::Up));
        Self::finish(Complex::with_val(self.prec(), &self.mid * x), self.rad * ax)
    }

    /// `1/z`; fails when the ball contains 0.
    pub fn recip(&self) -> Result<Self> {
        let lo = self.abs_lower();
        if lo <= 0.0 {
            return Err(Error::Precision(
                "division by a ball containing zero".into(),
            ));
        }
        // |mid| ≥ lo + rad and every point of the ball has modulus ≥ lo.
        let r = self.rad / (lo * (lo + self.rad));
        let one = Complex::with_val(self.prec(), (1, 0));
        Ok(Self::finish(one / &self.mid, up(r)))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.recip()?))
    }

    pub fn pow_u(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::from_int(self.prec(), 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn exp(&self) -> Self {
        let m = Complex::with_val(self.prec(), self.mid.exp_ref());
        let abs = up(Float::with_val(53, m.abs_ref()).to_f64_round(Round::Up));
        Self::finish(m, up(abs * self.rad.exp_m1()))
    }

    /// Principal logarithm. The ball must avoid 0 and the negative real axis.
    pub fn ln(&self) -> Result<Self> {
        let lo = self.abs_lower();
        let re = self.real().to_f64();
        let im = self.imag().to_f64();
        if lo <= 0.0 || (re <= self.rad && im.abs() <= self.rad) {
            return Err(Error::Precision(
                "logarithm of a ball meeting the branch cut".into(),
            ));
        }
        let m = Complex::with_val(self.prec(), self.mid.ln_ref());
        Ok(Self::finish(m, up(self.rad / lo)))
    }

    /// Principal square root. The ball must avoid the closed negative real axis.
    pub fn sqrt(&self) -> Result<Self> {
        let lo = self.abs_lower();
        let re = self.real().to_f64();
        if lo <= 0.0 || (re <= self.rad && self.imag().to_f64().abs() <= self.rad) {
            return Err(Error::Precision(
                "square root of a ball meeting the branch cut".into(),
            ));
        }
        let m = Complex::with_val(self.prec(), self.mid.sqrt_ref());
        Ok(Self::finish(m, up(self.rad / lo.sqrt())))
    }

    /// `ln|z|` with its error bound.
    pub fn ln_abs(&self) -> Result<(Float, f64)> {
        let lo = self.abs_lower();
        if lo <= 0.0 {
            return Err(Error::Precision("log of a ball containing zero".into()));
        }
        let a = Float::with_val(self.prec(), self.mid.abs_ref());
        let l = a.ln();
        let e = up(self.rad / lo + l.to_f64().abs() * 2f64.powi(2 - self.prec() as i32));
        Ok((l, e))
    }

    /// `e(z) = exp(2πiz)`.
    pub fn e(&self) -> Self {
        let pi = Float::with_val(self.prec(), Constant::Pi);
        let two_pi_i = Complex::with_val(self.prec(), (0, 2 * pi));
        let w = Self::finish(
            Complex::with_val(self.prec(), &self.mid * &two_pi_i),
            self.rad * 2.0 * std::f64::consts::PI,
        );
        w.exp()
    }

    /// Whether the two balls intersect.
    pub fn overlaps(&self, o: &Self) -> bool {
        let d = self.sub(o);
        d.abs_lower() <= self.rad + o.rad
    }

    /// Upper bound for `|self − o|` over both balls.
    pub fn dist_upper(&self, o: &Self) -> f64 {
        self.sub(o).abs_upper()
    }

    /// Upper bound for `|Im z|` over the ball.
    pub fn imag_abs_upper(&self) -> f64 {
        up(Float::with_val(53, self.imag().abs_ref()).to_f64_round(Round::Up) + self.rad)
    }

    /// Nearest integer to the real part of the real part and an upper bound
    /// for the distance of the whole ball to it.
    pub fn nearest_integer(&self) -> (BigInt, f64) {
        let n = self.real().to_integer().expect("finite real part");
        let diff = Complex::with_val(self.prec(), &self.mid - &n);
        let d = up(Float::with_val(53, diff.abs_ref()).to_f64_round(Round::Up) + self.rad);
        let big = BigInt::from_str_radix(&n.to_string_radix(16), 16).expect("hex digits");
        (big, d)
    }

    /// Decimal rendering of the midpoint with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> (String, String) {
        (
            self.real().to_string_radix(10, Some(digits)),
            self.imag().to_string_radix(10, Some(digits)),
        )
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_decimal(25);
        write!(f, "({re} + {im}i) ± {:e}", self.rad)
    }
}
