use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, is_squarefree, kronecker};
use crate::error::{Error, Result};

/// How a rational prime decomposes in the quadratic order of a discriminant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

/// A negative discriminant `D ≡ 0, 1 (mod 4)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Discriminant {
    value: i64,
    fundamental: bool,
}

impl Discriminant {
    pub fn new(value: i64) -> Result<Self> {
        if value >= 0 {
            return Err(Error::Discriminant(value, "must be negative"));
        }
        if !matches!(value.rem_euclid(4), 0 | 1) {
            return Err(Error::Discriminant(value, "must be 0 or 1 mod 4"));
        }
        Ok(Self {
            value,
            fundamental: Self::check_fundamental(value),
        })
    }

    /// Like [`Discriminant::new`] but rejects non-fundamental values.
    pub fn fundamental(value: i64) -> Result<Self> {
        let d = Self::new(value)?;
        if !d.fundamental {
            return Err(Error::NotFundamental(value));
        }
        Ok(d)
    }

    fn check_fundamental(v: i64) -> bool {
        let a = v.unsigned_abs();
        if v.rem_euclid(4) == 1 {
            return is_squarefree(a);
        }
        let m = v / 4;
        is_squarefree(m.unsigned_abs()) && matches!(m.rem_euclid(4), 2 | 3)
    }

    pub fn value(&self) -> i64 {
        self.value
    }

    pub fn abs(&self) -> u64 {
        self.value.unsigned_abs()
    }

    pub fn is_fundamental(&self) -> bool {
        self.fundamental
    }

    pub fn is_odd(&self) -> bool {
        self.value % 2 != 0
    }

    pub fn unit_count(&self) -> u32 {
        match self.value {
            -3 => 6,
            -4 => 4,
            _ => 2,
        }
    }

    /// `D = −l` with `l` prime (so `l ≡ 3 mod 4`).
    pub fn is_prime_discriminant(&self) -> bool {
        self.is_odd() && crate::arith::is_prime(self.abs())
    }

    /// Primes dividing `D`, ascending; these index the genus characters.
    pub fn ramified_primes(&self) -> Vec<u64> {
        crate::arith::prime_divisors(self.abs())
    }

    pub fn splitting(&self, p: u64) -> Splitting {
        match kronecker(self.value, p) {
            1 => Splitting::Split,
            -1 => Splitting::Inert,
            _ => Splitting::Ramified,
        }
    }

    /// Class number, by counting reduced forms.
    pub fn class_number(&self) -> usize {
        reduced_forms(self.value).len()
    }
}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// The form `a x² + b x y + c y²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BinaryQF {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl BinaryQF {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        Self { a, b, c }
    }

    /// The form `[a, b, (b² − D)/(4a)]`, if integral.
    pub fn from_abd(a: i64, b: i64, disc: i64) -> Result<Self> {
        let num = b as i128 * b as i128 - disc as i128;
        let den = 4 * a as i128;
        if a == 0 || num % den != 0 {
            return Err(Error::Form {
                a,
                b,
                c: 0,
                why: "b^2 - D not divisible by 4a",
            });
        }
        let c =
            i64::try_from(num / den).map_err(|_| Error::Overflow(format!("c for [{a},{b},·]")))?;
        Ok(Self { a, b, c })
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn eval(&self, x: i64, y: i64) -> i128 {
        let (x, y) = (x as i128, y as i128);
        self.a as i128 * x * x + self.b as i128 * x * y + self.c as i128 * y * y
    }

    pub fn is_primitive(&self) -> bool {
        gcd(gcd(self.a, self.b), self.c).abs() == 1
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        a > 0 && b.abs() <= a && a <= c && !((b.abs() == a || a == c) && b < 0)
    }

    /// `[a, −b, c]`, the inverse class.
    pub fn opposite(&self) -> Self {
        Self::new(self.a, -self.b, self.c)
    }

    /// `Q ∘ γ` for `γ = [[p, q], [r, s]]`, i.e. `Q(p x + q y, r x + s y)`.
    pub fn act(&self, g: [[i64; 2]; 2]) -> Self {
        let [[p, q], [r, s]] = g;
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let (p, q, r, s) = (p as i128, q as i128, r as i128, s as i128);
        let na = a * p * p + b * p * r + c * r * r;
        let nb = 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s;
        let nc = a * q * q + b * q * s + c * s * s;
        Self::new(na as i64, nb as i64, nc as i64)
    }

    pub fn label(&self) -> String {
        format!("[{},{},{}]", self.a, self.b, self.c)
    }

    fn validate(&self) -> Result<()> {
        let d = self.b as i128 * self.b as i128 - 4 * self.a as i128 * self.c as i128;
        if d >= 0 {
            return Err(self.err("discriminant must be negative"));
        }
        if self.a <= 0 {
            return Err(self.err("leading coefficient must be positive"));
        }
        Ok(())
    }

    fn err(&self, why: &'static str) -> Error {
        Error::Form {
            a: self.a,
            b: self.b,
            c: self.c,
            why,
        }
    }
}

impl fmt::Display for BinaryQF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Reduces a positive definite form to the unique reduced form in its
/// `SL2(Z)`-orbit.
pub fn reduce_form(q: &BinaryQF) -> Result<BinaryQF> {
    q.validate()?;
    Ok(reduce_unchecked(q))
}

pub(crate) fn reduce_unchecked(q: &BinaryQF) -> BinaryQF {
    let (mut a, mut b, mut c) = (q.a as i128, q.b as i128, q.c as i128);
    loop {
        // Normalize b into (−a, a].
        if b > a || b <= -a {
            let two_a = 2 * a;
            let k = (a - b).div_euclid(two_a);
            let nb = b + k * two_a;
            c += k * (b + a * k);
            b = nb;
        }
        if a > c {
            (a, b, c) = (c, -b, a);
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        break;
    }
    BinaryQF::new(a as i64, b as i64, c as i64)
}

/// All primitive reduced forms of discriminant `disc`, sorted by `(a, b, c)`.
pub fn reduced_forms(disc: i64) -> Vec<BinaryQF> {
    let mut out = Vec::new();
    let absd = disc.unsigned_abs() as i64;
    let mut a = 1i64;
    while 3 * a * a <= absd {
        for b in -a + 1..=a {
            if (b - disc).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = BinaryQF::new(a, b, num / (4 * a));
            if f.is_reduced() && f.is_primitive() {
                out.push(f);
            }
        }
        a += 1;
    }
    out.sort();
    out
}

/// Dirichlet composition of two primitive forms of the same discriminant,
/// returned reduced (Cohen, Algorithm 5.4.7).
pub fn compose_forms(f1: &BinaryQF, f2: &BinaryQF) -> BinaryQF {
    let (mut f1, mut f2) = (*f1, *f2);
    if f1.a > f2.a {
        std::mem::swap(&mut f1, &mut f2);
    }
    let (a1, b1) = (f1.a as i128, f1.b as i128);
    let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
    let s = (b1 + b2) / 2;
    let n = b2 - s;
    let (d, y1) = if a2 % a1 == 0 {
        (a1, 0)
    } else {
        let (d, u, _) = crate::arith::xgcd(a2, a1);
        (d, u)
    };
    let (d1, x2, y2) = if s % d == 0 {
        (d, 0, -1)
    } else {
        let (d1, x2, y2) = crate::arith::xgcd(s, d);
        (d1, x2, -y2)
    };
    let v1 = a1 / d1;
    let v2 = a2 / d1;
    let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
    let b3 = b2 + 2 * v2 * r;
    let a3 = v1 * v2;
    let c3 = (c2 * d1 + r * (b2 + v2 * r)) / v1;
    reduce_unchecked(&BinaryQF::new(a3 as i64, b3 as i64, c3 as i64))
}
