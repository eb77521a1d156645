use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::arith::{fmt_rational, ord_rat, parse_rational, rat_int, Rat};
use crate::error::{Error, Result};
use crate::quadarith::BinaryQF;

/// A truncated Laurent series `Σ c_e q^{e/den} + O(q^{order/den})` with exact
/// rational coefficients. Every stored exponent is below `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactQSeries {
    den: u64,
    coeffs: BTreeMap<i64, Rat>,
    order: i64,
}

impl ExactQSeries {
    pub fn zero(den: u64, order: i64) -> Self {
        assert!(den > 0, "series denominator must be positive");
        Self {
            den,
            coeffs: BTreeMap::new(),
            order,
        }
    }

    pub fn from_coeffs(den: u64, order: i64, coeffs: impl IntoIterator<Item = (i64, Rat)>) -> Self {
        let mut s = Self::zero(den, order);
        for (e, c) in coeffs {
            s.add_coeff(e, c);
        }
        s
    }

    /// Integer coefficients `c_0, c_1, …` starting at exponent `start`.
    pub fn from_ints(start: i64, order: i64, coeffs: &[i64]) -> Self {
        Self::from_coeffs(
            1,
            order,
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (start + i as i64, rat_int(c))),
        )
    }

    pub fn monomial(c: Rat, e: i64, den: u64, order: i64) -> Self {
        Self::from_coeffs(den, order, [(e, c)])
    }

    fn add_coeff(&mut self, e: i64, c: Rat) {
        if e >= self.order || c.is_zero() {
            return;
        }
        let v = self.coeffs.entry(e).or_insert_with(Rat::zero);
        *v += c;
        if v.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn coeff(&self, e: i64) -> Rat {
        self.coeffs.get(&e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i64, &Rat)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    /// Exponent of the leading nonzero term.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Integer coefficients `c_start..c_{end−1}`; errors on non-integers.
    pub fn int_coeffs(&self, start: i64, end: i64) -> Result<Vec<BigInt>> {
        if end > self.order {
            return Err(Error::Invalid(format!(
                "coefficient {end} is beyond the truncation {}",
                self.order
            )));
        }
        (start..end)
            .map(|e| {
                let c = self.coeff(e);
                if c.is_integer() {
                    Ok(c.to_integer())
                } else {
                    Err(Error::Invalid(format!(
                        "coefficient of q^{e} is {c}, not an integer"
                    )))
                }
            })
            .collect()
    }

    /// Same series with exponents in units of `1/new_den`.
    pub fn with_den(&self, new_den: u64) -> Result<Self> {
        if !new_den.is_multiple_of(self.den) {
            return Err(Error::Invalid(format!(
                "cannot rewrite denominator {} as {new_den}",
                self.den
            )));
        }
        let k = (new_den / self.den) as i64;
        Ok(Self {
            den: new_den,
            coeffs: self
                .coeffs
                .iter()
                .map(|(&e, c)| (e * k, c.clone()))
                .collect(),
            order: self.order * k,
        })
    }

    fn common(&self, o: &Self) -> Result<(Self, Self)> {
        let l = num_integer::lcm(self.den, o.den);
        Ok((self.with_den(l)?, o.with_den(l)?))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let (a, b) = self.common(o)?;
        let mut out = Self::zero(a.den, a.order.min(b.order));
        for (e, c) in a.coeffs().chain(b.coeffs()) {
            out.add_coeff(e, c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &Rat) -> Self {
        let mut out = Self::zero(self.den, self.order);
        for (e, c) in self.coeffs() {
            out.add_coeff(e, c * k);
        }
        out
    }

    /// Multiplies by `q^{k/den}`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            den: self.den,
            coeffs: self
                .coeffs
                .iter()
                .map(|(&e, c)| (e + k, c.clone()))
                .collect(),
            order: self.order + k,
        }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let (a, b) = self.common(o)?;
        let (Some(va), Some(vb)) = (a.valuation(), b.valuation()) else {
            let order = match (a.valuation(), b.valuation()) {
                (Some(v), None) => v + b.order,
                (None, Some(v)) => v + a.order,
                _ => a.order + b.order,
            };
            return Ok(Self::zero(a.den, order));
        };
        let order = (a.order + vb).min(b.order + va);
        let mut acc: BTreeMap<i64, Rat> = BTreeMap::new();
        for (ea, ca) in a.coeffs() {
            if ea + vb >= order {
                break;
            }
            for (eb, cb) in b.coeffs() {
                if ea + eb >= order {
                    break;
                }
                *acc.entry(ea + eb).or_insert_with(Rat::zero) += ca * cb;
            }
        }
        Ok(Self::from_coeffs(a.den, order, acc))
    }

    /// `1/f`; the relative precision is preserved.
    pub fn inverse(&self) -> Result<Self> {
        let v = self
            .valuation()
            .ok_or_else(|| Error::Invalid("inverse of a zero series".into()))?;
        let lead = self.coeff(v);
        let rel = self.order - v;
        // f = lead·q^v·(1 + g); solve (1 + g)(1 + u) = 1 term by term.
        let g: Vec<Rat> = (0..rel).map(|i| self.coeff(v + i) / &lead).collect();
        let mut u = vec![Rat::zero(); rel as usize];
        if rel > 0 {
            u[0] = Rat::one();
        }
        for k in 1..rel as usize {
            let mut s = Rat::zero();
            for i in 1..=k {
                if !g[i].is_zero() {
                    s += &g[i] * &u[k - i];
                }
            }
            u[k] = -s;
        }
        let inv_lead = lead.recip();
        Ok(Self::from_coeffs(
            self.den,
            -v + rel,
            u.into_iter()
                .enumerate()
                .map(|(i, c)| (-v + i as i64, c * &inv_lead)),
        ))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.mul(&o.inverse()?)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::monomial(Rat::one(), 0, self.den, i64::MAX / 4);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Substitutes `q ↦ q^k`.
    pub fn dilate(&self, k: u64) -> Self {
        let k = k as i64;
        Self {
            den: self.den,
            coeffs: self
                .coeffs
                .iter()
                .map(|(&e, c)| (e * k, c.clone()))
                .collect(),
            order: self.order * k,
        }
    }

    /// `Σ_{(x,y) ∈ Z²} q^{Q(x,y)}` for a positive definite form.
    pub fn theta(form: &BinaryQF, order: i64) -> Result<Self> {
        if form.a <= 0 || form.disc() >= 0 {
            return Err(Error::Invalid(format!(
                "theta series needs a positive definite form, got {form}"
            )));
        }
        let dabs = -form.disc() as i128;
        let (a, c) = (form.a as i128, form.c as i128);
        let n = order.max(0) as i128;
        // Q(x, y) ≥ |D| y²/(4a) and ≥ |D| x²/(4c).
        let ybound = crate::arith::isqrt((4 * a * n / dabs) as u128) as i64 + 1;
        let xbound = crate::arith::isqrt((4 * c * n / dabs) as u128) as i64 + 1;
        let mut counts: BTreeMap<i64, i64> = BTreeMap::new();
        for y in -ybound..=ybound {
            for x in -xbound..=xbound {
                let v = form.eval(x, y);
                if v < n {
                    *counts.entry(v as i64).or_insert(0) += 1;
                }
            }
        }
        Ok(Self::from_coeffs(
            1,
            order,
            counts.into_iter().map(|(e, k)| (e, rat_int(k))),
        ))
    }

    /// `Π_{n≥1} (1 − q^n)` via Euler's pentagonal number theorem.
    fn euler_product(order: i64) -> Self {
        let mut s = Self::zero(1, order);
        let mut k: i64 = 0;
        loop {
            let e1 = k * (3 * k - 1) / 2;
            let e2 = k * (3 * k + 1) / 2;
            if e1 >= order && e2 >= order {
                break;
            }
            let sign = if k % 2 == 0 { 1 } else { -1 };
            s.add_coeff(e1, rat_int(sign));
            if k > 0 {
                s.add_coeff(e2, rat_int(sign));
            }
            k += 1;
        }
        s
    }

    /// `Π_i η(k_i z)^{e_i}` through `O(q^{order})`. The exponent denominator
    /// is 1 when `Σ k_i e_i ≡ 0 (mod 24)` and 24 otherwise.
    pub fn eta_product(factors: &[(u64, i64)], order: i64) -> Result<Self> {
        let s: i64 = factors.iter().map(|&(k, e)| k as i64 * e).sum();
        let (den, shift) = if s % 24 == 0 {
            (1u64, s / 24)
        } else {
            (24u64, s)
        };
        // Product part in units of q, known below `need`.
        let need = if den == 1 {
            order - shift
        } else {
            (24 * order - shift).div_euclid(24) + 1
        };
        let mut acc = Self::monomial(Rat::one(), 0, 1, need.max(1));
        for &(k, e) in factors {
            if k == 0 {
                return Err(Error::Invalid("eta(0 z) is undefined".into()));
            }
            let base = Self::euler_product(need.max(1)).dilate(k);
            let base =
                Self::from_coeffs(1, need.max(1), base.coeffs().map(|(e, c)| (e, c.clone())));
            let p = base.pow(e.unsigned_abs() as u32)?;
            let p = if e < 0 { p.inverse()? } else { p };
            acc = acc.mul(&p)?;
        }
        let acc = Self::from_coeffs(1, need.max(1), acc.coeffs().map(|(e, c)| (e, c.clone())));
        let out = acc.with_den(den)?.shift(shift);
        Ok(Self::from_coeffs(
            den,
            order * den as i64,
            out.coeffs().map(|(e, c)| (e, c.clone())),
        ))
    }

    /// `E₄ = 1 + 240 Σ σ₃(n) qⁿ`.
    pub fn e4(order: i64) -> Self {
        let sigma3 = |n: i64| -> i64 { (1..=n).filter(|d| n % d == 0).map(|d| d * d * d).sum() };
        Self::from_coeffs(
            1,
            order,
            (0..order).map(|n| (n, rat_int(if n == 0 { 1 } else { 240 * sigma3(n) }))),
        )
    }

    /// `Δ = η²⁴`.
    pub fn delta(order: i64) -> Result<Self> {
        Self::eta_product(&[(1, 24)], order)
    }

    /// `j = E₄³/Δ` through `O(q^{order})`.
    pub fn j(order: i64) -> Result<Self> {
        let e4 = Self::e4(order + 1);
        e4.pow(3)?.div(&Self::delta(order + 2)?)
    }

    /// `(θ_{[1,1,12]} − θ_{[2,−1,6]})/(2η(z)η(47z)) + 1`.
    pub fn hauptmodul47(order: i64) -> Result<Self> {
        let num = Self::theta(&BinaryQF::new(1, 1, 12), order + 3)?
            .sub(&Self::theta(&BinaryQF::new(2, -1, 6), order + 3)?)?;
        let den = Self::eta_product(&[(1, 1), (47, 1)], order + 5)?.scale(&rat_int(2));
        let q = num.div(&den)?;
        let q = Self::from_coeffs(1, order, q.coeffs().map(|(e, c)| (e, c.clone())));
        q.add(&Self::monomial(Rat::one(), 0, 1, order))
    }

    /// Built-in series by name: `hauptmodul47`, `j`, `e4`, `delta`.
    pub fn named(name: &str, order: i64) -> Result<Self> {
        match name {
            "hauptmodul47" => Self::hauptmodul47(order),
            "j" => Self::j(order),
            "e4" => Ok(Self::e4(order)),
            "delta" => Self::delta(order),
            _ => Err(Error::Invalid(format!("unknown series {name}"))),
        }
    }

    /// `{"den": 1, "order": 10, "coeffs": [{"e": -1, "c": "1/1"}, ...]}`.
    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self
            .coeffs()
            .map(|(e, c)| json!({"e": e, "c": fmt_rational(c)}))
            .collect();
        json!({"den": self.den, "order": self.order, "coeffs": coeffs})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("series JSON: {what}"));
        let den = v["den"]
            .as_u64()
            .filter(|&d| d > 0)
            .ok_or_else(|| bad("den"))?;
        let order = v["order"].as_i64().ok_or_else(|| bad("order"))?;
        let mut out = Self::zero(den, order);
        for c in v["coeffs"].as_array().ok_or_else(|| bad("coeffs"))? {
            let e = c["e"].as_i64().ok_or_else(|| bad("e"))?;
            if e >= order {
                return Err(bad("exponent beyond the truncation order"));
            }
            out.add_coeff(e, parse_rational(c["c"].as_str().ok_or_else(|| bad("c"))?)?);
        }
        Ok(out)
    }
}

/// Exponents of `f = lead·q^v·Π_{n≥1} (1 − qⁿ)^{c(n)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorcherdsExponents {
    pub weyl: i64,
    pub lead: Rat,
    /// `c(1), c(2), …` as far as the truncation determines them.
    pub exponents: Vec<BigInt>,
}

/// Recovers the product exponents through the logarithmic derivative
/// `q f'/f = v − Σ_N (Σ_{n|N} n c(n)) q^N`.
pub fn borcherds_exponents(f: &ExactQSeries) -> Result<BorcherdsExponents> {
    if f.den() != 1 {
        return Err(Error::Unsupported(
            "product exponents need integral q-exponents".into(),
        ));
    }
    let v = f
        .valuation()
        .ok_or_else(|| Error::Invalid("zero series has no product".into()))?;
    let lead = f.coeff(v);
    let rel = (f.order() - v) as usize;
    let a: Vec<Rat> = (0..rel).map(|i| f.coeff(v + i as i64) / &lead).collect();
    // h = q g'/g with g = Σ a_i q^i: N a_N = Σ_{i=1}^{N} h_i a_{N−i}.
    let mut h = vec![Rat::zero(); rel];
    for n in 1..rel {
        let mut s = rat_int(n as i64) * &a[n];
        for i in 1..n {
            s -= &h[i] * &a[n - i];
        }
        h[n] = s;
    }
    let mut c: Vec<Rat> = vec![Rat::zero(); rel];
    for n in 1..rel {
        let mut b = -h[n].clone();
        for (d, cd) in c.iter().enumerate().take(n).skip(1) {
            if n % d == 0 {
                b -= rat_int(d as i64) * cd;
            }
        }
        c[n] = b / rat_int(n as i64);
    }
    let exponents = c
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(n, x)| {
            if x.is_integer() {
                Ok(x.to_integer())
            } else {
                Err(Error::Invalid(format!(
                    "exponent c({n}) = {x} is not an integer"
                )))
            }
        })
        .collect::<Result<_>>()?;
    Ok(BorcherdsExponents {
        weyl: v,
        lead,
        exponents,
    })
}

/// Expands `lead·q^v·Π (1 − qⁿ)^{c(n)}` through `O(q^{v + len + 1})`.
pub fn borcherds_series(b: &BorcherdsExponents) -> ExactQSeries {
    let rel = b.exponents.len() + 1;
    let c = |n: usize| -> Rat { Rat::from_integer(b.exponents[n - 1].clone()) };
    // h_N = −Σ_{n|N} n c(n), then N a_N = Σ h_i a_{N−i}.
    let h: Vec<Rat> = (0..rel)
        .map(|n| {
            if n == 0 {
                return Rat::zero();
            }
            -(1..=n)
                .filter(|d| n % d == 0)
                .map(|d| rat_int(d as i64) * c(d))
                .sum::<Rat>()
        })
        .collect();
    let mut a = vec![Rat::zero(); rel];
    a[0] = Rat::one();
    for n in 1..rel {
        let s: Rat = (1..=n).map(|i| &h[i] * &a[n - i]).sum();
        a[n] = s / rat_int(n as i64);
    }
    ExactQSeries::from_coeffs(
        1,
        b.weyl + rel as i64,
        a.into_iter()
            .enumerate()
            .map(|(i, x)| (b.weyl + i as i64, x * &b.lead)),
    )
}

/// `inf_n ord_p c(n)` over the stored coefficients.
pub fn fourier_content(f: &ExactQSeries, p: u64) -> Result<i64> {
    if !crate::arith::is_prime(p) {
        return Err(Error::Invalid(format!("{p} is not prime")));
    }
    f.coeffs()
        .map(|(_, c)| ord_rat(c, p))
        .min()
        .ok_or_else(|| Error::Invalid("Fourier content of a zero series".into()))
}

/// Primes dividing the content of an integral series, or appearing in a
/// denominator.
pub fn content_primes(f: &ExactQSeries) -> Result<Vec<u64>> {
    let mut g = BigInt::zero();
    let mut l = BigInt::one();
    for (_, c) in f.coeffs() {
        g = num_integer::Integer::gcd(&g, c.numer());
        l = num_integer::Integer::lcm(&l, c.denom());
    }
    if g.is_zero() {
        return Err(Error::Invalid("Fourier content of a zero series".into()));
    }
    let g = crate::arith::big_to_u64(&g.abs())?;
    let l = crate::arith::big_to_u64(&l)?;
    let mut ps = crate::arith::prime_divisors(g);
    ps.extend(crate::arith::prime_divisors(l));
    ps.sort_unstable();
    ps.dedup();
    Ok(ps)
}
