//! Elementary integer and rational helpers shared by the exact modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Canonical `"p/q"` rendering with `q ≥ 1`; integers keep the `/1`.
pub fn fmt_rational(x: &Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// Returns `(g, x, y)` with `a·x + b·y = g = gcd(a, b) ≥ 0`.
pub fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

pub fn mod_inv(a: i128, m: i128) -> Option<i128> {
    let (g, x, _) = xgcd(a.rem_euclid(m), m);
    (g == 1).then(|| x.rem_euclid(m))
}

/// Solves `x ≡ r1 (mod m1)`, `x ≡ r2 (mod m2)`; returns `(x, lcm)` with `0 ≤ x < lcm`.
pub fn crt(r1: i128, m1: i128, r2: i128, m2: i128) -> Option<(i128, i128)> {
    let (g, p, _) = xgcd(m1, m2);
    if (r2 - r1) % g != 0 {
        return None;
    }
    let l = m1 / g * m2;
    let k = ((r2 - r1) / g).rem_euclid(m2 / g) * p.rem_euclid(m2 / g) % (m2 / g);
    Some(((r1 + m1 * k).rem_euclid(l), l))
}

pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

pub fn is_square(n: i128) -> bool {
    n >= 0 && {
        let r = isqrt(n as u128);
        r * r == n as u128
    }
}

/// Trial-division factorization, primes ascending.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && matches!(factor(n).as_slice(), [(_, 1)])
}

pub fn is_squarefree(n: u64) -> bool {
    n >= 1 && factor(n).iter().all(|&(_, e)| e == 1)
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factor(n).into_iter().map(|(p, _)| p).collect()
}

pub fn big_to_u64(x: &BigInt) -> Result<u64> {
    x.abs()
        .to_u64()
        .ok_or_else(|| Error::Overflow(x.to_string()))
}

/// Exponent of `p` in a nonzero integer.
pub fn ord_int(x: &BigInt, p: u64) -> u32 {
    debug_assert!(!x.is_zero());
    let p = BigInt::from(p);
    let mut x = x.clone();
    let mut e = 0;
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return e;
        }
        x = q;
        e += 1;
    }
}

/// Exponent of `p` in a nonzero rational.
pub fn ord_rat(x: &Rat, p: u64) -> i64 {
    ord_int(x.numer(), p) as i64 - ord_int(x.denom(), p) as i64
}

pub fn rat_to_u64(x: &Rat) -> Option<u64> {
    if x.is_integer() && x.is_positive() {
        x.numer().to_u64()
    } else {
        None
    }
}

/// Kronecker symbol `(d | n)` for `n ≥ 1`.
pub fn kronecker(d: i64, n: u64) -> i32 {
    let mut result = 1;
    let mut n = n;
    let mut a = d as i128;
    if n == 0 {
        return if d.abs() == 1 { 1 } else { 0 };
    }
    while n.is_multiple_of(2) {
        n /= 2;
        match a.rem_euclid(8) {
            0 | 2 | 4 | 6 => return 0,
            3 | 5 => result = -result,
            _ => {}
        }
    }
    // Jacobi symbol (a | n), n odd.
    let mut n = n as i128;
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

fn pow_mod(mut b: u128, mut e: u128, m: u128) -> u128 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Square root of `a` modulo an odd prime `p` (Tonelli–Shanks).
pub fn sqrt_mod_prime(a: i64, p: u64) -> Option<u64> {
    let p128 = p as u128;
    let a = (a as i128).rem_euclid(p as i128) as u128;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p128 - 1) / 2, p128) != 1 {
        return None;
    }
    let (mut q, mut s) = (p128 - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2u128;
    while pow_mod(z, (p128 - 1) / 2, p128) != p128 - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p128);
    let mut t = pow_mod(a, q, p128);
    let mut r = pow_mod(a, q.div_ceil(2), p128);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = tt * tt % p128;
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p128);
        m = i;
        c = b * b % p128;
        t = t * c % p128;
        r = r * b % p128;
    }
    Some(r as u64)
}

/// Smallest `b ∈ [0, 2p)` with `b² ≡ disc (mod 4p)`, if any.
pub fn disc_sqrt_mod(disc: i64, p: u64) -> Option<i64> {
    let four_p = 4 * p as i128;
    let ok = |b: i128| (b * b - disc as i128).rem_euclid(four_p) == 0;
    if p == 2 {
        return (0..4).find(|&b| ok(b)).map(|b| b as i64);
    }
    let s = sqrt_mod_prime(disc, p)? as i128;
    let p = p as i128;
    let mut cands: Vec<i128> = [s, p - s, s + p, 2 * p - s]
        .into_iter()
        .map(|b| b.rem_euclid(2 * p))
        .filter(|&b| ok(b))
        .collect();
    cands.sort_unstable();
    cands.first().map(|&b| b as i64)
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}
