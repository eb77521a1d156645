//! Brute-force oracles, independent of the library code paths they check.
#![allow(dead_code)]

/// Negative fundamental discriminants with `|D| ≤ bound`, by the squarefree
/// definition.
pub fn fundamental_discs(bound: i64) -> Vec<i64> {
    (3..=bound)
        .map(|a| -a)
        .filter(|&d| {
            let sf = |n: i64| (2..).take_while(|k| k * k <= n).all(|k| n % (k * k) != 0);
            match d.rem_euclid(4) {
                1 => sf(-d),
                0 => {
                    let e = d / 4;
                    matches!(e.rem_euclid(4), 2 | 3) && sf(-e)
                }
                _ => false,
            }
        })
        .collect()
}

pub fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|k| k * k <= n)
            .all(|k| !n.is_multiple_of(k))
}

/// Kronecker symbol `(D/p)` for a prime `p` by counting roots of
/// `x² ≡ D (mod 4p)`-style splitting: number of solutions minus one.
pub fn kronecker_prime(d: i64, p: u64) -> i32 {
    if p == 2 {
        return match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    let p = p as i64;
    let r = d.rem_euclid(p);
    if r == 0 {
        return 0;
    }
    if (1..p).any(|x| (x * x) % p == r) {
        1
    } else {
        -1
    }
}

/// `Σ_{k | n} (D/k)`: the number of ideals of norm n for fundamental D.
pub fn ideal_count(d: i64, n: u64) -> u64 {
    let chi = |k: u64| -> i64 {
        // Multiplicative extension over the factorization of k.
        let mut m = k;
        let mut out = 1i64;
        let mut p = 2;
        while m > 1 {
            if p * p > m {
                p = m;
            }
            while m.is_multiple_of(p) {
                out *= kronecker_prime(d, p) as i64;
                m /= p;
            }
            p += 1;
        }
        out
    };
    (1..=n)
        .filter(|k| n.is_multiple_of(*k))
        .map(chi)
        .sum::<i64>() as u64
}

/// `#{(x, y) ∈ Z² : ax² + bxy + cy² = n}`.
pub fn representations(f: (i64, i64, i64), n: i64) -> u64 {
    let (a, b, c) = f;
    let disc = b * b - 4 * a * c;
    // 4a·n = (2ax + by)² + |D|y².
    let ymax = ((4 * a * n) as f64 / -disc as f64).sqrt() as i64 + 1;
    let mut count = 0;
    for y in -ymax..=ymax {
        let xmax = ((4 * c * n) as f64 / -disc as f64).sqrt() as i64 + 1;
        for x in -xmax..=xmax {
            if a * x * x + b * x * y + c * y * y == n {
                count += 1;
            }
        }
    }
    count
}

/// Number of units of the order of discriminant D.
pub fn units(d: i64) -> u64 {
    match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    }
}

fn squarefree_part(mut n: i64) -> i64 {
    let mut k = 2;
    while k * k <= n.abs() {
        while n % (k * k) == 0 {
            n /= k * k;
        }
        k += 1;
    }
    n
}

/// `(a, b)_p` from solvability of `ax² + by² = z²`.
///
/// After reduction to squarefree `a, b`, a solution with `p ∤ gcd(x, y)`
/// modulo `p²` (odd p) or `2⁵` lifts to `Q_p`, and every `Q_p` solution
/// scales to one of that shape.
pub fn hilbert_oracle(a: i64, b: i64, p: u64) -> i8 {
    assert!(a != 0 && b != 0);
    let (a, b) = (squarefree_part(a), squarefree_part(b));
    let p = p as i64;
    let modulus = if p == 2 { 32 } else { p * p };
    let mut square = vec![false; modulus as usize];
    for z in 0..modulus {
        square[((z * z) % modulus) as usize] = true;
    }
    let (ar, br) = (a.rem_euclid(modulus), b.rem_euclid(modulus));
    for x in 0..modulus {
        for y in 0..modulus {
            if x % p == 0 && y % p == 0 {
                continue;
            }
            let v = (ar * x % modulus * x + br * y % modulus * y) % modulus;
            if square[v as usize] {
                return 1;
            }
        }
    }
    -1
}

/// `(a, b)_∞`.
pub fn hilbert_real(a: i64, b: i64) -> i8 {
    if a < 0 && b < 0 {
        -1
    } else {
        1
    }
}

/// Primes dividing `n`.
pub fn primes_of(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while n > 1 {
        if p * p > n {
            out.push(n);
            break;
        }
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    out
}

/// Gauss reduction by the textbook loop, independent of the library.
pub fn reduce_oracle(mut f: (i64, i64, i64)) -> (i64, i64, i64) {
    loop {
        let (a, b, c) = f;
        if b > a || b <= -a {
            // Translate b into (−a, a].
            let k = (a - b).div_euclid(2 * a);
            let nb = b + 2 * a * k;
            let nc = (nb * nb - (b * b - 4 * a * c)) / (4 * a);
            f = (a, nb, nc);
            continue;
        }
        if a > c {
            f = (c, -b, a);
            continue;
        }
        if a == c && b < 0 {
            f = (a, -b, c);
            continue;
        }
        return f;
    }
}

/// `g·Q` for `g = [[p, q], [r, s]]`: `Q(px + qy, rx + sy)`.
pub fn act(f: (i64, i64, i64), g: [[i64; 2]; 2]) -> (i64, i64, i64) {
    let (a, b, c) = f;
    let [[p, q], [r, s]] = g;
    (
        a * p * p + b * p * r + c * r * r,
        2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
        a * q * q + b * q * s + c * s * s,
    )
}

/// Integers `e ≡ −1 (mod q)` for `q ∈ S` and `≡ 1` otherwise, one per
/// subset `S` of the primes of `|D|` modulo complement.
pub fn sign_flip_multipliers(dabs: u64) -> Vec<i64> {
    let primes = primes_of(dabs);
    let t = primes.len();
    let mut out = Vec::new();
    // Subsets avoiding the last prime represent the quotient by complement.
    for mask in 0u32..(1 << (t - 1)) {
        let e = (1..dabs as i64)
            .find(|e| {
                primes.iter().enumerate().all(|(i, &q)| {
                    let want = if mask >> i & 1 == 1 { q as i64 - 1 } else { 1 };
                    e.rem_euclid(q as i64) == want % q as i64
                })
            })
            .expect("CRT solution");
        out.push(e);
    }
    out
}
