//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! with its runtime and budget, and exits nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::Signed;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use singmod::analytic::{
    class_polynomial, conjugate_values, conjugation_fixed_classes, eta, gz_log_norm, hauptmodul47,
    norm_crosscheck, theta_form, BigComplex, IntPoly, Model, PrecisionContext,
};
use singmod::arith::{rat, rat_int, Rat};
use singmod::cmval::{enumerate_terms, gz_dorman_level1, valuations, ExactQSeries, HeegnerDivisor};
use singmod::localsym::{diff_set, hilbert_symbol, nu_p, o_m, relevant_places};
use singmod::quadarith::{class_group, compose_forms, rho_all, BinaryQF, Discriminant};

type Check = Result<(), String>;

/// Name, time budget and check.
type Criterion = (&'static str, Duration, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

/// The divisor `½Z(−11, 41) + ½Z(−11, −41)` on `X₀(47)`.
fn divisor_47() -> HeegnerDivisor {
    HeegnerDivisor::new(47)
        .and_then(|d| d.with_term(-11, 41, rat(1, 2)))
        .and_then(|d| d.with_term(-11, -41, rat(1, 2)))
        .expect("valid divisor")
}

fn polynomial_47(d: i64, rho: i64) -> Result<(Vec<BigComplex>, IntPoly), String> {
    let cg = class_group(d).map_err(err)?;
    let ctx = PrecisionContext::new(256).map_err(err)?;
    let vals: Vec<BigComplex> = conjugate_values(&Model::Hauptmodul47, &cg, rho, &ctx)
        .map_err(err)?
        .into_iter()
        .map(|v| v.value)
        .collect();
    let p = class_polynomial(&vals).map_err(err)?;
    ensure(p.prec_bits == 256, || {
        format!("polynomial certified at {} bits", p.prec_bits)
    })?;
    Ok((vals, p.poly))
}

fn hauptmodul_expansion() -> Check {
    let s = ExactQSeries::hauptmodul47(11).map_err(err)?;
    let got: Vec<Rat> = (-1..=10).map(|e| s.coeff(e)).collect();
    let want: Vec<Rat> = [1, 1, 1, 2, 3, 3, 5, 5, 8, 9, 12, 14]
        .iter()
        .map(|&c| rat_int(c))
        .collect();
    ensure(got == want, || format!("coefficients {got:?}"))
}

fn unit_case() -> Check {
    let cg = class_group(-23).map_err(err)?;
    let div = divisor_47();
    ensure(
        enumerate_terms(&cg, 47, 27, &div).map_err(err)?.is_empty(),
        || "terms are not empty".into(),
    )?;
    ensure(
        valuations(&cg, 47, 27, &div).map_err(err)?.is_zero(),
        || "profile is not zero".into(),
    )?;
    let (_, poly) = polynomial_47(-23, 27)?;
    ensure(poly == IntPoly::from_i64(&[-1, 2, -1, 1]), || {
        format!("polynomial {poly}")
    })?;
    ensure(poly.constant_term().abs() == 1.into(), || {
        "constant term is not a unit".into()
    })
}

fn case_107() -> Check {
    let cg = class_group(-107).map_err(err)?;
    let prof = valuations(&cg, 47, 9, &divisor_47()).map_err(err)?;
    let row: Vec<Rat> = [0, 1, 1].iter().map(|&v| rat_int(v)).collect();
    ensure(
        prof.per_prime.len() == 1 && prof.per_prime.get(&2) == Some(&row),
        || format!("profile {:?}", prof.per_prime),
    )?;
    let fixed = conjugation_fixed_classes(&cg, 47, 9).map_err(err)?;
    ensure(fixed == vec![cg.identity()], || {
        format!("fixed classes {fixed:?}")
    })?;
    let (vals, poly) = polynomial_47(-107, 9)?;
    ensure(poly == IntPoly::from_i64(&[-4, 2, -3, 1]), || {
        format!("polynomial {poly}")
    })?;
    let real = &vals[fixed[0]];
    ensure(real.imag_abs_upper() < 1e-40, || {
        "fixed conjugate is not real".into()
    })?;
    let x = real.real().to_f64();
    let truncated = format!("{:.6}", (x * 1e6).floor() / 1e6);
    ensure(truncated == "2.796321", || format!("real conjugate {x}"))?;
    let check = norm_crosscheck(&prof, &poly).map_err(err)?;
    ensure(
        check.pass && check.algebraic_norm == 16.into() && check.analytic_norm == 16.into(),
        || format!("{check:?}"),
    )
}

fn decomposition_107() -> Check {
    let disc = Discriminant::fundamental(-107).map_err(err)?;
    let m = rat(6, 107);
    let diff = diff_set(&m, &rat_int(47), disc).map_err(err)?;
    // Oracle: primes among those of 2·m·N·D where (−m·N, D)_p = −1.
    let oracle: Vec<u64> = [2u64, 3, 47, 107]
        .into_iter()
        .filter(|&p| common::hilbert_oracle(-6 * 47 * 107, -107, p) == -1)
        .collect();
    ensure(diff.primes == vec![2] && diff.primes == oracle, || {
        format!("Diff = {:?}, oracle {oracle:?}", diff.primes)
    })?;
    // 2 is inert (−107 ≡ 5 mod 8) and ord₂(6/107) = 1, so ν₂ = (1 + 1)/2.
    ensure(common::kronecker_prime(-107, 2) == -1, || {
        "2 is not inert".into()
    })?;
    let nu = nu_p(&m, 2, disc).map_err(err)?;
    ensure(nu == rat_int(1), || format!("nu_2 = {nu}"))?;
    let o_oracle = common::primes_of(107)
        .iter()
        .filter(|&&l| 6 % l == 0)
        .count() as u32;
    ensure(o_m(&m, disc) == 0 && o_oracle == 0, || {
        "o(m) is not 0".into()
    })?;
    let cg = class_group(-107).map_err(err)?;
    let got = rho_all(&cg, &rat_int(3));
    let oracle: Vec<u64> = (0..cg.h())
        .map(|c| {
            let f = cg.form(c);
            common::representations((f.a, f.b, f.c), 3) / common::units(-107)
        })
        .collect();
    ensure(got == vec![0, 1, 1] && got == oracle, || {
        format!("rho(3) = {got:?}, oracle {oracle:?}")
    })
}

fn gross_zagier() -> Check {
    let ctx = PrecisionContext::new(256).map_err(err)?;
    for (disc, d) in [(-7i64, -3i64), (-7, -43), (-23, -3)] {
        let big = class_group(disc).map_err(err)?;
        let small = class_group(d).map_err(err)?;
        let exact = gz_dorman_level1(&big, 1, d).map_err(err)?.log_norm();
        let (value, radius) = gz_log_norm(&big, &small, &ctx).map_err(err)?;
        let analytic = value.to_f64();
        let rel = (exact - analytic).abs() / analytic.abs();
        ensure(rel < 1e-8 && radius < 1e-30, || {
            format!("(D, d) = ({disc}, {d}): exact {exact}, analytic {analytic}")
        })?;
    }
    Ok(())
}

fn run_property<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Check
where
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn nonzero_rat() -> impl Strategy<Value = Rat> {
    (-5000i64..5000, 1i64..500).prop_filter_map("nonzero", |(n, d)| (n != 0).then(|| rat(n, d)))
}

fn close(a: &BigComplex, b: &BigComplex) -> bool {
    a.dist_upper(b) <= 1e-20 * (1.0 + b.mid_abs_up())
}

fn property_suites() -> Check {
    // Hilbert product formula.
    run_property(1000, (nonzero_rat(), nonzero_rat()), |(a, b)| {
        let places = relevant_places(&a, &b).map_err(|e| TestCaseError::fail(err(e)))?;
        let prod: i32 = places
            .iter()
            .map(|&v| hilbert_symbol(&a, &b, v).unwrap() as i32)
            .product();
        prop_assert_eq!(prod, 1);
        Ok(())
    })?;

    // |Diff| is odd.
    let discs = common::fundamental_discs(1500);
    run_property(
        1000,
        (1i64..20000, 1i64..2000, 1i64..200, 0..discs.len()),
        |(num, den, sn, i)| {
            let disc = Discriminant::fundamental(discs[i]).unwrap();
            let res = diff_set(&rat(num, den), &rat_int(sn), disc).unwrap();
            prop_assert_eq!(res.primes.len() % 2, 1);
            Ok(())
        },
    )?;

    // Group laws for every fundamental |D| ≤ 2000, checked against composition.
    for d in common::fundamental_discs(2000) {
        let g = class_group(d).map_err(err)?;
        let e = g.identity();
        for x in 0..g.h() {
            ensure(g.mul(x, e) == x && g.mul(x, g.inv(x)) == e, || {
                format!("identity or inverse, D = {d}")
            })?;
            for y in 0..g.h() {
                let xy = g.mul(x, y);
                let composed = g
                    .class_of(&compose_forms(&g.form(x), &g.form(y)))
                    .map_err(err)?;
                ensure(xy == g.mul(y, x) && xy == composed, || {
                    format!("product, D = {d}")
                })?;
                for z in 0..g.h() {
                    ensure(g.mul(xy, z) == g.mul(x, g.mul(y, z)), || {
                        format!("associativity, D = {d}")
                    })?;
                }
            }
        }
    }

    // ρ totals against the ideal-count oracle.
    for d in common::fundamental_discs(500) {
        let g = class_group(d).map_err(err)?;
        for n in 1..=200u64 {
            let total: u64 = rho_all(&g, &rat_int(n as i64)).iter().sum();
            ensure(total == common::ideal_count(d, n), || {
                format!("rho total, D = {d}, n = {n}")
            })?;
        }
    }

    // η, θ and Hauptmodul transformation laws.
    let ctx = PrecisionContext::new(128).map_err(err)?;
    let pt = |re: f64, im: f64| BigComplex::from_f64(128, re, im);
    let inv = |z: &BigComplex, k: i64| pt(-1.0, 0.0).div(&z.mul_int(k)).unwrap();
    run_property(5, (-0.5f64..0.5, 0.5f64..1.5), |(re, im)| {
        let z = pt(re, im);
        let rhs = z
            .div(&pt(0.0, 1.0))
            .unwrap()
            .sqrt()
            .unwrap()
            .mul(&eta(&z, &ctx).unwrap());
        prop_assert!(close(&eta(&inv(&z, 1), &ctx).unwrap(), &rhs));
        Ok(())
    })?;
    run_property(5, (-0.5f64..0.5, 0.05f64..0.3), |(re, im)| {
        let form = BinaryQF::new(1, 1, 12);
        let z = pt(re, im);
        let sqrt_d = BigComplex::quadratic(128, 0, 1, -47, 1)
            .div(&pt(0.0, 1.0))
            .unwrap();
        let rhs = pt(0.0, -1.0)
            .mul(&sqrt_d)
            .mul(&z)
            .mul(&theta_form(&form, &z, &ctx).unwrap());
        prop_assert!(close(&theta_form(&form, &inv(&z, 47), &ctx).unwrap(), &rhs));
        Ok(())
    })?;
    run_property(5, (-0.1f64..0.1, 0.1f64..0.3), |(re, im)| {
        let z = pt(re, im);
        prop_assert!(close(
            &hauptmodul47(&z, &ctx).unwrap(),
            &hauptmodul47(&inv(&z, 47), &ctx).unwrap()
        ));
        Ok(())
    })?;

    // r ↔ −r symmetry and linearity of valuations on fuzzed divisors.
    let keys: Vec<(i64, i64)> = (-80i64..0)
        .flat_map(|d| {
            (0..94)
                .filter(move |r| (d - r * r).rem_euclid(188) == 0)
                .map(move |r| (d, r))
        })
        .filter(|&(d, _)| d != -107)
        .collect();
    let cg = class_group(-107).map_err(err)?;
    let build = |picks: &[(usize, i64, i64)]| {
        let mut div = HeegnerDivisor::new(47).unwrap();
        for &(i, num, den) in picks {
            let (d, r) = keys[i % keys.len()];
            div.add_term(d, r, rat(num, den)).unwrap();
        }
        div
    };
    let picks = || prop::collection::vec((0usize..1000, -4i64..5, 1i64..4), 1..4);
    run_property(100, (picks(), picks()), |(a, b)| {
        let (x, y) = (build(&a), build(&b));
        let (Ok(vx), Ok(vy)) = (valuations(&cg, 47, 9, &x), valuations(&cg, 47, 9, &y)) else {
            return Ok(());
        };
        prop_assert_eq!(&vx, &valuations(&cg, 47, 9, &x.negate_r()).unwrap());
        prop_assert_eq!(
            valuations(&cg, 47, 9, &x.add(&y).unwrap()).unwrap(),
            vx.add(&vy).unwrap()
        );
        Ok(())
    })
}

fn main() -> ExitCode {
    let criteria: [Criterion; 6] = [
        (
            "1 hauptmodul expansion",
            Duration::from_secs(1),
            hauptmodul_expansion,
        ),
        ("2 D=-23 unit case", Duration::from_secs(10), unit_case),
        ("3 D=-107 case", Duration::from_secs(10), case_107),
        (
            "4 Diff/nu/o decomposition",
            Duration::from_secs(1),
            decomposition_107,
        ),
        (
            "5 level-1 norm desk check",
            Duration::from_secs(60),
            gross_zagier,
        ),
        (
            "6 property suites",
            Duration::from_secs(300),
            property_suites,
        ),
    ];
    let mut ok = true;
    for (name, budget, check) in criteria {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let result =
            result.and_then(|()| ensure(took < budget, || format!("over budget of {budget:?}")));
        match &result {
            Ok(()) => println!("PASS criterion {name} ({:.3} s)", took.as_secs_f64()),
            Err(e) => println!("FAIL criterion {name} ({:.3} s): {e}", took.as_secs_f64()),
        }
        ok &= result.is_ok();
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
