//! Special-cycle multiplicities `Z(m, 𝔞, μ)_𝔓` on the primes of the Hilbert
//! class field: the prime-discriminant and genus-field formulas, the lattice
//! count `ρ₀` and the Arakelov degree.
//!
//! All multiplicities are exact rationals; halves are intrinsic.

mod mu;
mod mult;
mod rho0;
mod setup;

pub use mu::{check_mu, q_mu, MuElement};
pub use mult::{
    arakelov_degree, cycle_multiplicities, cycle_multiplicity_genus, cycle_multiplicity_prime_disc,
    debug_report, support_prime, Backend, CycleMultiplicity, CycleReport, RhoEntry,
};
pub use rho0::{check_lambda, lambda_candidates, rho0};
pub use setup::CycleSetup;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int, Rat};
    use crate::quadarith::{ClassGroup, Discriminant, FractionalIdealRep};

    fn cg(d: i64) -> ClassGroup {
        ClassGroup::new(Discriminant::fundamental(d).unwrap()).unwrap()
    }

    fn n_ideal(n: i64, rho: i64, d: i64) -> FractionalIdealRep {
        FractionalIdealRep::new(rat_int(1), n, rho, d).unwrap()
    }

    #[test]
    fn worked_example_107() {
        let g = cg(-107);
        let d = g.disc();
        let ideal = n_ideal(47, 9, -107);
        let m = rat(6, 107);
        let mu = MuElement::new(-7, 41, d, 47).to_kelt();
        let vals: Vec<Rat> = (0..3)
            .map(|b| cycle_multiplicity_prime_disc(&g, &m, &ideal, &mu, b).unwrap())
            .collect();
        assert_eq!(vals, vec![rat_int(0), rat(1, 2), rat(1, 2)]);
        let deg = arakelov_degree(&g, &m, &ideal, &mu).unwrap();
        assert_eq!(deg, vec![(2, rat_int(2))]);
    }

    #[test]
    fn vanishing_when_not_integral() {
        let g = cg(-107);
        let d = g.disc();
        let ideal = n_ideal(47, 9, -107);
        let mu = MuElement::new(-7, 41, d, 47).to_kelt();
        // m + Q(μ) = 9 + 1/2.
        let m = rat(6, 107) + rat(1, 2);
        let all = cycle_multiplicities(&g, &m, &ideal, &mu).unwrap();
        assert!(all.per_class.iter().all(|v| *v == rat_int(0)));
        assert!(arakelov_degree(&g, &m, &ideal, &mu).unwrap().is_empty());
    }

    #[test]
    fn genus_requires_single_diff() {
        let g = cg(-115);
        let ideal = FractionalIdealRep::unit(-115);
        let mu = crate::quadarith::KElt::from_int(0, -115);
        // Diff(1) for D = −115 at scale 1.
        let diff = crate::localsym::diff_set(&rat_int(1), &rat_int(1), g.disc()).unwrap();
        let r = cycle_multiplicity_genus(&g, &rat_int(1), &ideal, &mu, 0);
        assert_eq!(r.is_ok(), diff.single().is_some());
        assert!(cycle_multiplicity_prime_disc(&g, &rat_int(1), &ideal, &mu, 0).is_err());
    }

    #[test]
    fn lambda_candidate_counts() {
        for (d, p) in [
            (-107i64, 2u64),
            (-107, 107),
            (-23, 5),
            (-115, 2),
            (-115, 5),
            (-115, 23),
        ] {
            let g = cg(d);
            let s = CycleSetup::new(&g, p).unwrap();
            let t = crate::arith::prime_divisors(d.unsigned_abs()).len();
            let lams = lambda_candidates(&FractionalIdealRep::unit(d), &s).unwrap();
            let expect = if s.aux.ramified { 1 << (t - 1) } else { 1 << t };
            assert_eq!(lams.len(), expect, "D = {d}, p = {p}");
        }
    }

    #[test]
    fn report_serializes() {
        let g = cg(-107);
        let d = g.disc();
        let ideal = n_ideal(47, 9, -107);
        let mu = MuElement::new(-7, 41, d, 47);
        let rep =
            debug_report(&g, &rat(6, 107), &ideal, &mu.to_kelt(), Some((mu.n, mu.r))).unwrap();
        let text = serde_json::to_string(&rep).unwrap();
        assert!(text.contains("\"m\":\"6/107\""));
        assert!(text.contains("\"diff\":[2]"));
        assert!(text.contains("\"nu_p\":\"1/1\""));
    }
}
