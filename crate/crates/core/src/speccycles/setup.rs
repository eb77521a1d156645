use crate::arith::{disc_sqrt_mod, rat_int};
use crate::error::{Error, Result};
use crate::localsym::{aux_prime, AuxPrime};
use crate::quadarith::{ClassGroup, ClassIndex, FractionalIdealRep, KElt};

/// Data attached to a non-split prime `p`: the auxiliary prime `p₀`,
/// `𝔭₀ = p₀Z + ((b+√D)/2)Z` with the smallest `b`, and the ideal
/// `𝔠₀ = 𝔭₀𝔡` (inert) or `𝔭₀𝔭⁻¹𝔡` (ramified), `𝔡 = (√D)`.
#[derive(Clone, Debug)]
pub struct CycleSetup {
    pub aux: AuxPrime,
    pub p0_ideal: FractionalIdealRep,
    pub c0: FractionalIdealRep,
    pub c0_class: ClassIndex,
    /// Ramification index of `𝔓 | 𝔣` for the genus field: 2 when `p`
    /// ramifies in k and D is not prime.
    pub ramification: u32,
}

impl CycleSetup {
    pub fn new(cg: &ClassGroup, p: u64) -> Result<Self> {
        let disc = cg.disc();
        let d = disc.value();
        let aux = aux_prime(p, disc)?;
        let b0 = disc_sqrt_mod(d, aux.p0).ok_or_else(|| {
            Error::Invalid(format!("auxiliary prime {} is inert for {d}", aux.p0))
        })?;
        let p0_ideal = FractionalIdealRep::new(rat_int(1), aux.p0 as i64, b0, d)?;
        let different = FractionalIdealRep::principal(&KElt::sqrt_disc(d))?;
        let mut c0 = p0_ideal.mul(&different)?;
        if aux.ramified {
            let bp = disc_sqrt_mod(d, p).expect("ramified prime has a square root");
            let pp = FractionalIdealRep::new(rat_int(1), p as i64, bp, d)?;
            c0 = c0.div(&pp)?;
        }
        let c0_class = c0.class(cg)?;
        let ramification = if aux.ramified && !disc.is_prime_discriminant() {
            2
        } else {
            1
        };
        Ok(Self {
            aux,
            p0_ideal,
            c0,
            c0_class,
            ramification,
        })
    }

    pub fn p(&self) -> u64 {
        self.aux.p
    }

    pub fn kappa(&self) -> u64 {
        self.aux.kappa
    }

    /// `𝔠_𝔞 = 𝔞𝔞̄⁻¹𝔠₀`.
    pub fn c_of(&self, ideal: &FractionalIdealRep) -> Result<FractionalIdealRep> {
        ideal.div(&ideal.conj())?.mul(&self.c0)
    }
}
