//! Closed-form index arithmetic outside the toric setting: contact homology
//! of prequantizations, the perturbation index formula, pinching bounds and
//! the index of the linearized flow of a round Hamiltonian.

use crate::error::{Error, Result};
use crate::toric::hc::HCTable;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Which iterates of the circle orbit lie in the homotopy class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Multiples {
    /// every k ≥ 1
    All,
    Explicit(Vec<u64>),
}

/// Data of a prequantization M → N with fibre the Reeb circle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrequantizationData {
    /// N has dimension 2n
    pub n: usize,
    pub betti: Vec<u64>,
    /// μ_RS of the simple circle orbit in the chosen trivialization
    pub mu_phi: i64,
    pub multiples: Multiples,
    /// order of the finite group acting on the fibre
    #[serde(default = "one")]
    pub m: u64,
}

fn one() -> u64 {
    1
}

impl PrequantizationData {
    /// Complex projective space CP^n with the Hopf circle: μ_RS(φ) = 2n+2.
    pub fn complex_projective(n: usize) -> Self {
        let betti = (0..=2 * n).map(|i| u64::from(i % 2 == 0)).collect();
        PrequantizationData { n, betti, mu_phi: 2 * n as i64 + 2, multiples: Multiples::All, m: 1 }
    }

    fn validate(&self) -> Result<()> {
        if self.betti.len() > 2 * self.n + 1 {
            return Err(Error::PreconditionViolated(format!(
                "a {}-manifold has at most {} Betti numbers",
                2 * self.n,
                2 * self.n + 1
            )));
        }
        if self.m == 0 {
            return Err(Error::PreconditionViolated("group order must be positive".into()));
        }
        if let Multiples::Explicit(ks) = &self.multiples {
            if !ks.contains(&1) || ks.contains(&0) {
                return Err(Error::PreconditionViolated("multiples must contain 1 and be positive".into()));
            }
        }
        Ok(())
    }
}

/// rank HC_* = Σ_{k} betti[* + n − k·μ_φ] on degrees lo..=hi.
pub fn prequant_hc(data: &PrequantizationData, lo: i64, hi: i64) -> Result<HCTable> {
    data.validate()?;
    if lo > hi {
        return Err(Error::PreconditionViolated("empty degree range".into()));
    }
    let n = data.n as i64;
    let ks: Vec<i64> = match &data.multiples {
        Multiples::Explicit(ks) => {
            let mut ks: Vec<i64> = ks.iter().map(|&k| k as i64).collect();
            ks.sort_unstable();
            ks.dedup();
            ks
        }
        Multiples::All => {
            if data.mu_phi <= 0 {
                return Err(Error::PreconditionViolated(
                    "infinitely many iterates contribute to each degree when mu_phi ≤ 0".into(),
                ));
            }
            // k·μ_φ ≤ hi + n is needed to reach degree ≤ hi
            (1..=((hi + n).max(0) / data.mu_phi).max(1)).collect()
        }
    };
    let mut ranks: BTreeMap<i64, u64> = (lo..=hi).map(|k| (k, 0)).collect();
    let mut lowest: Option<i64> = None;
    let mut highest: Option<i64> = None;
    for &k in &ks {
        for (i, &b) in data.betti.iter().enumerate() {
            if b == 0 {
                continue;
            }
            let deg = i as i64 - n + k * data.mu_phi;
            lowest = Some(lowest.map_or(deg, |l: i64| l.min(deg)));
            highest = Some(highest.map_or(deg, |h: i64| h.max(deg)));
            if let Some(r) = ranks.get_mut(&deg) {
                *r += b;
            }
        }
    }
    // with every iterate present the table is unbounded in the direction of μ_φ
    let (k_minus, k_plus) = match data.multiples {
        Multiples::All => (lowest.filter(|_| data.mu_phi > 0), None),
        Multiples::Explicit(_) => (lowest, highest),
    };
    Ok(HCTable { ranks, k_minus, k_plus, cutoff: hi })
}

/// μ_CZ(γ_p^k) = μ_RS(φ̄^k) − n + ind(p) for a critical point p of the
/// perturbing Morse function.
pub fn perturbed_orbit_index(ind_p: i64, k: u64, mu_phi_k: i64, n: usize) -> Result<i64> {
    if ind_p < 0 || ind_p > 2 * n as i64 {
        return Err(Error::MorseIndexOutOfRange(ind_p));
    }
    if k == 0 {
        return Err(Error::PreconditionViolated("iterate must be positive".into()));
    }
    Ok(mu_phi_k - n as i64 + ind_p)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "multiples", rename_all = "snake_case")]
pub enum HomotopyMultiples {
    Known { set: Vec<u64> },
    /// the set must be supplied explicitly
    Unknown,
}

/// N_ā = {1} exactly when ω vanishes on π₂(N); otherwise the set is not
/// determined by this data.
pub fn homotopy_multiples(m: u64, omega_pi2_zero: bool, cutoff: f64) -> Result<HomotopyMultiples> {
    if m == 0 || !(cutoff > 1.0) {
        return Err(Error::PreconditionViolated("need m ≥ 1 and cutoff T > 1".into()));
    }
    Ok(if omega_pi2_zero { HomotopyMultiples::Known { set: vec![1] } } else { HomotopyMultiples::Unknown })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChernReport {
    /// ⟨[ω], S⟩ = (k − 1)/m
    pub omega_pairing: String,
    pub minimal_chern: i64,
    /// lower bound 2·⟨c₁(TN), S⟩ ≥ 2·minimal_chern for μ_RS(φ̄^k)
    pub index_lower_bound: i64,
}

/// The lower bound for μ_RS(φ̄^k) on a sphere S with positive ω-area in a
/// monotone base.
pub fn chern_pairing_check(m: u64, k: u64, minimal_chern: i64, monotone: bool) -> Result<ChernReport> {
    if !monotone {
        return Err(Error::HypothesesNotMet("the base must be monotone".into()));
    }
    if minimal_chern < 1 {
        return Err(Error::HypothesesNotMet("minimal Chern number must be positive".into()));
    }
    if m == 0 || k < 2 {
        return Err(Error::HypothesesNotMet("need m ≥ 1 and a multiple k > 1".into()));
    }
    let pairing = BigRational::new(BigInt::from(k - 1), BigInt::from(m));
    Ok(ChernReport { omega_pairing: pairing.to_string(), minimal_chern, index_lower_bound: 2 * minimal_chern })
}

/// μ⁻_CZ of the linearized flow of H_R(x) = |x|²/2R² on R^{2n+2} over time S,
/// as a function of c = S / 2πR².
pub fn ind_hr_exact(n: usize, c: &BigRational) -> Result<i64> {
    if !c.is_positive() {
        return Err(Error::PreconditionViolated("S and R must be positive".into()));
    }
    let w = 2 * n as i64 + 2;
    let fl = c.floor().to_integer().to_i64().ok_or(Error::Overflow)?;
    Ok(if c.is_integer() { w * fl - n as i64 - 1 } else { w * fl + n as i64 + 1 })
}

/// Tolerance for recognising resonant periods given in floating point.
pub const RESONANCE_TOL: f64 = 1e-9;

/// ind_hr_exact for floating-point S and R; c = S/2πR² within RESONANCE_TOL
/// of an integer is treated as resonant.
pub fn ind_hr(n: usize, s: f64, r: f64) -> Result<i64> {
    if !(s > 0.0 && r > 0.0) || !s.is_finite() || !r.is_finite() {
        return Err(Error::PreconditionViolated("S and R must be positive".into()));
    }
    let c = s / (2.0 * std::f64::consts::PI * r * r);
    let w = 2 * n as i64 + 2;
    let near = c.round();
    if (c - near).abs() <= RESONANCE_TOL * c.max(1.0) {
        return Ok(w * near as i64 - n as i64 - 1);
    }
    Ok(w * c.floor() as i64 + n as i64 + 1)
}

/// Radii squared keep the pinching arithmetic rational (R/r = √2 is R² = 2r²).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PinchingData {
    pub n: usize,
    pub r_squared: BigRational,
    pub big_r_squared: BigRational,
    pub k: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PinchingReport {
    pub floor_k: i64,
    /// Croke–Weinstein: every closed orbit has period at least 2πr²
    pub min_period_over_2pi: String,
    /// ⌊k⌋·r²/R², a lower bound for ⌊k⌋·T/2πR² strictly above ⌊k⌋ − 1
    pub floor_argument: String,
    /// μ⁻_CZ of the round comparison path at S = 2πr²·⌊k⌋ on R^{2n+2}
    pub ind_hr_at_min_period: i64,
    /// the ξ^ω factor contributes −1 to the ambient index
    pub correction: i64,
    /// (2n+2)⌊k⌋ − n
    pub bound: i64,
}

/// For an (r,R)-pinched convex hypersurface with R/r < √(k/(k−1)):
/// μ⁻_CZ(γ^⌊k⌋) ≥ (2n+2)⌊k⌋ − n for every closed orbit γ.
pub fn pinched_index_bound(data: &PinchingData) -> Result<PinchingReport> {
    let one = BigRational::one();
    if !data.r_squared.is_positive() || data.big_r_squared < data.r_squared {
        return Err(Error::PreconditionViolated("need 0 < r ≤ R".into()));
    }
    if data.k <= one {
        return Err(Error::PreconditionViolated("need k > 1".into()));
    }
    // R/r < √(k/(k−1)) ⇔ R²(k − 1) < r²k
    if &data.big_r_squared * (&data.k - &one) >= &data.r_squared * &data.k {
        let ratio = (data.big_r_squared.to_f64().unwrap_or(f64::NAN) / data.r_squared.to_f64().unwrap_or(f64::NAN)).sqrt();
        let limit = (data.k.to_f64().unwrap_or(f64::NAN) / (data.k.to_f64().unwrap_or(f64::NAN) - 1.0)).sqrt();
        return Err(Error::PinchingViolated { ratio, limit });
    }
    let floor_k = data.k.floor().to_integer();
    let fk = floor_k.to_i64().ok_or(Error::Overflow)?;
    let arg = BigRational::from_integer(floor_k.clone()) * &data.r_squared / &data.big_r_squared;
    debug_assert!(arg > BigRational::from_integer(floor_k.clone() - 1));
    let ind = ind_hr_exact(data.n, &arg)?;
    let n = data.n as i64;
    // ⌊k⌋T/2πR² > ⌊k⌋ − 1 and monotonicity give at least (2n+2)(⌊k⌋−1)+n+1
    let ambient = (2 * n + 2) * (fk - 1) + n + 1;
    debug_assert!(ind >= ambient);
    let fmt = |q: &BigRational| if q.is_integer() { q.numer().to_string() } else { format!("{}/{}", q.numer(), q.denom()) };
    Ok(PinchingReport {
        floor_k: fk,
        min_period_over_2pi: fmt(&data.r_squared),
        floor_argument: fmt(&arg),
        ind_hr_at_min_period: ind,
        correction: -1,
        bound: ambient + 1,
    })
}

impl PinchingData {
    pub fn new(n: usize, r_squared: BigRational, big_r_squared: BigRational, k: BigRational) -> Self {
        PinchingData { n, r_squared, big_r_squared, k }
    }
}
