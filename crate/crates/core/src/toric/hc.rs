//! Cylindrical contact homology rank tables of good toric contact manifolds
//! and the convexity lower bound.

use super::cone::{check_good_cone, MomentCone};
use super::lattice;
use super::orbits::{edge_orbit_rotations, orbit_rs_index, EdgeRotations};
use super::reeb::{accept_reeb, nondegeneracy_defect, nondegenerate_reeb_near, ReebVector};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Degree → rank. Every degree in (lowest, cutoff] is listed, zeros
/// included; degrees above the cutoff are unknown, never zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HCTable {
    pub ranks: BTreeMap<i64, u64>,
    pub k_minus: Option<i64>,
    pub k_plus: Option<i64>,
    pub cutoff: i64,
}

impl HCTable {
    /// Rank in degree k; None when k lies above the cutoff.
    pub fn rank(&self, k: i64) -> Option<u64> {
        (k <= self.cutoff).then(|| self.ranks.get(&k).copied().unwrap_or(0))
    }

    /// Builds a table from generator degrees, keeping those ≤ cutoff.
    pub(crate) fn from_degrees(degrees: impl IntoIterator<Item = i64>, lowest: i64, cutoff: i64) -> Result<Self> {
        let mut ranks: BTreeMap<i64, u64> = (lowest..=cutoff).map(|k| (k, 0)).collect();
        for k in degrees {
            if k <= cutoff {
                *ranks.entry(k).or_insert(0) += 1;
            }
        }
        let k_minus = ranks.iter().find(|(_, &r)| r > 0).map(|(&k, _)| k);
        if k_minus.is_none() {
            return Err(Error::CutoffTooSmall(format!("no generator in degrees up to {cutoff}")));
        }
        // positive mean indices make the table unbounded above
        Ok(HCTable { ranks, k_minus, k_plus: None, cutoff })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("table serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Upper limit on iterates per edge; reaching it means the cutoff is
/// unreasonably large compared with the mean indices.
const MAX_ITERATE: i128 = 1_000_000;

fn edge_degrees(rot: &EdgeRotations, n: usize, cutoff: i64) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    let mut iterate: i128 = 1;
    while !rot.iterate_exceeds(iterate, cutoff as i128, n) {
        if iterate > MAX_ITERATE {
            return Err(Error::CutoffTooSmall(format!("edge {:?} needs more than {MAX_ITERATE} iterates", rot.facets)));
        }
        let idx = orbit_rs_index(rot, iterate as u32, n)?;
        if idx.mu_rs.0 % 2 != 0 {
            return Err(Error::DegenerateReebVector("half-integer index on a non-degenerate orbit".into()));
        }
        if !idx.even_parity {
            return Err(Error::PreconditionViolated(
                "orbit indices have mixed parity; the differential need not vanish".into(),
            ));
        }
        out.push(idx.mu_rs.0 / 2);
        iterate += 1;
    }
    Ok(out)
}

/// Contact homology ranks up to `cutoff` for a non-degenerate Reeb vector.
/// All generators have the parity of n, so the differential vanishes and
/// ranks count closed orbits by degree.
pub fn hc_table(cone: &MomentCone, reeb: &ReebVector, cutoff: i64) -> Result<HCTable> {
    let faces = check_good_cone(cone)?;
    let reeb = accept_reeb(cone, &faces, reeb)?;
    if let Some(reason) = nondegeneracy_defect(cone, &faces, &reeb)? {
        return Err(Error::DegenerateReebVector(reason));
    }
    let n = cone.n();
    let rotations = (0..faces.edges.len())
        .map(|i| edge_orbit_rotations(cone, &faces, &reeb, i))
        .collect::<Result<Vec<_>>>()?;
    if rotations.iter().any(|r| !r.lift_independent) {
        return Err(Error::PreconditionViolated("the grading depends on the lift (cone is not Gorenstein)".into()));
    }
    let per_edge = rotations.par_iter().map(|rot| edge_degrees(rot, n, cutoff)).collect::<Result<Vec<_>>>()?;
    // every generator has degree ≥ N·(mean index) − n > −n
    HCTable::from_degrees(per_edge.into_iter().flatten(), 1 - n as i64, cutoff)
}

/// Convenience: the table of the seeded perturbation of Σ ν_j.
pub fn hc_table_auto(cone: &MomentCone, seed: u64, cutoff: i64) -> Result<HCTable> {
    let reeb = nondegenerate_reeb_near(cone, &ReebVector::sum_of_normals(cone), seed)?;
    hc_table(cone, &reeb, cutoff)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvexityBound {
    /// integer lift b with β(b) = R_λ
    pub lift: Vec<i128>,
    pub mu_rs: i64,
    pub bound: i64,
    pub k_minus: Option<i64>,
    /// bound ≥ k₋ for the toric contact structure
    pub dominates_k_minus: bool,
}

/// For λ ∈ K given in turns t_i = λ_i/2π ∈ (0, 1]: μ_RS(γ̃_λ) = Σ 2b_i for
/// the integer lift b of R_λ = Σ t_i ν_i, and the bound μ_RS − n on μ⁻_CZ of
/// closed orbits of convex toric contact forms with that return element.
pub fn convexity_lower_bound(cone: &MomentCone, turns: &[BigRational], seed: u64) -> Result<ConvexityBound> {
    check_good_cone(cone)?;
    if turns.len() != cone.d() {
        return Err(Error::PreconditionViolated(format!("expected {} angles", cone.d())));
    }
    if turns.iter().any(|t| !t.is_positive() || *t > BigRational::one()) {
        return Err(Error::PreconditionViolated("angles must lie in (0, 2π]".into()));
    }
    let mut r = vec![BigRational::from_integer(BigInt::from(0)); cone.dim];
    for (t, nu) in turns.iter().zip(&cone.normals) {
        for (rk, &x) in r.iter_mut().zip(nu) {
            *rk += t * BigRational::from_integer(BigInt::from(x));
        }
    }
    if r.iter().any(|x| !x.is_integer()) {
        return Err(Error::NotInSubgroupK);
    }
    let target: Vec<i128> =
        r.iter().map(|x| x.to_integer().to_i128().ok_or(Error::Overflow)).collect::<Result<_>>()?;
    let lift = lattice::solve_integer(&cone.beta(), &target)?.ok_or(Error::NotInSubgroupK)?;
    let mu_rs = 2 * lift.iter().sum::<i128>();
    let mu_rs = i64::try_from(mu_rs).map_err(|_| Error::Overflow)?;
    let bound = mu_rs - cone.n() as i64;
    // k₋ ≤ bound is decided by the table up to the bound itself
    let (k_minus, dominates) = match hc_table_auto(cone, seed, bound) {
        Ok(t) => (t.k_minus, true),
        Err(Error::CutoffTooSmall(_)) => (None, false),
        Err(e) => return Err(e),
    };
    Ok(ConvexityBound { lift, mu_rs, bound, k_minus, dominates_k_minus: dominates })
}
