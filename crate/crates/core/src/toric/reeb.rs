//! Reeb vectors of toric contact forms: membership in the interior of the
//! dual cone, JSON exchange and seeded non-degenerate perturbations.

use super::cone::{check_good_cone, FaceLattice, MomentCone};
use super::orbits::edge_orbit_rotations;
use super::simplex::{maximize, LpOutcome};
use super::surd::{q_rank, Surd};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// ν = Σ a_j ν_j. Coefficients are kept when known; they are not unique
/// when d > n+1.
#[derive(Clone, Debug, PartialEq)]
pub struct ReebVector {
    pub coefficients: Option<Vec<Surd>>,
    pub vector: Vec<Surd>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReebJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coefficients: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vector: Option<Vec<String>>,
}

impl ReebVector {
    /// ν from strictly positive coefficients a_j.
    pub fn from_coefficients(cone: &MomentCone, a: Vec<Surd>) -> Result<Self> {
        if a.len() != cone.d() {
            return Err(Error::PreconditionViolated(format!("expected {} coefficients", cone.d())));
        }
        if a.iter().any(|x| x.signum() != Ordering::Greater) {
            return Err(Error::NotInInteriorDualCone);
        }
        let mut vector = vec![Surd::zero(); cone.dim];
        for (aj, nu) in a.iter().zip(&cone.normals) {
            for (vk, &x) in vector.iter_mut().zip(nu) {
                *vk = vk.add(&aj.scale_int(x));
            }
        }
        Ok(ReebVector { coefficients: Some(a), vector })
    }

    /// R₁ = Σ ν_j.
    pub fn sum_of_normals(cone: &MomentCone) -> Self {
        Self::from_coefficients(cone, vec![Surd::integer(1); cone.d()]).expect("unit coefficients are positive")
    }

    pub fn from_vector(vector: Vec<Surd>) -> Self {
        ReebVector { coefficients: None, vector }
    }

    pub fn is_rational(&self) -> bool {
        self.vector.iter().all(Surd::is_rational)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.vector.iter().map(Surd::to_f64).collect()
    }

    /// Parses `{"coefficients": [...]}` or `{"vector": [...]}`.
    pub fn from_json(cone: &MomentCone, text: &str) -> Result<Self> {
        let raw: ReebJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let parse = |v: Vec<String>| v.iter().map(|s| Surd::parse(s)).collect::<Result<Vec<_>>>();
        match (raw.coefficients, raw.vector) {
            (Some(c), None) => Self::from_coefficients(cone, parse(c)?),
            (None, Some(v)) => {
                let v = parse(v)?;
                if v.len() != cone.dim {
                    return Err(Error::Parse(format!("vector must have {} entries", cone.dim)));
                }
                Ok(Self::from_vector(v))
            }
            _ => Err(Error::Parse("exactly one of \"coefficients\" or \"vector\" is required".into())),
        }
    }

    pub fn to_json(&self) -> String {
        let fmt = |v: &[Surd]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let raw = match &self.coefficients {
            Some(c) => ReebJson { coefficients: Some(fmt(c)), vector: None },
            None => ReebJson { coefficients: None, vector: Some(fmt(&self.vector)) },
        };
        serde_json::to_string(&raw).expect("reeb vector serializes")
    }
}

/// Decides whether the rational vector v is a strictly positive combination
/// of the normals. The witness maximizes min_j a_j (exact LP), which makes it
/// deterministic.
pub fn is_reeb_vector(cone: &MomentCone, v: &[BigRational]) -> Result<Vec<BigRational>> {
    if v.len() != cone.dim {
        return Err(Error::PreconditionViolated(format!("vector must have {} entries", cone.dim)));
    }
    let d = cone.d();
    let q = |x: i128| BigRational::from_integer(BigInt::from(x));
    // variables: s_1..s_d, u, w with a_j = s_j + u − w
    let rows: Vec<Vec<BigRational>> = (0..cone.dim)
        .map(|k| {
            let mut row: Vec<BigRational> = cone.normals.iter().map(|nu| q(nu[k])).collect();
            let total: i128 = cone.normals.iter().map(|nu| nu[k]).sum();
            row.push(q(total));
            row.push(q(-total));
            row
        })
        .collect();
    let mut c = vec![BigRational::zero(); d + 2];
    c[d] = BigRational::one();
    c[d + 1] = -BigRational::one();
    match maximize(&rows, v, &c) {
        LpOutcome::Infeasible => Err(Error::NotInInteriorDualCone),
        LpOutcome::Unbounded => Err(Error::EmptyInterior),
        LpOutcome::Optimal { x, value } => {
            if !value.is_positive() {
                return Err(Error::NotInInteriorDualCone);
            }
            let t = &x[d] - &x[d + 1];
            Ok(x[..d].iter().map(|s| s + &t).collect())
        }
    }
}

/// Exact test ⟨ν, r⟩ > 0 on every extreme ray of the (certified) cone.
pub fn is_in_dual_interior(faces: &FaceLattice, v: &[Surd]) -> bool {
    faces.edges.iter().all(|e| {
        let mut s = Surd::zero();
        for (x, &r) in v.iter().zip(&e.direction) {
            s = s.add(&x.scale_int(r));
        }
        s.signum() == Ordering::Greater
    })
}

/// Resolves a parsed Reeb vector against a certified cone, filling in
/// rational coefficients when they were not supplied.
pub fn accept_reeb(cone: &MomentCone, faces: &FaceLattice, reeb: &ReebVector) -> Result<ReebVector> {
    if reeb.vector.len() != cone.dim {
        return Err(Error::PreconditionViolated(format!("vector must have {} entries", cone.dim)));
    }
    if !is_in_dual_interior(faces, &reeb.vector) {
        return Err(Error::NotInInteriorDualCone);
    }
    if reeb.coefficients.is_some() || !reeb.is_rational() {
        return Ok(reeb.clone());
    }
    let v: Vec<BigRational> = reeb.vector.iter().map(Surd::rational_part).collect();
    let a = is_reeb_vector(cone, &v)?;
    Ok(ReebVector { coefficients: Some(a.into_iter().map(Surd::rational).collect()), vector: reeb.vector.clone() })
}

const PRIMES: [u64; 40] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107,
    109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173,
];

const MAX_ATTEMPTS: usize = 12;

/// Why a Reeb vector fails to be non-degenerate with positive mean index,
/// or None when it is fine.
pub fn nondegeneracy_defect(cone: &MomentCone, faces: &FaceLattice, reeb: &ReebVector) -> Result<Option<String>> {
    if q_rank(&reeb.vector) != cone.dim {
        return Ok(Some("the Reeb flow does not generate the full torus".into()));
    }
    for (i, _) in faces.edges.iter().enumerate() {
        let rot = edge_orbit_rotations(cone, faces, reeb, i)?;
        if let Some(msg) = rot.degeneracy() {
            return Ok(Some(msg));
        }
        if !rot.mean_index_positive() {
            return Ok(Some(format!("edge {:?} has non-positive mean index", rot.facets)));
        }
    }
    Ok(None)
}

/// Deterministic perturbation a_j + δ·r_j·√p_j with distinct primes p_j and
/// seeded rationals r_j ∈ (0, 1]; δ starts at 1/100 and shrinks tenfold
/// until every edge orbit is non-degenerate with positive mean index.
pub fn nondegenerate_reeb_near(cone: &MomentCone, base: &ReebVector, seed: u64) -> Result<ReebVector> {
    let faces = check_good_cone(cone)?;
    let base = accept_reeb(cone, &faces, base)?;
    if cone.d() > PRIMES.len() {
        return Err(Error::PreconditionViolated(format!("at most {} normals are supported", PRIMES.len())));
    }
    let coeffs = base.coefficients.clone().ok_or_else(|| {
        Error::PreconditionViolated("an irrational Reeb vector must be given by coefficients to be perturbed".into())
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut delta = BigRational::new(BigInt::one(), BigInt::from(100));
    for _ in 0..MAX_ATTEMPTS {
        let a: Vec<Surd> = coeffs
            .iter()
            .enumerate()
            .map(|(j, aj)| {
                let r = BigRational::new(BigInt::from(rng.gen_range(1..=1000i64)), BigInt::from(1000));
                aj.add(&Surd::sqrt_term(&delta * r, PRIMES[j]))
            })
            .collect();
        let candidate = ReebVector::from_coefficients(cone, a)?;
        if is_in_dual_interior(&faces, &candidate.vector)
            && nondegeneracy_defect(cone, &faces, &candidate)?.is_none()
        {
            return Ok(candidate);
        }
        delta /= BigRational::from_integer(BigInt::from(10));
    }
    Err(Error::PerturbationFailure)
}
