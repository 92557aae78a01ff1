//! Closed Reeb orbits over the edges of a good cone, their lifted linear
//! flows on C^d and Robbin–Salamon indices.

use super::cone::{FaceLattice, MomentCone};
use super::lattice::{self, IMat};
use super::reeb::ReebVector;
use super::surd::{ratio_is_rational, Surd};
use crate::error::{Error, Result};
use crate::index::{rs_index, HalfInt};
use crate::sympath::{Mat, SymplecticPath};
use serde::Serialize;
use std::cmp::Ordering;

/// Rotation data of the simple closed orbit over one edge. The lift of the
/// Reeb vector is R̃ = Σ_j b_j e_{ℓ_j} + b·η̃; coordinate i of the lifted
/// linear flow turns c_i = numerators[i] / b times over the simple period.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeRotations {
    pub edge: usize,
    /// the n facets ℓ_1 < … < ℓ_n containing the edge
    pub facets: Vec<usize>,
    pub direction: Vec<i128>,
    /// completes ν_{ℓ_1}, …, ν_{ℓ_n} to a lattice basis, ⟨direction, η⟩ = 1
    pub eta: Vec<i128>,
    pub leg_coefficients: Vec<Surd>,
    pub b: Surd,
    /// canonical integer solution of β(η̃) = η
    pub eta_lift: Vec<i128>,
    pub numerators: Vec<Surd>,
    /// the degree does not depend on the chosen lift (Σκ = 0 on ker β)
    pub lift_independent: bool,
}

impl EdgeRotations {
    pub fn rotation_numbers(&self) -> Vec<f64> {
        let b = self.b.to_f64();
        self.numerators.iter().map(|x| x.to_f64() / b).collect()
    }

    /// Simple period 1/b of the orbit.
    pub fn period(&self) -> f64 {
        1.0 / self.b.to_f64()
    }

    /// Some(reason) when an iterate of the orbit is degenerate.
    pub fn degeneracy(&self) -> Option<String> {
        for (j, bj) in self.leg_coefficients.iter().enumerate() {
            if ratio_is_rational(bj, &self.b) {
                return Some(format!(
                    "rotation number along facet {} of edge {:?} is rational",
                    self.facets[j], self.facets
                ));
            }
        }
        None
    }

    /// Σ_i c_i (twice of it is the mean index), as numerator over b.
    fn rotation_sum(&self) -> Surd {
        self.numerators.iter().fold(Surd::zero(), |s, x| s.add(x))
    }

    pub fn mean_index_positive(&self) -> bool {
        self.rotation_sum().signum() == Ordering::Greater
    }

    /// Mean index 2Σ c_i per simple period.
    pub fn mean_index(&self) -> f64 {
        2.0 * self.rotation_sum().to_f64() / self.b.to_f64()
    }

    /// True when N·(mean index) − n > degree, so no iterate ≥ N reaches it.
    pub(crate) fn iterate_exceeds(&self, iterate: i128, degree: i128, n: usize) -> bool {
        let lhs = self.rotation_sum().scale_int(2 * iterate);
        let rhs = self.b.scale_int(degree + n as i128);
        lhs.cmp_value(&rhs) == Ordering::Greater
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeOrbitIndex {
    pub edge: usize,
    pub iterate: u32,
    pub rotations: Vec<f64>,
    pub mu_rs: HalfInt,
    /// μ_RS − n is even
    pub even_parity: bool,
}

fn coordinates_in_basis(p: &IMat, v: &[Surd]) -> Result<Vec<Surd>> {
    let inv = lattice::rational_inverse(p).ok_or(Error::DegenerateEdgeBasis)?;
    Ok(inv
        .iter()
        .map(|row| row.iter().zip(v).fold(Surd::zero(), |s, (q, x)| s.add(&x.scale(q))))
        .collect())
}

pub fn edge_orbit_rotations(
    cone: &MomentCone,
    faces: &FaceLattice,
    reeb: &ReebVector,
    edge: usize,
) -> Result<EdgeRotations> {
    let e = faces
        .edges
        .get(edge)
        .ok_or_else(|| Error::PreconditionViolated(format!("no edge {edge}")))?;
    let n = cone.n();
    if e.facets.len() != n {
        return Err(Error::DegenerateEdgeBasis);
    }
    let (g, eta) = lattice::ext_gcd_vec(&e.direction)?;
    if g != 1 {
        return Err(Error::DegenerateEdgeBasis);
    }
    // P has columns ν_{ℓ_1}, …, ν_{ℓ_n}, η
    let mut cols: IMat = e.facets.iter().map(|&j| cone.normals[j].clone()).collect();
    cols.push(eta.clone());
    let p = lattice::transpose(&cols);
    if lattice::smith(&p)?.diag.iter().product::<i128>() != 1 || lattice::rank(&p)? != cone.dim {
        return Err(Error::DegenerateEdgeBasis);
    }
    let coords = coordinates_in_basis(&p, &reeb.vector)?;
    let b = coords[n].clone();
    let leg_coefficients = coords[..n].to_vec();
    if b.signum() != Ordering::Greater {
        return Err(Error::NotInInteriorDualCone);
    }
    let beta = cone.beta();
    let eta_lift = lattice::solve_integer(&beta, &eta)?.ok_or_else(|| {
        Error::PreconditionViolated("edge lifts need normals spanning the lattice (trivial fundamental group)".into())
    })?;
    let mut numerators: Vec<Surd> = eta_lift.iter().map(|&h| b.scale_int(h)).collect();
    for (j, &l) in e.facets.iter().enumerate() {
        numerators[l] = numerators[l].add(&leg_coefficients[j]);
    }
    let lift_independent = lattice::integer_kernel(&beta)?.iter().all(|k| k.iter().sum::<i128>() == 0);
    Ok(EdgeRotations {
        edge,
        facets: e.facets.clone(),
        direction: e.direction.clone(),
        eta,
        leg_coefficients,
        b,
        eta_lift,
        numerators,
        lift_independent,
    })
}

/// ρ(x) = 2⌊x⌋ + 1 for x ∉ Z and 2x for x ∈ Z, with x = num / den, den > 0;
/// returned as a twice-value.
fn rho_twice(num: &Surd, den: &Surd) -> Result<i64> {
    let to_i64 = |m: i128| i64::try_from(m).map_err(|_| Error::Overflow);
    Ok(match Surd::exact_quotient(num, den)? {
        Some(m) => 4 * to_i64(m)?,
        None => 2 * (2 * to_i64(Surd::floor_div(num, den)?)? + 1),
    })
}

/// μ_RS of the N-th iterate: Σ_i ρ(N c_i).
pub fn orbit_rs_index(rot: &EdgeRotations, iterate: u32, n: usize) -> Result<EdgeOrbitIndex> {
    if iterate == 0 {
        return Err(Error::PreconditionViolated("iterate must be positive".into()));
    }
    let mut twice = 0i64;
    for num in &rot.numerators {
        twice = twice.checked_add(rho_twice(&num.scale_int(iterate as i128), &rot.b)?).ok_or(Error::Overflow)?;
    }
    let mu = HalfInt(twice);
    Ok(EdgeOrbitIndex {
        edge: rot.edge,
        iterate,
        rotations: rot.rotation_numbers().into_iter().map(|c| c * iterate as f64).collect(),
        mu_rs: mu,
        even_parity: twice % 2 == 0 && (twice / 2 - n as i64) % 2 == 0,
    })
}

/// The linear path t ↦ ⊕_i exp(2π N c_i t J) on C^d over one period.
pub fn lifted_path(rot: &EdgeRotations, iterate: u32) -> Result<SymplecticPath> {
    let d = rot.numerators.len();
    let mut a = Mat::zeros(2 * d, 2 * d);
    for (i, c) in rot.rotation_numbers().into_iter().enumerate() {
        let w = 2.0 * std::f64::consts::PI * c * iterate as f64;
        a[(i, i)] = w;
        a[(d + i, d + i)] = w;
    }
    SymplecticPath::constant(a)
}

/// orbit_rs_index, confirmed by the numerical Robbin–Salamon index of the
/// lifted linear path.
pub fn orbit_rs_index_checked(rot: &EdgeRotations, iterate: u32, n: usize) -> Result<EdgeOrbitIndex> {
    let exact = orbit_rs_index(rot, iterate, n)?;
    let numeric = rs_index(&lifted_path(rot, iterate)?)?;
    if numeric != exact.mu_rs {
        return Err(Error::EngineDisagreement { crossing: exact.mu_rs.0, winding: numeric.0 });
    }
    Ok(exact)
}
