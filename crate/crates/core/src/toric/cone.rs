//! Moment cones, good-cone certification and the fundamental group.

use super::lattice::{self, IMat};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// C = ∩ {x : ⟨x, ν_j⟩ ≥ 0} with primitive integer normals ν_j ∈ Z^{n+1}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentCone {
    pub dim: usize,
    pub normals: Vec<Vec<i128>>,
}

impl MomentCone {
    pub fn new(normals: Vec<Vec<i128>>) -> Result<Self> {
        let dim = normals.first().map_or(0, |v| v.len());
        let cone = MomentCone { dim, normals };
        cone.validate_shape()?;
        Ok(cone)
    }

    fn validate_shape(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::PreconditionViolated("ambient dimension must be at least 2".into()));
        }
        if self.normals.len() < self.dim {
            return Err(Error::PreconditionViolated(format!(
                "need at least {} normals, got {}",
                self.dim,
                self.normals.len()
            )));
        }
        if let Some(i) = self.normals.iter().position(|v| v.len() != self.dim) {
            return Err(Error::PreconditionViolated(format!("normal {i} has the wrong length")));
        }
        Ok(())
    }

    /// n, where the ambient lattice is Z^{n+1}.
    pub fn n(&self) -> usize {
        self.dim - 1
    }

    pub fn d(&self) -> usize {
        self.normals.len()
    }

    /// The (n+1)×d matrix β whose columns are the normals.
    pub fn beta(&self) -> IMat {
        lattice::transpose(&self.normals)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cone: MomentCone = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        cone.validate_shape()?;
        Ok(cone)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("cone serializes")
    }

    /// The cone over the n-simplex: ν_j = e_j (j ≤ n), ν_{n+1} = e_{n+1} − Σ e_j.
    pub fn sphere(n: usize) -> Self {
        let mut normals: Vec<Vec<i128>> = (0..n).map(|j| (0..=n).map(|k| i128::from(k == j)).collect()).collect();
        normals.push((0..=n).map(|k| if k == n { 1 } else { -1 }).collect());
        MomentCone { dim: n + 1, normals }
    }

    /// The cones C(k) of the toric contact structures on S²×S³.
    pub fn s2xs3(k: i128) -> Self {
        MomentCone {
            dim: 3,
            normals: vec![vec![1, 0, 1], vec![0, -1, 1], vec![0, k, 1], vec![-1, 2 * k - 1, 1]],
        }
    }

    /// Applies g ∈ GL(n+1, Z) to every normal.
    pub fn transformed(&self, g: &IMat) -> Result<Self> {
        let normals = self.normals.iter().map(|v| lattice::mat_vec(g, v)).collect::<Result<_>>()?;
        Ok(MomentCone { dim: self.dim, normals })
    }
}

/// A face of C, identified by the set of facets containing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub facets: Vec<usize>,
    pub rays: Vec<usize>,
}

/// A one-dimensional face with its primitive direction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub facets: Vec<usize>,
    pub direction: Vec<i128>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceLattice {
    /// faces_by_codim[k-1] lists the faces of codimension k, 1 ≤ k ≤ n
    pub faces_by_codim: Vec<Vec<Face>>,
    pub edges: Vec<Edge>,
}

impl FaceLattice {
    pub fn face_count(&self) -> usize {
        self.faces_by_codim.iter().map(Vec::len).sum()
    }
}

/// Primitive generators of the extreme rays of C.
fn extreme_rays(cone: &MomentCone) -> Result<Vec<Vec<i128>>> {
    let n = cone.n();
    let mut rays: BTreeSet<Vec<i128>> = BTreeSet::new();
    for subset in combinations(cone.d(), n) {
        let rows: IMat = subset.iter().map(|&j| cone.normals[j].clone()).collect();
        let Some(e) = lattice::primitive_kernel_line(&rows)? else { continue };
        for sign in [1i128, -1] {
            let r: Vec<i128> = e.iter().map(|x| x * sign).collect();
            let mut ok = true;
            for v in &cone.normals {
                if lattice::dot(&r, v)? < 0 {
                    ok = false;
                    break;
                }
            }
            if ok {
                rays.insert(r);
            }
        }
    }
    Ok(rays.into_iter().collect())
}

pub(crate) fn combinations(d: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, d: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            if d - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, d, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, d, k, &mut Vec::new(), &mut out);
    out
}

/// Certifies that the cone is good and returns its face lattice; otherwise
/// names the first violated condition.
pub fn check_good_cone(cone: &MomentCone) -> Result<FaceLattice> {
    cone.validate_shape()?;
    let n = cone.n();
    let dim = cone.dim;
    if let Some(i) = cone.normals.iter().position(|v| !lattice::is_primitive(v)) {
        return Err(Error::NonPrimitiveNormal(i));
    }
    if lattice::rank(&cone.normals)? < dim {
        return Err(Error::NotStrictlyConvex);
    }
    let rays = extreme_rays(cone)?;
    if rays.is_empty() || lattice::rank(&rays)? < dim {
        return Err(Error::EmptyInterior);
    }
    // incidence: zero[j] = rays on which ν_j vanishes
    let mut zero: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); cone.d()];
    for (r, ray) in rays.iter().enumerate() {
        for (j, v) in cone.normals.iter().enumerate() {
            if lattice::dot(ray, v)? == 0 {
                zero[j].insert(r);
            }
        }
    }
    let mut seen: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
    for j in 0..cone.d() {
        let rows: IMat = zero[j].iter().map(|&r| rays[r].clone()).collect();
        if rows.is_empty() || lattice::rank(&rows)? != n {
            return Err(Error::RedundantNormal(j));
        }
        if seen.insert(zero[j].clone(), j).is_some() {
            return Err(Error::RedundantNormal(j));
        }
    }
    // faces are the non-empty intersections of facet ray sets; close under ∩
    let mut faces: BTreeSet<BTreeSet<usize>> = zero.iter().cloned().collect();
    let mut frontier: Vec<BTreeSet<usize>> = faces.iter().cloned().collect();
    while let Some(f) = frontier.pop() {
        for z in &zero {
            let g: BTreeSet<usize> = f.intersection(z).copied().collect();
            if !g.is_empty() && faces.insert(g.clone()) {
                frontier.push(g);
            }
        }
    }
    let mut faces_by_codim: Vec<Vec<Face>> = vec![Vec::new(); n];
    let mut edges = Vec::new();
    for f in &faces {
        let rows: IMat = f.iter().map(|&r| rays[r].clone()).collect();
        let fdim = lattice::rank(&rows)?;
        let codim = dim - fdim;
        let facets: Vec<usize> = (0..cone.d()).filter(|&j| f.is_subset(&zero[j])).collect();
        if codim == 0 || codim > n {
            continue;
        }
        if facets.len() != codim {
            return Err(Error::FaceFacetCountMismatch(facets));
        }
        let normals: IMat = facets.iter().map(|&j| cone.normals[j].clone()).collect();
        if !lattice::completes_to_basis(&normals)? {
            return Err(Error::NotIntegralBasisCompletable(facets));
        }
        if fdim == 1 {
            edges.push(Edge { facets: facets.clone(), direction: rays[*f.iter().next().unwrap()].clone() });
        }
        faces_by_codim[codim - 1].push(Face { facets, rays: f.iter().copied().collect() });
    }
    for level in faces_by_codim.iter_mut() {
        level.sort_by(|a, b| a.facets.cmp(&b.facets));
    }
    edges.sort_by(|a, b| a.facets.cmp(&b.facets));
    Ok(FaceLattice { faces_by_codim, edges })
}

/// Invariant factors (> 1) of Z^{n+1}/⟨ν_1, …, ν_d⟩; empty means trivial,
/// and a 0 entry stands for a free Z summand.
pub fn fundamental_group(cone: &MomentCone) -> Result<Vec<i128>> {
    cone.validate_shape()?;
    let s = lattice::smith(&cone.normals)?;
    let rank = s.rank();
    let mut factors: Vec<i128> = s.diag.into_iter().filter(|&x| x > 1).collect();
    if rank < cone.dim {
        // infinite part; not reachable for good cones
        factors.extend(std::iter::repeat(0).take(cone.dim - rank));
    }
    Ok(factors)
}
