use super::{Mat, SymplecticMatrix, Tolerances};
use crate::error::{Error, Result};
use nalgebra::{Complex, DMatrix, Schur};

pub type C64 = Complex<f64>;

/// A cluster of numerically coincident eigenvalues.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenCluster {
    pub value: C64,
    /// algebraic multiplicity m(z)
    pub algebraic: usize,
    /// geometric multiplicity ν(z)
    pub geometric: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralClassification {
    pub eigenvalues: Vec<EigenCluster>,
    pub elliptic: bool,
    pub nullity: usize,
}

impl SpectralClassification {
    /// Clusters lying on the unit circle within `tol`.
    pub fn unit_eigenvalues(&self, tol: f64) -> Vec<&EigenCluster> {
        self.eigenvalues.iter().filter(|c| (c.value.norm() - 1.0).abs() <= tol).collect()
    }

    /// Checks that the spectrum is closed under z ↦ 1/z̄ and z ↦ z̄.
    pub fn is_symplectically_symmetric(&self, tol: f64) -> bool {
        let has = |w: C64| {
            self.eigenvalues
                .iter()
                .any(|c| (c.value - w).norm() <= tol * w.norm().max(1.0))
        };
        self.eigenvalues
            .iter()
            .all(|c| has(c.value.conj()) && has(C64::new(1.0, 0.0) / c.value.conj()))
    }
}

/// Convergence thresholds tried in turn: the QR iteration can stall at
/// machine precision on exactly clustered spectra, which a slightly looser
/// deflation threshold resolves without measurable loss of accuracy.
const SCHUR_EPS: [(f64, usize); 3] = [(f64::EPSILON, 300), (1e-14, 1_000), (1e-12, 10_000)];

pub(crate) fn eigenvalues(m: &Mat) -> Result<Vec<C64>> {
    for (eps, iters) in SCHUR_EPS {
        if let Some(schur) = Schur::try_new(m.clone(), eps, iters) {
            return Ok(schur.complex_eigenvalues().iter().copied().collect());
        }
    }
    Err(Error::EigenSolverFailure("Schur iteration did not converge".into()))
}

pub(crate) fn complex_eigenvalues(m: &DMatrix<C64>) -> Result<Vec<C64>> {
    for (eps, iters) in SCHUR_EPS {
        if let Some(schur) = Schur::try_new(m.clone(), eps, iters) {
            return schur
                .eigenvalues()
                .map(|v| v.iter().copied().collect())
                .ok_or_else(|| Error::EigenSolverFailure("complex Schur form not triangular".into()));
        }
    }
    Err(Error::EigenSolverFailure("complex Schur iteration did not converge".into()))
}

/// dim ker(M − Id) by singular-value thresholding at `eig_tol`.
pub fn nullity(m: &Mat, eig_tol: f64) -> usize {
    let d = m.nrows();
    let scale = m.amax().max(1.0);
    let s = (m - Mat::identity(d, d)).singular_values();
    s.iter().filter(|&&x| x <= eig_tol * scale).count()
}

pub fn classify_spectrum(m: &SymplecticMatrix) -> Result<SpectralClassification> {
    classify_spectrum_with(m.matrix(), Tolerances::default())
}

pub fn classify_spectrum_with(m: &Mat, tol: Tolerances) -> Result<SpectralClassification> {
    let d = m.nrows();
    let ev = eigenvalues(m)?;
    // single-linkage clustering; Jordan blocks split eigenvalues by ~sqrt(machine eps)
    let radius = tol.eig_tol.sqrt();
    let mut label: Vec<usize> = (0..ev.len()).collect();
    fn find(l: &mut Vec<usize>, i: usize) -> usize {
        let mut r = i;
        while l[r] != r {
            r = l[r];
        }
        l[i] = r;
        r
    }
    for i in 0..ev.len() {
        for j in (i + 1)..ev.len() {
            if (ev[i] - ev[j]).norm() <= radius * ev[i].norm().max(1.0) {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<(usize, Vec<C64>)> = Vec::new();
    for (i, &z) in ev.iter().enumerate() {
        let r = find(&mut label, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => g.1.push(z),
            None => groups.push((r, vec![z])),
        }
    }
    let scale = m.amax().max(1.0);
    let mc: DMatrix<C64> = m.map(|x| C64::new(x, 0.0));
    let mut clusters = Vec::new();
    for (_, zs) in groups {
        let mean = zs.iter().sum::<C64>() / zs.len() as f64;
        let shifted = &mc - DMatrix::<C64>::identity(d, d) * mean;
        let sv = shifted.singular_values();
        let geometric = sv
            .iter()
            .filter(|&&s| s <= radius * scale)
            .count()
            .clamp(1, zs.len());
        clusters.push(EigenCluster { value: mean, algebraic: zs.len(), geometric });
    }
    clusters.sort_by(|a, b| {
        a.value
            .arg()
            .partial_cmp(&b.value.arg())
            .unwrap()
            .then(a.value.norm().partial_cmp(&b.value.norm()).unwrap())
    });
    let elliptic = clusters.iter().all(|c| (c.value.norm() - 1.0).abs() <= tol.eig_tol);
    Ok(SpectralClassification { eigenvalues: clusters, elliptic, nullity: nullity(m, tol.eig_tol) })
}
