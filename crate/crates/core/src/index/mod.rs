//! Conley–Zehnder, Robbin–Salamon, lower/upper indices, mean index and
//! trivialization shifts, computed by independent engines.

mod crossing;
pub(crate) mod eval;
mod spectral;
mod winding;

pub use spectral::spectral_flow_index;

use crate::error::{Error, Result};
use crate::sympath::{classify_spectrum_with, nullity, Mat, SymplecticPath, Tolerances, Trajectory};
use eval::{Iterated, PathEval};
use nalgebra::Complex;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

pub type C64 = Complex<f64>;

/// An element of ½Z, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(pub i64);

impl HalfInt {
    pub fn from_int(k: i64) -> Self {
        HalfInt(2 * k)
    }
    pub fn twice(self) -> i64 {
        self.0
    }
    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }
    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl std::str::FromStr for HalfInt {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a half-integer: {s:?}"));
        match s.split_once('/') {
            None => s.parse::<i64>().map(HalfInt::from_int).map_err(|_| bad()),
            Some((p, q)) => {
                let p: i64 = p.trim().parse().map_err(|_| bad())?;
                match q.trim() {
                    "1" => Ok(HalfInt::from_int(p)),
                    "2" => Ok(HalfInt(p)),
                    _ => Err(bad()),
                }
            }
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for HalfInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// (μ_RS, μ⁻, μ⁺, Δ, nullity) of one path in one trivialization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexReport {
    pub mu_rs: HalfInt,
    pub mu_minus: i64,
    pub mu_plus: i64,
    pub mean: f64,
    pub nullity: usize,
    #[serde(skip)]
    pub nondegenerate: bool,
}

/// Maslov index of the loop relating two trivializations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrivializationShift {
    pub maslov: i64,
}

/// Shifts every index by exactly 2·maslov; the nullity is unchanged.
pub fn apply_trivialization_shift(report: &IndexReport, shift: TrivializationShift) -> IndexReport {
    let s = 2 * shift.maslov;
    IndexReport {
        mu_rs: HalfInt(report.mu_rs.0 + 2 * s),
        mu_minus: report.mu_minus + s,
        mu_plus: report.mu_plus + s,
        mean: report.mean + s as f64,
        nullity: report.nullity,
        nondegenerate: report.nondegenerate,
    }
}

/// μ̃ = μ + n − 2, the grading used for contractible orbits.
pub fn reduced_index(mu: i64, n: usize) -> i64 {
    mu + n as i64 - 2
}

fn snap_tol(tol: &Tolerances) -> f64 {
    tol.eig_tol
}

/// Twice the twisted index of an arbitrary evaluable path (no perturbation).
fn twisted_twice(path: &dyn PathEval, z: C64, tol: &Tolerances) -> Result<(i64, usize)> {
    let w = winding::winding_index(path, z, snap_tol(tol))?;
    Ok((w.twice_index, w.nu_end))
}

/// The Conley–Zehnder index of a path with non-degenerate endpoint.
/// Crossing-form counting and unitary winding must agree.
pub fn cz_index(path: &SymplecticPath) -> Result<i64> {
    cz_index_with(path, Tolerances::default())
}

pub fn cz_index_with(path: &SymplecticPath, tol: Tolerances) -> Result<i64> {
    let traj = Trajectory::new(path, tol)?;
    let nu = nullity(traj.endpoint(), tol.eig_tol);
    if nu > 0 {
        return Err(Error::DegenerateEndpoint(nu));
    }
    nondegenerate_index(&traj, &tol)
}

fn nondegenerate_index(traj: &dyn PathEval, tol: &Tolerances) -> Result<i64> {
    let (winding, nu) = twisted_twice(traj, C64::new(1.0, 0.0), tol)?;
    if nu > 0 || winding % 2 != 0 {
        return Err(Error::DegenerateEndpoint(nu.max(1)));
    }
    // the crossing count is only a cross-check where it can be resolved
    let Some(crossing) = crossing::crossing_index(traj)? else {
        return Ok(winding / 2);
    };
    if crossing != winding {
        return Err(Error::EngineDisagreement { crossing: crossing / 2, winding: winding / 2 });
    }
    Ok(winding / 2)
}

/// Index by crossing-form counting alone (half weights at both ends).
/// Needs a non-degenerate generator at t = 0, regular crossings, and Γ(t)
/// well enough conditioned for the crossings to be separated.
pub fn crossing_form_index(path: &SymplecticPath) -> Result<HalfInt> {
    let traj = Trajectory::new(path, Tolerances::default())?;
    crossing::crossing_index(&traj)?
        .map(HalfInt)
        .ok_or_else(|| Error::CrossingResolutionFailure("Γ(t) too ill-conditioned to separate crossings".into()))
}

/// Robbin–Salamon index (degenerate endpoints allowed).
pub fn rs_index(path: &SymplecticPath) -> Result<HalfInt> {
    rs_index_with(path, Tolerances::default())
}

pub fn rs_index_with(path: &SymplecticPath, tol: Tolerances) -> Result<HalfInt> {
    let traj = Trajectory::new(path, tol)?;
    Ok(HalfInt(twisted_twice(&traj, C64::new(1.0, 0.0), &tol)?.0))
}

/// Arguments in [0, 2π) of the eigenvalues of `m` lying on the unit circle.
pub(crate) fn unit_arguments(m: &Mat, tol: &Tolerances) -> Result<Vec<f64>> {
    let spec = classify_spectrum_with(m, *tol)?;
    Ok(spec
        .eigenvalues
        .iter()
        .filter(|c| (c.value.norm() - 1.0).abs() <= 1e-6)
        .map(|c| {
            let a = c.value.arg();
            if a < 0.0 { a + 2.0 * PI } else { a }
        })
        .collect())
}

/// Initial ε for the A − εId perturbation: half the smallest positive gap
/// between the unit eigenvalue arguments (and the argument of z), over 2π.
pub(crate) fn initial_eps(mut args: Vec<f64>, z_arg: f64) -> f64 {
    args.push(z_arg);
    args.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut gap = f64::INFINITY;
    for i in 0..args.len() {
        let next = if i + 1 < args.len() { args[i + 1] } else { args[0] + 2.0 * PI };
        let g = next - args[i];
        if g > 1e-9 {
            gap = gap.min(g);
        }
    }
    if !gap.is_finite() {
        return 1e-2;
    }
    (gap / 2.0 / (2.0 * PI)).clamp(EPS_FLOOR, 1e-2)
}

pub(crate) const EPS_FLOOR: f64 = 1e-7;

/// Lower (A − εId) twisted index of the k-th iterate at z; with k = 1 and
/// z = 1 this is μ⁻. Returns the index and the ε that was used.
pub(crate) fn lower_twisted(path: &SymplecticPath, k: usize, z: C64, tol: &Tolerances) -> Result<(i64, f64)> {
    let base = Trajectory::new(path, *tol)?;
    let mut g1 = base.endpoint().clone();
    for _ in 1..k {
        g1 = &g1 * base.endpoint();
    }
    let z_arg = {
        let a = z.arg();
        if a < 0.0 { a + 2.0 * PI } else { a }
    };
    let mut eps = initial_eps(unit_arguments(&g1, tol)?, z_arg);
    let eval = |e: f64| -> Result<Option<i64>> {
        // the iterate of the base path shifted by e/k is the iterate shifted by e
        let shifted = path.shifted(e / k as f64);
        let (twice, nu) = if k == 1 {
            twisted_twice(&Trajectory::new(&shifted, *tol)?, z, tol)?
        } else {
            twisted_twice(&Iterated::new(&shifted, k, *tol)?, z, tol)?
        };
        if nu > 0 || twice % 2 != 0 {
            return Ok(None);
        }
        Ok(Some(twice / 2))
    };
    let mut prev = eval(eps)?;
    loop {
        let half = eps / 2.0;
        if half < EPS_FLOOR * 0.5 {
            return Err(Error::EpsilonSelectionFailure);
        }
        let cur = eval(half)?;
        if let (Some(a), Some(b)) = (prev, cur) {
            if a == b {
                return Ok((a, eps));
            }
        }
        prev = cur;
        eps = half;
    }
}

/// μ⁻_CZ: the index of the path generated by A − εId for small ε > 0.
pub fn cz_minus(path: &SymplecticPath) -> Result<i64> {
    cz_minus_with(path, Tolerances::default())
}

pub fn cz_minus_with(path: &SymplecticPath, tol: Tolerances) -> Result<i64> {
    let (idx, eps) = lower_twisted(path, 1, C64::new(1.0, 0.0), &tol)?;
    // cross-check with crossing-form counting on the perturbed path
    let traj = Trajectory::new(&path.shifted(eps), tol)?;
    match crossing::crossing_index(&traj) {
        Ok(Some(c)) if c != 2 * idx => Err(Error::EngineDisagreement { crossing: c / 2, winding: idx }),
        Ok(_) => Ok(idx),
        Err(e) => Err(e),
    }
}

/// μ⁺_CZ(Γ) = −μ⁻_CZ(Γ⁻¹).
pub fn cz_plus(path: &SymplecticPath) -> Result<i64> {
    cz_plus_with(path, Tolerances::default())
}

pub fn cz_plus_with(path: &SymplecticPath, tol: Tolerances) -> Result<i64> {
    Ok(-cz_minus_with(&path.inverse(), tol)?)
}

/// μ⁻_CZ of the k-th iterate, evaluated from one base trajectory.
pub fn cz_minus_iterate(path: &SymplecticPath, k: usize) -> Result<i64> {
    if k == 0 {
        return Err(Error::PreconditionViolated("iterate must be >= 1".into()));
    }
    Ok(lower_twisted(path, k, C64::new(1.0, 0.0), &Tolerances::default())?.0)
}

/// Mean index estimate from the iterates k ≤ k_max. Since
/// |μ⁻(Γᵏ) − kΔ| ≤ n for every k, Δ lies in the intersection of the
/// intervals [(μ⁻(Γᵏ) − n)/k, (μ⁻(Γᵏ) + n)/k]; the midpoint of that
/// intersection is returned, which is within n/k_max of Δ.
pub fn mean_index(path: &SymplecticPath, k_max: usize) -> Result<f64> {
    mean_index_with(path, k_max, Tolerances::default())
}

pub fn mean_index_with(path: &SymplecticPath, k_max: usize, tol: Tolerances) -> Result<f64> {
    if k_max < 4 {
        return Err(Error::PreconditionViolated("k_max must be >= 4".into()));
    }
    let n = path.n() as f64;
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for k in 1..=k_max {
        let mu = lower_twisted(path, k, C64::new(1.0, 0.0), &tol)?.0 as f64;
        let kf = k as f64;
        lo = lo.max((mu - n) / kf);
        hi = hi.min((mu + n) / kf);
    }
    if lo > hi + 1e-12 {
        return Err(Error::CertificateViolation("iterate indices inconsistent with a mean index".into()));
    }
    Ok(0.5 * (lo + hi))
}

/// Full report with the mean estimated from iterates up to `k_max`.
pub fn index_report(path: &SymplecticPath, k_max: usize) -> Result<IndexReport> {
    index_report_with(path, k_max, Tolerances::default())
}

pub fn index_report_with(path: &SymplecticPath, k_max: usize, tol: Tolerances) -> Result<IndexReport> {
    let traj = Trajectory::new(path, tol)?;
    let nu = nullity(traj.endpoint(), tol.eig_tol);
    let mu_rs = HalfInt(twisted_twice(&traj, C64::new(1.0, 0.0), &tol)?.0);
    let mu_minus = cz_minus_with(path, tol)?;
    let mu_plus = cz_plus_with(path, tol)?;
    let mean = mean_index_with(path, k_max, tol)?;
    Ok(IndexReport { mu_rs, mu_minus, mu_plus, mean, nullity: nu, nondegenerate: nu == 0 })
}
