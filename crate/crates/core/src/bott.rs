//! Bott's index function on the unit circle, splitting numbers, and the
//! ellipticity certificate built on the iteration formula.

use crate::error::{Error, Result};
use crate::index::{cz_minus_with, cz_plus_with, lower_twisted, unit_arguments, C64};
use crate::sympath::{classify_spectrum_with, iterate_path, SymplecticPath, Tolerances, Trajectory};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

fn unit(theta: f64) -> C64 {
    C64::new(theta.cos(), theta.sin())
}

fn norm_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(2.0 * PI);
    if t >= 2.0 * PI { 0.0 } else { t }
}

/// Γ(z), the lower z-twisted index: the twisted index of the path generated
/// by A − εId. At z = 1 this is μ⁻_CZ.
pub fn bott_value(path: &SymplecticPath, z: C64) -> Result<i64> {
    bott_value_with(path, z, Tolerances::default())
}

pub fn bott_value_with(path: &SymplecticPath, z: C64, tol: Tolerances) -> Result<i64> {
    if (z.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::PreconditionViolated("z must lie on the unit circle".into()));
    }
    if (z - C64::new(1.0, 0.0)).norm() < 1e-14 {
        return cz_minus_with(path, tol);
    }
    Ok(lower_twisted(path, 1, z / z.norm(), &tol)?.0)
}

/// Γ at e^{iθ}.
pub fn bott_value_at_angle(path: &SymplecticPath, theta: f64) -> Result<i64> {
    let th = norm_angle(theta);
    if th == 0.0 {
        return bott_value(path, C64::new(1.0, 0.0));
    }
    bott_value(path, unit(th))
}

/// Σ_{z^k = 1} Γ(z) with the roots taken at the exact angles 2πl/k.
pub fn bott_sum(path: &SymplecticPath, k: usize) -> Result<i64> {
    (0..k).map(|l| bott_value_at_angle(path, 2.0 * PI * l as f64 / k as f64)).sum()
}

/// Piecewise-constant Γ on S¹. `arc_values[i]` holds on the open arc from
/// `breakpoints[i]` to the next breakpoint (cyclically); with no breakpoints
/// there is a single arc covering the circle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BottFunction {
    pub breakpoints: Vec<f64>,
    pub arc_values: Vec<i64>,
    pub point_values: Vec<i64>,
}

impl BottFunction {
    pub fn value_at(&self, theta: f64) -> i64 {
        let th = norm_angle(theta);
        let m = self.breakpoints.len();
        if m == 0 {
            return self.arc_values[0];
        }
        for (i, b) in self.breakpoints.iter().enumerate() {
            if (th - b).abs() < 1e-9 {
                return self.point_values[i];
            }
        }
        // arc index: last breakpoint below θ, cyclically
        let i = self.breakpoints.iter().rposition(|&b| b < th).unwrap_or(m - 1);
        self.arc_values[i]
    }

    /// Δ = (1/2π)∫Γ, the average of Γ over the circle.
    pub fn mean(&self) -> f64 {
        let m = self.breakpoints.len();
        if m == 0 {
            return self.arc_values[0] as f64;
        }
        let mut s = 0.0;
        for i in 0..m {
            let next = if i + 1 < m { self.breakpoints[i + 1] } else { self.breakpoints[0] + 2.0 * PI };
            s += (next - self.breakpoints[i]) * self.arc_values[i] as f64;
        }
        s / (2.0 * PI)
    }
}

/// Sorted, de-duplicated arguments of the unit eigenvalues of Γ(1).
pub fn breakpoints(path: &SymplecticPath) -> Result<Vec<f64>> {
    breakpoints_with(path, Tolerances::default())
}

pub fn breakpoints_with(path: &SymplecticPath, tol: Tolerances) -> Result<Vec<f64>> {
    let traj = Trajectory::new(path, tol)?;
    let mut args = unit_arguments(traj.endpoint(), &tol)?;
    args.iter_mut().for_each(|a| {
        if *a > 2.0 * PI - 1e-7 {
            *a = 0.0;
        }
        if a.abs() < 1e-7 {
            *a = 0.0;
        }
    });
    args.sort_by(|a, b| a.partial_cmp(b).unwrap());
    args.dedup_by(|a, b| (*a - *b).abs() < 1e-7);
    Ok(args)
}

pub fn bott_function(path: &SymplecticPath) -> Result<BottFunction> {
    bott_function_with(path, Tolerances::default())
}

pub fn bott_function_with(path: &SymplecticPath, tol: Tolerances) -> Result<BottFunction> {
    let bps = breakpoints_with(path, tol)?;
    let value = |th: f64| -> Result<i64> {
        if th == 0.0 {
            cz_minus_with(path, tol)
        } else {
            bott_value_with(path, unit(th), tol)
        }
    };
    if bps.is_empty() {
        let v = value(0.0)?;
        return Ok(BottFunction { breakpoints: bps, arc_values: vec![v], point_values: vec![] });
    }
    let m = bps.len();
    let mut arc_values = Vec::with_capacity(m);
    let mut point_values = Vec::with_capacity(m);
    for i in 0..m {
        point_values.push(value(bps[i])?);
        let next = if i + 1 < m { bps[i + 1] } else { bps[0] + 2.0 * PI };
        arc_values.push(value(norm_angle(0.5 * (bps[i] + next)))?);
    }
    let f = BottFunction { breakpoints: bps, arc_values, point_values };
    // z = 1 must reproduce the lower index wherever it falls
    if !f.breakpoints.contains(&0.0) {
        let v1 = value(0.0)?;
        if v1 != f.value_at(0.0) {
            return Err(Error::CertificateViolation("Bott function not constant on an arc".into()));
        }
    }
    Ok(f)
}

/// One-sided jumps of Γ at a unit eigenvalue.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplittingData {
    pub theta: f64,
    pub s_plus: i64,
    pub s_minus: i64,
    /// geometric multiplicity ν(z)
    pub nu: usize,
    /// algebraic multiplicity m(z)
    pub m: usize,
}

pub fn splitting_numbers(path: &SymplecticPath, theta: f64) -> Result<SplittingData> {
    splitting_numbers_with(path, theta, Tolerances::default())
}

pub fn splitting_numbers_with(path: &SymplecticPath, theta: f64, tol: Tolerances) -> Result<SplittingData> {
    let theta = norm_angle(theta);
    let z = unit(theta);
    let traj = Trajectory::new(path, tol)?;
    let spec = classify_spectrum_with(traj.endpoint(), tol)?;
    let cluster = spec
        .eigenvalues
        .iter()
        .filter(|c| (c.value.norm() - 1.0).abs() <= 1e-6)
        .min_by(|a, b| (a.value - z).norm().partial_cmp(&(b.value - z).norm()).unwrap())
        .filter(|c| (c.value - z).norm() <= 1e-6)
        .ok_or_else(|| Error::PreconditionViolated(format!("e^(i{theta}) is not a unit eigenvalue")))?;
    let bps = breakpoints_with(path, tol)?;
    let mut gap = f64::INFINITY;
    for b in &bps {
        let d = (b - theta).rem_euclid(2.0 * PI);
        let d = d.min(2.0 * PI - d);
        if d > 1e-7 {
            gap = gap.min(d);
        }
    }
    let eps = (0.5 * gap).min(0.5);
    if eps < 1e-6 {
        return Err(Error::GapTooSmall);
    }
    let at = |th: f64| -> Result<i64> {
        let th = norm_angle(th);
        if th == 0.0 { cz_minus_with(path, tol) } else { bott_value_with(path, unit(th), tol) }
    };
    let g0 = at(theta)?;
    let gp = at(theta + eps)?;
    let gm = at(theta - eps)?;
    Ok(SplittingData {
        theta,
        s_plus: gp - g0,
        s_minus: gm - g0,
        nu: cluster.geometric,
        m: cluster.algebraic,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Lower,
    Upper,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    /// All eigenvalues of Γ(1) on the unit circle; both indices pinned at ∓n.
    Elliptic { branch: Branch, pinned: i64, index: i64, iterate_index: i64, j: usize },
    HypothesisNotMet { j: usize, cz_minus: i64, cz_minus_iterate: i64, cz_plus: i64, cz_plus_iterate: i64 },
}

impl Verdict {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("verdict serializes")
    }
}

/// If μ⁻(Γ) ≤ −n and μ⁻(Γʲ) ≥ −n (or μ⁺(Γ) ≥ n and μ⁺(Γʲ) ≤ n), Γ(1) is
/// elliptic and the indices equal ∓n. The conclusion is re-checked
/// numerically; a failure is reported as `CertificateViolation`.
pub fn elliptic_certificate(path: &SymplecticPath, j: usize) -> Result<Verdict> {
    elliptic_certificate_with(path, j, Tolerances::default())
}

pub fn elliptic_certificate_with(path: &SymplecticPath, j: usize, tol: Tolerances) -> Result<Verdict> {
    if j < 2 {
        return Err(Error::PreconditionViolated("j must be >= 2".into()));
    }
    let n = path.n() as i64;
    let iter = iterate_path(path, j)?;
    let a = cz_minus_with(path, tol)?;
    let b = cz_minus_with(&iter, tol)?;
    let check = |branch: Branch, pinned: i64, x: i64, y: i64| -> Result<Verdict> {
        let traj = Trajectory::new(path, tol)?;
        let spec = classify_spectrum_with(traj.endpoint(), tol)?;
        if !spec.elliptic {
            return Err(Error::CertificateViolation("return map is not elliptic".into()));
        }
        if x != pinned || y != pinned {
            return Err(Error::CertificateViolation(format!("indices {x}, {y} not pinned at {pinned}")));
        }
        Ok(Verdict::Elliptic { branch, pinned, index: x, iterate_index: y, j })
    };
    if a <= -n && b >= -n {
        return check(Branch::Lower, -n, a, b);
    }
    let c = cz_plus_with(path, tol)?;
    let d = cz_plus_with(&iter, tol)?;
    if c >= n && d <= n {
        return check(Branch::Upper, n, c, d);
    }
    Ok(Verdict::HypothesisNotMet { j, cz_minus: a, cz_minus_iterate: b, cz_plus: c, cz_plus_iterate: d })
}
