//! Index by winding of a unitary attached to the pair (graph of Γ(t),
//! twisted diagonal). Both are Lagrangian in C^{2n}⊕C^{2n} with the form
//! (−ω)⊕ω; each Lagrangian L corresponds to a unitary U_L, and
//! W = U_Δ⁻¹U_{Gr Γ} has eigenvalue 1 exactly along Gr Γ ∩ Δ_z.

use super::eval::PathEval;
use crate::error::{Error, Result};
use crate::sympath::Mat;
use nalgebra::{Complex, DMatrix};
use std::f64::consts::PI;

type C64 = Complex<f64>;
type CMat = DMatrix<C64>;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Builds (a₋, a₊) from the q/p rows of the two halves of a Lagrangian frame.
fn frame_pair(top: &CMat, bottom: &CMat, n: usize) -> (CMat, CMat) {
    let m = top.ncols();
    let tq = top.rows(0, n);
    let tp = top.rows(n, n);
    let bq = bottom.rows(0, n);
    let bp = bottom.rows(n, n);
    let mut ap = CMat::zeros(2 * n, m);
    let mut am = CMat::zeros(2 * n, m);
    ap.rows_mut(0, n).copy_from(&(&tq + &tp * I));
    ap.rows_mut(n, n).copy_from(&(&bq - &bp * I));
    am.rows_mut(0, n).copy_from(&(&tq - &tp * I));
    am.rows_mut(n, n).copy_from(&(&bq + &bp * I));
    (am, ap)
}

fn to_unitary(am: CMat, ap: CMat) -> Result<CMat> {
    let inv = ap
        .try_inverse()
        .ok_or_else(|| Error::CrossingResolutionFailure("singular Lagrangian frame".into()))?;
    Ok(am * inv)
}

/// U for the graph {(x, Γx)}.
fn graph_unitary(g: &Mat) -> Result<CMat> {
    let d = g.nrows();
    let n = d / 2;
    let svd = g.clone().svd(true, true);
    let u = svd.u.unwrap();
    let v = svd.v_t.unwrap().transpose();
    let s = svd.singular_values;
    let mut top = CMat::zeros(d, d);
    let mut bottom = CMat::zeros(d, d);
    for c in 0..d {
        let w = 1.0 / (1.0 + s[c] * s[c]).sqrt();
        for r in 0..d {
            top[(r, c)] = C64::new(v[(r, c)] * w, 0.0);
            bottom[(r, c)] = C64::new(u[(r, c)] * s[c] * w, 0.0);
        }
    }
    let (am, ap) = frame_pair(&top, &bottom, n);
    to_unitary(am, ap)
}

/// U_Δ⁻¹ for the twisted diagonal {(x, zx)}.
fn diagonal_unitary_inv(n: usize, z: C64) -> Result<CMat> {
    let d = 2 * n;
    let top = CMat::identity(d, d);
    let bottom = CMat::identity(d, d) * z;
    let (am, ap) = frame_pair(&top, &bottom, n);
    let u = to_unitary(am, ap)?;
    Ok(u.adjoint())
}

fn det(m: &CMat) -> C64 {
    m.clone().lu().determinant()
}

pub(crate) struct Winding {
    /// twice the index (the index may be a half-integer)
    pub twice_index: i64,
    /// multiplicity of the eigenvalue 1 of W at t = 1
    pub nu_end: usize,
}

/// Twisted index of the path at z ∈ S¹ with half-weights at both endpoints.
/// For z = 1 this is the Robbin–Salamon index.
pub(crate) fn winding_index(path: &dyn PathEval, z: C64, snap_tol: f64) -> Result<Winding> {
    let n = path.n();
    let ud_inv = diagonal_unitary_inv(n, z)?;
    let w_at = |g: &Mat| -> Result<CMat> { Ok(&ud_inv * graph_unitary(g)?) };

    let mut grid = path.grid();
    // make sure the grid is not too coarse to begin with
    let base = 64usize;
    let mut extra = Vec::new();
    for i in 1..base {
        let t = i as f64 / base as f64;
        if !grid.iter().any(|(s, _)| (s - t).abs() < 1e-12) {
            extra.push((t, path.at(t)?));
        }
    }
    grid.extend(extra);
    grid.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let mut pts: Vec<(f64, C64)> = Vec::with_capacity(grid.len());
    for (t, g) in &grid {
        let d = det(&w_at(g)?);
        pts.push((*t, d / d.norm()));
    }
    // accumulate arg det with adaptive bisection where increments are large
    let mut total = 0.0;
    let mut stack: Vec<(f64, C64, f64, C64, usize)> = Vec::new();
    for win in pts.windows(2) {
        stack.push((win[0].0, win[0].1, win[1].0, win[1].1, 0));
        while let Some((t0, d0, t1, d1, depth)) = stack.pop() {
            let inc = (d1 / d0).arg();
            if inc.abs() <= PI / 4.0 || t1 - t0 < 1e-13 {
                if inc.abs() > PI / 2.0 {
                    return Err(Error::CrossingResolutionFailure(format!(
                        "winding unresolved near t={t0}"
                    )));
                }
                total += inc;
                continue;
            }
            if depth > 48 {
                return Err(Error::CrossingResolutionFailure(format!("winding unresolved near t={t0}")));
            }
            let tm = 0.5 * (t0 + t1);
            let dm = det(&w_at(&path.at(tm)?)?);
            let dm = dm / dm.norm();
            // push right half first so left half is processed first
            stack.push((tm, dm, t1, d1, depth + 1));
            stack.push((t0, d0, tm, dm, depth + 1));
        }
    }

    let d = 2 * n;
    let args = |w: &CMat| -> Result<(f64, usize)> {
        let ev = crate::sympath::spectrum_complex_eigenvalues(w)?;
        let mut sum = 0.0;
        let mut nu = 0;
        for z in ev {
            let mut a = z.arg();
            if a < 0.0 {
                a += 2.0 * PI;
            }
            if a < snap_tol || a > 2.0 * PI - snap_tol {
                nu += 1;
            } else {
                sum += a;
            }
        }
        Ok((sum, nu))
    };
    let w0 = w_at(&Mat::identity(d, d))?;
    let w1 = w_at(&path.endpoint())?;
    let (s0, nu0) = args(&w0)?;
    let (s1, nu1) = args(&w1)?;
    let k = (s0 + total - s1) / (2.0 * PI);
    let kr = k.round();
    let residual = (k - kr).abs();
    if residual > 0.05 {
        return Err(Error::CrossingResolutionFailure(format!(
            "endpoint eigenvalues inconsistent with winding (residual {residual:.3})"
        )));
    }
    // index = K + ½(2n − ν₁) − ½(2n − ν₀)
    let twice_index = 2 * kr as i64 + nu0 as i64 - nu1 as i64;
    Ok(Winding { twice_index, nu_end: nu1 })
}
