//! Crossing-form count: locate t with det(Γ(t) − Id) = 0 by scanning the
//! smallest principal angle between the graph of Γ(t) and the diagonal,
//! isolate its zeros by Lipschitz bisection, and add the signature of
//! ⟨A(t)v, v⟩ on the kernel at each one.

use super::eval::PathEval;
use crate::error::{Error, Result};
use crate::sympath::Mat;

/// Sines of the principal angles between Gr Γ = {(x, Γx)} and the diagonal,
/// as (Γ − Id)(Id + ΓᵀΓ)^{-1/2} = (UΣ − V)·diag((1 + σ²)^{-1/2}) for
/// Γ = UΣVᵀ, together with the map y ↦ V·diag((1 + σ²)^{-1/2})·y back to
/// Γ's domain. Unlike σ_min(Γ − Id) this stays O(1) for hyperbolic Γ.
fn graph_angles(g: &Mat) -> (Mat, Mat) {
    let svd = g.clone().svd(true, true);
    let u = svd.u.unwrap();
    let v = svd.v_t.unwrap().transpose();
    let s = &svd.singular_values;
    let mut m = Mat::zeros(g.nrows(), g.ncols());
    let mut back = Mat::zeros(g.nrows(), g.ncols());
    for c in 0..g.ncols() {
        let w = 1.0 / (1.0 + s[c] * s[c]).sqrt();
        for r in 0..g.nrows() {
            m[(r, c)] = (u[(r, c)] * s[c] - v[(r, c)]) * w;
            back[(r, c)] = v[(r, c)] * w;
        }
    }
    (m, back)
}

fn sigma_min(g: &Mat) -> f64 {
    graph_angles(g).0.singular_values().min()
}

/// f(t) together with the level below which f is indistinguishable from 0.
fn sample(path: &dyn PathEval, g: &Mat) -> (f64, f64) {
    let scale = g.amax().max(1.0) * g.nrows() as f64;
    (sigma_min(g), CROSS_TOL.max(path.rel_accuracy() * scale))
}

/// Signature of a symmetric matrix; fails if it is numerically singular.
pub(crate) fn signature(q: &Mat, rel_tol: f64) -> Result<i64> {
    if q.nrows() == 0 {
        return Ok(0);
    }
    let ev = q.clone().symmetric_eigenvalues();
    let scale = q.amax().max(1e-300);
    let mut sig = 0;
    for &l in ev.iter() {
        if l.abs() <= rel_tol * scale {
            return Err(Error::CrossingResolutionFailure("degenerate crossing form".into()));
        }
        sig += if l > 0.0 { 1 } else { -1 };
    }
    Ok(sig)
}

fn crossing_form(path: &dyn PathEval, t: f64, g: &Mat, ker_tol: f64) -> Result<(i64, usize)> {
    let d = g.nrows();
    let (m, back) = graph_angles(g);
    let svd = m.svd(false, true);
    let vt = svd.v_t.unwrap();
    let idx: Vec<usize> = (0..d).filter(|&i| svd.singular_values[i] <= ker_tol).collect();
    if idx.is_empty() {
        return Ok((0, 0));
    }
    let mut y = Mat::zeros(d, idx.len());
    for (c, &i) in idx.iter().enumerate() {
        y.set_column(c, &vt.row(i).transpose());
    }
    // orthonormal basis of the kernel of Γ − Id
    let v = (back * y).qr().q();
    let a = path.generator(t);
    let q = v.transpose() * a * &v;
    Ok((signature(&q, 1e-9)?, idx.len()))
}

/// S with Γ = (Id − J₀S/2)⁻¹(Id + J₀S/2), i.e. S = −2J₀(Γ − Id)(Γ + Id)⁻¹.
/// On paths from Id that keep Γ + Id invertible, twice the index is sig S.
fn cayley_generator(g: &Mat) -> Option<Mat> {
    let d = g.nrows();
    let id = Mat::identity(d, d);
    let x = (g + &id).transpose().lu().solve(&(g - &id).transpose())?.transpose();
    let s = -2.0 * crate::sympath::j0(d / 2) * x;
    Some(0.5 * (&s + s.transpose()))
}

/// Interval length below which a candidate crossing is no longer bisected.
const LEAF_WIDTH: f64 = 1e-10;
/// Smallest level at which f is treated as zero; raised to the numerical
/// noise of Γ(t) when the path is strongly hyperbolic.
const CROSS_TOL: f64 = 1e-7;
/// Kernel threshold at a crossing, relative to that zero level.
const KER_FACTOR: f64 = 10.0;
/// Largest zero level at which crossings can still be told apart; beyond it
/// (‖Γ(t)‖ of order 10⁴ and more) the count is not attempted.
const MAX_ZERO_LEVEL: f64 = 1e-4;
/// Bound on the number of bisection steps for one path.
const MAX_BISECTIONS: usize = 500_000;

/// Lipschitz bound for f = σ_min((UΣ − V)W) = √2·sin θ_min: the flow
/// x' = J₀A(t)x moves subspaces no faster than ‖A(t)‖₂, sampled densely;
/// the factor covers √2 and the variation between samples.
fn speed_bound(path: &dyn PathEval, times: &[f64]) -> f64 {
    let norm = |t: f64| path.generator(t).symmetric_eigenvalues().amax();
    let mut lip = norm(1.0);
    for w in times.windows(2) {
        for j in 0..4 {
            lip = lip.max(norm(w[0] + (w[1] - w[0]) * j as f64 / 4.0));
        }
    }
    2.0 * lip + 1e-9
}

/// Twice the index obtained by crossing-form counting, half weights at the
/// endpoints. Requires A(0) non-degenerate and regular crossings.
///
/// Crossings are isolated from the Lipschitz bound L on
/// f(t) = √2·sin θ_min(Gr Γ(t), Δ): with z(t) the level at which f is
/// numerically zero, [a, b] can contain a zero only if
/// f(a) + f(b) ≤ L(b − a) + z(a) + z(b). Such intervals are bisected until
/// f cannot vary by more than the noise across them; each connected run of
/// surviving leaves is one crossing.
///
/// Returns `None` when Γ(t) is too ill-conditioned for the count to be
/// resolved, i.e. when the zero level exceeds MAX_ZERO_LEVEL somewhere.
pub(crate) fn crossing_index(path: &dyn PathEval) -> Result<Option<i64>> {
    let a0 = path.generator(0.0);
    let mut twice = signature(&a0, 1e-9)
        .map_err(|_| Error::CrossingResolutionFailure("degenerate generator at t=0".into()))?;

    let mut grid = path.grid();
    let base = 400usize;
    for i in 1..base {
        let t = i as f64 / base as f64;
        grid.push((t, path.at(t)?));
    }
    grid.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    grid.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-13);
    let times: Vec<f64> = grid.iter().map(|(t, _)| *t).collect();
    let lip = speed_bound(path, &times);
    let f: Vec<(f64, f64)> = grid.iter().map(|(_, g)| sample(path, g)).collect();
    let (_, z1) = sample(path, &path.endpoint());
    if z1 > MAX_ZERO_LEVEL || f.iter().any(|&(_, z)| z > MAX_ZERO_LEVEL) {
        return Ok(None);
    }

    // (a, f(a), b, f(b)) intervals that may still contain a crossing
    type End = (f64, (f64, f64));
    let mut stack: Vec<(End, End)> = (1..grid.len()).map(|i| ((times[i - 1], f[i - 1]), (times[i], f[i]))).collect();
    let mut leaves = Vec::new();
    let mut steps = 0usize;
    while let Some(((a, (fa, za)), (b, (fb, zb)))) = stack.pop() {
        if fa + fb > lip * (b - a) + za + zb {
            continue;
        }
        if b - a <= LEAF_WIDTH || lip * (b - a) <= 0.5 * za.min(zb) {
            leaves.push(((a, (fa, za)), (b, (fb, zb))));
            continue;
        }
        steps += 1;
        if steps > MAX_BISECTIONS {
            return Err(Error::CrossingResolutionFailure("crossing isolation did not terminate".into()));
        }
        let m = 0.5 * (a + b);
        let fm = sample(path, &path.at(m)?);
        stack.push(((a, (fa, za)), (m, fm)));
        stack.push(((m, fm), (b, (fb, zb))));
    }
    leaves.sort_by(|x, y| x.0 .0.partial_cmp(&y.0 .0).unwrap());

    // group leaves closer than the noise lets f separate; the best sampled
    // point of a group is the crossing
    let mut groups: Vec<(f64, f64, End)> = Vec::new(); // (start, end, best sample)
    for ((a, fa), (b, fb)) in leaves {
        let best = if fa.0 <= fb.0 { (a, fa) } else { (b, fb) };
        match groups.last_mut() {
            Some(gr) if lip * (a - gr.1) <= KER_FACTOR * fa.1.max(gr.2 .1 .1) => {
                gr.1 = b;
                if best.1 .0 < gr.2 .1 .0 {
                    gr.2 = best;
                }
            }
            _ => groups.push((a, b, best)),
        }
    }
    // The group touching t = 0 may hide crossings close to the start; count
    // the initial segment in the Cayley chart instead when it stays near Id.
    let first_end = groups.first().filter(|g| g.0 < 1e-9).map_or(0.0, |g| g.1);
    let mut counted_to = 0.0;
    if let Some((i, _)) = grid
        .iter()
        .enumerate()
        .find(|(i, (t, _))| *t > first_end && f[*i].0 > KER_FACTOR * f[*i].1)
    {
        let near_id = grid[..=i].iter().all(|(_, g)| (g - Mat::identity(g.nrows(), g.ncols())).norm() < 1.0);
        if near_id {
            if let Some(s) = cayley_generator(&grid[i].1) {
                if let Ok(sig) = signature(&s, 1e-9) {
                    twice = sig;
                    counted_to = grid[i].0;
                }
            }
        }
    }
    for (start, end, (t, (ft, zt))) in groups {
        // crossings at the endpoints are handled separately
        if start < 1e-9 || start < counted_to || end > 1.0 - 1e-9 || ft > zt {
            continue;
        }
        let g = path.at(t)?;
        let (sig, k) = crossing_form(path, t, &g, KER_FACTOR * zt)?;
        if k == 0 {
            return Err(Error::CrossingResolutionFailure(format!("empty kernel at t={t}")));
        }
        twice += 2 * sig;
    }
    // endpoint t = 1
    let g1 = path.endpoint();
    let (f1, z1) = sample(path, &g1);
    if f1 <= z1 {
        let (sig, _) = crossing_form(path, 1.0, &g1, KER_FACTOR * z1)?;
        twice += sig;
    }
    Ok(Some(twice))
}
