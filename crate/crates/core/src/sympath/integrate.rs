use super::{j0, symplectic_defect, Mat, SymplecticMatrix, SymplecticPath, Tolerances};
use crate::error::{Error, Result};

// Dormand–Prince 5(4) tableau
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Pulls a nearly symplectic matrix back onto Sp(2n) by Newton steps
/// M ← M(I + ½JE), E = MᵀJM − J.
pub(crate) fn reproject(m: &mut Mat) {
    let n = m.nrows() / 2;
    let j = j0(n);
    for _ in 0..3 {
        let e = m.transpose() * &j * &*m - &j;
        if e.amax() < 1e-15 {
            break;
        }
        let x = &j * e * 0.5;
        *m = &*m + &*m * x;
    }
}

struct Stepper<'a> {
    path: &'a SymplecticPath,
    j: Mat,
    tol: Tolerances,
}

impl<'a> Stepper<'a> {
    fn rhs(&self, seg: usize, t: f64, y: &Mat) -> Mat {
        &self.j * self.path.eval_segment(seg, t) * y
    }

    /// Integrates on segment `seg` from (t0, y0) to t1; calls `visit` after each accepted step.
    fn run(&self, seg: usize, t0: f64, y0: Mat, t1: f64, mut visit: impl FnMut(f64, &Mat)) -> Result<Mat> {
        let mut t = t0;
        let mut y = y0;
        if t1 <= t0 {
            return Ok(y);
        }
        let anorm = self
            .path
            .eval_segment(seg, t0)
            .amax()
            .max(self.path.eval_segment(seg, t1).amax())
            .max(1e-3);
        let mut h = (0.05 / anorm).min(t1 - t0);
        let mut k1 = self.rhs(seg, t, &y);
        let mut steps = 0usize;
        let atol = self.tol.ode_tol;
        while t < t1 {
            steps += 1;
            if steps > 5_000_000 || !h.is_finite() {
                return Err(Error::IntegrationDivergence(t));
            }
            let last = t + h >= t1;
            if last {
                h = t1 - t;
            }
            let mut ks: Vec<Mat> = Vec::with_capacity(7);
            ks.push(k1.clone());
            for s in 1..7 {
                let mut ys = y.clone();
                for (r, kr) in ks.iter().enumerate() {
                    if A[s][r] != 0.0 {
                        ys += kr * (h * A[s][r]);
                    }
                }
                ks.push(self.rhs(seg, t + C[s] * h, &ys));
            }
            let mut y5 = y.clone();
            let mut err = Mat::zeros(y.nrows(), y.ncols());
            for s in 0..7 {
                if B5[s] != 0.0 {
                    y5 += &ks[s] * (h * B5[s]);
                }
                err += &ks[s] * (h * (B5[s] - B4[s]));
            }
            let scale = atol * (1.0 + y.amax().max(y5.amax()));
            let en = err.amax() / scale;
            if !en.is_finite() || y5.iter().any(|x| !x.is_finite()) {
                h *= 0.25;
                if h < 1e-15 * (1.0 + t.abs()) {
                    return Err(Error::IntegrationDivergence(t));
                }
                continue;
            }
            if en <= 1.0 {
                t = if last { t1 } else { t + h };
                y = y5;
                if symplectic_defect(&y) > self.tol.symplectic_tol * 0.1 * y.amax().max(1.0).powi(2) {
                    reproject(&mut y);
                    k1 = self.rhs(seg, t, &y);
                } else {
                    k1 = ks.swap_remove(6);
                }
                visit(t, &y);
                let fac = if en == 0.0 { 5.0 } else { (0.9 * en.powf(-0.2)).clamp(0.2, 5.0) };
                h *= fac;
            } else {
                h *= (0.9 * en.powf(-0.2)).clamp(0.1, 0.9);
                if h < 1e-15 * (1.0 + t.abs()) {
                    return Err(Error::IntegrationDivergence(t));
                }
            }
        }
        Ok(y)
    }
}

/// The fundamental solution of a path, integrated once with every
/// accepted step stored as a checkpoint for dense evaluation.
#[derive(Clone, Debug)]
pub struct Trajectory {
    path: SymplecticPath,
    tol: Tolerances,
    /// (time, segment, Γ(time))
    checkpoints: Vec<(f64, usize, Mat)>,
}

impl Trajectory {
    pub fn new(path: &SymplecticPath, tol: Tolerances) -> Result<Self> {
        let dim = path.dim();
        let stepper = Stepper { path, j: j0(path.n()), tol };
        let mut checkpoints = Vec::new();
        let mut y = Mat::identity(dim, dim);
        let segs: Vec<usize> = path.segments().collect();
        for &seg in &segs {
            let t0 = path.knots[seg].t;
            let t1 = path.knots[seg + 1].t;
            checkpoints.push((t0, seg, y.clone()));
            y = stepper.run(seg, t0, y, t1, |t, m| {
                if t < t1 {
                    checkpoints.push((t, seg, m.clone()));
                }
            })?;
        }
        let last = *segs.last().expect("path has at least one segment");
        checkpoints.push((1.0, last, y));
        Ok(Trajectory { path: path.clone(), tol, checkpoints })
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tol
    }

    pub fn path(&self) -> &SymplecticPath {
        &self.path
    }

    /// Γ(1).
    pub fn endpoint(&self) -> &Mat {
        &self.checkpoints.last().unwrap().2
    }

    /// Times of all stored checkpoints (non-decreasing, starting at 0, ending at 1).
    pub fn times(&self) -> Vec<f64> {
        let mut ts: Vec<f64> = self.checkpoints.iter().map(|c| c.0).collect();
        ts.dedup();
        ts
    }

    /// Stored samples (t, Γ(t)) with duplicate times removed.
    pub fn checkpoints(&self) -> Vec<(f64, Mat)> {
        let mut out: Vec<(f64, Mat)> = Vec::with_capacity(self.checkpoints.len());
        for (t, _, m) in &self.checkpoints {
            if out.last().map_or(true, |l| l.0 < *t) {
                out.push((*t, m.clone()));
            }
        }
        out
    }

    /// Γ(t) for any t ∈ [0,1].
    pub fn at(&self, t: f64) -> Result<Mat> {
        let t = t.clamp(0.0, 1.0);
        if t == 0.0 {
            let d = self.path.dim();
            return Ok(Mat::identity(d, d));
        }
        if t == 1.0 {
            return Ok(self.endpoint().clone());
        }
        let seg = self.path.segment_at(t);
        // last checkpoint in this segment with time <= t
        let idx = self.checkpoints.partition_point(|c| c.1 < seg || (c.1 == seg && c.0 <= t));
        let (t0, s0, y0) = &self.checkpoints[idx.saturating_sub(1)];
        debug_assert_eq!(*s0, seg);
        if *t0 == t {
            return Ok(y0.clone());
        }
        let stepper = Stepper { path: &self.path, j: j0(self.path.n()), tol: self.tol };
        stepper.run(seg, *t0, y0.clone(), t, |_, _| {})
    }
}

/// Γ(t) for the path, with default tolerances.
pub fn integrate_generator(path: &SymplecticPath, t: f64) -> Result<SymplecticMatrix> {
    integrate_generator_with(path, t, Tolerances::default())
}

pub fn integrate_generator_with(path: &SymplecticPath, t: f64, tol: Tolerances) -> Result<SymplecticMatrix> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::PreconditionViolated(format!("t={t} outside [0,1]")));
    }
    let d = path.dim();
    if t == 0.0 {
        return Ok(SymplecticMatrix::from_trusted(Mat::identity(d, d)));
    }
    let stepper = Stepper { path, j: j0(path.n()), tol };
    let mut y = Mat::identity(d, d);
    for seg in path.segments().collect::<Vec<_>>() {
        let t0 = path.knots[seg].t;
        let t1 = path.knots[seg + 1].t;
        if t0 >= t {
            break;
        }
        y = stepper.run(seg, t0, y, t1.min(t), |_, _| {})?;
    }
    Ok(SymplecticMatrix::from_trusted(y))
}
