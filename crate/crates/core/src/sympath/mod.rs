//! Symplectic linear algebra: generator paths, their fundamental solutions,
//! iterates and spectral classification of return maps.

mod integrate;
mod io;
mod spectrum;

pub use integrate::{integrate_generator, integrate_generator_with, Trajectory};
pub use io::{PathJson, SampleJson};
pub(crate) use spectrum::complex_eigenvalues as spectrum_complex_eigenvalues;
pub use spectrum::{classify_spectrum, classify_spectrum_with, nullity, EigenCluster, SpectralClassification};

use crate::error::{Error, Result};
use nalgebra::DMatrix;

pub type Mat = DMatrix<f64>;

/// Numerical tolerances. These are configuration, not constants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub symplectic_tol: f64,
    pub eig_tol: f64,
    /// local error target of the adaptive integrator
    pub ode_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { symplectic_tol: 1e-9, eig_tol: 1e-8, ode_tol: 1e-12 }
    }
}

/// The standard complex structure `[[0,-I],[I,0]]` in (q, p) ordering.
pub fn j0(n: usize) -> Mat {
    let mut j = Mat::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = -1.0;
        j[(n + i, i)] = 1.0;
    }
    j
}

/// `‖MᵀJM − J‖_∞` (max entry).
pub fn symplectic_defect(m: &Mat) -> f64 {
    let n = m.nrows() / 2;
    let j = j0(n);
    (m.transpose() * &j * m - j).amax()
}

/// A 2n×2n matrix certified symplectic at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticMatrix {
    n: usize,
    m: Mat,
}

impl SymplecticMatrix {
    pub fn new(m: Mat) -> Result<Self> {
        Self::with_tol(m, Tolerances::default().symplectic_tol)
    }

    pub fn with_tol(m: Mat, tol: f64) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() % 2 != 0 || m.nrows() == 0 {
            return Err(Error::PreconditionViolated("matrix must be 2n x 2n".into()));
        }
        let scale = m.amax().max(1.0);
        let defect = symplectic_defect(&m);
        if defect > tol * scale * scale {
            return Err(Error::PreconditionViolated(format!("not symplectic (defect {defect:e})")));
        }
        Ok(SymplecticMatrix { n: m.nrows() / 2, m })
    }

    pub(crate) fn from_trusted(m: Mat) -> Self {
        SymplecticMatrix { n: m.nrows() / 2, m }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Mat {
        &self.m
    }

    pub fn into_matrix(self) -> Mat {
        self.m
    }
}

/// One knot of a generator path: time, value A(t) and derivative A'(t).
#[derive(Clone, Debug, PartialEq)]
pub struct Knot {
    pub t: f64,
    pub a: Mat,
    pub da: Mat,
}

/// A path Γ:[0,1]→Sp(2n), Γ(0)=Id, given through its generator
/// Γ̇ = J₀A(t)Γ. A(t) is cubic Hermite between knots; two knots at the same
/// time encode a jump of the generator.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticPath {
    n: usize,
    knots: Vec<Knot>,
}

fn symmetrize(a: &Mat) -> Mat {
    (a + a.transpose()) * 0.5
}

impl SymplecticPath {
    /// Builds a path from generator samples; tangents come from
    /// three-point finite differences inside each jump-free piece.
    pub fn new(n: usize, samples: Vec<(f64, Mat)>) -> Result<Self> {
        Self::with_tol(n, samples, Tolerances::default())
    }

    pub fn with_tol(n: usize, samples: Vec<(f64, Mat)>, tol: Tolerances) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPath("n must be positive".into()));
        }
        if samples.len() < 2 {
            return Err(Error::InvalidPath("need at least two samples".into()));
        }
        if samples[0].0 != 0.0 || samples[samples.len() - 1].0 != 1.0 {
            return Err(Error::InvalidPath("samples must start at t=0 and end at t=1".into()));
        }
        for (i, (t, a)) in samples.iter().enumerate() {
            if !t.is_finite() || a.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidPath("non-finite sample".into()));
            }
            if a.nrows() != 2 * n || a.ncols() != 2 * n {
                return Err(Error::InvalidPath(format!("sample {i} is not {0}x{0}", 2 * n)));
            }
            let asym = (a - a.transpose()).amax();
            if asym > tol.symplectic_tol * a.amax().max(1.0) {
                return Err(Error::NonSymmetricGenerator { t: *t, asym });
            }
            if i > 0 {
                let prev = samples[i - 1].0;
                if *t < prev {
                    return Err(Error::InvalidPath("sample times must be non-decreasing".into()));
                }
                if i > 1 && *t == prev && samples[i - 2].0 == prev {
                    return Err(Error::InvalidPath("at most two samples may share a time".into()));
                }
            }
        }
        let ts: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let vals: Vec<Mat> = samples.iter().map(|s| symmetrize(&s.1)).collect();
        let mut knots = Vec::with_capacity(samples.len());
        // pieces are maximal runs of strictly increasing times
        let mut start = 0;
        while start < ts.len() {
            let mut end = start;
            while end + 1 < ts.len() && ts[end + 1] > ts[end] {
                end += 1;
            }
            for i in start..=end {
                let da = if start == end {
                    Mat::zeros(2 * n, 2 * n)
                } else if i == start {
                    (&vals[i + 1] - &vals[i]) / (ts[i + 1] - ts[i])
                } else if i == end {
                    (&vals[i] - &vals[i - 1]) / (ts[i] - ts[i - 1])
                } else {
                    let h0 = ts[i] - ts[i - 1];
                    let h1 = ts[i + 1] - ts[i];
                    let s0 = (&vals[i] - &vals[i - 1]) / h0;
                    let s1 = (&vals[i + 1] - &vals[i]) / h1;
                    (s0 * h1 + s1 * h0) / (h0 + h1)
                };
                knots.push(Knot { t: ts[i], a: vals[i].clone(), da });
            }
            start = end + 1;
        }
        Ok(SymplecticPath { n, knots })
    }

    /// Builds a path from explicit Hermite knots.
    pub fn from_knots(n: usize, knots: Vec<Knot>) -> Result<Self> {
        let samples = knots.iter().map(|k| (k.t, k.a.clone())).collect();
        let mut p = Self::new(n, samples)?;
        for (dst, src) in p.knots.iter_mut().zip(knots) {
            if src.da.nrows() != 2 * n || src.da.ncols() != 2 * n {
                return Err(Error::InvalidPath("derivative has wrong shape".into()));
            }
            dst.da = symmetrize(&src.da);
        }
        Ok(p)
    }

    /// Constant generator A on [0,1].
    pub fn constant(a: Mat) -> Result<Self> {
        let n = a.nrows() / 2;
        Self::new(n, vec![(0.0, a.clone()), (1.0, a)])
    }

    /// Samples `f` at `m+1` uniform knots.
    pub fn from_fn(n: usize, m: usize, f: impl Fn(f64) -> Mat) -> Result<Self> {
        let m = m.max(1);
        let samples = (0..=m)
            .map(|i| {
                let t = if i == m { 1.0 } else { i as f64 / m as f64 };
                (t, f(t))
            })
            .collect();
        Self::new(n, samples)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn knots(&self) -> &[Knot] {
        &self.knots
    }

    /// (t, A(t)) pairs as stored.
    pub fn samples(&self) -> Vec<(f64, Mat)> {
        self.knots.iter().map(|k| (k.t, k.a.clone())).collect()
    }

    /// Index pairs (i, i+1) of knots bounding a non-empty interval.
    pub(crate) fn segments(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.knots.len() - 1).filter(move |&i| self.knots[i + 1].t > self.knots[i].t)
    }

    /// Evaluates the Hermite cubic on segment `i` at time `t`.
    pub(crate) fn eval_segment(&self, i: usize, t: f64) -> Mat {
        let k0 = &self.knots[i];
        let k1 = &self.knots[i + 1];
        let h = k1.t - k0.t;
        let s = ((t - k0.t) / h).clamp(0.0, 1.0);
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        &k0.a * h00 + &k0.da * (h10 * h) + &k1.a * h01 + &k1.da * (h11 * h)
    }

    fn eval_segment_derivative(&self, i: usize, t: f64) -> Mat {
        let k0 = &self.knots[i];
        let k1 = &self.knots[i + 1];
        let h = k1.t - k0.t;
        let s = ((t - k0.t) / h).clamp(0.0, 1.0);
        let s2 = s * s;
        let d00 = (6.0 * s2 - 6.0 * s) / h;
        let d10 = 3.0 * s2 - 4.0 * s + 1.0;
        let d01 = (-6.0 * s2 + 6.0 * s) / h;
        let d11 = 3.0 * s2 - 2.0 * s;
        &k0.a * d00 + &k0.da * d10 + &k1.a * d01 + &k1.da * d11
    }

    /// Segment containing `t` (right-continuous at jumps, last segment at t=1).
    pub(crate) fn segment_at(&self, t: f64) -> usize {
        let mut found = None;
        for i in self.segments() {
            if self.knots[i].t <= t {
                found = Some(i);
            }
            if t < self.knots[i + 1].t {
                break;
            }
        }
        found.unwrap_or(0)
    }

    /// The generator A(t) (right limit at jumps).
    pub fn generator(&self, t: f64) -> Mat {
        let i = self.segment_at(t.clamp(0.0, 1.0));
        self.eval_segment(i, t.clamp(0.0, 1.0))
    }

    fn map_knots(&self, f: impl Fn(&Knot) -> Knot) -> Self {
        SymplecticPath { n: self.n, knots: self.knots.iter().map(f).collect() }
    }

    /// The path generated by A(t) − εI.
    pub fn shifted(&self, eps: f64) -> Self {
        let id = Mat::identity(2 * self.n, 2 * self.n);
        self.map_knots(|k| Knot { t: k.t, a: &k.a - &id * eps, da: k.da.clone() })
    }

    /// The path generated by A(t) + B(t) on the union of knots of both paths.
    pub fn add_generator(&self, other: &SymplecticPath) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::PreconditionViolated("dimension mismatch".into()));
        }
        let (a, b) = common_refinement(self, other);
        let knots = a
            .knots
            .iter()
            .zip(&b.knots)
            .map(|(x, y)| Knot { t: x.t, a: &x.a + &y.a, da: &x.da + &y.da })
            .collect();
        Ok(SymplecticPath { n: self.n, knots })
    }

    /// Generator −A(1−t), whose solution is Γ(1−t)Γ(1)⁻¹: homotopic with
    /// fixed endpoints to t ↦ Γ(t)⁻¹.
    pub fn inverse(&self) -> Self {
        let knots = self
            .knots
            .iter()
            .rev()
            .map(|k| Knot { t: 1.0 - k.t, a: -&k.a, da: k.da.clone() })
            .collect::<Vec<_>>();
        let mut knots = knots;
        knots[0].t = 0.0;
        let last = knots.len() - 1;
        knots[last].t = 1.0;
        SymplecticPath { n: self.n, knots }
    }

    /// Inserts knots so that each segment is split into `m` equal parts.
    /// The generator is unchanged (cubic subdivision is exact).
    pub fn refined(&self, m: usize) -> Self {
        let m = m.max(1);
        let mut knots = Vec::new();
        for (idx, k) in self.knots.iter().enumerate() {
            knots.push(k.clone());
            if idx + 1 < self.knots.len() && self.knots[idx + 1].t > k.t {
                let t0 = k.t;
                let t1 = self.knots[idx + 1].t;
                for j in 1..m {
                    let t = t0 + (t1 - t0) * j as f64 / m as f64;
                    knots.push(Knot {
                        t,
                        a: self.eval_segment(idx, t),
                        da: self.eval_segment_derivative(idx, t),
                    });
                }
            }
        }
        SymplecticPath { n: self.n, knots }
    }

    /// Knots inserted at the given times (must lie in [0,1]).
    pub fn with_times(&self, times: &[f64]) -> Self {
        let mut extra: Vec<f64> = times
            .iter()
            .copied()
            .filter(|t| *t > 0.0 && *t < 1.0 && !self.knots.iter().any(|k| k.t == *t))
            .collect();
        extra.sort_by(|a, b| a.partial_cmp(b).unwrap());
        extra.dedup();
        let mut knots = Vec::new();
        let mut e = 0;
        for (idx, k) in self.knots.iter().enumerate() {
            knots.push(k.clone());
            if idx + 1 < self.knots.len() && self.knots[idx + 1].t > k.t {
                while e < extra.len() && extra[e] < self.knots[idx + 1].t {
                    if extra[e] > k.t {
                        let t = extra[e];
                        knots.push(Knot {
                            t,
                            a: self.eval_segment(idx, t),
                            da: self.eval_segment_derivative(idx, t),
                        });
                    }
                    e += 1;
                }
            }
        }
        SymplecticPath { n: self.n, knots }
    }

    /// Block-diagonal direct sum in the symplectic sense: (q₁,q₂,p₁,p₂).
    pub fn direct_sum(&self, other: &SymplecticPath) -> Self {
        let (a, b) = common_refinement(self, other);
        let n = self.n + other.n;
        let knots = a
            .knots
            .iter()
            .zip(&b.knots)
            .map(|(x, y)| Knot {
                t: x.t,
                a: symplectic_block_sum(&x.a, &y.a),
                da: symplectic_block_sum(&x.da, &y.da),
            })
            .collect();
        SymplecticPath { n, knots }
    }
}

/// Inserts the knots of each path into the other so both share the
/// same knot sequence (including jump structure).
fn common_refinement(p: &SymplecticPath, q: &SymplecticPath) -> (SymplecticPath, SymplecticPath) {
    let times: Vec<f64> = p.knots.iter().chain(&q.knots).map(|k| k.t).collect();
    let p1 = p.with_times(&times);
    let q1 = q.with_times(&times);
    // both now share the same distinct times; align jump duplicates
    let group = |ks: &[Knot]| -> Vec<Vec<Knot>> {
        let mut out: Vec<Vec<Knot>> = Vec::new();
        for k in ks {
            match out.last_mut() {
                Some(g) if g[0].t == k.t => g.push(k.clone()),
                _ => out.push(vec![k.clone()]),
            }
        }
        out
    };
    let (gp, gq) = (group(&p1.knots), group(&q1.knots));
    let mut pk = Vec::new();
    let mut qk = Vec::new();
    for (a, b) in gp.into_iter().zip(gq) {
        let m = a.len().max(b.len());
        for i in 0..m {
            pk.push(a[i.min(a.len() - 1)].clone());
            qk.push(b[i.min(b.len() - 1)].clone());
        }
    }
    (SymplecticPath { n: p.n, knots: pk }, SymplecticPath { n: q.n, knots: qk })
}

/// Block sum of two matrices written in (q,p) ordering.
pub fn symplectic_block_sum(a: &Mat, b: &Mat) -> Mat {
    let n1 = a.nrows() / 2;
    let n2 = b.nrows() / 2;
    let n = n1 + n2;
    let mut m = Mat::zeros(2 * n, 2 * n);
    let map1 = |i: usize| if i < n1 { i } else { n + (i - n1) };
    let map2 = |i: usize| if i < n2 { n1 + i } else { n + n1 + (i - n2) };
    for i in 0..2 * n1 {
        for j in 0..2 * n1 {
            m[(map1(i), map1(j))] = a[(i, j)];
        }
    }
    for i in 0..2 * n2 {
        for j in 0..2 * n2 {
            m[(map2(i), map2(j))] = b[(i, j)];
        }
    }
    m
}

/// The k-fold iterate Γ^k(t) = Γ(kt − j)Γ(1)^j on [j/k, (j+1)/k], as the
/// path generated by k·A(kt − j).
pub fn iterate_path(path: &SymplecticPath, k: usize) -> Result<SymplecticPath> {
    if k == 0 {
        return Err(Error::PreconditionViolated("iterate must be >= 1".into()));
    }
    if k == 1 {
        return Ok(path.clone());
    }
    let kf = k as f64;
    let mut knots = Vec::with_capacity(k * path.knots.len());
    for j in 0..k {
        for kn in &path.knots {
            let t = if j + 1 == k && kn.t == 1.0 { 1.0 } else { (j as f64 + kn.t) / kf };
            knots.push(Knot { t, a: &kn.a * kf, da: &kn.da * (kf * kf) });
        }
    }
    Ok(SymplecticPath { n: path.n, knots })
}
