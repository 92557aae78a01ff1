use crate::error::Result;
use crate::sympath::{Mat, SymplecticPath, Tolerances, Trajectory};

/// Dense access to Γ(t) and A(t) for the index engines.
pub(crate) trait PathEval: Sync {
    fn n(&self) -> usize;
    fn at(&self, t: f64) -> Result<Mat>;
    fn endpoint(&self) -> Mat;
    /// Samples (t, Γ(t)) already available without extra integration.
    fn grid(&self) -> Vec<(f64, Mat)>;
    fn generator(&self, t: f64) -> Mat;
    /// Relative accuracy of Γ(t): entries are trusted to about this times ‖Γ(t)‖.
    fn rel_accuracy(&self) -> f64;
}

/// Allowance for the growth of the global integration error over the
/// local error target.
const ERROR_GROWTH: f64 = 1e3;

impl PathEval for Trajectory {
    fn n(&self) -> usize {
        self.path().n()
    }
    fn at(&self, t: f64) -> Result<Mat> {
        Trajectory::at(self, t)
    }
    fn endpoint(&self) -> Mat {
        Trajectory::endpoint(self).clone()
    }
    fn grid(&self) -> Vec<(f64, Mat)> {
        self.checkpoints()
    }
    fn generator(&self, t: f64) -> Mat {
        self.path().generator(t)
    }
    fn rel_accuracy(&self) -> f64 {
        self.tolerances().ode_tol * ERROR_GROWTH
    }
}

/// The k-fold iterate evaluated from one base trajectory:
/// Γᵏ(t) = Γ(kt − j)Γ(1)ʲ.
pub(crate) struct Iterated {
    base: Trajectory,
    k: usize,
    powers: Vec<Mat>,
}

impl Iterated {
    pub fn new(path: &SymplecticPath, k: usize, tol: Tolerances) -> Result<Self> {
        let base = Trajectory::new(path, tol)?;
        let g1 = base.endpoint().clone();
        let d = g1.nrows();
        let mut powers = vec![Mat::identity(d, d)];
        for j in 1..=k {
            let next = &powers[j - 1] * &g1;
            powers.push(next);
        }
        Ok(Iterated { base, k, powers })
    }

    fn split(&self, t: f64) -> (usize, f64) {
        let s = t * self.k as f64;
        let j = (s.floor() as usize).min(self.k - 1);
        (j, (s - j as f64).clamp(0.0, 1.0))
    }
}

impl PathEval for Iterated {
    fn n(&self) -> usize {
        self.base.path().n()
    }
    fn at(&self, t: f64) -> Result<Mat> {
        if t >= 1.0 {
            return Ok(self.powers[self.k].clone());
        }
        let (j, s) = self.split(t);
        Ok(self.base.at(s)? * &self.powers[j])
    }
    fn endpoint(&self) -> Mat {
        self.powers[self.k].clone()
    }
    fn grid(&self) -> Vec<(f64, Mat)> {
        let g = self.base.checkpoints();
        let mut out = Vec::with_capacity(g.len() * self.k);
        let kf = self.k as f64;
        for j in 0..self.k {
            for (s, m) in &g {
                if j > 0 && *s == 0.0 {
                    continue;
                }
                let t = if j + 1 == self.k && *s == 1.0 { 1.0 } else { (j as f64 + s) / kf };
                out.push((t, m * &self.powers[j]));
            }
        }
        out
    }
    fn generator(&self, t: f64) -> Mat {
        let (j, s) = self.split(t);
        let _ = j;
        self.base.path().generator(s) * self.k as f64
    }
    fn rel_accuracy(&self) -> f64 {
        self.base.rel_accuracy() * self.k as f64
    }
}
