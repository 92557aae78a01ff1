//! Spectral-flow engine: the operator L_A = −J₀ d/dt − A(t) on loops,
//! truncated to Fourier modes |m| ≤ M.
//!
//! Labels are fixed by continuation from A = 0, where the spectrum is 2πZ
//! with 2n-fold multiplicity. The kernel cluster of L_0 receives the labels
//! −n+1, …, n, so that the answer for A = −εId is −n (and +n for A = +εId).
//! Continuation in a finite truncation preserves the count of eigenvalues
//! below the bottom of the spectrum, so the index reduces to
//! #{λ < 0} − 2nM − n, provided no eigenvalue enters from the truncation edge.

use crate::error::{Error, Result};
use crate::sympath::{j0, Mat, SymplecticPath};
use std::f64::consts::PI;

const GL_X: [f64; 8] = [
    -0.960_289_856_497_536_3,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329_0,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_W: [f64; 8] = [
    0.101_228_536_290_376_3,
    0.222_381_034_453_374_5,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362_0,
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Fourier moments C_k = ∫A cos 2πkt, S_k = ∫A sin 2πkt for k ≤ kmax.
fn moments(path: &SymplecticPath, kmax: usize) -> (Vec<Mat>, Vec<Mat>) {
    let d = path.dim();
    let mut c = vec![Mat::zeros(d, d); kmax + 1];
    let mut s = vec![Mat::zeros(d, d); kmax + 1];
    let knots = path.knots();
    for i in path.segments() {
        let (t0, t1) = (knots[i].t, knots[i + 1].t);
        let pieces = (((t1 - t0) * (kmax as f64 + 1.0) * 2.0).ceil() as usize).max(1);
        let h = (t1 - t0) / pieces as f64;
        for p in 0..pieces {
            let a = t0 + p as f64 * h;
            for (x, w) in GL_X.iter().zip(GL_W.iter()) {
                let t = a + 0.5 * h * (x + 1.0);
                let at = path.eval_segment(i, t) * (0.5 * h * w);
                for k in 0..=kmax {
                    let th = 2.0 * PI * k as f64 * t;
                    c[k] += &at * th.cos();
                    if k > 0 {
                        s[k] += &at * th.sin();
                    }
                }
            }
        }
    }
    (c, s)
}

fn count_index(path: &SymplecticPath, modes: usize) -> Result<(i64, f64)> {
    let n = path.n();
    let d = 2 * n;
    let m = modes;
    let (cm, sm) = moments(path, 2 * m);
    let nb = 2 * m + 1;
    let size = nb * d;
    let mut l = Mat::zeros(size, size);
    // block index: 0 = constant, 2m-1 = cos m, 2m = sin m
    let kind = |b: usize| -> (usize, bool) {
        if b == 0 {
            (0, true)
        } else {
            ((b + 1) / 2, b % 2 == 1)
        }
    };
    let r2 = 2f64.sqrt();
    for p in 0..nb {
        for q in 0..nb {
            let (mp, cp) = kind(p);
            let (mq, cq) = kind(q);
            let block: Mat = match (p == 0, q == 0) {
                (true, true) => cm[0].clone(),
                (true, false) => if cq { &cm[mq] * r2 } else { &sm[mq] * r2 },
                (false, true) => if cp { &cm[mp] * r2 } else { &sm[mp] * r2 },
                (false, false) => {
                    let diff = mp.abs_diff(mq);
                    match (cp, cq) {
                        (true, true) => &cm[diff] + &cm[mp + mq],
                        (false, false) => &cm[diff] - &cm[mp + mq],
                        (true, false) => {
                            // 2∫cos(mp)sin(mq) = S_{mq+mp} + sgn(mq−mp)S_{|mq−mp|}
                            let sg = if mq > mp { 1.0 } else if mq < mp { -1.0 } else { 0.0 };
                            &sm[mp + mq] + &sm[diff] * sg
                        }
                        (false, true) => {
                            let sg = if mp > mq { 1.0 } else if mp < mq { -1.0 } else { 0.0 };
                            &sm[mp + mq] + &sm[diff] * sg
                        }
                    }
                }
            };
            l.view_mut((p * d, q * d), (d, d)).copy_from(&(-block));
        }
    }
    let j = j0(n);
    for mm in 1..=m {
        let w = 2.0 * PI * mm as f64;
        let (bc, bs) = ((2 * mm - 1) * d, 2 * mm * d);
        let mut v = l.view_mut((bc, bs), (d, d));
        v -= &j * w;
        let mut v = l.view_mut((bs, bc), (d, d));
        v += &j * w;
    }
    let ev = l.symmetric_eigenvalues();
    let anorm = path.knots().iter().map(|k| k.a.amax()).fold(0.0, f64::max);
    let zero_tol = 1e-7 * (1.0 + anorm);
    let lo = ev.min();
    let hi = ev.max();
    let edge = 2.0 * PI * m as f64;
    if lo > -0.5 * edge || hi < 0.5 * edge {
        return Err(Error::ContinuationAmbiguity("spectrum reaches truncation edge".into()));
    }
    let neg = ev.iter().filter(|&&x| x < -zero_tol).count() as i64;
    let near = ev.iter().map(|x| x.abs()).filter(|&x| x > zero_tol).fold(f64::INFINITY, f64::min);
    Ok((neg - (d * m) as i64 - n as i64, near))
}

/// max{k : λ_k(A) < 0} with the labelling described in the module docs.
pub fn spectral_flow_index(path: &SymplecticPath, fourier_modes: usize) -> Result<i64> {
    let n = path.n();
    if fourier_modes < 8 * n {
        return Err(Error::PreconditionViolated(format!("fourier_modes must be >= {}", 8 * n)));
    }
    let anorm = path.knots().iter().map(|k| k.a.amax()).fold(0.0, f64::max) * (2 * n) as f64;
    let mut m = fourier_modes.max((anorm / PI).ceil() as usize + 4);
    let mut prev = count_index(path, m)?.0;
    for _ in 0..3 {
        m *= 2;
        let cur = count_index(path, m)?.0;
        if cur == prev {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::ContinuationAmbiguity("eigenvalue count not stable under mode refinement".into()))
}
