#![allow(dead_code)]
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reeb_index::sympath::{Mat, SymplecticPath};
use std::f64::consts::PI;

pub fn eye(d: usize) -> Mat {
    DMatrix::identity(d, d)
}

/// Constant generator 2πc·Id on R^{2n}: rotation by total angle 2πc in each plane.
pub fn rotation(n: usize, c: f64) -> SymplecticPath {
    SymplecticPath::constant(eye(2 * n) * (2.0 * PI * c)).unwrap()
}

pub fn constant(a: Mat) -> SymplecticPath {
    SymplecticPath::constant(a).unwrap()
}

pub fn random_symmetric(rng: &mut ChaCha8Rng, d: usize, scale: f64) -> Mat {
    let m = Mat::from_fn(d, d, |_, _| rng.gen_range(-1.0..1.0));
    (&m + m.transpose()) * (0.5 * scale)
}

/// Random piecewise-cubic generator path with `knots` knots.
pub fn random_path(seed: u64, n: usize, knots: usize, scale: f64) -> SymplecticPath {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = 2 * n;
    let samples = (0..knots)
        .map(|i| {
            let t = if i + 1 == knots { 1.0 } else { i as f64 / (knots - 1) as f64 };
            (t, random_symmetric(&mut rng, d, scale))
        })
        .collect();
    SymplecticPath::new(n, samples).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent oracle: exp(M) by scaling and squaring with a Taylor series.
pub fn expm(m: &Mat) -> Mat {
    let norm = m.amax() * m.nrows() as f64;
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let a = m / 2f64.powi(s);
    let d = m.nrows();
    let mut term = eye(d);
    let mut sum = eye(d);
    for k in 1..30 {
        term = &term * &a / k as f64;
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

pub fn j0(n: usize) -> Mat {
    reeb_index::sympath::j0(n)
}

/// Fixed master seed of the randomized corpora.
pub const CORPUS_SEED: u64 = 20_240_601;

pub fn corpus_random(count: usize, salt: u64) -> Vec<SymplecticPath> {
    (0..count as u64)
        .map(|i| {
            let n = 1 + (i % 3) as usize;
            let knots = 3 + (i % 3) as usize;
            random_path(CORPUS_SEED ^ salt ^ (i << 8), n, knots, 1.0 + (i % 4) as f64)
        })
        .collect()
}

pub fn plane_rotation(angles: &[f64]) -> Mat {
    let n = angles.len();
    let mut a = Mat::zeros(2 * n, 2 * n);
    for (i, &c) in angles.iter().enumerate() {
        a[(i, i)] = 2.0 * PI * c;
        a[(n + i, n + i)] = 2.0 * PI * c;
    }
    a
}

pub fn plane_hyperbolic(a: &mut Mat, i: usize, lambda: f64) {
    let n = a.nrows() / 2;
    a[(i, i)] = 0.0;
    a[(n + i, n + i)] = 0.0;
    a[(i, n + i)] = lambda;
    a[(n + i, i)] = lambda;
}

/// Elliptic, hyperbolic and mixed constant generators plus random paths.
pub fn corpus_families(count: usize, salt: u64) -> Vec<SymplecticPath> {
    let mut g = rng(CORPUS_SEED ^ salt);
    (0..count)
        .map(|i| {
            let n = 1 + i % 3;
            match i % 4 {
                0 => {
                    let angles: Vec<f64> = (0..n).map(|_| g.gen_range(-1.7..1.7)).collect();
                    SymplecticPath::constant(plane_rotation(&angles)).unwrap()
                }
                1 => {
                    let mut a = Mat::zeros(2 * n, 2 * n);
                    for p in 0..n {
                        plane_hyperbolic(&mut a, p, g.gen_range(0.2..1.5));
                    }
                    SymplecticPath::constant(a).unwrap()
                }
                2 => {
                    let angles: Vec<f64> = (0..n).map(|_| g.gen_range(-1.7..1.7)).collect();
                    let mut a = plane_rotation(&angles);
                    plane_hyperbolic(&mut a, g.gen_range(0..n), g.gen_range(0.2..1.5));
                    SymplecticPath::constant(a).unwrap()
                }
                _ => random_path(g.gen(), n, 4, g.gen_range(1.0..4.0)),
            }
        })
        .collect()
}

/// Generators concentrated near zero, where both certificate branches fire.
pub fn corpus_certificate(count: usize) -> Vec<SymplecticPath> {
    let mut g = rng(CORPUS_SEED ^ 7);
    (0..count)
        .map(|i| {
            let n = 1 + i % 3;
            match i % 5 {
                0 | 1 => {
                    let sign = if i % 5 == 0 { -1.0 } else { 1.0 };
                    let angles: Vec<f64> = (0..n).map(|_| sign * g.gen_range(0.01..0.6)).collect();
                    SymplecticPath::constant(plane_rotation(&angles)).unwrap()
                }
                2 => {
                    let shift = if g.gen_bool(0.5) { -1.0 } else { 1.0 } * g.gen_range(0.2..1.5);
                    let a = random_symmetric(&mut g, 2 * n, 0.6) + eye(2 * n) * shift;
                    SymplecticPath::constant(a).unwrap()
                }
                3 => {
                    let shift = if g.gen_bool(0.5) { -1.0 } else { 1.0 } * g.gen_range(0.2..1.5);
                    let base = random_path(g.gen(), n, 4, 0.8);
                    base.add_generator(&SymplecticPath::constant(eye(2 * n) * shift).unwrap()).unwrap()
                }
                _ => random_path(g.gen(), n, 4, g.gen_range(0.5..4.0)),
            }
        })
        .collect()
}
