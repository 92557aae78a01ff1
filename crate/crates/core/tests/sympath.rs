mod common;

use common::{eye, expm, j0, random_path, rotation};
use nalgebra::DMatrix;
use reeb_index::sympath::*;
use reeb_index::Error;
use std::f64::consts::PI;

fn rot2(theta: f64) -> Mat {
    DMatrix::from_row_slice(2, 2, &[theta.cos(), -theta.sin(), theta.sin(), theta.cos()])
}

#[test]
fn zero_generator_gives_identity() {
    let p = SymplecticPath::constant(Mat::zeros(4, 4)).unwrap();
    for t in [0.0, 0.3, 1.0] {
        let m = integrate_generator(&p, t).unwrap();
        assert!((m.matrix() - eye(4)).amax() < 1e-14);
    }
}

#[test]
fn constant_rotation_matches_closed_form() {
    let theta = 2.3;
    let p = SymplecticPath::constant(eye(2) * theta).unwrap();
    for t in [0.25, 0.5, 1.0] {
        let m = integrate_generator(&p, t).unwrap();
        assert!((m.matrix() - rot2(theta * t)).amax() < 1e-10, "t={t}");
    }
}

#[test]
fn hyperbolic_generator_matches_exponential_oracle() {
    let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    let p = SymplecticPath::constant(a.clone()).unwrap();
    let m = integrate_generator(&p, 1.0).unwrap();
    assert!((m.matrix() - expm(&(j0(1) * a))).amax() < 1e-9);
}

#[test]
fn non_symmetric_sample_is_rejected() {
    let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    let r = SymplecticPath::new(1, vec![(0.0, a.clone()), (1.0, a)]);
    assert!(matches!(r, Err(Error::NonSymmetricGenerator { .. })));
}

#[test]
fn integration_stays_symplectic() {
    for seed in 0..10 {
        let p = random_path(seed, 1 + (seed as usize) % 3, 5, 6.0);
        let traj = Trajectory::new(&p, Tolerances::default()).unwrap();
        for t in [0.1, 0.37, 0.8, 1.0] {
            assert!(symplectic_defect(&traj.at(t).unwrap()) < 1e-9);
        }
    }
}

#[test]
fn iterate_examples() {
    let p = rotation(1, 0.3);
    let one = iterate_path(&p, 1).unwrap();
    assert_eq!(one, p);
    let three = iterate_path(&p, 3).unwrap();
    let m = integrate_generator(&three, 1.0).unwrap();
    assert!((m.matrix() - rot2(2.0 * PI * 0.9)).amax() < 1e-9);
}

#[test]
fn iterate_endpoint_is_power_of_return_map() {
    for seed in 0..6 {
        let n = 1 + (seed as usize) % 3;
        let p = random_path(100 + seed, n, 4, 3.0);
        let g = integrate_generator(&p, 1.0).unwrap().into_matrix();
        let mut power = eye(2 * n);
        for k in 1..=12usize {
            power = &power * &g;
            let it = integrate_generator(&iterate_path(&p, k).unwrap(), 1.0).unwrap();
            let scale = power.amax().max(1.0);
            assert!((it.matrix() - &power).amax() <= 1e-9 * k as f64 * scale, "seed {seed} k {k}");
        }
    }
}

#[test]
fn spectral_examples() {
    let tol = Tolerances::default();
    let r = classify_spectrum_with(&rot2(PI / 3.0), tol).unwrap();
    assert!(r.elliptic);
    assert_eq!(r.nullity, 0);
    assert_eq!(r.eigenvalues.len(), 2);
    for c in &r.eigenvalues {
        assert!((c.value.arg().abs() - PI / 3.0).abs() < 1e-12);
    }
    let h = classify_spectrum_with(&DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.5]), tol).unwrap();
    assert!(!h.elliptic);
    let id = classify_spectrum_with(&eye(2), tol).unwrap();
    assert!(id.elliptic);
    assert_eq!(id.nullity, 2);
    assert_eq!(id.eigenvalues.iter().map(|c| c.algebraic).sum::<usize>(), 2);
}

#[test]
fn spectra_of_random_return_maps_are_symmetric() {
    for seed in 0..12 {
        let n = 1 + (seed as usize) % 3;
        let g = integrate_generator(&random_path(300 + seed, n, 4, 4.0), 1.0).unwrap();
        let s = classify_spectrum(&g).unwrap();
        assert_eq!(s.eigenvalues.iter().map(|c| c.algebraic).sum::<usize>(), 2 * n);
        assert!(s.is_symplectically_symmetric(1e-6));
    }
}

#[test]
fn path_json_round_trip() {
    let p = random_path(7, 2, 4, 2.0);
    let back = SymplecticPath::from_json(&p.to_json()).unwrap();
    for (a, b) in p.knots().iter().zip(back.knots()) {
        assert_eq!(a.t, b.t);
        assert!((&a.a - &b.a).amax() < 1e-15);
    }
    assert!(matches!(SymplecticPath::from_json(r#"{"n":1,"samples":[],"x":0}"#), Err(Error::Parse(_))));
}

#[test]
fn symplectic_matrix_validation() {
    assert!(SymplecticMatrix::new(rot2(0.4)).is_ok());
    assert!(SymplecticMatrix::new(DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 2.0])).is_err());
}
