mod common;
use common::*;
use reeb_index::index::*;
use reeb_index::sympath::{Mat, SymplecticPath};
use std::f64::consts::PI;

#[test]
fn small_negative_generator_has_index_minus_n() {
    let p = constant(eye(4) * -0.01);
    assert_eq!(cz_index(&p).unwrap(), -2);
}

#[test]
fn rotation_below_full_turn_has_index_one() {
    for c in [0.1, 0.37, 0.5, 0.93] {
        assert_eq!(cz_index(&rotation(1, c)).unwrap(), 1, "c={c}");
    }
}

#[test]
fn rotation_rule_matches_crossing_count() {
    // 2⌊c⌋+1 from enumerating the crossings t = j/c, each of signature 2
    for c in [0.3, 1.2, 1.7, 2.5, 3.1] {
        let expected = 2 * (c as f64).floor() as i64 + 1;
        assert_eq!(cz_index(&rotation(1, c)).unwrap(), expected, "c={c}");
    }
}

#[test]
fn degenerate_endpoint_rejected() {
    assert_eq!(cz_index(&rotation(1, 1.0)).unwrap_err().name(), "DegenerateEndpoint");
}

#[test]
fn rs_index_examples() {
    assert_eq!(rs_index(&constant(Mat::zeros(2, 2))).unwrap(), HalfInt::from_int(0));
    assert_eq!(rs_index(&rotation(1, 1.0)).unwrap(), HalfInt::from_int(2));
    assert_eq!(rs_index(&rotation(1, 2.5)).unwrap(), HalfInt::from_int(5));
}

#[test]
fn lower_and_upper_examples() {
    let id2 = constant(Mat::zeros(4, 4));
    assert_eq!(cz_minus(&id2).unwrap(), -2);
    assert_eq!(cz_plus(&id2).unwrap(), 2);
    assert_eq!(cz_minus(&rotation(1, 1.0)).unwrap(), 1);
    assert_eq!(cz_plus(&rotation(1, 1.0)).unwrap(), 3);
}

#[test]
fn nondegenerate_extensions_agree() {
    let p = random_path(11, 2, 5, 3.0);
    let cz = cz_index(&p).unwrap();
    assert_eq!(cz_minus(&p).unwrap(), cz);
    assert_eq!(cz_plus(&p).unwrap(), cz);
}

#[test]
fn mean_index_of_rotation() {
    for c in [0.3, 1.0, 1.25, 2.5] {
        let m = mean_index(&rotation(1, c), 8).unwrap();
        assert!((m - 2.0 * c).abs() <= 1.0 / 8.0 + 1e-12, "c={c} mean={m}");
    }
}

#[test]
fn mean_index_of_hyperbolic_path() {
    let a = Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0]));
    let m = mean_index(&constant(a), 8).unwrap();
    assert!(m.abs() <= 1.0 / 8.0, "mean={m}");
}

#[test]
fn trivialization_shift() {
    let r = IndexReport { mu_rs: HalfInt::from_int(4), mu_minus: 4, mu_plus: 4, mean: 4.0, nullity: 0, nondegenerate: true };
    assert_eq!(apply_trivialization_shift(&r, TrivializationShift { maslov: 0 }), r);
    let s = apply_trivialization_shift(&r, TrivializationShift { maslov: 1 });
    assert_eq!(s.mu_rs, HalfInt::from_int(6));
    assert_eq!((s.mu_minus, s.mu_plus, s.nullity), (6, 6, 0));
    assert_eq!(reduced_index(5, 3), 6);
}

#[test]
fn spectral_flow_examples() {
    assert_eq!(spectral_flow_index(&constant(Mat::zeros(2, 2)), 8).unwrap(), -1);
    assert_eq!(spectral_flow_index(&constant(Mat::zeros(4, 4)), 16).unwrap(), -2);
    assert_eq!(spectral_flow_index(&constant(eye(4) * -0.01), 16).unwrap(), -2);
    assert_eq!(spectral_flow_index(&rotation(1, 1.0), 8).unwrap(), 1);
    for seed in 0..5 {
        let p = random_path(100 + seed, 1, 4, 4.0);
        if let Ok(cz) = cz_index(&p) {
            assert_eq!(spectral_flow_index(&p, 8).unwrap(), cz, "seed {seed}");
        }
    }
}

#[test]
fn loop_axiom_adds_two() {
    let base = random_path(5, 1, 4, 2.0);
    let cz = cz_index(&base).unwrap();
    // φ(t)Γ(t) with φ a full positive turn: generator 2πId + φAφᵀ
    let looped = SymplecticPath::from_fn(1, 400, |t| {
        let r = common::expm(&(common::j0(1) * (2.0 * PI * t)));
        eye(2) * (2.0 * PI) + &r * base.generator(t) * r.transpose()
    })
    .unwrap();
    assert_eq!(cz_index(&looped).unwrap(), cz + 2);
}
