use num_bigint::BigInt;
use num_rational::BigRational;
use reeb_index::toric::surd::Surd;
use reeb_index::toric::*;
use reeb_index::Error;

fn q(p: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(p))
}

fn expected_sphere(n: i64, k: i64) -> u64 {
    u64::from(k >= n + 2 && (k - n) % 2 == 0)
}

fn expected_s2xs3(kk: u64, deg: i64) -> u64 {
    match deg {
        0 => kk,
        2 => 2 * kk + 1,
        d if d > 2 && d % 2 == 0 => 2 * kk + 2,
        _ => 0,
    }
}

#[test]
fn sphere_cones_are_good() {
    for n in 1..=4 {
        let cone = MomentCone::sphere(n);
        let faces = check_good_cone(&cone).unwrap();
        assert_eq!(faces.edges.len(), n + 1);
        assert!(fundamental_group(&cone).unwrap().is_empty());
    }
}

#[test]
fn s2xs3_cones_are_good_and_simply_connected() {
    for k in 0..=3 {
        let cone = MomentCone::s2xs3(k);
        let faces = check_good_cone(&cone).unwrap();
        assert_eq!(faces.edges.len(), 4);
        assert_eq!(faces.faces_by_codim[0].len(), 4);
        assert!(fundamental_group(&cone).unwrap().is_empty());
    }
}

#[test]
fn cone_rejections() {
    let line = MomentCone::new(vec![vec![1, 0], vec![-1, 0]]).unwrap();
    assert_eq!(check_good_cone(&line), Err(Error::NotStrictlyConvex));
    let nonprim = MomentCone::new(vec![vec![2, 0], vec![0, 1]]).unwrap();
    assert_eq!(check_good_cone(&nonprim), Err(Error::NonPrimitiveNormal(0)));
    let redundant = MomentCone::new(vec![vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
    assert_eq!(check_good_cone(&redundant), Err(Error::RedundantNormal(2)));
    let square = MomentCone::new(vec![vec![1, 0, 1], vec![-1, 0, 1], vec![0, 1, 1], vec![0, -1, 1]]).unwrap();
    assert!(check_good_cone(&square).is_ok());
    // 2x₃ + x₁ ≥ 0 already follows from x₃ ≥ |x₁|
    let implied =
        MomentCone::new(vec![vec![1, 0, 1], vec![-1, 0, 1], vec![0, 1, 1], vec![0, -1, 1], vec![1, 0, 2]]).unwrap();
    assert_eq!(check_good_cone(&implied), Err(Error::RedundantNormal(4)));
    // two facet normals through an edge spanning an index-2 sublattice
    let bad = MomentCone::new(vec![vec![1, 0, 0], vec![0, 1, 0], vec![-1, -2, 2]]).unwrap();
    assert!(matches!(check_good_cone(&bad), Err(Error::NotIntegralBasisCompletable(_))), "{:?}", check_good_cone(&bad));
}

#[test]
fn apex_of_a_square_pyramid_is_a_mismatch() {
    // homogenized square pyramid: the apex ray lies on four facets
    let cone = MomentCone::new(vec![
        vec![0, 0, 1, 0],
        vec![-1, 0, -1, 1],
        vec![1, 0, -1, 1],
        vec![0, -1, -1, 1],
        vec![0, 1, -1, 1],
    ])
    .unwrap();
    assert_eq!(check_good_cone(&cone), Err(Error::FaceFacetCountMismatch(vec![1, 2, 3, 4])));
}

#[test]
fn fundamental_group_examples() {
    let cone = MomentCone::new(vec![vec![2, 1], vec![0, 1]]).unwrap();
    assert_eq!(fundamental_group(&cone).unwrap(), vec![2]);
    let mut perm = cone.clone();
    perm.normals.reverse();
    assert_eq!(fundamental_group(&perm).unwrap(), vec![2]);
}

#[test]
fn reeb_membership() {
    let cone = MomentCone::sphere(2);
    let a = is_reeb_vector(&cone, &[q(0), q(0), q(1)]).unwrap();
    assert_eq!(a, vec![q(1); 3]);
    assert_eq!(is_reeb_vector(&cone, &[q(1), q(0), q(0)]), Err(Error::NotInInteriorDualCone));
    for k in 0..=3 {
        let c = MomentCone::s2xs3(k);
        let sum: Vec<BigRational> =
            (0..3).map(|i| q(c.normals.iter().map(|v| v[i] as i64).sum())).collect();
        let a = is_reeb_vector(&c, &sum).unwrap();
        let back: Vec<BigRational> = (0..3)
            .map(|i| a.iter().zip(&c.normals).map(|(x, v)| x * q(v[i] as i64)).sum())
            .collect();
        assert_eq!(back, sum);
        assert!(a.iter().all(|x| x > &q(0)));
    }
}

#[test]
fn sphere_sum_of_normals_rotations() {
    let cone = MomentCone::sphere(1);
    let faces = check_good_cone(&cone).unwrap();
    let reeb = ReebVector::sum_of_normals(&cone);
    for e in 0..faces.edges.len() {
        let rot = edge_orbit_rotations(&cone, &faces, &reeb, e).unwrap();
        assert_eq!(rot.rotation_numbers(), vec![1.0, 1.0]);
        let idx = orbit_rs_index_checked(&rot, 1, 1).unwrap();
        assert_eq!(idx.mu_rs.0, 8); // 2d = 4
    }
}

#[test]
fn lift_solves_beta_exactly() {
    let cone = MomentCone::s2xs3(0);
    let faces = check_good_cone(&cone).unwrap();
    let reeb = ReebVector::sum_of_normals(&cone);
    for e in 0..4 {
        let rot = edge_orbit_rotations(&cone, &faces, &reeb, e).unwrap();
        // the numerators are the lift R̃ itself: β(R̃) = ν
        for k in 0..3 {
            let s = rot
                .numerators
                .iter()
                .zip(&cone.normals)
                .fold(Surd::zero(), |acc, (x, v)| acc.add(&x.scale_int(v[k])));
            assert_eq!(s, reeb.vector[k]);
        }
        assert!(rot.lift_independent);
    }
}

#[test]
fn sphere_tables() {
    for n in 1..=3usize {
        let cone = MomentCone::sphere(n);
        let cutoff = n as i64 + 12;
        let t = hc_table_auto(&cone, 7, cutoff).unwrap();
        for k in -(n as i64) + 1..=cutoff {
            assert_eq!(t.rank(k), Some(expected_sphere(n as i64, k)), "n={n} degree {k}");
        }
        assert_eq!(t.rank(cutoff + 1), None);
        assert_eq!(t.k_minus, Some(n as i64 + 2));
    }
}

#[test]
fn s2xs3_tables() {
    for kk in 0..=3u64 {
        let cone = MomentCone::s2xs3(kk as i128);
        let t = hc_table_auto(&cone, 11, 12).unwrap();
        for deg in 0..=12 {
            assert_eq!(t.rank(deg), Some(expected_s2xs3(kk, deg)), "k={kk} degree {deg}");
        }
        assert_eq!(t.k_minus, Some(if kk == 0 { 2 } else { 0 }));
    }
}

#[test]
fn degenerate_reeb_is_rejected() {
    let cone = MomentCone::sphere(1);
    let r = hc_table(&cone, &ReebVector::sum_of_normals(&cone), 10);
    assert!(matches!(r, Err(Error::DegenerateReebVector(_))));
}

#[test]
fn tables_are_stable_under_lattice_automorphisms() {
    let g = vec![vec![1, 2, 0], vec![0, 1, 0], vec![3, 7, 1]];
    for kk in 0..=2 {
        let cone = MomentCone::s2xs3(kk);
        let moved = cone.transformed(&g).unwrap();
        assert_eq!(hc_table_auto(&cone, 3, 10).unwrap(), hc_table_auto(&moved, 3, 10).unwrap());
    }
}

#[test]
fn convexity_bound_on_spheres() {
    for n in 1..=3usize {
        let cone = MomentCone::sphere(n);
        let b = convexity_lower_bound(&cone, &vec![q(1); n + 1], 0).unwrap();
        assert_eq!(b.bound, n as i64 + 2);
        assert!(b.dominates_k_minus);
        assert_eq!(b.k_minus, Some(n as i64 + 2));
    }
    let cone = MomentCone::sphere(1);
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    assert_eq!(convexity_lower_bound(&cone, &[half, q(1)], 0), Err(Error::NotInSubgroupK));
}

#[test]
fn reeb_json_round_trip() {
    let cone = MomentCone::sphere(2);
    let r = nondegenerate_reeb_near(&cone, &ReebVector::sum_of_normals(&cone), 5).unwrap();
    let back = ReebVector::from_json(&cone, &r.to_json()).unwrap();
    assert_eq!(back, r);
    let v = ReebVector::from_json(&cone, r#"{"vector": ["0", "0", "1"]}"#).unwrap();
    assert!(v.is_rational());
    assert!(ReebVector::from_json(&cone, r#"{"vector": ["0"], "extra": 1}"#).is_err());
}

#[test]
fn combinatorial_and_numerical_indices_agree() {
    let mut cones: Vec<MomentCone> = (1..=3).map(MomentCone::sphere).collect();
    cones.extend((0..=3).map(MomentCone::s2xs3));
    for cone in cones {
        let faces = check_good_cone(&cone).unwrap();
        let reeb = nondegenerate_reeb_near(&cone, &ReebVector::sum_of_normals(&cone), 1).unwrap();
        for e in 0..faces.edges.len() {
            let rot = edge_orbit_rotations(&cone, &faces, &reeb, e).unwrap();
            for iterate in 1..=10 {
                orbit_rs_index_checked(&rot, iterate, cone.n()).unwrap();
            }
        }
    }
}

#[test]
fn orbit_index_rule_examples() {
    // one rotation slightly below an integer, the other integral: Σ2b_j − n
    let cone = MomentCone::sphere(1);
    let faces = check_good_cone(&cone).unwrap();
    let a = vec![Surd::integer(1), Surd::parse("1 - 1/1000*sqrt(2)").unwrap()];
    let reeb = ReebVector::from_coefficients(&cone, a).unwrap();
    let mut seen = Vec::new();
    for e in 0..2 {
        let rot = edge_orbit_rotations(&cone, &faces, &reeb, e).unwrap();
        seen.push(orbit_rs_index_checked(&rot, 1, 1).unwrap().mu_rs.0 / 2);
    }
    seen.sort();
    assert_eq!(seen, vec![3, 5]);
}
