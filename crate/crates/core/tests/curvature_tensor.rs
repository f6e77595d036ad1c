use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use quatstab::curvature::{self, SpaceFormParams};
use quatstab::quaternion_frame::{AdaptedFrame, QuaternionStructure};
use quatstab::seeded;

/// Independent oracle: the textbook vector-valued form
/// R(X,Y)Z = (c/4)[<Y,Z>X - <X,Z>Y + sum_a (<J_a Y,Z> J_a X - <J_a X,Z> J_a Y + 2<X,J_a Y> J_a Z)].
fn textbook_r(c: f64, q: &QuaternionStructure, x: &DVector<f64>, y: &DVector<f64>, z: &DVector<f64>) -> DVector<f64> {
    let mut out = x * y.dot(z) - y * x.dot(z);
    for j in q.matrices() {
        let jx = j * x;
        let jy = j * y;
        let jz = j * z;
        out += &jx * jy.dot(z) - &jy * jx.dot(z) + &jz * (2.0 * x.dot(&jy));
    }
    out * (c / 4.0)
}

fn rotated(n: usize, seed: u64) -> QuaternionStructure {
    let o = seeded::random_orthogonal(4 * n, seed);
    QuaternionStructure::standard(n).unwrap().conjugated(&o).unwrap()
}

#[test]
fn literal_transcription_matches_textbook_form() {
    for (n, c) in [(1, 4.0), (2, -1.0), (3, 2.5)] {
        let p = SpaceFormParams::new(n, c).unwrap();
        let q = rotated(n, 5);
        let mut rng = seeded::rng(99);
        for _ in 0..200 {
            let [x, y, z, u] = [(); 4].map(|_| seeded::gaussian_vector(&mut rng, 4 * n));
            let lit = curvature::riemann(&p, &q, &x, &y, &z, &u).unwrap();
            let oracle = textbook_r(c, &q, &x, &y, &z).dot(&u);
            assert!((lit - oracle).abs() <= 1e-10 * (1.0 + oracle.abs()), "{lit} vs {oracle}");
        }
    }
}

#[test]
fn contraction_brute_force_n3() {
    // oracle: Ricci via the textbook form over the standard basis, no adapted frame
    let p = SpaceFormParams::new(3, -2.0).unwrap();
    let q = rotated(3, 8);
    let dim = 12;
    let e = |k: usize| DVector::from_fn(dim, |i, _| if i == k { 1.0 } else { 0.0 });
    let mut oracle = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut acc = DVector::zeros(dim);
        for k in 0..dim {
            acc += textbook_r(-2.0, &q, &e(col), &e(k), &e(k));
        }
        oracle.set_column(col, &acc);
    }
    assert!((&oracle + DMatrix::<f64>::identity(dim, dim) * 10.0).amax() < 1e-12);
    let f = AdaptedFrame::build(&q, 1).unwrap();
    let m = curvature::curvature_term_operator(&p, &q, &f).unwrap();
    assert!((m - oracle).amax() < 1e-10 * (1.0 + 2.0) * 3.0);
}

#[test]
fn flat_contraction_is_zero() {
    let p = SpaceFormParams::new(2, 0.0).unwrap();
    let q = rotated(2, 3);
    let f = AdaptedFrame::build(&q, 2).unwrap();
    assert_eq!(curvature::curvature_term_operator(&p, &q, &f).unwrap().amax(), 0.0);
}

#[test]
fn contraction_is_frame_independent() {
    let p = SpaceFormParams::new(2, 3.0).unwrap();
    let q = rotated(2, 4);
    let a = curvature::curvature_term_operator(&p, &q, &AdaptedFrame::build(&q, 10).unwrap()).unwrap();
    let b = curvature::curvature_term_operator(&p, &q, &AdaptedFrame::build(&q, 11).unwrap()).unwrap();
    assert!((a - b).amax() < 1e-10);
}

#[test]
fn quaternion_sectional_on_random_vectors() {
    let p = SpaceFormParams::new(2, -4.0).unwrap();
    let q = rotated(2, 6);
    let mut rng = seeded::rng(0);
    for _ in 0..100 {
        let x = seeded::gaussian_vector(&mut rng, 8).normalize();
        let k = curvature::quaternion_sectional(&p, &q, &x, 2).unwrap();
        assert!((k + 4.0).abs() <= 1e-10 * 4.0 + 1e-12);
    }
}

#[test]
fn symmetry_checks_pass() {
    for (n, c) in [(1, 4.0), (2, -1.0)] {
        let p = SpaceFormParams::new(n, c).unwrap();
        let q = rotated(n, 7);
        let report = curvature::check_symmetries(&p, &q, 1000, 3, 1e-10).unwrap();
        assert!(report.passed(), "{report:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multilinear_in_each_slot(seed in any::<u64>(), slot in 0usize..4, a in -3.0f64..3.0, b in -3.0f64..3.0, n in 1usize..=3) {
        let p = SpaceFormParams::new(n, 1.7).unwrap();
        let q = rotated(n, seed ^ 1);
        let mut rng = seeded::rng(seed);
        let args: Vec<DVector<f64>> = (0..4).map(|_| seeded::gaussian_vector(&mut rng, 4 * n)).collect();
        let extra = seeded::gaussian_vector(&mut rng, 4 * n);
        let eval = |v: &[DVector<f64>]| curvature::riemann(&p, &q, &v[0], &v[1], &v[2], &v[3]).unwrap();
        let mut combined = args.clone();
        combined[slot] = &args[slot] * a + &extra * b;
        let mut other = args.clone();
        other[slot] = extra.clone();
        let lhs = eval(&combined);
        let rhs = a * eval(&args) + b * eval(&other);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs().max(rhs.abs())));
    }

    #[test]
    fn conjugation_equivariance(seed in any::<u64>(), n in 1usize..=3) {
        let p = SpaceFormParams::new(n, -2.5).unwrap();
        let q = rotated(n, seed);
        let o = seeded::random_orthogonal(4 * n, seed.wrapping_add(1));
        let qc = q.conjugated(&o).unwrap();
        let mut rng = seeded::rng(seed);
        let v: Vec<DVector<f64>> = (0..4).map(|_| seeded::gaussian_vector(&mut rng, 4 * n)).collect();
        let ot = o.transpose();
        let w: Vec<DVector<f64>> = v.iter().map(|x| &ot * x).collect();
        let lhs = curvature::riemann(&p, &qc, &w[0], &w[1], &w[2], &w[3]).unwrap();
        let rhs = curvature::riemann(&p, &q, &v[0], &v[1], &v[2], &v[3]).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()));
    }
}
