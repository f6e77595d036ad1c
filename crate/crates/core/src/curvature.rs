//! Curvature tensor of the quaternion space form `M^n(c)`.
//!
//! `riemann(X, Y, Z, U)` returns `g(R(X,Y)Z, U)` as
//!
//! ```text
//! -(c/4) { <X,Z><Y,U> - <Z,Y><X,U>
//!          + sum_a [ <X,J_a Z><Y,J_a U> - <U,J_a X><J_a Y,Z> + 2<X,J_a Y><J_a U,Z> ] }
//! ```
//!
//! and sectional curvature is `R(X,Y,Y,X) / |X ^ Y|^2`. With these two
//! conventions every quaternion plane has sectional curvature exactly `c`,
//! which the tests pin down.
//!
//! The tensor is evaluated functionally; nothing of size `(4n)^4` is stored.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::check::{max_abs, Check, CheckReport};
use crate::error::{Error, Result};
use crate::quaternion_frame::{AdaptedFrame, QuaternionStructure};
use crate::seeded;

/// Quaternion dimension `n` and constant quaternion sectional curvature `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceFormParams {
    n: usize,
    c: f64,
}

impl SpaceFormParams {
    pub fn new(n: usize, c: f64) -> Result<Self> {
        crate::quaternion_frame::real_dim(n)?;
        if !c.is_finite() {
            return Err(Error::NonFiniteCurvature(c));
        }
        Ok(SpaceFormParams { n, c })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn dim(&self) -> usize {
        4 * self.n
    }

    /// Ricci constant `(n+2) c`: `Ric = (n+2) c g`.
    pub fn ricci_constant(&self) -> f64 {
        (self.n as f64 + 2.0) * self.c
    }

    fn check_structure(&self, q: &QuaternionStructure) -> Result<()> {
        if q.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: q.dim() });
        }
        Ok(())
    }
}

fn check_len(v: &DVector<f64>, dim: usize) -> Result<()> {
    if v.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, actual: v.len() });
    }
    Ok(())
}

/// `g(R(X,Y)Z, U)`.
pub fn riemann(
    params: &SpaceFormParams,
    q: &QuaternionStructure,
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
    u: &DVector<f64>,
) -> Result<f64> {
    params.check_structure(q)?;
    let dim = params.dim();
    for v in [x, y, z, u] {
        check_len(v, dim)?;
    }
    Ok(riemann_unchecked(params.c, q, x, y, z, u))
}

pub(crate) fn riemann_unchecked(
    c: f64,
    q: &QuaternionStructure,
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
    u: &DVector<f64>,
) -> f64 {
    let mut braces = x.dot(z) * y.dot(u) - z.dot(y) * x.dot(u);
    for j in q.matrices() {
        let jx = j * x;
        let jy = j * y;
        let jz = j * z;
        let ju = j * u;
        braces += x.dot(&jz) * y.dot(&ju) - u.dot(&jx) * jy.dot(z) + 2.0 * x.dot(&jy) * ju.dot(z);
    }
    -(c / 4.0) * braces
}

/// `K(X, Y) = R(X,Y,Y,X) / (|X|^2 |Y|^2 - <X,Y>^2)`.
pub fn sectional_curvature(
    params: &SpaceFormParams,
    q: &QuaternionStructure,
    x: &DVector<f64>,
    y: &DVector<f64>,
) -> Result<f64> {
    params.check_structure(q)?;
    check_len(x, params.dim())?;
    check_len(y, params.dim())?;
    let xx = x.norm_squared();
    let yy = y.norm_squared();
    let xy = x.dot(y);
    let gram = xx * yy - xy * xy;
    if !(gram > 1e-12 * xx * yy) {
        return Err(Error::DegeneratePlane { gram });
    }
    Ok(riemann_unchecked(params.c, q, x, y, y, x) / gram)
}

/// Sectional curvature of the quaternion plane spanned by `X` and
/// `J_{alpha+1} X`.
pub fn quaternion_sectional(
    params: &SpaceFormParams,
    q: &QuaternionStructure,
    x: &DVector<f64>,
    alpha: usize,
) -> Result<f64> {
    if alpha >= 3 {
        return Err(Error::IndexOutOfRange { index: alpha, max: 2 });
    }
    check_len(x, params.dim())?;
    if !(x.norm() > 0.0) {
        return Err(Error::ZeroVector);
    }
    let jx = q.j(alpha) * x;
    sectional_curvature(params, q, x, &jx)
}

/// Matrix of `V -> sum_f R(V, f) f` over the frame, assembled against the
/// standard basis. For a space form this is `(n+2) c I`.
pub fn curvature_term_operator(
    params: &SpaceFormParams,
    q: &QuaternionStructure,
    frame: &AdaptedFrame,
) -> Result<DMatrix<f64>> {
    params.check_structure(q)?;
    if frame.n() != params.n {
        return Err(Error::DimensionMismatch { expected: params.dim(), actual: 4 * frame.n() });
    }
    let dim = params.dim();
    let basis: Vec<DVector<f64>> = (0..dim)
        .map(|k| {
            let mut e = DVector::zeros(dim);
            e[k] = 1.0;
            e
        })
        .collect();
    let mut m = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        for row in 0..dim {
            m[(row, col)] = frame
                .vectors()
                .iter()
                .map(|f| riemann_unchecked(params.c, q, &basis[col], f, f, &basis[row]))
                .sum();
        }
    }
    Ok(m)
}

/// `max |M - (n+2) c I| / ((1+|c|) n)` over `frames` seeded adapted frames.
pub fn check_contraction(
    params: &SpaceFormParams,
    q: &QuaternionStructure,
    frames: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    if frames == 0 {
        return Err(Error::InvalidArgument("frames must be at least 1".into()));
    }
    let dim = params.dim();
    let expected = DMatrix::<f64>::identity(dim, dim) * params.ricci_constant();
    let scale = (1.0 + params.c.abs()) * params.n as f64;
    let mut worst = 0.0f64;
    for k in 0..frames as u64 {
        let frame = AdaptedFrame::build(q, seeded::derive(seed, k))?;
        let m = curvature_term_operator(params, q, &frame)?;
        worst = max_abs(worst, (m - &expected).amax() / scale);
    }
    let mut report = CheckReport::new();
    report.push(Check::residual(
        "sum_f R(V,f)f = (n+2)c V",
        "curvature contraction constant",
        worst,
        tol,
    ));
    Ok(report)
}

/// `max |K(X, J_a X) - c| / (1+|c|)` over seeded random `(X, a)`.
pub fn check_quaternion_sectional(
    params: &SpaceFormParams,
    q: &QuaternionStructure,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let mut rng = seeded::rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let x = seeded::gaussian_vector(&mut rng, params.dim());
        let alpha = rng.random_range(0..3);
        let k = quaternion_sectional(params, q, &x, alpha)?;
        worst = max_abs(worst, (k - params.c) / (1.0 + params.c.abs()));
    }
    let mut report = CheckReport::new();
    report.push(Check::residual(
        "K(X, J_a X) = c",
        "constant quaternion sectional curvature",
        worst,
        tol,
    ));
    Ok(report)
}

/// Classical algebraic symmetries over seeded Gaussian 4-tuples.
pub fn check_symmetries(
    params: &SpaceFormParams,
    q: &QuaternionStructure,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<CheckReport> {
    params.check_structure(q)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let dim = params.dim();
    let c = params.c;
    let mut rng = seeded::rng(seed);
    let (mut anti12, mut anti34, mut pair, mut bianchi) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..trials {
        let [x, y, z, u] = [(); 4].map(|_| seeded::gaussian_vector(&mut rng, dim));
        let r = riemann_unchecked(c, q, &x, &y, &z, &u);
        anti12 = max_abs(anti12, r + riemann_unchecked(c, q, &y, &x, &z, &u));
        anti34 = max_abs(anti34, r + riemann_unchecked(c, q, &x, &y, &u, &z));
        pair = max_abs(pair, r - riemann_unchecked(c, q, &z, &u, &x, &y));
        bianchi = max_abs(
            bianchi,
            r + riemann_unchecked(c, q, &y, &z, &x, &u) + riemann_unchecked(c, q, &z, &x, &y, &u),
        );
    }
    let label = "curvature tensor symmetries";
    let mut report = CheckReport::new();
    report.push(Check::residual("R(X,Y,Z,U) + R(Y,X,Z,U)", label, anti12, tol));
    report.push(Check::residual("R(X,Y,Z,U) + R(X,Y,U,Z)", label, anti34, tol));
    report.push(Check::residual("R(X,Y,Z,U) - R(Z,U,X,Y)", label, pair, tol));
    report.push(Check::residual("first Bianchi identity", label, bianchi, tol));
    Ok(report)
}

/// For `n = 1` the tensor must coincide with the round-sphere tensor
/// `c (<X,U><Y,Z> - <X,Z><Y,U>)`; compared over all 256 basis 4-tuples.
pub fn constant_curvature_reduction(
    params: &SpaceFormParams,
    q: &QuaternionStructure,
) -> Result<CheckReport> {
    if params.n != 1 {
        return Err(Error::NotApplicable("constant-curvature reduction requires n = 1"));
    }
    params.check_structure(q)?;
    let c = params.c;
    let e: Vec<DVector<f64>> = (0..4)
        .map(|k| {
            let mut v = DVector::zeros(4);
            v[k] = 1.0;
            v
        })
        .collect();
    let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let mut dev = 0.0f64;
    for a in 0..4 {
        for b in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    let model = c * (delta(a, l) * delta(b, k) - delta(a, k) * delta(b, l));
                    let r = riemann_unchecked(c, q, &e[a], &e[b], &e[k], &e[l]);
                    dev = max_abs(dev, r - model);
                }
            }
        }
    }
    let mut report = CheckReport::new();
    report.push(Check::residual(
        "n=1 tensor = round-sphere tensor",
        "constant-curvature reduction",
        dev,
        1e-12 * (1.0 + c.abs()),
    ));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(dim: usize, k: usize) -> DVector<f64> {
        let mut v = DVector::zeros(dim);
        v[k] = 1.0;
        v
    }

    #[test]
    fn flat_case_vanishes() {
        let p = SpaceFormParams::new(2, 0.0).unwrap();
        let q = QuaternionStructure::standard(2).unwrap();
        let mut rng = seeded::rng(1);
        let v: Vec<_> = (0..4).map(|_| seeded::gaussian_vector(&mut rng, 8)).collect();
        assert_eq!(riemann(&p, &q, &v[0], &v[1], &v[2], &v[3]).unwrap(), 0.0);
    }

    #[test]
    fn hand_expanded_quaternion_plane() {
        // non-quaternionic terms -1, alpha=1 terms -3: -(4/4)(-4) = 4
        let p = SpaceFormParams::new(1, 4.0).unwrap();
        let q = QuaternionStructure::standard(1).unwrap();
        let x = e(4, 0);
        let y = q.j(0) * &x;
        assert_eq!(riemann(&p, &q, &x, &y, &y, &x).unwrap(), 4.0);
        assert_eq!(quaternion_sectional(&p, &q, &x, 0).unwrap(), 4.0);
    }

    #[test]
    fn diagonal_combination_plane() {
        let p = SpaceFormParams::new(1, 4.0).unwrap();
        let q = QuaternionStructure::standard(1).unwrap();
        let x = e(4, 0);
        let y = (q.j(0) * &x + q.j(1) * &x) / 2f64.sqrt();
        let k = sectional_curvature(&p, &q, &x, &y).unwrap();
        assert!((k - 4.0).abs() < 1e-14);
    }

    #[test]
    fn quaternion_sectional_is_scale_invariant() {
        let p = SpaceFormParams::new(1, 1.0).unwrap();
        let q = QuaternionStructure::standard(1).unwrap();
        let x = DVector::from_vec(vec![7.0, 0.0, 0.0, 0.0]);
        assert!((quaternion_sectional(&p, &q, &x, 2).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn degenerate_and_invalid_inputs() {
        let p = SpaceFormParams::new(1, 1.0).unwrap();
        let q = QuaternionStructure::standard(1).unwrap();
        let x = e(4, 0);
        assert!(matches!(
            sectional_curvature(&p, &q, &x, &(&x * 3.0)),
            Err(Error::DegeneratePlane { .. })
        ));
        assert_eq!(quaternion_sectional(&p, &q, &DVector::zeros(4), 0), Err(Error::ZeroVector));
        assert!(matches!(
            quaternion_sectional(&p, &q, &x, 3),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            riemann(&p, &q, &x, &x, &x, &e(8, 0)),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(SpaceFormParams::new(1, f64::NAN), Err(Error::NonFiniteCurvature(_))));
        assert!(matches!(SpaceFormParams::new(0, 1.0), Err(Error::InvalidDimension(0))));
    }

    #[test]
    fn antisymmetric_on_equal_slots() {
        let p = SpaceFormParams::new(2, -3.0).unwrap();
        let q = QuaternionStructure::standard(2).unwrap();
        for a in 0..8 {
            for k in 0..8 {
                for l in 0..8 {
                    let r = riemann(&p, &q, &e(8, a), &e(8, a), &e(8, k), &e(8, l)).unwrap();
                    assert_eq!(r, 0.0);
                }
            }
        }
    }

    #[test]
    fn contraction_of_p1_is_einstein_constant() {
        let p = SpaceFormParams::new(1, 4.0).unwrap();
        let q = QuaternionStructure::standard(1).unwrap();
        let f = AdaptedFrame::build(&q, 9).unwrap();
        let m = curvature_term_operator(&p, &q, &f).unwrap();
        assert!((m - DMatrix::<f64>::identity(4, 4) * 12.0).amax() < 1e-12);
    }

    #[test]
    fn symmetries_exact_for_flat() {
        let p = SpaceFormParams::new(1, 0.0).unwrap();
        let q = QuaternionStructure::standard(1).unwrap();
        let report = check_symmetries(&p, &q, 50, 0, 0.0).unwrap();
        assert!(report.passed());
        assert!(check_symmetries(&p, &q, 0, 0, 0.0).is_err());
    }

    #[test]
    fn reduction_requires_n1() {
        let p = SpaceFormParams::new(2, 4.0).unwrap();
        let q = QuaternionStructure::standard(2).unwrap();
        assert!(matches!(constant_curvature_reduction(&p, &q), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn reduction_for_n1() {
        let q = QuaternionStructure::standard(1).unwrap();
        for c in [4.0, 0.0, -4.0] {
            let p = SpaceFormParams::new(1, c).unwrap();
            let report = constant_curvature_reduction(&p, &q).unwrap();
            assert!(report.passed(), "{report:?}");
            if c == 0.0 {
                assert_eq!(report.checks[0].measure.get(), 0.0);
            }
        }
    }
}
