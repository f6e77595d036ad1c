//! `P^1(H)(c)` realised as the round 4-sphere of radius `1/sqrt(c)` in
//! `R^5`, with seeded Monte Carlo quadrature.
//!
//! Vector fields are handled analytically: a field is one of three closed
//! form families and its Levi-Civita derivative is the tangential projection
//! of the ambient derivative. Integrals are volume times the sample mean,
//! reduced over fixed-size chunks so the result does not depend on the
//! number of worker threads.

use std::f64::consts::PI;

use nalgebra::{Matrix5, Vector5};
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::curvature::SpaceFormParams;
use crate::error::{Error, Result};
use crate::hessian::{hessian_closed_form, HessianBreakdown};
use crate::seeded;

pub type Point = Vector5<f64>;

const CHUNK: usize = 8192;
const ON_SPHERE_TOL: f64 = 1e-10;
const TANGENT_TOL: f64 = 1e-10;

/// Round 4-sphere of curvature `c > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphereSpec {
    c: f64,
    r: f64,
}

impl SphereSpec {
    pub fn new(c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::NonFiniteCurvature(c));
        }
        if c <= 0.0 {
            return Err(Error::NotApplicable("the sphere model requires c > 0"));
        }
        Ok(SphereSpec { c, r: 1.0 / c.sqrt() })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn radius(&self) -> f64 {
        self.r
    }

    /// `Vol(S^4_r) = (8 pi^2 / 3) r^4`.
    pub fn volume(&self) -> f64 {
        8.0 * PI * PI / 3.0 * self.r.powi(4)
    }

    fn check_point(&self, p: &Point) -> Result<()> {
        let norm = p.norm();
        if !((norm - self.r).abs() <= ON_SPHERE_TOL * self.r) {
            return Err(Error::OffSphere { norm, radius: self.r });
        }
        Ok(())
    }

    /// Tangential projection at `p`.
    pub fn project(&self, p: &Point, v: &Point) -> Point {
        v - p * (v.dot(p) / (self.r * self.r))
    }

    /// Orthonormal tangent frame at `p`: project the ambient basis, drop the
    /// shortest projection, Gram-Schmidt the rest.
    pub fn tangent_frame(&self, p: &Point) -> [Point; 4] {
        let drop = p.iamax();
        let mut frame = [Point::zeros(); 4];
        let mut k = 0;
        for axis in 0..5 {
            if axis == drop {
                continue;
            }
            let mut v = self.project(p, &Point::ith(axis, 1.0));
            for f in &frame[..k] {
                v -= f * f.dot(&v);
            }
            frame[k] = v.normalize();
            k += 1;
        }
        frame
    }
}

/// Variational vector fields on the sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldSpec {
    /// Gradient of `f_a(p) = <a, p>` for a unit vector `a`.
    CoordinateGradient(Vector5<f64>),
    /// `V(p) = A p` for skew `A`; generates rotations.
    Killing(Matrix5<f64>),
    /// Tangential part of an arbitrary constant vector.
    ProjectedConstant(Vector5<f64>),
}

impl FieldSpec {
    pub fn coordinate_gradient(a: Vector5<f64>) -> Result<Self> {
        let f = FieldSpec::CoordinateGradient(a);
        f.validate()?;
        Ok(f)
    }

    pub fn killing(a: Matrix5<f64>) -> Result<Self> {
        let f = FieldSpec::Killing(a);
        f.validate()?;
        Ok(f)
    }

    /// Rotation generator `e_i ^ e_j`, mapping `e_i` to `e_j`.
    pub fn rotation(i: usize, j: usize) -> Result<Self> {
        if i >= 5 || j >= 5 || i == j {
            return Err(Error::InvalidArgument(format!("rotation plane ({i}, {j}) is not valid")));
        }
        let mut a = Matrix5::zeros();
        a[(j, i)] = 1.0;
        a[(i, j)] = -1.0;
        Ok(FieldSpec::Killing(a))
    }

    pub fn projected_constant(a: Vector5<f64>) -> Self {
        FieldSpec::ProjectedConstant(a)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FieldSpec::CoordinateGradient(a) => {
                if !((a.norm() - 1.0).abs() <= 1e-12) {
                    return Err(Error::InvalidArgument(format!(
                        "coordinate-gradient direction must be a unit vector, |a| = {}",
                        a.norm()
                    )));
                }
            }
            FieldSpec::Killing(a) => {
                let skew = (a + a.transpose()).amax();
                if !(skew <= 1e-12) {
                    return Err(Error::InvalidArgument(format!(
                        "Killing generator must be skew, |A + A^T| = {skew:e}"
                    )));
                }
            }
            FieldSpec::ProjectedConstant(a) => {
                if !a.iter().all(|x| x.is_finite()) {
                    return Err(Error::InvalidArgument("non-finite constant vector".into()));
                }
            }
        }
        Ok(())
    }

    fn eval(&self, spec: &SphereSpec, p: &Point) -> Point {
        match self {
            FieldSpec::CoordinateGradient(a) | FieldSpec::ProjectedConstant(a) => spec.project(p, a),
            FieldSpec::Killing(m) => m * p,
        }
    }

    fn derivative(&self, spec: &SphereSpec, p: &Point, x: &Point) -> Point {
        match self {
            FieldSpec::CoordinateGradient(a) | FieldSpec::ProjectedConstant(a) => {
                x * (-a.dot(p) / (spec.r * spec.r))
            }
            FieldSpec::Killing(m) => spec.project(p, &(m * x)),
        }
    }
}

/// `V(p)`; `p` must lie on the sphere.
pub fn evaluate_field(fs: &FieldSpec, spec: &SphereSpec, p: &Point) -> Result<Point> {
    spec.check_point(p)?;
    Ok(fs.eval(spec, p))
}

/// `nabla_X V` at `p` for tangent `X`.
pub fn covariant_derivative(fs: &FieldSpec, spec: &SphereSpec, p: &Point, x: &Point) -> Result<Point> {
    spec.check_point(p)?;
    let dot = x.dot(p);
    if !(dot.abs() <= TANGENT_TOL * spec.r * x.norm().max(f64::MIN_POSITIVE)) {
        return Err(Error::NotTangent { dot });
    }
    Ok(fs.derivative(spec, p, x))
}

/// Equal-weight Monte Carlo rule on the sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereQuadrature {
    spec: SphereSpec,
    points: Vec<Point>,
    seed: u64,
}

impl SphereQuadrature {
    /// `samples` i.i.d. uniform points: normalised 5-d Gaussians scaled to
    /// the radius.
    pub fn sample(spec: SphereSpec, samples: usize, seed: u64) -> Result<Self> {
        if samples == 0 {
            return Err(Error::InvalidArgument("sample count must be at least 1".into()));
        }
        let mut rng = seeded::rng(seed);
        let mut points = Vec::with_capacity(samples);
        while points.len() < samples {
            let g = Point::from_fn(|_, _| StandardNormal.sample(&mut rng));
            let norm = g.norm();
            if norm > 0.0 {
                points.push(g * (spec.r / norm));
            }
        }
        Ok(SphereQuadrature { spec, points, seed })
    }

    pub fn spec(&self) -> &SphereSpec {
        &self.spec
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `Vol / N`.
    pub fn weight(&self) -> f64 {
        self.spec.volume() / self.points.len() as f64
    }

    /// `Vol * mean(f)`, reduced chunk by chunk in a fixed order.
    pub fn integrate<F>(&self, f: F) -> f64
    where
        F: Fn(&Point) -> f64 + Sync,
    {
        let partials: Vec<f64> = self
            .points
            .par_chunks(CHUNK)
            .map(|chunk| chunk.iter().map(&f).sum::<f64>())
            .collect();
        let sum: f64 = partials.iter().sum();
        self.spec.volume() * (sum / self.points.len() as f64)
    }
}

/// `int sum_i |nabla_{e_i} V|^2`.
pub fn dirichlet_energy(fs: &FieldSpec, quad: &SphereQuadrature) -> Result<f64> {
    fs.validate()?;
    let spec = quad.spec;
    Ok(quad.integrate(|p| {
        spec.tangent_frame(p)
            .iter()
            .map(|e| fs.derivative(&spec, p, e).norm_squared())
            .sum()
    }))
}

/// `int |V|^2`.
pub fn l2_norm(fs: &FieldSpec, quad: &SphereQuadrature) -> Result<f64> {
    fs.validate()?;
    let spec = quad.spec;
    Ok(quad.integrate(|p| fs.eval(&spec, p).norm_squared()))
}

/// Second variation of the identity map of `P^1(H)(c)` at `V`:
/// `Dirichlet - 3c L2`.
pub fn hessian_identity_map(fs: &FieldSpec, quad: &SphereQuadrature) -> Result<HessianBreakdown> {
    let params = SpaceFormParams::new(1, quad.spec.c)?;
    hessian_closed_form(&params, dirichlet_energy(fs, quad)?, l2_norm(fs, quad)?)
}

/// Rayleigh quotient `int |grad f_a|^2 / int f_a^2` for `f_a = <a, p>`.
pub fn rayleigh_lambda1(quad: &SphereQuadrature, a: &Vector5<f64>) -> Result<f64> {
    let fs = FieldSpec::coordinate_gradient(*a)?;
    let numerator = l2_norm(&fs, quad)?;
    let denominator = quad.integrate(|p| a.dot(p).powi(2));
    if !(denominator > 0.0) {
        return Err(Error::VanishingDenominator);
    }
    Ok(numerator / denominator)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarmonicityNote {
    pub harmonic: bool,
    pub statement: &'static str,
    pub samples: usize,
    pub max_residual: f64,
}

/// The second fundamental form of the identity map is
/// `nabla_X (1_* Y) - 1_*(nabla_X Y) = 0`, so its trace vanishes. Spot-checked
/// on seeded points with `Y` a projected constant field.
pub fn identity_map_harmonicity_note(spec: &SphereSpec, samples: usize, seed: u64) -> HarmonicityNote {
    let mut rng = seeded::rng(seed);
    let mut gauss = || Point::from_fn(|_, _| StandardNormal.sample(&mut rng));
    let mut max_residual = 0.0f64;
    for _ in 0..samples {
        let g = gauss();
        let p = g * (spec.r / g.norm());
        let x = spec.project(&p, &gauss());
        let y = FieldSpec::projected_constant(gauss());
        let pulled_back = y.derivative(spec, &p, &x);
        let pushed_forward = y.derivative(spec, &p, &x);
        max_residual = max_residual.max((pulled_back - pushed_forward).amax());
    }
    HarmonicityNote {
        harmonic: true,
        statement: "tension field of the identity map vanishes identically",
        samples,
        max_residual,
    }
}

/// Closed-form values on the round 4-sphere of curvature `c`, used as
/// reference columns in reports.
pub mod reference {
    use super::*;

    /// `lambda_1 = m / r^2 = 4c`.
    pub fn lambda1(c: f64) -> f64 {
        4.0 * c
    }

    /// `int f_a^2 = Vol r^2 / 5` for unit `a`.
    pub fn coordinate_square_integral(spec: &SphereSpec) -> f64 {
        spec.volume() * spec.r * spec.r / 5.0
    }

    /// `Hess(grad f_a) = (lambda1^2/4 - 3c lambda1) int f_a^2`.
    pub fn witness_hessian(spec: &SphereSpec) -> f64 {
        let l = lambda1(spec.c);
        (l * l / 4.0 - 3.0 * spec.c * l) * coordinate_square_integral(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec4() -> SphereSpec {
        SphereSpec::new(4.0).unwrap()
    }

    #[test]
    fn radius_from_curvature() {
        for c in [4.0, 1.0, 0.3, 17.0] {
            let s = SphereSpec::new(c).unwrap();
            assert!((s.radius().powi(2) * c - 1.0).abs() < 1e-14);
        }
        assert!(SphereSpec::new(0.0).is_err());
        assert!(SphereSpec::new(-4.0).is_err());
        assert!(SphereSpec::new(f64::INFINITY).is_err());
    }

    #[test]
    fn field_evaluation_examples() {
        let s = spec4();
        let r = s.radius();
        let grad = FieldSpec::coordinate_gradient(Point::x()).unwrap();
        assert_eq!(evaluate_field(&grad, &s, &(Point::x() * r)).unwrap(), Point::zeros());
        assert_eq!(evaluate_field(&grad, &s, &(Point::y() * r)).unwrap(), Point::x());
        let rot = FieldSpec::rotation(0, 1).unwrap();
        assert_eq!(evaluate_field(&rot, &s, &(Point::x() * r)).unwrap(), Point::y() * r);
        assert!(matches!(evaluate_field(&grad, &s, &Point::x()), Err(Error::OffSphere { .. })));
    }

    #[test]
    fn covariant_derivative_examples() {
        let s = spec4();
        let r = s.radius();
        let grad = FieldSpec::coordinate_gradient(Point::x()).unwrap();
        let equator = Point::y() * r;
        let d = covariant_derivative(&grad, &s, &equator, &Point::z()).unwrap();
        assert_eq!(d, Point::zeros());
        let pole = Point::x() * r;
        let d = covariant_derivative(&grad, &s, &pole, &Point::y()).unwrap();
        assert!((d - Point::y() * (-1.0 / r)).amax() < 1e-15);
        assert!(matches!(
            covariant_derivative(&grad, &s, &pole, &Point::x()),
            Err(Error::NotTangent { .. })
        ));
    }

    #[test]
    fn invalid_fields_rejected() {
        assert!(FieldSpec::coordinate_gradient(Point::x() * 2.0).is_err());
        let mut a = Matrix5::zeros();
        a[(0, 1)] = 1.0;
        assert!(FieldSpec::killing(a).is_err());
        assert!(FieldSpec::rotation(2, 2).is_err());
        assert!(SphereQuadrature::sample(spec4(), 0, 0).is_err());
    }

    #[test]
    fn tangent_frame_is_orthonormal_and_tangent() {
        let s = spec4();
        let quad = SphereQuadrature::sample(s, 200, 3).unwrap();
        for p in quad.points() {
            let f = s.tangent_frame(p);
            for (i, a) in f.iter().enumerate() {
                assert!(a.dot(p).abs() < 1e-14);
                for (j, b) in f.iter().enumerate() {
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((a.dot(b) - expected).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn volume_integral_is_exact() {
        let s = spec4();
        let quad = SphereQuadrature::sample(s, 1000, 1).unwrap();
        assert_eq!(quad.integrate(|_| 1.0), PI * PI / 6.0);
        assert!((quad.weight() * 1000.0 / s.volume() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_field_is_zero() {
        let quad = SphereQuadrature::sample(spec4(), 1000, 1).unwrap();
        let zero = FieldSpec::projected_constant(Point::zeros());
        assert_eq!(dirichlet_energy(&zero, &quad).unwrap(), 0.0);
        assert_eq!(l2_norm(&zero, &quad).unwrap(), 0.0);
        assert_eq!(hessian_identity_map(&zero, &quad).unwrap().total, 0.0);
    }

    #[test]
    fn harmonicity_note() {
        let note = identity_map_harmonicity_note(&spec4(), 100, 5);
        assert!(note.harmonic);
        assert!(note.max_residual <= 1e-14);
    }

    #[test]
    fn reference_values() {
        let s = spec4();
        assert!((reference::witness_hessian(&s) + 16.0 * PI * PI / 15.0).abs() < 1e-12);
        assert_eq!(reference::lambda1(4.0), 16.0);
    }
}
