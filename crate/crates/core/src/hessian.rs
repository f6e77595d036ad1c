//! Pointwise algebra behind the second variation of the identity map.
//!
//! Summing `g(R(f, V) f, V)` over an adapted frame splits into the
//! per-vector densities [`cri1_density`] (for `f = E_i`) and
//! [`cri2_density`] (for `f = J_a E_i`). Two Parseval-type identities,
//! [`co1_identity`] and [`co2_identity`], collapse the sum to
//! `-(n+2) c |V|^2`, so that
//!
//! ```text
//! Hess(V, V) = int |nabla V|^2 - (n+2) c int |V|^2.
//! ```
//!
//! All sums run over `alpha, beta in {1,2,3}` and `i in {1..n}`.

use nalgebra::DVector;
use serde::Serialize;

use crate::check::{max_abs, Check, CheckReport};
use crate::curvature::{riemann_unchecked, SpaceFormParams};
use crate::error::{Error, Result};
use crate::quaternion_frame::{AdaptedFrame, QuaternionStructure};
use crate::seeded;

fn check_index(i: usize, n: usize) -> Result<()> {
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, max: n - 1 });
    }
    Ok(())
}

fn check_alpha(alpha: usize) -> Result<()> {
    if alpha >= 3 {
        return Err(Error::IndexOutOfRange { index: alpha, max: 2 });
    }
    Ok(())
}

fn check_vector(v: &DVector<f64>, frame: &AdaptedFrame) -> Result<()> {
    let dim = 4 * frame.n();
    if v.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, actual: v.len() });
    }
    Ok(())
}

/// `-(c/4) { |V|^2 - <V,E_i>^2 + 3 sum_b <V, J_b E_i>^2 }`, which equals
/// `g(R(E_i, V) E_i, V)`.
pub fn cri1_density(
    params: &SpaceFormParams,
    frame: &AdaptedFrame,
    v: &DVector<f64>,
    i: usize,
) -> Result<f64> {
    check_index(i, frame.n())?;
    check_vector(v, frame)?;
    let ei = frame.e(i);
    let quaternionic: f64 = (0..3).map(|b| v.dot(frame.je(b, i)).powi(2)).sum();
    Ok(-(params.c() / 4.0) * (v.norm_squared() - v.dot(ei).powi(2) + 3.0 * quaternionic))
}

/// `-(c/4) { |V|^2 - <V,J_a E_i>^2 + 3 sum_b <V, J_b J_a E_i>^2 }`, which
/// equals `g(R(J_a E_i, V) J_a E_i, V)`.
pub fn cri2_density(
    params: &SpaceFormParams,
    q: &QuaternionStructure,
    frame: &AdaptedFrame,
    v: &DVector<f64>,
    i: usize,
    alpha: usize,
) -> Result<f64> {
    check_index(i, frame.n())?;
    check_alpha(alpha)?;
    check_vector(v, frame)?;
    let f = frame.je(alpha, i);
    let quaternionic: f64 = (0..3).map(|b| v.dot(&(q.j(b) * f)).powi(2)).sum();
    Ok(-(params.c() / 4.0) * (v.norm_squared() - v.dot(f).powi(2) + 3.0 * quaternionic))
}

/// `(sum_f <V,f>^2, |V|^2)` over the whole frame.
pub fn co1_identity(frame: &AdaptedFrame, v: &DVector<f64>) -> (f64, f64) {
    let lhs = frame.vectors().iter().map(|f| v.dot(f).powi(2)).sum();
    (lhs, v.norm_squared())
}

/// `(sum_i [ sum_b <V,J_b E_i>^2 + sum_a sum_b <V,J_b J_a E_i>^2 ], 3|V|^2)`.
pub fn co2_identity(q: &QuaternionStructure, frame: &AdaptedFrame, v: &DVector<f64>) -> (f64, f64) {
    let mut lhs = 0.0;
    for i in 0..frame.n() {
        for b in 0..3 {
            let jb = q.j(b);
            lhs += v.dot(&(jb * frame.e(i))).powi(2);
            for a in 0..3 {
                lhs += v.dot(&(jb * frame.je(a, i))).powi(2);
            }
        }
    }
    (lhs, 3.0 * v.norm_squared())
}

/// Sum of all `cri1` and `cri2` densities: the pointwise curvature
/// contribution to the Hessian, `-(n+2) c |V|^2`.
pub fn total_curvature_density(
    params: &SpaceFormParams,
    q: &QuaternionStructure,
    frame: &AdaptedFrame,
    v: &DVector<f64>,
) -> Result<f64> {
    check_vector(v, frame)?;
    let mut total = 0.0;
    for i in 0..frame.n() {
        total += cri1_density(params, frame, v, i)?;
        for a in 0..3 {
            total += cri2_density(params, q, frame, v, i, a)?;
        }
    }
    Ok(total)
}

/// `Hess(V,V) = dirichlet + curvature_coefficient * l2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HessianBreakdown {
    pub dirichlet: f64,
    pub curvature_coefficient: f64,
    pub l2: f64,
    pub total: f64,
}

pub fn hessian_closed_form(params: &SpaceFormParams, dirichlet: f64, l2: f64) -> Result<HessianBreakdown> {
    if !(dirichlet >= 0.0) {
        return Err(Error::NegativeInput { name: "dirichlet", value: dirichlet });
    }
    if !(l2 >= 0.0) {
        return Err(Error::NegativeInput { name: "l2", value: l2 });
    }
    let curvature_coefficient = -params.ricci_constant();
    Ok(HessianBreakdown {
        dirichlet,
        curvature_coefficient,
        l2,
        total: dirichlet + curvature_coefficient * l2,
    })
}

/// Tolerances for [`proof_chain_checks`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainTolerances {
    /// Density formulas against direct tensor evaluation, relative to
    /// `(1+|c|) |V|^2`.
    pub density: f64,
    /// Parseval identities and collapsed sums.
    pub algebraic: f64,
}

impl Default for ChainTolerances {
    fn default() -> Self {
        ChainTolerances { density: 1e-12, algebraic: 1e-10 }
    }
}

/// Runs every pointwise identity over seeded random `(V, frame)` pairs and
/// reports normalised max residuals.
pub fn proof_chain_checks(
    params: &SpaceFormParams,
    q: &QuaternionStructure,
    trials: usize,
    seed: u64,
    tol: ChainTolerances,
) -> Result<CheckReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let n = params.n();
    let c = params.c();
    let scale = 1.0 + c.abs();
    let (mut cri1, mut cri2, mut co1, mut co2) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let (mut total, mut operator, mut frame_indep) = (0.0f64, 0.0f64, 0.0f64);

    for t in 0..trials as u64 {
        let frame = AdaptedFrame::build(q, seeded::derive(seed, 2 * t))?;
        let other = AdaptedFrame::build(q, seeded::derive(seed, 2 * t + 1))?;
        let mut rng = seeded::rng(seeded::derive(seed ^ 0x5EED, t));
        let v = seeded::gaussian_vector(&mut rng, params.dim());
        let vv = v.norm_squared();

        for i in 0..n {
            let ei = frame.e(i);
            let direct = riemann_unchecked(c, q, ei, &v, ei, &v);
            cri1 = max_abs(cri1, (cri1_density(params, &frame, &v, i)? - direct) / (scale * vv));
            for a in 0..3 {
                let f = frame.je(a, i);
                let direct = riemann_unchecked(c, q, f, &v, f, &v);
                cri2 = max_abs(cri2, (cri2_density(params, q, &frame, &v, i, a)? - direct) / (scale * vv));
            }
        }
        let (l, r) = co1_identity(&frame, &v);
        co1 = max_abs(co1, (l - r) / vv);
        let (l, r) = co2_identity(q, &frame, &v);
        co2 = max_abs(co2, (l - r) / vv);

        let density = total_curvature_density(params, q, &frame, &v)?;
        total = max_abs(total, (density + params.ricci_constant() * vv) / (scale * vv));
        // direct frame summation of R(V, f) f, paired with V
        let ricci: f64 = frame.vectors().iter().map(|f| riemann_unchecked(c, q, &v, f, f, &v)).sum();
        operator = max_abs(operator, (density + ricci) / (scale * vv));
        let density_other = total_curvature_density(params, q, &other, &v)?;
        frame_indep = max_abs(frame_indep, (density - density_other) / (scale * vv));
    }

    let mut report = CheckReport::new();
    report.push(Check::residual("cri1 density = R(E_i,V,E_i,V)", "density for E_i", cri1, tol.density));
    report.push(Check::residual("cri2 density = R(J_a E_i,V,J_a E_i,V)", "density for J_a E_i", cri2, tol.density));
    report.push(Check::residual("co1: sum <V,f>^2 = |V|^2", "Parseval over adapted frame", co1, tol.algebraic));
    report.push(Check::residual("co2: J-component sum = 3|V|^2", "Parseval over J-rotated frames", co2, tol.algebraic));
    report.push(Check::residual(
        "total density = -(n+2)c|V|^2",
        "collapsed curvature term",
        total,
        tol.algebraic,
    ));
    report.push(Check::residual(
        "total density = -<Ric V, V>",
        "frame contraction of curvature",
        operator,
        tol.algebraic,
    ));
    report.push(Check::residual("total density frame independence", "collapsed curvature term", frame_indep, tol.algebraic));
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PointwiseVerdict {
    /// `c < 0`: curvature term nonnegative, so `Hess >= 0` and the index is zero.
    #[serde(rename = "index-zero")]
    IndexZero,
    /// `c = 0`: the Hessian is the Dirichlet term alone.
    #[serde(rename = "hessian-equals-dirichlet")]
    DirichletOnly,
    /// `c > 0`: negative coefficient; the sign of the Hessian depends on the
    /// spectrum and is left to the eigenvalue criterion.
    #[serde(rename = "deferred-to-spectral-criterion")]
    DeferredToSpectral,
}

impl PointwiseVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            PointwiseVerdict::IndexZero => "index-zero",
            PointwiseVerdict::DirichletOnly => "hessian-equals-dirichlet",
            PointwiseVerdict::DeferredToSpectral => "deferred-to-spectral-criterion",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointwiseStability {
    pub verdict: PointwiseVerdict,
    pub curvature_coefficient: f64,
    pub min_contribution: f64,
    pub max_contribution: f64,
    pub checks: CheckReport,
}

/// Evaluates the curvature contribution `sum cri = -(n+2) c |V|^2` on seeded
/// random vectors and random frames of a randomly rotated structure.
pub fn pointwise_stability_check(
    params: &SpaceFormParams,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<PointwiseStability> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let o = seeded::random_orthogonal(params.dim(), seeded::derive(seed, u64::MAX));
    let q = QuaternionStructure::standard(params.n())?.conjugated(&o)?;
    let scale = 1.0 + params.c().abs();
    let mut residual = 0.0f64;
    let mut min_contribution = f64::INFINITY;
    let mut max_contribution = f64::NEG_INFINITY;
    for t in 0..trials as u64 {
        let frame = AdaptedFrame::build(&q, seeded::derive(seed, t))?;
        let mut rng = seeded::rng(seeded::derive(seed ^ 0xC0FFEE, t));
        let v = seeded::gaussian_vector(&mut rng, params.dim());
        let vv = v.norm_squared();
        let contribution = total_curvature_density(params, &q, &frame, &v)?;
        residual = max_abs(residual, (contribution + params.ricci_constant() * vv) / (scale * vv));
        min_contribution = min_contribution.min(contribution);
        max_contribution = max_contribution.max(contribution);
    }

    let c = params.c();
    let coefficient = -params.ricci_constant();
    let mut checks = CheckReport::new();
    checks.push(Check::residual(
        "curvature contribution = -(n+2)c|V|^2",
        "collapsed curvature term",
        residual,
        tol,
    ));
    let verdict = if c < 0.0 {
        checks.push(Check::condition(
            "curvature contribution >= 0",
            "index zero for c < 0",
            min_contribution,
            0.0,
            min_contribution >= 0.0,
        ));
        PointwiseVerdict::IndexZero
    } else if c == 0.0 {
        checks.push(Check::condition(
            "curvature contribution = 0",
            "flat case",
            max_contribution.abs().max(min_contribution.abs()),
            0.0,
            min_contribution == 0.0 && max_contribution == 0.0,
        ));
        PointwiseVerdict::DirichletOnly
    } else {
        checks.push(Check::condition(
            "curvature coefficient < 0",
            "negative curvature coefficient for c > 0",
            coefficient,
            0.0,
            coefficient < 0.0,
        ));
        PointwiseVerdict::DeferredToSpectral
    };
    Ok(PointwiseStability {
        verdict,
        curvature_coefficient: coefficient,
        min_contribution,
        max_contribution,
        checks,
    })
}
