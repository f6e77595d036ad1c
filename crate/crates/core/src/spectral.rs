//! Eigenvalue criterion for Einstein manifolds and the stability verdicts
//! for quaternion space forms.
//!
//! A closed Einstein manifold with `Ric = C g` has a stable identity map iff
//! `lambda_1 >= 2C`. For `P^n(H)` normalised to `c = 4`, `C = 4(n+2)` and
//! `lambda_1 = 8(n+1)`, so the margin is `-8` for every `n`.

use serde::Serialize;

use crate::check::CheckReport;
use crate::curvature::SpaceFormParams;
use crate::error::{Error, Result};
use crate::hessian::{pointwise_stability_check, HessianBreakdown, PointwiseVerdict};
use crate::quaternion_frame::real_dim;
use crate::sphere::{self, FieldSpec, Point, SphereQuadrature, SphereSpec};

/// Model space by sign of `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    /// `P^n(H)(c)`, `c > 0`.
    Projective,
    /// `H^n`, `c = 0`.
    Euclidean,
    /// `HH^n(c)`, `c < 0`.
    Hyperbolic,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Projective => "projective",
            Classification::Euclidean => "euclidean",
            Classification::Hyperbolic => "hyperbolic",
        }
    }
}

pub fn classify(c: f64) -> Result<Classification> {
    if !c.is_finite() {
        return Err(Error::NonFiniteCurvature(c));
    }
    Ok(if c > 0.0 {
        Classification::Projective
    } else if c == 0.0 {
        Classification::Euclidean
    } else {
        Classification::Hyperbolic
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Literature,
    Numerical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralData {
    pub lambda1: f64,
    pub einstein_constant: f64,
    pub source: Source,
}

impl SpectralData {
    pub fn new(lambda1: f64, einstein_constant: f64, source: Source) -> Result<Self> {
        if !(lambda1 > 0.0) || !lambda1.is_finite() {
            return Err(Error::InvalidArgument(format!("lambda1 must be positive and finite, got {lambda1}")));
        }
        if !einstein_constant.is_finite() {
            return Err(Error::InvalidArgument("Einstein constant must be finite".into()));
        }
        Ok(SpectralData { lambda1, einstein_constant, source })
    }

    /// `lambda_1 - 2C`.
    pub fn margin(&self) -> f64 {
        self.lambda1 - 2.0 * self.einstein_constant
    }
}

/// `(8(n+1), 4(n+2))` for `P^n(H)` at `c = 4`.
pub fn qps_constants(n: usize) -> Result<SpectralData> {
    real_dim(n)?;
    let n = n as f64;
    SpectralData::new(8.0 * (n + 1.0), 4.0 * (n + 2.0), Source::Literature)
}

pub fn qps_margin(n: usize) -> Result<f64> {
    Ok(qps_constants(n)?.margin())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SmithVerdict {
    Stable,
    Unstable,
}

/// Stable iff `lambda_1 >= 2C`; equality counts as stable.
pub fn smith_verdict(sd: &SpectralData) -> SmithVerdict {
    if sd.lambda1 >= 2.0 * sd.einstein_constant {
        SmithVerdict::Stable
    } else {
        SmithVerdict::Unstable
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "stable-index-zero")]
    StableIndexZero,
    #[serde(rename = "stable")]
    Stable,
    #[serde(rename = "unstable")]
    Unstable,
    #[serde(rename = "indeterminate")]
    Indeterminate,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::StableIndexZero => "stable-index-zero",
            Verdict::Stable => "stable",
            Verdict::Unstable => "unstable",
            Verdict::Indeterminate => "indeterminate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentitySummary {
    pub trials: usize,
    pub pointwise_verdict: PointwiseVerdict,
    pub passed: bool,
    pub checks: CheckReport,
}

/// Monte Carlo evidence on the sphere model, attached for `n = 1`, `c > 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphereNumerics {
    pub samples: usize,
    pub seed: u64,
    pub lambda1_estimate: f64,
    pub lambda1_reference: f64,
    pub witness: HessianBreakdown,
    pub witness_reference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub n: usize,
    pub c: f64,
    pub classification: Classification,
    pub verdict: Verdict,
    pub criterion_used: String,
    pub lambda1: Option<f64>,
    pub einstein_constant: f64,
    pub margin: Option<f64>,
    pub spectral_source: Option<Source>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identity_checks: Option<IdentitySummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numerics: Option<SphereNumerics>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportOptions {
    /// Pointwise identity trials; 0 skips them.
    pub identity_trials: usize,
    pub seed: u64,
    pub attach_numerics: bool,
    pub samples: usize,
    pub tolerance: f64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { identity_trials: 0, seed: 0, attach_numerics: false, samples: 1_000_000, tolerance: 1e-10 }
    }
}

pub const NORMALIZATION_NOTE: &str =
    "projective spectral constants are normalised to c = 4 (lambda1 = 8(n+1), C = 4(n+2)) and rescaled by c/4";
pub const LITERATURE_NOTE: &str = "lambda1 = 8(n+1) is a literature value; numerically confirmed only for n = 1";
pub const QUOTIENT_NOTE: &str =
    "compact examples with c < 0 are quotients of quaternion hyperbolic space by cocompact torsion-free lattices";

/// Verdict for `M^n(c)`: index zero for `c < 0`, Dirichlet-only Hessian for
/// `c = 0`, eigenvalue criterion for `c > 0`.
pub fn full_report(n: usize, c: f64, opts: &ReportOptions) -> Result<StabilityReport> {
    let params = SpaceFormParams::new(n, c)?;
    let classification = classify(c)?;
    let einstein_constant = params.ricci_constant();
    let mut notes = Vec::new();

    let (verdict, criterion_used, lambda1, margin, mut spectral_source) = match classification {
        Classification::Hyperbolic => {
            notes.push(QUOTIENT_NOTE.to_string());
            (
                Verdict::StableIndexZero,
                "Hess = Dirichlet - (n+2)c L2 >= 0 for c < 0".to_string(),
                None,
                None,
                None,
            )
        }
        Classification::Euclidean => (
            Verdict::Stable,
            "Dirichlet-only Hessian (curvature term vanishes at c = 0)".to_string(),
            None,
            None,
            None,
        ),
        Classification::Projective => {
            let base = qps_constants(n)?;
            let scale = c / 4.0;
            let sd = SpectralData::new(base.lambda1 * scale, base.einstein_constant * scale, Source::Literature)?;
            notes.push(NORMALIZATION_NOTE.to_string());
            notes.push(LITERATURE_NOTE.to_string());
            let verdict = match smith_verdict(&sd) {
                SmithVerdict::Stable => Verdict::Stable,
                SmithVerdict::Unstable => Verdict::Unstable,
            };
            (
                verdict,
                "Einstein eigenvalue criterion lambda1 >= 2C".to_string(),
                Some(sd.lambda1),
                Some(sd.margin()),
                Some(sd.source),
            )
        }
    };

    let identity_checks = if opts.identity_trials > 0 {
        let pw = pointwise_stability_check(&params, opts.identity_trials, opts.seed, opts.tolerance)?;
        Some(IdentitySummary {
            trials: opts.identity_trials,
            pointwise_verdict: pw.verdict,
            passed: pw.checks.passed(),
            checks: pw.checks,
        })
    } else {
        None
    };

    let numerics = if opts.attach_numerics && n == 1 && c > 0.0 {
        let spec = SphereSpec::new(c)?;
        let quad = SphereQuadrature::sample(spec, opts.samples, opts.seed)?;
        let a = Point::ith(2, 1.0);
        let lambda1_estimate = sphere::rayleigh_lambda1(&quad, &a)?;
        let witness = sphere::hessian_identity_map(&FieldSpec::coordinate_gradient(a)?, &quad)?;
        spectral_source = Some(Source::Numerical);
        Some(SphereNumerics {
            samples: opts.samples,
            seed: opts.seed,
            lambda1_estimate,
            lambda1_reference: sphere::reference::lambda1(c),
            witness,
            witness_reference: sphere::reference::witness_hessian(&spec),
        })
    } else {
        None
    };

    Ok(StabilityReport {
        n,
        c,
        classification,
        verdict,
        criterion_used,
        lambda1,
        einstein_constant,
        margin,
        spectral_source,
        notes,
        identity_checks,
        numerics,
    })
}
