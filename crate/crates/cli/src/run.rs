use quatstab::curvature::{self, SpaceFormParams};
use quatstab::hessian::{self, ChainTolerances};
use quatstab::spectral::{self, ReportOptions};
use quatstab::sphere::{self, FieldSpec, Point, SphereQuadrature, SphereSpec};
use quatstab::{seeded, AdaptedFrame, Check, CheckReport, HessianBreakdown, QuaternionStructure};
use serde::Serialize;

use crate::output::{self, ReportRow};
use crate::{Common, Format, ReportArgs, StabilityArgs};

pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Internal(String),
}

impl From<quatstab::Error> for Failure {
    fn from(e: quatstab::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

type Run = Result<Outcome, Failure>;

const DEFAULT_TOL: f64 = 1e-10;
const DEFAULT_DENSITY_TOL: f64 = 1e-12;
const CONTRACTION_FRAMES: usize = 5;
const REFERENCE_SAMPLES: f64 = 1e6;
const MAX_REPORT_ROWS: usize = 1_000_000;

#[derive(Debug, Serialize)]
struct RunConfig {
    subcommand: &'static str,
    n: usize,
    c: f64,
    trials: usize,
    samples: usize,
    seed: u64,
    format: &'static str,
    tolerance: f64,
    density_tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    mc_tolerance: Option<McTolerances>,
    #[serde(skip_serializing_if = "Option::is_none")]
    attach_numerics: Option<bool>,
}

#[derive(Debug, Clone, Copy, Serialize)]
struct McTolerances {
    lambda1: f64,
    witness: f64,
    killing: f64,
}

impl McTolerances {
    /// Relative tolerances stated at 1e6 samples, widened as 1/sqrt(N)
    /// below that.
    fn for_samples(samples: usize, overridden: Option<f64>) -> Self {
        if let Some(t) = overridden {
            return McTolerances { lambda1: t, witness: t, killing: t };
        }
        let scale = (REFERENCE_SAMPLES / samples as f64).sqrt().max(1.0);
        McTolerances { lambda1: 0.01 * scale, witness: 0.02 * scale, killing: 0.02 * scale }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn positive_tol(name: &str, value: Option<f64>, default: f64) -> Result<f64, Failure> {
    match value {
        None => Ok(default),
        Some(t) if t.is_finite() && t >= 0.0 => Ok(t),
        Some(t) => Err(usage(format!("{name} must be finite and nonnegative, got {t}"))),
    }
}

fn validate_common(cfg: &Common, subcommand: &'static str) -> Result<(SpaceFormParams, RunConfig), Failure> {
    if cfg.n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    if !cfg.c.is_finite() {
        return Err(usage("--c must be finite"));
    }
    if cfg.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    if cfg.samples < 2 {
        return Err(usage("--samples must be at least 2"));
    }
    let tolerance = positive_tol("--tol", cfg.tol, DEFAULT_TOL)?;
    let density_tolerance = positive_tol("--density-tol", cfg.density_tol, DEFAULT_DENSITY_TOL)?;
    if let Some(t) = cfg.mc_tol {
        positive_tol("--mc-tol", Some(t), 0.0)?;
    }
    let params = SpaceFormParams::new(cfg.n, cfg.c).map_err(|e| usage(e.to_string()))?;
    let config = RunConfig {
        subcommand,
        n: cfg.n,
        c: cfg.c,
        trials: cfg.trials,
        samples: cfg.samples,
        seed: cfg.seed,
        format: cfg.format.as_str(),
        tolerance,
        density_tolerance,
        mc_tolerance: None,
        attach_numerics: None,
    };
    Ok((params, config))
}

/// Standard structure in a seeded random orthonormal basis.
fn test_structure(n: usize, seed: u64) -> Result<QuaternionStructure, Failure> {
    let o = seeded::random_orthogonal(4 * n, seeded::derive(seed, 0xA11CE));
    Ok(QuaternionStructure::standard(n)?.conjugated(&o)?)
}

fn curvature_checks(
    params: &SpaceFormParams,
    q: &QuaternionStructure,
    cfg: &Common,
    tol: f64,
) -> Result<CheckReport, Failure> {
    let mut report = q.verify(tol);
    report.extend(AdaptedFrame::build(q, cfg.seed)?.verify(q, tol));
    report.extend(curvature::check_symmetries(params, q, cfg.trials, cfg.seed, tol)?);
    report.extend(curvature::check_quaternion_sectional(params, q, cfg.trials, cfg.seed, tol)?);
    report.extend(curvature::check_contraction(params, q, CONTRACTION_FRAMES, cfg.seed, tol)?);
    if params.n() == 1 {
        report.extend(curvature::constant_curvature_reduction(params, q)?);
    }
    Ok(report)
}

fn finish<V: Serialize, R: Serialize>(
    format: Format,
    config: &RunConfig,
    checks: &CheckReport,
    results: Option<&R>,
    verdict: Option<&V>,
    verdict_line: Option<&str>,
) -> Outcome {
    Outcome {
        text: output::render(format, config, &checks.checks, results, verdict, verdict_line),
        passed: checks.passed(),
    }
}

pub fn curvature(cfg: &Common) -> Run {
    let (params, config) = validate_common(cfg, "curvature")?;
    let q = test_structure(cfg.n, cfg.seed)?;
    let checks = curvature_checks(&params, &q, cfg, config.tolerance)?;
    Ok(finish::<(), ()>(cfg.format, &config, &checks, None, None, None))
}

pub fn identities(cfg: &Common) -> Run {
    let (params, config) = validate_common(cfg, "identities")?;
    let q = test_structure(cfg.n, cfg.seed)?;
    let mut checks = curvature_checks(&params, &q, cfg, config.tolerance)?;
    let tols = ChainTolerances { density: config.density_tolerance, algebraic: config.tolerance };
    checks.extend(hessian::proof_chain_checks(&params, &q, cfg.trials, cfg.seed, tols)?);
    let pointwise = hessian::pointwise_stability_check(&params, cfg.trials, cfg.seed, config.tolerance)?;
    checks.extend(pointwise.checks.clone());
    let verdict = pointwise.verdict.as_str();
    Ok(finish::<_, ()>(cfg.format, &config, &checks, None, Some(&verdict), Some(verdict)))
}

#[derive(Debug, Serialize)]
struct SphereResults {
    radius: f64,
    volume: f64,
    lambda1_estimate: f64,
    lambda1_reference: f64,
    witness: HessianBreakdown,
    witness_reference: f64,
    killing: HessianBreakdown,
    harmonic: bool,
}

fn mc_checks(
    checks: &mut CheckReport,
    tol: &McTolerances,
    lambda1: f64,
    lambda1_ref: f64,
    witness: &HessianBreakdown,
    witness_ref: f64,
) {
    checks.push(Check::against(
        "lambda1 Rayleigh quotient",
        "first eigenvalue 8(n+1) at n = 1",
        lambda1,
        lambda1_ref,
        tol.lambda1 * lambda1_ref.abs(),
    ));
    checks.push(Check::against(
        "witness Hessian at grad <a,p>",
        "instability witness closed form",
        witness.total,
        witness_ref,
        tol.witness * witness_ref.abs(),
    ));
    checks.push(Check::condition(
        "witness Hessian < 0",
        "instability of P^1(H)",
        witness.total,
        0.0,
        witness.total < 0.0,
    ));
}

pub fn sphere(cfg: &Common) -> Run {
    if cfg.c.is_finite() && cfg.c <= 0.0 {
        return Err(usage(format!(
            "the sphere model needs c > 0 (got {}); no desk-scale compact model exists for c <= 0, \
             compact examples there are quotients of quaternion hyperbolic space by cocompact lattices",
            cfg.c
        )));
    }
    let forced = Common { n: 1, ..cfg.clone() };
    let (_, mut config) = validate_common(&forced, "sphere")?;
    let mc = McTolerances::for_samples(cfg.samples, cfg.mc_tol);
    config.mc_tolerance = Some(mc);

    let spec = SphereSpec::new(cfg.c)?;
    let quad = SphereQuadrature::sample(spec, cfg.samples, cfg.seed)?;
    let a = Point::z();
    let lambda1 = sphere::rayleigh_lambda1(&quad, &a)?;
    let witness = sphere::hessian_identity_map(&FieldSpec::coordinate_gradient(a)?, &quad)?;
    let killing = sphere::hessian_identity_map(&FieldSpec::rotation(0, 1)?, &quad)?;
    let note = sphere::identity_map_harmonicity_note(&spec, 100, cfg.seed);
    let lambda1_ref = sphere::reference::lambda1(cfg.c);
    let witness_ref = sphere::reference::witness_hessian(&spec);

    let mut checks = CheckReport::new();
    mc_checks(&mut checks, &mc, lambda1, lambda1_ref, &witness, witness_ref);
    checks.push(Check::condition(
        "Killing field Hessian ~ 0",
        "Killing fields are Jacobi fields",
        killing.total,
        mc.killing * killing.dirichlet,
        killing.total.abs() <= mc.killing * killing.dirichlet,
    ));
    // int <rough Laplacian V, V> = (lambda1 - Ric) l2 for gradient fields
    checks.push(Check::against(
        "(lambda1 - 3c) L2 = Dirichlet",
        "integration by parts for the rough Laplacian",
        (lambda1_ref - 3.0 * cfg.c) * witness.l2,
        witness.dirichlet,
        mc.witness * witness.dirichlet,
    ));
    checks.push(Check::residual(
        "tension field of identity map",
        "identity map is harmonic",
        note.max_residual,
        1e-14,
    ));

    let results = SphereResults {
        radius: spec.radius(),
        volume: spec.volume(),
        lambda1_estimate: lambda1,
        lambda1_reference: lambda1_ref,
        witness,
        witness_reference: witness_ref,
        killing,
        harmonic: note.harmonic,
    };
    let line = format!("lambda1 ~ {lambda1:.4}, witness Hessian ~ {:.4}", witness.total);
    Ok(finish::<(), _>(cfg.format, &config, &checks, Some(&results), None, Some(&line)))
}

pub fn stability(args: &StabilityArgs) -> Run {
    let cfg = &args.common;
    let (_, mut config) = validate_common(cfg, "stability")?;
    config.attach_numerics = Some(args.attach_numerics);
    let opts = ReportOptions {
        identity_trials: cfg.trials,
        seed: cfg.seed,
        attach_numerics: args.attach_numerics,
        samples: cfg.samples,
        tolerance: config.tolerance,
    };
    let report = spectral::full_report(cfg.n, cfg.c, &opts)?;
    let mut checks = CheckReport::new();
    if let Some(ids) = &report.identity_checks {
        checks.extend(ids.checks.clone());
    }
    if let Some(num) = &report.numerics {
        let mc = McTolerances::for_samples(num.samples, cfg.mc_tol);
        config.mc_tolerance = Some(mc);
        mc_checks(&mut checks, &mc, num.lambda1_estimate, num.lambda1_reference, &num.witness, num.witness_reference);
    }
    let line = format!("{} ({})", report.verdict.as_str(), report.criterion_used);
    Ok(finish::<_, ()>(cfg.format, &config, &checks, None, Some(&report), Some(&line)))
}

/// Parses an inclusive `a..b` range.
pub fn parse_range(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || usage(format!("bad --n-range `{s}`: expected a..b with 1 <= a <= b"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    if a == 0 || a > b {
        return Err(bad());
    }
    if b - a >= MAX_REPORT_ROWS {
        return Err(usage(format!("--n-range spans more than {MAX_REPORT_ROWS} rows")));
    }
    Ok((a, b))
}

pub fn report(args: &ReportArgs) -> Run {
    let (lo, hi) = parse_range(&args.n_range)?;
    if !args.c.is_finite() {
        return Err(usage("--c must be finite"));
    }
    let opts = ReportOptions::default();
    let mut rows = Vec::with_capacity(hi - lo + 1);
    for n in lo..=hi {
        let r = spectral::full_report(n, args.c, &opts).map_err(|e| usage(e.to_string()))?;
        rows.push(ReportRow {
            n,
            c: args.c,
            classification: r.classification.as_str(),
            verdict: r.verdict.as_str(),
            lambda1: r.lambda1,
            einstein_constant: r.einstein_constant,
            margin: r.margin,
        });
    }
    Ok(Outcome { text: output::render_rows(args.format, &rows), passed: true })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("1..5").unwrap(), (1, 5));
        assert_eq!(parse_range("3..3").unwrap(), (3, 3));
        assert_eq!(parse_range("2..=4").unwrap(), (2, 4));
        for bad in ["2..1", "0..3", "1-5", "a..b", "..4", ""] {
            assert!(matches!(parse_range(bad), Err(Failure::Usage(_))), "{bad}");
        }
    }

    #[test]
    fn mc_tolerances_scale() {
        let t = McTolerances::for_samples(1_000_000, None);
        assert_eq!((t.lambda1, t.witness), (0.01, 0.02));
        let t = McTolerances::for_samples(100_000, None);
        assert!((t.lambda1 - 0.01 * 10f64.sqrt()).abs() < 1e-15);
        let t = McTolerances::for_samples(4_000_000, None);
        assert_eq!(t.lambda1, 0.01);
        assert_eq!(McTolerances::for_samples(10, Some(0.5)).killing, 0.5);
    }
}
