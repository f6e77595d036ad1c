//! Acceptance gate: one line per criterion, non-zero exit on any failure.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use nalgebra::Matrix5;
use quatstab::curvature::{self, SpaceFormParams};
use quatstab::hessian::{self, ChainTolerances, PointwiseVerdict};
use quatstab::spectral::{self, ReportOptions, SmithVerdict, Source, SpectralData, Verdict};
use quatstab::sphere::{self, FieldSpec, Point, SphereQuadrature, SphereSpec};
use quatstab::{seeded, QuaternionStructure};

const NS: [usize; 3] = [1, 2, 3];
const CS: [f64; 5] = [-4.0, -1.0, 0.0, 1.0, 4.0];
const MC_SAMPLES: usize = 1_000_000;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn rotated(n: usize, seed: u64) -> QuaternionStructure {
    let o = seeded::random_orthogonal(4 * n, seed);
    QuaternionStructure::standard(n).unwrap().conjugated(&o).unwrap()
}

fn within_time(start: Instant, limit: Duration, pass: bool, detail: String) -> Outcome {
    let elapsed = start.elapsed();
    Outcome {
        pass: pass && elapsed < limit,
        detail: format!("{detail}; {:.2}s (limit {}s)", elapsed.as_secs_f64(), limit.as_secs()),
    }
}

fn ac1_contraction_constant() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut pass = true;
    for n in NS {
        for c in CS {
            let p = SpaceFormParams::new(n, c).unwrap();
            let q = rotated(n, 100 + n as u64);
            let report = curvature::check_contraction(&p, &q, 5, 1, 1e-10).unwrap();
            pass &= report.passed();
            worst = worst.max(report.checks[0].measure.get());
        }
    }
    within_time(start, Duration::from_secs(5), pass, format!("max |M-(n+2)cI|/((1+|c|)n) = {worst:.2e} <= 1e-10"))
}

fn ac2_quaternion_sectional() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut pass = true;
    for n in NS {
        for c in CS {
            let p = SpaceFormParams::new(n, c).unwrap();
            let q = rotated(n, 200 + n as u64);
            let report = curvature::check_quaternion_sectional(&p, &q, 1000, 2, 1e-10).unwrap();
            pass &= report.passed();
            worst = worst.max(report.checks[0].measure.get());
        }
    }
    within_time(start, Duration::from_secs(5), pass, format!("max |K - c|/(1+|c|) = {worst:.2e} <= 1e-10"))
}

fn ac3_proof_chain() -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut worst_density = 0.0f64;
    let mut worst_co = 0.0f64;
    for n in NS {
        for c in CS {
            let p = SpaceFormParams::new(n, c).unwrap();
            let q = rotated(n, 300 + n as u64);
            let r = hessian::proof_chain_checks(&p, &q, 1000, 3, ChainTolerances { density: 1e-12, algebraic: 1e-10 })
                .unwrap();
            pass &= r.passed();
            worst_density = worst_density
                .max(r.value("cri1 density = R(E_i,V,E_i,V)"))
                .max(r.value("cri2 density = R(J_a E_i,V,J_a E_i,V)"));
            worst_co = worst_co
                .max(r.value("co1: sum <V,f>^2 = |V|^2"))
                .max(r.value("co2: J-component sum = 3|V|^2"));
        }
    }
    within_time(
        start,
        Duration::from_secs(10),
        pass,
        format!("cri residual {worst_density:.2e} <= 1e-12, co residual {worst_co:.2e} <= 1e-10"),
    )
}

fn ac4_tensor_sanity() -> Outcome {
    let mut pass = true;
    let mut worst_sym = 0.0f64;
    for n in NS {
        for c in CS {
            let p = SpaceFormParams::new(n, c).unwrap();
            let q = rotated(n, 400 + n as u64);
            let r = curvature::check_symmetries(&p, &q, 1000, 4, 1e-10).unwrap();
            pass &= r.passed();
            worst_sym = r.checks.iter().map(|c| c.measure.get()).fold(worst_sym, f64::max);
        }
    }
    let mut worst_red = 0.0f64;
    for c in CS {
        let p = SpaceFormParams::new(1, c).unwrap();
        for q in [QuaternionStructure::standard(1).unwrap(), rotated(1, 44)] {
            let r = curvature::constant_curvature_reduction(&p, &q).unwrap();
            pass &= r.passed();
            worst_red = worst_red.max(r.checks[0].measure.get() / (1.0 + c.abs()));
        }
    }
    Outcome {
        pass,
        detail: format!("symmetries {worst_sym:.2e} <= 1e-10; n=1 reduction {worst_red:.2e} <= 1e-12 (1+|c|)"),
    }
}

fn ac5_remark_constants() -> Outcome {
    let mut pass = true;
    for n in 1..=1000usize {
        let sd = spectral::qps_constants(n).unwrap();
        let nf = n as f64;
        pass &= sd.lambda1 == 8.0 * (nf + 1.0) && sd.einstein_constant == 4.0 * (nf + 2.0);
        pass &= spectral::qps_margin(n).unwrap() == -8.0;
        pass &= spectral::smith_verdict(&sd) == SmithVerdict::Unstable;
    }
    let boundary = SpectralData::new(24.0, 12.0, Source::Literature).unwrap();
    pass &= spectral::smith_verdict(&boundary) == SmithVerdict::Stable;
    Outcome { pass, detail: "n = 1..1000: (8(n+1), 4(n+2)), margin -8, unstable; lambda1 = 2C stable".into() }
}

fn ac6_spectral_confirmation() -> Outcome {
    let spec = SphereSpec::new(4.0).unwrap();
    let mut pass = true;
    let mut estimates = Vec::new();
    for seed in 1..=5 {
        let start = Instant::now();
        let quad = SphereQuadrature::sample(spec, MC_SAMPLES, seed).unwrap();
        let l = sphere::rayleigh_lambda1(&quad, &Point::z()).unwrap();
        pass &= (l - 16.0).abs() <= 0.01 * 16.0 && start.elapsed() < Duration::from_secs(30);
        estimates.push(format!("{l:.4}"));
    }
    Outcome { pass, detail: format!("lambda1 estimates [{}] vs 16 +- 1%", estimates.join(", ")) }
}

fn ac7_instability_witness() -> Outcome {
    let oracle = -16.0 * PI * PI / 15.0;
    let spec = SphereSpec::new(4.0).unwrap();
    let fs = FieldSpec::coordinate_gradient(Point::x()).unwrap();
    let quad = SphereQuadrature::sample(spec, MC_SAMPLES, 1).unwrap();
    let h = sphere::hessian_identity_map(&fs, &quad).unwrap();
    let mut pass = (h.total - oracle).abs() <= 0.02 * oracle.abs();
    let mut worst = f64::NEG_INFINITY;
    for seed in 0..10 {
        let quad = SphereQuadrature::sample(spec, 100_000, 1000 + seed).unwrap();
        let t = sphere::hessian_identity_map(&fs, &quad).unwrap().total;
        worst = worst.max(t);
        pass &= t < 0.0;
    }
    Outcome {
        pass,
        detail: format!("Hess = {:.4} vs {oracle:.4} +- 2%; max over 10 seeds at 1e5 = {worst:.4} < 0", h.total),
    }
}

fn ac8_killing_null() -> Outcome {
    let spec = SphereSpec::new(4.0).unwrap();
    let quad = SphereQuadrature::sample(spec, MC_SAMPLES, 8).unwrap();
    let m = Matrix5::from_fn(|i, j| ((3 * i + j) as f64).sin());
    let fields = [FieldSpec::rotation(0, 1).unwrap(), FieldSpec::killing(m - m.transpose()).unwrap()];
    let mut pass = true;
    let mut ratios = Vec::new();
    for fs in &fields {
        let h = sphere::hessian_identity_map(fs, &quad).unwrap();
        let ratio = h.total.abs() / h.dirichlet;
        pass &= ratio <= 0.02;
        ratios.push(format!("{ratio:.2e}"));
    }
    Outcome { pass, detail: format!("|total|/dirichlet = [{}] <= 0.02", ratios.join(", ")) }
}

fn ac9_index_zero() -> Outcome {
    let mut pass = true;
    let mut min_contribution = f64::INFINITY;
    for n in NS {
        for c in [-4.0, -1.0] {
            let p = SpaceFormParams::new(n, c).unwrap();
            let pw = hessian::pointwise_stability_check(&p, 1000, 9, 1e-10).unwrap();
            pass &= pw.verdict == PointwiseVerdict::IndexZero && pw.checks.passed();
            min_contribution = min_contribution.min(pw.min_contribution);
            for d in [0.0, 1e-300, 0.5, 1.0, 1e3, 1e12] {
                for l2 in [0.0, 1e-300, 0.5, 1.0, 1e3, 1e12] {
                    pass &= hessian::hessian_closed_form(&p, d, l2).unwrap().total >= 0.0;
                }
            }
            let report = spectral::full_report(n, c, &ReportOptions::default()).unwrap();
            pass &= report.verdict == Verdict::StableIndexZero;
        }
    }
    Outcome { pass, detail: format!("min curvature contribution {min_contribution:.3} >= 0; verdict stable-index-zero") }
}

fn run_cli(args: &[&str], threads: &str) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_quatstab"))
        .args(args)
        .env("RAYON_NUM_THREADS", threads)
        .output()
        .expect("run quatstab");
    (out.status.code(), out.stdout)
}

fn ac10_determinism() -> Outcome {
    let runs: [&[&str]; 5] = [
        &["identities", "--n", "2", "--c", "-3", "--trials", "200", "--seed", "7"],
        &["curvature", "--n", "1", "--c", "4", "--trials", "200", "--seed", "3"],
        &["sphere", "--c", "4", "--samples", "200000", "--seed", "1"],
        &["stability", "--n", "1", "--c", "4", "--trials", "100", "--samples", "200000", "--attach-numerics"],
        &["report", "--n-range", "1..20", "--c", "4"],
    ];
    let mut pass = true;
    for args in runs {
        let (code_a, a) = run_cli(args, "1");
        let (code_b, b) = run_cli(args, "4");
        let (_, c) = run_cli(args, "1");
        pass &= code_a == Some(0) && code_a == code_b && a == b && a == c && !a.is_empty();
    }
    Outcome { pass, detail: "5 subcommands: byte-identical JSON across reruns and 1 vs 4 threads".into() }
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("AC1 curvature contraction constant (n+2)c", ac1_contraction_constant),
        ("AC2 quaternion sectional curvature = c", ac2_quaternion_sectional),
        ("AC3 proof-chain identities cri1/cri2/co1/co2", ac3_proof_chain),
        ("AC4 tensor symmetries and n=1 reduction", ac4_tensor_sanity),
        ("AC5 projective-space spectral constants", ac5_remark_constants),
        ("AC6 lambda1 = 16 on S^4(c=4)", ac6_spectral_confirmation),
        ("AC7 instability witness -16pi^2/15", ac7_instability_witness),
        ("AC8 Killing fields are Hessian-null", ac8_killing_null),
        ("AC9 index zero for c < 0", ac9_index_zero),
        ("AC10 CLI determinism", ac10_determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let outcome = run();
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {name}: {}", outcome.detail);
        if !outcome.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
