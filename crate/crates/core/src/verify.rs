//! Numerical self-checks of a framelet system.
//!
//! Random test signals come from a ChaCha8 stream seeded explicitly, so the
//! same seed always yields the same report.

use std::fmt;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::embedding::{signal_values_to_function, VertexBlockMap};
use crate::error::Result;
use crate::framelets::{build_matrix_a, FrameletSystem, PwcFunction};
use crate::hierarchy::rational_to_f64;

/// Tolerance for identities that hold up to rounding.
pub const EXACT_TOL: f64 = 1e-12;
/// Relative tolerance for composed operations (Parseval, reconstruction).
pub const RELATIVE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Largest observed error.
    pub worst: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<16} worst {:.3e} (tol {:.0e}) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.worst,
            self.tolerance,
            self.detail
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub signals: usize,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(name: &str, worst: f64, tolerance: f64, detail: String) -> CheckResult {
    CheckResult {
        name: name.into(),
        passed: worst <= tolerance,
        worst,
        tolerance,
        detail,
    }
}

/// Random signals in the system's test space: `span{χ_{B_v}}` when vertex
/// blocks are given, the whole leaf space otherwise.
pub fn random_signals(
    system: &FrameletSystem,
    vbm: Option<&VertexBlockMap>,
    count: usize,
    seed: u64,
) -> Result<Vec<PwcFunction>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = system.partition();
    (0..count)
        .map(|_| match vbm {
            Some(vbm) => {
                let values: Vec<f64> = (0..vbm.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
                signal_values_to_function(&values, vbm, p)
            }
            None => {
                let values: Vec<f64> = (0..p.leaves().len())
                    .map(|_| rng.gen_range(-1.0..1.0))
                    .collect();
                PwcFunction::from_dense(p.clone(), &values)
            }
        })
        .collect()
}

/// `max ‖AᵀA − I‖` over every split of the partition above the cut-off.
pub fn check_matrix_identity(system: &FrameletSystem) -> Result<CheckResult> {
    let p = system.partition();
    let mut worst: f64 = 0.0;
    let mut splits = 0;
    for j in 0..system.depth() {
        for &parent in p.level(j) {
            let b: Vec<f64> = p.child_ratios(parent).iter().map(rational_to_f64).collect();
            let a = build_matrix_a(&b)?;
            let m = b.len();
            let err = (a.transpose() * a - DMatrix::<f64>::identity(m, m))
                .abs()
                .max();
            worst = worst.max(err);
            splits += 1;
        }
    }
    Ok(check(
        "matrix_identity",
        worst,
        EXACT_TOL,
        format!("{splits} splits"),
    ))
}

/// Relative Parseval and reconstruction errors over `signals`.
pub fn check_tightness(
    system: &FrameletSystem,
    signals: &[PwcFunction],
) -> Result<[CheckResult; 2]> {
    let mut parseval: f64 = 0.0;
    let mut recon: f64 = 0.0;
    for f in signals {
        let norm2 = f.norm_squared();
        if norm2 == 0.0 {
            continue;
        }
        let c = system.analyze(f)?;
        parseval = parseval.max((c.energy() - norm2).abs() / norm2);
        let g = system.synthesize(&c)?;
        recon = recon.max(g.distance(f)? / norm2.sqrt());
    }
    let n = signals.len();
    Ok([
        check("parseval", parseval, RELATIVE_TOL, format!("{n} signals")),
        check(
            "reconstruction",
            recon,
            RELATIVE_TOL,
            format!("{n} signals"),
        ),
    ])
}

/// `⟨φ0, ψ⟩ = 0` and `⟨ψ, ψ'⟩ = 0` across different levels.
pub fn check_orthogonality(system: &FrameletSystem) -> Result<CheckResult> {
    let atoms = system.atoms();
    let mut worst: f64 = 0.0;
    let mut pairs = 0usize;
    for (i, a) in atoms.iter().enumerate() {
        worst = worst.max(a.function().inner(system.phi0())?.abs());
        pairs += 1;
        for b in &atoms[i + 1..] {
            if a.level() != b.level() {
                worst = worst.max(a.function().inner(b.function())?.abs());
                pairs += 1;
            }
        }
    }
    Ok(check(
        "orthogonality",
        worst,
        EXACT_TOL,
        format!("{pairs} pairs"),
    ))
}

/// `|∫ψ|` for every atom.
pub fn check_vanishing_moments(system: &FrameletSystem) -> CheckResult {
    let worst = system
        .atoms()
        .iter()
        .map(|a| a.function().integral().abs())
        .fold(0.0, f64::max);
    check(
        "vanishing_moment",
        worst,
        EXACT_TOL,
        format!("{} atoms", system.atoms().len()),
    )
}

/// Runs every suite.
pub fn verify_system(
    system: &FrameletSystem,
    vbm: Option<&VertexBlockMap>,
    signals: usize,
    seed: u64,
) -> Result<VerifyReport> {
    let test_signals = random_signals(system, vbm, signals, seed)?;
    let [parseval, recon] = check_tightness(system, &test_signals)?;
    Ok(VerifyReport {
        seed,
        signals,
        checks: vec![
            check_matrix_identity(system)?,
            parseval,
            recon,
            check_orthogonality(system)?,
            check_vanishing_moments(system),
        ],
    })
}
