//! Batch sweeps over the identities the library implements.
//!
//! Each suite expands a deterministic parameter grid (random samples are
//! drawn from a seeded generator before any work starts), checks the grid
//! in parallel, and reports in grid order.

use std::fmt;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::basis::{decompose, enumerate_rigid, independence_check, DecomposeOptions, Target};
use crate::character::{char_definitional, char_indec_closed, char_module};
use crate::multiplication::{ar_product, cluster_mult, inductive_mult};
use crate::tube::{ext1_cluster_dim, ext1_dim, hom_dim, DimVector, Indec, TubeModule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Characters,
    Ar,
    ClusterMult,
    Inductive,
    Basis,
    All,
}

impl Suite {
    fn parts(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::Characters,
                Suite::Ar,
                Suite::ClusterMult,
                Suite::Inductive,
                Suite::Basis,
            ],
            s => vec![s],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Characters => "characters",
            Suite::Ar => "ar",
            Suite::ClusterMult => "cluster_mult",
            Suite::Inductive => "inductive",
            Suite::Basis => "basis",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub max_rank: usize,
    /// Overrides each suite's own length bound when set.
    pub max_length: Option<u32>,
    pub seed: u64,
    pub fuel: usize,
    /// Random instances drawn by the sampling checks.
    pub samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            max_rank: 4,
            max_length: None,
            seed: 0,
            fuel: crate::basis::DEFAULT_FUEL,
            samples: 100,
        }
    }
}

impl VerifyConfig {
    fn len_bound(&self, natural: u32) -> u32 {
        self.max_length.unwrap_or(natural)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub checked: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub suites: Vec<SuiteReport>,
}

impl Report {
    pub fn failures(&self) -> usize {
        self.suites.iter().map(|s| s.failures).sum()
    }

    pub fn checked(&self) -> usize {
        self.suites.iter().map(|s| s.checked).sum()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "suites": self.suites.iter().map(|s| json!({
                "suite": s.suite,
                "checked": s.checked,
                "failures": s.failures,
                "first_failure": s.first_failure,
            })).collect::<Vec<_>>(),
            "checked": self.checked(),
            "failures": self.failures(),
        })
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.suites {
            writeln!(
                f,
                "{}: {} checked, {} failures",
                s.suite, s.checked, s.failures
            )?;
            if let Some(d) = &s.first_failure {
                writeln!(f, "  first failure: {d}")?;
            }
        }
        write!(
            f,
            "total: {} checked, {} failures",
            self.checked(),
            self.failures()
        )
    }
}

type Check = Box<dyn Fn() -> std::result::Result<(), String> + Send + Sync>;

fn run(suite: Suite, checks: Vec<Check>) -> SuiteReport {
    let outcomes: Vec<Option<String>> = checks.par_iter().map(|c| c().err()).collect();
    let failures = outcomes.iter().filter(|o| o.is_some()).count();
    SuiteReport {
        suite: suite.name(),
        checked: outcomes.len(),
        failures,
        first_failure: outcomes.into_iter().flatten().next(),
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Report {
    let suites = suite
        .parts()
        .into_iter()
        .map(|s| {
            let checks = match s {
                Suite::Characters => character_checks(cfg),
                Suite::Ar => ar_checks(cfg),
                Suite::ClusterMult => cluster_checks(cfg),
                Suite::Inductive => inductive_checks(cfg),
                Suite::Basis => basis_checks(cfg),
                Suite::All => unreachable!("expanded above"),
            };
            run(s, checks)
        })
        .collect();
    Report { suites }
}

/// A module with between 1 and `max_summands` summands of length at most
/// `max_len`.
pub fn random_module(
    rng: &mut impl Rng,
    rank: usize,
    max_summands: usize,
    max_len: u32,
) -> TubeModule {
    let count = rng.gen_range(1..=max_summands);
    let summands = (0..count)
        .map(|_| {
            let socle = rng.gen_range(1..=rank as i64);
            let len = rng.gen_range(1..=max_len);
            Indec::new(rank, socle, len).expect("length is positive")
        })
        .collect();
    TubeModule::from_indecs(rank, summands)
}

fn indecs(rank: usize, max_len: u32) -> Vec<TubeModule> {
    let mut out = Vec::new();
    for i in 1..=rank as i64 {
        for n in 1..=max_len {
            out.push(TubeModule::indec(rank, i, n).expect("length is positive"));
        }
    }
    out
}

fn character_checks(cfg: &VerifyConfig) -> Vec<Check> {
    let mut checks: Vec<Check> = Vec::new();
    for r in 1..=cfg.max_rank {
        for i in 1..=r as i64 {
            for n in 1..=cfg.len_bound(2 * r as u32 + 1) {
                checks.push(Box::new(move || {
                    let e = Indec::new(r, i, n).map_err(|e| e.to_string())?;
                    let m = TubeModule::from_indecs(r, vec![e]);
                    let closed = char_indec_closed(r, e);
                    let def = char_definitional(&m).map_err(|e| e.to_string())?;
                    if closed != def {
                        return Err(format!(
                            "r={r} {m}: closed form {closed} but definition gives {def}"
                        ));
                    }
                    Ok(())
                }));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.samples {
        let r = rng.gen_range(1..=cfg.max_rank);
        let len = cfg.len_bound(2 * r as u32);
        let a = random_module(&mut rng, r, 3, len);
        let b = random_module(&mut rng, r, 3, len);
        checks.push(Box::new(move || {
            let sum = a.direct_sum(&b).map_err(|e| e.to_string())?;
            let lhs = &char_module(&a) * &char_module(&b);
            let def = char_definitional(&sum).map_err(|e| e.to_string())?;
            if lhs != char_module(&sum) || lhs != def {
                return Err(format!("r={r}: X[{a}] X[{b}] differs from X[{sum}]"));
            }
            Ok(())
        }));
    }
    checks
}

fn ar_checks(cfg: &VerifyConfig) -> Vec<Check> {
    let mut checks: Vec<Check> = Vec::new();
    for r in 1..=cfg.max_rank {
        for m in indecs(r, cfg.len_bound(2 * r as u32)) {
            checks.push(Box::new(move || {
                ar_product(&m)
                    .map(|_| ())
                    .map_err(|e| format!("r={r} {m}: {e}"))
            }));
        }
    }
    checks
}

fn cluster_checks(cfg: &VerifyConfig) -> Vec<Check> {
    let mut checks: Vec<Check> = Vec::new();
    for r in 1..=cfg.max_rank {
        let all = indecs(r, cfg.len_bound(2 * r as u32));
        for m in &all {
            for n in &all {
                let (m, n) = (m.clone(), n.clone());
                checks.push(Box::new(move || {
                    let ext = ext1_dim(&m, &n).map_err(|e| e.to_string())?;
                    let hom = hom_dim(&n, &m.tau()).map_err(|e| e.to_string())?;
                    if ext != hom {
                        return Err(format!(
                            "r={r} M={m} N={n}: Ext^1 = {ext} but Hom(N, tau M) = {hom}"
                        ));
                    }
                    if ext == 1 {
                        cluster_mult(&m, &n).map_err(|e| format!("r={r} M={m} N={n}: {e}"))?;
                    }
                    Ok(())
                }));
            }
        }
    }
    checks
}

fn inductive_checks(cfg: &VerifyConfig) -> Vec<Check> {
    let mut checks: Vec<Check> = Vec::new();
    for r in 2..=cfg.max_rank {
        let rr = r as i64;
        for i in 1..=rr {
            for j in 1..=rr {
                for m in 0..=2 {
                    for l in 0..rr {
                        let len = m * rr + l;
                        if cfg.max_length.is_some_and(|b| len > b as i64) {
                            continue;
                        }
                        for k in 1..=len {
                            checks.push(Box::new(move || {
                                let ctx = format!("r={r} i={i} k={k} j={j} m={m} l={l}");
                                let (_, case) = inductive_mult(r, i, k, j, m, l)
                                    .map_err(|e| format!("{ctx}: {e}"))?;
                                let a = TubeModule::indec(r, i, k as u32).map_err(|e| e.to_string())?;
                                let b = TubeModule::indec(r, j, len as u32).map_err(|e| e.to_string())?;
                                let ext = ext1_cluster_dim(&a, &b).map_err(|e| e.to_string())?;
                                if case.is_split() != (ext == 0) {
                                    return Err(format!(
                                        "{ctx}: case {case} but the symmetric Ext dimension is {ext}"
                                    ));
                                }
                                Ok(())
                            }));
                        }
                    }
                }
            }
        }
    }
    checks
}

fn basis_checks(cfg: &VerifyConfig) -> Vec<Check> {
    let mut checks: Vec<Check> = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let opts = DecomposeOptions {
        fuel: cfg.fuel,
        seed: cfg.seed,
    };
    for _ in 0..cfg.samples {
        let r = rng.gen_range(1..=cfg.max_rank.min(4));
        let len = cfg.len_bound(2 * r as u32 + 1);
        let count = rng.gen_range(1..=3);
        let factors: Vec<TubeModule> = (0..count)
            .map(|_| random_module(&mut rng, r, 1, len))
            .collect();
        checks.push(Box::new(move || {
            let shown: Vec<String> = factors.iter().map(|f| f.to_string()).collect();
            let d = decompose(&Target::Product(factors.clone()), &opts)
                .map_err(|e| format!("r={r} product {}: {e}", shown.join(" * ")))?;
            d.verify()
                .map_err(|e| format!("r={r} product {}: {e}", shown.join(" * ")))
        }));
    }
    for r in 1..=cfg.max_rank.min(4) {
        checks.push(Box::new(move || {
            let bound = DimVector::new(vec![2; r]).map_err(|e| e.to_string())?;
            let family = enumerate_rigid(r, &bound).map_err(|e| e.to_string())?;
            let ind = independence_check(&family).map_err(|e| e.to_string())?;
            if !ind.independent {
                let rel: Vec<BigInt> = ind.relation.unwrap_or_default();
                return Err(format!(
                    "r={r}: rigid characters satisfy the relation {rel:?}"
                ));
            }
            Ok(())
        }));
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweeps_pass() {
        let cfg = VerifyConfig {
            max_rank: 3,
            samples: 10,
            ..VerifyConfig::default()
        };
        let report = run_suite(Suite::All, &cfg);
        assert!(report.passed(), "{report}");
        assert_eq!(report.suites.len(), 5);
        assert!(report.suites.iter().all(|s| s.checked > 0));
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = VerifyConfig {
            max_rank: 2,
            samples: 5,
            seed: 9,
            ..VerifyConfig::default()
        };
        assert_eq!(run_suite(Suite::Basis, &cfg), run_suite(Suite::Basis, &cfg));
    }

    #[test]
    fn length_override_shrinks_the_grid() {
        let full = run_suite(Suite::Ar, &VerifyConfig::default());
        let cut = run_suite(
            Suite::Ar,
            &VerifyConfig {
                max_length: Some(1),
                ..VerifyConfig::default()
            },
        );
        assert_eq!(cut.checked(), 1 + 2 + 3 + 4);
        assert!(full.checked() > cut.checked());
    }

    #[test]
    fn text_report() {
        let report = Report {
            suites: vec![SuiteReport {
                suite: "ar",
                checked: 3,
                failures: 1,
                first_failure: Some("r=1 E(1,1): boom".into()),
            }],
        };
        assert_eq!(
            report.to_string(),
            "ar: 3 checked, 1 failures\n  first failure: r=1 E(1,1): boom\ntotal: 3 checked, 1 failures"
        );
        assert!(!report.passed());
    }
}
