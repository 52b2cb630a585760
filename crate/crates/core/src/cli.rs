//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 for parse and
//! validation errors. Results go to stdout, diagnostics to stderr.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::basis::{decompose, independence_check, DecomposeOptions, Target, DEFAULT_FUEL};
use crate::character::char_module;
use crate::error::{Error, Result};
use crate::laurent::{bigint_to_json, LaurentPoly};
use crate::multiplication::{multiply_indecs, ProductExpansion};
use crate::tube::{
    ext1_cluster_dim, ext1_dim, hom_dim, inject_euler_sign_fault, is_rigid, TubeModule,
};
use crate::verify::{run_suite, Suite, VerifyConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fault {
    EulerSign,
}

#[derive(Debug, Parser)]
#[command(
    name = "tubecc",
    version,
    about = "Cluster characters of modules in a tube"
)]
pub struct CliConfig {
    /// Number of vertices of the cyclic quiver.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub rank: Option<u32>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, global = true, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_rank: u32,

    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_length: Option<u32>,

    #[arg(long, global = true, default_value_t = DEFAULT_FUEL as u64, value_parser = clap::value_parser!(u64).range(1..))]
    pub fuel: u64,

    #[arg(long, global = true, value_enum, hide = true)]
    pub fault: Option<Fault>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the character of a module.
    Char { expr: String },
    /// Expand the product of two characters.
    Mult { a: String, b: String },
    /// Write a product of characters, or a polynomial, in the rigid basis.
    Decompose {
        /// Factors of the product.
        #[arg(required_unless_present = "poly")]
        exprs: Vec<String>,
        /// A Laurent polynomial in JSON form instead of modules.
        #[arg(long, conflicts_with = "exprs")]
        poly: Option<String>,
    },
    /// dim Hom(A, B).
    Hom { a: String, b: String },
    /// dim Ext^1(A, B).
    Ext {
        a: String,
        b: String,
        /// Report dim Ext^1(A, B) + dim Ext^1(B, A) instead.
        #[arg(long)]
        symmetric: bool,
    },
    /// Whether Ext^1(M, M) vanishes.
    Rigid { expr: String },
    /// Exact linear independence of the characters of the given modules.
    Independence {
        #[arg(required = true)]
        exprs: Vec<String>,
    },
    /// Run the verification sweeps.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Random instances per sampling check.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

struct Output {
    text: String,
    json: Value,
    code: i32,
}

impl Output {
    fn ok(text: impl Into<String>, json: Value) -> Self {
        Output {
            text: text.into(),
            json,
            code: 0,
        }
    }
}

impl CliConfig {
    fn rank(&self) -> Result<usize> {
        self.rank
            .map(|r| r as usize)
            .ok_or_else(|| Error::invalid("this command needs --rank"))
    }

    fn module(&self, expr: &str) -> Result<TubeModule> {
        TubeModule::parse(self.rank()?, expr)
    }
}

fn render_expansion(e: &ProductExpansion) -> Output {
    Output::ok(format!("{e}\nverified: {}", e.verified), e.to_json_value())
}

fn execute(cfg: &CliConfig) -> Result<Output> {
    match &cfg.command {
        Command::Char { expr } => {
            let p = char_module(&cfg.module(expr)?);
            Ok(Output::ok(p.to_text(), p.to_json_value()))
        }
        Command::Mult { a, b } => {
            let (m, n) = (cfg.module(a)?, cfg.module(b)?);
            let e = match (m.as_indec(), n.as_indec()) {
                (Some(x), Some(y)) => multiply_indecs(cfg.rank()?, x, y)?.0,
                _ => ProductExpansion::certify(
                    m.clone(),
                    n.clone(),
                    vec![(1.into(), m.direct_sum(&n)?)],
                )?,
            };
            Ok(render_expansion(&e))
        }
        Command::Decompose { exprs, poly } => {
            let target = match poly {
                Some(p) => {
                    let p = LaurentPoly::from_json(p)?;
                    if cfg.rank.is_some_and(|r| r as usize != p.rank()) {
                        return Err(Error::RankMismatch {
                            expected: cfg.rank()?,
                            found: p.rank(),
                        });
                    }
                    Target::Poly(p)
                }
                None => {
                    Target::Product(exprs.iter().map(|e| cfg.module(e)).collect::<Result<_>>()?)
                }
            };
            let opts = DecomposeOptions {
                fuel: cfg.fuel as usize,
                seed: cfg.seed,
            };
            let d = decompose(&target, &opts)?;
            Ok(Output::ok(d.to_string(), d.to_json_value()))
        }
        Command::Hom { a, b } => {
            let d = hom_dim(&cfg.module(a)?, &cfg.module(b)?)?;
            Ok(Output::ok(d.to_string(), json!({ "dim": d })))
        }
        Command::Ext { a, b, symmetric } => {
            let (m, n) = (cfg.module(a)?, cfg.module(b)?);
            let d = if *symmetric {
                ext1_cluster_dim(&m, &n)?
            } else {
                ext1_dim(&m, &n)?
            };
            Ok(Output::ok(d.to_string(), json!({ "dim": d })))
        }
        Command::Rigid { expr } => {
            let m = cfg.module(expr)?;
            let r = is_rigid(&m)?;
            Ok(Output::ok(
                r.to_string(),
                json!({ "module": m.to_expr(), "rigid": r }),
            ))
        }
        Command::Independence { exprs } => {
            let mods: Vec<TubeModule> =
                exprs.iter().map(|e| cfg.module(e)).collect::<Result<_>>()?;
            let ind = independence_check(&mods)?;
            let text = match &ind.relation {
                None => "independent".to_string(),
                Some(rel) => {
                    let parts: Vec<String> = rel.iter().map(|c| c.to_string()).collect();
                    format!("dependent\nrelation: {}", parts.join(", "))
                }
            };
            let json = json!({
                "independent": ind.independent,
                "modules": mods.iter().map(|m| m.to_expr()).collect::<Vec<_>>(),
                "relation": ind.relation.as_ref().map(|rel| rel.iter().map(bigint_to_json).collect::<Vec<_>>()),
            });
            Ok(Output::ok(text, json))
        }
        Command::Verify { suite, samples } => {
            let vc = VerifyConfig {
                max_rank: cfg.max_rank as usize,
                max_length: cfg.max_length,
                seed: cfg.seed,
                fuel: cfg.fuel as usize,
                samples: *samples,
            };
            let report = run_suite(*suite, &vc);
            Ok(Output {
                text: report.to_string(),
                json: report.to_json_value(),
                code: if report.passed() { 0 } else { 1 },
            })
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match CliConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    if cfg.fault == Some(Fault::EulerSign) {
        inject_euler_sign_fault(true);
    }
    match execute(&cfg) {
        Ok(o) => {
            let body = match cfg.format {
                Format::Text => o.text,
                Format::Json => o.json.to_string(),
            };
            let _ = writeln!(out, "{body}");
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["tubecc"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn char_examples() {
        assert_eq!(call(&["--rank", "1", "char", "E(1,5)"]).1, "6\n");
        assert_eq!(call(&["--rank", "3", "char", "0"]).1, "1\n");
        assert_eq!(
            call(&["--rank", "4", "char", "E(2,5)"]).1,
            "x1*x4^-1 + 2*x1*x2^-1 + x3*x4^-1 + 2*x2^-1*x3\n"
        );
    }

    #[test]
    fn other_commands() {
        let (code, out, _) = call(&["--rank", "2", "mult", "E(1,1)", "E(2,1)"]);
        assert_eq!(code, 0);
        assert!(out.contains("X[0] + X[E(1,2)]"), "{out}");
        assert!(out.ends_with("verified: true\n"));
        assert_eq!(
            call(&["--rank", "4", "decompose", "E(2,5)"]).1,
            "{E(2,1): 2, E(4,1): 1}\n"
        );
        assert_eq!(call(&["--rank", "4", "rigid", "E(1,4)"]).1, "false\n");
        assert_eq!(call(&["--rank", "3", "hom", "E(1,2)", "E(1,3)"]).1, "1\n");
        assert_eq!(call(&["ext", "E(1,1)", "E(2,1)", "--rank", "2"]).1, "1\n");
        assert_eq!(
            call(&["--rank", "2", "independence", "E(1,1)+E(2,1)", "0"]).1,
            "dependent\nrelation: 1, -4\n"
        );
    }

    #[test]
    fn json_output() {
        let (_, out, _) = call(&["--rank", "4", "--format", "json", "decompose", "E(2,5)"]);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["rank"], 4);
        assert_eq!(v["terms"][0]["module"], "E(2,1)");
        let (_, out, _) = call(&["--rank", "3", "--format", "json", "char", "E(1,2)"]);
        let p = LaurentPoly::from_json(out.trim()).unwrap();
        assert_eq!(p, char_module(&TubeModule::parse(3, "E(1,2)").unwrap()));
    }

    #[test]
    fn polynomial_targets() {
        let p = LaurentPoly::constant(3, 7).to_json();
        assert_eq!(
            call(&["--rank", "3", "decompose", "--poly", &p]).1,
            "{0: 7}\n"
        );
    }

    #[test]
    fn exit_codes() {
        let (code, _, err) = call(&["--rank", "3", "char", "E(1,2"]);
        assert_eq!(code, 2);
        assert!(err.contains("position"), "{err}");
        assert_eq!(call(&["char", "E(1,2)"]).0, 2);
        assert_eq!(call(&["--rank", "0", "char", "0"]).0, 2);
        assert_eq!(call(&["--rank", "3", "frobnicate"]).0, 2);
        assert_eq!(call(&["--rank", "3", "mult", "E(1,0)", "0"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn verify_command() {
        let (code, out, _) = call(&[
            "verify",
            "--suite",
            "characters",
            "--max-rank",
            "3",
            "--samples",
            "5",
        ]);
        assert_eq!(code, 0);
        assert!(out.ends_with("0 failures\n"), "{out}");
    }
}
