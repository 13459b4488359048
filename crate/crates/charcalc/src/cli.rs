//! Command-line interface: a single global configuration, twelve
//! subcommands, text or JSON output, and deterministic exit codes
//! (0 success, 1 usage or input error, 2 verification failure).
//!
//! The whole interface is a pure function from `(argv, stdin)` to
//! `(stdout, stderr, exit code)` so tests can drive it byte for byte.

use crate::coeff::CoeffRing;
use crate::cohom::{steenrod_adams, CohomRing, SwRing};
use crate::expr::parse_element;
use crate::kring::{
    adams_newton, adams_split, gamma_series, ktheory_chern, lambda_series, KElement, TSeries,
};
use crate::poly::Poly;
use crate::symfun::newton_polynomial;
use crate::verify::{verify_suite, Sabotage};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::io::Read;

/// Version tag carried by every JSON document this tool emits.
pub const SCHEMA: &str = "charcalc/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoeffMode {
    /// Exact rational coefficients.
    Q,
    /// Mod-2 coefficients (Stiefel-Whitney side).
    F2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AdamsRoute {
    /// Newton-polynomial route through the gamma operations.
    Newton,
    /// Transparent split-model route `L(a) -> L(k*a)`.
    Split,
}

/// Everything the binary writes, plus the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmdOutput {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

#[derive(Parser, Debug)]
#[command(
    name = "charcalc",
    version,
    about = "Exact characteristic-class calculus for split vector bundles",
    after_help = "Bundle expressions follow  expr := '-'? term (('+'|'-') term)*,  \
term := factor ('*' factor)*,  factor := 'L(' int (',' int)* ')' | integer | '(' expr ')'.  \
Pass '-' as the expression to read it from standard input."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Number of base line classes (the arity of L(...)).
    #[arg(long, global = true, default_value_t = 1)]
    m: usize,

    /// Truncation degree D of the cohomology ring (even, at least 2).
    #[arg(long, global = true, default_value_t = 10)]
    trunc: u32,

    /// Truncation order T for lambda/gamma series.
    #[arg(long, global = true, default_value_t = 8)]
    order: usize,

    /// Coefficient ring override (q is the default; f2 only for sw).
    #[arg(long, global = true, value_enum)]
    coeff: Option<CoeffMode>,

    /// Emit a JSON document instead of plain text.
    #[arg(long, global = true)]
    json: bool,

    /// Group cohomology output by weighted degree.
    #[arg(long, global = true)]
    by_degree: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Chern character of a bundle expression.
    Ch {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// i-th Chern class of an effective bundle expression.
    Chern {
        i: usize,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// k-th Newton class S_k of an effective bundle expression.
    #[command(name = "newton-class")]
    NewtonClass {
        k: usize,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Total lambda series of a bundle expression.
    Lambda {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Total gamma series of a bundle expression.
    Gamma {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// k-th Adams operation in K-theory.
    Psi {
        k: usize,
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Computation route; both routes agree on every element.
        #[arg(long, value_enum, default_value_t = AdamsRoute::Newton)]
        route: AdamsRoute,
    },
    /// k-th Adams endomorphism of cohomology, applied to Ch(expr).
    #[command(name = "psiH")]
    PsiH {
        k: usize,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// i-th K-theoretic Chern class of an effective bundle expression.
    Kchern {
        i: usize,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// k-th Newton polynomial in the sigma basis.
    Newton { k: usize },
    /// Stiefel-Whitney character (mod 2) of an effective bundle expression.
    Sw {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Rank (augmentation) of a bundle expression.
    Rank {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Run the identity verification suite on seeded random inputs.
    ///
    /// The suite runs its own base-size schedule (m = 1..3); --trunc,
    /// --order, --seed and --trials are honored.
    Verify {
        /// PRNG seed; the whole run is deterministic in it.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random trials per identity family.
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Fault injection for testing the failure path.
        #[arg(long, hide = true)]
        sabotage_newton: bool,
    },
}

/// Runs the CLI on the given arguments (without the program name).
/// `stdin` substitutes for standard input when the expression is `-`;
/// when `None`, the real standard input is read.
pub fn run_with_input(args: &[String], stdin: Option<&str>) -> CmdOutput {
    let argv = std::iter::once("charcalc".to_string()).chain(args.iter().cloned());
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CmdOutput {
                    stdout: rendered,
                    stderr: String::new(),
                    code: 0,
                },
                _ => CmdOutput {
                    stdout: String::new(),
                    stderr: rendered,
                    code: 1,
                },
            };
        }
    };
    match execute(cli, stdin) {
        Ok((stdout, code)) => CmdOutput {
            stdout,
            stderr: String::new(),
            code,
        },
        Err(msg) => CmdOutput {
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
            code: 1,
        },
    }
}

/// Convenience wrapper for string-literal argument lists.
pub fn run_args(args: &[&str]) -> CmdOutput {
    let owned: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    run_with_input(&owned, None)
}

fn execute(cli: Cli, stdin: Option<&str>) -> Result<(String, i32), String> {
    if cli.m == 0 {
        return Err("need at least one base line class (--m >= 1)".into());
    }
    if cli.trunc < 2 || !cli.trunc.is_multiple_of(2) {
        return Err(format!(
            "truncation degree must be even and at least 2, got {}",
            cli.trunc
        ));
    }
    if cli.order == 0 {
        return Err("series order must be at least 1 (--order)".into());
    }
    let wants_f2 = matches!(cli.cmd, Cmd::Sw { .. });
    match cli.coeff {
        Some(CoeffMode::F2) if !wants_f2 => {
            return Err("mod-2 coefficients are only available for the sw command".into());
        }
        Some(CoeffMode::Q) if wants_f2 => {
            return Err("the sw command works mod 2; drop --coeff or pass --coeff f2".into());
        }
        _ => {}
    }
    if cli.by_degree {
        let poly_valued = matches!(
            cli.cmd,
            Cmd::Ch { .. }
                | Cmd::Chern { .. }
                | Cmd::NewtonClass { .. }
                | Cmd::PsiH { .. }
                | Cmd::Sw { .. }
                | Cmd::Newton { .. }
        );
        if !poly_valued {
            return Err("--by-degree applies to cohomology-valued commands only".into());
        }
    }

    let parse_arg = |expr: &str| -> Result<KElement, String> {
        let text: String = if expr == "-" {
            match stdin {
                Some(s) => s.to_string(),
                None => {
                    let mut buf = String::new();
                    std::io::stdin()
                        .read_to_string(&mut buf)
                        .map_err(|e| format!("failed to read standard input: {e}"))?;
                    buf
                }
            }
        } else {
            expr.to_string()
        };
        parse_element(&text, cli.m).map_err(|e| e.to_string())
    };

    let coh = || CohomRing::new(cli.m, cli.trunc).map_err(|e| e.to_string());

    match &cli.cmd {
        Cmd::Ch { expr } => {
            let x = parse_arg(expr)?;
            let ch = coh()?.chern_character(&x).map_err(|e| e.to_string())?;
            Ok((render_poly(&cli, "ch", &ch), 0))
        }
        Cmd::Chern { i, expr } => {
            let e = parse_arg(expr)?;
            let c = coh()?.chern_class(&e, *i).map_err(|e| e.to_string())?;
            Ok((render_poly(&cli, "chern", &c), 0))
        }
        Cmd::NewtonClass { k, expr } => {
            let e = parse_arg(expr)?;
            let s = coh()?.newton_class(&e, *k).map_err(|e| e.to_string())?;
            Ok((render_poly(&cli, "newton-class", &s), 0))
        }
        Cmd::Lambda { expr } => {
            let x = parse_arg(expr)?;
            Ok((
                render_series(&cli, "lambda", &lambda_series(&x, cli.order)),
                0,
            ))
        }
        Cmd::Gamma { expr } => {
            let x = parse_arg(expr)?;
            Ok((
                render_series(&cli, "gamma", &gamma_series(&x, cli.order)),
                0,
            ))
        }
        Cmd::Psi { k, expr, route } => {
            if *k == 0 {
                return Err("Adams operations are indexed from 1 (k >= 1)".into());
            }
            let x = parse_arg(expr)?;
            let psi = match route {
                AdamsRoute::Newton => adams_newton(&x, *k),
                AdamsRoute::Split => adams_split(&x, *k),
            };
            Ok((render_kelement(&cli, "psi", &psi), 0))
        }
        Cmd::PsiH { k, expr } => {
            if *k == 0 {
                return Err("Adams operations are indexed from 1 (k >= 1)".into());
            }
            let x = parse_arg(expr)?;
            let ch = coh()?.chern_character(&x).map_err(|e| e.to_string())?;
            Ok((render_poly(&cli, "psiH", &steenrod_adams(*k, &ch)), 0))
        }
        Cmd::Kchern { i, expr } => {
            let e = parse_arg(expr)?;
            let c = ktheory_chern(&e, *i).map_err(|e| e.to_string())?;
            Ok((render_kelement(&cli, "kchern", &c), 0))
        }
        Cmd::Newton { k } => {
            if *k == 0 {
                return Err("Newton polynomials are indexed from 1 (k >= 1)".into());
            }
            Ok((render_poly(&cli, "newton", &newton_polynomial(*k)), 0))
        }
        Cmd::Sw { expr } => {
            let e = parse_arg(expr)?;
            let ring = SwRing::new(cli.m, cli.trunc).map_err(|e| e.to_string())?;
            let sw = ring.sw_character(&e).map_err(|e| e.to_string())?;
            Ok((render_poly(&cli, "sw", &sw), 0))
        }
        Cmd::Rank { expr } => {
            let x = parse_arg(expr)?;
            let rank = x.rank();
            let out = if cli.json {
                json_line(&cli, "rank", json!(rank.to_string()))
            } else {
                format!("{rank}\n")
            };
            Ok((out, 0))
        }
        Cmd::Verify {
            seed,
            trials,
            sabotage_newton,
        } => {
            if *trials == 0 {
                return Err("need at least one trial (--trials >= 1)".into());
            }
            let sab = if *sabotage_newton {
                Sabotage::CorruptNewtonTable
            } else {
                Sabotage::None
            };
            let report = verify_suite(cli.trunc, cli.order, *seed, *trials, sab);
            let code = if report.all_passed() { 0 } else { 2 };
            let out = if cli.json {
                json_line(&cli, "verify", report.to_json())
            } else {
                report.render_text()
            };
            Ok((out, code))
        }
    }
}

fn json_line(cli: &Cli, command: &str, result: Value) -> String {
    let doc = json!({
        "schema": SCHEMA,
        "command": command,
        "m": cli.m,
        "trunc": cli.trunc,
        "order": cli.order,
        "result": result,
    });
    format!("{doc}\n")
}

fn render_poly<C: CoeffRing>(cli: &Cli, command: &str, p: &Poly<C>) -> String {
    if cli.json {
        let mut doc = json!({
            "schema": SCHEMA,
            "command": command,
            "m": cli.m,
            "trunc": cli.trunc,
            "order": cli.order,
            "result": p.to_json(),
        });
        if cli.by_degree {
            let components: Vec<Value> = p
                .wdeg_components()
                .iter()
                .map(|(d, q)| json!({ "degree": d, "result": q.to_json() }))
                .collect();
            doc["components"] = json!(components);
        }
        return format!("{doc}\n");
    }
    if cli.by_degree {
        if p.is_zero() {
            return "0\n".into();
        }
        let mut out = String::new();
        for (d, q) in p.wdeg_components() {
            let _ = writeln!(out, "deg {d}: {q}");
        }
        return out;
    }
    format!("{p}\n")
}

fn render_kelement(cli: &Cli, command: &str, x: &KElement) -> String {
    if cli.json {
        json_line(cli, command, x.to_json())
    } else {
        format!("{x}\n")
    }
}

fn render_series(cli: &Cli, command: &str, s: &TSeries) -> String {
    if cli.json {
        json_line(cli, command, s.to_json())
    } else {
        format!("{s}\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_chern_character() {
        let out = run_args(&["ch", "L(1)+L(2)", "--m", "1", "--trunc", "6"]);
        assert_eq!(out.code, 0, "stderr: {}", out.stderr);
        assert_eq!(out.stdout, "2 + 3*x1 + 5/2*x1^2 + 3/2*x1^3\n");
    }

    #[test]
    fn golden_adams_operation() {
        let out = run_args(&["psi", "2", "L(1)-1", "--m", "1"]);
        assert_eq!(out.code, 0, "stderr: {}", out.stderr);
        assert_eq!(out.stdout, "L(2) - 1\n");
        let split = run_args(&["psi", "2", "L(1)-1", "--m", "1", "--route", "split"]);
        assert_eq!(split.stdout, "L(2) - 1\n");
    }

    #[test]
    fn golden_newton_polynomial() {
        let out = run_args(&["newton", "2"]);
        assert_eq!(out.code, 0, "stderr: {}", out.stderr);
        assert_eq!(out.stdout, "s1^2 - 2*s2\n");
    }

    #[test]
    fn stdin_expression() {
        let args: Vec<String> = ["ch", "-", "--m", "1", "--trunc", "6"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let out = run_with_input(&args, Some("L(1)+L(2)\n"));
        assert_eq!(out.stdout, "2 + 3*x1 + 5/2*x1^2 + 3/2*x1^3\n");
    }

    #[test]
    fn usage_errors_exit_one() {
        for args in [
            &["ch", "L(1)", "--m", "0"][..],
            &["ch", "L(1)", "--trunc", "7"][..],
            &["ch", "L(1)", "--order", "0"][..],
            &["ch", "L(1)", "--coeff", "f2"][..],
            &["sw", "L(1)", "--coeff", "q"][..],
            &["psi", "0", "L(1)"][..],
            &["rank", "L(1)", "--by-degree"][..],
            &["ch", "L(1,2)", "--m", "1"][..],
            &["nonsense"][..],
        ] {
            let out = run_args(args);
            assert_eq!(out.code, 1, "args {args:?} gave: {}", out.stdout);
            assert!(!out.stderr.is_empty(), "args {args:?}");
        }
    }

    #[test]
    fn non_effective_input_is_an_input_error() {
        let out = run_args(&["chern", "1", "L(1)-2", "--m", "1"]);
        assert_eq!(out.code, 1);
        assert!(out.stderr.contains("effective"));
    }

    #[test]
    fn json_documents_carry_the_schema_tag() {
        for args in [
            &["ch", "L(1)", "--json"][..],
            &["psi", "2", "L(1)", "--json"][..],
            &["lambda", "L(1)", "--json"][..],
            &["rank", "L(1)", "--json"][..],
            &["newton", "3", "--json"][..],
            &["sw", "L(1)", "--json"][..],
        ] {
            let out = run_args(args);
            assert_eq!(out.code, 0, "args {args:?}: {}", out.stderr);
            let doc: Value = serde_json::from_str(&out.stdout).expect("valid JSON");
            assert_eq!(doc["schema"], json!(SCHEMA), "args {args:?}");
        }
    }

    #[test]
    fn by_degree_groups_components() {
        let out = run_args(&["ch", "L(1)+L(2)", "--m", "1", "--trunc", "6", "--by-degree"]);
        assert_eq!(
            out.stdout,
            "deg 0: 2\ndeg 2: 3*x1\ndeg 4: 5/2*x1^2\ndeg 6: 3/2*x1^3\n"
        );
    }

    #[test]
    fn help_exits_zero() {
        let out = run_args(&["--help"]);
        assert_eq!(out.code, 0);
        assert!(out.stdout.contains("charcalc"));
    }

    #[test]
    fn hyphen_leading_expressions_parse() {
        let out = run_args(&["rank", "-L(1)+3", "--m", "1"]);
        assert_eq!(out.code, 0, "stderr: {}", out.stderr);
        assert_eq!(out.stdout, "2\n");
    }
}
