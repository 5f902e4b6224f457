//! The `dglforge` command line: builds the constructions, runs the checks,
//! and writes certificates.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dglforge::certificate::{Certificate, Status};
use dglforge::constructions::{
    build_connected_sum, build_lk, cat_certificate, check_prop51, verify_claim_identity, Prop51Options,
};
use dglforge::dgl::{
    boundary_certificate, check_d_squared, decomposition_certificate, homology_dimensions, minimalize_certificate,
    recheck, substitution_certificate, DglPresentation, SearchSpace,
};
use dglforge::format::{format_rational, parse_dgl, parse_element, print_dgl};
use dglforge::quillen::{lstar, truncated_monogenic};
use dglforge::{Budget, Error};
use serde_json::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "dglforge", version, about = "Exact computations with free dgl's over Q")]
pub struct Cli {
    /// Degree cap for d^2 checks, homology and minimal models.
    #[arg(long, global = true)]
    pub max_degree: Option<u32>,
    /// Wall-clock budget for the long-running searches.
    #[arg(long, global = true)]
    pub budget_seconds: Option<f64>,
    /// Write the certificate (or result) as JSON to this file.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    /// Suppress the summary on stdout.
    #[arg(long, global = true)]
    pub quiet: bool,
    /// Record stage timings in certificates.
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Family {
    /// Q[u]/u^(k+1), |u| = 4.
    A,
    /// Q[v]/v^3, |v| = 2k.
    B,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Stage {
    /// The connected sum L.
    ConnectedSum,
    /// L ⊔ L' ⊔ L(s(...)).
    Product,
    /// The full dgl with v.
    Lk,
}

#[derive(Args, Debug)]
pub struct OutArg {
    /// Write the presentation here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Quillen model of a truncated polynomial algebra.
    BuildLstar {
        #[arg(long, value_enum, default_value = "a")]
        family: Family,
        #[arg(long)]
        k: Option<u32>,
        /// Explicit Q[u]/u^power, overriding the family.
        #[arg(long, requires = "power")]
        generator_degree: Option<u32>,
        #[arg(long, requires = "generator_degree")]
        power: Option<u32>,
        #[arg(long, default_value = "a")]
        prefix: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// The dgl L_k (or one of its intermediate stages).
    BuildLk {
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value = "lk")]
        stage: Stage,
        #[command(flatten)]
        out: OutArg,
    },
    /// Check d(d g) = 0 on every generator up to the degree cap.
    CheckD2 { file: PathBuf },
    /// Homology dimensions through the degree cap.
    Homology { file: PathBuf },
    /// Find x with d x = target, or a certificate that none exists.
    SolveBoundary {
        file: PathBuf,
        #[arg(long)]
        target: String,
        /// Comma-separated generators allowed in x.
        #[arg(long, value_delimiter = ',')]
        letters: Option<Vec<String>>,
        #[arg(long)]
        min_weight: Option<usize>,
        #[arg(long)]
        max_weight: Option<usize>,
    },
    /// Change of generators `name=expr` (the image of each listed generator).
    Substitute {
        file: PathBuf,
        #[arg(long = "map", required = true)]
        maps: Vec<String>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Greedy decomposition, or a check of the filtration in the file.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        given: bool,
    },
    /// Category certificate for L_k ⊔ L(w).
    CatCert {
        #[arg(long)]
        k: u32,
    },
    /// The obstruction system for L_k.
    CheckProp51 {
        #[arg(long)]
        k: u32,
        /// Replace d v by d [[a,c],[a',c']] (expected FEASIBLE).
        #[arg(long)]
        control: bool,
        /// Comma-separated generator order for L'.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<String>>,
    },
    /// The bracket identity and ideal check for L_k.
    ClaimCheck {
        #[arg(long)]
        k: u32,
    },
    /// Minimal model through the degree cap.
    Minimalize {
        file: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Re-verify a certificate from its witnesses.
    Recheck { certificate: PathBuf },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Lib(Error),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(s) => write!(f, "{s}"),
            Failure::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Lib(e) => match e {
                Error::BudgetExhausted { .. } => EXIT_BUDGET,
                Error::Unverified(_) | Error::VerificationFailed(_) | Error::NonInvertible(_) => EXIT_NEGATIVE,
                _ => EXIT_USAGE,
            },
        }
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Res<()> {
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Res<DglPresentation> {
    let text = read(path)?;
    parse_dgl(&text)
        .map(|f| f.presentation)
        .map_err(|e| Failure::Usage(format!("{}:{e}", path.display())))
}

fn max_generator_degree(p: &DglPresentation) -> u32 {
    p.alphabet().generators().iter().map(|g| g.degree).max().unwrap_or(1)
}

struct Ctx<'a> {
    cli: &'a Cli,
    out: &'a mut dyn Write,
    started: Instant,
}

impl Ctx<'_> {
    fn say(&mut self, text: impl fmt::Display) {
        if !self.cli.quiet {
            let _ = writeln!(self.out, "{text}");
        }
    }

    fn budget(&self) -> Budget {
        self.cli.budget_seconds.map(Budget::seconds).unwrap_or_default()
    }

    fn emit_presentation(&mut self, p: &DglPresentation, out: &OutArg) -> Res<()> {
        self.emit_text(print_dgl(p), p.len(), out)
    }

    fn emit_text(&mut self, text: String, generators: usize, out: &OutArg) -> Res<()> {
        match &out.out {
            Some(path) => {
                write_file(path, &text)?;
                self.say(format!("wrote {} ({generators} generators)", path.display()));
            }
            None => {
                if !self.cli.quiet {
                    let _ = write!(self.out, "{text}");
                }
            }
        }
        Ok(())
    }

    fn emit_certificate(&mut self, cert: &mut Certificate) -> Res<()> {
        if self.cli.timings {
            cert.enable_timings();
            cert.timing("total", self.started.elapsed());
        }
        if let Some(path) = &self.cli.json {
            write_file(path, &cert.to_json())?;
        }
        Ok(())
    }

    fn finish(&mut self, cert: &mut Certificate, expected: Status) -> Res<i32> {
        self.emit_certificate(cert)?;
        let status = serde_json::to_value(cert.status).expect("status serialises");
        self.say(format!("status: {}", status.as_str().unwrap_or("?")));
        Ok(if cert.status == expected {
            EXIT_OK
        } else {
            EXIT_NEGATIVE
        })
    }
}

fn search_space(
    p: &DglPresentation,
    letters: &Option<Vec<String>>,
    min_weight: Option<usize>,
    max_weight: Option<usize>,
) -> Res<SearchSpace> {
    let letters = match letters {
        Some(names) => Some(
            names
                .iter()
                .map(|n| p.alphabet().require(n.trim()))
                .collect::<dglforge::Result<Vec<_>>>()?,
        ),
        None => None,
    };
    Ok(SearchSpace {
        letters,
        min_weight,
        max_weight,
    })
}

fn execute(ctx: &mut Ctx) -> Res<i32> {
    let cli = ctx.cli;
    match &cli.command {
        Command::BuildLstar {
            family,
            k,
            generator_degree,
            power,
            prefix,
            out,
        } => {
            let (alg, prefix) = match (generator_degree, power) {
                (Some(d), Some(n)) => (truncated_monogenic(*d, *n)?, prefix.as_str()),
                _ => {
                    let k = k.ok_or_else(|| Failure::Usage("--k is required with --family".into()))?;
                    match family {
                        Family::A => (truncated_monogenic(4, k + 1)?, "a"),
                        Family::B => (truncated_monogenic(2 * k, 3)?, "b"),
                    }
                }
            };
            let l = lstar(&alg, prefix)?;
            let scaling: Vec<String> = l.scaling.iter().map(format_rational).collect();
            let text = format!(
                "# dual basis scaling: {}\n{}",
                scaling.join(" "),
                print_dgl(&l.presentation)
            );
            ctx.emit_text(text, l.presentation.len(), out)?;
            Ok(EXIT_OK)
        }
        Command::BuildLk { k, stage, out } => {
            let p = match stage {
                Stage::ConnectedSum => build_connected_sum(*k)?,
                Stage::Product => build_lk(*k)?.product,
                Stage::Lk => build_lk(*k)?.lk,
            };
            ctx.emit_presentation(&p, out)?;
            Ok(EXIT_OK)
        }
        Command::CheckD2 { file } => {
            let p = load(file)?;
            let cap = cli.max_degree.unwrap_or_else(|| max_generator_degree(&p));
            let mut cert = check_d_squared(&p, cap);
            ctx.say(format!(
                "checked {} generators through degree {cap}",
                cert.dimensions["generators_checked"]
            ));
            ctx.finish(&mut cert, Status::Pass)
        }
        Command::Homology { file } => {
            let p = load(file)?;
            let cap = cli.max_degree.unwrap_or_else(|| max_generator_degree(&p));
            let h = homology_dimensions(&p, cap, ctx.budget())?;
            let map: BTreeMap<String, usize> = h.iter().enumerate().map(|(i, &d)| ((i + 1).to_string(), d)).collect();
            for (i, d) in h.iter().enumerate() {
                if *d > 0 {
                    ctx.say(format!("H_{} = {d}", i + 1));
                }
            }
            ctx.say(format!("(zero in all other degrees through {cap})"));
            if let Some(path) = &cli.json {
                let text =
                    serde_json::to_string_pretty(&json!({"degree_cap": cap, "homology": map})).expect("serialisable");
                write_file(path, &(text + "\n"))?;
            }
            Ok(EXIT_OK)
        }
        Command::SolveBoundary {
            file,
            target,
            letters,
            min_weight,
            max_weight,
        } => {
            let p = load(file)?;
            let target = parse_element(p.alphabet(), target).map_err(|e| Failure::Usage(format!("--target: {e}")))?;
            let space = search_space(&p, letters, *min_weight, *max_weight)?;
            let mut cert = boundary_certificate(&p, &target, &space)?;
            if let Some(x) = cert.witnesses.get("solution").and_then(|v| v.as_str()) {
                ctx.say(format!("x = {x}"));
            } else {
                ctx.say("no preimage in the search space");
            }
            ctx.finish(&mut cert, Status::Pass)
        }
        Command::Substitute { file, maps, out } => {
            let p = load(file)?;
            let mut subst = BTreeMap::new();
            for m in maps {
                let (name, expr) = m
                    .split_once('=')
                    .ok_or_else(|| Failure::Usage(format!("--map `{m}`: expected name=expr")))?;
                let g = p.alphabet().require(name.trim())?;
                let e = parse_element(p.alphabet(), expr.trim())
                    .map_err(|e| Failure::Usage(format!("--map `{m}`: {e}")))?;
                subst.insert(g, e);
            }
            let mut cert = substitution_certificate(&p, &subst)?;
            let q = parse_dgl(cert.witnesses["presentation"].as_str().unwrap_or(""))?.presentation;
            ctx.emit_presentation(&q, out)?;
            for key in ["length_before", "length_after"] {
                if let Some(n) = cert.dimensions.get(key) {
                    ctx.say(format!("{}: {n}", key.replace('_', " ")));
                }
            }
            ctx.finish(&mut cert, Status::Pass)
        }
        Command::Decompose { file, given } => {
            let p = load(file)?;
            let f = if *given {
                Some(p.filtration().ok_or_else(|| Error::MissingFiltration("file".into()))?)
            } else {
                None
            };
            let mut cert = decomposition_certificate(&p, f.as_ref())?;
            match cert.dimensions.get("length") {
                Some(n) => ctx.say(format!("length {n}")),
                None => ctx.say("no decomposition"),
            }
            if let Some(serde_json::Value::Object(stages)) = cert.witnesses.get("filtration").cloned() {
                for (name, s) in stages {
                    ctx.say(format!("  {name}: {s}"));
                }
            }
            ctx.finish(&mut cert, Status::Pass)
        }
        Command::CatCert { k } => {
            let b = build_lk(*k)?;
            let mut cert = cat_certificate(&b)?;
            ctx.say(format!(
                "greedy length {} before, {} after the change of generators",
                cert.dimensions["length_before"], cert.dimensions["length_after"]
            ));
            if let Some(d) = cert.witnesses.get("d_v").and_then(|v| v.as_str()) {
                ctx.say(format!("d v = {d}"));
            }
            ctx.finish(&mut cert, Status::Pass)
        }
        Command::CheckProp51 { k, control, order } => {
            let b = build_lk(*k)?;
            let opts = Prop51Options {
                budget: ctx.budget(),
                order: order.clone(),
                control: *control,
                timings: cli.timings,
            };
            let mut cert = check_prop51(&b, &opts)?;
            ctx.say(format!(
                "{} unknowns, {} equations, {} nonzeros",
                cert.dimensions["unknowns"], cert.dimensions["equations"], cert.dimensions["nonzeros"]
            ));
            let expected = if *control { Status::Feasible } else { Status::Infeasible };
            ctx.finish(&mut cert, expected)
        }
        Command::ClaimCheck { k } => {
            let b = build_lk(*k)?;
            let mut cert = verify_claim_identity(&b)?;
            ctx.finish(&mut cert, Status::Pass)
        }
        Command::Minimalize { file, out } => {
            let p = load(file)?;
            let cap = cli.max_degree.unwrap_or_else(|| max_generator_degree(&p));
            let mut cert = minimalize_certificate(&p, cap)?;
            let q = parse_dgl(cert.witnesses["presentation"].as_str().unwrap_or(""))?.presentation;
            ctx.emit_presentation(&q, out)?;
            ctx.finish(&mut cert, Status::Pass)
        }
        Command::Recheck { certificate } => {
            let cert = Certificate::from_json(&read(certificate)?)?;
            let ok = recheck(&cert)?;
            ctx.say(if ok {
                "certificate verified"
            } else {
                "certificate REJECTED"
            });
            Ok(if ok { EXIT_OK } else { EXIT_NEGATIVE })
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("DGLFORGE_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Parses `args` (including the program name), runs the command, and
/// returns the exit code. Diagnostics go to stderr.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    let mut ctx = Ctx {
        cli: &cli,
        out,
        started: Instant::now(),
    };
    match execute(&mut ctx) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {f}");
            f.code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_by_error() {
        let code = |e: Error| Failure::Lib(e).code();
        assert_eq!(code(Error::BudgetExhausted { stage: "x".into() }), EXIT_BUDGET);
        assert_eq!(code(Error::Unverified("b".into())), EXIT_NEGATIVE);
        assert_eq!(code(Error::CapTooSmall { cap: 3, needed: 5 }), EXIT_USAGE);
        assert_eq!(
            code(Error::Parse {
                line: 1,
                col: 1,
                msg: String::new()
            }),
            EXIT_USAGE
        );
        assert_eq!(Failure::Usage("x".into()).code(), EXIT_USAGE);
    }

    #[test]
    fn search_space_from_flags() {
        let p = parse_dgl("gen a 3\ngen b 5\n").unwrap().presentation;
        let s = search_space(&p, &Some(vec!["b".into(), " a".into()]), Some(2), None).unwrap();
        assert_eq!(s.letters, Some(vec![1, 0]));
        assert_eq!(s.min_weight, Some(2));
        assert!(search_space(&p, &Some(vec!["z".into()]), None, None).is_err());
    }
}
