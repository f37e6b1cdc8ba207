use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sympinv::classify::{Classifier, ClassificationReport, Witness};
use sympinv::par::{self, Exec};
use sympinv::smallgroups::{class_table, generate_group, write_class_csv, ClassRecord};
use sympinv::symplectic::{is_unipotent_cyclic, wall_antitriangular, wall_form, SymplecticElement};
use sympinv::verify::{run_suite, Suite, SuiteReport, VerifyConfig};
use sympinv::{Budget, Error, Tri};

#[derive(Parser)]
#[command(name = "sympinv", version, about = "Involution factorizations in symplectic groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for randomized suites; recorded in every output.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0: one per core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Search budget; defaults to SYMPINV_BUDGET or the built-in limit.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Form {
    /// The standard form [[0, I], [-I, 0]].
    Standard,
    /// The Gram matrix stored in the input file.
    File,
}

#[derive(Subcommand)]
enum Command {
    /// Full classification report with witnesses.
    Classify {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Form::Standard)]
        form: Form,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        out: Format,
        /// Reload every embedded witness from the output and re-multiply it.
        #[arg(long)]
        recheck: bool,
    },
    /// Wall form, discriminant and, for cyclic unipotent input, the
    /// antitriangular normal form.
    Wall {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Form::Standard)]
        form: Form,
    },
    /// Conjugacy class table of Sp(2n, q).
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        out: Format,
    },
    /// Run a verification suite.
    Verify {
        /// theorem2, theorem4, theorem5, corollary, wall, dickson,
        /// invariants, witnesses or all
        #[arg(long)]
        suite: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        q: Option<u64>,
    },
    /// Re-verify the witnesses stored in a classification report.
    Recheck { report: PathBuf },
}

const EXIT_VERIFY: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_NOT_SYMPLECTIC: u8 = 3;
const EXIT_UNSUPPORTED: u8 = 4;
const EXIT_BUDGET: u8 = 5;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Dimension(_) => EXIT_PARSE,
        Error::NotSymplectic => EXIT_NOT_SYMPLECTIC,
        Error::NotOddPrime(_) | Error::Unsupported(_) | Error::FieldMismatch(..) => EXIT_UNSUPPORTED,
        Error::Budget(_) => EXIT_BUDGET,
        _ => EXIT_VERIFY,
    }
}

struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(exit_code(&e), e.to_string())
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure(EXIT_PARSE, format!("{}: {e}", path.display())))
}

/// A bare matrix JSON, or an element JSON carrying its own space.
fn load_element(path: &Path, form: Form) -> Result<SymplecticElement, Failure> {
    let v = read_json(path)?;
    let element = match (v.get("matrix"), form) {
        (Some(_), Form::File) => SymplecticElement::from_json(&v)?,
        (Some(m), Form::Standard) => SymplecticElement::standard(sympinv::linalg::Mat::from_json(m)?)?,
        (None, Form::Standard) => SymplecticElement::standard(sympinv::linalg::Mat::from_json(&v)?)?,
        (None, Form::File) => {
            return Err(Failure(EXIT_PARSE, "--form file needs {\"space\": ..., \"matrix\": ...}".into()))
        }
    };
    Ok(element)
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure(EXIT_PARSE, format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{text}").map_err(|e| Failure(EXIT_VERIFY, e.to_string()))
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn report_text(r: &ClassificationReport) -> String {
    let mut lines = vec![format!("Sp({}, {})", r.dim, r.field)];
    lines.push(format!("reversible in GL: {}", r.reversible_gl));
    lines.push(format!("conjugate to -phi^-1 in GL: {}", r.neg_inverse_gl));
    for (name, v) in r.verdicts() {
        lines.push(format!(
            "{name}: {} ({}, {}{})",
            v.status.as_str(),
            v.method.as_str(),
            v.ambient.as_str(),
            if v.witness.is_some() { ", witness" } else { "" }
        ));
    }
    lines.push(format!(
        "psp_reversible_not_bireflectional: {}",
        r.psp_reversible_not_bireflectional.as_str()
    ));
    lines.join("\n")
}

/// Reloads every witness from report JSON and re-multiplies it.
fn recheck_json(v: &Value) -> Result<Vec<String>, Failure> {
    let phi = SymplecticElement::from_json(&v["element"])?;
    let mut bad = Vec::new();
    for key in ["reversible_sp", "bireflectional", "two_skew", "inv_skew", "neg_inverse_sp"] {
        let w = &v["report"][key]["witness"];
        if w.is_null() {
            continue;
        }
        if !Witness::from_json(phi.field(), w)?.verify(&phi) {
            bad.push(key.to_string());
        }
    }
    Ok(bad)
}

fn classify(cli: &Cli, input: &Path, form: Form, out: Format, recheck: bool, budget: u64) -> Result<(), Failure> {
    let phi = load_element(input, form)?;
    let report = Classifier::new(budget, None).classify(&phi);
    let doc = json!({
        "seed": cli.seed,
        "budget": budget,
        "element": phi.to_json(),
        "report": report.to_json(),
    });
    if recheck {
        let bad = recheck_json(&doc)?;
        if !bad.is_empty() {
            return Err(Failure(EXIT_VERIFY, format!("witnesses failed to re-verify: {}", bad.join(", "))));
        }
    }
    match out {
        Format::Text => emit(&cli.output, &format!("{}\nseed: {}", report_text(&report), cli.seed)),
        _ => emit(&cli.output, &pretty(&doc)),
    }
}

fn wall(cli: &Cli, input: &Path, form: Form) -> Result<(), Failure> {
    let phi = load_element(input, form)?;
    let mut doc = wall_form(&phi).to_json();
    doc["seed"] = json!(cli.seed);
    doc["unipotent_cyclic"] = json!(phi.dim() > 0 && is_unipotent_cyclic(&phi));
    if phi.dim() > 0 && is_unipotent_cyclic(&phi) {
        doc["antitriangular"] = wall_antitriangular(&phi)?.to_json()["rows"].clone();
    }
    emit(&cli.output, &pretty(&doc))
}

fn tri_json(t: Tri) -> Value {
    json!(t.as_str())
}

fn class_json(r: &ClassRecord) -> Value {
    let v = r.verdicts;
    json!({
        "class_id": r.id,
        "rep": r.representative.to_json()["rows"],
        "size": r.size,
        "order_of_element": r.order,
        "elementary_divisors": r.elementary_divisors(),
        "is_involution": r.is_involution,
        "is_skew_involution": r.is_skew_involution,
        "reversible": v.map(|v| tri_json(v.reversible)),
        "bireflectional": v.map(|v| tri_json(v.bireflectional)),
        "two_skew": v.map(|v| tri_json(v.two_skew)),
        "inv_skew": v.map(|v| tri_json(v.inv_skew)),
        "psp_rev_not_biref": v.map(|v| tri_json(v.psp_rev_not_biref)),
    })
}

fn enumerate(cli: &Cli, n: usize, q: u64, out: Format, budget: u64) -> Result<(), Failure> {
    let g = generate_group(n, q, Exec::default())?;
    let table = class_table(&g, budget, Exec::default());
    match out {
        Format::Csv => {
            let mut buf = Vec::new();
            write_class_csv(&table, &mut buf)?;
            eprintln!(
                "Sp({}, {q}): order {}, {} classes, {} involutions, {} skew-involutions, seed {}",
                2 * n,
                g.order(),
                table.len(),
                g.involution_count(),
                g.skew_involution_count(),
                cli.seed
            );
            emit(&cli.output, String::from_utf8_lossy(&buf).trim_end())
        }
        _ => {
            let doc = json!({
                "seed": cli.seed,
                "n": n,
                "q": q,
                "order": g.order(),
                "involutions": g.involution_count(),
                "skew_involutions": g.skew_involution_count(),
                "classes": table.iter().map(class_json).collect::<Vec<_>>(),
            });
            emit(&cli.output, &pretty(&doc))
        }
    }
}

fn verify(cli: &Cli, suite: &str, n: Option<usize>, q: Option<u64>, budget: u64) -> Result<(), Failure> {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![Suite::parse(suite).ok_or_else(|| Failure(EXIT_PARSE, format!("unknown suite {suite}")))?]
    };
    let cfg = VerifyConfig {
        n,
        q,
        seed: cli.seed,
        budget,
        ..VerifyConfig::default()
    };
    let reports: Vec<SuiteReport> = suites
        .into_iter()
        .map(|s| run_suite(s, &cfg))
        .collect::<sympinv::Result<_>>()?;
    for r in &reports {
        for s in &r.skipped {
            eprintln!("{}: skipped {s}", r.suite);
        }
    }
    let passed = reports.iter().all(|r| r.passed());
    let doc = json!({
        "seed": cli.seed,
        "passed": passed,
        "suites": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
    });
    emit(&cli.output, &pretty(&doc))?;
    if passed {
        Ok(())
    } else {
        Err(Failure(EXIT_VERIFY, "verification failed".into()))
    }
}

fn recheck(cli: &Cli, path: &Path) -> Result<(), Failure> {
    let bad = recheck_json(&read_json(path)?)?;
    let doc = json!({ "seed": cli.seed, "passed": bad.is_empty(), "failed": bad });
    emit(&cli.output, &pretty(&doc))?;
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure(EXIT_VERIFY, "witnesses failed to re-verify".into()))
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if cli.jobs > 0 {
        par::set_jobs(cli.jobs);
    }
    let budget = cli.budget.unwrap_or_else(|| Budget::from_env().limit());
    match &cli.command {
        Command::Classify {
            input,
            form,
            out,
            recheck,
        } => classify(cli, input, *form, *out, *recheck, budget),
        Command::Wall { input, form } => wall(cli, input, *form),
        Command::Enumerate { n, q, out } => enumerate(cli, *n, *q, *out, budget),
        Command::Verify { suite, n, q } => verify(cli, suite, *n, *q, budget),
        Command::Recheck { report } => recheck(cli, report),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
