use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use picard::analysis::{
    classify, dij_bounds, end_rank, extension_degree, ns_basis, picard_number, AnalysisError, SearchParams,
};
use picard::generate::{generate_instance, GenerateKind, GenerationError};
use picard::instance::{InstanceError, InstanceFile, Precision};
use picard::numberfield::FieldError;
use picard::report::{Provenance, ReportDocument};
use picard::roots::RootError;
use picard::torus::{PeriodMatrix, TorusError};
use picard::verify::{run_suite, Suite, SuiteConfig};

const EXIT_VERIFICATION: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_INDETERMINATE: u8 = 3;

#[derive(Parser)]
#[command(name = "picard", version, about = "Picard numbers and endomorphism ranks of complex tori with algebraic periods")]
struct Cli {
    /// Working precision for root isolation and ball arithmetic, in bits.
    #[arg(long, global = true, default_value_t = 256)]
    precision_bits: u64,
    /// Ceiling for precision escalation, in bits.
    #[arg(long, global = true, default_value_t = 4096)]
    max_precision_bits: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Coefficient bound N for the polarization search.
    #[arg(long, global = true, default_value_t = 2)]
    search_bound: i64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Picard number and extension degree (FILE may be `-` for stdin).
    Analyze { file: PathBuf },
    /// Span dimensions 𝔡_ij and the two lower bounds for ρ.
    Bounds { file: PathBuf },
    /// Integer basis of the Néron–Severi group.
    NsBasis { file: PathBuf },
    /// Rank of the endomorphism ring.
    EndRank { file: PathBuf },
    /// Full report with consistency verdicts and polarization search.
    Classify { file: PathBuf },
    /// Generate an instance file.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        g: usize,
        /// Negative discriminant for cm-power.
        #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
        disc: i64,
        /// Built-in field for random: gaussian, sqrt-2, cubic, zeta8, quartic-2.
        #[arg(long, default_value = "gaussian")]
        field: String,
        /// Base instance for transformed.
        #[arg(long)]
        base: Option<PathBuf>,
    },
    /// Run a verification suite: oracle-g2, invariance, bounds, theorems, decomposition.
    Verify { suite: Suite },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    CmPower,
    NoncmCubicPower,
    CmPair,
    Random,
    Transformed,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }
}

fn field_code(e: &FieldError) -> u8 {
    match e {
        FieldError::Root(RootError::PrecisionExhausted { .. }) => EXIT_INDETERMINATE,
        _ => EXIT_INPUT,
    }
}

fn torus_code(e: &TorusError) -> u8 {
    match e {
        TorusError::DegenerateImaginaryPart { .. } => EXIT_INDETERMINATE,
        TorusError::Field(f) => field_code(f),
        _ => EXIT_INPUT,
    }
}

impl From<InstanceError> for Failure {
    fn from(e: InstanceError) -> Self {
        let code = match &e {
            InstanceError::Parse(_) => EXIT_INPUT,
            InstanceError::Field(f) => field_code(f),
            InstanceError::Torus(t) => torus_code(t),
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        let code = match &e {
            AnalysisError::InconsistentVerdict { .. } => EXIT_VERIFICATION,
            AnalysisError::Torus(t) => torus_code(t),
            AnalysisError::Field(f) => field_code(f),
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<GenerationError> for Failure {
    fn from(e: GenerationError) -> Self {
        match e {
            GenerationError::Instance(i) => i.into(),
            other => Failure::input(other.to_string()),
        }
    }
}

fn read_input(path: &PathBuf) -> Result<Vec<u8>, Failure> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf).map_err(|e| Failure::input(format!("stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
    }
}

struct Loaded {
    label: Option<String>,
    p: PeriodMatrix,
    provenance: Provenance,
}

fn load(path: &PathBuf, precision: Precision) -> Result<Loaded, Failure> {
    let bytes = read_input(path)?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Failure::input("input is not UTF-8"))?;
    let file = InstanceFile::from_json(&text).map_err(InstanceError::from)?;
    let (_, p) = file.build(precision)?;
    Ok(Loaded { label: file.label, p, provenance: Provenance::new(&bytes, precision) })
}

fn emit(format: Format, value: &Value, text: impl FnOnce() -> String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("json value")),
        Format::Text => print!("{}", text()),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let precision = Precision { bits: cli.precision_bits, max_bits: cli.max_precision_bits };
    let search = SearchParams { bound: cli.search_bound, precision_bits: cli.precision_bits, ..SearchParams::default() };
    match &cli.command {
        Command::Analyze { file } => {
            let l = load(file, precision)?;
            let (rho, rank_t) = picard_number(&l.p);
            let g = l.p.g();
            let d = extension_degree(&l.p);
            let v = json!({
                "label": l.label, "g": g, "rho": rho, "rank_t": rank_t, "degree_d": d,
                "rho_maximal": rho == g * g, "provenance": l.provenance,
            });
            emit(cli.format, &v, || format!("g = {g}\nrho = {rho}\nrank_T = {rank_t}\ndegree_d = {d}\nrho_maximal = {}\n", rho == g * g));
        }
        Command::Bounds { file } => {
            let l = load(file, precision)?;
            let b = dij_bounds(&l.p)?;
            let rho = picard_number(&l.p).0;
            let v = json!({
                "label": l.label, "g": l.p.g(), "rho": rho, "dij": b.dij, "bound_dij": b.bound_dij,
                "bound_degree": b.bound_degree.to_string(), "provenance": l.provenance,
            });
            emit(cli.format, &v, || {
                let mut s = String::new();
                for e in &b.dij {
                    s += &format!("d_{}{} = {}\n", e.i, e.j, e.d);
                }
                s + &format!("bound_dij = {} <= rho = {rho}\nbound_degree = {} <= rho = {rho}\n", b.bound_dij, b.bound_degree)
            });
        }
        Command::NsBasis { file } => {
            let l = load(file, precision)?;
            let basis = ns_basis(&l.p);
            let v = json!({ "label": l.label, "g": l.p.g(), "rho": basis.len(), "classes": basis, "provenance": l.provenance });
            emit(cli.format, &v, || {
                let mut s = format!("rho = {}\n", basis.len());
                for (i, c) in basis.iter().enumerate() {
                    s += &format!("class {}: A = {:?}, B = {:?}, C = {:?}\n", i + 1, fmt_mat(&c.a), fmt_mat(&c.b), fmt_mat(&c.c));
                }
                s
            });
        }
        Command::EndRank { file } => {
            let l = load(file, precision)?;
            let g = l.p.g();
            let e = end_rank(&l.p);
            let v = json!({ "label": l.label, "g": g, "end_rank": e, "cap": 2 * g * g, "provenance": l.provenance });
            emit(cli.format, &v, || format!("end_rank = {e} (cap 2g² = {})\n", 2 * g * g));
        }
        Command::Classify { file } => {
            let l = load(file, precision)?;
            let report = classify(&l.p, &search)?;
            let doc = ReportDocument { label: l.label, report, provenance: l.provenance };
            match cli.format {
                Format::Json => println!("{}", doc.to_json()),
                Format::Text => print!("{}", classify_text(&doc)),
            }
        }
        Command::Gen { kind, seed, g, disc, field, base } => {
            let kind = match kind {
                GenKind::CmPower => GenerateKind::CmPower { disc: *disc, g: *g },
                GenKind::NoncmCubicPower => GenerateKind::NoncmCubicPower { g: *g },
                GenKind::CmPair => GenerateKind::CmPair,
                GenKind::Random => GenerateKind::Random { field: field.clone(), g: *g, seed: *seed },
                GenKind::Transformed => {
                    let path = base.as_ref().ok_or_else(|| Failure::input("transformed requires --base FILE"))?;
                    let text = String::from_utf8(read_input(path)?).map_err(|_| Failure::input("input is not UTF-8"))?;
                    let base = InstanceFile::from_json(&text).map_err(InstanceError::from)?;
                    GenerateKind::Transformed { base, seed: *seed }
                }
            };
            println!("{}", generate_instance(&kind, precision)?.to_json());
        }
        Command::Verify { suite } => {
            let cfg = SuiteConfig { precision, search, ..SuiteConfig::default() };
            let format = cli.format;
            let mut total = 0usize;
            let failures = run_suite(*suite, &cfg, &mut |r| {
                total += 1;
                match format {
                    Format::Json => println!("{}", serde_json::to_string(&r).expect("record serializes")),
                    Format::Text => println!(
                        "{} {} {} expected={} got={}",
                        if r.pass { "PASS" } else { "FAIL" },
                        r.check,
                        r.instance,
                        r.expected,
                        r.got
                    ),
                }
            })
            .map_err(|e| Failure { code: EXIT_VERIFICATION, message: e.to_string() })?;
            eprintln!("{suite}: {} checks, {failures} failed", total);
            if failures > 0 {
                return Err(Failure { code: EXIT_VERIFICATION, message: format!("{failures} checks failed") });
            }
        }
    }
    Ok(())
}

fn fmt_mat(m: &[Vec<num_bigint::BigInt>]) -> Vec<Vec<String>> {
    m.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

fn classify_text(doc: &ReportDocument) -> String {
    let r = &doc.report;
    let mut s = String::new();
    if let Some(l) = &doc.label {
        s += &format!("{l}\n");
    }
    s += &format!("g = {}\nrho = {} (rank_T = {})\ndegree_d = {}\nend_rank = {}\nrho_maximal = {}\n", r.g, r.rho, r.rank_t, r.degree_d, r.end_rank, r.rho_maximal);
    for e in &r.dij {
        s += &format!("d_{}{} = {}\n", e.i, e.j, e.d);
    }
    if let (Some(bd), Some(bq)) = (r.bound_dij, &r.bound_degree) {
        s += &format!("bound_dij = {bd}\nbound_degree = {bq}\n");
    }
    for v in &r.consistency {
        s += &format!("[{:?}] {}: {}\n", v.status, v.name, v.statement);
    }
    s += &match &r.polarization {
        picard::analysis::Polarization::Found { class } => format!(
            "polarization: found (A = {:?}, B = {:?}, C = {:?})\n",
            fmt_mat(&class.a),
            fmt_mat(&class.b),
            fmt_mat(&class.c)
        ),
        picard::analysis::Polarization::Unknown { reason } => format!("polarization: unknown ({reason})\n"),
    };
    s + &format!("input sha256 {}\n", doc.provenance.input_sha256)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
