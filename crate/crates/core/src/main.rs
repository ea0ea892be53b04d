use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use modclass::classify::{
    classify_matrix_family, projective_free_check, report_table, verify_implication_chain, FieldKind,
};
use modclass::corpus::{builtin_rings, corpus_specs, corrupted_ring};
use modclass::decompose::Decomposer;
use modclass::ideal::{is_local, is_simple_ring, jacobson_radical, nilpotency_index, quotient_ring_with_projection};
use modclass::module::FiniteModule;
use modclass::pp::{pp_evaluate, PPFormula};
use modclass::ring::{build_ring_with, StructConstFile};
use modclass::suite::check_paper;
use modclass::{Caps, Error, FiniteRing};

#[derive(Parser)]
#[command(name = "modclass", version, about = "Classify finite rings by the behaviour of their free, projective and flat modules")]
struct Cli {
    #[command(flatten)]
    caps: CapArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CapArgs {
    /// Largest ring carrier (default 4096, or MODCLASS_MAX_SIZE).
    #[arg(long, global = true)]
    max_ring: Option<usize>,
    /// Largest module carrier.
    #[arg(long, global = true)]
    max_module: Option<usize>,
    /// Node budget for homomorphism searches and other enumerations.
    #[arg(long, global = true)]
    max_homs: Option<u64>,
}

impl CapArgs {
    fn caps(&self) -> Caps {
        let mut caps = Caps::from_env();
        if let Some(v) = self.max_ring {
            caps.max_ring = v;
        }
        if let Some(v) = self.max_module {
            caps.max_module = v;
        }
        if let Some(v) = self.max_homs {
            caps.max_homs = v;
        }
        caps
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify one ring or a corpus.
    Classify {
        /// Ring expression, e.g. "M(2,GF(2))".
        spec: Option<String>,
        /// Named corpus instead of a single ring.
        #[arg(long, conflicts_with = "spec")]
        corpus: Option<String>,
        /// JSON output (the default).
        #[arg(long, conflicts_with = "table")]
        json: bool,
        /// Aligned table output.
        #[arg(long)]
        table: bool,
    },
    /// Run every corpus-level consistency check.
    CheckPaper {
        /// Number of randomized search seeds for the Krull-Schmidt check.
        #[arg(long, default_value_t = 3)]
        seeds: u64,
        /// Add a ring from a full-table structure-constant file without
        /// validating it.
        #[arg(long)]
        inject: Vec<PathBuf>,
        /// Add a corrupted copy of Z/6.
        #[arg(long)]
        inject_corrupted: bool,
        #[arg(long)]
        json: bool,
    },
    /// Certificate for the matrix rings M(n, F).
    Certificate {
        #[arg(long)]
        n: usize,
        /// `infinite` or a prime power q <= 9.
        #[arg(long)]
        field: String,
    },
    /// Primitive idempotents and the decomposition of the regular module.
    Decompose {
        spec: String,
        /// Randomized search order.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Jacobson radical and the quotient R/J.
    Radical { spec: String },
    /// Evaluate a pp formula on R^rank.
    Ppval {
        spec: String,
        formula: PathBuf,
        #[arg(long, default_value_t = 1)]
        rank: usize,
    },
}

/// Exit status with a message for standard error.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Size { .. } | Error::Cap { .. } => 3,
            Error::Consistency(_) => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Error::from(e).into()
    }
}

type CmdResult = Result<(), Failure>;

fn print_json(v: &impl serde::Serialize) -> CmdResult {
    emit(&serde_json::to_string_pretty(v)?);
    Ok(())
}

/// Write to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn build(spec: &str, caps: &Caps) -> Result<Arc<FiniteRing>, Failure> {
    Ok(Arc::new(build_ring_with(spec, caps)?))
}

fn classify(spec: Option<String>, corpus: Option<String>, table: bool, caps: &Caps) -> CmdResult {
    let specs = match (&spec, &corpus) {
        (Some(s), None) => vec![s.clone()],
        (None, Some(c)) => corpus_specs(c)?,
        _ => return Err(Error::Argument("give a ring spec or --corpus".into()).into()),
    };
    let mut reports = Vec::new();
    for r in modclass::classify::classify_specs(&specs, caps) {
        reports.push(r?);
    }
    if corpus.is_none() && !table {
        return print_json(&reports[0]);
    }
    let chain = verify_implication_chain(&reports);
    let pf = projective_free_check(&reports);
    if table {
        let mut out = report_table(&reports);
        out.push_str(&format!("meta violations: {}", chain.violations.len() + pf.violations.len()));
        for v in chain.violations.iter().chain(&pf.violations) {
            out.push_str(&format!("\n  {}: {} ({})", v.ring, v.rule, v.detail));
        }
        emit(&out);
        Ok(())
    } else {
        print_json(&json!({ "reports": reports, "implication_chain": chain, "projective_free": pf }))
    }
}

fn check(seeds: u64, inject: Vec<PathBuf>, corrupted: bool, as_json: bool, caps: &Caps) -> CmdResult {
    let mut rings = builtin_rings(caps)?;
    for path in &inject {
        let text = std::fs::read_to_string(path).map_err(Error::from)?;
        let file: StructConstFile = serde_json::from_str(&text)?;
        rings.push(Arc::new(file.build_unchecked(path.display().to_string())?));
    }
    if corrupted {
        rings.push(Arc::new(corrupted_ring()));
    }
    let seeds: Vec<u64> = (1..=seeds).collect();
    let result = check_paper(&rings, &seeds, caps)?;
    if as_json {
        print_json(&result)?;
    } else {
        for c in &result.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            emit(&format!(
                "{status} {:<28} instances={:<6} skipped={:<5} {:.3}s",
                c.name,
                c.instances,
                c.skipped,
                c.elapsed.as_secs_f64()
            ));
            for f in &c.failures {
                emit(&format!("    violation: {f}"));
            }
        }
    }
    if result.passed() {
        Ok(())
    } else {
        let failed: Vec<&str> = result.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        Err(Failure { code: 1, message: format!("violated: {}", failed.join(", ")) })
    }
}

fn certificate(n: usize, field: &str, caps: &Caps) -> CmdResult {
    let field: FieldKind = field.parse()?;
    let fam = classify_matrix_family(n, field, caps)?;
    print_json(&fam.certificate)
}

fn decompose(spec: &str, seed: Option<u64>, caps: &Caps) -> CmdResult {
    let ring = build(spec, caps)?;
    let dec = match seed {
        Some(s) => Decomposer::with_seed(ring.clone(), caps, s)?,
        None => Decomposer::new(ring.clone(), caps)?,
    };
    let d = dec.ring_decomposition();
    let reg = Arc::new(FiniteModule::regular(&ring, caps)?);
    let ks = dec.krull_schmidt(&reg)?;
    let classes: Vec<_> = d
        .classes
        .iter()
        .zip(&d.multiplicities)
        .zip(d.sizes())
        .enumerate()
        .map(|(i, ((c, m), size))| {
            json!({ "class": i, "size": size, "multiplicity": m, "idempotents": c.iter().map(|e| e.0).collect::<Vec<_>>() })
        })
        .collect();
    print_json(&json!({
        "ring": ring.label(),
        "idempotents": d.idempotents.iter().map(|e| e.0).collect::<Vec<_>>(),
        "classes": classes,
        "k": d.k(),
        "regular_signature": ks.signature,
        "regular_signature_text": ks.signature.to_string(),
        "summand_sizes": ks.summands.iter().map(|s| s.module.size()).collect::<Vec<_>>(),
    }))
}

fn radical(spec: &str, caps: &Caps) -> CmdResult {
    let ring = build(spec, caps)?;
    let j = jacobson_radical(&ring)?;
    let q = quotient_ring_with_projection(&ring, &j, caps)?;
    print_json(&json!({
        "ring": ring.label(),
        "radical": j.indices(),
        "generators": j.generators.iter().map(|e| e.0).collect::<Vec<_>>(),
        "radical_size": j.size(),
        "nilpotency_index": nilpotency_index(&ring, &j),
        "quotient_size": q.ring.size(),
        "quotient_simple": is_simple_ring(&q.ring).simple,
        "local": is_local(&ring).local,
    }))
}

fn ppval(spec: &str, path: &PathBuf, rank: usize, caps: &Caps) -> CmdResult {
    let ring = build(spec, caps)?;
    let text = std::fs::read_to_string(path).map_err(Error::from)?;
    let phi: PPFormula = serde_json::from_str(&text).map_err(|e| Error::Argument(format!("{}: {e}", path.display())))?;
    let m = FiniteModule::free(&ring, rank, caps)?;
    let set = pp_evaluate(&m, &phi, caps)?;
    print_json(&json!({
        "ring": ring.label(),
        "module": m.label(),
        "formula": phi,
        "size": set.size(),
        "elements": set.elements,
    }))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let caps = cli.caps.caps();
    let result = match cli.command {
        Command::Classify { spec, corpus, json: _, table } => classify(spec, corpus, table, &caps),
        Command::CheckPaper { seeds, inject, inject_corrupted, json } => check(seeds, inject, inject_corrupted, json, &caps),
        Command::Certificate { n, field } => certificate(n, &field, &caps),
        Command::Decompose { spec, seed } => decompose(&spec, seed, &caps),
        Command::Radical { spec } => radical(&spec, &caps),
        Command::Ppval { spec, formula, rank } => ppval(&spec, &formula, rank, &caps),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
