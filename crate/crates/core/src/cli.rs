//! Command-line frontend. [`run`] returns the process exit code:
//! 0 success, 1 verification or membership failure, 2 usage error,
//! 3 invalid parameters.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use crate::families::{self, FamilyId, FamilyParams};
use crate::gf::FieldCtx;
use crate::numthy::PrimePower;
use crate::oracle::{self, VerifyOptions, VerifyReport};
use crate::pgu::{classify, is_unitary, GramForm, Model, ProjMatrix};
use crate::spectrum::{check_table1, compute_spectrum};
use crate::Error;

/// Largest `q^2` for which `verify` builds a field and closes groups.
pub const VERIFY_FIELD_BUDGET: u64 = 1024;

#[derive(Parser, Debug)]
#[command(
    name = "hermgen",
    version,
    about = "Genera of quotients of the Hermitian curve"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// All genera reached by the families at q, with witnesses.
    Spectrum(SpectrumArgs),
    /// Genus and group order of one parameter tuple.
    Genus(GenusArgs),
    /// Close each family's group and compare with the closed forms.
    Verify(VerifyArgs),
    /// Type, order and different contribution of a matrix.
    Classify(ClassifyArgs),
    /// Valid parameter tuples of a family.
    Enumerate(EnumerateArgs),
    /// Membership of the tabulated new genera.
    Table1(Table1Args),
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum Format {
    #[default]
    Table,
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[arg(short, value_parser = parse_q)]
    q: PrimePower,
    /// Comma-separated family ids, or `all`.
    #[arg(long, default_value = "all", value_parser = parse_families)]
    family: Families,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args, Debug)]
struct GenusArgs {
    #[arg(short, value_parser = parse_q)]
    q: PrimePower,
    #[arg(long)]
    family: FamilyId,
    /// `key=value` pairs separated by commas, or a JSON object.
    #[arg(long)]
    params: String,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(short, value_parser = parse_q)]
    q: PrimePower,
    #[arg(long, default_value = "all", value_parser = parse_families)]
    family: Families,
    /// Largest group order to close.
    #[arg(long, default_value_t = oracle::DEFAULT_CAP)]
    budget: usize,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(short, value_parser = parse_q)]
    q: PrimePower,
    /// Hermitian form the matrix must preserve.
    #[arg(long, visible_alias = "gram", default_value = "model1")]
    model: Model,
    /// Rows separated by `;`, entries by `,`; entries are `0`, `1`, `g` or `g^k`.
    matrix: String,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(short, value_parser = parse_q)]
    q: PrimePower,
    #[arg(long)]
    family: FamilyId,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args, Debug)]
struct Table1Args {
    #[arg(long, default_value = "all", value_parser = parse_families)]
    family: Families,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Clone, Debug)]
struct Families(Vec<FamilyId>);

fn parse_q(s: &str) -> Result<PrimePower, String> {
    s.parse::<PrimePower>().map_err(|e| match e {
        Error::Domain(m) | Error::Parse(m) => m,
        other => other.to_string(),
    })
}

fn parse_families(s: &str) -> Result<Families, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(Families(FamilyId::ALL.to_vec()));
    }
    let mut out: Vec<FamilyId> = Vec::new();
    for part in s.split(',') {
        let f: FamilyId = part.trim().parse().map_err(|e: Error| e.to_string())?;
        if !out.contains(&f) {
            out.push(f);
        }
    }
    out.sort_by_key(|f| FamilyId::ALL.iter().position(|g| g == f));
    Ok(Families(out))
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, e: impl std::fmt::Display) -> Failure {
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::new(1, e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::new(1, e)
    }
}

type CmdResult = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        pool = pool.num_threads(j.max(1));
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    };
    let mut buf = Vec::new();
    let result = pool.install(|| dispatch(&cli.command, &mut buf));
    if let Err(e) = out.write_all(&buf).and_then(|_| out.flush()) {
        let _ = writeln!(err, "error: {e}");
        return 1;
    }
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: &Command, out: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::Spectrum(a) => cmd_spectrum(a, out),
        Command::Genus(a) => cmd_genus(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Classify(a) => cmd_classify(a, out),
        Command::Enumerate(a) => cmd_enumerate(a, out),
        Command::Table1(a) => cmd_table1(a, out),
    }
}

fn cmd_spectrum(a: &SpectrumArgs, out: &mut dyn Write) -> CmdResult {
    let s = compute_spectrum(&a.q, &a.family.0)?;
    match a.format {
        Format::Json => writeln!(out, "{}", s.to_json())?,
        Format::Csv => s.write_csv(&mut *out)?,
        Format::Table => {
            writeln!(out, "q = {}: {} genera", a.q, s.entries.len())?;
            writeln!(out, "{:>10}  {:>9}  first witness", "genus", "witnesses")?;
            for e in &s.entries {
                let w = &e.witnesses[0];
                writeln!(
                    out,
                    "{:>10}  {:>9}  {} {} |G|={}",
                    e.genus,
                    e.witnesses.len(),
                    w.family(),
                    w.params,
                    w.group_order
                )?;
            }
        }
    }
    Ok(0)
}

fn parse_params(family: FamilyId, s: &str) -> Result<FamilyParams, Failure> {
    let parsed = if s.trim_start().starts_with('{') {
        serde_json::from_str(s)
            .map_err(|e| Error::Parse(format!("bad JSON parameters: {e}")))
            .and_then(|v| FamilyParams::from_json(family, &v))
    } else {
        FamilyParams::parse(family, s)
    };
    parsed.map_err(|e| Failure::new(3, e))
}

fn cmd_genus(a: &GenusArgs, out: &mut dyn Write) -> CmdResult {
    let params = parse_params(a.family, &a.params)?;
    let r = families::genus(&a.q, &params).map_err(|e| match e {
        Error::Domain(_) | Error::Parse(_) => Failure::new(3, e),
        other => Failure::from(other),
    })?;
    match a.format {
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&r).expect("record serializes")
        )?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["q", "family", "params", "genus", "group_order"])
                .map_err(Error::from)?;
            w.write_record([
                a.q.to_string(),
                a.family.name().to_string(),
                params.to_string(),
                r.genus.to_string(),
                r.group_order.to_string(),
            ])
            .map_err(Error::from)?;
            w.flush()?;
        }
        Format::Table => writeln!(
            out,
            "{} {} at q = {}: genus {}, |G| = {}",
            a.family, params, a.q, r.genus, r.group_order
        )?,
    }
    Ok(0)
}

enum Outcome {
    Checked(Box<VerifyReport>),
    Skipped(FamilyParams, String),
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> CmdResult {
    let q = &a.q;
    if q.q() * q.q() > VERIFY_FIELD_BUDGET {
        writeln!(
            out,
            "q = {q}: q^2 = {} exceeds the oracle field budget {VERIFY_FIELD_BUDGET}; all families skipped (formula-only)",
            q.q() * q.q()
        )?;
        return Ok(0);
    }
    let ctx = FieldCtx::for_q(q.q())?;
    let opts = VerifyOptions {
        cap: a.budget,
        ..VerifyOptions::default()
    };
    let mut tuples = Vec::new();
    for &f in &a.family.0 {
        tuples.extend(families::enumerate(q, f)?);
    }
    let outcomes: Vec<Outcome> = tuples
        .into_par_iter()
        .map(|p| match oracle::verify_family(&ctx, &p, opts) {
            Ok(r) => Ok(Outcome::Checked(Box::new(r))),
            Err(Error::Capacity(why)) => Ok(Outcome::Skipped(p, why)),
            Err(e) => Err(e),
        })
        .collect::<Result<_, Error>>()?;
    let checked = outcomes
        .iter()
        .filter(|o| matches!(o, Outcome::Checked(_)))
        .count();
    let failed = outcomes
        .iter()
        .filter(|o| matches!(o, Outcome::Checked(r) if !r.all_ok()))
        .count();
    let skipped = outcomes.len() - checked;
    match a.format {
        Format::Json => {
            let reports: Vec<_> = outcomes
                .iter()
                .map(|o| match o {
                    Outcome::Checked(r) => serde_json::to_value(r).expect("report serializes"),
                    Outcome::Skipped(p, why) => {
                        json!({"family": p.family().name(), "params": p.to_json(), "skipped": why})
                    }
                })
                .collect();
            let doc = json!({"q": q.q(), "checked": checked, "failed": failed, "skipped": skipped, "reports": reports});
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"))?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["q", "family", "params", "status", "order", "genus"])
                .map_err(Error::from)?;
            for o in &outcomes {
                let row = match o {
                    Outcome::Checked(r) => [
                        q.to_string(),
                        r.family.clone(),
                        r.params.clone(),
                        if r.all_ok() { "ok" } else { "FAIL" }.to_string(),
                        r.order.to_string(),
                        r.genus.map(|g| g.to_string()).unwrap_or_default(),
                    ],
                    Outcome::Skipped(p, _) => [
                        q.to_string(),
                        p.family().name().to_string(),
                        p.to_string(),
                        "skipped".to_string(),
                        String::new(),
                        String::new(),
                    ],
                };
                w.write_record(row).map_err(Error::from)?;
            }
            w.flush()?;
        }
        Format::Table => {
            for o in &outcomes {
                match o {
                    Outcome::Checked(r) if r.all_ok() => writeln!(
                        out,
                        "ok    {} {}: |G| = {}, genus {}",
                        r.family, r.params, r.order, r.expected_genus
                    )?,
                    Outcome::Checked(r) => writeln!(
                        out,
                        "FAIL  {} {}: order {}/{} census {} genus {:?}/{} {}",
                        r.family,
                        r.params,
                        r.order,
                        r.expected_order,
                        r.census_ok,
                        r.genus,
                        r.expected_genus,
                        r.notes.join("; ")
                    )?,
                    Outcome::Skipped(p, why) => writeln!(out, "skip  {} {p}: {why}", p.family())?,
                }
            }
            writeln!(
                out,
                "q = {q}: {checked} checked, {failed} failed, {skipped} skipped"
            )?;
        }
    }
    Ok(if failed == 0 { 0 } else { 1 })
}

fn cmd_classify(a: &ClassifyArgs, out: &mut dyn Write) -> CmdResult {
    let ctx = FieldCtx::for_q(a.q.q())?;
    let m = ProjMatrix::parse(&ctx, &a.matrix).map_err(|e| match e {
        Error::Parse(_) => Failure::new(2, e),
        other => Failure::new(3, other),
    })?;
    let gram = GramForm::new(&ctx, a.model);
    if !is_unitary(&ctx, &gram, &m) {
        return Err(Failure::new(
            3,
            format!("{m} does not preserve the {} form", a.model),
        ));
    }
    let c = classify(&ctx, &m).map_err(|e| match e {
        Error::Domain(_) => Failure::new(3, e),
        other => Failure::from(other),
    })?;
    match a.format {
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&c).expect("class serializes")
        )?,
        Format::Csv => {
            writeln!(out, "type,contribution,order")?;
            writeln!(out, "{},{},{}", c.ty, c.contribution, c.order)?;
        }
        Format::Table => writeln!(
            out,
            "type {}, order {}, i = {}, {:?}",
            c.ty, c.order, c.contribution, c.pattern
        )?,
    }
    Ok(0)
}

fn cmd_enumerate(a: &EnumerateArgs, out: &mut dyn Write) -> CmdResult {
    let records: Vec<_> = families::enumerate(&a.q, a.family)?
        .into_par_iter()
        .map(|p| families::genus(&a.q, &p))
        .collect::<Result<_, Error>>()?;
    match a.format {
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&records).expect("records serialize")
        )?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["family", "params", "genus", "group_order"])
                .map_err(Error::from)?;
            for r in &records {
                w.write_record([
                    a.family.name().to_string(),
                    r.params.to_string(),
                    r.genus.to_string(),
                    r.group_order.to_string(),
                ])
                .map_err(Error::from)?;
            }
            w.flush()?;
        }
        Format::Table => {
            for r in &records {
                writeln!(
                    out,
                    "{}  genus {}  |G| = {}",
                    r.params, r.genus, r.group_order
                )?;
            }
            writeln!(
                out,
                "{} tuples for {} at q = {}",
                records.len(),
                a.family,
                a.q
            )?;
        }
    }
    Ok(0)
}

fn cmd_table1(a: &Table1Args, out: &mut dyn Write) -> CmdResult {
    let report = check_table1(&a.family.0)?;
    match a.format {
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        )?,
        Format::Csv => report.write_csv(&mut *out)?,
        Format::Table => {
            for row in &report.rows {
                writeln!(out, "q = {}", row.q)?;
                for v in &row.values {
                    match &v.witness {
                        Some(w) => writeln!(
                            out,
                            "  {:>7}  PRESENT  {} {} |G|={}",
                            v.genus,
                            w.family(),
                            w.params,
                            w.group_order
                        )?,
                        None => writeln!(out, "  {:>7}  ABSENT", v.genus)?,
                    }
                }
            }
            let absent: usize = report
                .rows
                .iter()
                .map(|r| r.values.iter().filter(|v| !v.present).count())
                .sum();
            if absent == 0 {
                writeln!(out, "all values present")?;
            } else {
                writeln!(out, "{absent} values absent")?;
            }
        }
    }
    Ok(if report.all_present() { 0 } else { 1 })
}
