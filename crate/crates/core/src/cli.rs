//! Command-line surface of the `cleanring` binary.
//!
//! Exit codes: 0 on success or full agreement, 1 when a verification finds an
//! unexpected divergence, 2 on usage or input errors.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{self, coprime_part, ensure_prime};
use crate::decide::{self, Clause, Decision, Derived, GroupSpec, StarClean};
use crate::error::{Error, Result};
use crate::numberfield::{self, FieldSpec};
use crate::oracle::{self, DegreeMultiset, DivisorRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DIVERGENCE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const CSV_HEADER: &str = "field_kind,field_param,p,f,exponent,clean,star_clean,clause";

#[derive(Debug, Parser)]
#[command(name = "cleanring", version, about = "Clean and *-clean group rings over localized rings of integers")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide a single (field, prime, group) triple and print JSON.
    Decide(DecideArgs),
    /// Compare the closed-form verdicts with the divisor-criterion oracle over a grid.
    Verify(VerifyArgs),
    /// Write closed-form verdicts for every grid point to a file.
    Sweep(SweepArgs),
    /// Irreducible-factor degrees of x^n - 1 over the field with p^f elements.
    FactorDegrees(FactorArgs),
}

fn parse_field(s: &str) -> std::result::Result<FieldSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("g").required(true).args(["group", "exponent"]))]
struct DecideArgs {
    /// cyclo:<n> or quad:<d>
    #[arg(long, value_parser = parse_field, allow_hyphen_values = true)]
    field: FieldSpec,
    #[arg(long)]
    prime: u64,
    /// Comma-separated invariant factors.
    #[arg(long, value_delimiter = ',')]
    group: Option<Vec<u64>>,
    /// Group exponent, standing in for a cyclic group of that order.
    #[arg(long)]
    exponent: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Cyclo,
    Quad,
}

/// Grid bounds shared by `verify` and `sweep`.
#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepConfig {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Largest n (cyclotomic) or |d| (quadratic).
    #[arg(long)]
    pub field_max: u64,
    #[arg(long)]
    pub p_max: u64,
    #[arg(long)]
    pub e_max: u64,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    grid: SweepConfig,
    /// Also write the full report as JSON.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    grid: SweepConfig,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Args)]
struct FactorArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    p: u64,
    /// Residue degree; factors over the field with p^f elements.
    #[arg(long, default_value_t = 1)]
    f: u32,
    #[arg(long)]
    json: bool,
}

/// The object printed by `decide`; also the element type of JSON sweeps.
#[derive(Debug, Clone, Serialize)]
pub struct DecideRecord {
    pub field: FieldSpec,
    pub prime: u64,
    pub residue_degree: u32,
    /// The norm of the prime is `prime^norm_is_power`.
    pub norm_is_power: u32,
    pub group: Vec<u64>,
    pub group_exponent: u64,
    pub clean: bool,
    pub star_clean: StarClean,
    pub matched_clause: Clause,
    pub derived: Derived,
}

impl DecideRecord {
    pub fn new(decision: Decision, group: &GroupSpec) -> Self {
        DecideRecord {
            field: decision.field,
            prime: decision.prime,
            residue_degree: decision.derived.residue_degree,
            norm_is_power: decision.derived.residue_degree,
            group: group.invariant_factors().to_vec(),
            group_exponent: group.exponent(),
            clean: decision.clean,
            star_clean: decision.star_clean,
            matched_clause: decision.matched_clause,
            derived: decision.derived,
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.field.kind(),
            self.field.param(),
            self.prime,
            self.residue_degree,
            self.group_exponent,
            self.clean,
            self.star_clean.as_str(),
            self.matched_clause
        )
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.field_max == 0 || self.p_max == 0 || self.e_max == 0 {
            return Err(Error::Zero);
        }
        Ok(())
    }

    pub fn fields(&self) -> Vec<FieldSpec> {
        match self.family {
            Family::Cyclo => (1..=self.field_max).map(|n| FieldSpec::Cyclotomic { n }).collect(),
            Family::Quad => {
                let bound = i64::try_from(self.field_max).unwrap_or(i64::MAX);
                (-bound..=bound).filter_map(|d| FieldSpec::quadratic(d).ok()).collect()
            }
        }
    }

    /// Primes up to `p_max`; the smallest prime is always included so that
    /// the all-ones grid is not vacuous.
    pub fn primes(&self) -> Vec<u64> {
        (2..=self.p_max.max(2)).filter(|&p| arith::is_prime(p)).collect()
    }

    /// Grid points in (field, p, exponent) lexicographic order.
    pub fn points(&self) -> Vec<(FieldSpec, u64, u64)> {
        let primes = self.primes();
        let mut out = Vec::new();
        for field in self.fields() {
            for &p in &primes {
                for e in 1..=self.e_max {
                    out.push((field, p, e));
                }
            }
        }
        out
    }
}

/// A known gap between the closed-form statement and the divisor criterion,
/// tolerated by `verify`.
#[derive(Debug, Clone, Serialize)]
pub struct AllowlistEntry {
    pub id: &'static str,
    pub description: &'static str,
    pub hits: usize,
}

fn allowlist() -> Vec<AllowlistEntry> {
    vec![AllowlistEntry {
        id: "quad-n1-inert",
        description: "quadratic field, discriminant does not divide n, n = 1, p inert",
        hits: 0,
    }]
}

fn allowlist_match(field: &FieldSpec, p: u64, exponent: u64) -> Result<Option<&'static str>> {
    if let FieldSpec::Quadratic { d } = *field {
        if coprime_part(exponent, p) == 1 && numberfield::splitting_symbol(d, p)? == -1 {
            return Ok(Some("quad-n1-inert"));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Serialize)]
pub struct Divergence {
    pub field: FieldSpec,
    pub prime: u64,
    pub exponent: u64,
    pub closed_form_clean: bool,
    pub oracle_clean: bool,
    pub closed_form_star_clean: StarClean,
    pub oracle_star_clean: StarClean,
    pub matched_clause: Clause,
    pub derived: Derived,
    pub allowlisted: Option<&'static str>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub config: SweepConfig,
    pub total: usize,
    pub agreements: usize,
    pub divergences: Vec<Divergence>,
    pub allowlist: Vec<AllowlistEntry>,
}

impl VerifyReport {
    pub fn unexpected(&self) -> usize {
        self.divergences.iter().filter(|d| d.allowlisted.is_none()).count()
    }

    pub fn exit_code(&self) -> i32 {
        if self.unexpected() == 0 {
            EXIT_OK
        } else {
            EXIT_DIVERGENCE
        }
    }

    pub fn summary(&self) -> String {
        let c = &self.config;
        let mut s = format!(
            "verify {:?} field<={} p<={} e<={}\ncases: {}  agreements: {}  divergences: {} (allowlisted {}, unexpected {})\nallowlist:\n",
            c.family,
            c.field_max,
            c.p_max,
            c.e_max,
            self.total,
            self.agreements,
            self.divergences.len(),
            self.divergences.len() - self.unexpected(),
            self.unexpected()
        );
        for a in &self.allowlist {
            s.push_str(&format!("  {}  hits={}  ({})\n", a.id, a.hits, a.description));
        }
        for d in self.divergences.iter().take(20) {
            s.push_str(&format!(
                "  DIVERGENCE {} p={} e={}: closed form clean={} star={} / oracle clean={} star={} [{}]{}\n",
                d.field,
                d.prime,
                d.exponent,
                d.closed_form_clean,
                d.closed_form_star_clean.as_str(),
                d.oracle_clean,
                d.oracle_star_clean.as_str(),
                d.matched_clause,
                d.allowlisted.map(|a| format!(" allowlisted:{a}")).unwrap_or_default()
            ));
        }
        s.push_str(if self.unexpected() == 0 { "result: PASS\n" } else { "result: FAIL\n" });
        s
    }
}

/// Runs the closed form against the oracle on every grid point.
pub fn verify(config: &SweepConfig) -> Result<VerifyReport> {
    config.validate()?;
    let points = config.points();
    let checked: Vec<Option<Divergence>> = points
        .par_iter()
        .map(|&(field, p, e)| -> Result<Option<Divergence>> {
            let dec = decide::decide_exponent(&field, p, e)?;
            let oracle_clean = oracle::oracle_clean(&field, p, e)?;
            let oracle_star = oracle::oracle_star_clean(&field, p, e)?;
            if dec.clean == oracle_clean && dec.star_clean == oracle_star {
                return Ok(None);
            }
            Ok(Some(Divergence {
                field,
                prime: p,
                exponent: e,
                closed_form_clean: dec.clean,
                oracle_clean,
                closed_form_star_clean: dec.star_clean,
                oracle_star_clean: oracle_star,
                matched_clause: dec.matched_clause,
                derived: dec.derived,
                allowlisted: allowlist_match(&field, p, e)?,
            }))
        })
        .collect::<Result<_>>()?;
    let divergences: Vec<Divergence> = checked.into_iter().flatten().collect();
    let mut allow = allowlist();
    for a in &mut allow {
        a.hits = divergences.iter().filter(|d| d.allowlisted == Some(a.id)).count();
    }
    Ok(VerifyReport {
        config: config.clone(),
        total: points.len(),
        agreements: points.len() - divergences.len(),
        divergences,
        allowlist: allow,
    })
}

/// Closed-form verdicts on every grid point.
pub fn sweep(config: &SweepConfig) -> Result<Vec<DecideRecord>> {
    config.validate()?;
    config
        .points()
        .par_iter()
        .map(|&(field, p, e)| {
            let group = GroupSpec::from_exponent(e)?;
            Ok(DecideRecord::new(decide::decide(&field, p, &group)?, &group))
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorDegreesReport {
    pub n: u64,
    pub p: u64,
    pub f: u32,
    pub divisors: Vec<DivisorRow>,
    pub cosets: DegreeMultiset,
    pub ddf_base: DegreeMultiset,
    pub ddf_lifted: DegreeMultiset,
    pub agree: bool,
}

pub fn factor_degrees(n: u64, p: u64, f: u32) -> Result<FactorDegreesReport> {
    ensure_prime(p)?;
    if n == 0 || f == 0 {
        return Err(Error::Zero);
    }
    if n % p == 0 {
        return Err(Error::PrimeDivides { p, n });
    }
    let q_mod = arith::pow_mod(p, f as u64, n);
    let divisors = oracle::divisor_breakdown(n, q_mod)?;
    let cosets = oracle::cosets_from_residue(n, q_mod)?;
    let ddf_base = oracle::factor_degrees_ddf(n, p)?;
    let ddf_lifted = oracle::lift_degrees(&ddf_base, f as u64);
    Ok(FactorDegreesReport {
        n,
        p,
        f,
        divisors,
        agree: cosets == ddf_lifted,
        cosets,
        ddf_base,
        ddf_lifted,
    })
}

fn write_sweep(records: &[DecideRecord], args: &SweepArgs) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(&args.out)?);
    match args.format {
        Format::Csv => {
            writeln!(w, "{CSV_HEADER}")?;
            for r in records {
                writeln!(w, "{}", r.csv_row())?;
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, records)?;
            writeln!(w)?;
        }
    }
    w.flush()
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Input(#[from] Error),
    #[error("{0}")]
    Io(String),
}

fn io_err(context: &str, path: &std::path::Path, e: io::Error) -> CliError {
    CliError::Io(format!("{context} {}: {e}", path.display()))
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> std::result::Result<i32, CliError> {
    match command {
        Command::Decide(args) => {
            ensure_prime(args.prime)?;
            let group = match (args.group, args.exponent) {
                (Some(factors), _) => GroupSpec::new(factors)?,
                (None, Some(e)) => GroupSpec::from_exponent(e)?,
                (None, None) => unreachable!("clap enforces one of --group/--exponent"),
            };
            let decision = decide::decide(&args.field, args.prime, &group)?;
            let record = DecideRecord::new(decision, &group);
            let text = serde_json::to_string_pretty(&record).expect("record serializes");
            writeln!(out, "{text}").map_err(|e| CliError::Io(e.to_string()))?;
            Ok(EXIT_OK)
        }
        Command::Verify(args) => {
            let report = verify(&args.grid)?;
            write!(out, "{}", report.summary()).map_err(|e| CliError::Io(e.to_string()))?;
            if let Some(path) = &args.report {
                let file = File::create(path).map_err(|e| io_err("cannot write", path, e))?;
                serde_json::to_writer_pretty(BufWriter::new(file), &report)
                    .map_err(|e| CliError::Io(e.to_string()))?;
            }
            Ok(report.exit_code())
        }
        Command::Sweep(args) => {
            let records = sweep(&args.grid)?;
            write_sweep(&records, &args).map_err(|e| io_err("cannot write", &args.out, e))?;
            writeln!(out, "wrote {} rows to {}", records.len(), args.out.display())
                .map_err(|e| CliError::Io(e.to_string()))?;
            Ok(EXIT_OK)
        }
        Command::FactorDegrees(args) => {
            let report = factor_degrees(args.n, args.p, args.f)?;
            let text = if args.json {
                serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
            } else {
                render_factor_table(&report)
            };
            write!(out, "{text}").map_err(|e| CliError::Io(e.to_string()))?;
            if report.agree {
                Ok(EXIT_OK)
            } else {
                let _ = writeln!(
                    err,
                    "DISAGREEMENT: cosets {} vs distinct-degree {}",
                    report.cosets, report.ddf_lifted
                );
                Ok(EXIT_DIVERGENCE)
            }
        }
    }
}

fn render_factor_table(r: &FactorDegreesReport) -> String {
    let mut s = format!("x^{} - 1 over F_{}^{}\n", r.n, r.p, r.f);
    s.push_str(&format!("{:>8} {:>8} {:>8} {:>8}\n", "m", "phi(m)", "ord_m(q)", "count"));
    for row in &r.divisors {
        s.push_str(&format!("{:>8} {:>8} {:>8} {:>8}\n", row.m, row.phi, row.order, row.count));
    }
    s.push_str(&format!("cosets:          {}\n", r.cosets));
    s.push_str(&format!("distinct-degree: {} (over F_{}: {})\n", r.ddf_lifted, r.p, r.ddf_base));
    s.push_str(if r.agree { "agreement: yes\n" } else { "agreement: NO\n" });
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("cleanring").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn decide_is_byte_stable() {
        let args = ["decide", "--field", "cyclo:7", "--prime", "23", "--group", "3,49"];
        let (c1, a, _) = run_capture(&args);
        let (c2, b, _) = run_capture(&args);
        assert_eq!((c1, c2), (0, 0));
        assert_eq!(a, b);
        let keys: Vec<_> = [
            "\"field\"",
            "\"prime\"",
            "\"residue_degree\"",
            "\"norm_is_power\"",
            "\"group\"",
            "\"group_exponent\"",
            "\"clean\"",
            "\"star_clean\"",
            "\"matched_clause\"",
            "\"derived\"",
        ]
        .iter()
        .map(|k| a.find(k).unwrap())
        .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]), "{a}");
    }

    #[test]
    fn usage_errors_exit_two() {
        for args in [
            vec!["decide", "--field", "quad:8", "--prime", "3", "--exponent", "8"],
            vec!["decide", "--field", "cyclo:7", "--prime", "21", "--exponent", "3"],
            vec!["decide", "--field", "cyclo:7", "--prime", "23"],
            vec!["decide", "--field", "cyclo:7", "--prime", "23", "--group", "3,x"],
            vec!["decide", "--field", "cyclo:7", "--prime", "23", "--group", "0"],
            vec!["verify", "--family", "cyclo", "--field-max", "0", "--p-max", "5", "--e-max", "5"],
            vec!["factor-degrees", "--n", "10", "--p", "5"],
            vec!["bogus"],
        ] {
            let (code, _, err) = run_capture(&args);
            assert_eq!(code, 2, "{args:?}");
            assert!(!err.is_empty());
        }
    }

    #[test]
    fn tiny_verify_grids() {
        let cfg = SweepConfig { family: Family::Cyclo, field_max: 1, p_max: 1, e_max: 1 };
        let r = verify(&cfg).unwrap();
        assert_eq!((r.total, r.agreements), (1, 1));
        assert_eq!(r.allowlist.len(), 1);
        let cfg = SweepConfig { family: Family::Quad, field_max: 1, p_max: 1, e_max: 1 };
        let r = verify(&cfg).unwrap();
        assert_eq!((r.total, r.agreements), (1, 1));
    }

    #[test]
    fn sweep_rows_match_single_decisions() {
        let cfg = SweepConfig { family: Family::Quad, field_max: 5, p_max: 20, e_max: 12 };
        for r in sweep(&cfg).unwrap() {
            let group = GroupSpec::from_exponent(r.group_exponent).unwrap();
            let single = DecideRecord::new(decide::decide(&r.field, r.prime, &group).unwrap(), &group);
            assert_eq!(r.csv_row(), single.csv_row());
        }
    }

    #[test]
    fn factor_degrees_report() {
        let r = factor_degrees(7, 2, 1).unwrap();
        assert_eq!(r.cosets.to_string(), "{1:1, 3:2}");
        assert!(r.agree);
        assert_eq!(factor_degrees(3, 7, 1).unwrap().cosets.to_string(), "{1:3}");
        assert_eq!(factor_degrees(1, 5, 1).unwrap().ddf_lifted.to_string(), "{1:1}");
        let r = factor_degrees(7, 2, 3).unwrap();
        assert_eq!(r.cosets.to_string(), "{1:7}");
        assert!(r.agree);
    }
}
