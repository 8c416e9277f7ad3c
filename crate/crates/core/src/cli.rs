//! Configuration, batch runs, and result files for the `qes` binary.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{QesError, Result};
use crate::model::{derive_constants, CouplingCase, Family, ParticlePair, PotentialSpec};
use crate::oracle::{cross_validate, OracleOptions, OracleReport};
use crate::spectra::{assemble_spectrum, sort_for_output, FormulaVariant, Problem, SpectrumLine};
use crate::wavefn::QuadratureOptions;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_EMPTY: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qes", version, about = "Quasi-exactly-solvable levels of two particles in a magnetic field")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quantized fields, energies and polynomials for every (d, s) cell.
    Solve(RunArgs),
    /// Solve, then check each level against the finite-difference oracle.
    Verify(RunArgs),
    /// Solve over a range of one potential coefficient.
    Scan(RunArgs),
    /// Sample one wavefunction on a radial grid.
    Export(RunArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Use the alternate closed forms where they disagree with the derivation.
    #[arg(long)]
    pub debug_paper_variants: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveFor {
    #[default]
    Field,
    PotentialParam,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub parameter: String,
    pub from: f64,
    pub to: f64,
    #[serde(default)]
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExportConfig {
    pub d: usize,
    pub s: i32,
    pub branch: usize,
    /// Which root when a branch is quantized at several fields.
    #[serde(default)]
    pub root: usize,
    pub rho_min: f64,
    pub rho_max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub pair: ParticlePair,
    pub case: CouplingCase,
    pub potential: PotentialSpec,
    pub d_list: Vec<usize>,
    pub s_list: Vec<i32>,
    pub solve_for: SolveFor,
    pub oracle: OracleOptions,
    pub output: OutputConfig,
    pub scan: Option<ScanConfig>,
    pub export: Option<ExportConfig>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    case: CouplingCase,
    #[serde(default)]
    solve_for: Option<SolveFor>,
    d: OneOrMany<usize>,
    s: OneOrMany<i32>,
    pair: ParticlePair,
    potential: toml::Table,
    #[serde(default)]
    oracle: OracleOptions,
    #[serde(default)]
    output: OutputConfig,
    scan: Option<ScanConfig>,
    export: Option<ExportConfig>,
}

fn number(t: &toml::Table, key: &str, default: Option<f64>) -> Result<f64> {
    let path = format!("potential.{key}");
    match t.get(key) {
        Some(toml::Value::Float(x)) => Ok(*x),
        Some(toml::Value::Integer(i)) => Ok(*i as f64),
        Some(other) => Err(QesError::config(path, format!("expected a number, found {}", other.type_str()))),
        None => default.ok_or_else(|| QesError::config(path, format!("missing required key `{key}`"))),
    }
}

fn parse_potential(t: &toml::Table, pair: &ParticlePair) -> Result<PotentialSpec> {
    let family = t
        .get("family")
        .and_then(|v| v.as_str())
        .ok_or_else(|| QesError::config("potential.family", "missing or not a string (I, II or III)"))?;
    let allowed: &[&str] = match family {
        "I" => &["family", "coulomb", "theta", "k1", "k2"],
        "II" => &["family", "theta", "k2", "k4", "k6"],
        "III" => &["family", "l1", "l2", "l3", "l4", "k2"],
        other => {
            return Err(QesError::config(
                "potential.family",
                format!("unknown family `{other}`, expected I, II or III"),
            ))
        }
    };
    if let Some(k) = t.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(QesError::config(
            format!("potential.{k}"),
            format!("not a coefficient of family {family}"),
        ));
    }
    Ok(match family {
        "I" => PotentialSpec::FamilyI {
            coulomb: number(t, "coulomb", Some(pair.e1 * pair.e2))?,
            theta: number(t, "theta", Some(0.0))?,
            k1: number(t, "k1", None)?,
            k2: number(t, "k2", None)?,
        },
        "II" => PotentialSpec::FamilyII {
            theta: number(t, "theta", Some(0.0))?,
            k2: number(t, "k2", None)?,
            k4: number(t, "k4", None)?,
            k6: number(t, "k6", None)?,
        },
        _ => PotentialSpec::FamilyIII {
            l1: number(t, "l1", None)?,
            l2: number(t, "l2", Some(0.0))?,
            l3: number(t, "l3", None)?,
            l4: number(t, "l4", None)?,
            k2: number(t, "k2", None)?,
        },
    })
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let msg = e.message().to_string();
            let key = msg
                .split('`')
                .nth(1)
                .map_or_else(|| "<document>".to_string(), str::to_string);
            QesError::config(key, msg)
        })?;
        let potential = parse_potential(&raw.potential, &raw.pair)?;
        let d_list = raw.d.into_vec();
        let s_list = raw.s.into_vec();
        if d_list.is_empty() {
            return Err(QesError::config("d", "needs at least one degree"));
        }
        if s_list.is_empty() {
            return Err(QesError::config("s", "needs at least one angular momentum"));
        }
        let solve_for = match (raw.solve_for, potential.family()) {
            (None, Family::III) | (Some(SolveFor::PotentialParam), Family::III) => SolveFor::PotentialParam,
            (Some(SolveFor::Field), Family::III) => {
                return Err(QesError::config(
                    "solve_for",
                    "family III fixes the field by k2 and solves for l2; use potential_param",
                ))
            }
            (Some(SolveFor::PotentialParam), f) => {
                return Err(QesError::config(
                    "solve_for",
                    format!("potential_param is only available for family III, not {}", f.name()),
                ))
            }
            (_, _) => SolveFor::Field,
        };
        if raw.oracle.points < crate::oracle::MIN_POINTS {
            return Err(QesError::config(
                "oracle.points",
                format!("must be at least {}", crate::oracle::MIN_POINTS),
            ));
        }
        if raw.oracle.ladder == 0 {
            return Err(QesError::config("oracle.ladder", "must be at least 1"));
        }
        if let Some(sc) = &raw.scan {
            if potential.get(&sc.parameter).is_none() || sc.parameter == "l2" {
                return Err(QesError::config(
                    "scan.parameter",
                    format!("`{}` is not a free coefficient of family {}", sc.parameter, potential.family().name()),
                ));
            }
        }
        if let Some(ex) = &raw.export {
            if !(ex.rho_min > 0.0 && ex.rho_min < ex.rho_max) || ex.points < 2 {
                return Err(QesError::config(
                    "export",
                    "needs 0 < rho_min < rho_max and at least 2 points",
                ));
            }
        }
        Ok(Self {
            pair: raw.pair,
            case: raw.case,
            potential,
            d_list,
            s_list,
            solve_for,
            oracle: raw.oracle,
            output: raw.output,
            scan: raw.scan,
            export: raw.export,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| QesError::config("--config", format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn problem(&self) -> Problem {
        Problem {
            pair: self.pair,
            case: self.case,
            potential: self.potential,
            d_list: self.d_list.clone(),
            s_list: self.s_list.clone(),
        }
    }
}

/// What a subcommand produced: the exit code, the table for standard output, and the
/// serialized file body.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub table: String,
    pub body: String,
}

fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

mod full_precision {
    use serde::Serializer;

    pub fn f<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::fmt_f(*x))
    }

    pub fn opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_str(&super::fmt_f(*v)),
            None => s.serialize_str(""),
        }
    }
}

/// One CSV row of a spectrum file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRecord {
    pub family: Family,
    pub case: CouplingCase,
    pub d: usize,
    pub s: i32,
    pub branch: usize,
    pub quantized_name: String,
    #[serde(serialize_with = "full_precision::f")]
    pub quantized_value: f64,
    #[serde(rename = "E_rho", serialize_with = "full_precision::f")]
    pub e_rho: f64,
    #[serde(serialize_with = "full_precision::opt")]
    pub nu: Option<f64>,
    #[serde(serialize_with = "full_precision::f")]
    pub mu: f64,
    pub real_branch: bool,
    pub normalizable: bool,
    pub nodes: usize,
    pub poly_coeffs: String,
}

impl SpectrumRecord {
    pub fn from_line(line: &SpectrumLine) -> Self {
        Self {
            family: line.family,
            case: line.case,
            d: line.d,
            s: line.s,
            branch: line.branch,
            quantized_name: line.quantized_name.clone(),
            quantized_value: line.quantized_value,
            e_rho: line.e_rho,
            nu: line.nu,
            mu: line.mu,
            real_branch: line.flags.real_branch,
            normalizable: line.flags.normalizable,
            nodes: line.flags.nodes,
            poly_coeffs: line.poly.iter().map(|c| fmt_f(*c)).collect::<Vec<_>>().join(";"),
        }
    }

    pub fn poly(&self) -> Result<Vec<f64>> {
        if self.poly_coeffs.is_empty() {
            return Ok(Vec::new());
        }
        self.poly_coeffs
            .split(';')
            .map(|c| c.parse().map_err(|e| QesError::Numerical(format!("bad coefficient `{c}`: {e}"))))
            .collect()
    }
}

fn csv_string<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| QesError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| QesError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| QesError::Io(e.to_string()))
}

pub fn spectrum_csv(lines: &[SpectrumLine]) -> Result<String> {
    let rows: Vec<SpectrumRecord> = lines.iter().map(SpectrumRecord::from_line).collect();
    csv_string(&rows)
}

pub fn parse_spectrum_csv(text: &str) -> Result<Vec<SpectrumRecord>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<std::result::Result<Vec<SpectrumRecord>, _>>()
        .map_err(|e| QesError::Io(format!("spectrum csv: {e}")))
}

pub fn spectrum_json(lines: &[SpectrumLine]) -> Result<String> {
    serde_json::to_string_pretty(lines).map_err(|e| QesError::Io(e.to_string()))
}

pub fn parse_spectrum_json(text: &str) -> Result<Vec<SpectrumLine>> {
    serde_json::from_str(text).map_err(|e| QesError::Io(format!("spectrum json: {e}")))
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, body: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(body.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| QesError::Io(e.to_string()))?;
    Ok(())
}

fn variant(args: &RunArgs) -> FormulaVariant {
    if args.debug_paper_variants {
        FormulaVariant::Alternate
    } else {
        FormulaVariant::Derived
    }
}

fn spectrum_table(lines: &[SpectrumLine]) -> String {
    let mut t = String::new();
    let _ = writeln!(
        t,
        "{:<4}{:<9}{:>3}{:>4}{:>4}  {:<8}{:>24}{:>24}{:>6}",
        "fam", "case", "d", "s", "br", "solved", "value", "E_rho", "nodes"
    );
    for l in lines {
        let e = if l.flags.real_branch {
            format!("{:.15e}", l.e_rho)
        } else {
            format!("{:.6e}{:+.2e}i", l.e_rho, l.mu_im)
        };
        let _ = writeln!(
            t,
            "{:<4}{:<9}{:>3}{:>4}{:>4}  {:<8}{:>24.15e}{:>24}{:>6}",
            l.family.name(),
            l.case.name(),
            l.d,
            l.s,
            l.branch,
            l.quantized_name,
            l.quantized_value,
            e,
            l.flags.nodes
        );
    }
    t
}

fn solve_lines(cfg: &RunConfig, variant: FormulaVariant) -> Result<Vec<SpectrumLine>> {
    let report = assemble_spectrum(&cfg.problem(), variant)?;
    for f in &report.failures {
        log::warn!("cell d = {}, s = {}: {}", f.d, f.s, f.error);
    }
    if report.lines.is_empty() {
        if let Some(f) = report.failures.first() {
            return Err(f.error.clone());
        }
    }
    let mut lines = report.lines;
    sort_for_output(&mut lines);
    Ok(lines)
}

pub fn run_solve(cfg: &RunConfig, format: Format, variant: FormulaVariant) -> Result<Outcome> {
    let lines = solve_lines(cfg, variant)?;
    let body = match format {
        Format::Csv => spectrum_csv(&lines)?,
        Format::Json => spectrum_json(&lines)?,
    };
    Ok(Outcome {
        code: if lines.is_empty() { EXIT_EMPTY } else { EXIT_OK },
        table: spectrum_table(&lines),
        body,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyStatus {
    Pass,
    Fail,
    Unverified,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyRecord {
    pub family: Family,
    pub case: CouplingCase,
    pub d: usize,
    pub s: i32,
    pub branch: usize,
    pub quantized_name: String,
    #[serde(serialize_with = "full_precision::f")]
    pub quantized_value: f64,
    #[serde(rename = "E_rho", serialize_with = "full_precision::f")]
    pub e_rho: f64,
    #[serde(rename = "oracle_E", serialize_with = "full_precision::opt")]
    pub oracle_e: Option<f64>,
    #[serde(rename = "delta_E", serialize_with = "full_precision::opt")]
    pub delta_e: Option<f64>,
    #[serde(serialize_with = "full_precision::opt")]
    pub relative_gap: Option<f64>,
    #[serde(serialize_with = "full_precision::opt")]
    pub residual: Option<f64>,
    #[serde(serialize_with = "full_precision::opt")]
    pub order: Option<f64>,
    pub status: VerifyStatus,
    pub note: String,
}

fn verify_record(line: &SpectrumLine, report: Option<&OracleReport>, status: VerifyStatus, note: String) -> VerifyRecord {
    let m = report.and_then(|r| r.matched_line);
    VerifyRecord {
        family: line.family,
        case: line.case,
        d: line.d,
        s: line.s,
        branch: line.branch,
        quantized_name: line.quantized_name.clone(),
        quantized_value: line.quantized_value,
        e_rho: line.e_rho,
        oracle_e: m.map(|m| m.oracle_energy),
        delta_e: m.map(|m| m.delta),
        relative_gap: m.map(|m| m.relative),
        residual: report.map(|r| r.residual_max),
        order: report.and_then(|r| r.grid_convergence).and_then(|g| g.order),
        status,
        note,
    }
}

pub fn verify_lines(lines: &[SpectrumLine], opts: &OracleOptions) -> Vec<VerifyRecord> {
    use rayon::prelude::*;
    lines
        .par_iter()
        .map(|line| {
            if !opts.enabled {
                return verify_record(line, None, VerifyStatus::Unverified, "oracle disabled".into());
            }
            if !line.flags.real_branch || !line.flags.normalizable {
                let why = if line.flags.real_branch { "not normalizable" } else { "complex branch" };
                return verify_record(line, None, VerifyStatus::Skipped, why.into());
            }
            match cross_validate(line, opts) {
                Ok(r) => {
                    let status = if r.pass { VerifyStatus::Pass } else { VerifyStatus::Fail };
                    let note = r.note.clone().unwrap_or_default();
                    verify_record(line, Some(&r), status, note)
                }
                Err(e) => verify_record(line, None, VerifyStatus::Fail, e.to_string()),
            }
        })
        .collect()
}

pub fn run_verify(cfg: &RunConfig, format: Format, variant: FormulaVariant) -> Result<Outcome> {
    let lines = solve_lines(cfg, variant)?;
    let records = verify_lines(&lines, &cfg.oracle);
    let mut table = String::new();
    let _ = writeln!(
        table,
        "{:<4}{:>3}{:>4}{:>4}{:>24}{:>12}{:>12}{:>12}  status",
        "fam", "d", "s", "br", "E_rho", "rel_gap", "residual", "order"
    );
    let opt = |x: Option<f64>, p: usize| x.map_or_else(|| "-".to_string(), |v| format!("{v:.p$e}"));
    for r in &records {
        let _ = writeln!(
            table,
            "{:<4}{:>3}{:>4}{:>4}{:>24.15e}{:>12}{:>12}{:>12}  {:?} {}",
            r.family.name(),
            r.d,
            r.s,
            r.branch,
            r.e_rho,
            opt(r.relative_gap, 2),
            opt(r.residual, 2),
            r.order.map_or_else(|| "-".to_string(), |o| format!("{o:.3}")),
            r.status,
            r.note
        );
    }
    let failed = records.iter().any(|r| r.status == VerifyStatus::Fail);
    let body = match format {
        Format::Csv => csv_string(&records)?,
        Format::Json => serde_json::to_string_pretty(&records).map_err(|e| QesError::Io(e.to_string()))?,
    };
    let code = if lines.is_empty() {
        EXIT_EMPTY
    } else if failed {
        EXIT_ERROR
    } else {
        EXIT_OK
    };
    Ok(Outcome { code, table, body })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub parameter: String,
    #[serde(serialize_with = "full_precision::f")]
    pub value: f64,
    pub family: Family,
    pub case: CouplingCase,
    pub d: usize,
    pub s: i32,
    pub branch: usize,
    pub quantized_name: String,
    #[serde(serialize_with = "full_precision::opt")]
    pub quantized_value: Option<f64>,
    #[serde(rename = "E_rho", serialize_with = "full_precision::opt")]
    pub e_rho: Option<f64>,
}

pub fn scan_values(sc: &ScanConfig) -> Vec<f64> {
    if sc.steps == 0 {
        return vec![sc.from];
    }
    (0..=sc.steps)
        .map(|i| sc.from + (sc.to - sc.from) * i as f64 / sc.steps as f64)
        .collect()
}

pub fn run_scan(cfg: &RunConfig, format: Format, variant: FormulaVariant) -> Result<Outcome> {
    let sc = cfg
        .scan
        .as_ref()
        .ok_or_else(|| QesError::config("scan", "missing [scan] section"))?;
    let name = match cfg.solve_for {
        SolveFor::Field => cfg.case.field_name(),
        SolveFor::PotentialParam => "l2",
    };
    let mut rows = Vec::new();
    for value in scan_values(sc) {
        let potential = cfg.potential.with(&sc.parameter, value).expect("validated parameter");
        let scfg = RunConfig {
            potential,
            ..cfg.clone()
        };
        let lines = match solve_lines(&scfg, variant) {
            Ok(l) => l,
            Err(e) => {
                log::warn!("{} = {value}: {e}", sc.parameter);
                Vec::new()
            }
        };
        for &d in &cfg.d_list {
            for &s in &cfg.s_list {
                for branch in 0..=d {
                    let hits: Vec<&SpectrumLine> = lines
                        .iter()
                        .filter(|l| l.d == d && l.s == s && l.branch == branch)
                        .collect();
                    let base = ScanRecord {
                        parameter: sc.parameter.clone(),
                        value,
                        family: potential.family(),
                        case: cfg.case,
                        d,
                        s,
                        branch,
                        quantized_name: name.to_string(),
                        quantized_value: None,
                        e_rho: None,
                    };
                    if hits.is_empty() {
                        rows.push(base.clone());
                    }
                    for l in hits {
                        rows.push(ScanRecord {
                            quantized_value: Some(l.quantized_value),
                            e_rho: l.flags.real_branch.then_some(l.e_rho),
                            ..base.clone()
                        });
                    }
                }
            }
        }
    }
    let mut table = String::new();
    for r in &rows {
        let _ = writeln!(
            table,
            "{} = {:<12.6e} d={} s={} br={}  {} = {}  E = {}",
            r.parameter,
            r.value,
            r.d,
            r.s,
            r.branch,
            r.quantized_name,
            r.quantized_value.map_or_else(|| "-".into(), |x| format!("{x:.15e}")),
            r.e_rho.map_or_else(|| "-".into(), |x| format!("{x:.15e}"))
        );
    }
    let body = match format {
        Format::Csv => csv_string(&rows)?,
        Format::Json => serde_json::to_string_pretty(&rows).map_err(|e| QesError::Io(e.to_string()))?,
    };
    let any = rows.iter().any(|r| r.quantized_value.is_some());
    Ok(Outcome {
        code: if any { EXIT_OK } else { EXIT_EMPTY },
        table,
        body,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WavefunctionSample {
    #[serde(serialize_with = "full_precision::f")]
    pub rho: f64,
    #[serde(serialize_with = "full_precision::f")]
    pub zeta: f64,
    #[serde(serialize_with = "full_precision::opt")]
    pub zeta_normalized: Option<f64>,
    /// `ln |zeta|`
    #[serde(serialize_with = "full_precision::f")]
    pub exponent_log: f64,
}

pub fn select_line<'a>(lines: &'a [SpectrumLine], ex: &ExportConfig) -> Result<&'a SpectrumLine> {
    lines
        .iter()
        .filter(|l| l.d == ex.d && l.s == ex.s && l.branch == ex.branch)
        .nth(ex.root)
        .ok_or_else(|| {
            QesError::config(
                "export",
                format!(
                    "no level with d = {}, s = {}, branch = {}, root = {}",
                    ex.d, ex.s, ex.branch, ex.root
                ),
            )
        })
}

pub fn sample_wavefunction(line: &SpectrumLine, ex: &ExportConfig) -> Result<Vec<WavefunctionSample>> {
    if !line.flags.real_branch {
        return Err(QesError::Domain("complex branch has no real wavefunction".into()));
    }
    let wf = line.wavefunction();
    let norm = if line.flags.normalizable {
        Some(wf.normalize(&QuadratureOptions::default())?.norm.expect("norm set"))
    } else {
        None
    };
    let n = ex.points;
    (0..n)
        .map(|i| {
            let rho = ex.rho_min + (ex.rho_max - ex.rho_min) * i as f64 / (n - 1) as f64;
            let z = wf.evaluate_zeta(rho)?;
            let zeta_normalized = norm.map(|nm| {
                if z.in_log_space {
                    z.sign * (z.log_abs - nm.ln()).exp()
                } else {
                    z.value / nm
                }
            });
            Ok(WavefunctionSample {
                rho,
                zeta: z.value,
                zeta_normalized,
                exponent_log: z.log_abs,
            })
        })
        .collect()
}

pub fn run_export(cfg: &RunConfig, format: Format, variant: FormulaVariant) -> Result<Outcome> {
    let ex = cfg
        .export
        .as_ref()
        .ok_or_else(|| QesError::config("export", "missing [export] section"))?;
    let lines = solve_lines(cfg, variant)?;
    let line = select_line(&lines, ex)?;
    let samples = sample_wavefunction(line, ex)?;
    let body = match format {
        Format::Csv => csv_string(&samples)?,
        Format::Json => serde_json::to_string_pretty(&samples).map_err(|e| QesError::Io(e.to_string()))?,
    };
    let table = format!(
        "family {} d = {} s = {} branch {}: {} = {:.15e}, E_rho = {:.15e}, {} samples\n",
        line.family.name(),
        line.d,
        line.s,
        line.branch,
        line.quantized_name,
        line.quantized_value,
        line.e_rho,
        samples.len()
    );
    Ok(Outcome {
        code: EXIT_OK,
        table,
        body,
    })
}

/// Runs one subcommand, writing the result file if a path is configured.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let (args, f): (&RunArgs, fn(&RunConfig, Format, FormulaVariant) -> Result<Outcome>) = match &cli.command {
        Command::Solve(a) => (a, run_solve),
        Command::Verify(a) => (a, run_verify),
        Command::Scan(a) => (a, run_scan),
        Command::Export(a) => (a, run_export),
    };
    if let Some(j) = args.jobs {
        if j == 0 {
            return Err(QesError::config("--jobs", "must be at least 1"));
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            log::debug!("thread pool already set: {e}");
        }
    }
    let cfg = RunConfig::load(&args.config)?;
    derive_constants(&cfg.pair)?;
    let format = args.format.unwrap_or(cfg.output.format);
    let out = f(&cfg, format, variant(args))?;
    if let Some(path) = args.out.as_ref().or(cfg.output.path.as_ref()) {
        write_atomic(path, &out.body)?;
    }
    Ok(out)
}
