//! Command-line front end.
//!
//! Exit status is 0 on success, 2 for invalid configuration and 1 for
//! numerical-domain or I/O failures. Output goes to stdout unless `--output`
//! is given; relative output paths are resolved under `$NSQUEEZE_OUTPUT_DIR`
//! when that variable is set.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::etastate::{
    eta_state, noon_fidelity, normalization_c_sq, ratio_sq_pair,
    EtaParams, GenerationStats, NoonBasis,
};
use crate::metrics::{
    squeezing_factor_q, squeezing_predictions, weak_limit_q, SensitivityReport,
};
use crate::scan::{
    default_phase_grid, eta_scan, phase_scan, table1, uniform_grid, EtaScanRow, PhaseScanRow,
    Table1Row, DEFAULT_PHASE_INTERVALS, TABLE1_ETAS, TABLE1_PHOTON_NUMBERS,
};
use crate::schwinger::JOperatorSet;

pub const OUTPUT_DIR_ENV: &str = "NSQUEEZE_OUTPUT_DIR";

pub const ETA_SCAN_COLUMNS: [&str; 11] = [
    "eta",
    "j1_mean",
    "dj2_sq",
    "dj3_sq",
    "delta_phi_sq",
    "q",
    "crb",
    "squeeze_ratio",
    "mean_pair_photons",
    "c_n_sq",
    "ratio_sq_pair",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Parsed command line.
#[derive(Debug, Clone, Parser)]
#[command(name = "nsqueeze", version, about = "N-photon squeezed states from coherent light and down-conversion")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,

    /// Output file; stdout when omitted.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Amplitudes and sensitivity metrics of one η-state.
    State(StateArgs),
    /// Metrics over a grid of η values.
    EtaScan(EtaScanArgs),
    /// Output photon-number distributions over a grid of phases.
    PhaseScan(PhaseScanArgs),
    /// Generation-rate gain over pair states, and N dphi^2, for several N and η.
    Table1(Table1Args),
    /// Human-readable summary including the squeezing limits.
    Report(StateArgs),
}

/// Exactly one of `--eta` or the pair `--alpha`/`--gamma`.
#[derive(Debug, Clone, Copy, Args)]
pub struct SourceArgs {
    /// Squeezing parameter eta = N gamma / alpha^2 (fractions such as 1/3 accepted).
    #[arg(long, value_parser = parse_real, conflicts_with_all = ["alpha", "gamma"],
          required_unless_present_all = ["alpha", "gamma"])]
    pub eta: Option<f64>,

    /// Coherent amplitude alpha (real, > 0).
    #[arg(long, value_parser = parse_real, requires = "gamma")]
    pub alpha: Option<f64>,

    /// Down-conversion amplitude gamma (real, in [0, 1)).
    #[arg(long, value_parser = parse_real, requires = "alpha")]
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct StateArgs {
    /// Total photon number N.
    #[arg(long = "n")]
    pub n_total: usize,

    #[command(flatten)]
    pub source: SourceArgs,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct EtaScanArgs {
    #[arg(long = "n")]
    pub n_total: usize,

    #[arg(long, value_parser = parse_real, default_value = "0")]
    pub eta_min: f64,

    #[arg(long, value_parser = parse_real, default_value = "1.5")]
    pub eta_max: f64,

    #[arg(long, value_parser = parse_real, default_value = "0.005")]
    pub eta_step: f64,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct PhaseScanArgs {
    #[arg(long = "n")]
    pub n_total: usize,

    #[command(flatten)]
    pub source: SourceArgs,

    /// Number of equal phase intervals covering [0, 2 pi).
    #[arg(long, default_value_t = DEFAULT_PHASE_INTERVALS)]
    pub intervals: usize,
}

#[derive(Debug, Clone, Args)]
pub struct Table1Args {
    /// Comma-separated η values.
    #[arg(long, value_parser = parse_real, value_delimiter = ',')]
    pub etas: Option<Vec<f64>>,

    /// Comma-separated photon numbers.
    #[arg(long = "ns", value_delimiter = ',')]
    pub photon_numbers: Option<Vec<usize>>,
}

/// Accepts decimals and simple fractions such as `1/3`.
fn parse_real(s: &str) -> Result<f64, String> {
    let value = match s.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|e| format!("{e}"))?;
            let den: f64 = den.trim().parse().map_err(|e| format!("{e}"))?;
            num / den
        }
        None => s.trim().parse().map_err(|e| format!("{e}"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("`{s}` is not a finite number"))
    }
}

#[derive(Debug)]
enum RunError {
    Config(String),
    Numerical(String),
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::TruncationTooLarge { .. }
            | Error::PhotonNumberOutOfRange { .. }
            | Error::InvalidGamma(_)
            | Error::InvalidAlpha(_)
            | Error::InvalidEta { .. } => RunError::Config(e.to_string()),
            _ => RunError::Numerical(e.to_string()),
        }
    }
}

/// Parses `args` (including the program name), executes the command and
/// returns the process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(config) => config,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = write!(sink, "{text}");
            return code;
        }
    };
    let output_dir = std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from);
    match execute(&config, output_dir, stdout) {
        Ok(()) => 0,
        Err(RunError::Config(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        Err(RunError::Numerical(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
    }
}

fn execute(
    config: &RunConfig,
    output_dir: Option<PathBuf>,
    stdout: &mut dyn Write,
) -> Result<(), RunError> {
    let text = render(config)?;
    match &config.output {
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| RunError::Numerical(e.to_string())),
        Some(path) => {
            let path = match output_dir {
                Some(dir) if path.is_relative() => dir.join(path),
                _ => path.clone(),
            };
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)
                    .map_err(|e| RunError::Numerical(format!("{}: {e}", parent.display())))?;
            }
            std::fs::write(&path, text)
                .map_err(|e| RunError::Numerical(format!("{}: {e}", path.display())))
        }
    }
}

/// Produces the full output document for a configuration.
fn render(config: &RunConfig) -> Result<String, RunError> {
    match &config.command {
        Command::State(args) => render_state(args, config.format),
        Command::EtaScan(args) => render_eta_scan(args, config.format),
        Command::PhaseScan(args) => render_phase_scan(args, config.format),
        Command::Table1(args) => render_table1(args, config.format),
        Command::Report(args) => render_report(args),
    }
}

/// Resolved state source.
#[derive(Debug, Clone, Copy)]
struct Source {
    params: EtaParams,
    alpha: Option<f64>,
    gamma: Option<f64>,
}

fn resolve_source(n_total: usize, source: &SourceArgs) -> Result<Source, RunError> {
    let params = match (source.eta, source.alpha, source.gamma) {
        (Some(eta), None, None) => EtaParams::new(n_total, eta)?,
        (None, Some(alpha), Some(gamma)) => EtaParams::from_inputs(alpha, gamma, n_total)?,
        _ => {
            return Err(RunError::Config(
                "give either --eta or both --alpha and --gamma".into(),
            ))
        }
    };
    Ok(Source {
        params,
        alpha: source.alpha,
        gamma: source.gamma,
    })
}

fn check_photon_number(n_total: usize) -> Result<JOperatorSet, RunError> {
    Ok(JOperatorSet::new(n_total)?)
}

fn warnings_for(etas: &[f64]) -> Vec<&'static str> {
    if etas.iter().any(|&e| e > 1.0) {
        vec!["eta > 1: the linear J2 phase estimator is no longer optimal for these states"]
    } else {
        Vec::new()
    }
}

fn meta(command: &str, inputs: Value, grid: Value, warnings: Vec<&'static str>) -> Value {
    json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "inputs": inputs,
        "grid": grid,
        "warnings": warnings,
    })
}

fn to_json(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// `%.12g`-style formatting: 12 significant digits, trailing zeros removed,
/// exponent notation outside `1e-4 <= |x| < 1e12`.
pub fn format_sig12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..12).contains(&exp) {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (11 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn csv_opt(x: Option<f64>) -> String {
    x.map(format_sig12).unwrap_or_default()
}

fn csv_line(out: &mut String, fields: &[String]) {
    out.push_str(&fields.join(","));
    out.push('\n');
}

fn eta_row_fields(r: &EtaScanRow) -> Vec<String> {
    vec![
        format_sig12(r.eta),
        format_sig12(r.j1_mean),
        format_sig12(r.dj2_sq),
        format_sig12(r.dj3_sq),
        format_sig12(r.delta_phi_sq),
        csv_opt(r.q),
        format_sig12(r.crb),
        format_sig12(r.squeeze_ratio),
        format_sig12(r.mean_pair_photons),
        format_sig12(r.c_n_sq),
        csv_opt(r.ratio_sq_pair),
    ]
}

fn eta_scan_csv(rows: &[EtaScanRow]) -> String {
    let mut out = String::new();
    csv_line(&mut out, &ETA_SCAN_COLUMNS.map(String::from));
    for r in rows {
        csv_line(&mut out, &eta_row_fields(r));
    }
    out
}

fn source_inputs(n_total: usize, source: &Source) -> Value {
    json!({
        "n_total": n_total,
        "eta": source.params.eta,
        "alpha": source.alpha,
        "gamma": source.gamma,
    })
}

fn render_state(args: &StateArgs, format: Format) -> Result<String, RunError> {
    let ops = check_photon_number(args.n_total)?;
    let source = resolve_source(args.n_total, &args.source)?;
    let state = eta_state(source.params);
    let report = SensitivityReport::compute(&state, &ops, Some(source.params.eta))?;
    let row = EtaScanRow::compute(source.params, &ops)?;
    let n = args.n_total;

    match format {
        Format::Json => {
            let rows: Vec<Value> = (0..=n)
                .map(|k| {
                    let c = state.amplitude(k);
                    json!({ "k": k, "n_a": n - k, "n_b": k, "re": c.re, "im": c.im })
                })
                .collect();
            let generation = match (source.alpha, source.gamma) {
                (Some(alpha), Some(gamma)) if source.params.eta > 0.0 => {
                    serde_json::to_value(GenerationStats::new(alpha, gamma, n)?)
                        .expect("plain struct")
                }
                _ => Value::Null,
            };
            let doc = json!({
                "meta": meta("state", source_inputs(n, &source), Value::Null,
                             warnings_for(&[source.params.eta])),
                "rows": rows,
                "report": report,
                "c_n_sq": normalization_c_sq(source.params),
                "generation": generation,
            });
            Ok(to_json(&doc))
        }
        Format::Csv => {
            let mut out = String::new();
            csv_line(&mut out, &["k", "n_a", "n_b", "re", "im"].map(String::from));
            for k in 0..=n {
                let c = state.amplitude(k);
                csv_line(
                    &mut out,
                    &[
                        k.to_string(),
                        (n - k).to_string(),
                        k.to_string(),
                        format_sig12(c.re),
                        format_sig12(c.im),
                    ],
                );
            }
            out.push('\n');
            out.push_str(&eta_scan_csv(&[row]));
            Ok(out)
        }
    }
}

fn render_eta_scan(args: &EtaScanArgs, format: Format) -> Result<String, RunError> {
    check_photon_number(args.n_total)?;
    if args.eta_min < 0.0 {
        return Err(RunError::Config("--eta-min must be non-negative".into()));
    }
    let grid = uniform_grid(args.eta_min, args.eta_max, args.eta_step)
        .map_err(|e| RunError::Config(e.to_string()))?;
    let rows = eta_scan(args.n_total, &grid)?;
    match format {
        Format::Csv => Ok(eta_scan_csv(&rows)),
        Format::Json => {
            let doc = json!({
                "meta": meta(
                    "eta-scan",
                    json!({ "n_total": args.n_total }),
                    json!({ "eta_min": args.eta_min, "eta_max": args.eta_max,
                            "eta_step": args.eta_step, "points": grid.len() }),
                    warnings_for(&grid),
                ),
                "rows": rows,
            });
            Ok(to_json(&doc))
        }
    }
}

fn phase_columns(n_total: usize) -> Vec<String> {
    let half = n_total as f64 / 2.0;
    let mut cols = vec!["phi".to_string(), "mean_j2".to_string()];
    cols.extend((0..=n_total).map(|i| format!("p_{}", format_sig12(i as f64 - half))));
    cols
}

fn render_phase_scan(args: &PhaseScanArgs, format: Format) -> Result<String, RunError> {
    check_photon_number(args.n_total)?;
    if args.intervals == 0 {
        return Err(RunError::Config("--intervals must be positive".into()));
    }
    let source = resolve_source(args.n_total, &args.source)?;
    let grid = default_phase_grid(args.intervals);
    let rows: Vec<PhaseScanRow> = phase_scan(args.n_total, source.params.eta, &grid)?;
    match format {
        Format::Csv => {
            let mut out = String::new();
            csv_line(&mut out, &phase_columns(args.n_total));
            for r in &rows {
                let mut fields = vec![format_sig12(r.phi), format_sig12(r.mean_j2)];
                fields.extend(r.probabilities.iter().map(|&p| format_sig12(p)));
                csv_line(&mut out, &fields);
            }
            Ok(out)
        }
        Format::Json => {
            let half = args.n_total as f64 / 2.0;
            let outcomes: Vec<f64> = (0..=args.n_total).map(|i| i as f64 - half).collect();
            let doc = json!({
                "meta": meta(
                    "phase-scan",
                    source_inputs(args.n_total, &source),
                    json!({ "intervals": args.intervals, "phi_start": 0.0,
                            "phi_step": std::f64::consts::TAU / args.intervals as f64,
                            "outcomes": outcomes }),
                    warnings_for(&[source.params.eta]),
                ),
                "rows": rows,
            });
            Ok(to_json(&doc))
        }
    }
}

fn render_table1(args: &Table1Args, format: Format) -> Result<String, RunError> {
    let etas = args.etas.clone().unwrap_or_else(|| TABLE1_ETAS.to_vec());
    let ns = args
        .photon_numbers
        .clone()
        .unwrap_or_else(|| TABLE1_PHOTON_NUMBERS.to_vec());
    if etas.iter().any(|&e| e <= 0.0) {
        return Err(RunError::Config("table1 needs eta > 0".into()));
    }
    for &n in &ns {
        check_photon_number(n)?;
    }
    let rows: Vec<Table1Row> = table1(&etas, &ns)?;
    match format {
        Format::Csv => {
            let mut out = String::new();
            csv_line(
                &mut out,
                &["n", "eta", "ratio_sq_pair", "ratio_stirling", "n_delta_phi_sq", "c_n_sq"]
                    .map(String::from),
            );
            for r in &rows {
                csv_line(
                    &mut out,
                    &[
                        r.n_total.to_string(),
                        format_sig12(r.eta),
                        format_sig12(r.ratio_sq_pair),
                        format_sig12(r.ratio_stirling),
                        format_sig12(r.n_delta_phi_sq),
                        format_sig12(r.c_n_sq),
                    ],
                );
            }
            Ok(out)
        }
        Format::Json => {
            let doc = json!({
                "meta": meta("table1", Value::Null,
                             json!({ "etas": etas, "photon_numbers": ns }),
                             warnings_for(&etas)),
                "rows": rows,
            });
            Ok(to_json(&doc))
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn render_report(args: &StateArgs) -> Result<String, RunError> {
    let ops = check_photon_number(args.n_total)?;
    let source = resolve_source(args.n_total, &args.source)?;
    let params = source.params;
    let n = args.n_total;
    let nf = n as f64;
    let state = eta_state(params);
    let r = SensitivityReport::compute(&state, &ops, Some(params.eta))?;
    let pred = squeezing_predictions(n, params.eta)?;
    let mut s = String::new();

    let _ = writeln!(s, "N-photon squeezed state");
    let _ = write!(s, "  N = {n}, eta = {}", format_sig12(params.eta));
    if let (Some(a), Some(g)) = (source.alpha, source.gamma) {
        let _ = write!(s, " (alpha = {}, gamma = {})", format_sig12(a), format_sig12(g));
    }
    let _ = writeln!(s);
    let _ = writeln!(s, "\nAmplitudes |N-k; k>");
    for k in (0..=n).filter(|&k| state.amplitude(k).norm() > 0.0) {
        let _ = writeln!(
            s,
            "  |{}; {}>  {:>+.6}",
            n - k,
            k,
            state.amplitude(k).re
        );
    }

    let _ = writeln!(s, "\nPhase sensitivity (J2 estimator at phi = 0)");
    let _ = writeln!(s, "  <J1>             {:.6}", r.j1_mean);
    let _ = writeln!(s, "  dJ2^2            {:.6}", r.dj2_sq);
    let _ = writeln!(s, "  dJ3^2            {:.6}", r.dj3_sq);
    let _ = writeln!(
        s,
        "  dphi^2           {:.6}   (SQL {:.6}, HL {:.6})",
        r.delta_phi_sq,
        1.0 / nf,
        1.0 / (nf * nf)
    );
    let _ = writeln!(s, "  N dphi^2         {:.6}", nf * r.delta_phi_sq);
    match r.q {
        Some(q) => {
            let _ = writeln!(s, "  Q                {q:.6}");
        }
        None => {
            let _ = writeln!(s, "  Q                undefined for N = 1");
        }
    }
    let _ = writeln!(s, "  1/(4 dJ3^2)      {:.6}", r.crb);
    let _ = writeln!(s, "  dphi^2 / CRB     {:.6}", r.delta_phi_sq / r.crb);
    let _ = writeln!(s, "  dJ2/dJ3          {:.6}", r.squeeze_ratio);
    let _ = writeln!(s, "  <b+b>            {:.6}", r.mean_pair_photons);

    let _ = writeln!(s, "\nSmall-eta predictions");
    match (pred.squeeze_ratio, pred.mean_pair_photons) {
        (Some(ratio), Some(pairs)) => {
            let _ = writeln!(s, "  (1-eta)/(1+eta)  {ratio:.6}");
            let _ = writeln!(s, "  eta^2/(1-eta^2)  {pairs:.6}");
            if n >= 2 {
                let _ = writeln!(s, "  Q from squeezing {:.6}", squeezing_factor_q(n, params.eta)?);
            }
        }
        _ => {
            let _ = writeln!(s, "  not available for eta >= 1");
        }
    }
    if n >= 2 {
        let _ = writeln!(s, "  weak-limit Q     {:.6}", weak_limit_q(n, params.eta)?);
    }

    let _ = writeln!(s, "\nLimits of interferometric squeezing");
    let _ = writeln!(
        s,
        "  validity 1 - eta > 1/sqrt(2N): eta < {:.6}  {}",
        pred.validity_threshold,
        if pred.valid { "satisfied" } else { "violated" }
    );
    let _ = writeln!(
        s,
        "  <b+b> < sqrt(N/2) = {:.6}  {}",
        pred.pair_photon_bound,
        yes_no(r.mean_pair_photons < pred.pair_photon_bound)
    );
    let _ = writeln!(
        s,
        "  dphi^2 > (2N)^(-3/2) = {:.6}  {}",
        pred.phase_error_floor,
        yes_no(r.delta_phi_sq > pred.phase_error_floor)
    );
    if let Some(q) = r.q {
        let _ = writeln!(s, "  Q <= 1/2  {}", yes_no(q <= 0.5));
    }
    if params.eta > 1.0 {
        let _ = writeln!(
            s,
            "  warning: eta > 1, the linear J2 estimator is no longer optimal"
        );
    }

    let _ = writeln!(s, "\nGeneration");
    let _ = writeln!(s, "  |C_N|^2          {:.6}", normalization_c_sq(params));
    if params.eta > 0.0 {
        let (exact, stirling) = ratio_sq_pair(params)?;
        let _ = writeln!(s, "  P_sq/P_pair      {}  (Stirling {})", format_sig12(exact), format_sig12(stirling));
    }
    if let (Some(a), Some(g)) = (source.alpha, source.gamma) {
        if params.eta > 0.0 && n >= 2 {
            let stats = GenerationStats::new(a, g, n)?;
            let _ = writeln!(s, "  P_sq             {}", format_sig12(stats.p_sq));
            let _ = writeln!(s, "  P_pair           {}", format_sig12(stats.p_pair));
        }
    }
    let _ = writeln!(
        s,
        "  NOON fidelity    {:.6} (paths), {:.6} (inputs)",
        noon_fidelity(&state, &ops, NoonBasis::Path)?,
        noon_fidelity(&state, &ops, NoonBasis::Input)?
    );
    Ok(s)
}
