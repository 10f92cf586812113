//! The `mixtime` command-line tool.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::criteria::{self, Basis, Quantity, ScanOptions};
use crate::error::{Error, Result};
use crate::liouvillian::build_generator;
use crate::mixing::{self, DEFAULT_ETA};
use crate::models::{load_config, ModelConfig, SystemModel};
use crate::perturbation::{
    cutoff_bound, cutoff_bound_weak, strong_first_order_state, strong_gap_estimate, strong_state_correction,
    weak_gap_estimate, weak_records, weak_state_correction, CutoffReport, Regime,
};
use crate::spectral::decompose;

pub const CSV_VERSION: &str = "mixtime-csv v1";

#[derive(Parser, Debug)]
#[command(name = "mixtime", version, about = "Mixing times of Lindbladian dynamics from the doubled-space spectrum")]
struct Cli {
    /// Format written to standard output.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Also write `<subcommand>.json` and `<subcommand>.csv` into this directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RegimeArg {
    Strong,
    Weak,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BasisArg {
    H,
    K,
}

impl From<BasisArg> for Basis {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::H => Basis::HEigenbasis,
            BasisArg::K => Basis::KEigenbasis,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full Lindbladian spectrum.
    Spectrum { config: PathBuf },
    /// Measured, predicted and bounded mixing times.
    Mix {
        config: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ETA)]
        eta: f64,
        /// Number of Haar-random pure probes.
        #[arg(long, default_value_t = mixing::DEFAULT_RANDOM_PROBES)]
        random_probes: usize,
        #[arg(long, default_value_t = mixing::DEFAULT_PROBE_SEED)]
        seed: u64,
    },
    /// Strong- or weak-dissipation perturbation theory with cutoff bounds.
    Perturb {
        config: PathBuf,
        #[arg(long, value_enum)]
        regime: RegimeArg,
        /// Cutoffs for the entry split; defaults to e^-L, e^-2L and 1e-3.
        #[arg(long, value_delimiter = ',')]
        cutoff: Vec<f64>,
    },
    /// Row-wise counts of matrix elements above e^(-alpha L).
    Sparsity {
        config: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, value_enum, default_value_t = BasisArg::H)]
        basis: BasisArg,
    },
    /// Gap and slowest-mode trace norm across chain lengths.
    Scan {
        config: PathBuf,
        #[arg(long)]
        l_min: usize,
        #[arg(long)]
        l_max: usize,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Sparsity basis; inferred from the regime when omitted.
        #[arg(long, value_enum)]
        basis: Option<BasisArg>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Spectrum { .. } => "spectrum",
            Command::Mix { .. } => "mix",
            Command::Perturb { .. } => "perturb",
            Command::Sparsity { .. } => "sparsity",
            Command::Scan { .. } => "scan",
        }
    }

    fn config(&self) -> &Path {
        match self {
            Command::Spectrum { config }
            | Command::Mix { config, .. }
            | Command::Perturb { config, .. }
            | Command::Sparsity { config, .. }
            | Command::Scan { config, .. } => config,
        }
    }

    fn parameters(&self) -> Value {
        match self {
            Command::Spectrum { .. } => json!({}),
            Command::Mix {
                eta,
                random_probes,
                seed,
                ..
            } => json!({ "eta": eta, "random_probes": random_probes, "seed": seed }),
            Command::Perturb { regime, cutoff, .. } => {
                json!({ "regime": format!("{regime:?}").to_lowercase(), "cutoff": cutoff })
            }
            Command::Sparsity { alpha, basis, .. } => {
                json!({ "alpha": alpha, "basis": Basis::from(*basis) })
            }
            Command::Scan {
                l_min,
                l_max,
                alpha,
                basis,
                ..
            } => json!({
                "l_min": l_min,
                "l_max": l_max,
                "alpha": alpha,
                "basis": basis.map(Basis::from),
            }),
        }
    }
}

/// Provenance embedded in every report.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub config_sha256: String,
    pub subcommand: String,
    pub parameters: Value,
    pub timestamp_unix: u64,
}

/// SHA-256 of the compact JSON rendering, whose object keys are sorted.
pub fn config_hash(cfg: &ModelConfig) -> String {
    let text = serde_json::to_string(&cfg.to_json()).expect("config serializes");
    Sha256::digest(text.as_bytes()).iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// A CSV table with a versioned comment line.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

/// Seventeen significant digits, enough to round-trip any double.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Table {
    pub fn render(&self, hash: &str, subcommand: &str) -> String {
        let mut out = format!("# {CSV_VERSION} subcommand={subcommand} config_sha256={hash}\n");
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }
}

struct Output {
    body: Value,
    table: Option<Table>,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

fn spectrum_cmd(cfg: &ModelConfig) -> Result<Output> {
    let model = SystemModel::from_config(cfg)?;
    let spec = decompose(&build_generator(&model)?)?;
    let rows = spec
        .records
        .iter()
        .enumerate()
        .map(|(j, r)| {
            vec![
                j.to_string(),
                fmt_float(r.alpha),
                fmt_float(r.beta),
                fmt_float(r.mode_trace_norm),
                r.is_steady.to_string(),
            ]
        })
        .collect();
    let records: Vec<Value> = spec
        .records
        .iter()
        .enumerate()
        .map(|(j, r)| json!({ "j": j, "alpha": r.alpha, "beta": r.beta, "trace_norm": r.mode_trace_norm, "is_steady": r.is_steady }))
        .collect();
    let body = json!({
        "summary": {
            "dim": spec.dim,
            "gap": if spec.gap.is_finite() { json!(spec.gap) } else { Value::Null },
            "steady_dim": spec.steady_dim,
            "zero_tol": spec.zero_tol,
            "condition_number": spec.condition_number,
            "defective": spec.defective,
            "slowest_epsilon": spec.slowest_record().ok().map(|r| r.epsilon),
        },
        "spectrum": records,
    });
    Ok(Output {
        body,
        table: Some(Table {
            columns: vec!["j", "alpha_j", "beta_j", "trace_norm", "is_steady"],
            rows,
        }),
    })
}

fn mix_cmd(cfg: &ModelConfig, eta: f64, random_probes: usize, seed: u64) -> Result<Output> {
    let model = SystemModel::from_config(cfg)?;
    let spec = decompose(&build_generator(&model)?)?;
    let probes = mixing::default_probes(&spec, random_probes, seed)?;
    let report = mixing::mixing_report_with(&spec, Some(model.lattice), eta, &probes)?;
    let rows = report
        .probes
        .iter()
        .map(|p| {
            vec![
                p.label.clone(),
                fmt_float(p.c1),
                fmt_float(p.trace_norm),
                fmt_float(p.tau_measured),
                p.tau_predicted.map_or_else(|| "nan".into(), fmt_float),
                fmt_float(p.tau_bound),
            ]
        })
        .collect();
    Ok(Output {
        body: to_value(&report),
        table: Some(Table {
            columns: vec!["probe", "c1", "trace_norm", "tau_measured", "tau_predicted", "tau_bound"],
            rows,
        }),
    })
}

fn default_cutoffs(l: usize) -> Vec<f64> {
    vec![(-(l as f64)).exp(), (-2.0 * l as f64).exp(), 1e-3]
}

fn cutoff_rows(reports: &[CutoffReport]) -> Vec<Vec<String>> {
    reports
        .iter()
        .map(|r| {
            vec![
                fmt_float(r.cutoff_c),
                r.n_large.to_string(),
                r.nonzero.to_string(),
                fmt_float(r.norm_a_bound),
                fmt_float(r.norm_b_bound),
                fmt_float(r.trace_norm_exact),
                r.satisfied.to_string(),
            ]
        })
        .collect()
}

const CUTOFF_COLUMNS: [&str; 7] = [
    "cutoff_c",
    "N_large",
    "nonzero",
    "norm_A_bound",
    "norm_B_bound",
    "trace_norm_exact",
    "satisfied",
];

fn perturb_cmd(cfg: &ModelConfig, regime: RegimeArg, cutoffs: &[f64]) -> Result<Output> {
    let model = SystemModel::from_config(cfg)?;
    let cutoffs = if cutoffs.is_empty() {
        default_cutoffs(model.lattice.l)
    } else {
        cutoffs.to_vec()
    };
    match regime {
        RegimeArg::Strong => {
            let report = strong_gap_estimate(&model)?;
            let corr = strong_state_correction(&model)?;
            let n = model.dim();
            let m = (0..n)
                .max_by(|&a, &b| corr.sigma_k_basis[(a, a)].norm().total_cmp(&corr.sigma_k_basis[(b, b)].norm()))
                .unwrap_or(0);
            let (sigma, skipped) = strong_first_order_state(&model, m)?;
            let cuts: Vec<CutoffReport> =
                cutoffs.iter().map(|&c| cutoff_bound(&sigma, c, Regime::Strong)).collect::<Result<_>>()?;
            if let Some(w) = &report.regime_warning {
                eprintln!("warning: {w}");
            }
            let body = json!({
                "strong": report,
                "state_correction": {
                    "epsilon": corr.epsilon,
                    "trace_norm": corr.trace_norm,
                    "skipped_denominators": corr.skipped_denominators,
                },
                "first_order_state": { "m": m, "nonzero": sigma.count_nonzero(0.0), "skipped_denominators": skipped },
                "cutoff": cuts,
            });
            Ok(Output {
                body,
                table: Some(Table {
                    columns: CUTOFF_COLUMNS.to_vec(),
                    rows: cutoff_rows(&cuts),
                }),
            })
        }
        RegimeArg::Weak => {
            let records = weak_records(&model)?;
            let gap = weak_gap_estimate(&model)?;
            let corr = weak_state_correction(&model, gap.m, gap.n)?;
            let cuts: Vec<CutoffReport> =
                cutoffs.iter().map(|&c| cutoff_bound_weak(&corr, c)).collect::<Result<_>>()?;
            let rows = records
                .iter()
                .map(|r| {
                    vec![
                        r.m.to_string(),
                        r.n.to_string(),
                        fmt_float(r.epsilon0),
                        r.nondegenerate.to_string(),
                        fmt_float(r.delta_k2_m()),
                        fmt_float(r.delta_k2_n()),
                        fmt_float(r.first_order_rate),
                    ]
                })
                .collect();
            let body = json!({
                "weak_gap": gap,
                "records": records,
                "state_correction": {
                    "m": corr.m,
                    "n": corr.n,
                    "b1_nonzero": corr.b1_nonzero,
                    "b2_nonzero": corr.b2_nonzero,
                    "skipped_denominators": corr.skipped_denominators,
                    "trace_norm": corr.trace_norm,
                },
                "cutoff": cuts,
            });
            Ok(Output {
                body,
                table: Some(Table {
                    columns: vec!["m", "n", "epsilon0", "nondegenerate", "deltaK2_m", "deltaK2_n", "first_order_rate"],
                    rows,
                }),
            })
        }
    }
}

fn sparsity_cmd(cfg: &ModelConfig, alpha: f64, basis: Basis) -> Result<Output> {
    let model = SystemModel::from_config(cfg)?;
    let profile = criteria::model_sparsity(&model, basis, alpha)?;
    let rows = profile.counts.iter().enumerate().map(|(s, c)| vec![s.to_string(), c.to_string()]).collect();
    Ok(Output {
        body: to_value(&profile),
        table: Some(Table {
            columns: vec!["s", "count"],
            rows,
        }),
    })
}

fn scan_cmd(cfg: &ModelConfig, l_min: usize, l_max: usize, alpha: f64, basis: Option<Basis>) -> Result<Output> {
    if l_min == 0 || l_min > l_max {
        return Err(Error::InvalidArgument(format!("invalid size range {l_min}..={l_max}")));
    }
    let opts = ScanOptions { alpha, basis };
    let records = criteria::scan_sizes(cfg, l_min..=l_max, &opts);
    for r in &records {
        if let Some(e) = &r.error {
            eprintln!("warning: L = {}: {e}", r.l);
        }
    }
    let ls: Vec<usize> = records.iter().map(|r| r.l).collect();
    let verdict = |q: Quantity, v: Vec<f64>| match criteria::classify_scaling(q, &ls, &v) {
        Ok(v) => to_value(&v),
        Err(e) => json!({ "quantity": q, "error": e.to_string() }),
    };
    let body = json!({
        "records": records,
        "verdicts": [
            verdict(Quantity::InverseGap, records.iter().map(|r| r.inverse_gap).collect()),
            verdict(Quantity::TraceNorm, records.iter().map(|r| r.trace_norm_sigma1).collect()),
        ],
    });
    let rows = records
        .iter()
        .map(|r| {
            vec![
                r.l.to_string(),
                fmt_float(r.inverse_gap),
                fmt_float(r.trace_norm_sigma1),
                r.max_sparsity_count.to_string(),
                r.error.clone().unwrap_or_default(),
            ]
        })
        .collect();
    Ok(Output {
        body,
        table: Some(Table {
            columns: vec!["L", "inverse_gap", "trace_norm_sigma1", "max_sparsity_count", "error"],
            rows,
        }),
    })
}

/// Write `contents` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.display().to_string(),
        source,
    };
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(io_err)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents.as_bytes()).map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

fn execute(cli: &Cli) -> Result<()> {
    let cfg = load_config(cli.command.config())?;
    let hash = config_hash(&cfg);
    let name = cli.command.name();
    let start = Instant::now();
    let output = match &cli.command {
        Command::Spectrum { .. } => spectrum_cmd(&cfg)?,
        Command::Mix {
            eta,
            random_probes,
            seed,
            ..
        } => mix_cmd(&cfg, *eta, *random_probes, *seed)?,
        Command::Perturb { regime, cutoff, .. } => perturb_cmd(&cfg, *regime, cutoff)?,
        Command::Sparsity { alpha, basis, .. } => sparsity_cmd(&cfg, *alpha, (*basis).into())?,
        Command::Scan {
            l_min,
            l_max,
            alpha,
            basis,
            ..
        } => scan_cmd(&cfg, *l_min, *l_max, *alpha, basis.map(Basis::from))?,
    };
    let manifest = RunManifest {
        tool: "mixtime".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config_sha256: hash.clone(),
        subcommand: name.into(),
        parameters: cli.command.parameters(),
        timestamp_unix: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
    };
    let doc = json!({
        "manifest": manifest,
        "config": cfg.to_json(),
        "wall_time_s": start.elapsed().as_secs_f64(),
        "report": output.body,
    });
    let json_text = serde_json::to_string_pretty(&doc).expect("report serializes") + "\n";
    let csv_text = output.table.as_ref().map(|t| t.render(&hash, name));
    if let Some(dir) = &cli.out {
        write_atomic(&dir.join(format!("{name}.json")), &json_text)?;
        if let Some(csv) = &csv_text {
            write_atomic(&dir.join(format!("{name}.csv")), csv)?;
        }
    }
    let stdout = match (cli.format, &csv_text) {
        (Format::Csv, Some(csv)) => csv.clone(),
        _ => json_text,
    };
    let mut lock = std::io::stdout().lock();
    lock.write_all(stdout.as_bytes()).and_then(|_| lock.flush()).map_err(|source| Error::Io {
        path: "<stdout>".into(),
        source,
    })
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
