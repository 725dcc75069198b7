//! Command-line front end: secrecy-bound evaluation, message-length
//! curves, scheme simulation, and the self-verification suite.

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use wiretap::bounds::{
    bsc_smoothed_bound, curve_point, general_aep_bound, optimize_delta, simple_bound,
    wiretap2_bound, BoundKind, BoundReport,
};
use wiretap::channel::{product_output_dist, AvcSpec, TransitionMatrix};
use wiretap::ecc::LinearCode;
use wiretap::extractor::ExtractorKind;
use wiretap::prob::entropy_stats;
use wiretap::protocol::{exact_secrecy, run_seeded_trials, AdversarySpec, SchemeConfig};
use wiretap::verify::{run_all, Scale};
use wiretap::{Error, Result};

#[derive(Parser)]
#[command(name = "wiretap", version, about = "Wiretap-channel coding: bounds, curves, simulation, verification")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Secret message length vs block length for each bound family (CSV).
    Curve(CurveArgs),
    /// Evaluate one secrecy bound (JSON).
    Bound(BoundArgs),
    /// Monte Carlo correctness and optional exact secrecy of a scheme.
    Simulate(SimArgs),
    /// Run the oracle verification suites.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct CurveArgs {
    /// Receiver crossover probability.
    #[arg(long = "p-r")]
    p_r: f64,
    /// Adversary crossover probability.
    #[arg(long = "p-a")]
    p_a: f64,
    /// Secrecy target ε.
    #[arg(long, default_value_t = 1e-2)]
    eps: f64,
    #[arg(long = "n-min", default_value_t = 100)]
    n_min: u64,
    #[arg(long = "n-max", default_value_t = 1_000_000)]
    n_max: u64,
    /// Number of log-spaced grid points.
    #[arg(long = "n-steps", default_value_t = 50)]
    n_steps: u64,
    /// Comma-separated subset of simple,smoothed,aep,capacity.
    #[arg(long, default_value = "simple,smoothed,aep,capacity")]
    bounds: String,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundArgs {
    /// One of simple, wiretap2, bsc-smoothed, aep.
    #[arg(long)]
    kind: String,
    #[arg(long)]
    ell: Option<u64>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long = "p-a")]
    p_a: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    /// Optimize δ instead of fixing it.
    #[arg(long = "auto-delta", default_value_t = false)]
    auto_delta: bool,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long = "eps-smooth")]
    eps_smooth: Option<f64>,
    /// Single-use adversary channel JSON ({"inputs", "outputs", "rows"}).
    #[arg(long)]
    channel: Option<PathBuf>,
}

#[derive(Args)]
struct SimArgs {
    /// Scheme config JSON.
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also compute exact desk-scale secrecy.
    #[arg(long, default_value_t = false)]
    exact: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// small or full-desk.
    #[arg(long, default_value = "small")]
    scale: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Reproducibility record emitted on stderr by every run.
#[derive(Serialize)]
struct RunManifest {
    tool_version: &'static str,
    subcommand: &'static str,
    args: Vec<String>,
    input_digests: BTreeMap<String, String>,
    rng_seed: Option<u64>,
}

impl RunManifest {
    fn new(subcommand: &'static str, rng_seed: Option<u64>) -> Self {
        RunManifest {
            tool_version: env!("CARGO_PKG_VERSION"),
            subcommand,
            args: std::env::args().skip(1).collect(),
            input_digests: BTreeMap::new(),
            rng_seed,
        }
    }

    fn digest(&mut self, path: &Path) -> Result<Vec<u8>> {
        let bytes = std::fs::read(path)?;
        let hash = Sha256::digest(&bytes);
        self.input_digests
            .insert(path.display().to_string(), format!("{hash:x}"));
        Ok(bytes)
    }

    fn emit(&self) {
        eprintln!(
            "{}",
            serde_json::to_string(self).expect("manifest serializes")
        );
    }
}

/// Six significant digits, plain decimal.
fn fmt_sig6(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let mag = v.abs().log10().floor() as i32;
    let decimals = (5 - mag).max(0) as usize;
    format!("{v:.decimals$}")
}

fn log_grid(n_min: u64, n_max: u64, steps: u64) -> Result<Vec<u64>> {
    if n_min == 0 || n_min > n_max || steps == 0 {
        return Err(Error::InvalidParameter(format!(
            "bad grid {n_min}..{n_max} in {steps} steps"
        )));
    }
    let mut grid = Vec::new();
    for i in 0..steps {
        let f = if steps == 1 {
            0.0
        } else {
            i as f64 / (steps - 1) as f64
        };
        let n = ((n_min as f64).ln() + f * ((n_max as f64).ln() - (n_min as f64).ln())).exp();
        let n = n.round() as u64;
        if grid.last() != Some(&n) {
            grid.push(n);
        }
    }
    Ok(grid)
}

fn cmd_curve(a: &CurveArgs) -> Result<()> {
    if !(0.0..=1.0).contains(&a.p_r) {
        return Err(Error::ProbabilityRange(a.p_r));
    }
    if !(0.0..=1.0).contains(&a.p_a) {
        return Err(Error::ProbabilityRange(a.p_a));
    }
    let kinds: Vec<BoundKind> = a
        .bounds
        .split(',')
        .filter(|s| !s.is_empty())
        .map(BoundKind::parse)
        .collect::<Result<_>>()?;
    let grid = log_grid(a.n_min, a.n_max, a.n_steps)?;
    let mut csv = String::from("n,ell_simple,ell_smoothed,ell_aep,ell_capacity\n");
    for &n in &grid {
        let mut row = vec![n.to_string()];
        for kind in [
            BoundKind::Simple,
            BoundKind::Smoothed,
            BoundKind::Aep,
            BoundKind::Capacity,
        ] {
            if kinds.contains(&kind) {
                row.push(fmt_sig6(curve_point(kind, a.p_r, a.p_a, a.eps, n)?));
            } else {
                row.push(String::new());
            }
        }
        csv.push_str(&row.join(","));
        csv.push('\n');
    }
    match &a.out {
        Some(path) => std::fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    RunManifest::new("curve", None).emit();
    Ok(())
}

fn require<T: Copy>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidParameter(format!("--{name} is required for this kind")))
}

fn load_channel(manifest: &mut RunManifest, path: &Path) -> Result<TransitionMatrix> {
    let bytes = manifest.digest(path)?;
    Ok(serde_json::from_slice(&bytes)?)
}

fn cmd_bound(a: &BoundArgs) -> Result<()> {
    let mut manifest = RunManifest::new("bound", None);
    let report: BoundReport = match a.kind.as_str() {
        "wiretap2" => wiretap2_bound(
            require(a.ell, "ell")?,
            require(a.q, "q")?,
            require(a.k, "k")?,
        ),
        "bsc-smoothed" => {
            let (ell, k, n) = (
                require(a.ell, "ell")?,
                require(a.k, "k")?,
                require(a.n, "n")?,
            );
            let p_a = require(a.p_a, "p-a")?;
            if a.auto_delta {
                let f = |d: f64| match bsc_smoothed_bound(ell, k, n, p_a, d) {
                    Ok(r) => r.epsilon_sec_rm,
                    Err(_) => f64::INFINITY,
                };
                let (d_star, _) = optimize_delta(f, 1e-9, p_a - 1e-9)?;
                bsc_smoothed_bound(ell, k, n, p_a, d_star)?
            } else {
                bsc_smoothed_bound(ell, k, n, p_a, require(a.delta, "delta")?)?
            }
        }
        "simple" => {
            let path = a.channel.as_ref().ok_or_else(|| {
                Error::InvalidParameter("--channel is required for --kind simple".into())
            })?;
            let w = load_channel(&mut manifest, path)?;
            let (ell, k, n) = (
                require(a.ell, "ell")?,
                require(a.k, "k")?,
                require(a.n, "n")? as usize,
            );
            let per_use = vec![w.clone(); n];
            let cond = product_output_dist(&per_use, &vec![0; n])?;
            let v_size = 2u64.pow(k as u32);
            simple_bound(ell, &cond, v_size, w.outputs() as u64, n)?
        }
        "aep" => {
            let (ell, k, n) = (
                require(a.ell, "ell")?,
                require(a.k, "k")?,
                require(a.n, "n")? as usize,
            );
            let (z_size, kappa, eps_smooth) = match (&a.channel, a.kappa, a.eps_smooth) {
                (_, Some(kappa), Some(eps_smooth)) => (2u64, kappa, eps_smooth),
                (Some(path), _, _) => {
                    // i.i.d. instantiation from the channel's conditional
                    // output distribution and the Chebyshev smoothing error
                    let w = load_channel(&mut manifest, path)?;
                    let delta = require(a.delta, "delta")?;
                    let row = wiretap::prob::ProbVector::new(w.rows()[0].clone())?;
                    let st = entropy_stats(&row);
                    let kappa = (-(n as f64) * (st.entropy - delta)).exp2();
                    let eps_smooth = (st.variance_log / (n as f64 * delta * delta)).min(1.0);
                    (w.outputs() as u64, kappa, eps_smooth)
                }
                _ => {
                    return Err(Error::InvalidParameter(
                        "aep needs either --kappa and --eps-smooth or --channel and --delta"
                            .into(),
                    ))
                }
            };
            general_aep_bound(
                2u64.pow(ell as u32),
                z_size,
                n,
                2u64.pow(k as u32),
                kappa,
                eps_smooth,
            )?
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown bound kind {other}"
            )))
        }
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    manifest.emit();
    Ok(())
}

/// On-disk scheme config; referenced files are resolved relative to it.
#[derive(Deserialize)]
struct SchemeFile {
    extractor: ExtractorKind,
    code: String,
    receiver_channel: String,
    adversary: AdversaryFile,
    #[serde(default = "default_t")]
    t: u64,
}

fn default_t() -> u64 {
    1
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
enum AdversaryFile {
    Memoryless { channel: String },
    Wiretap2 { q: usize },
    Avc { spec: String },
}

/// A channel file holds either one single-use matrix (replicated across
/// the block) or an explicit list of per-use matrices.
fn load_uses(manifest: &mut RunManifest, path: &Path, n: usize) -> Result<Vec<TransitionMatrix>> {
    let bytes = manifest.digest(path)?;
    if let Ok(list) = serde_json::from_slice::<Vec<TransitionMatrix>>(&bytes) {
        if list.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} per-use channels in {} but block length {n}",
                list.len(),
                path.display()
            )));
        }
        return Ok(list);
    }
    let single: TransitionMatrix = serde_json::from_slice(&bytes)?;
    Ok(vec![single; n])
}

fn load_scheme(manifest: &mut RunManifest, path: &Path) -> Result<SchemeConfig> {
    let bytes = manifest.digest(path)?;
    let file: SchemeFile = serde_json::from_slice(&bytes)?;
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let code_bytes = manifest.digest(&dir.join(&file.code))?;
    let code: LinearCode = serde_json::from_slice(&code_bytes)?;
    let n = code.n();
    let receiver = load_uses(manifest, &dir.join(&file.receiver_channel), n)?;
    let adversary = match &file.adversary {
        AdversaryFile::Memoryless { channel } => AdversarySpec::Memoryless {
            per_use: load_uses(manifest, &dir.join(channel), n)?,
        },
        AdversaryFile::Wiretap2 { q } => AdversarySpec::Wiretap2 { q: *q },
        AdversaryFile::Avc { spec } => {
            let bytes = manifest.digest(&dir.join(spec))?;
            let spec: AvcSpec = serde_json::from_slice(&bytes)?;
            AdversarySpec::Avc { spec }
        }
    };
    let cfg = SchemeConfig {
        extractor: file.extractor,
        code,
        receiver,
        adversary,
        t: file.t,
    };
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Serialize)]
struct SimulateOutput {
    correctness: wiretap::protocol::CorrectnessReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    secrecy: Option<wiretap::protocol::SecrecyReport>,
}

fn cmd_simulate(a: &SimArgs) -> Result<()> {
    let mut manifest = RunManifest::new("simulate", Some(a.seed));
    let cfg = load_scheme(&mut manifest, &a.config)?;
    let mut rng = ChaCha12Rng::seed_from_u64(a.seed);
    let correctness = run_seeded_trials(&cfg, a.trials, &mut rng)?;
    let secrecy = if a.exact {
        Some(exact_secrecy(&cfg)?)
    } else {
        None
    };
    let out = SimulateOutput {
        correctness,
        secrecy,
    };
    println!("{}", serde_json::to_string_pretty(&out)?);
    manifest.emit();
    Ok(())
}

fn cmd_verify(a: &VerifyArgs) -> Result<bool> {
    let scale = Scale::parse(&a.scale)?;
    let outcomes = run_all(scale, a.seed);
    let mut all_pass = true;
    let mut stdout = std::io::stdout().lock();
    for o in &outcomes {
        let status = if o.passed { "PASS" } else { "FAIL" };
        writeln!(stdout, "{status}  {:<28} {}", o.name, o.detail)?;
        all_pass &= o.passed;
    }
    drop(stdout);
    RunManifest::new("verify", Some(a.seed)).emit();
    Ok(all_pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Curve(a) => cmd_curve(a).map(|()| true),
        Cmd::Bound(a) => cmd_bound(a).map(|()| true),
        Cmd::Simulate(a) => cmd_simulate(a).map(|()| true),
        Cmd::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
