//! Subcommands of the `cqed` binary. Every command writes CSV files into `--out`.

use std::f64::consts::PI;
use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use cqed::dynamics::{reduced_field, run_protocol, ProtocolConfig, Qubit};
use cqed::hilbert::StateVector;
use cqed::sweep::{
    closed_grid, decoherence_maxima, dephased_eof, exact_vs_asymptotic, gamma_grid, sweep_asymptotic, sweep_exact,
    SweepRecord,
};
use cqed::wigner::{count_packets, count_peaks, wigner_map, GridSpec};
use cqed::{Complex64, Execution};

#[derive(Parser, Debug)]
#[command(name = "cqed", version, about = "Two-atom entanglement through a coherent cavity field")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Fock cutoff for exact runs (default |α|² + 10|α| + 20)
    #[arg(long, global = true)]
    pub nmax: Option<usize>,
    /// Phase of α
    #[arg(long, global = true, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gamma0: f64,
    #[arg(long, global = true, default_value_t = 1.0)]
    pub omega1: f64,
    #[arg(long, global = true, default_value_t = 1.0)]
    pub omega2: f64,
    /// Worker threads (1 runs sequentially; default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output directory
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// E_c, purity, E_f and negativity against γ = γ₁ = γ₂
    SweepGamma(SweepGamma),
    /// E_f of the dephased model against γ for several decoherence strengths y
    SweepDecoherence(SweepDecoherence),
    /// Wigner function of the cavity field after both atoms have passed
    Wigner(WignerCmd),
    /// Compare exact and asymptotic E_f and negativity curves
    Validate(Validate),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    Exact,
    Asymptotic,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum AtomState {
    G,
    E,
}

impl AtomState {
    fn qubit(self) -> Qubit {
        match self {
            AtomState::G => Qubit::GROUND,
            AtomState::E => Qubit::EXCITED,
        }
    }
}

#[derive(Args, Debug)]
pub struct SweepGamma {
    #[arg(long, value_enum, default_value_t = Model::Exact)]
    pub model: Model,
    /// Field amplitudes |α| for the exact model (comma separated)
    #[arg(long, value_delimiter = ',', default_value = "8")]
    pub alpha: Vec<f64>,
    /// Grid points on the open interval (0, π)
    #[arg(long, default_value_t = 256)]
    pub steps: usize,
    /// Initial state of the second atom
    #[arg(long, value_enum, default_value_t = AtomState::G)]
    pub atom2: AtomState,
}

#[derive(Args, Debug)]
pub struct SweepDecoherence {
    /// Decoherence strengths y = 2λ|α|³/(Ω₁+Ω₂) (comma separated)
    #[arg(long, value_delimiter = ',', default_value = "0,0.15,0.4,0.7,1")]
    pub y: Vec<f64>,
    #[arg(long, default_value_t = 256)]
    pub steps: usize,
}

#[derive(Args, Debug)]
pub struct WignerCmd {
    #[arg(long, default_value_t = 4.0)]
    pub alpha: f64,
    /// Rotation angle of the first atom (default 0.45π)
    #[arg(long)]
    pub gamma1: Option<f64>,
    /// Rotation angle of the second atom (default 0.75π)
    #[arg(long)]
    pub gamma2: Option<f64>,
    /// Points per axis
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    /// Peak threshold (default 0.05/π)
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Map the vacuum instead of the protocol output
    #[arg(long)]
    pub vacuum: bool,
}

#[derive(Args, Debug)]
pub struct Validate {
    #[arg(long, default_value_t = 8.0)]
    pub alpha: f64,
    /// Largest allowed sup-norm deviation of E_f and negativity
    #[arg(long, default_value_t = 0.05)]
    pub tol: f64,
    /// Grid points on [0.1π, 0.9π]
    #[arg(long, default_value_t = 161)]
    pub steps: usize,
}

/// Result of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    ValidationFailed,
}

/// Bad flag values that clap cannot catch on its own.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Process exit code for an error: 2 for bad input, 1 otherwise.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        return 2;
    }
    match err.downcast_ref::<cqed::Error>() {
        Some(
            cqed::Error::InvalidConfig(_)
            | cqed::Error::CutoffTooSmall { .. }
            | cqed::Error::UnphysicalCoherence(_)
            | cqed::Error::StepTooLarge { .. },
        ) => 2,
        _ => 1,
    }
}

/// 12 significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.11e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

fn label(x: f64) -> String {
    format!("{x}")
}

pub fn run(cli: &Cli) -> anyhow::Result<Status> {
    let c = &cli.common;
    for (name, v) in [("--omega1", c.omega1), ("--omega2", c.omega2)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(usage(format!("{name} must be positive, got {v}")));
        }
    }
    if !c.gamma0.is_finite() {
        return Err(usage("--gamma0 must be finite"));
    }
    let exec = match c.threads {
        Some(0) => return Err(usage("--threads must be at least 1")),
        Some(1) => Execution::Sequential,
        _ => Execution::Parallel,
    };
    fs::create_dir_all(&c.out).with_context(|| format!("creating {}", c.out.display()))?;
    let go = || match &cli.command {
        Command::SweepGamma(a) => sweep_gamma(c, a, exec),
        Command::SweepDecoherence(a) => sweep_decoherence(c, a, exec),
        Command::Wigner(a) => wigner(c, a, exec),
        Command::Validate(a) => validate(c, a, exec),
    };
    match c.threads {
        Some(n) if n > 1 => rayon::ThreadPoolBuilder::new().num_threads(n).build()?.install(go),
        _ => go(),
    }
}

fn create(dir: &Path, name: &str) -> anyhow::Result<(PathBuf, BufWriter<File>)> {
    let path = dir.join(name);
    let f = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    Ok((path, BufWriter::new(f)))
}

fn check_steps(steps: usize) -> anyhow::Result<()> {
    if steps == 0 {
        return Err(usage("--steps must be at least 1"));
    }
    Ok(())
}

fn config(c: &Common, alpha: f64) -> anyhow::Result<ProtocolConfig> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(usage(format!("--alpha must be positive, got {alpha}")));
    }
    let mut cfg = ProtocolConfig::new(Complex64::from_polar(alpha, c.gamma0), 0.0, 0.0).with_couplings(c.omega1, c.omega2);
    if let Some(n) = c.nmax {
        cfg = cfg.with_n_max(n);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_records(path: &Path, mut w: impl Write, records: &[SweepRecord]) -> anyhow::Result<()> {
    writeln!(w, "gamma,E_c,purity,E_f,negativity")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt_num(r.gamma),
            fmt_opt(r.e_c),
            fmt_opt(r.purity),
            fmt_opt(r.e_f),
            fmt_opt(r.negativity)
        )?;
    }
    w.flush()?;
    let best = records.iter().filter_map(|r| r.e_f.map(|e| (r.gamma, e))).max_by(|a, b| a.1.total_cmp(&b.1));
    match best {
        Some((g, e)) => println!("wrote {} ({} rows, max E_f {:.6} at γ = {:.6}π)", path.display(), records.len(), e, g / PI),
        None => println!("wrote {} ({} rows)", path.display(), records.len()),
    }
    Ok(())
}

fn sweep_gamma(c: &Common, a: &SweepGamma, exec: Execution) -> anyhow::Result<Status> {
    check_steps(a.steps)?;
    let grid = gamma_grid(a.steps);
    let atom2 = a.atom2.qubit();
    match a.model {
        Model::Asymptotic => {
            let records = sweep_asymptotic(&grid, c.gamma0, atom2, exec)?;
            let (path, w) = create(&c.out, "gamma_asymptotic.csv")?;
            write_records(&path, w, &records)?;
        }
        Model::Exact => {
            if a.alpha.is_empty() {
                return Err(usage("--alpha needs at least one value"));
            }
            for &alpha in &a.alpha {
                let cfg = config(c, alpha)?.with_atoms(Qubit::GROUND, atom2);
                let records = sweep_exact(&cfg, &grid, exec)?;
                let (path, w) = create(&c.out, &format!("gamma_alpha_{}.csv", label(alpha)))?;
                write_records(&path, w, &records)?;
            }
        }
    }
    Ok(Status::Ok)
}

fn sweep_decoherence(c: &Common, a: &SweepDecoherence, exec: Execution) -> anyhow::Result<Status> {
    check_steps(a.steps)?;
    if let Some(y) = a.y.iter().find(|y| !(y.is_finite() && **y >= 0.0)) {
        return Err(usage(format!("--y values must be non-negative, got {y}")));
    }
    // x₁x₂ = exp(−λ|α|³(1/Ω₁ + 1/Ω₂)(…)); with y defined through Ω₁ + Ω₂ this is
    // the equal-coupling form at y (Ω₁+Ω₂)² / (4Ω₁Ω₂).
    let scale = (c.omega1 + c.omega2).powi(2) / (4.0 * c.omega1 * c.omega2);
    let effective: Vec<f64> = a.y.iter().map(|y| y * scale).collect();
    let grid = gamma_grid(a.steps);

    for (&y, &ye) in a.y.iter().zip(&effective) {
        let values = cqed::exec::try_map_indexed(exec, grid.len(), |i| dephased_eof(ye, grid[i], c.gamma0))?;
        let (path, mut w) = create(&c.out, &format!("decoherence_y_{}.csv", label(y)))?;
        writeln!(w, "gamma,E_f")?;
        for (g, e) in grid.iter().zip(&values) {
            writeln!(w, "{},{}", fmt_num(*g), fmt_num(*e))?;
        }
        w.flush()?;
        println!("wrote {} ({} rows)", path.display(), grid.len());
    }

    let maxima = decoherence_maxima(&effective, c.gamma0, exec)?;
    let (path, mut w) = create(&c.out, "decoherence_summary.csv")?;
    writeln!(w, "y,gamma_star,E_f_max")?;
    for (&y, m) in a.y.iter().zip(&maxima) {
        writeln!(w, "{},{},{}", fmt_num(y), fmt_num(m.gamma_star), fmt_num(m.e_f_max))?;
        println!("y = {y}: max E_f {:.6e} at γ = {:.6}", m.e_f_max, m.gamma_star);
    }
    w.flush()?;
    println!("wrote {} ({} rows)", path.display(), maxima.len());
    Ok(Status::Ok)
}

const DEFAULT_GAMMA1: f64 = 0.45 * PI;
const DEFAULT_GAMMA2: f64 = 0.75 * PI;

fn wigner(c: &Common, a: &WignerCmd, exec: Execution) -> anyhow::Result<Status> {
    if a.points < 3 {
        return Err(usage("--points must be at least 3"));
    }
    let threshold = a.threshold.unwrap_or(0.05 / PI);
    if !(threshold.is_finite() && threshold > 0.0) {
        return Err(usage("--threshold must be positive"));
    }
    let g1 = a.gamma1.unwrap_or(DEFAULT_GAMMA1);
    let g2 = a.gamma2.unwrap_or(DEFAULT_GAMMA2);
    let angles = match (a.gamma1, a.gamma2) {
        (None, None) => "built-in illustrative default",
        (Some(_), Some(_)) => "user",
        _ => "partly built-in defaults",
    };
    let (rho, n_max, spec) = if a.vacuum {
        let n_max = c.nmax.unwrap_or(20);
        (StateVector::basis(n_max + 1, 0)?.projector(), n_max, GridSpec::square(6.0, a.points))
    } else {
        let cfg = ProtocolConfig { gamma1: g1, gamma2: g2, ..config(c, a.alpha)? };
        let spec = GridSpec { nq: a.points, np: a.points, ..GridSpec::for_alpha(a.alpha) };
        (reduced_field(&run_protocol(&cfg)?)?, cfg.n_max, spec)
    };
    let grid = wigner_map(&rho, &spec, exec)?;
    let packets = count_packets(&grid, threshold);
    let maxima = count_peaks(&grid, threshold);

    let (path, w) = create(&c.out, "wigner.csv")?;
    grid.write_csv(w)?;
    let (meta_path, mut m) = create(&c.out, "wigner_meta.csv")?;
    let mut meta = vec![("state", if a.vacuum { "vacuum".to_string() } else { "protocol".to_string() })];
    if !a.vacuum {
        meta.extend([
            ("alpha", fmt_num(a.alpha)),
            ("gamma0", fmt_num(c.gamma0)),
            ("gamma1", fmt_num(g1)),
            ("gamma2", fmt_num(g2)),
            ("angles", angles.to_string()),
            ("omega1", fmt_num(c.omega1)),
            ("omega2", fmt_num(c.omega2)),
        ]);
    }
    meta.extend([
        ("n_max", n_max.to_string()),
        ("points", a.points.to_string()),
        ("normalization", fmt_num(grid.normalization())),
        ("max_imag_residue", fmt_num(grid.max_imag_residue)),
        ("grid_too_small", grid.grid_too_small().to_string()),
        ("threshold", fmt_num(threshold)),
        ("packets", packets.to_string()),
        ("local_maxima", maxima.to_string()),
    ]);
    writeln!(m, "key,value")?;
    for (k, v) in &meta {
        writeln!(m, "{k},{v}")?;
    }
    m.flush()?;

    if !a.vacuum && a.gamma1.is_none() && a.gamma2.is_none() {
        println!("note: angles γ₁ = 0.45π, γ₂ = 0.75π are built-in defaults");
    }
    if grid.grid_too_small() {
        eprintln!("warning: |W| on the grid boundary is {:.3e}; the grid may be too small", grid.boundary_max());
    }
    println!("normalization: {:.6}", grid.normalization());
    println!("local maxima: {maxima}");
    println!("peaks: {packets}");
    println!("wrote {} and {}", path.display(), meta_path.display());
    Ok(Status::Ok)
}

fn validate(c: &Common, a: &Validate, exec: Execution) -> anyhow::Result<Status> {
    if a.steps < 2 {
        return Err(usage("--steps must be at least 2"));
    }
    if !(a.tol.is_finite() && a.tol >= 0.0) {
        return Err(usage("--tol must be non-negative"));
    }
    let cfg = config(c, a.alpha)?;
    let grid = closed_grid(0.1 * PI, 0.9 * PI, a.steps);
    let d = exact_vs_asymptotic(&cfg, &grid, exec)?;
    let rows = [("E_f", d.sup_e_f, d.gamma_e_f), ("negativity", d.sup_negativity, d.gamma_negativity)];
    let pass = rows.iter().all(|r| r.1 <= a.tol);

    let (path, mut w) = create(&c.out, "validate.csv")?;
    writeln!(w, "alpha,n_max,quantity,sup_deviation,gamma_at_sup,tolerance,pass")?;
    for (q, dev, g) in rows {
        let ok = dev <= a.tol;
        writeln!(w, "{},{},{q},{},{},{},{ok}", fmt_num(a.alpha), cfg.n_max, fmt_num(dev), fmt_num(g), fmt_num(a.tol))?;
        println!("{q}: sup deviation {dev:.6e} at γ = {:.4}π ({})", g / PI, if ok { "ok" } else { "FAIL" });
    }
    w.flush()?;
    println!("wrote {}", path.display());
    println!("{}", if pass { "PASS" } else { "FAIL" });
    Ok(if pass { Status::Ok } else { Status::ValidationFailed })
}
