//! Command-line flags, the optional JSON config file, and their merge.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "SPHERE_HECKE_OUT";

/// Degrees above this are refused; the dense eigenproblems get slow past it.
pub const ELL_CAP: usize = 240;

#[derive(Parser, Debug)]
#[command(
    name = "sphere-hecke",
    version,
    about = "Hecke eigenfunctions on the sphere and their restrictions to arithmetic geodesics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Flags,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Hurwitz quaternions of norm n and the sphere points E(n)
    Enumerate,
    /// Class number, c_D, the Gauss check and the geodesic family
    Class,
    /// Hecke matrices on the invariant subspaces
    Hecke,
    /// Joint eigenbases with eigenvalue tables
    Eigen,
    /// Restriction norms along C_D by both routes
    Restrict,
    /// Restriction norm sweep with the log-log slope
    Sweep,
    /// Theta lifts of the eigenfunctions
    Theta,
    /// CM theta series
    Cm,
    /// Central values by the approximate functional equation
    Afe,
    /// The invariant suite; nonzero exit on any failure
    Verify,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Full,
    Cosets,
}

#[derive(Args, Debug, Default)]
pub struct Flags {
    /// JSON config file; flags override its entries
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Discriminants, comma separated
    #[arg(short = 'D', long = "D", global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub d: Option<Vec<i64>>,
    #[arg(long, global = true)]
    pub lmin: Option<usize>,
    #[arg(long, global = true)]
    pub lmax: Option<usize>,
    /// Coefficient cap
    #[arg(short = 'M', long = "M", global = true)]
    pub m: Option<usize>,
    /// Norms for `enumerate`, Hecke indices for `hecke`/`eigen`, angular indices for `cm`/`afe`
    #[arg(short = 'n', long = "n", global = true, value_delimiter = ',')]
    pub n: Option<Vec<u64>>,
    /// Root number supplied to `afe`
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub epsilon: Option<i32>,
    #[arg(long, global = true, value_enum)]
    pub mode: Option<Mode>,
    /// Output file; defaults to `$SPHERE_HECKE_OUT/<command>.<format>` or stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Two-column `log ℓ  log norm²` file for `sweep`
    #[arg(long, global = true)]
    pub plot: Option<PathBuf>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Exact-arithmetic subset of `verify`
    #[arg(long, global = true)]
    pub quick: bool,
    #[arg(long = "tol-algebra", global = true, allow_negative_numbers = true)]
    pub tol_algebra: Option<f64>,
    #[arg(long = "tol-symmetry", global = true, allow_negative_numbers = true)]
    pub tol_symmetry: Option<f64>,
    #[arg(long = "tol-deligne", global = true, allow_negative_numbers = true)]
    pub tol_deligne: Option<f64>,
    #[arg(long = "tol-lift", global = true, allow_negative_numbers = true)]
    pub tol_lift: Option<f64>,
    #[arg(long = "tol-vanish", global = true, allow_negative_numbers = true)]
    pub tol_vanish: Option<f64>,
    #[arg(long = "tol-route", global = true, allow_negative_numbers = true)]
    pub tol_route: Option<f64>,
    #[arg(long = "tol-y", global = true, allow_negative_numbers = true)]
    pub tol_y: Option<f64>,
    #[arg(long = "tol-slope", global = true, allow_negative_numbers = true)]
    pub tol_slope: Option<f64>,
    #[arg(long = "tol-afe", global = true, allow_negative_numbers = true)]
    pub tol_afe: Option<f64>,
    #[arg(long = "tol-partition", global = true, allow_negative_numbers = true)]
    pub tol_partition: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub algebra: f64,
    pub symmetry: f64,
    pub deligne: f64,
    pub lift: f64,
    pub vanish: f64,
    pub route: f64,
    pub y: f64,
    pub slope: f64,
    pub afe: f64,
    pub partition: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            algebra: 1e-8,
            symmetry: 1e-10,
            deligne: 1e-6,
            lift: 1e-6,
            vanish: 1e-9,
            route: 1e-8,
            y: 1e-10,
            slope: 0.5,
            afe: 1e-3,
            partition: 1e-12,
        }
    }
}

/// Config file contents; every entry is optional.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(rename = "D")]
    pub d: Option<Vec<i64>>,
    pub lmin: Option<usize>,
    pub lmax: Option<usize>,
    #[serde(rename = "M")]
    pub m: Option<usize>,
    pub n: Option<Vec<u64>>,
    pub epsilon: Option<i32>,
    pub mode: Option<Mode>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub plot: Option<PathBuf>,
    pub threads: Option<usize>,
    pub quick: Option<bool>,
    pub tol: Option<Tolerances>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    #[serde(rename = "D")]
    pub d: Vec<i64>,
    pub lmin: usize,
    pub lmax: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub n: Vec<u64>,
    pub epsilon: i32,
    pub mode: Mode,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub plot: Option<PathBuf>,
    pub threads: Option<usize>,
    pub quick: bool,
    pub tol: Tolerances,
}

pub fn read_file_config(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    serde_json::from_str(&text)
        .map_err(|e| anyhow::anyhow!("config {}: line {}, column {}: {}", path.display(), e.line(), e.column(), e))
}

fn default_d(command: Command) -> Vec<i64> {
    match command {
        Command::Class => vec![-20],
        Command::Restrict => vec![-8, -20, -24],
        _ => vec![-8],
    }
}

fn default_n(command: Command) -> Vec<u64> {
    match command {
        Command::Enumerate => vec![1, 3, 5],
        Command::Hecke => vec![3],
        Command::Eigen => vec![3, 5, 7, 11, 13],
        _ => vec![1],
    }
}

fn default_lrange(command: Command) -> (usize, usize) {
    match command {
        Command::Sweep => (3, 60),
        Command::Theta | Command::Afe => (3, 3),
        Command::Restrict => (3, 20),
        _ => (0, 12),
    }
}

/// Flags win over the file, the file over the defaults.
pub fn merge(command: Command, flags: &Flags, file: FileConfig) -> Result<RunConfig> {
    let (lmin0, lmax0) = default_lrange(command);
    let mut tol = file.tol.unwrap_or_default();
    let overrides = [
        (flags.tol_algebra, &mut tol.algebra),
        (flags.tol_symmetry, &mut tol.symmetry),
        (flags.tol_deligne, &mut tol.deligne),
        (flags.tol_lift, &mut tol.lift),
        (flags.tol_vanish, &mut tol.vanish),
        (flags.tol_route, &mut tol.route),
        (flags.tol_y, &mut tol.y),
        (flags.tol_slope, &mut tol.slope),
        (flags.tol_afe, &mut tol.afe),
        (flags.tol_partition, &mut tol.partition),
    ];
    for (flag, slot) in overrides {
        if let Some(v) = flag {
            *slot = v;
        }
    }
    let cfg = RunConfig {
        command,
        d: flags.d.clone().or(file.d).unwrap_or_else(|| default_d(command)),
        lmin: flags.lmin.or(file.lmin).unwrap_or(lmin0),
        lmax: flags.lmax.or(file.lmax).unwrap_or(lmax0),
        m: flags.m.or(file.m).unwrap_or(if command == Command::Afe { 1024 } else { 40 }),
        n: flags.n.clone().or(file.n).unwrap_or_else(|| default_n(command)),
        epsilon: flags.epsilon.or(file.epsilon).unwrap_or(1),
        mode: flags.mode.or(file.mode).unwrap_or(Mode::Full),
        out: flags.out.clone().or(file.out),
        format: flags.format.or(file.format).unwrap_or(Format::Json),
        plot: flags.plot.clone().or(file.plot),
        threads: flags.threads.or(file.threads),
        quick: flags.quick || file.quick.unwrap_or(false),
        tol,
    };
    cfg.validate()?;
    Ok(cfg)
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.d.is_empty() {
            bail!("D list is empty");
        }
        if self.n.is_empty() {
            bail!("n list is empty");
        }
        if self.lmin > self.lmax {
            bail!("empty degree range: lmin = {} > lmax = {}", self.lmin, self.lmax);
        }
        if self.lmax > ELL_CAP {
            bail!("degree {} is infeasible here; use --lmax {} or less", self.lmax, ELL_CAP);
        }
        if self.m == 0 {
            bail!("coefficient cap M must be positive");
        }
        if self.threads == Some(0) {
            bail!("--threads must be positive");
        }
        if self.epsilon != 1 && self.epsilon != -1 {
            bail!("root number must be 1 or -1, got {}", self.epsilon);
        }
        let t = &self.tol;
        for (name, v) in [
            ("algebra", t.algebra),
            ("symmetry", t.symmetry),
            ("deligne", t.deligne),
            ("lift", t.lift),
            ("vanish", t.vanish),
            ("route", t.route),
            ("y", t.y),
            ("slope", t.slope),
            ("afe", t.afe),
            ("partition", t.partition),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                bail!("tolerance {name} must be positive, got {v}");
            }
        }
        Ok(())
    }

    /// Explicit `--out`, else `$SPHERE_HECKE_OUT/<command>.<ext>`, else stdout.
    pub fn output_path(&self) -> Option<PathBuf> {
        if let Some(p) = &self.out {
            return Some(p.clone());
        }
        let dir = std::env::var_os(OUT_DIR_ENV)?;
        let ext = match self.format {
            Format::Json => "json",
            Format::Csv => "csv",
        };
        let name = serde_json::to_value(self.command).ok()?.as_str()?.to_string();
        Some(PathBuf::from(dir).join(format!("{name}.{ext}")))
    }
}
