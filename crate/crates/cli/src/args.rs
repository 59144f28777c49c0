use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "hmf", version, about = "Hecke operators, spectral measures, Kloosterman sums and equidistribution checks")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// `Q` or `Q(sqrt m)`.
    #[arg(long, global = true, default_value = "Q")]
    pub field: String,
    /// Generator of the level ideal.
    #[arg(long, global = true, default_value = "1", allow_hyphen_values = true)]
    pub level: String,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for parallel paths; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    #[command(subcommand)]
    Field(FieldCmd),
    #[command(subcommand)]
    Hecke(HeckeCmd),
    #[command(subcommand)]
    Measure(MeasureCmd),
    #[command(subcommand)]
    Kloosterman(KloostermanCmd),
    #[command(subcommand)]
    Equidist(EquidistCmd),
}

#[derive(Subcommand, Debug)]
pub enum FieldCmd {
    /// Discriminant, defining polynomial and fundamental unit.
    Info,
    /// Prime ideals up to a norm bound, with labels.
    Primes {
        #[arg(long, default_value_t = 50)]
        max_norm: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum HeckeCmd {
    /// `T(p^2k) · T(p^2m)` by coset enumeration, checked against the algebra.
    VerifyRelation {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m: u32,
    },
    /// Coefficients of `S_{𝔭,2k}` in increasing powers of `λ`.
    Spoly {
        #[arg(long)]
        p: String,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum MeasureCmd {
    /// Mass of `[a, b]` under one of pl0, pl1, V1,0, V1,1, npl0, npl1.
    Eval {
        #[arg(long)]
        kind: String,
        #[arg(long, value_parser = parse_span, allow_hyphen_values = true)]
        interval: (f64, f64),
    },
    /// `Φ_𝔭` of an interval or of `S_{𝔭,2k}`.
    Phi {
        #[arg(long)]
        p: String,
        #[arg(long, value_parser = parse_span, allow_hyphen_values = true, conflicts_with = "spoly", required_unless_present = "spoly")]
        interval: Option<(f64, f64)>,
        #[arg(long)]
        spoly: Option<usize>,
    },
    /// `pl(Ω_t)` and `V₁(Ω_t)` of a box given as JSON or a JSON file.
    Box {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
    },
}

#[derive(Subcommand, Debug)]
pub enum KloostermanCmd {
    /// One sum with its conjugation symmetries.
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        #[arg(long, allow_hyphen_values = true)]
        rp: String,
        /// JSON list of `{"unit": [...], "order": n, "exponent": k}` modulo the level.
        #[arg(long)]
        chi: Option<PathBuf>,
    },
    /// `|K| / bound` for every modulus up to a norm bound.
    Scan {
        #[arg(long)]
        max_norm: u64,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        r: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        rp: String,
        #[arg(long)]
        chi: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum EquidistCmd {
    /// Synthetic records drawn from the limit law.
    Synth {
        #[arg(long = "box")]
        omega: String,
        /// Growth parameter at which growing coordinates are sampled.
        #[arg(long)]
        t: f64,
        /// Comma-separated prime labels.
        #[arg(long, value_delimiter = ',')]
        primes: Vec<String>,
        #[arg(long, default_value_t = 10_000)]
        count: usize,
    },
    /// Records and the raw table from the Ramanujan `τ` function.
    Tau {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        /// Also write `n,tau` as CSV here.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Counts against predictions over a grid of `t`.
    Run {
        /// JSON Lines dataset, or CSV when the name ends in `.csv`.
        #[arg(long)]
        data: PathBuf,
        #[arg(long = "box")]
        omega: String,
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<f64>,
        /// `2:0=[0,1];3:0=(1,2]`.
        #[arg(long, default_value = "")]
        intervals: String,
        /// A positive number, or `index` for the level index.
        #[arg(long, default_value = "1")]
        covolume: String,
        /// Rescale weights so the total equals the unrestricted prediction at this `t`.
        #[arg(long)]
        calibrate_at: Option<f64>,
        /// Where to write the JSON summary when the report is CSV.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
}

fn parse_span(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected a:b, got {s:?}"))?;
    let a: f64 = a.trim().parse().map_err(|_| format!("bad number {a:?}"))?;
    let b: f64 = b.trim().parse().map_err(|_| format!("bad number {b:?}"))?;
    Ok((a, b))
}
