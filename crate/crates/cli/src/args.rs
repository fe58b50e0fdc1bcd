use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "unicrit",
    version,
    about = "Exact polynomial families, norm certificates and parameter rays for z^n + c"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Cache directory for computed families and reports.
    #[arg(long, env = "UNICRIT_CACHE", global = true)]
    pub cache_dir: Option<PathBuf>,
    #[command(flatten)]
    pub limits: LimitArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct LimitArgs {
    /// Largest allowed iterate degree n^k.
    #[arg(long, global = true)]
    pub degree_cap: Option<u64>,
    /// Largest number of periodic points fed to an elimination.
    #[arg(long, global = true)]
    pub elimination_cap: Option<u64>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Polynomial families.
    #[command(subcommand)]
    Poly(PolyCmd),
    /// Arithmetic claims, checked with witnesses.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Parameter rays.
    #[command(subcommand)]
    Ray(RayCmd),
    /// Factor counts for the single-Galois-orbit question.
    Galois(GaloisArgs),
    /// Cache maintenance.
    #[command(subcommand)]
    Cache(CacheCmd),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CoordArg {
    C,
    Chat,
    B,
    Bhat,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormArg {
    /// z^n + c
    Unicritical,
    /// (w^n + b)/n
    Normalized,
    /// chat x^n + 1
    CriticalValue,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PolyCmd {
    /// k-th iterate as a polynomial in the dynamical variable and the parameter.
    Iterate {
        #[arg(long)]
        n: u32,
        /// Number of iterations.
        #[arg(long)]
        h: u32,
        #[arg(long, value_enum, default_value_t = FormArg::Normalized)]
        form: FormArg,
    },
    /// Exact-period-h dynatomic polynomial.
    Dynatomic {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        h: u32,
        #[arg(long, value_enum, default_value_t = FormArg::Unicritical)]
        form: FormArg,
    },
    /// Centers of period h.
    Gleason {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        h: u32,
        #[arg(long, value_enum, default_value_t = CoordArg::C)]
        coord: CoordArg,
    },
    /// Parameters whose critical orbit has preperiod t and period h.
    Misiurewicz {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        h: u32,
        /// Root-of-unity order (defaults to n).
        #[arg(long)]
        tau: Option<u32>,
        #[arg(long, value_enum, default_value_t = CoordArg::C)]
        coord: CoordArg,
    },
    /// Parameters with a period-h cycle whose multiplier is a primitive m-th root of unity.
    Parabolic {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        h: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum, default_value_t = CoordArg::C)]
        coord: CoordArg,
    },
    /// Rewrite a parameter polynomial in another coordinate.
    Transform {
        #[arg(long)]
        n: u32,
        /// Polynomial text, e.g. "b^2 + b + 7".
        #[arg(long)]
        poly: String,
        #[arg(long, value_enum)]
        from: CoordArg,
        /// Target coordinate.
        #[arg(long, value_enum)]
        coord: CoordArg,
    },
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct VerifyOpts {
    /// Polynomials above this degree are not factored.
    #[arg(long, default_value_t = 256)]
    pub factor_degree_cap: usize,
    /// Record elapsed time (reports are then no longer reproducible byte for byte).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepClaim {
    Thm14,
    Thm31,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyCmd {
    /// Norm divisibility at parabolic parameters.
    Thm14 {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        h: u32,
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        opts: VerifyOpts,
    },
    /// Norms at Misiurewicz parameters (with --t) or at centers (without).
    Thm31 {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        t: Option<u32>,
        #[arg(long)]
        h: u32,
        #[arg(long)]
        tau: Option<u32>,
        #[command(flatten)]
        opts: VerifyOpts,
    },
    /// Monic structure of the iterate polynomials.
    Monic {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        h: u32,
        #[command(flatten)]
        opts: VerifyOpts,
    },
    /// Multiplier congruences at a rational parameter (give exactly one of --c, --b).
    Congruences {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        #[arg(long)]
        h: u32,
        #[command(flatten)]
        opts: VerifyOpts,
    },
    /// Divided differences along period-h orbits are units.
    Units {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long)]
        h: u32,
        #[command(flatten)]
        opts: VerifyOpts,
    },
    /// All cells of a claim over a range.
    Sweep {
        #[arg(long, value_enum)]
        claim: SweepClaim,
        #[arg(long, value_delimiter = ',', default_values_t = [2u32, 3, 4])]
        degrees: Vec<u32>,
        #[arg(long, default_value_t = 6)]
        max_ray_period: u32,
        #[arg(long, default_value_t = 6)]
        max_orbit_length: u32,
        #[arg(long, default_value_t = 5)]
        max_center_period: u32,
        #[command(flatten)]
        opts: VerifyOpts,
    },
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct TraceOpts {
    #[arg(long, default_value_t = 32.0)]
    pub potential_start: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub potential_end: f64,
    #[arg(long, default_value_t = 12)]
    pub steps_per_halving: u32,
    #[arg(long, default_value_t = 256)]
    pub precision_bits: usize,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RayCmd {
    /// Trace one ray and emit the path.
    Trace {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        angle: String,
        #[command(flatten)]
        trace: TraceOpts,
    },
    /// Trace, extrapolate, and match the landing point against exact candidates.
    Land {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        angle: String,
        /// `parabolic:h,m`, `misiurewicz:t,h[,tau]`, `gleason:h`, or `poly:<text in c>`;
        /// defaults to the families of the angle's type.
        #[arg(long, value_delimiter = ';')]
        candidates: Vec<String>,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
        #[arg(long, default_value_t = 10.0)]
        margin: f64,
        /// Skip snapping to the angle's combinatorial type.
        #[arg(long)]
        no_refine: bool,
        #[command(flatten)]
        trace: TraceOpts,
    },
    /// Angles in the upper half plane with period at most --max-period.
    Angles {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 4)]
        max_period: u32,
        /// Also land each ray against its default candidates.
        #[arg(long)]
        land: bool,
        #[command(flatten)]
        trace: TraceOpts,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GaloisFamily {
    Gleason,
    Misiurewicz,
    Parabolic,
}

#[derive(Args, Debug, Serialize)]
pub struct GaloisArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, value_enum)]
    pub kind: GaloisFamily,
    #[arg(long)]
    pub h: u32,
    #[arg(long)]
    pub t: Option<u32>,
    #[arg(long)]
    pub tau: Option<u32>,
    #[arg(long)]
    pub m: Option<u32>,
    #[command(flatten)]
    pub opts: VerifyOpts,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CacheCmd {
    /// Evict least recently used entries down to a byte budget.
    Gc {
        #[arg(long)]
        max_bytes: u64,
    },
    /// Entry count and size.
    Stat,
}
