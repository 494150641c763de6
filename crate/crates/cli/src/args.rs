use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use z2harm::report::Format;

#[derive(Debug, Parser)]
#[command(name = "z2harm", version, about = "Z2-harmonic spinor and 1-form bookkeeping on Seifert-fibered 3-manifolds")]
pub struct Cli {
    /// Output format on standard output.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Plain)]
    pub format: FormatArg,
    /// Also write the structured report here (CSV if the path ends in .csv, JSON otherwise).
    #[arg(long, global = true, value_name = "PATH")]
    pub report: Option<PathBuf>,
    /// Fan out mode sweeps over threads.
    #[arg(long, global = true)]
    pub parallel: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Plain,
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Plain => Format::Plain,
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Orbifold surface and line bundle arithmetic, or Seifert invariants.
    #[command(allow_negative_numbers = true)]
    Invariants(InvariantsArgs),
    /// Existence of fiber-invariant Z2-harmonic spinors or 1-forms.
    #[command(subcommand)]
    Exists(ExistsCommand),
    /// Seifert invariants of the Brieskorn sphere with the given exponents.
    Brieskorn {
        /// Pairwise coprime exponents, e.g. 2,3,5.
        #[arg(value_delimiter = ',', required = true)]
        exponents: Vec<u32>,
    },
    /// Connected-sum bookkeeping.
    #[command(subcommand)]
    Sum(SumCommand),
    /// Model-neck spectral computations.
    #[command(subcommand)]
    Neck(NeckCommand),
    /// Regression against the catalog of worked examples.
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Debug, Args)]
pub struct InvariantsArgs {
    /// Orbifold surface "g;a1,a2,...".
    #[arg(long, conflicts_with = "seifert", required_unless_present = "seifert")]
    pub surface: Option<String>,
    /// Line bundle "b;beta1,beta2,..." on the surface.
    #[arg(long, requires = "surface")]
    pub bundle: Option<String>,
    /// Second bundle to tensor with.
    #[arg(long, requires = "bundle")]
    pub tensor: Option<String>,
    /// Tensor power of the bundle.
    #[arg(long, requires = "bundle")]
    pub power: Option<i64>,
    /// Seifert invariants "g,b,a1:beta1,...".
    #[arg(long)]
    pub seifert: Option<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Default)]
pub enum ConventionArg {
    #[default]
    Positive,
    Negative,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct TwistArgs {
    /// Seifert invariants "g,b,a1:beta1,...".
    #[arg(long)]
    pub seifert: String,
    /// Twist k of the spinor bundle.
    #[arg(long, default_value_t = 1)]
    pub k: i64,
    /// Degree of the auxiliary bundle.
    #[arg(long, default_value_t = 0)]
    pub aux: i64,
    #[arg(long, value_enum, default_value_t = ConventionArg::Positive)]
    pub convention: ConventionArg,
    /// Require at least one section beyond the zero count.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Subcommand)]
pub enum ExistsCommand {
    Spinor(TwistArgs),
    Spinc(TwistArgs),
    Oneform {
        #[arg(long)]
        seifert: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SummandArg {
    Twisted(u64),
    Untwisted(u64),
}

pub fn parse_summand(s: &str) -> Result<SummandArg, String> {
    let (kind, n) = s.split_once(':').ok_or("use twisted:<h1-> or untwisted:<b1>")?;
    let n: u64 = n.parse().map_err(|_| format!("bad count {n:?}"))?;
    match kind {
        "twisted" => Ok(SummandArg::Twisted(n)),
        "untwisted" => Ok(SummandArg::Untwisted(n)),
        _ => Err(format!("unknown summand kind {kind:?}")),
    }
}

#[derive(Debug, Subcommand)]
pub enum SumCommand {
    /// dim H^1_- of a connected sum.
    H1 {
        #[arg(long, value_parser = parse_summand)]
        a: SummandArg,
        #[arg(long, value_parser = parse_summand)]
        b: SummandArg,
    },
    /// Zeros of the glued quadratic differential.
    Zeros {
        #[arg(long)]
        g1: u64,
        #[arg(long)]
        g2: u64,
    },
    /// Genus of the branched double cover of the glued surface.
    Genus {
        #[arg(long)]
        g1: u64,
        #[arg(long)]
        g2: u64,
    },
    /// Representation-variety dimensions and the stratum gap.
    Dims {
        #[arg(long)]
        d1: u64,
        #[arg(long)]
        d2: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ConditionArg {
    I,
    Ii,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RegimeArg {
    SpinorNeckStretch,
    OneformPinch,
    TorusPinch,
}

#[derive(Debug, Subcommand)]
#[command(allow_negative_numbers = true)]
pub enum NeckCommand {
    /// Spectral flow windows, and kernel/cokernel at one weight.
    #[command(allow_negative_numbers = true)]
    Flow {
        #[arg(long, default_value_t = 1)]
        degree: i32,
        /// Report kernel and cokernel at this weight.
        #[arg(long)]
        mu: Option<f64>,
        /// Half-width of the weight range tabulated.
        #[arg(long, default_value_t = 2.0)]
        span: f64,
    },
    /// Integrate the mode ODEs and fit their decay rates.
    #[command(allow_negative_numbers = true)]
    Ode {
        #[arg(long, default_value_t = 1)]
        degree: i32,
        #[arg(long, default_value_t = -5)]
        k_min: i64,
        #[arg(long, default_value_t = 5)]
        k_max: i64,
        #[arg(long, default_value_t = 20.0)]
        s_max: f64,
        #[arg(long, default_value_t = 1e-10)]
        rel_tol: f64,
    },
    /// Kernel and cokernel on the finite cylinder.
    #[command(allow_negative_numbers = true)]
    Bvp {
        #[arg(long, default_value_t = 50.0)]
        r0: f64,
        #[arg(long, value_enum)]
        condition: ConditionArg,
        #[arg(long, default_value_t = 0.0)]
        mu: f64,
        /// Fourier modes -M..=M of each component.
        #[arg(long, default_value_t = 6)]
        modes: i64,
        /// Grid intervals per mode.
        #[arg(long, default_value_t = 400)]
        points: usize,
    },
    /// Norm profile of the rescaled cokernel element.
    #[command(allow_negative_numbers = true)]
    Profile {
        #[arg(long, default_value_t = 0.0)]
        mu: f64,
        #[arg(long, value_delimiter = ',', default_value = "20,200,2000")]
        r0: Vec<f64>,
        /// Radius of the fixed core.
        #[arg(long, default_value_t = 10.0)]
        core: f64,
    },
    /// Bessel mode solution and its residual.
    #[command(allow_negative_numbers = true)]
    Bessel {
        #[arg(long, default_value_t = 0)]
        k: i64,
        #[arg(long)]
        ell: i64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 0.0)]
        mu: f64,
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,5,10")]
        r: Vec<f64>,
        /// Also compare the normalized cokernel against its asymptotics on [-R0, R0].
        #[arg(long)]
        r0: Option<f64>,
    },
    /// Pairing of a perturbation against the Bessel cokernel.
    #[command(allow_negative_numbers = true)]
    Pairing {
        #[arg(long, value_delimiter = ',', default_value = "64,128,256,512,1024")]
        ell: Vec<i64>,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        #[arg(long, default_value_t = 20.0)]
        r0: f64,
        #[arg(long, default_value_t = 0.0)]
        mu: f64,
        /// Spinor constant c as "re,im".
        #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
        c: String,
        /// Spinor constant d as "re,im".
        #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
        d: String,
        /// Perturbation components "re1,im1,re2,im2".
        #[arg(long, default_value = "1,0,0,0", allow_hyphen_values = true)]
        xi: String,
        /// Width of a smooth cutoff ramp; sharp when absent.
        #[arg(long)]
        cutoff_width: Option<f64>,
    },
    /// Index of the torus-neck operator.
    Index {
        #[arg(long)]
        delta: f64,
    },
    /// Predicted approximate-solution error and its exponent fit.
    #[command(allow_negative_numbers = true)]
    Rates {
        #[arg(long, value_enum)]
        regime: RegimeArg,
        /// T for the neck stretch, delta otherwise.
        #[arg(long)]
        param: f64,
        #[arg(long, default_value_t = 0.0)]
        mu: f64,
        /// Fit the exponent over the default parameter sweep.
        #[arg(long)]
        fit: bool,
    },
    /// Spectra, flows and weight window of the S^2 neck.
    S2 {
        #[arg(long, default_value_t = 4)]
        levels: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogCommand {
    Verify {
        /// Catalog file; the built-in catalog when absent.
        #[arg(long)]
        file: Option<PathBuf>,
    },
}
