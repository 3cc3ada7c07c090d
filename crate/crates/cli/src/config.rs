use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, ensure, Context, Result};
use clap::{Parser, ValueEnum};
use pqmkz::{Function1D, OperatorConfig, PQParams, Polynomial, SeqScheme, UniformGrid};

#[derive(Parser, Debug, Clone)]
#[command(
    name = "pqmkz",
    version,
    about = "Evaluate and verify (p,q)-Meyer-König-Zeller Durrmeyer operators"
)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: CommandKind,
    /// Operator degree (for statdemo: the largest index N)
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub q: Option<f64>,
    /// Use a sequence scheme (p_n, q_n) instead of fixed p, q
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeId>,
    #[arg(long, requires = "scheme")]
    pub cp: Option<f64>,
    #[arg(long, requires = "scheme")]
    pub cq: Option<f64>,
    /// Stop the weight series once the missing mass is below this
    #[arg(long, conflicts_with = "fixed_k")]
    pub tail_tol: Option<f64>,
    /// Sum the weight series over k = 0..=K exactly
    #[arg(long)]
    pub fixed_k: Option<usize>,
    /// x grid as lo:hi:points
    #[arg(long)]
    pub grid: Option<GridSpec>,
    /// Output file (figures: output directory); stdout if omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// quadratic | cubic | quartic | quintic | e<i> | abs | poly:c0,c1,...
    #[arg(long)]
    pub function: Option<FunctionSpec>,
    /// Constant in the ω₂ error bound
    #[arg(long = "C")]
    pub c: Option<f64>,
    /// Threshold for the density profiles
    #[arg(long)]
    pub eps: Option<f64>,
    /// Run the command's built-in checks instead of producing its output
    #[arg(long)]
    pub self_test: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Eval,
    Moments,
    Bounds,
    Converge,
    Figures,
    Statdemo,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Eval => "eval",
            Self::Moments => "moments",
            Self::Bounds => "bounds",
            Self::Converge => "converge",
            Self::Figures => "figures",
            Self::Statdemo => "statdemo",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeId {
    Remark1,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamSource {
    /// Neither given; each command picks its own default.
    Unspecified,
    Pair(PQParams),
    Scheme(SeqScheme),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Truncation {
    TailTol(f64),
    /// Last summed index, inclusive.
    FixedK(usize),
}

impl Truncation {
    pub fn apply(self, config: OperatorConfig) -> OperatorConfig {
        match self {
            Self::TailTol(tol) => config.with_tail_tol(tol),
            Self::FixedK(k) => config.with_fixed_last_index(k),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl GridSpec {
    pub const fn new(lo: f64, hi: f64, points: usize) -> Self {
        Self { lo, hi, points }
    }

    pub fn grid(&self) -> Result<UniformGrid> {
        Ok(UniformGrid::new(self.lo, self.hi, self.points)?)
    }
}

impl FromStr for GridSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        ensure!(parts.len() == 3, "grid must be lo:hi:points, got {s:?}");
        let lo = parts[0]
            .trim()
            .parse()
            .with_context(|| format!("grid lo in {s:?}"))?;
        let hi = parts[1]
            .trim()
            .parse()
            .with_context(|| format!("grid hi in {s:?}"))?;
        let points = parts[2]
            .trim()
            .parse()
            .with_context(|| format!("grid points in {s:?}"))?;
        let spec = Self { lo, hi, points };
        spec.grid()?;
        Ok(spec)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.points)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    Named(String),
    Poly(Vec<f64>),
}

impl FunctionSpec {
    pub fn function(&self) -> Function1D {
        match self {
            Self::Poly(c) => Function1D::polynomial(Polynomial::new(c.clone())).named(self.label()),
            Self::Named(name) => match name.as_str() {
                "abs" => Function1D::from_fn(|t| (t - 0.5).abs()).named("abs"),
                e if e.starts_with('e') => Function1D::monomial(e[1..].parse().unwrap()),
                other => Function1D::figure_functions()
                    .into_iter()
                    .find(|f| f.name() == Some(other))
                    .expect("validated at parse time"),
            },
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Named(name) => name.clone(),
            Self::Poly(c) => {
                let coeffs: Vec<String> = c.iter().map(f64::to_string).collect();
                format!("poly:{}", coeffs.join(","))
            }
        }
    }

    /// Ascending coefficients, if the function is a polynomial.
    pub fn coefficients(&self) -> Option<Vec<f64>> {
        self.function().as_polynomial().map(|p| p.coeffs().to_vec())
    }
}

impl FromStr for FunctionSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(rest) = s.strip_prefix("poly:") {
            let coeffs = rest
                .split(',')
                .map(|c| {
                    c.trim()
                        .parse::<f64>()
                        .with_context(|| format!("coefficient {c:?}"))
                })
                .collect::<Result<Vec<_>>>()?;
            ensure!(
                coeffs.iter().all(|c| c.is_finite()),
                "coefficients must be finite"
            );
            return Ok(Self::Poly(coeffs));
        }
        let known = ["quadratic", "cubic", "quartic", "quintic", "abs"];
        let monomial = s
            .strip_prefix('e')
            .is_some_and(|d| d.parse::<u8>().is_ok_and(|d| d <= 20));
        if known.contains(&s) || monomial {
            Ok(Self::Named(s.to_string()))
        } else {
            bail!("unknown function {s:?}; expected one of {known:?}, e0..e20 or poly:c0,c1,...")
        }
    }
}

/// Everything a command needs; identical configs give identical output.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub n: Option<u32>,
    pub params: ParamSource,
    pub grid: Option<GridSpec>,
    pub truncation: Option<Truncation>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub function: Option<FunctionSpec>,
    pub c: Option<f64>,
    pub eps: Option<f64>,
    pub self_test: bool,
}

impl RunConfig {
    pub fn new(command: CommandKind) -> Self {
        Self {
            command,
            n: None,
            params: ParamSource::Unspecified,
            grid: None,
            truncation: None,
            out: None,
            format: None,
            function: None,
            c: None,
            eps: None,
            self_test: false,
        }
    }

    pub fn from_cli(cli: Cli) -> Result<Self> {
        let params = match (cli.p, cli.q, cli.scheme) {
            (None, None, None) => ParamSource::Unspecified,
            (Some(p), Some(q), None) => ParamSource::Pair(PQParams::new(p, q)?),
            (None, None, Some(SchemeId::Remark1)) => {
                let d = SeqScheme::default();
                ParamSource::Scheme(SeqScheme::remark1(
                    cli.cp.unwrap_or(d.c_p()),
                    cli.cq.unwrap_or(d.c_q()),
                )?)
            }
            (_, _, Some(_)) => bail!("give either --p/--q or --scheme, not both"),
            _ => bail!("--p and --q must be given together"),
        };
        let truncation = match (cli.tail_tol, cli.fixed_k) {
            (Some(tol), _) => {
                ensure!(
                    tol > 0.0 && tol < 1.0,
                    "--tail-tol must lie in (0, 1), got {tol}"
                );
                Some(Truncation::TailTol(tol))
            }
            (None, Some(k)) => {
                ensure!(k >= 1, "--fixed-k must be >= 1");
                Some(Truncation::FixedK(k))
            }
            (None, None) => None,
        };
        if let Some(n) = cli.n {
            ensure!(n >= 1, "--n must be >= 1");
        }
        if let Some(c) = cli.c {
            ensure!(c > 0.0, "--C must be > 0, got {c}");
        }
        if let Some(eps) = cli.eps {
            ensure!(eps > 0.0, "--eps must be > 0, got {eps}");
        }
        Ok(Self {
            command: cli.command,
            n: cli.n,
            params,
            grid: cli.grid,
            truncation,
            out: cli.out,
            format: cli.format,
            function: cli.function,
            c: cli.c,
            eps: cli.eps,
            self_test: cli.self_test,
        })
    }
}
