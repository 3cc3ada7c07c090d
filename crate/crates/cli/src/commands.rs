use anyhow::{bail, ensure, Result};
use pqmkz::{
    alpha_n, apply, apply_monomial, central_moment, corollary1_bounds, delta_n, error_bound_check,
    st_convergence_check, sup_error, theorem1_bounds, BoundsReport, Function1D, ModulusGrid,
    OperatorConfig, PQParams, SeqScheme, UniformGrid,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{
    CommandKind, Format, FunctionSpec, GridSpec, ParamSource, RunConfig, Truncation,
};
use crate::output::{csv_document, json_document, num, Artifact, Outcome};
use crate::selftest;
use crate::svg::{self, Series};

pub const DEFAULT_PAIR: (f64, f64) = (0.95, 0.9);
pub const BOUNDS_PAIRS: [(f64, f64); 3] = [(1.0, 0.9), (0.95, 0.9), (0.9, 0.8)];
pub const BOUNDS_DEGREES: [u32; 3] = [5, 10, 25];
pub const FIGURE_N: u32 = 25;
pub const FIGURE_K: usize = 150;
pub const FIGURE_GRID: GridSpec = GridSpec::new(0.0, 0.995, 200);
pub const FIGURE_FUNCTIONS: [&str; 4] = ["quadratic", "cubic", "quartic", "quintic"];
const EVAL_N: u32 = 25;
const EVAL_GRID: GridSpec = GridSpec::new(0.0, 0.95, 20);
const CONVERGE_START: u32 = 10;
const CONVERGE_STEPS: u32 = 4;
const CONVERGE_GRID: GridSpec = GridSpec::new(0.0, 0.99, 100);
const STAT_N: u64 = 10_000;
const STAT_EPS: f64 = 0.01;

/// Runs one command and returns its rendered outputs.
pub fn run(config: &RunConfig) -> Result<Outcome> {
    if config.self_test {
        return selftest::run(config);
    }
    match config.command {
        CommandKind::Eval => eval(config),
        CommandKind::Moments => moments(config),
        CommandKind::Bounds => bounds(config),
        CommandKind::Converge => converge(config),
        CommandKind::Figures => figures(config),
        CommandKind::Statdemo => statdemo(config),
    }
}

fn format(config: &RunConfig, allowed: &[Format], default: Format) -> Result<Format> {
    let format = config.format.unwrap_or(default);
    ensure!(
        allowed.contains(&format),
        "{} does not support --format {format:?}; choose from {allowed:?}",
        config.command.name()
    );
    Ok(format)
}

fn fixed_params(config: &RunConfig, n: u32) -> Result<PQParams> {
    Ok(match config.params {
        ParamSource::Pair(params) => params,
        ParamSource::Unspecified => PQParams::new(DEFAULT_PAIR.0, DEFAULT_PAIR.1)?,
        ParamSource::Scheme(scheme) => scheme.params(n)?,
    })
}

fn scheme(config: &RunConfig) -> Result<SeqScheme> {
    match config.params {
        ParamSource::Scheme(scheme) => Ok(scheme),
        ParamSource::Unspecified => Ok(SeqScheme::default()),
        ParamSource::Pair(_) => bail!(
            "{} works with a sequence scheme; use --scheme remark1 instead of --p/--q",
            config.command.name()
        ),
    }
}

fn operator_config(config: &RunConfig, n: u32, default: Truncation) -> Result<OperatorConfig> {
    let op = config
        .truncation
        .unwrap_or(default)
        .apply(OperatorConfig::new(n));
    op.validate()?;
    Ok(op)
}

/// Parameters echoed into JSON outputs and the figure manifest.
#[derive(Serialize)]
struct RunHeader {
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    scheme: Option<SchemeJson>,
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tail_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_terms: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    integral_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid: Option<GridJson>,
}

#[derive(Serialize)]
struct SchemeJson {
    name: &'static str,
    c_p: f64,
    c_q: f64,
}

#[derive(Serialize)]
struct GridJson {
    lo: f64,
    hi: f64,
    points: usize,
}

impl RunHeader {
    fn new(command: CommandKind) -> Self {
        Self {
            command: command.name(),
            n: None,
            p: None,
            q: None,
            scheme: None,
            k: None,
            tail_tol: None,
            max_terms: None,
            integral_tol: None,
            grid: None,
        }
    }

    fn operator(mut self, op: &OperatorConfig) -> Self {
        self.n = Some(op.n);
        match op.fixed_last_index {
            Some(k) => self.k = Some(k),
            None => {
                self.tail_tol = Some(op.tail_tol);
                self.max_terms = Some(op.max_terms);
            }
        }
        self.integral_tol = Some(op.integral_tol);
        self
    }

    fn truncation(mut self, op: &OperatorConfig) -> Self {
        self = self.operator(op);
        self.n = None;
        self
    }

    fn params(mut self, params: PQParams) -> Self {
        self.p = Some(params.p());
        self.q = Some(params.q());
        self
    }

    fn scheme(mut self, scheme: &SeqScheme) -> Self {
        self.scheme = Some(SchemeJson {
            name: "remark1",
            c_p: scheme.c_p(),
            c_q: scheme.c_q(),
        });
        self
    }

    fn grid(mut self, grid: GridSpec) -> Self {
        self.grid = Some(GridJson {
            lo: grid.lo,
            hi: grid.hi,
            points: grid.points,
        });
        self
    }
}

/// One point of `x ↦ (f(x), M(f; x))`.
#[derive(Debug, Clone, Copy, Serialize)]
pub(crate) struct EvalRow {
    pub x: f64,
    pub f: f64,
    #[serde(rename = "Mtilde")]
    pub mtilde: f64,
    pub abs_error: f64,
    pub k_used: usize,
    pub tail_bound: f64,
}

pub(crate) fn evaluate(
    f: &Function1D,
    grid: &UniformGrid,
    params: PQParams,
    op: &OperatorConfig,
) -> Result<Vec<EvalRow>> {
    let xs: Vec<f64> = grid.iter().collect();
    let rows = xs
        .par_iter()
        .map(|&x| {
            let eval = apply(f, x, params, op)?;
            let fx = f.eval(x);
            Ok(EvalRow {
                x,
                f: fx,
                mtilde: eval.value,
                abs_error: (eval.value - fx).abs(),
                k_used: eval.k_used,
                tail_bound: eval.tail_bound,
            })
        })
        .collect::<pqmkz::Result<Vec<_>>>()?;
    Ok(rows)
}

fn eval(config: &RunConfig) -> Result<Outcome> {
    let format = format(
        config,
        &[Format::Csv, Format::Json, Format::Svg],
        Format::Csv,
    )?;
    let n = config.n.unwrap_or(EVAL_N);
    let params = fixed_params(config, n)?;
    let op = operator_config(
        config,
        n,
        Truncation::TailTol(OperatorConfig::DEFAULT_TAIL_TOL),
    )?;
    let spec = config
        .function
        .clone()
        .unwrap_or_else(|| FunctionSpec::Named("quadratic".into()));
    let grid_spec = config.grid.unwrap_or(EVAL_GRID);
    let rows = evaluate(&spec.function(), &grid_spec.grid()?, params, &op)?;
    let contents = match format {
        Format::Csv => {
            let records: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        num(r.x),
                        num(r.f),
                        num(r.mtilde),
                        num(r.abs_error),
                        r.k_used.to_string(),
                        num(r.tail_bound),
                    ]
                })
                .collect();
            csv_document(
                &["x", "f", "Mtilde", "abs_error", "k_used", "tail_bound"],
                &records,
            )?
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                #[serde(flatten)]
                header: RunHeader,
                function: String,
                rows: &'a [EvalRow],
            }
            let mut header = RunHeader::new(config.command).operator(&op).params(params);
            header = header.grid(grid_spec);
            json_document(&Doc {
                header,
                function: spec.label(),
                rows: &rows,
            })?
        }
        Format::Svg => overlay(&spec.label(), n, params, &rows),
    };
    Ok(Outcome::single(contents, true))
}

fn overlay(label: &str, n: u32, params: PQParams, rows: &[EvalRow]) -> String {
    let xs: Vec<f64> = rows.iter().map(|r| r.x).collect();
    let fs: Vec<f64> = rows.iter().map(|r| r.f).collect();
    let ms: Vec<f64> = rows.iter().map(|r| r.mtilde).collect();
    svg::plot(
        &format!("{label}: n={n}, p={}, q={}", params.p(), params.q()),
        &xs,
        &[
            Series {
                label: "f",
                ys: &fs,
            },
            Series {
                label: "Mtilde",
                ys: &ms,
            },
        ],
    )
}

fn moments(config: &RunConfig) -> Result<Outcome> {
    let format = format(config, &[Format::Csv, Format::Json], Format::Csv)?;
    let n = config.n.unwrap_or(EVAL_N);
    let params = fixed_params(config, n)?;
    let op = operator_config(
        config,
        n,
        Truncation::TailTol(OperatorConfig::DEFAULT_TAIL_TOL),
    )?;
    let grid_spec = config.grid.unwrap_or(EVAL_GRID);
    let xs: Vec<f64> = grid_spec.grid()?.iter().collect();

    #[derive(Serialize)]
    struct Row {
        x: f64,
        e0: f64,
        e1: f64,
        e2: f64,
        psi1: f64,
        psi2: f64,
    }
    let rows = xs
        .par_iter()
        .map(|&x| {
            Ok(Row {
                x,
                e0: apply_monomial(0, x, params, &op)?.value,
                e1: apply_monomial(1, x, params, &op)?.value,
                e2: apply_monomial(2, x, params, &op)?.value,
                psi1: central_moment(1, x, params, &op)?,
                psi2: central_moment(2, x, params, &op)?,
            })
        })
        .collect::<pqmkz::Result<Vec<_>>>()?;
    let contents = match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                #[serde(flatten)]
                header: RunHeader,
                rows: &'a [Row],
            }
            let header = RunHeader::new(config.command)
                .operator(&op)
                .params(params)
                .grid(grid_spec);
            json_document(&Doc {
                header,
                rows: &rows,
            })?
        }
        _ => {
            let records: Vec<Vec<String>> = rows
                .iter()
                .map(|r| [r.x, r.e0, r.e1, r.e2, r.psi1, r.psi2].map(num).to_vec())
                .collect();
            csv_document(&["x", "e0", "e1", "e2", "psi1", "psi2"], &records)?
        }
    };
    Ok(Outcome::single(contents, true))
}

#[derive(Debug, Clone, Serialize)]
pub(crate) struct BoundRecord {
    pub n: u32,
    pub p: f64,
    pub q: f64,
    pub quantity: &'static str,
    pub x: f64,
    pub actual: f64,
    /// `null` when no lower bound applies.
    pub lower: f64,
    /// `null` when no upper bound applies.
    pub upper: f64,
    pub holds: bool,
}

/// Moment and central-moment bounds at every `(n, params, x)`.
pub(crate) fn bound_records(
    degrees: &[u32],
    params_for: impl Fn(u32) -> Result<Vec<PQParams>>,
    grid: &UniformGrid,
    truncation: Truncation,
) -> Result<Vec<BoundRecord>> {
    let mut jobs = Vec::new();
    for &n in degrees {
        for params in params_for(n)? {
            jobs.extend(grid.iter().map(|x| (n, params, x)));
        }
    }
    let per_point = jobs
        .par_iter()
        .map(|&(n, params, x)| {
            let op = truncation.apply(OperatorConfig::new(n));
            let reports: [(&'static str, BoundsReport); 5] = [
                ("e0", theorem1_bounds(0, x, params, &op)?),
                ("e1", theorem1_bounds(1, x, params, &op)?),
                ("e2", theorem1_bounds(2, x, params, &op)?),
                ("psi1", corollary1_bounds(1, x, params, &op)?),
                ("psi2", corollary1_bounds(2, x, params, &op)?),
            ];
            Ok(reports.map(|(quantity, r)| BoundRecord {
                n,
                p: params.p(),
                q: params.q(),
                quantity,
                x: r.x,
                actual: r.actual,
                lower: r.lower,
                upper: r.upper,
                holds: r.holds,
            }))
        })
        .collect::<pqmkz::Result<Vec<_>>>()?;
    Ok(per_point.into_iter().flatten().collect())
}

fn bounds(config: &RunConfig) -> Result<Outcome> {
    format(config, &[Format::Json], Format::Json)?;
    let degrees = config.n.map_or(BOUNDS_DEGREES.to_vec(), |n| vec![n]);
    let grid_spec = config.grid.unwrap_or(EVAL_GRID);
    let truncation = config
        .truncation
        .unwrap_or(Truncation::TailTol(OperatorConfig::DEFAULT_TAIL_TOL));
    let params = config.params;
    let records = bound_records(
        &degrees,
        |n| {
            Ok(match params {
                ParamSource::Pair(p) => vec![p],
                ParamSource::Scheme(s) => vec![s.params(n)?],
                ParamSource::Unspecified => BOUNDS_PAIRS
                    .iter()
                    .map(|&(p, q)| PQParams::new(p, q))
                    .collect::<pqmkz::Result<_>>()?,
            })
        },
        &grid_spec.grid()?,
        truncation,
    )?;
    let failed = records.iter().filter(|r| !r.holds).count();

    #[derive(Serialize)]
    struct Summary {
        total: usize,
        passed: usize,
        failed: usize,
    }
    #[derive(Serialize)]
    struct Doc {
        #[serde(flatten)]
        header: RunHeader,
        degrees: Vec<u32>,
        summary: Summary,
        records: Vec<BoundRecord>,
    }
    let op = operator_config(config, degrees[0], truncation)?;
    let mut header = RunHeader::new(config.command)
        .truncation(&op)
        .grid(grid_spec);
    if let ParamSource::Scheme(s) = &params {
        header = header.scheme(s);
    }
    let doc = Doc {
        header,
        degrees,
        summary: Summary {
            total: records.len(),
            passed: records.len() - failed,
            failed,
        },
        records,
    };
    Ok(Outcome::single(json_document(&doc)?, failed == 0))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub(crate) struct ConvergeRow {
    pub n: u32,
    pub p: f64,
    pub q: f64,
    pub sup_error: f64,
    pub max_alpha: f64,
    pub max_delta: f64,
    /// Smallest `C` making the ω₂/ω error bound hold on the whole grid.
    pub min_constant: f64,
    pub holds_at_c: bool,
}

pub(crate) fn converge_row(
    f: &Function1D,
    scheme: &SeqScheme,
    op: &OperatorConfig,
    grid: &UniformGrid,
    c: f64,
) -> Result<ConvergeRow> {
    let params = scheme.params(op.n)?;
    let sup = sup_error(f, scheme, op, grid)?;
    let xs: Vec<f64> = grid.iter().collect();
    let per_point = xs
        .par_iter()
        .map(|&x| {
            let check = error_bound_check(f, x, scheme, op, c, ModulusGrid::default())?;
            Ok((
                alpha_n(op.n, x, scheme)?.abs(),
                delta_n(x, scheme, op)?,
                check,
            ))
        })
        .collect::<pqmkz::Result<Vec<_>>>()?;
    let mut row = ConvergeRow {
        n: op.n,
        p: params.p(),
        q: params.q(),
        sup_error: sup,
        max_alpha: 0.0,
        max_delta: 0.0,
        min_constant: 0.0,
        holds_at_c: true,
    };
    for (alpha, delta, check) in per_point {
        row.max_alpha = row.max_alpha.max(alpha);
        row.max_delta = row.max_delta.max(delta);
        row.min_constant = row.min_constant.max(check.min_constant);
        row.holds_at_c &= check.holds;
    }
    Ok(row)
}

fn converge(config: &RunConfig) -> Result<Outcome> {
    let format = format(config, &[Format::Csv, Format::Json], Format::Csv)?;
    let scheme = scheme(config)?;
    let start = config.n.unwrap_or(CONVERGE_START);
    let spec = config
        .function
        .clone()
        .unwrap_or_else(|| FunctionSpec::Named("e2".into()));
    let f = spec.function();
    let grid_spec = config.grid.unwrap_or(CONVERGE_GRID);
    let grid = grid_spec.grid()?;
    let c = config.c.unwrap_or(1.0);
    let mut rows = Vec::new();
    let mut op = operator_config(
        config,
        start,
        Truncation::TailTol(OperatorConfig::DEFAULT_TAIL_TOL),
    )?;
    for step in 0..CONVERGE_STEPS {
        let n = start
            .checked_mul(1 << step)
            .ok_or_else(|| anyhow::anyhow!("degree ladder from {start} overflows"))?;
        op = op.with_n(n);
        rows.push(converge_row(&f, &scheme, &op, &grid, c)?);
    }
    let contents = match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                #[serde(flatten)]
                header: RunHeader,
                function: String,
                #[serde(rename = "C")]
                c: f64,
                rows: &'a [ConvergeRow],
            }
            let header = RunHeader::new(config.command)
                .truncation(&op)
                .scheme(&scheme)
                .grid(grid_spec);
            json_document(&Doc {
                header,
                function: spec.label(),
                c,
                rows: &rows,
            })?
        }
        _ => {
            let records: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        num(r.p),
                        num(r.q),
                        num(r.sup_error),
                        num(r.max_alpha),
                        num(r.max_delta),
                        num(r.min_constant),
                        r.holds_at_c.to_string(),
                    ]
                })
                .collect();
            csv_document(
                &[
                    "n",
                    "p",
                    "q",
                    "sup_error",
                    "max_alpha",
                    "max_delta",
                    "min_constant",
                    "holds_at_C",
                ],
                &records,
            )?
        }
    };
    Ok(Outcome::single(contents, true))
}

fn file_stem(label: &str) -> String {
    label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '.' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn figures(config: &RunConfig) -> Result<Outcome> {
    format(config, &[Format::Csv], Format::Csv)?;
    let n = config.n.unwrap_or(FIGURE_N);
    let params = fixed_params(config, n)?;
    let op = operator_config(config, n, Truncation::FixedK(FIGURE_K))?;
    let grid_spec = config.grid.unwrap_or(FIGURE_GRID);
    let grid = grid_spec.grid()?;
    let specs: Vec<FunctionSpec> = match &config.function {
        Some(spec) => vec![spec.clone()],
        None => FIGURE_FUNCTIONS
            .iter()
            .map(|s| FunctionSpec::Named((*s).into()))
            .collect(),
    };

    #[derive(Serialize)]
    struct FunctionEntry {
        name: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        coefficients: Option<Vec<f64>>,
        csv: String,
        svg: String,
    }
    let mut artifacts = Vec::new();
    let mut entries = Vec::new();
    for spec in &specs {
        let label = spec.label();
        let stem = file_stem(&label);
        let rows = evaluate(&spec.function(), &grid, params, &op)?;
        let records: Vec<Vec<String>> = rows
            .iter()
            .map(|r| [r.x, r.f, r.mtilde, r.abs_error].map(num).to_vec())
            .collect();
        let csv_name = format!("{stem}.csv");
        let svg_name = format!("{stem}.svg");
        artifacts.push(Artifact {
            name: Some(csv_name.clone()),
            contents: csv_document(&["x", "f", "Mtilde", "abs_error"], &records)?,
        });
        artifacts.push(Artifact {
            name: Some(svg_name.clone()),
            contents: overlay(&label, n, params, &rows),
        });
        entries.push(FunctionEntry {
            name: label,
            coefficients: spec.coefficients(),
            csv: csv_name,
            svg: svg_name,
        });
    }

    #[derive(Serialize)]
    struct Manifest {
        #[serde(flatten)]
        header: RunHeader,
        functions: Vec<FunctionEntry>,
    }
    let mut header = RunHeader::new(config.command)
        .operator(&op)
        .params(params)
        .grid(grid_spec);
    if let ParamSource::Scheme(s) = &config.params {
        header = header.scheme(s);
    }
    artifacts.push(Artifact {
        name: Some("manifest.json".into()),
        contents: json_document(&Manifest {
            header,
            functions: entries,
        })?,
    });
    Ok(Outcome {
        artifacts,
        success: true,
    })
}

/// `(name, limit, n ↦ x_n)`
pub(crate) type Sequence = (&'static str, f64, Box<dyn Fn(u64) -> f64>);

/// The four scheme sequences with their limits.
pub(crate) fn stat_sequences(scheme: SeqScheme) -> [Sequence; 4] {
    [
        ("q_n", 1.0, Box::new(move |n| scheme.q_n(n))),
        ("p_n", 1.0, Box::new(move |n| scheme.p_n(n))),
        (
            "p_n^n",
            scheme.a(),
            Box::new(move |n| scheme.p_n(n).powf(n as f64)),
        ),
        (
            "q_n^n",
            scheme.b(),
            Box::new(move |n| scheme.q_n(n).powf(n as f64)),
        ),
    ]
}

fn statdemo(config: &RunConfig) -> Result<Outcome> {
    let format = format(config, &[Format::Csv, Format::Json], Format::Csv)?;
    let scheme = scheme(config)?;
    let n_max = config.n.map_or(STAT_N, u64::from);
    let eps = config.eps.unwrap_or(STAT_EPS);

    #[derive(Serialize)]
    struct Row {
        sequence: &'static str,
        limit: f64,
        eps: f64,
        checkpoint_n: u64,
        violators: u64,
        density: f64,
        value: f64,
    }
    let mut rows = Vec::new();
    for (name, limit, seq) in stat_sequences(scheme) {
        let report = st_convergence_check(&seq, limit, eps, n_max)?;
        for &(checkpoint, density) in &report.profile {
            rows.push(Row {
                sequence: name,
                limit,
                eps,
                checkpoint_n: checkpoint,
                violators: (density * checkpoint as f64).round() as u64,
                density,
                value: seq(checkpoint),
            });
        }
    }
    let contents = match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                #[serde(flatten)]
                header: RunHeader,
                n_max: u64,
                rows: &'a [Row],
            }
            let header = RunHeader::new(config.command).scheme(&scheme);
            json_document(&Doc {
                header,
                n_max,
                rows: &rows,
            })?
        }
        _ => {
            let records: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.sequence.to_string(),
                        num(r.limit),
                        num(r.eps),
                        r.checkpoint_n.to_string(),
                        r.violators.to_string(),
                        num(r.density),
                        num(r.value),
                    ]
                })
                .collect();
            csv_document(
                &[
                    "sequence",
                    "limit",
                    "eps",
                    "checkpoint_n",
                    "violators",
                    "density",
                    "value",
                ],
                &records,
            )?
        }
    };
    Ok(Outcome::single(contents, true))
}
