//! Built-in checks behind `--self-test`. Every command reports at least one
//! identity, one reference-value check and one cross-check against an
//! independent evaluation route, all at fixed settings.

use anyhow::Result;
use pqmkz::{
    apply, apply_polynomial, apply_quadrature, central_moment, lemma2_lhs, lemma2_rhs,
    natural_density, st_convergence_check, sup_error, theorem1_bounds, theorem53_check, Function1D,
    ModulusGrid, OperatorConfig, PQParams, SeqScheme, UniformGrid,
};

use crate::commands::{evaluate, stat_sequences, FIGURE_GRID, FIGURE_K, FIGURE_N};
use crate::config::{CommandKind, RunConfig};
use crate::output::{csv_document, num, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    /// Holds by construction.
    Identity,
    /// A closed-form value or inequality the operator is known to satisfy.
    Reference,
    /// Agreement with a separately computed value.
    Oracle,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Self::Identity => "identity",
            Self::Reference => "reference",
            Self::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Relation {
    /// `|value - expected| <= tolerance`
    Near,
    /// `value <= expected + tolerance`
    AtMost,
    /// `value >= expected - tolerance`
    AtLeast,
}

struct Check {
    name: &'static str,
    kind: Kind,
    relation: Relation,
    value: f64,
    expected: f64,
    tolerance: f64,
}

impl Check {
    fn new(
        name: &'static str,
        kind: Kind,
        relation: Relation,
        value: f64,
        expected: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            name,
            kind,
            relation,
            value,
            expected,
            tolerance,
        }
    }

    fn passes(&self) -> bool {
        match self.relation {
            Relation::Near => (self.value - self.expected).abs() <= self.tolerance,
            Relation::AtMost => self.value <= self.expected + self.tolerance,
            Relation::AtLeast => self.value >= self.expected - self.tolerance,
        }
    }
}

fn relative(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn pair() -> Result<PQParams> {
    Ok(PQParams::new(0.95, 0.9)?)
}

fn quadratic() -> Function1D {
    Function1D::figure_functions()[0].clone()
}

pub(crate) fn run(config: &RunConfig) -> Result<Outcome> {
    let checks = match config.command {
        CommandKind::Eval => eval_checks()?,
        CommandKind::Moments => moment_checks()?,
        CommandKind::Bounds => bound_checks()?,
        CommandKind::Converge => converge_checks()?,
        CommandKind::Figures => figure_checks()?,
        CommandKind::Statdemo => stat_checks()?,
    };
    let success = checks.iter().all(Check::passes);
    let rows: Vec<Vec<String>> = checks
        .iter()
        .map(|c| {
            vec![
                config.command.name().to_string(),
                c.name.to_string(),
                c.kind.name().to_string(),
                match c.relation {
                    Relation::Near => "~",
                    Relation::AtMost => "<=",
                    Relation::AtLeast => ">=",
                }
                .to_string(),
                num(c.value),
                num(c.expected),
                num(c.tolerance),
                c.passes().to_string(),
            ]
        })
        .collect();
    let doc = csv_document(
        &[
            "command",
            "check",
            "kind",
            "relation",
            "value",
            "expected",
            "tolerance",
            "pass",
        ],
        &rows,
    )?;
    Ok(Outcome::single(doc, success))
}

fn eval_checks() -> Result<Vec<Check>> {
    let params = pair()?;
    let op = OperatorConfig::new(25);
    let f = quadratic();
    let e0 = apply(&Function1D::monomial(0), 0.5, params, &op)?.value;
    let fast = apply(&f, 0.0, params, &op)?.value;
    let slow = apply_quadrature(&f, 0.0, params, &op)?.value;
    Ok(vec![
        Check::new(
            "quadratic(0) = 8/15",
            Kind::Identity,
            Relation::Near,
            f.eval(0.0),
            8.0 / 15.0,
            1e-15,
        ),
        Check::new(
            "M(e0; 0.5) = 1",
            Kind::Reference,
            Relation::Near,
            e0,
            1.0,
            1e-9,
        ),
        Check::new(
            "M(quadratic; 0) closed form vs quadrature",
            Kind::Oracle,
            Relation::Near,
            relative(fast, slow),
            0.0,
            1e-8,
        ),
    ])
}

fn moment_checks() -> Result<Vec<Check>> {
    let params = pair()?;
    let op = OperatorConfig::new(10);
    let psi2 = central_moment(2, 0.5, params, &op)?;
    let e1 = theorem1_bounds(1, 0.5, params, &op)?;
    let e2 = Function1D::monomial(2);
    let fast = apply(&e2, 0.3, params, &op)?.value;
    let slow = apply_quadrature(&e2, 0.3, params, &op)?.value;
    Ok(vec![
        Check::new(
            "M((t-x)^2; 0.5) >= 0",
            Kind::Identity,
            Relation::AtLeast,
            psi2,
            0.0,
            0.0,
        ),
        Check::new(
            "M(e1; 0.5) below its upper bound",
            Kind::Reference,
            Relation::AtMost,
            e1.actual,
            e1.upper,
            1e-12,
        ),
        Check::new(
            "M(e1; 0.5) above its lower bound",
            Kind::Reference,
            Relation::AtLeast,
            e1.actual,
            e1.lower,
            1e-12,
        ),
        Check::new(
            "M(e2; 0.3) closed form vs quadrature",
            Kind::Oracle,
            Relation::Near,
            relative(fast, slow),
            0.0,
            1e-8,
        ),
    ])
}

fn bound_checks() -> Result<Vec<Check>> {
    let params = pair()?;
    let op = OperatorConfig::new(10);
    let x = 0.4;
    let e1 = apply(&Function1D::monomial(1), x, params, &op)?.value;
    let psi1 = central_moment(1, x, params, &op)?;
    let e2 = theorem1_bounds(2, x, params, &op)?;
    let lhs = lemma2_lhs(2, 0.5, params, &OperatorConfig::new(8))?;
    let rhs = lemma2_rhs(8, 2, 0.5, params)?;
    Ok(vec![
        Check::new(
            "M(t-x; x) = M(e1; x) - x",
            Kind::Identity,
            Relation::Near,
            psi1,
            e1 - x,
            1e-12,
        ),
        Check::new(
            "M(e2; 0.4) below its upper bound",
            Kind::Reference,
            Relation::AtMost,
            e2.actual,
            e2.upper,
            1e-12,
        ),
        Check::new(
            "weighted reciprocal sum vs closed form",
            Kind::Oracle,
            Relation::Near,
            relative(lhs, rhs),
            0.0,
            1e-6,
        ),
    ])
}

fn converge_checks() -> Result<Vec<Check>> {
    let scheme = SeqScheme::default();
    let op = OperatorConfig::new(25);
    let grid = UniformGrid::new(0.0, 0.99, 34)?;
    let constant = sup_error(&Function1D::constant(1.0), &scheme, &op, &grid)?;
    let t53 = theorem53_check(&quadratic(), 0.5, &scheme, &op, ModulusGrid::default())?;
    let ladder = UniformGrid::new(0.0, 0.9, 10)?;
    let e2 = Function1D::monomial(2);
    let op10 = OperatorConfig::new(10);
    let params = scheme.params(10)?;
    let closed = sup_error(&e2, &scheme, &op10, &ladder)?;
    let mut quadrature: f64 = 0.0;
    for x in ladder.iter() {
        quadrature = quadrature.max((apply_quadrature(&e2, x, params, &op10)?.value - x * x).abs());
    }
    Ok(vec![
        Check::new(
            "sup |M(1) - 1|",
            Kind::Identity,
            Relation::AtMost,
            constant,
            0.0,
            1e-10,
        ),
        Check::new(
            "|M(f; 0.5) - f(0.5)| vs 2 omega(f, sqrt(delta))",
            Kind::Reference,
            Relation::AtMost,
            t53.lhs,
            t53.rhs,
            1e-12,
        ),
        Check::new(
            "sup error of e2 at n = 10: closed form vs quadrature",
            Kind::Oracle,
            Relation::Near,
            relative(closed, quadrature),
            0.0,
            1e-8,
        ),
    ])
}

fn figure_checks() -> Result<Vec<Check>> {
    let params = pair()?;
    let grid = FIGURE_GRID.grid()?;
    let fixed = OperatorConfig::new(FIGURE_N).with_fixed_last_index(FIGURE_K);
    let rows = evaluate(&quadratic(), &grid, params, &fixed)?;
    let min_error = rows
        .iter()
        .map(|r| r.abs_error)
        .fold(f64::INFINITY, f64::min);
    let tail = OperatorConfig::new(FIGURE_N);
    let ones = evaluate(&Function1D::monomial(0), &grid, params, &tail)?;
    let worst = ones
        .iter()
        .map(|r| (r.mtilde - 1.0).abs())
        .fold(0.0, f64::max);
    let poly = quadratic();
    let fast = apply_polynomial(poly.as_polynomial().unwrap(), 0.25, params, &fixed)?.value;
    let slow = apply_quadrature(&poly, 0.25, params, &fixed)?.value;
    Ok(vec![
        Check::new(
            "min abs_error >= 0",
            Kind::Identity,
            Relation::AtLeast,
            min_error,
            0.0,
            0.0,
        ),
        Check::new(
            "max |M(e0) - 1| over the figure grid",
            Kind::Reference,
            Relation::AtMost,
            worst,
            0.0,
            1e-9,
        ),
        Check::new(
            "M(quadratic; 0.25), K=150: closed form vs quadrature",
            Kind::Oracle,
            Relation::Near,
            relative(fast, slow),
            0.0,
            1e-8,
        ),
    ])
}

fn stat_checks() -> Result<Vec<Check>> {
    let scheme = SeqScheme::default();
    let n_max = 10_000u64;
    let empty = natural_density(|_| false, n_max)?.density;
    let [q_seq, _, p_pow, _] = stat_sequences(scheme);
    // 1 - q_n = 1/(c_q n) >= eps  <=>  n <= 1/(c_q eps); eps keeps clear of integer cut-offs
    let off_grid = 0.003;
    let qn = st_convergence_check(&q_seq.2, q_seq.1, off_grid, n_max)?;
    let count = (1.0 / (scheme.c_q() * off_grid)).floor().min(n_max as f64);
    Ok(vec![
        Check::new(
            "density of the empty set",
            Kind::Identity,
            Relation::Near,
            empty,
            0.0,
            0.0,
        ),
        Check::new(
            "p_n^n at n = 10^4 vs exp(-1/c_p)",
            Kind::Reference,
            Relation::Near,
            (p_pow.2)(n_max),
            (-1.0 / scheme.c_p()).exp(),
            1e-3,
        ),
        Check::new(
            "q_n violator density vs counted closed form",
            Kind::Oracle,
            Relation::Near,
            qn.density,
            count / n_max as f64,
            1e-15,
        ),
    ])
}
